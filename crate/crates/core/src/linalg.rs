//! Exact integer and rational matrix kernel.
//!
//! Everything here is exact. Elimination is fraction-free over the integers
//! (Bareiss for rank, gcd-normalised Gauss-Jordan for echelon forms);
//! rationals only show up when a kernel vector or a combination
//! coefficient is read off at the end.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major integer matrix. Zero rows and zero columns are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    /// The `0 x cols` matrix.
    pub fn empty(cols: usize) -> Self {
        Self { rows: 0, cols, data: Vec::new() }
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let r = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Self { rows: r, cols, data })
    }

    /// Convenience constructor from machine integers. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        Self::from_rows(cols, rows).expect("ragged rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Keeps the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                data.push(self.get(i, j).clone());
            }
        }
        IntMatrix { rows: self.rows, cols: cols.len(), data }
    }

    /// Keeps the listed rows, in the listed order.
    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        IntMatrix { rows: rows.len(), cols: self.cols, data }
    }

    pub fn with_row(&self, row: &[BigInt]) -> Result<IntMatrix> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: row.len() });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(row);
        Ok(IntMatrix { rows: self.rows + 1, cols: self.cols, data })
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        IntMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// `M * x`.
    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Exact rank over Q by Bareiss fraction-free elimination.
    pub fn rank(&self) -> usize {
        bareiss_rank(self.rows, self.cols, self.data.clone())
    }

    /// Basis of `{x : M x = 0}` over Q. Each vector has coprime integer
    /// entries with its first nonzero entry positive.
    pub fn kernel_basis(&self) -> Vec<RationalVector> {
        self.integer_kernel_basis()
            .into_iter()
            .map(|v| RationalVector::from_integers(&v))
            .collect()
    }

    /// Same basis as [`kernel_basis`](Self::kernel_basis) as integer vectors.
    pub fn integer_kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let rref = IntegerRref::of(self);
        let free: Vec<usize> = (0..self.cols).filter(|c| !rref.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                // x_f = 1, x_p = -R[k][f] / d_k; clear denominators afterwards.
                let mut v: Vec<BigRational> = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for (k, &p) in rref.pivots.iter().enumerate() {
                    let row = &rref.rows[k];
                    v[p] = BigRational::new(-row[f].clone(), row[p].clone());
                }
                RationalVector(v).to_primitive_integers()
            })
            .collect()
    }

    /// Whether `v` lies in the rational row space.
    pub fn rowspace_contains(&self, v: &RationalVector) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        let target = v.to_primitive_integers();
        let mut basis = RowBasis::new(self.cols, self.rows);
        for i in 0..self.rows {
            basis.insert(self.row(i).to_vec(), None);
        }
        Ok(basis.reduce(target).0.iter().all(Zero::is_zero))
    }

    /// Greedy row dependency extraction: rows are scanned top to bottom and a
    /// row is dependent when it lies in the span of the independent rows seen
    /// before it.
    pub fn row_dependencies(&self) -> RowDependencies {
        let mut basis = RowBasis::new(self.cols, self.rows);
        let mut independent = Vec::new();
        let mut dependent = Vec::new();
        for i in 0..self.rows {
            match basis.insert(self.row(i).to_vec(), Some(i)) {
                None => independent.push(i),
                Some(combo) => {
                    // combo . rows = 0 with combo[i] != 0.
                    let mut scale = combo[i].clone();
                    let mut coefficients: Vec<(usize, BigInt)> = independent
                        .iter()
                        .filter(|&&j| !combo[j].is_zero())
                        .map(|&j| (j, -combo[j].clone()))
                        .collect();
                    if scale.is_negative() {
                        scale = -scale;
                        for (_, c) in &mut coefficients {
                            *c = -c.clone();
                        }
                    }
                    dependent.push(Dependency { row: i, scale, coefficients });
                }
            }
        }
        RowDependencies { independent, dependent }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

fn bareiss_rank(rows: usize, cols: usize, mut a: Vec<BigInt>) -> usize {
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i * cols + col].is_zero()) else {
            continue;
        };
        if p != rank {
            for j in 0..cols {
                a.swap(p * cols + j, rank * cols + j);
            }
        }
        let pivot = a[rank * cols + col].clone();
        for i in rank + 1..rows {
            let lead = a[i * cols + col].clone();
            for j in col + 1..cols {
                let v = (&pivot * &a[i * cols + j] - &lead * &a[rank * cols + j]) / &prev;
                a[i * cols + j] = v;
            }
            a[i * cols + col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Divides by the gcd of all entries. Returns the gcd (zero for a zero vector).
pub(crate) fn make_primitive(v: &mut [BigInt]) -> BigInt {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    g
}

/// Rational vector in canonical form (each entry reduced, positive denominator).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn from_integers(v: &[BigInt]) -> Self {
        Self(v.iter().map(|x| BigRational::from_integer(x.clone())).collect())
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Self(v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Scales to coprime integers with the first nonzero entry positive.
    pub fn to_primitive_integers(&self) -> Vec<BigInt> {
        let lcm = self.0.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let mut v: Vec<BigInt> = self.0.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        make_primitive(&mut v);
        if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
        v
    }
}

/// One dependent row: `scale * row = sum coefficients[j] * row_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dependency {
    pub row: usize,
    pub scale: BigInt,
    pub coefficients: Vec<(usize, BigInt)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowDependencies {
    pub independent: Vec<usize>,
    pub dependent: Vec<Dependency>,
}

impl RowDependencies {
    pub fn dependent_rows(&self) -> Vec<usize> {
        self.dependent.iter().map(|d| d.row).collect()
    }
}

/// Incrementally reduced row basis, optionally tracking each basis row as an
/// integer combination of the original rows.
struct RowBasis {
    cols: usize,
    track_len: usize,
    rows: Vec<(usize, Vec<BigInt>, Vec<BigInt>)>,
}

impl RowBasis {
    fn new(cols: usize, track_len: usize) -> Self {
        Self { cols, track_len, rows: Vec::new() }
    }

    fn reduce(&self, mut v: Vec<BigInt>) -> (Vec<BigInt>, Vec<BigInt>) {
        let mut t = vec![BigInt::zero(); self.track_len];
        self.reduce_tracked(&mut v, &mut t);
        (v, t)
    }

    fn reduce_tracked(&self, v: &mut [BigInt], t: &mut [BigInt]) {
        for (pc, row, track) in &self.rows {
            if v[*pc].is_zero() {
                continue;
            }
            let a = row[*pc].clone();
            let b = v[*pc].clone();
            for j in 0..self.cols {
                v[j] = &a * &v[j] - &b * &row[j];
            }
            for j in 0..self.track_len {
                t[j] = &a * &t[j] - &b * &track[j];
            }
            let g = v.iter().chain(t.iter()).fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                v.iter_mut().chain(t.iter_mut()).for_each(|x| *x /= &g);
            }
        }
    }

    /// Inserts `v`. Returns `None` if it extended the basis, or the relation
    /// vector `c` with `sum c_j row_j = 0` if `v` was dependent.
    fn insert(&mut self, mut v: Vec<BigInt>, index: Option<usize>) -> Option<Vec<BigInt>> {
        let mut t = vec![BigInt::zero(); self.track_len];
        if let Some(i) = index {
            t[i] = BigInt::one();
        }
        self.reduce_tracked(&mut v, &mut t);
        match v.iter().position(|x| !x.is_zero()) {
            None => Some(t),
            Some(pc) => {
                self.rows.push((pc, v, t));
                None
            }
        }
    }
}

/// Fully reduced integer echelon form: pivot columns are zero outside their
/// pivot row, every row is primitive, and pivots are positive.
#[derive(Clone, Debug)]
pub struct IntegerRref {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

impl IntegerRref {
    pub fn of(m: &IntMatrix) -> Self {
        Self::of_rows(m.cols, m.row_vecs())
    }

    /// Reduces `rows` (each of length >= `pivot_limit`) choosing pivots only
    /// among the first `pivot_limit` columns. Zero rows in that range are
    /// kept at the bottom when they are nonzero elsewhere, so an augmented
    /// inconsistent row survives.
    pub fn of_rows(pivot_limit: usize, mut rows: Vec<Vec<BigInt>>) -> Self {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..pivot_limit {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            if rows[r][col].is_negative() {
                rows[r].iter_mut().for_each(|x| *x = -x.clone());
            }
            make_primitive(&mut rows[r]);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[col].is_zero() {
                    continue;
                }
                let a = pivot_row[col].clone();
                let b = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = &a * &*x - &b * y;
                }
                make_primitive(row);
            }
            pivots.push(col);
            r += 1;
        }
        for row in rows.iter_mut().skip(r) {
            make_primitive(row);
        }
        rows.retain(|row| row.iter().any(|x| !x.is_zero()));
        Self { rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}
