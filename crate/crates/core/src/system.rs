use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// An `r x m` integer system `A x = 0` with its rank cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    matrix: IntMatrix,
    rank: usize,
    name: Option<String>,
}

impl LinearSystem {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if matrix.cols() == 0 {
            return Err(Error::NoColumns);
        }
        let rank = matrix.rank();
        Ok(Self { matrix, rank, name: None })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(rows))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Number of equations `r`.
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    /// Number of unknowns `m`.
    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// `A * 1 = 0`.
    pub fn is_invariant(&self) -> bool {
        (0..self.rows()).all(|i| self.matrix.row(i).iter().sum::<BigInt>().is_zero())
    }

    /// Rank of the submatrix on the given columns.
    pub fn rank_of_columns(&self, cols: &ColumnSet) -> usize {
        self.matrix.select_columns(cols.indices()).rank()
    }

    /// A maximal set of independent rows, chosen greedily top to bottom.
    pub fn row_basis(&self) -> LinearSystem {
        let deps = self.matrix.row_dependencies();
        let matrix = self.matrix.select_rows(&deps.independent);
        Self { matrix, rank: self.rank, name: self.name.clone() }
    }

    pub fn is_solution(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.matrix.mul_vec(x)?.iter().all(Zero::is_zero))
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => write!(f, "{n} {}", self.matrix),
            None => write!(f, "{}", self.matrix),
        }
    }
}

/// A set `Q` of column indices. Indices are 0-based and kept sorted; the
/// display form is 1-based, `{1,2,3}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColumnSet {
    indices: Vec<usize>,
}

impl ColumnSet {
    pub fn new(mut indices: Vec<usize>, cols: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= cols) {
            return Err(Error::IndexOutOfRange { index: bad, cols });
        }
        Ok(Self { indices })
    }

    /// From 1-based indices, as written by humans.
    pub fn from_one_based(indices: &[usize], cols: usize) -> Result<Self> {
        let zero_based = indices
            .iter()
            .map(|&i| i.checked_sub(1).ok_or(Error::IndexOutOfRange { index: 0, cols }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(zero_based, cols)
    }

    pub fn empty() -> Self {
        Self { indices: Vec::new() }
    }

    pub fn all(cols: usize) -> Self {
        Self { indices: (0..cols).collect() }
    }

    pub fn from_mask(mask: u64, cols: usize) -> Self {
        Self { indices: (0..cols).filter(|&i| mask >> i & 1 == 1).collect() }
    }

    pub fn mask(&self) -> u64 {
        self.indices.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn complement(&self, cols: usize) -> ColumnSet {
        Self { indices: (0..cols).filter(|&i| !self.contains(i)).collect() }
    }
}

impl fmt::Display for ColumnSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_set_basics() {
        let q = ColumnSet::from_one_based(&[3, 1], 4).unwrap();
        assert_eq!(q.indices(), &[0, 2]);
        assert_eq!(q.to_string(), "{1,3}");
        assert_eq!(q.complement(4).indices(), &[1, 3]);
        assert_eq!(ColumnSet::from_mask(q.mask(), 4), q);
        assert!(ColumnSet::new(vec![4], 4).is_err());
        assert!(ColumnSet::from_one_based(&[0], 4).is_err());
    }

    #[test]
    fn invariance() {
        assert!(LinearSystem::from_i64(&[&[1, 1, -2]]).unwrap().is_invariant());
        assert!(!LinearSystem::from_i64(&[&[1, 1, -1]]).unwrap().is_invariant());
        assert_eq!(LinearSystem::from_i64(&[&[]]).unwrap_err(), Error::NoColumns);
    }
}
