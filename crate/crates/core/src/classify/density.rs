use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::system::{ColumnSet, LinearSystem};

/// Largest `m` for which densities enumerate all `2^m` column subsets.
pub const DEFAULT_DENSITY_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DensityKind {
    /// `m_1(A) = max_{|Q| >= 2} (|Q| - 1) / (|Q| - r_Q - 1)`.
    MaxOneDensity,
    /// `m(A) = max_{Q != {}} |Q| / (|Q| - r_Q)`.
    MaxDensity,
}

impl DensityKind {
    pub fn ratio(self, size: usize, r_q: usize) -> Option<BigRational> {
        let (num, den) = match self {
            DensityKind::MaxOneDensity => (size as i64 - 1, size as i64 - r_q as i64 - 1),
            DensityKind::MaxDensity => (size as i64, size as i64 - r_q as i64),
        };
        (den > 0).then(|| BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
}

impl fmt::Display for DensityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DensityKind::MaxOneDensity => "m1",
            DensityKind::MaxDensity => "m",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub kind: DensityKind,
    pub value: BigRational,
    pub witness: ColumnSet,
}

/// `r_Q = rank(A) - rank(A restricted to the complement of Q)`.
pub fn r_q(a: &LinearSystem, q: &ColumnSet) -> Result<usize> {
    if let Some(&bad) = q.indices().iter().find(|&&i| i >= a.cols()) {
        return Err(Error::IndexOutOfRange { index: bad, cols: a.cols() });
    }
    Ok(a.rank() - a.rank_of_columns(&q.complement(a.cols())))
}

pub fn max_one_density(a: &LinearSystem) -> Result<DensityReport> {
    ComplementRanks::compute(a, DEFAULT_DENSITY_CAP)?.max_one_density()
}

pub fn max_density(a: &LinearSystem) -> Result<DensityReport> {
    ComplementRanks::compute(a, DEFAULT_DENSITY_CAP)?.max_density()
}

/// `r_Q` for every column subset, indexed by bitmask.
#[derive(Clone, Debug)]
pub struct ComplementRanks {
    cols: usize,
    r_q: Vec<u32>,
}

impl ComplementRanks {
    pub fn compute(a: &LinearSystem, cap: usize) -> Result<Self> {
        let m = a.cols();
        if m > cap {
            return Err(Error::CapExceeded { what: "subset enumeration", m, cap });
        }
        let full = (1u64 << m) - 1;
        let r_q = (0..=full)
            .map(|mask| {
                let complement = ColumnSet::from_mask(full & !mask, m);
                (a.rank() - a.rank_of_columns(&complement)) as u32
            })
            .collect();
        Ok(Self { cols: m, r_q })
    }

    pub fn r_q(&self, q: &ColumnSet) -> usize {
        self.r_q[q.mask() as usize] as usize
    }

    pub fn r_q_mask(&self, mask: u64) -> usize {
        self.r_q[mask as usize] as usize
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn max_one_density(&self) -> Result<DensityReport> {
        self.maximise(DensityKind::MaxOneDensity, 2)
    }

    pub fn max_density(&self) -> Result<DensityReport> {
        self.maximise(DensityKind::MaxDensity, 1)
    }

    /// Ties go to the smallest `|Q|`, then the lexicographically smallest `Q`.
    fn maximise(&self, kind: DensityKind, min_size: usize) -> Result<DensityReport> {
        let mut best: Option<(BigRational, ColumnSet)> = None;
        let mut ill_defined: Option<ColumnSet> = None;
        for mask in 1..self.r_q.len() as u64 {
            let size = mask.count_ones() as usize;
            if size < min_size {
                continue;
            }
            let q = ColumnSet::from_mask(mask, self.cols);
            let Some(value) = kind.ratio(size, self.r_q_mask(mask)) else {
                if ill_defined.as_ref().is_none_or(|w| witness_order(&q, w) == Ordering::Less) {
                    ill_defined = Some(q);
                }
                continue;
            };
            let better = match &best {
                None => true,
                Some((v, w)) => match value.cmp(v) {
                    Ordering::Greater => true,
                    Ordering::Equal => witness_order(&q, w) == Ordering::Less,
                    Ordering::Less => false,
                },
            };
            if better {
                best = Some((value, q));
            }
        }
        let what = match kind {
            DensityKind::MaxOneDensity => "maximum 1-density",
            DensityKind::MaxDensity => "maximum density",
        };
        if let Some(witness) = ill_defined {
            return Err(Error::IllDefined { what, witness });
        }
        let (value, witness) = best.ok_or_else(|| {
            Error::InvalidArgument(format!("{what} needs at least {min_size} columns"))
        })?;
        Ok(DensityReport { kind, value, witness })
    }
}

fn witness_order(a: &ColumnSet, b: &ColumnSet) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.indices().cmp(b.indices()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(rows: &[&[i64]]) -> LinearSystem {
        LinearSystem::from_i64(rows).unwrap()
    }

    fn q(idx: &[usize], m: usize) -> ColumnSet {
        ColumnSet::from_one_based(idx, m).unwrap()
    }

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn r_q_examples() {
        let schur = sys(&[&[1, 1, -1]]);
        assert_eq!(r_q(&schur, &q(&[1, 2, 3], 3)).unwrap(), 1);
        assert_eq!(r_q(&schur, &ColumnSet::empty()).unwrap(), 0);
        for i in 1..=3 {
            assert_eq!(r_q(&schur, &q(&[i], 3)).unwrap(), 0);
        }
    }

    #[test]
    fn max_one_density_examples() {
        let d = max_one_density(&sys(&[&[1, 1, -1]])).unwrap();
        assert_eq!((d.value, d.witness), (frac(2, 1), q(&[1, 2, 3], 3)));
        let d = max_one_density(&sys(&[&[1, 1, -1, -1]])).unwrap();
        assert_eq!((d.value, d.witness), (frac(3, 2), q(&[1, 2, 3, 4], 4)));
        let d = max_one_density(&sys(&[&[1, -2, 1, 0], &[0, 1, -2, 1]])).unwrap();
        assert_eq!(d.value, frac(3, 1));
    }

    #[test]
    fn max_one_density_ill_defined() {
        // (1 -1): Q = [2] has |Q| - r_Q - 1 = 0
        let err = max_one_density(&sys(&[&[1, -1]])).unwrap_err();
        assert_eq!(err, Error::IllDefined { what: "maximum 1-density", witness: q(&[1, 2], 2) });
    }

    #[test]
    fn max_density_examples() {
        let d = max_density(&sys(&[&[1, 1, -1]])).unwrap();
        assert_eq!((d.value, d.witness), (frac(3, 2), q(&[1, 2, 3], 3)));
        assert_eq!(max_density(&sys(&[&[1, 1, -1, -1]])).unwrap().value, frac(4, 3));
        for (a, b) in [(1, 1), (2, 3), (5, 7)] {
            let d = max_density(&sys(&[&[a, -b]])).unwrap();
            assert_eq!((d.value, d.witness), (frac(2, 1), q(&[1, 2], 2)));
        }
        assert!(matches!(max_density(&sys(&[&[1, 0]])), Err(Error::IllDefined { .. })));
    }

    #[test]
    fn ties_prefer_small_then_lexicographic() {
        // every ratio is 1 for the zero matrix
        let d = max_density(&sys(&[&[0, 0, 0]])).unwrap();
        assert_eq!((d.value, d.witness), (frac(1, 1), q(&[1], 3)));
    }
}
