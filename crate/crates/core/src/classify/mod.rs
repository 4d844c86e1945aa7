//! Structural predicates on a system and the densities that govern its
//! random-set thresholds.

mod column_condition;
mod density;
mod positivity;
mod subsystem;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Result;
use crate::linalg::RationalVector;
use crate::system::{ColumnSet, LinearSystem};

pub use column_condition::{column_condition, DEFAULT_COLUMN_CONDITION_CAP};
pub use density::{
    max_density, max_one_density, r_q, ComplementRanks, DensityKind, DensityReport,
    DEFAULT_DENSITY_CAP,
};
pub use positivity::positive_solution;
pub use subsystem::{decompose, subsystem, SubsystemDecomposition};

/// Outcome of the two-column deletion test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Abundance {
    Abundant,
    /// Deleting these two (0-based) columns drops the rank.
    Fails(usize, usize),
    /// Fewer than two columns.
    NotApplicable,
}

impl Abundance {
    pub fn holds(&self) -> bool {
        matches!(self, Abundance::Abundant)
    }
}

/// Whether `e_i - e_j` is outside the row space for every `i < j`, i.e. the
/// kernel is not contained in any diagonal hyperplane `x_i = x_j`.
pub fn is_irredundant(a: &LinearSystem) -> bool {
    let m = a.cols();
    let mut v = vec![BigInt::zero(); m];
    for i in 0..m {
        for j in i + 1..m {
            v[i] = 1.into();
            v[j] = (-1).into();
            let inside = a
                .matrix()
                .rowspace_contains(&RationalVector::from_integers(&v))
                .expect("length matches");
            v[i] = BigInt::zero();
            v[j] = BigInt::zero();
            if inside {
                return false;
            }
        }
    }
    true
}

/// An integer solution with pairwise distinct entries, if one exists.
pub fn proper_solution(a: &LinearSystem) -> Option<Vec<BigInt>> {
    if !is_irredundant(a) {
        return None;
    }
    let basis = a.matrix().integer_kernel_basis();
    let m = a.cols();
    // x(t) = sum_k t^k v_k meets each hyperplane x_i = x_j in at most
    // dim - 1 values of t unless it lies inside it, which irredundancy rules out.
    let tries = m * m * basis.len().max(1) + 2;
    (1..=tries as i64)
        .map(|t| {
            let mut x = vec![BigInt::zero(); m];
            let mut power = BigInt::from(1);
            for v in &basis {
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi += &power * vi;
                }
                power *= t;
            }
            x
        })
        .find(|x| all_distinct(x))
}

/// A solution in `N^m` with pairwise distinct entries, if one exists.
pub fn proper_positive_solution(a: &LinearSystem) -> Option<Vec<BigInt>> {
    let generic = proper_solution(a)?;
    let positive = positive_solution(a)?;
    // generic + k * positive leaves each hyperplane x_i = x_j for all but one k.
    (0i64..)
        .map(|k| generic.iter().zip(&positive).map(|(g, p)| g + p * k).collect::<Vec<_>>())
        .find(|x| all_distinct(x) && x.iter().all(|v| *v >= BigInt::from(1)))
}

pub fn is_positive(a: &LinearSystem) -> bool {
    positive_solution(a).is_some()
}

pub fn is_abundant(a: &LinearSystem) -> Abundance {
    let m = a.cols();
    if m < 2 {
        return Abundance::NotApplicable;
    }
    for i in 0..m {
        for j in i + 1..m {
            let keep: Vec<usize> = (0..m).filter(|&k| k != i && k != j).collect();
            if a.matrix().select_columns(&keep).rank() < a.rank() {
                return Abundance::Fails(i, j);
            }
        }
    }
    Abundance::Abundant
}

/// Partition regular: irredundant and satisfying the column condition. On
/// success returns the block sequence witnessing the column condition.
pub fn is_partition_regular(a: &LinearSystem) -> Result<Option<Vec<ColumnSet>>> {
    let blocks = column_condition(a, DEFAULT_COLUMN_CONDITION_CAP)?;
    Ok(blocks.filter(|_| is_irredundant(a)))
}

/// Density regular: irredundant and invariant (`A 1 = 0`).
pub fn is_density_regular(a: &LinearSystem) -> bool {
    a.is_invariant() && is_irredundant(a)
}

fn all_distinct(x: &[BigInt]) -> bool {
    let mut sorted: Vec<&BigInt> = x.iter().collect();
    sorted.sort();
    sorted.windows(2).all(|w| w[0] != w[1])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub irredundant: bool,
    pub proper_witness: Option<Vec<BigInt>>,
    pub positive: bool,
    pub positive_witness: Option<Vec<BigInt>>,
    pub abundance: Abundance,
    pub column_condition: Option<Vec<ColumnSet>>,
    pub partition_regular: bool,
    pub invariant: bool,
    pub density_regular: bool,
    /// Present iff the system is abundant.
    pub m1: Option<DensityReport>,
    /// Absent when some nonempty `Q` has `|Q| = r_Q`.
    pub m: Option<DensityReport>,
}

impl ClassificationReport {
    pub fn abundant(&self) -> bool {
        self.abundance.holds()
    }
}

pub fn classify(a: &LinearSystem) -> Result<ClassificationReport> {
    let irredundant = is_irredundant(a);
    let proper_witness = if irredundant { proper_solution(a) } else { None };
    let positive_witness = positive_solution(a);
    let abundance = is_abundant(a);
    let column_condition = column_condition(a, DEFAULT_COLUMN_CONDITION_CAP)?;
    let partition_regular = irredundant && column_condition.is_some();
    let invariant = a.is_invariant();
    let density_regular = invariant && irredundant;
    let ranks = ComplementRanks::compute(a, DEFAULT_DENSITY_CAP)?;
    let m1 = if abundance.holds() { Some(ranks.max_one_density()?) } else { None };
    let m = ranks.max_density().ok();
    debug_assert!(!density_regular || partition_regular);
    debug_assert!(!partition_regular || abundance.holds() || a.cols() < 2);
    Ok(ClassificationReport {
        irredundant,
        proper_witness,
        positive: positive_witness.is_some(),
        positive_witness,
        abundance,
        column_condition,
        partition_regular,
        invariant,
        density_regular,
        m1,
        m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn sys(rows: &[&[i64]]) -> LinearSystem {
        LinearSystem::from_i64(rows).unwrap()
    }

    #[test]
    fn irredundancy_examples() {
        assert!(!is_irredundant(&sys(&[&[1, -1]])));
        let schur = sys(&[&[1, 1, -1]]);
        assert!(is_irredundant(&schur));
        let w = proper_solution(&schur).unwrap();
        assert!(schur.is_solution(&w).unwrap() && all_distinct(&w));
        assert!(is_irredundant(&sys(&[&[2, -1]])));
        assert_eq!(proper_solution(&sys(&[&[1, -1]])), None);
    }

    #[test]
    fn positivity_examples() {
        let w = positive_solution(&sys(&[&[1, 1, -1]])).unwrap();
        assert_eq!(w, vec![BigInt::from(1), 1.into(), 2.into()]);
        assert!(!is_positive(&sys(&[&[1, 1, 1]])));
        assert_eq!(positive_solution(&sys(&[&[1, -1]])).unwrap(), vec![BigInt::from(1), 1.into()]);
        // only the zero solution
        assert!(!is_positive(&sys(&[&[1, 0], &[0, 1]])));
    }

    #[test]
    fn proper_positive_examples() {
        let schur = sys(&[&[1, 1, -1]]);
        let x = proper_positive_solution(&schur).unwrap();
        assert!(schur.is_solution(&x).unwrap());
        assert!(all_distinct(&x) && x.iter().all(|v| *v >= BigInt::from(1)));
        // positive but not irredundant
        assert_eq!(proper_positive_solution(&sys(&[&[1, -1]])), None);
        // irredundant but not positive
        assert_eq!(proper_positive_solution(&sys(&[&[1, 1, 1]])), None);
    }

    #[test]
    fn abundance_examples() {
        assert_eq!(is_abundant(&sys(&[&[1, 1, -3]])), Abundance::Abundant);
        assert_eq!(is_abundant(&sys(&[&[1, 1, -1, 0], &[0, 0, 1, -1]])), Abundance::Fails(2, 3));
        assert_eq!(is_abundant(&sys(&[&[1, -1]])), Abundance::Fails(0, 1));
        assert_eq!(is_abundant(&sys(&[&[1]])), Abundance::NotApplicable);
    }

    #[test]
    fn regularity_examples() {
        assert!(is_partition_regular(&sys(&[&[1, 1, -1]])).unwrap().is_some());
        assert!(is_partition_regular(&sys(&[&[1, 1, -2]])).unwrap().is_some());
        assert!(is_partition_regular(&sys(&[&[1, 1, -3]])).unwrap().is_none());
        assert!(is_density_regular(&sys(&[&[1, 1, -2]])));
        assert!(!is_density_regular(&sys(&[&[1, 1, -1]])));
        assert!(is_density_regular(&sys(&[&[1, -2, 1, 0, 0], &[0, 1, -2, 1, 0], &[0, 0, 1, -2, 1]])));
        // invariant but redundant
        let a = sys(&[&[1, -1]]);
        assert!(a.is_invariant() && !is_density_regular(&a));
        assert!(is_partition_regular(&a).unwrap().is_none());
    }

    #[test]
    fn classify_examples() {
        let r = classify(&sys(&[&[1, 1, -1]])).unwrap();
        assert!(r.irredundant && r.positive && r.abundant() && r.partition_regular);
        assert!(!r.density_regular);
        assert_eq!(r.m1.unwrap().value, BigRational::from_integer(2.into()));

        let r = classify(&sys(&[&[1, 1, -3]])).unwrap();
        assert!(!r.partition_regular && r.abundant());

        let r = classify(&sys(&[&[1, -1]])).unwrap();
        assert!(!r.irredundant && r.m1.is_none());

        // column 2 is zero: |Q| = r_Q at Q = {1}
        let r = classify(&sys(&[&[1, 0]])).unwrap();
        assert!(r.m.is_none());
    }
}
