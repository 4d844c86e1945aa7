//! Exact mean and variance of the number of solutions inside `[n]_p`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::solutions::{enumerate_solutions, support_profile, GroundSet, SolutionClass};
use crate::system::LinearSystem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentReport {
    pub n: usize,
    pub p: BigRational,
    pub expectation: BigRational,
    pub variance: BigRational,
}

pub const DEFAULT_SUPPORT_CAP: usize = 2_000_000;

/// Distinct solution supports inside `[n]` with the number of ordered
/// solutions realising each one.
#[derive(Clone, Debug)]
pub struct SupportTable {
    n: usize,
    supports: Vec<Vec<u32>>,
    weights: Vec<u64>,
}

impl SupportTable {
    pub fn new(a: &LinearSystem, n: usize, class: SolutionClass, cap: usize) -> Result<Self> {
        let mut index: HashMap<Vec<u32>, u64> = HashMap::new();
        for x in enumerate_solutions(a, &GroundSet::range(n), class, None)? {
            let mut s: Vec<u32> = x.iter().map(|&v| v as u32 - 1).collect();
            s.sort_unstable();
            s.dedup();
            *index.entry(s).or_insert(0) += 1;
            if index.len() > cap {
                return Err(Error::TooLarge(format!("more than {cap} distinct supports")));
            }
        }
        let mut entries: Vec<(Vec<u32>, u64)> = index.into_iter().collect();
        entries.sort();
        let (supports, weights) = entries.into_iter().unzip();
        Ok(Self { n, supports, weights })
    }

    pub fn len(&self) -> usize {
        self.supports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.supports.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// Ordered solutions with every entry in the given subset of `[n]`,
    /// described by membership flags for `1..=n`.
    pub fn count_within(&self, member: &[bool]) -> u64 {
        debug_assert_eq!(member.len(), self.n);
        self.supports
            .iter()
            .zip(&self.weights)
            .filter(|(s, _)| s.iter().all(|&v| member[v as usize]))
            .map(|(_, w)| w)
            .sum()
    }

    /// Histogram of `(|s(x)|, |s(y)|, |s(x) ∪ s(y)|)` over ordered pairs of
    /// solutions with intersecting supports.
    fn overlap_histogram(&self) -> BTreeMap<(usize, usize, usize), u128> {
        let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (k, s) in self.supports.iter().enumerate() {
            for &v in s {
                by_vertex[v as usize].push(k);
            }
        }
        let mut hist = BTreeMap::new();
        let mut seen = vec![usize::MAX; self.supports.len()];
        for (i, s) in self.supports.iter().enumerate() {
            for &v in s {
                for &j in &by_vertex[v as usize] {
                    if seen[j] == i {
                        continue;
                    }
                    seen[j] = i;
                    let t = &self.supports[j];
                    let shared = s.iter().filter(|v| t.binary_search(v).is_ok()).count();
                    let key = (s.len(), t.len(), s.len() + t.len() - shared);
                    *hist.entry(key).or_insert(0) += self.weights[i] as u128 * self.weights[j] as u128;
                }
            }
        }
        hist
    }
}

fn check_probability(p: &BigRational) -> Result<()> {
    if *p < BigRational::zero() || *p > BigRational::one() {
        return Err(Error::InvalidArgument("p must lie in [0, 1]".into()));
    }
    Ok(())
}

/// `E |S(A) ∩ [n]_p^m|` restricted to a class: the sum of `p^{|s(x)|}`.
pub fn expected_count_exact(
    a: &LinearSystem,
    n: usize,
    p: &BigRational,
    class: SolutionClass,
) -> Result<BigRational> {
    check_probability(p)?;
    let profile = support_profile(a, &GroundSet::range(n), class, None)?;
    Ok(profile
        .by_support
        .iter()
        .enumerate()
        .map(|(k, &c)| BigRational::from_integer(BigInt::from(c)) * Pow::pow(p, k as u32))
        .fold(BigRational::zero(), |s, t| s + t))
}

/// Mean and variance of the number of proper solutions inside `[n]_p`.
pub fn variance_exact(a: &LinearSystem, n: usize, p: &BigRational) -> Result<MomentReport> {
    check_probability(p)?;
    let table = SupportTable::new(a, n, SolutionClass::Proper, DEFAULT_SUPPORT_CAP)?;
    let pow = |k: usize| -> BigRational { Pow::pow(p, k as u32) };
    let expectation = table
        .supports
        .iter()
        .zip(&table.weights)
        .map(|(s, &w)| BigRational::from_integer(BigInt::from(w)) * pow(s.len()))
        .fold(BigRational::zero(), |s, t| s + t);
    let variance = table
        .overlap_histogram()
        .into_iter()
        .map(|((a, b, u), count)| {
            BigRational::from_integer(BigInt::from(count)) * (pow(u) - pow(a + b))
        })
        .fold(BigRational::zero(), |s, t| s + t);
    Ok(MomentReport { n, p: p.clone(), expectation, variance })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schur() -> LinearSystem {
        LinearSystem::from_i64(&[&[1, 1, -1]]).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn expectation_polynomials() {
        let p = q(1, 3);
        let proper = expected_count_exact(&schur(), 5, &p, SolutionClass::Proper).unwrap();
        assert_eq!(proper, q(8, 27));
        let nontrivial = expected_count_exact(&schur(), 5, &p, SolutionClass::NonTrivial).unwrap();
        assert_eq!(nontrivial, q(8, 27) + q(2, 9));
        let all = expected_count_exact(&schur(), 5, &q(1, 1), SolutionClass::All).unwrap();
        assert_eq!(all, q(10, 1));
        assert!(expected_count_exact(&schur(), 5, &q(3, 2), SolutionClass::All).is_err());
    }

    #[test]
    fn variance_vanishes_at_the_ends() {
        for p in [q(0, 1), q(1, 1)] {
            let r = variance_exact(&schur(), 7, &p).unwrap();
            assert!(r.variance.is_zero());
        }
        let r = variance_exact(&schur(), 7, &q(1, 2)).unwrap();
        assert!(r.variance > BigRational::zero());
    }

    #[test]
    fn variance_matches_subset_enumeration() {
        // average over all 2^n subsets weighted by p^|T| (1-p)^{n-|T|}
        let a = schur();
        let n = 7;
        let p = q(1, 3);
        let table = SupportTable::new(&a, n, SolutionClass::Proper, 1000).unwrap();
        let (mut m1, mut m2) = (BigRational::zero(), BigRational::zero());
        for mask in 0u32..1 << n {
            let member: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let k = mask.count_ones();
            let weight: BigRational = Pow::pow(&p, k) * Pow::pow(&(q(1, 1) - &p), n as u32 - k);
            let x = BigRational::from_integer(table.count_within(&member).into());
            m1 += &weight * &x;
            m2 += &weight * &x * &x;
        }
        let r = variance_exact(&a, n, &p).unwrap();
        assert_eq!(r.expectation, m1);
        assert_eq!(r.variance, m2 - &m1 * &m1);
    }
}
