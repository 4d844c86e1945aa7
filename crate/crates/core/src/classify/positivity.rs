//! Exact feasibility of `{x in ker A : x_i >= 1}` by Fourier-Motzkin
//! elimination on the kernel parametrisation `x = sum_k c_k v_k`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::make_primitive;
use crate::system::LinearSystem;

/// `coeffs . c >= rhs`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Constraint {
    coeffs: Vec<BigRational>,
    rhs: BigRational,
}

impl Constraint {
    /// Scales so the first nonzero coefficient has absolute value one.
    fn normalised(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            self.coeffs.iter_mut().for_each(|c| *c /= &lead);
            self.rhs /= lead;
        }
        self
    }
}

/// A solution in `N^m` (all entries >= 1), scaled to coprime integers.
pub fn positive_solution(a: &LinearSystem) -> Option<Vec<BigInt>> {
    let basis = a.matrix().integer_kernel_basis();
    let d = basis.len();
    if d == 0 {
        return None;
    }
    let m = a.cols();
    let one = BigRational::one();
    let initial: Vec<Constraint> = (0..m)
        .map(|i| Constraint {
            coeffs: basis.iter().map(|v| BigRational::from_integer(v[i].clone())).collect(),
            rhs: one.clone(),
        })
        .collect();

    // stages[k] constrains variables k..d
    let mut stages = vec![dedup(initial)];
    for k in 0..d {
        let current = stages.last().expect("nonempty");
        let mut next = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for c in current {
            if c.coeffs[k].is_positive() {
                pos.push(c);
            } else if c.coeffs[k].is_negative() {
                neg.push(c);
            } else {
                next.push(c.clone());
            }
        }
        for p in &pos {
            for q in &neg {
                // p / p_k + q / |q_k| cancels variable k
                let sp = p.coeffs[k].clone();
                let sq = -q.coeffs[k].clone();
                let coeffs = p
                    .coeffs
                    .iter()
                    .zip(&q.coeffs)
                    .map(|(x, y)| x / &sp + y / &sq)
                    .collect();
                next.push(Constraint { coeffs, rhs: &p.rhs / &sp + &q.rhs / &sq });
            }
        }
        let mut kept = Vec::new();
        for c in dedup(next) {
            if c.coeffs.iter().all(Zero::is_zero) {
                if c.rhs.is_positive() {
                    return None;
                }
            } else {
                kept.push(c);
            }
        }
        stages.push(kept);
    }

    let mut values = vec![BigRational::zero(); d];
    for k in (0..d).rev() {
        let (mut lower, mut upper): (Option<BigRational>, Option<BigRational>) = (None, None);
        for c in stages[k].iter().filter(|c| !c.coeffs[k].is_zero()) {
            let rest: BigRational =
                (k + 1..d).map(|j| &c.coeffs[j] * &values[j]).fold(BigRational::zero(), |s, x| s + x);
            let bound = (&c.rhs - rest) / &c.coeffs[k];
            if c.coeffs[k].is_positive() {
                lower = Some(lower.map_or(bound.clone(), |l| l.max(bound)));
            } else if c.coeffs[k].is_negative() {
                upper = Some(upper.map_or(bound.clone(), |u| u.min(bound)));
            }
        }
        values[k] = match (lower, upper) {
            (Some(l), _) => l,
            (None, Some(u)) => u,
            (None, None) => BigRational::zero(),
        };
    }

    let x: Vec<BigRational> = (0..m)
        .map(|i| {
            basis
                .iter()
                .zip(&values)
                .map(|(v, c)| c * BigRational::from_integer(v[i].clone()))
                .fold(BigRational::zero(), |s, t| s + t)
        })
        .collect();
    debug_assert!(x.iter().all(|v| *v >= one));
    let lcm = x.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let mut ints: Vec<BigInt> = x.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    make_primitive(&mut ints);
    Some(ints)
}

fn dedup(constraints: Vec<Constraint>) -> Vec<Constraint> {
    let mut out: Vec<Constraint> = Vec::with_capacity(constraints.len());
    let mut seen = std::collections::HashSet::new();
    for c in constraints {
        let c = c.normalised();
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_coefficients() {
        // x1 + 2 x2 = 3 x3, e.g. (1, 1, 1)
        let a = LinearSystem::from_i64(&[&[1, 2, -3]]).unwrap();
        let x = positive_solution(&a).unwrap();
        assert!(a.is_solution(&x).unwrap());
        assert!(x.iter().all(|v| *v >= BigInt::one()));
    }

    #[test]
    fn two_rows() {
        // x1 = x2 + x3, x3 = 2 x4: positive
        let a = LinearSystem::from_i64(&[&[1, -1, -1, 0], &[0, 0, 1, -2]]).unwrap();
        let x = positive_solution(&a).unwrap();
        assert!(a.is_solution(&x).unwrap());
        // x1 + x2 = 0 forces a nonpositive entry
        let a = LinearSystem::from_i64(&[&[1, 1, 0], &[0, 1, -1]]).unwrap();
        assert_eq!(positive_solution(&a), None);
    }
}
