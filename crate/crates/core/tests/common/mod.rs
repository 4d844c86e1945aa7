#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::BigInt;
use rado_core::partition::{contract, pattern_of};
use rado_core::{LinearSystem, SolutionClass};

pub fn system(rows: &[Vec<i64>]) -> LinearSystem {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    LinearSystem::from_i64(&refs).unwrap()
}

pub fn big(x: &[i64]) -> Vec<BigInt> {
    x.iter().map(|&v| BigInt::from(v)).collect()
}

/// Every tuple of `T^m` checked directly, in lexicographic order of the tuple.
pub fn naive(a: &LinearSystem, t: &[i64], class: SolutionClass) -> Vec<Vec<i64>> {
    let m = a.cols();
    let mut out = Vec::new();
    if t.is_empty() {
        return out;
    }
    let mut idx = vec![0usize; m];
    loop {
        let x: Vec<i64> = idx.iter().map(|&i| t[i]).collect();
        if a.is_solution(&big(&x)).unwrap() {
            let keep = match class {
                SolutionClass::All => true,
                SolutionClass::Proper => x.iter().collect::<HashSet<_>>().len() == m,
                SolutionClass::NonTrivial => {
                    let p = pattern_of(&x);
                    contract(a, &p).unwrap().rank() == a.rank()
                }
            };
            if keep {
                out.push(x);
            }
        }
        let mut k = m;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < t.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}
