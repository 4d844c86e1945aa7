//! Rado's column condition.
//!
//! A set `S` of columns is reachable when it is a union of blocks
//! `B_1, .., B_t` placed in order with `sum(B_1) = 0` and each later block sum
//! in the span of the columns already placed. Reachable sets are closed under
//! union (the blocks of one set, trimmed by what is already placed, stay
//! valid on top of the other), so the maximal reachable set is found by
//! repeatedly placing any admissible block. Each step is a zero-sum search
//! over the unplaced columns projected onto the left annihilator of the
//! placed ones.

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::system::{ColumnSet, LinearSystem};

pub const DEFAULT_COLUMN_CONDITION_CAP: usize = 22;

/// The block sequence if `A` satisfies the column condition, `None` otherwise.
pub fn column_condition(a: &LinearSystem, cap: usize) -> Result<Option<Vec<ColumnSet>>> {
    let m = a.cols();
    if m > cap {
        return Err(Error::CapExceeded { what: "column condition", m, cap });
    }
    let mut placed: Vec<usize> = Vec::new();
    let mut blocks = Vec::new();
    while placed.len() < m {
        let free: Vec<usize> = (0..m).filter(|j| !placed.contains(j)).collect();
        let projected = project_columns(a.matrix(), &placed, &free)?;
        let Some(block) = zero_sum_subset(&projected) else {
            return Ok(None);
        };
        let block: Vec<usize> = block.into_iter().map(|k| free[k]).collect();
        placed.extend(&block);
        blocks.push(ColumnSet::new(block, m)?);
    }
    Ok(Some(blocks))
}

/// Images of the `free` columns under a basis of the left annihilator of the
/// `placed` columns. A sum of columns lies in the span of `placed` iff its
/// image vanishes.
fn project_columns(a: &IntMatrix, placed: &[usize], free: &[usize]) -> Result<Vec<Vec<i128>>> {
    let annihilator = a.select_columns(placed).transpose().integer_kernel_basis();
    free.iter()
        .map(|&j| {
            let col = a.column(j);
            annihilator
                .iter()
                .map(|y| {
                    y.iter()
                        .zip(&col)
                        .map(|(u, v)| u * v)
                        .sum::<num_bigint::BigInt>()
                        .to_i128()
                        .ok_or(Error::Overflow)
                })
                .collect()
        })
        .collect()
}

/// First nonempty subset (in Gray-code order) whose vectors sum to zero.
fn zero_sum_subset(vectors: &[Vec<i128>]) -> Option<Vec<usize>> {
    let n = vectors.len();
    let dim = vectors.first().map_or(0, Vec::len);
    if dim == 0 {
        return Some((0..n).collect());
    }
    let mut sum = vec![0i128; dim];
    let mut mask: u64 = 0;
    for step in 1u64..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        mask ^= 1 << bit;
        let sign = if mask >> bit & 1 == 1 { 1 } else { -1 };
        for (s, v) in sum.iter_mut().zip(&vectors[bit]) {
            *s += sign * v;
        }
        if sum.iter().all(|&s| s == 0) {
            return Some((0..n).filter(|&k| mask >> k & 1 == 1).collect());
        }
    }
    None
}
