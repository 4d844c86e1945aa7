use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{make_primitive, IntMatrix};
use crate::system::{ColumnSet, LinearSystem};

/// A full-row-rank form of `A` split along `Q`: `retained` are the rows that
/// stay independent on the complement of `Q`, and `subsystem` is `A[Q]`, the
/// `r_Q` combinations that vanish on the complement, restricted to `Q`.
///
/// Stacking `retained` on top of `subsystem` (padded with zeros outside `Q`)
/// is row-equivalent to `A`.
#[derive(Clone, Debug)]
pub struct SubsystemDecomposition {
    pub columns: ColumnSet,
    pub retained: IntMatrix,
    pub subsystem: LinearSystem,
}

impl SubsystemDecomposition {
    /// The stacked matrix with columns in their original positions.
    pub fn stacked(&self) -> IntMatrix {
        let m = self.retained.cols();
        let mut rows = self.retained.row_vecs();
        for i in 0..self.subsystem.rows() {
            let mut row = vec![BigInt::zero(); m];
            for (k, &j) in self.columns.indices().iter().enumerate() {
                row[j] = self.subsystem.matrix().get(i, k).clone();
            }
            rows.push(row);
        }
        IntMatrix::from_rows(m, rows).expect("rectangular")
    }
}

pub fn decompose(a: &LinearSystem, q: &ColumnSet) -> Result<SubsystemDecomposition> {
    let m = a.cols();
    if let Some(&bad) = q.indices().iter().find(|&&i| i >= m) {
        return Err(Error::IndexOutOfRange { index: bad, cols: m });
    }
    let basis = a.row_basis();
    let full = basis.matrix();
    let deps = full.select_columns(q.complement(m).indices()).row_dependencies();
    if deps.dependent.is_empty() || q.is_empty() {
        return Err(Error::EmptySubsystem(q.clone()));
    }
    let restricted = full.select_columns(q.indices());
    let mut rows: Vec<Vec<BigInt>> = deps
        .dependent
        .iter()
        .map(|dep| {
            let mut row: Vec<BigInt> =
                restricted.row(dep.row).iter().map(|x| &dep.scale * x).collect();
            for (j, coeff) in &dep.coefficients {
                for (x, y) in row.iter_mut().zip(restricted.row(*j)) {
                    *x -= coeff * y;
                }
            }
            make_primitive(&mut row);
            if row.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                row.iter_mut().for_each(|x| *x = -x.clone());
            }
            row
        })
        .collect();
    rows.sort();
    let matrix = IntMatrix::from_rows(q.len(), rows)?;
    let mut subsystem = LinearSystem::new(matrix)?;
    if let Some(name) = a.name() {
        subsystem = subsystem.with_name(format!("{name}[{q}]"));
    }
    Ok(SubsystemDecomposition {
        columns: q.clone(),
        retained: full.select_rows(&deps.independent),
        subsystem,
    })
}

/// The subsystem `A[Q]`, an `r_Q x |Q|` system of full row rank.
pub fn subsystem(a: &LinearSystem, q: &ColumnSet) -> Result<LinearSystem> {
    Ok(decompose(a, q)?.subsystem)
}
