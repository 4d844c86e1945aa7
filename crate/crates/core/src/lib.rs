//! Exact tools for integer linear homogeneous systems `A x = 0`:
//! classification (irredundant, positive, abundant, partition and density
//! regular), the maximum densities `m(A)` and `m_1(A)`, subsystems `A[Q]`,
//! column partitions and non-trivial solutions, solution enumeration and
//! counting in finite ground sets, extremal numbers, and seeded Monte Carlo
//! experiments on binomial random sets `[n]_p`.

pub mod classify;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod extremal;
pub mod io;
pub mod linalg;
pub mod partition;
pub mod solutions;
pub mod system;

pub use classify::{ClassificationReport, DensityKind, DensityReport};
pub use error::{Error, Result};
pub use linalg::{IntMatrix, RationalVector};
pub use partition::ColumnPartition;
pub use solutions::{GroundSet, SolutionClass};
pub use system::{ColumnSet, LinearSystem};
