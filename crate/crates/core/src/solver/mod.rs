//! Linear and nonlinear solvers.

pub mod banded;
pub mod dense;
pub mod newton;
pub mod sparse;

pub use banded::{linear_solve, BandedLu};
pub use newton::{newton_solve, NewtonConfig, SolveReport};
pub use sparse::CsrMatrix;
