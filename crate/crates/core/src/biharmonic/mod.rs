//! Mixed scheme for the clamped biharmonic problem on the global divdiv
//! space, manufactured solutions and convergence studies.

mod case;
mod dofmap;
mod scheme;
mod study;

pub use case::{manufactured_case, ManufacturedCase, CASES};
pub use dofmap::GlobalDofMap;
pub use scheme::{
    assemble, compute_error, schur_complement_spectrum, solve, solve_with, ErrorNorms, GlobalSystem, LocalSystem,
    Solution,
};
pub use study::{convergence_study, fitted_slope, solve_case, to_csv, ConvergenceRow, CSV_HEADER};
