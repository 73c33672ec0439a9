//! Executable checks of the local complex: complex property, exactness,
//! dimension counts, commutation and consistency, integration by parts and
//! the polynomial-space lemmas, plus [`run_suite`] bundling them per cell.

mod complex;
mod consistency;
mod ipp;
mod polynomial;
mod suite;

pub use complex::{
    check_complex, check_dimensions, check_exactness, exactness_ranks, ComplexResiduals, DimensionCheck,
    ExactnessReport, SpaceDims,
};
pub use consistency::{check_commutation, monitor_norms, CommutationReport, NormMonitor};
pub use ipp::{check_integration_by_parts, IppReport};
pub use polynomial::{
    check_curl_link, check_divf_isomorphism, check_trimmed_traces, divf_monomial_identity,
    IsomorphismReport, TraceReport,
};
pub use suite::{run_suite, CellSuite, Failure, SuiteReport, IPP_TOL, TRIALS};

use crate::mesh::{
    load_mesh, pentagonal_prism, perturbed_hexahedron, reference_tetrahedron, unit_cube, Mesh,
};
use crate::poly::{monomial, Frame, PolyBasis};
use nalgebra::DMatrix;
use rand::Rng;

/// Tolerance for the complex residuals and commutation checks.
pub const CHECK_TOL: f64 = 1e-9;

const VORONOI_CELL: &str = include_str!("../../data/voronoi_cell.json");

/// Single Voronoi cell shipped with the crate (14 faces, 36 edges, 24
/// vertices).
pub fn voronoi_cell() -> Mesh {
    load_mesh(VORONOI_CELL).expect("bundled Voronoi cell")
}

/// The single-cell elements every check runs on.
pub fn test_elements(seed: u64) -> Vec<(String, Mesh)> {
    vec![
        ("cube".into(), unit_cube()),
        ("tetrahedron".into(), reference_tetrahedron()),
        ("perturbed-hexahedron".into(), perturbed_hexahedron(seed)),
        ("pentagonal-prism".into(), pentagonal_prism(seed)),
        ("voronoi".into(), voronoi_cell()),
    ]
}

/// `n` random fields of the given shape and degree on the frame of cell 0,
/// coefficients uniform in `[-1, 1]`.
pub fn random_field<R: Rng>(m: &Mesh, shape: (usize, usize), degree: usize, n: usize, rng: &mut R) -> PolyBasis {
    random_on(Frame::cell(m, 0), shape, degree, n, rng)
}

pub fn random_on<R: Rng>(frame: Frame, shape: (usize, usize), degree: usize, n: usize, rng: &mut R) -> PolyBasis {
    let nm = monomial::dim(frame.dim, degree as i64);
    let coef = DMatrix::from_fn(shape.0 * shape.1 * nm, n, |_, _| rng.random_range(-1.0..1.0));
    PolyBasis::new(frame, shape, degree, coef)
}

/// `n` random unit vectors of length `len`, as columns.
pub fn random_unit_vectors<R: Rng>(len: usize, n: usize, rng: &mut R) -> DMatrix<f64> {
    let mut x = DMatrix::from_fn(len, n, |_, _| rng.random_range(-1.0..1.0));
    for mut c in x.column_iter_mut() {
        let norm = c.norm();
        if norm > 0.0 {
            c /= norm;
        }
    }
    x
}

/// `|a - b| / |b|`, or `|a|` when `b` vanishes.
pub fn relative(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let d = (a - b).norm();
    let n = b.norm();
    if n > 0.0 {
        d / n
    } else {
        d
    }
}
