use super::{
    check_commutation, check_complex, check_curl_link, check_dimensions, check_exactness,
    check_integration_by_parts, check_trimmed_traces, monitor_norms, CommutationReport, ComplexResiduals,
    DimensionCheck, ExactnessReport, IppReport, NormMonitor, TraceReport, CHECK_TOL,
};
use crate::ddr::Element;
use crate::mesh::Mesh;
use crate::{Execution, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Tolerance for the integration by parts identities.
pub const IPP_TOL: f64 = 1e-10;

/// Random inputs per randomized check.
pub const TRIALS: usize = 4;

/// A failed assertion, named.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub cell: usize,
    pub check: String,
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellSuite {
    pub cell: usize,
    pub dimensions: Vec<DimensionCheck>,
    pub complex: ComplexResiduals,
    pub exactness: ExactnessReport,
    pub commutation: CommutationReport,
    pub integration_by_parts: IppReport,
    pub trimmed_traces: TraceReport,
    pub curl_link: f64,
    pub norms: NormMonitor,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub element: String,
    pub k: usize,
    pub seed: u64,
    pub cells: Vec<CellSuite>,
    pub failures: Vec<Failure>,
    pub pass: bool,
}

fn run_cell(name: &str, m: &Mesh, cell: usize, k: usize, seed: u64) -> Result<(CellSuite, Vec<Failure>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (cell as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut failures = Vec::new();
    let mut fail = |check: &str, value: f64, tolerance: f64| {
        failures.push(Failure {
            cell,
            check: check.to_string(),
            value,
            tolerance,
        })
    };
    let dimensions = match check_dimensions(m, cell, k) {
        Ok(d) => d,
        Err(e) => {
            fail(&format!("dimensions: {e}"), f64::NAN, 0.0);
            Vec::new()
        }
    };
    let e = Element::new(m, cell, k)?;
    let complex = check_complex(&e, TRIALS, &mut rng)?;
    let exactness = check_exactness(name, m, cell, k)?;
    let commutation = check_commutation(&e, TRIALS, &mut rng)?;
    let ipp = check_integration_by_parts(m, cell, k, TRIALS, &mut rng)?;
    let traces = check_trimmed_traces(m, cell, k)?;
    let curl_link = check_curl_link(m, cell, k)?;
    let norms = monitor_norms(&e, 4 * TRIALS, &mut rng)?;

    if complex.max() > CHECK_TOL {
        fail("complex", complex.max(), CHECK_TOL);
    }
    if !exactness.pass {
        fail("exactness", exactness.divdiv_defect as f64, exactness.expected_divdiv_defect as f64);
    }
    if commutation.max() > CHECK_TOL {
        fail("commutation", commutation.max(), CHECK_TOL);
    }
    if ipp.max() > IPP_TOL {
        fail("integration-by-parts", ipp.max(), IPP_TOL);
    }
    let tr = traces.srtrim.max(traces.htrim);
    if tr > CHECK_TOL {
        fail("trimmed-traces", tr, CHECK_TOL);
    }
    if curl_link > CHECK_TOL {
        fail("curl-link", curl_link, CHECK_TOL);
    }
    if norms.product_min_eigenvalue <= 0.0 {
        fail("product-positivity", norms.product_min_eigenvalue, 0.0);
    }
    Ok((
        CellSuite {
            cell,
            dimensions,
            complex,
            exactness,
            commutation,
            integration_by_parts: ipp,
            trimmed_traces: traces,
            curl_link,
            norms,
        },
        failures,
    ))
}

/// Runs every local check on every cell of `m`, one seeded generator per
/// cell so the outcome does not depend on scheduling.
pub fn run_suite(name: &str, m: &Mesh, k: usize, seed: u64, exec: Execution) -> Result<SuiteReport> {
    let results = exec.map_range(m.cells.len(), |c| run_cell(name, m, c, k, seed));
    let mut cells = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for r in results {
        let (c, f) = r?;
        cells.push(c);
        failures.extend(f);
    }
    Ok(SuiteReport {
        element: name.to_string(),
        k,
        seed,
        pass: failures.is_empty(),
        cells,
        failures,
    })
}
