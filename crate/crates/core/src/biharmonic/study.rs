use super::{assemble, compute_error, solve, ManufacturedCase};
use crate::mesh::Mesh;
use crate::{Execution, Result};
use serde::Serialize;
use std::fmt::Write as _;

pub const CSV_HEADER: &str = "h,ndof,err_sigma,err_u,err_total";

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConvergenceRow {
    pub k: usize,
    pub h: f64,
    pub ndof: usize,
    pub err_sigma: f64,
    pub err_u: f64,
    pub err_total: f64,
    /// Relative solver residual.
    pub residual: f64,
}

/// Solves `case` on each mesh for each degree; rows are ordered by degree,
/// then by mesh.
pub fn convergence_study(
    meshes: &[Mesh],
    degrees: &[usize],
    case: &ManufacturedCase,
    exec: Execution,
) -> Result<Vec<ConvergenceRow>> {
    let mut rows = Vec::with_capacity(meshes.len() * degrees.len());
    for &k in degrees {
        for m in meshes {
            rows.push(solve_case(m, k, case, exec)?);
        }
    }
    Ok(rows)
}

pub fn solve_case(m: &Mesh, k: usize, case: &ManufacturedCase, exec: Execution) -> Result<ConvergenceRow> {
    let sys = assemble(m, k, case, exec)?;
    let sol = solve(&sys)?;
    let e = compute_error(&sys, &sol);
    Ok(ConvergenceRow {
        k,
        h: m.h(),
        ndof: sys.map.total(),
        err_sigma: e.err_sigma,
        err_u: e.err_u,
        err_total: e.err_total,
        residual: sol.residual,
    })
}

/// Least-squares slope of `log err_total` against `log h`; `None` with
/// fewer than two distinct sizes.
pub fn fitted_slope(rows: &[ConvergenceRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.h.ln(), r.err_total.ln())).collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

pub fn to_csv(rows: &[ConvergenceRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{:e},{},{:e},{:e},{:e}", r.h, r.ndof, r.err_sigma, r.err_u, r.err_total);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(h: f64, e: f64) -> ConvergenceRow {
        ConvergenceRow {
            k: 0,
            h,
            ndof: 1,
            err_sigma: e,
            err_u: 0.0,
            err_total: e,
            residual: 0.0,
        }
    }

    #[test]
    fn slope_of_a_power_law() {
        let rows: Vec<_> = [1.0, 0.5, 0.25].iter().map(|&h: &f64| row(h, 3.0 * h.powi(2))).collect();
        assert!((fitted_slope(&rows).unwrap() - 2.0).abs() < 1e-12);
        assert!(fitted_slope(&rows[..1]).is_none());
    }

    #[test]
    fn csv_layout() {
        let s = to_csv(&[row(0.5, 0.25)]);
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.next(), Some("5e-1,1,2.5e-1,0e0,2.5e-1"));
    }
}
