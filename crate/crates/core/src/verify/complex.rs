use super::random_unit_vectors;
use crate::ddr::{expected_dimension, Element, SpaceTag};
use crate::linalg::{containment_residual, null_space, rank};
use crate::mesh::Mesh;
use crate::poly::{Frame, PolyBasis};
use crate::{Error, Result};
use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

/// Largest residuals of the two compositions.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ComplexResiduals {
    /// `max |uSC uDG x|` over random unit `x`.
    pub symcurl_devgrad: f64,
    /// `max |DD uSC y|` over random unit `y`.
    pub divdiv_symcurl: f64,
    /// Frobenius norms of the matrix products.
    pub matrix_symcurl_devgrad: f64,
    pub matrix_divdiv_symcurl: f64,
}

impl ComplexResiduals {
    pub fn max(&self) -> f64 {
        self.symcurl_devgrad.max(self.divdiv_symcurl)
    }
}

pub fn check_complex<R: Rng>(e: &Element, trials: usize, rng: &mut R) -> Result<ComplexResiduals> {
    let dg = e.op_devgrad()?;
    let sc = e.op_symcurl()?;
    let dd = e.op_divdiv()?;
    let x = random_unit_vectors(dg.ncols(), trials, rng);
    let y = random_unit_vectors(sc.ncols(), trials, rng);
    let worst = |m: DMatrix<f64>| m.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
    let scdg = &sc * &dg;
    let ddsc = &dd * &sc;
    Ok(ComplexResiduals {
        symcurl_devgrad: worst(&scdg * x),
        divdiv_symcurl: worst(&ddsc * y),
        matrix_symcurl_devgrad: scdg.norm(),
        matrix_divdiv_symcurl: ddsc.norm(),
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpaceDims {
    pub devgrad: usize,
    pub symcurl: usize,
    pub divdiv: usize,
    pub polynomial: usize,
}

/// Ranks and kernel dimensions of the local operators on one element.
#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    pub element: String,
    pub cell: usize,
    pub k: usize,
    pub euler: i64,
    pub trivial_topology: bool,
    pub dims: SpaceDims,
    pub rank_devgrad: usize,
    pub rank_symcurl: usize,
    pub rank_divdiv: usize,
    pub kernel_devgrad: usize,
    /// `dim Ker uSC - rank uDG`.
    pub symcurl_defect: i64,
    /// `dim Ker DD - rank uSC`.
    pub divdiv_defect: i64,
    pub expected_divdiv_defect: i64,
    /// Residual of the interpolated rigid fields `a + b (x - x_T)` against
    /// the kernel of `uDG`.
    pub kernel_residual: f64,
    pub devgrad_kernel_ok: bool,
    pub symcurl_exact: bool,
    pub divdiv_exact: bool,
    pub divdiv_onto: bool,
    pub pass: bool,
    pub note: Option<String>,
}

/// Interpolates of `a + b (x - x_T)`: three constants and the position.
fn rigid_fields(e: &Element) -> Result<DMatrix<f64>> {
    let frame = Frame::cell(e.mesh, e.cell);
    let mut coef = DMatrix::zeros(12, 4);
    for a in 0..3 {
        coef[(4 * a, a)] = 1.0;
        // scaled coordinate xi_a = (x - x_T)_a / h, monomial index 1 + a
        coef[(4 * a + 1 + a, 3)] = frame.scale;
    }
    e.interpolate_devgrad(&PolyBasis::new(frame, (3, 1), 1, coef))
}

pub fn check_exactness(name: &str, m: &Mesh, cell: usize, k: usize) -> Result<ExactnessReport> {
    let e = Element::new(m, cell, k)?;
    let c = &m.cells[cell];
    let euler = c.vertices.len() as i64 - c.edges.len() as i64 + c.faces.len() as i64;
    let dg = e.op_devgrad()?;
    let sc = e.op_symcurl()?;
    let dd = e.op_divdiv()?;
    let dims = SpaceDims {
        devgrad: dg.ncols(),
        symcurl: sc.ncols(),
        divdiv: dd.ncols(),
        polynomial: dd.nrows(),
    };
    let (rank_dg, rank_sc, rank_dd) = (rank(&dg), rank(&sc), rank(&dd));
    let kernel = null_space(&dg);
    let kernel_residual = containment_residual(&kernel, &rigid_fields(&e)?);
    let symcurl_defect = (dims.symcurl - rank_sc) as i64 - rank_dg as i64;
    let divdiv_defect = (dims.divdiv - rank_dd) as i64 - rank_sc as i64;
    let expected_divdiv_defect = if k == 0 { 3 } else { 0 };
    let devgrad_kernel_ok = kernel.ncols() == 4 && kernel_residual <= super::CHECK_TOL;
    let symcurl_exact = symcurl_defect == 0;
    let divdiv_exact = divdiv_defect == expected_divdiv_defect;
    let divdiv_onto = rank_dd == dims.polynomial;
    let trivial_topology = euler == 2;
    let note = if !trivial_topology {
        Some(format!("non-trivial topology (Euler characteristic {euler}); ranks are informative only"))
    } else if k == 0 {
        Some(format!("divdiv defect {divdiv_defect}: expected (k=0)"))
    } else {
        None
    };
    Ok(ExactnessReport {
        element: name.to_string(),
        cell,
        k,
        euler,
        trivial_topology,
        dims,
        rank_devgrad: rank_dg,
        rank_symcurl: rank_sc,
        rank_divdiv: rank_dd,
        kernel_devgrad: kernel.ncols(),
        symcurl_defect,
        divdiv_defect,
        expected_divdiv_defect,
        kernel_residual,
        devgrad_kernel_ok,
        symcurl_exact,
        divdiv_exact,
        divdiv_onto,
        pass: !trivial_topology || (devgrad_kernel_ok && symcurl_exact && divdiv_exact && divdiv_onto),
        note,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionCheck {
    pub space: String,
    pub constructed: usize,
    pub expected: usize,
}

/// Compares layout totals with the closed-form counts; a mismatch is an
/// error naming the space.
pub fn check_dimensions(m: &Mesh, cell: usize, k: usize) -> Result<Vec<DimensionCheck>> {
    let e = Element::new(m, cell, k)?;
    let c = &m.cells[cell];
    let (nv, ne, nf) = (c.vertices.len(), c.edges.len(), c.faces.len());
    let mut out = Vec::with_capacity(4);
    for tag in [SpaceTag::DevGrad, SpaceTag::SymCurl, SpaceTag::DivDiv] {
        out.push(DimensionCheck {
            space: tag.to_string(),
            constructed: e.layout(tag).total(),
            expected: expected_dimension(tag, k, nv, ne, nf),
        });
    }
    out.push(DimensionCheck {
        space: "P^k".into(),
        constructed: e.cell_poly(k as i64).len(),
        expected: (k + 1) * (k + 2) * (k + 3) / 6,
    });
    if let Some(bad) = out.iter().find(|d| d.constructed != d.expected) {
        return Err(Error::DimensionMismatch {
            space: bad.space.clone(),
            expected: bad.expected,
            found: bad.constructed,
        });
    }
    Ok(out)
}

/// Ranks `(uDG, uSC, DD)`, used to compare an element with a rotated copy.
pub fn exactness_ranks(m: &Mesh, cell: usize, k: usize) -> Result<[usize; 3]> {
    let e = Element::new(m, cell, k)?;
    Ok([rank(&e.op_devgrad()?), rank(&e.op_symcurl()?), rank(&e.op_divdiv()?)])
}
