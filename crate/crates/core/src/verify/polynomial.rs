use crate::linalg::{rank, singular_values};
use crate::mesh::{Mesh, Point};
use crate::poly::{
    contract, cross_rows, decomposition_basis, inner, ops, scalar_basis, Entity, Frame, PolyBasis, Quadrature, SpaceKind,
};
use crate::Result;
use nalgebra::DMatrix;
use serde::Serialize;

/// Singular values of `div_F` from `cCGoly^l(F)` to `P^{l-1}(F; R^2)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct IsomorphismReport {
    pub l: usize,
    pub rows: usize,
    pub cols: usize,
    pub sigma_min: f64,
    pub sigma_max: f64,
}

impl IsomorphismReport {
    pub fn is_isomorphism(&self) -> bool {
        self.rows == self.cols && self.sigma_min > 1e-8 * self.sigma_max.max(1.0)
    }
}

pub fn check_divf_isomorphism(m: &Mesh, face: usize, l: usize) -> Result<IsomorphismReport> {
    let ent = Entity::Face(face);
    let src = decomposition_basis(m, SpaceKind::CCGoly, ent, l as i64)?;
    let div = ops::div(&src)?;
    let target = PolyBasis::tensor(&scalar_basis(m, ent, l.saturating_sub(1))?, (2, 1), &DMatrix::identity(2, 2));
    let q = ent.quadrature(m, 2 * l);
    let a = inner(&target.eval(&q.points), &div.eval(&q.points), &q.weights);
    let s = singular_values(&a);
    Ok(IsomorphismReport {
        l,
        rows: a.nrows(),
        cols: a.ncols(),
        sigma_min: s.iter().copied().fold(f64::INFINITY, f64::min),
        sigma_max: s.iter().copied().fold(0.0, f64::max),
    })
}

/// Residual of `div_F [[x, 2y], [0, -x]] = (3, 0)` in plain coordinates.
pub fn divf_monomial_identity() -> Result<f64> {
    let frame = Frame {
        origin: Point::zeros(),
        axes: [Point::x(), Point::y(), Point::zeros()],
        dim: 2,
        scale: 1.0,
    };
    // monomials of degree 1 in two variables: 1, x, y
    let mut coef = DMatrix::zeros(12, 1);
    coef[(1, 0)] = 1.0;
    coef[(3 + 2, 0)] = 2.0;
    coef[(9 + 1, 0)] = -1.0;
    let d = ops::div(&PolyBasis::new(frame, (2, 2), 1, coef))?;
    let pts = [Point::zeros(), Point::new(0.3, -0.7, 0.0), Point::new(2.0, 5.0, 0.0)];
    let v = d.eval(&pts);
    Ok(v[0].iter().map(|x| (x - 3.0).abs()).chain(v[1].iter().map(|x| x.abs())).fold(0.0, f64::max))
}

/// L2 residual of projecting the columns of `vals` onto the orthonormal
/// family with values `on`, relative to the column norms.
fn outside(on: &[DMatrix<f64>], vals: &[DMatrix<f64>], q: &Quadrature) -> f64 {
    let c = inner(on, vals, &q.weights);
    let rest: Vec<DMatrix<f64>> = on.iter().zip(vals).map(|(o, v)| v - o * &c).collect();
    let g = inner(vals, vals, &q.weights);
    let r = inner(&rest, &rest, &q.weights);
    let mut worst: f64 = 0.0;
    for j in 0..g.ncols() {
        if g[(j, j)] > 0.0 {
            worst = worst.max((r[(j, j)].max(0.0) / g[(j, j)]).sqrt());
        }
    }
    worst
}

/// Checks `CURL cHoly^{l+1} = SRoly^l` on cell `cell`: the curls lie in
/// `SRoly^l` and span it. Returns the containment residual, or 1 when the
/// span is too small.
pub fn check_curl_link(m: &Mesh, cell: usize, l: usize) -> Result<f64> {
    let ent = Entity::Cell(cell);
    let curls = ops::curl(&decomposition_basis(m, SpaceKind::CHoly, ent, l as i64 + 1)?)?;
    let sr = decomposition_basis(m, SpaceKind::SRoly, ent, l as i64)?;
    let q = ent.quadrature(m, 2 * l + 2);
    let cv = curls.eval(&q.points);
    let residual = outside(&sr.eval(&q.points), &cv, &q);
    let g = inner(&cv, &cv, &q.weights);
    if rank(&g) < sr.len() {
        return Ok(1.0);
    }
    Ok(residual)
}

/// Residuals of the face traces of the trimmed spaces.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TraceReport {
    /// Tangential part of `sigma n` outside `P^{k-1}(F; R^2)`, `sigma` in `SRTrim^k`.
    pub srtrim: f64,
    /// Tangential part of `u x n` outside `CGTrim^k(F)`, `u` in `HTrim^k`.
    pub htrim: f64,
}

pub fn check_trimmed_traces(m: &Mesh, cell: usize, k: usize) -> Result<TraceReport> {
    let ent = Entity::Cell(cell);
    let sr = decomposition_basis(m, SpaceKind::SRTrim, ent, k as i64)?;
    let ht = decomposition_basis(m, SpaceKind::HTrim, ent, k as i64)?;
    let mut rep = TraceReport { srtrim: 0.0, htrim: 0.0 };
    for &f in &m.cells[cell].faces {
        let face = &m.faces[f];
        let fe = Entity::Face(f);
        let q = fe.quadrature(m, 2 * k + 2);
        let [t1, t2] = face.tangents;
        let n = face.normal;

        if !sr.is_empty() {
            let sv = sr.eval(&q.points);
            let tn: Vec<DMatrix<f64>> = [t1, t2].iter().map(|t| contract(&sv, t, &n)).collect();
            let on = if k == 0 {
                vec![DMatrix::zeros(q.len(), 0); 2]
            } else {
                PolyBasis::tensor(&scalar_basis(m, fe, k - 1)?, (2, 1), &DMatrix::identity(2, 2)).eval(&q.points)
            };
            rep.srtrim = rep.srtrim.max(outside(&on, &tn, &q));
        }
        if !ht.is_empty() {
            let xn = cross_rows(&ht.eval(&q.points), &n);
            let tt: Vec<DMatrix<f64>> =
                [(t1, t1), (t1, t2), (t2, t1), (t2, t2)].iter().map(|(a, b)| contract(&xn, a, b)).collect();
            let cg = decomposition_basis(m, SpaceKind::CGTrim, fe, k as i64)?;
            rep.htrim = rep.htrim.max(outside(&cg.eval(&q.points), &tt, &q));
        }
    }
    Ok(rep)
}
