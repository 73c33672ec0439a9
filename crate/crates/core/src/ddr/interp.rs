//! Interpolators of polynomial fields given on a three-dimensional frame
//! with canonical axes (a cell frame or the global frame).

use super::element::{add_block, integrate, quadrature_degree, Element};
use super::layout::Location;
use crate::mesh::Point;
use crate::poly::{contract, dot, traceless_basis, Entity, PolyBasis, Quadrature};
use crate::{Error, Result};
use nalgebra::DMatrix;
use std::borrow::Cow;
use std::f64::consts::SQRT_2;

fn check_input(b: &PolyBasis, shape: (usize, usize), what: &str) -> Result<()> {
    if b.frame.dim != 3 {
        return Err(Error::InvalidArgument(format!("{what} input must be trivariate")));
    }
    let canonical = b
        .frame
        .axes
        .iter()
        .enumerate()
        .all(|(a, ax)| (ax - Point::ith(a, 1.0)).norm() < 1e-14);
    if !canonical {
        return Err(Error::InvalidArgument(format!("{what} input frame must use the canonical axes")));
    }
    if b.shape != shape {
        return Err(Error::InvalidArgument(format!(
            "{what} input has shape {:?}, expected {shape:?}",
            b.shape
        )));
    }
    Ok(())
}

/// Partial derivatives `d/dx_b` of a family on a canonical frame.
fn partials(b: &PolyBasis) -> [PolyBasis; 3] {
    [b.derivative(0), b.derivative(1), b.derivative(2)]
}

/// `sum_b d_b * u_b`, component-wise.
fn along(d: &[Vec<DMatrix<f64>>; 3], u: &Point) -> Vec<DMatrix<f64>> {
    (0..d[0].len())
        .map(|c| &d[0][c] * u[0] + &d[1][c] * u[1] + &d[2][c] * u[2])
        .collect()
}

/// Largest pointwise norm over the values at the cell quadrature nodes.
fn magnitude(vals: &[DMatrix<f64>]) -> f64 {
    vals.iter().map(|v| v.amax()).fold(0.0, f64::max)
}

impl Element<'_> {
    fn interp_quad<'s>(&self, entity: Entity, stored: &'s Quadrature, deg_in: usize) -> Cow<'s, Quadrature> {
        let need = quadrature_degree(self.k).max(deg_in + self.k + 2);
        if need <= stored.degree {
            Cow::Borrowed(stored)
        } else {
            Cow::Owned(entity.quadrature(self.mesh, need))
        }
    }

    fn cell_quad(&self, deg_in: usize) -> Cow<'_, Quadrature> {
        self.interp_quad(Entity::Cell(self.cell), &self.q, deg_in)
    }

    fn face_quad(&self, i: usize, deg_in: usize) -> Cow<'_, Quadrature> {
        let f = &self.faces[i];
        self.interp_quad(Entity::Face(f.id), &f.q, deg_in)
    }

    fn edge_quad(&self, i: usize, deg_in: usize) -> Cow<'_, Quadrature> {
        let e = &self.edges[i];
        self.interp_quad(Entity::Edge(e.id), &e.q, deg_in)
    }

    /// Devgrad interpolate of a vector family (columns are fields).
    pub fn interpolate_devgrad(&self, v: &PolyBasis) -> Result<DMatrix<f64>> {
        check_input(v, (3, 1), "devgrad interpolator")?;
        let (ki, deg) = (self.k as i64, v.degree);
        let lay = &self.devgrad;
        let mut out = DMatrix::zeros(lay.total(), v.len());
        let dv = partials(v);

        let q = self.cell_quad(deg);
        let vals = v.eval(&q.points);
        let p = self.cell_poly(ki - 1).eval(&q.points);
        let (off, _) = lay.range(Location::Cell, "v");
        let n = p[0].ncols();
        for a in 0..3 {
            add_block(&mut out, off + a * n, 0, &integrate(&p[0], &vals[a], &q.weights));
        }

        for (i, f) in self.faces.iter().enumerate() {
            let q = self.face_quad(i, deg);
            let vals = v.eval(&q.points);
            let dvals: [Vec<DMatrix<f64>>; 3] = [0, 1, 2].map(|b| dv[b].eval(&q.points));
            let pk = f.poly(ki).eval(&q.points);
            let pkm = f.poly(ki - 1).eval(&q.points);
            let loc = Location::Face(i);
            let (off, _) = lay.range(loc, "vn");
            add_block(&mut out, off, 0, &integrate(&pk[0], &dot(&vals, &f.normal), &q.weights));
            let (off, _) = lay.range(loc, "vt");
            let n = pkm[0].ncols();
            for a in 0..2 {
                let vt = dot(&vals, &f.tangents[a]);
                add_block(&mut out, off + a * n, 0, &integrate(&pkm[0], &vt, &q.weights));
            }
            let divv = &dvals[0][0] + &dvals[1][1] + &dvals[2][2];
            let (off, _) = lay.range(loc, "g");
            add_block(&mut out, off, 0, &integrate(&pkm[0], &divv, &q.weights));
        }

        for (i, e) in self.edges.iter().enumerate() {
            let q = self.edge_quad(i, deg);
            let vals = v.eval(&q.points);
            let dvals: [Vec<DMatrix<f64>>; 3] = [0, 1, 2].map(|b| dv[b].eval(&q.points));
            let pkm = e.poly(ki - 1).eval(&q.points);
            let pk = e.poly(ki).eval(&q.points);
            let loc = Location::Edge(i);
            let (off, _) = lay.range(loc, "vt");
            add_block(&mut out, off, 0, &integrate(&pkm[0], &dot(&vals, &e.tangent), &q.weights));
            let (off, _) = lay.range(loc, "vn");
            let n = pk[0].ncols();
            for a in 0..2 {
                add_block(&mut out, off + a * n, 0, &integrate(&pk[0], &dot(&vals, &e.normals[a]), &q.weights));
            }
            let (off, _) = lay.range(loc, "g");
            for b in 0..2 {
                // n_a^T grad(v) n_b = n_a . d_{n_b} v
                let dn = along(&dvals, &e.normals[b]);
                for a in 0..2 {
                    let g = dot(&dn, &e.normals[a]);
                    add_block(&mut out, off + (2 * a + b) * n, 0, &integrate(&pk[0], &g, &q.weights));
                }
            }
        }

        let cverts = &self.mesh.cells[self.cell].vertices;
        for (i, &gv) in cverts.iter().enumerate() {
            let x = [self.mesh.vertices[gv]];
            let vals = v.eval(&x);
            let loc = Location::Vertex(i);
            let (off, _) = lay.range(loc, "v");
            for a in 0..3 {
                out.row_mut(off + a).copy_from(&vals[a].row(0));
            }
            let (off, _) = lay.range(loc, "g");
            for b in 0..3 {
                let d = dv[b].eval(&x);
                for a in 0..3 {
                    out.row_mut(off + 3 * a + b).copy_from(&d[a].row(0));
                }
            }
        }
        Ok(out)
    }

    /// Symcurl interpolate of a traceless matrix family.
    pub fn interpolate_symcurl(&self, tau: &PolyBasis) -> Result<DMatrix<f64>> {
        check_input(tau, (3, 3), "symcurl interpolator")?;
        let (ki, deg) = (self.k as i64, tau.degree);
        let lay = &self.symcurl;
        let mut out = DMatrix::zeros(lay.total(), tau.len());

        let q = self.cell_quad(deg);
        let vals = tau.eval(&q.points);
        let tr = &vals[0] + &vals[4] + &vals[8];
        if tr.amax() > 1e-10 * magnitude(&vals).max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidArgument("symcurl interpolator needs traceless input".into()));
        }
        let (off, _) = lay.range(Location::Cell, "tau");
        add_block(&mut out, off, 0, &crate::poly::inner(&self.srtrim.eval(&q.points), &vals, &q.weights));

        let dtau = partials(tau);
        for (i, f) in self.faces.iter().enumerate() {
            let q = self.face_quad(i, deg);
            let vals = tau.eval(&q.points);
            let loc = Location::Face(i);
            let nt: Vec<_> = (0..2).map(|a| contract(&vals, &f.normal, &f.tangents[a])).collect();
            let (off, _) = lay.range(loc, "rt");
            add_block(&mut out, off, 0, &crate::poly::inner(&f.rt.eval(&q.points), &nt, &q.weights));
            let mut tt = Vec::with_capacity(4);
            for a in 0..2 {
                for b in 0..2 {
                    tt.push(contract(&vals, &f.tangents[a], &f.tangents[b]));
                }
            }
            let (off, _) = lay.range(loc, "cg");
            add_block(&mut out, off, 0, &crate::poly::inner(&f.cg.eval(&q.points), &tt, &q.weights));
        }

        for (i, e) in self.edges.iter().enumerate() {
            let q = self.edge_quad(i, deg);
            let vals = tau.eval(&q.points);
            let dvals: [Vec<DMatrix<f64>>; 3] = [0, 1, 2].map(|b| dtau[b].eval(&q.points));
            let pk = e.poly(ki).eval(&q.points);
            let pk1 = e.poly(ki + 1).eval(&q.points);
            let loc = Location::Edge(i);
            let n = &e.normals;
            let (off, _) = lay.range(loc, "tau");
            let nk = pk[0].ncols();
            for a in 0..2 {
                for b in 0..2 {
                    let c = contract(&vals, &n[a], &n[b]);
                    add_block(&mut out, off + (2 * a + b) * nk, 0, &integrate(&pk[0], &c, &q.weights));
                }
            }
            let nk1 = pk1[0].ncols();
            let (off, _) = lay.range(loc, "tt");
            for a in 0..2 {
                let c = contract(&vals, &n[a], &e.tangent);
                add_block(&mut out, off + a * nk1, 0, &integrate(&pk1[0], &c, &q.weights));
            }
            let (off, _) = lay.range(loc, "c");
            for b in 0..2 {
                let dn = along(&dvals, &n[b]);
                for a in 0..2 {
                    let c = contract(&dn, &n[a], &e.tangent);
                    add_block(&mut out, off + (2 * a + b) * nk1, 0, &integrate(&pk1[0], &c, &q.weights));
                }
            }
        }

        let bt = traceless_basis().transpose();
        let cverts = &self.mesh.cells[self.cell].vertices;
        for (i, &gv) in cverts.iter().enumerate() {
            let vals = tau.eval(&[self.mesh.vertices[gv]]);
            let mut m = DMatrix::zeros(9, tau.len());
            for c in 0..9 {
                m.row_mut(c).copy_from(&vals[c].row(0));
            }
            let (off, _) = lay.range(Location::Vertex(i), "tau");
            add_block(&mut out, off, 0, &(&bt * m));
        }
        Ok(out)
    }

    /// Divdiv interpolate of a symmetric matrix family.
    pub fn interpolate_divdiv(&self, u: &PolyBasis) -> Result<DMatrix<f64>> {
        check_input(u, (3, 3), "divdiv interpolator")?;
        let (ki, deg) = (self.k as i64, u.degree);
        let lay = &self.divdiv;
        let mut out = DMatrix::zeros(lay.total(), u.len());

        let q = self.cell_quad(deg);
        let vals = u.eval(&q.points);
        let skew = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| (&vals[3 * i + j] - &vals[3 * j + i]).amax())
            .fold(0.0, f64::max);
        if skew > 1e-10 * magnitude(&vals).max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidArgument("divdiv interpolator needs symmetric input".into()));
        }
        let (off, _) = lay.range(Location::Cell, "h");
        add_block(&mut out, off, 0, &crate::poly::inner(&self.htrim.eval(&q.points), &vals, &q.weights));

        let du = partials(u);
        for (i, f) in self.faces.iter().enumerate() {
            let q = self.face_quad(i, deg);
            let vals = u.eval(&q.points);
            let dvals: [Vec<DMatrix<f64>>; 3] = [0, 1, 2].map(|b| du[b].eval(&q.points));
            let p = f.poly(ki + 1).eval(&q.points);
            let n = &f.normal;
            let loc = Location::Face(i);
            let (off, _) = lay.range(loc, "u");
            add_block(&mut out, off, 0, &integrate(&p[0], &contract(&vals, n, n), &q.weights));
            let mut d = contract(&along(&dvals, n), n, n);
            for a in 0..2 {
                d += contract(&along(&dvals, &f.tangents[a]), &f.tangents[a], n) * 2.0;
            }
            let (off, _) = lay.range(loc, "d");
            add_block(&mut out, off, 0, &integrate(&p[0], &d, &q.weights));
        }

        for (i, e) in self.edges.iter().enumerate() {
            let q = self.edge_quad(i, deg);
            let vals = u.eval(&q.points);
            let p = e.poly(ki + 1).eval(&q.points);
            let n = &e.normals;
            let comps = [
                contract(&vals, &n[0], &n[0]),
                contract(&vals, &n[1], &n[1]),
                contract(&vals, &n[0], &n[1]) * SQRT_2,
            ];
            let (off, _) = lay.range(Location::Edge(i), "u");
            let np = p[0].ncols();
            for (c, v) in comps.iter().enumerate() {
                add_block(&mut out, off + c * np, 0, &integrate(&p[0], v, &q.weights));
            }
        }
        Ok(out)
    }
}
