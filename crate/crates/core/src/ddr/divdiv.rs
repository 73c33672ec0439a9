use super::element::{add_block, d3, frame_dot, integrate, Element};
use super::layout::Location;
use crate::linalg::solve;
use crate::mesh::Point;
use crate::poly::{dot, inner, ops, sym2_basis, sym_basis, PolyBasis};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Sign of the face term `int_F D v` in the discrete divdiv operator.
pub const DD_FACE_SIGN: f64 = 1.0;
/// Sign of the face term `int_F D v` in the potential reconstruction.
pub const POTENTIAL_FACE_SIGN: f64 = -1.0;

/// `u^T E_c v` for the three symmetric edge-normal matrices `E_c`
/// (coordinates in the orthonormal basis of `S_2`) embedded with the
/// edge normals.
pub fn sym2_contract(normals: &[Point; 2], u: &Point, v: &Point) -> [f64; 3] {
    let s = sym2_basis();
    let mut out = [0.0; 3];
    for (c, o) in out.iter_mut().enumerate() {
        for i in 0..2 {
            for j in 0..2 {
                *o += s[(2 * i + j, c)] * normals[i].dot(u) * normals[j].dot(v);
            }
        }
    }
    out
}

/// Local divdiv operators needed by the mixed scheme.
#[derive(Clone, Debug)]
pub struct DivDivOperators {
    /// Discrete divdiv onto the orthonormal basis of `P^k(T)`.
    pub dd: DMatrix<f64>,
    /// Potential onto [`Element::potential_basis`].
    pub potential: DMatrix<f64>,
    /// Stabilisation matrix.
    pub stabilization: DMatrix<f64>,
    /// Discrete L2-like product: potential mass plus stabilisation.
    pub product: DMatrix<f64>,
}

impl Element<'_> {
    /// Adds `scale * int_E (u^T v_E v) p` for test values `p` on edge `ei`
    /// into the rows starting at `row`.
    fn edge_sym2_term(
        &self,
        m: &mut DMatrix<f64>,
        row: usize,
        ei: usize,
        test: &DMatrix<f64>,
        u: &Point,
        v: &Point,
        scale: f64,
    ) {
        let e = &self.edges[ei];
        let p = e.poly(self.k as i64 + 1).eval(&e.q.points);
        let g = integrate(test, &p[0], &e.q.weights);
        let (off, _) = self.divdiv.range(Location::Edge(ei), "u");
        let n = p[0].ncols();
        for (c, s) in sym2_contract(&e.normals, u, v).into_iter().enumerate() {
            if s != 0.0 {
                add_block(m, row, off + c * n, &(&g * (s * scale)));
            }
        }
    }

    /// Discrete divdiv: divdiv layout to `P^k(T)`.
    pub fn op_divdiv(&self) -> Result<DMatrix<f64>> {
        let k = self.k as i64;
        let lay = &self.divdiv;
        let v = self.cell_poly(k);
        let mut m = DMatrix::zeros(v.len(), lay.total());
        if !self.htrim.is_empty() {
            let hv = ops::hess(&v)?.eval(&self.q.points);
            let (off, _) = lay.range(Location::Cell, "h");
            add_block(&mut m, 0, off, &inner(&hv, &self.htrim.eval(&self.q.points), &self.q.weights));
        }
        let gv = ops::grad(&v)?;
        for (i, f) in self.faces.iter().enumerate() {
            let w = f.orientation;
            for &(ei, wfe, nfe) in &f.edges {
                let vals = v.eval(&self.edges[ei].q.points);
                self.edge_sym2_term(&mut m, 0, ei, &vals[0], &nfe, &f.normal, -w * wfe);
            }
            let q = &f.q;
            let p = f.poly(k + 1).eval(&q.points);
            let dn = dot(&gv.eval(&q.points), &f.normal);
            let (off, _) = lay.range(Location::Face(i), "u");
            add_block(&mut m, 0, off, &(integrate(&dn, &p[0], &q.weights) * -w));
            let vals = v.eval(&q.points);
            let (off, _) = lay.range(Location::Face(i), "d");
            add_block(&mut m, 0, off, &(integrate(&vals[0], &p[0], &q.weights) * (DD_FACE_SIGN * w)));
        }
        Ok(m)
    }

    /// Normal-normal trace reconstruction on local face `i`: divdiv layout
    /// to the orthonormal basis of `P^k(F)`.
    pub fn gamma(&self, i: usize) -> Result<DMatrix<f64>> {
        let k = self.k as i64;
        let f = &self.faces[i];
        let frame = [f.tangents[0], f.tangents[1]];
        let phi = f.poly(k);
        let n = phi.len();
        let ndof = self.divdiv.total();
        let q = &f.q;
        let gphi = ops::grad(&phi)?;
        let gvals = gphi.eval(&q.points);
        let mut a = DMatrix::zeros(n + 1, n + 1);
        a.view_mut((0, 0), (n, n)).copy_from(&inner(&gvals, &gvals, &q.weights));
        let mut rhs = DMatrix::zeros(n + 1, ndof);
        let lap = ops::div(&gphi)?.eval(&q.points);
        let pu = f.poly(k + 1).eval(&q.points);
        let (off, _) = self.divdiv.range(Location::Face(i), "u");
        add_block(&mut rhs, 0, off, &(-integrate(&lap[0], &pu[0], &q.weights)));
        for &(ei, wfe, nfe) in &f.edges {
            let e = &self.edges[ei];
            let dn = frame_dot(&gphi.eval(&e.q.points), &frame, &nfe);
            self.edge_sym2_term(&mut rhs, 0, ei, &dn, &f.normal, &f.normal, wfe);
            let vals = phi.eval(&e.q.points);
            let ones = DMatrix::from_element(e.q.len(), 1, 1.0);
            let l = integrate(&vals[0], &ones, &e.q.weights);
            for j in 0..n {
                a[(j, n)] += l[(j, 0)];
                a[(n, j)] += l[(j, 0)];
            }
            self.edge_sym2_term(&mut rhs, n, ei, &ones, &f.normal, &f.normal, 1.0);
        }
        let sol = solve(&a, &rhs).ok_or_else(|| Error::Singular(format!("trace reconstruction on face {}", f.id)))?;
        Ok(sol.rows(0, n).into_owned())
    }

    /// Orthonormal basis of `P^k(T; S)`, the target of the potential:
    /// column `c * dim P^k + j` is `phi_j E_c` with `E_c` the orthonormal
    /// symmetric basis.
    pub fn potential_basis(&self) -> PolyBasis {
        let p = self.cell_poly(self.k as i64);
        PolyBasis::tensor(&p, (3, 3), &sym_basis())
    }

    /// Symmetric matrix potential, given the discrete divdiv matrix.
    pub fn potential(&self, dd: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let k = self.k as i64;
        let lay = &self.divdiv;
        let psi = self.potential_basis();
        let nv = d3(k + 2) - 4;
        let nt = nv + self.choly.len();
        if nt != psi.len() {
            return Err(Error::DimensionMismatch {
                space: "potential test space".into(),
                expected: psi.len(),
                found: nt,
            });
        }
        let tests = self.scalar.columns(4, nv);
        let q = &self.q;
        let psi_vals = psi.eval(&q.points);
        let mut lhs = DMatrix::zeros(nt, nt);
        let mut rhs = DMatrix::zeros(nt, lay.total());
        if nv > 0 {
            let hv = ops::hess(&tests)?.eval(&q.points);
            lhs.view_mut((0, 0), (nv, nt)).copy_from(&inner(&hv, &psi_vals, &q.weights));
        }
        if !self.choly.is_empty() {
            let cv = self.choly.eval(&q.points);
            lhs.view_mut((nv, 0), (self.choly.len(), nt)).copy_from(&inner(&cv, &psi_vals, &q.weights));
            let (off, _) = lay.range(Location::Cell, "h");
            add_block(&mut rhs, nv, off, &inner(&cv, &self.htrim.eval(&q.points), &q.weights));
        }
        // int DD v only sees the P^k part of v
        let nk = d3(k);
        for t in 0..nv {
            if t + 4 < nk {
                let mut r = rhs.row_mut(t);
                r += dd.row(t + 4);
            }
        }
        let gt = ops::grad(&tests)?;
        for (i, f) in self.faces.iter().enumerate() {
            let w = f.orientation;
            for &(ei, wfe, nfe) in &f.edges {
                let vals = tests.eval(&self.edges[ei].q.points);
                self.edge_sym2_term(&mut rhs, 0, ei, &vals[0], &nfe, &f.normal, w * wfe);
            }
            let fq = &f.q;
            let dn = dot(&gt.eval(&fq.points), &f.normal);
            let g = f.poly(k).eval(&fq.points);
            let gamma = self.gamma(i)?;
            add_block(&mut rhs, 0, 0, &(integrate(&dn, &g[0], &fq.weights) * gamma * w));
            let p = f.poly(k + 1).eval(&fq.points);
            let vals = tests.eval(&fq.points);
            let (off, _) = lay.range(Location::Face(i), "d");
            add_block(&mut rhs, 0, off, &(integrate(&vals[0], &p[0], &fq.weights) * (POTENTIAL_FACE_SIGN * w)));
        }
        solve(&lhs, &rhs).ok_or_else(|| Error::Singular(format!("potential system on cell {}", self.cell)))
    }

    /// Diagonal weights of the component product in the orthonormal DOF
    /// bases: 1 on the element, `h_T` on face traces, `h_T^3` on face
    /// `D` blocks and `h_T^2` on edges.
    pub fn component_weights(&self) -> DVector<f64> {
        let h = self.diameter;
        let mut w = DVector::zeros(self.divdiv.total());
        for b in &self.divdiv.blocks {
            let s = match (b.location, b.name) {
                (Location::Cell, _) => 1.0,
                (Location::Face(_), "u") => h,
                (Location::Face(_), _) => h * h * h,
                _ => h * h,
            };
            w.rows_mut(b.offset, b.size).fill(s);
        }
        w
    }

    /// Component product matrix (diagonal).
    pub fn component_product(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.component_weights())
    }

    /// Stabilisation `[I P u - u, I P v - v]` given the potential matrix.
    pub fn stabilization(&self, potential: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let j = self.interpolate_divdiv(&self.potential_basis())?;
        let n = self.divdiv.total();
        let d = j * potential - DMatrix::identity(n, n);
        let mut wd = d.clone();
        for (r, w) in self.component_weights().iter().enumerate() {
            wd.row_mut(r).scale_mut(*w);
        }
        Ok(d.transpose() * wd)
    }

    /// Divdiv operator, potential, stabilisation and local product.
    pub fn divdiv_operators(&self) -> Result<DivDivOperators> {
        let dd = self.op_divdiv()?;
        let potential = self.potential(&dd)?;
        let stabilization = self.stabilization(&potential)?;
        let mut product = potential.transpose() * &potential + &stabilization;
        product = (&product + product.transpose()) * 0.5;
        Ok(DivDivOperators {
            dd,
            potential,
            stabilization,
            product,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym2_contraction_of_normals() {
        let n = [Point::x(), Point::y()];
        assert_eq!(sym2_contract(&n, &Point::x(), &Point::x()), [1.0, 0.0, 0.0]);
        let c = sym2_contract(&n, &Point::x(), &Point::y());
        assert!((c[2] - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(sym2_contract(&n, &Point::z(), &Point::x()), [0.0; 3]);
    }
}
