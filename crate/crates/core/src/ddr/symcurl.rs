use super::element::{add_block, frame_dot, integrate, Element};
use super::layout::Location;
use crate::mesh::Point;
use crate::poly::{contract, cross_rows, inner, ops, traceless_basis};
use crate::Result;
use nalgebra::DMatrix;
use std::f64::consts::SQRT_2;

/// The map `C` on 2x2 matrices, as a 4x4 matrix on row-major entries.
pub fn c_tensor() -> DMatrix<f64> {
    DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, 1.0, 0.0, 0.0, //
            -0.5, 0.0, 0.0, 0.5, //
            -0.5, 0.0, 0.0, 0.5, //
            0.0, 0.0, -1.0, 0.0,
        ],
    )
}

/// `C` followed by the coordinates of a symmetric 2x2 matrix in the
/// orthonormal basis `(e11, e22, (e12 + e21)/sqrt 2)`.
fn c_to_sym2() -> DMatrix<f64> {
    DMatrix::from_row_slice(
        3,
        4,
        &[
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, -1.0, 0.0, //
            -0.5 * SQRT_2, 0.0, 0.0, 0.5 * SQRT_2,
        ],
    )
}

/// Rows `u^T B_c v` over the traceless basis.
fn traceless_contraction(u: &Point, v: &Point) -> DMatrix<f64> {
    let b = traceless_basis();
    DMatrix::from_fn(1, 8, |_, c| {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += u[i] * b[(3 * i + j, c)] * v[j];
            }
        }
        s
    })
}

impl Element<'_> {
    /// Discrete symmetric curl: symcurl layout to divdiv layout.
    pub fn op_symcurl(&self) -> Result<DMatrix<f64>> {
        let k = self.k as i64;
        let (src, dst) = (&self.symcurl, &self.divdiv);
        let mut m = DMatrix::zeros(dst.total(), src.total());

        // edges
        let cmap = c_to_sym2();
        for (i, e) in self.edges.iter().enumerate() {
            let loc = Location::Edge(i);
            let nk = e.poly(k).len();
            let nk1 = e.poly(k + 1).len();
            let dk1 = &e.derivative[1];
            let (row, _) = dst.range(loc, "u");
            let (c_off, _) = src.range(loc, "c");
            let (t_off, _) = src.range(loc, "tau");
            for out in 0..3 {
                for comp in 0..4 {
                    let s = cmap[(out, comp)];
                    if s == 0.0 {
                        continue;
                    }
                    let r = row + out * nk1;
                    add_block(&mut m, r, c_off + comp * nk1, &(DMatrix::identity(nk1, nk1) * s));
                    add_block(&mut m, r, t_off + comp * nk, &(dk1.columns(2, nk) * (-s)).into_owned());
                    let (a, b) = (comp / 2, comp % 2);
                    let nn = traceless_contraction(&e.normals[a], &e.normals[b]);
                    for (col, vert) in [(0, e.vertices[0]), (1, e.vertices[1])] {
                        let (voff, _) = src.range(Location::Vertex(vert), "tau");
                        add_block(&mut m, r, voff, &(dk1.column(col) * &nn * (-s)));
                    }
                }
            }
        }

        for (i, f) in self.faces.iter().enumerate() {
            let frame = [f.tangents[0], f.tangents[1]];
            let loc = Location::Face(i);
            let q = &f.q;
            let r = f.poly(k + 1);

            // normal-normal component
            let (row, _) = dst.range(loc, "u");
            let curl_r = ops::curl_f(&r)?.eval(&q.points);
            let (off, _) = src.range(loc, "rt");
            add_block(&mut m, row, off, &inner(&curl_r, &f.rt.eval(&q.points), &q.weights));
            for &(ei, w, _) in &f.edges {
                let e = &self.edges[ei];
                let qe = &e.q;
                let rv = r.eval(&qe.points);
                let pt = e.poly(k + 1).eval(&qe.points);
                let (off, _) = src.range(Location::Edge(ei), "tt");
                let n = pt[0].ncols();
                for a in 0..2 {
                    let s = -w * e.normals[a].dot(&f.normal);
                    if s != 0.0 {
                        add_block(&mut m, row, off + a * n, &(integrate(&rv[0], &pt[0], &qe.weights) * s));
                    }
                }
            }

            // D component
            let (row, _) = dst.range(loc, "d");
            if !f.cg.is_empty() {
                let cgr = ops::curl_f(&ops::grad(&r)?)?.eval(&q.points);
                let (off, _) = src.range(loc, "cg");
                add_block(&mut m, row, off, &(-inner(&cgr, &f.cg.eval(&q.points), &q.weights)));
            }
            let gr = ops::grad(&r)?;
            for &(ei, w, nfe) in &f.edges {
                let e = &self.edges[ei];
                let qe = &e.q;
                let gvals = gr.eval(&qe.points);
                let dn = frame_dot(&gvals, &frame, &nfe);
                let dt = frame_dot(&gvals, &frame, &e.tangent);
                let rv = r.eval(&qe.points);
                let el = Location::Edge(ei);

                let pt = e.poly(k + 1).eval(&qe.points);
                let (off, _) = src.range(el, "tt");
                let n1 = pt[0].ncols();
                for a in 0..2 {
                    let s = w * e.normals[a].dot(&nfe);
                    if s != 0.0 {
                        add_block(&mut m, row, off + a * n1, &(integrate(&dn, &pt[0], &qe.weights) * s));
                    }
                }
                let pk = e.poly(k).eval(&qe.points);
                let (off, _) = src.range(el, "tau");
                let nk = pk[0].ncols();
                let dt_p = integrate(&dt, &pk[0], &qe.weights);
                for a in 0..2 {
                    for b in 0..2 {
                        let s = 2.0 * e.normals[a].dot(&nfe) * e.normals[b].dot(&nfe)
                            + e.normals[a].dot(&f.normal) * e.normals[b].dot(&f.normal);
                        if s != 0.0 {
                            add_block(&mut m, row, off + (2 * a + b) * nk, &(&dt_p * (-w * s)));
                        }
                    }
                }
                let (off, _) = src.range(el, "c");
                let r_p = integrate(&rv[0], &pt[0], &qe.weights);
                for a in 0..2 {
                    for b in 0..2 {
                        let s = e.normals[a].dot(&nfe) * e.normals[b].dot(&nfe);
                        if s != 0.0 {
                            add_block(&mut m, row, off + (2 * a + b) * n1, &(&r_p * (-w * s)));
                        }
                    }
                }
                let nn = traceless_contraction(&nfe, &nfe);
                let ends = r.eval(&[
                    self.mesh.vertices[self.mesh.edges[e.id].vertices[0]],
                    self.mesh.vertices[self.mesh.edges[e.id].vertices[1]],
                ]);
                for (p, sign) in [(0, -1.0), (1, 1.0)] {
                    let (voff, _) = src.range(Location::Vertex(e.vertices[p]), "tau");
                    let rv = ends[0].row(p).transpose();
                    add_block(&mut m, row, voff, &(rv * &nn * (w * sign)));
                }
            }
        }

        // element component, tested against Htrim^k(T)
        if !self.htrim.is_empty() {
            let (row, _) = dst.range(Location::Cell, "h");
            if !self.srtrim.is_empty() {
                let q = &self.q;
                let cs = ops::curl(&self.htrim)?.eval(&q.points);
                let (off, _) = src.range(Location::Cell, "tau");
                add_block(&mut m, row, off, &inner(&cs, &self.srtrim.eval(&q.points), &q.weights));
            }
            for (i, f) in self.faces.iter().enumerate() {
                let q = &f.q;
                let frame = [f.tangents[0], f.tangents[1]];
                let sxn = cross_rows(&self.htrim.eval(&q.points), &f.normal);
                let w = f.orientation;
                if !f.cg.is_empty() {
                    let mut tt = Vec::with_capacity(4);
                    for a in 0..2 {
                        for b in 0..2 {
                            tt.push(contract(&sxn, &frame[a], &frame[b]));
                        }
                    }
                    let (off, _) = src.range(Location::Face(i), "cg");
                    add_block(&mut m, row, off, &(inner(&tt, &f.cg.eval(&q.points), &q.weights) * w));
                }
                let nt: Vec<_> = (0..2).map(|a| contract(&sxn, &f.normal, &frame[a])).collect();
                let (off, _) = src.range(Location::Face(i), "rt");
                add_block(&mut m, row, off, &(inner(&nt, &f.rt.eval(&q.points), &q.weights) * w));
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_tensor_examples() {
        let e11 = DMatrix::from_column_slice(4, 1, &[1.0, 0.0, 0.0, 0.0]);
        let out = c_tensor() * e11;
        assert_eq!(out.as_slice(), &[0.0, -0.5, -0.5, 0.0]);
        let id = DMatrix::from_column_slice(4, 1, &[1.0, 0.0, 0.0, 1.0]);
        assert_eq!((c_tensor() * id).norm(), 0.0);
    }
}
