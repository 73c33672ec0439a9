use super::element::{add_block, frame_contract, frame_dot, integrate, Element};
use super::layout::Location;
use crate::poly::{apply, dot, ops, traceless_basis};
use crate::Result;
use nalgebra::DMatrix;

impl Element<'_> {
    /// Discrete devgrad: devgrad layout to symcurl layout.
    pub fn op_devgrad(&self) -> Result<DMatrix<f64>> {
        let k = self.k as i64;
        let (src, dst) = (&self.devgrad, &self.symcurl);
        let mut m = DMatrix::zeros(dst.total(), src.total());

        // element block, tested against SRtrim^k(T)
        if !self.srtrim.is_empty() {
            let (row, _) = dst.range(Location::Cell, "tau");
            let q = &self.q;
            let divs = ops::div(&self.srtrim)?.eval(&q.points);
            let pv = self.cell_poly(k - 1).eval(&q.points);
            let (off, _) = src.range(Location::Cell, "v");
            let n = pv[0].ncols();
            for a in 0..3 {
                add_block(&mut m, row, off + a * n, &(-integrate(&divs[a], &pv[0], &q.weights)));
            }
            for (i, f) in self.faces.iter().enumerate() {
                let q = &f.q;
                let s = self.srtrim.eval(&q.points);
                let sn = apply(&s, &f.normal);
                let w = f.orientation;
                let pn = f.poly(k).eval(&q.points);
                let (off, _) = src.range(Location::Face(i), "vn");
                let nn = dot(&sn, &f.normal);
                add_block(&mut m, row, off, &(integrate(&nn, &pn[0], &q.weights) * w));
                let pt = f.poly(k - 1).eval(&q.points);
                let (off, _) = src.range(Location::Face(i), "vt");
                let n = pt[0].ncols();
                for a in 0..2 {
                    let tn = dot(&sn, &f.tangents[a]);
                    add_block(&mut m, row, off + a * n, &(integrate(&tn, &pt[0], &q.weights) * w));
                }
            }
        }

        for (i, f) in self.faces.iter().enumerate() {
            let frame = [f.tangents[0], f.tangents[1]];
            let loc = Location::Face(i);
            let q = &f.q;

            // normal-tangential block, tested against RT^{k+1}(F)
            let (row, _) = dst.range(loc, "rt");
            let divw = ops::div(&f.rt)?.eval(&q.points);
            let pn = f.poly(k).eval(&q.points);
            let (off, _) = src.range(loc, "vn");
            add_block(&mut m, row, off, &(-integrate(&divw[0], &pn[0], &q.weights)));
            for &(ei, w, nfe) in &f.edges {
                let e = &self.edges[ei];
                let qe = &e.q;
                let wn = frame_dot(&f.rt.eval(&qe.points), &frame, &nfe);
                let pe = e.poly(k).eval(&qe.points);
                let (off, _) = src.range(Location::Edge(ei), "vn");
                let n = pe[0].ncols();
                for a in 0..2 {
                    let s = e.normals[a].dot(&f.normal) * w;
                    if s != 0.0 {
                        add_block(&mut m, row, off + a * n, &(integrate(&wn, &pe[0], &qe.weights) * s));
                    }
                }
            }

            // tangential-tangential block, tested against CGtrim^k(F)
            if f.cg.is_empty() {
                continue;
            }
            let (row, _) = dst.range(loc, "cg");
            let sig = f.cg.eval(&q.points);
            let divs = ops::div(&f.cg)?.eval(&q.points);
            let pt = f.poly(k - 1).eval(&q.points);
            let (off, _) = src.range(loc, "vt");
            let n = pt[0].ncols();
            for a in 0..2 {
                add_block(&mut m, row, off + a * n, &(-integrate(&divs[a], &pt[0], &q.weights)));
            }
            let tr = &sig[0] + &sig[3];
            let (off, _) = src.range(loc, "g");
            add_block(&mut m, row, off, &(integrate(&tr, &pt[0], &q.weights) * (-1.0 / 3.0)));
            for &(ei, w, nfe) in &f.edges {
                let e = &self.edges[ei];
                let qe = &e.q;
                let s = f.cg.eval(&qe.points);
                let tsn = frame_contract(&s, &frame, &e.tangent, &nfe);
                let nsn = frame_contract(&s, &frame, &nfe, &nfe);
                let pvt = e.poly(k - 1).eval(&qe.points);
                let (off, _) = src.range(Location::Edge(ei), "vt");
                add_block(&mut m, row, off, &(integrate(&tsn, &pvt[0], &qe.weights) * w));
                let pvn = e.poly(k).eval(&qe.points);
                let (off, _) = src.range(Location::Edge(ei), "vn");
                let n = pvn[0].ncols();
                for a in 0..2 {
                    let c = e.normals[a].dot(&nfe) * w;
                    if c != 0.0 {
                        add_block(&mut m, row, off + a * n, &(integrate(&nsn, &pvn[0], &qe.weights) * c));
                    }
                }
            }
        }

        for (i, e) in self.edges.iter().enumerate() {
            let loc = Location::Edge(i);
            let nk = e.poly(k).len();
            let nk1 = e.poly(k + 1).len();
            let [dk, dk1] = &e.derivative;
            let [v1, v2] = e.vertices;
            let (ge, _) = src.range(loc, "g");

            // tau_E = G_E - (tr G_E + D^k(v . t)) I / 3
            let (row, _) = dst.range(loc, "tau");
            let id = DMatrix::identity(nk, nk);
            for c in 0..4 {
                add_block(&mut m, row + c * nk, ge + c * nk, &id);
            }
            for a in [0, 3] {
                for b in [0, 3] {
                    add_block(&mut m, row + b * nk, ge + a * nk, &(&id * (-1.0 / 3.0)));
                }
            }
            let (vt, nvt) = src.range(loc, "vt");
            for b in [0, 3] {
                let r = row + b * nk;
                for (col, vert) in [(0, v1), (1, v2)] {
                    let (voff, _) = src.range(Location::Vertex(vert), "v");
                    for c in 0..3 {
                        let s = -e.tangent[c] / 3.0;
                        add_block(&mut m, r, voff + c, &(dk.column(col) * s).into_owned());
                    }
                }
                if nvt > 0 {
                    add_block(&mut m, r, vt, &(dk.columns(2, nvt) * (-1.0 / 3.0)).into_owned());
                }
            }

            // tt_a = D^{k+1}(n_a . v_V1, n_a . v_V2, vn_a)
            let (row, _) = dst.range(loc, "tt");
            let (vn, _) = src.range(loc, "vn");
            for a in 0..2 {
                let r = row + a * nk1;
                for (col, vert) in [(0, v1), (1, v2)] {
                    let (voff, _) = src.range(Location::Vertex(vert), "v");
                    for c in 0..3 {
                        let s = e.normals[a][c];
                        if s != 0.0 {
                            add_block(&mut m, r, voff + c, &(dk1.column(col) * s).into_owned());
                        }
                    }
                }
                add_block(&mut m, r, vn + a * nk, &dk1.columns(2, nk).into_owned());
            }

            // c_ab = D^{k+1}(n_a^T G_V1 n_b, n_a^T G_V2 n_b, G_E,ab)
            let (row, _) = dst.range(loc, "c");
            for a in 0..2 {
                for b in 0..2 {
                    let r = row + (2 * a + b) * nk1;
                    for (col, vert) in [(0, v1), (1, v2)] {
                        let (goff, _) = src.range(Location::Vertex(vert), "g");
                        for p in 0..3 {
                            for q in 0..3 {
                                let s = e.normals[a][p] * e.normals[b][q];
                                if s != 0.0 {
                                    add_block(&mut m, r, goff + 3 * p + q, &(dk1.column(col) * s).into_owned());
                                }
                            }
                        }
                    }
                    add_block(&mut m, r, ge + (2 * a + b) * nk, &dk1.columns(2, nk).into_owned());
                }
            }
        }

        // vertices: DEV G_V in the traceless basis
        let bt = traceless_basis().transpose();
        for v in 0..self.mesh.cells[self.cell].vertices.len() {
            let (row, _) = dst.range(Location::Vertex(v), "tau");
            let (col, _) = src.range(Location::Vertex(v), "g");
            add_block(&mut m, row, col, &bt);
        }
        Ok(m)
    }
}
