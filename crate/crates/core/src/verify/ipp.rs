use super::random_on;
use crate::ddr::element::{frame_contract, frame_dot};
use crate::mesh::{Mesh, Point};
use crate::poly::{apply, contract, cross_rows, directional, dot, ops, Entity, Frame, PolyBasis, Quadrature};
use crate::Result;
use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

/// Largest relative residuals of the integration by parts identities.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct IppReport {
    pub devgrad_cell: f64,
    pub devgrad_face_nt: f64,
    pub devgrad_face_tt: f64,
    pub symcurl_cell: f64,
    pub symcurl_face_nn: f64,
    pub symcurl_face_tt: f64,
    pub divdiv_cell: f64,
    /// The divdiv identity with a minus sign on the face term
    /// `int_F (2 div_F u_nt + d_n u_nn) v`; expected to fail.
    pub divdiv_cell_minus_face_term: f64,
}

impl IppReport {
    pub fn max(&self) -> f64 {
        [
            self.devgrad_cell,
            self.devgrad_face_nt,
            self.devgrad_face_tt,
            self.symcurl_cell,
            self.symcurl_face_nn,
            self.symcurl_face_tt,
            self.divdiv_cell,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `int a b` for single-column values.
fn int(a: &DMatrix<f64>, b: &DMatrix<f64>, q: &Quadrature) -> f64 {
    a.iter().zip(b.iter()).zip(&q.weights).map(|((x, y), w)| x * y * w).sum()
}

/// `int sum_c a_c b_c`.
fn int_all(a: &[DMatrix<f64>], b: &[DMatrix<f64>], q: &Quadrature) -> f64 {
    a.iter().zip(b).map(|(x, y)| int(x, y, q)).sum()
}

/// Residual of `lhs = sum terms`, relative to the size of the terms.
fn residual(lhs: f64, terms: &[f64]) -> f64 {
    let scale = terms.iter().map(|t| t.abs()).sum::<f64>().max(lhs.abs());
    let d = (lhs - terms.iter().sum::<f64>()).abs();
    if scale > 0.0 {
        d / scale
    } else {
        d
    }
}

struct FaceView {
    orientation: f64,
    normal: Point,
    tangents: [Point; 2],
    frame: Frame,
    q: Quadrature,
    /// `(edge id, omega_FE, n_FE, quadrature)`.
    edges: Vec<(usize, f64, Point, Quadrature)>,
}

fn face_views(m: &Mesh, cell: usize, degree: usize) -> Vec<FaceView> {
    let c = &m.cells[cell];
    c.faces
        .iter()
        .zip(&c.face_orientations)
        .map(|(&f, &o)| {
            let face = &m.faces[f];
            FaceView {
                orientation: o,
                normal: face.normal,
                tangents: face.tangents,
                frame: Frame::face(m, f),
                q: Entity::Face(f).quadrature(m, degree),
                edges: face
                    .edges
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| (e, face.edge_orientations[i], face.edge_normals[i], Entity::Edge(e).quadrature(m, degree)))
                    .collect(),
            }
        })
        .collect()
}

fn scalar(v: Vec<DMatrix<f64>>) -> DMatrix<f64> {
    v.into_iter().next().expect("scalar family")
}

/// Checks the integration by parts identities on cell `cell` with random
/// fields of degree `k + 2`, `trials` times.
pub fn check_integration_by_parts<R: Rng>(m: &Mesh, cell: usize, k: usize, trials: usize, rng: &mut R) -> Result<IppReport> {
    let deg = k + 2;
    let qdeg = 2 * deg + 2;
    let qc = Entity::Cell(cell).quadrature(m, qdeg);
    let faces = face_views(m, cell, qdeg);
    let mut rep = IppReport {
        devgrad_cell: 0.0,
        devgrad_face_nt: 0.0,
        devgrad_face_tt: 0.0,
        symcurl_cell: 0.0,
        symcurl_face_nn: 0.0,
        symcurl_face_tt: 0.0,
        divdiv_cell: 0.0,
        divdiv_cell_minus_face_term: 0.0,
    };
    let cell_frame = Frame::cell(m, cell);
    for _ in 0..trials {
        let v = random_on(cell_frame, (3, 1), deg, 1, rng);
        let gv = ops::grad(&v)?;
        let sigma = ops::dev(&random_on(cell_frame, (3, 3), deg, 1, rng))?;

        // devgrad, element
        let lhs = int_all(&ops::dev(&gv)?.eval(&qc.points), &sigma.eval(&qc.points), &qc);
        let mut terms = vec![-int_all(&v.eval(&qc.points), &ops::div(&sigma)?.eval(&qc.points), &qc)];
        for f in &faces {
            let sn = apply(&sigma.eval(&f.q.points), &f.normal);
            terms.push(f.orientation * int_all(&v.eval(&f.q.points), &sn, &f.q));
        }
        rep.devgrad_cell = rep.devgrad_cell.max(residual(lhs, &terms));

        // devgrad, faces
        let divv = ops::div(&v)?;
        for f in &faces {
            let fq = &f.q;
            let gvals = gv.eval(&fq.points);
            let vals = v.eval(&fq.points);
            let vn = dot(&vals, &f.normal);

            let w = random_on(f.frame, (2, 1), deg, 1, rng);
            let wv = w.eval(&fq.points);
            let lhs: f64 = (0..2).map(|a| int(&contract(&gvals, &f.normal, &f.tangents[a]), &wv[a], fq)).sum();
            let mut terms = vec![-int(&vn, &scalar(ops::div(&w)?.eval(&fq.points)), fq)];
            for (_, wfe, nfe, eq) in &f.edges {
                let vn = dot(&v.eval(&eq.points), &f.normal);
                let wn = frame_dot(&w.eval(&eq.points), &f.tangents, nfe);
                terms.push(wfe * int(&vn, &wn, eq));
            }
            rep.devgrad_face_nt = rep.devgrad_face_nt.max(residual(lhs, &terms));

            let s = random_on(f.frame, (2, 2), deg, 1, rng);
            let sv = s.eval(&fq.points);
            let dgv = ops::dev(&gv)?.eval(&fq.points);
            let mut lhs = 0.0;
            for a in 0..2 {
                for b in 0..2 {
                    lhs += int(&contract(&dgv, &f.tangents[a], &f.tangents[b]), &sv[2 * a + b], fq);
                }
            }
            let ds = ops::div(&s)?.eval(&fq.points);
            let mut terms = vec![
                -(0..2).map(|a| int(&dot(&vals, &f.tangents[a]), &ds[a], fq)).sum::<f64>(),
                -int(&scalar(divv.eval(&fq.points)), &(&sv[0] + &sv[3]), fq) / 3.0,
            ];
            for (e, wfe, nfe, eq) in &f.edges {
                let t = m.edges[*e].tangent;
                let ve = v.eval(&eq.points);
                let se = s.eval(&eq.points);
                let a = int(&dot(&ve, &t), &frame_contract(&se, &f.tangents, &t, nfe), eq);
                let b = int(&dot(&ve, nfe), &frame_contract(&se, &f.tangents, nfe, nfe), eq);
                terms.push(wfe * (a + b));
            }
            rep.devgrad_face_tt = rep.devgrad_face_tt.max(residual(lhs, &terms));
        }

        // symcurl, element
        let tau = ops::dev(&random_field_on(cell_frame, rng, deg))?;
        let ups = ops::sym(&random_field_on(cell_frame, rng, deg))?;
        let lhs = int_all(&ops::curl(&tau)?.eval(&qc.points), &ups.eval(&qc.points), &qc);
        let mut terms = vec![int_all(&tau.eval(&qc.points), &ops::curl(&ups)?.eval(&qc.points), &qc)];
        for f in &faces {
            let sxn = cross_rows(&ups.eval(&f.q.points), &f.normal);
            terms.push(f.orientation * int_all(&tau.eval(&f.q.points), &sxn, &f.q));
        }
        rep.symcurl_cell = rep.symcurl_cell.max(residual(lhs, &terms));

        // symcurl, faces
        let ctau = ops::curl(&tau)?;
        let dtau: Vec<Vec<PolyBasis>> = faces
            .iter()
            .map(|f| {
                let d: Vec<PolyBasis> = f.tangents.iter().map(|t| directional(&tau, t)).collect();
                vec![
                    directional(&d[0], &f.tangents[0]),
                    directional(&d[0], &f.tangents[1]),
                    directional(&d[1], &f.tangents[1]),
                ]
            })
            .collect();
        for (fi, f) in faces.iter().enumerate() {
            let fq = &f.q;
            let [t1, t2] = f.tangents;
            let n = f.normal;
            let r = random_on(f.frame, (1, 1), deg, 1, rng);
            let rv = scalar(r.eval(&fq.points));
            let tv = tau.eval(&fq.points);

            let lhs = int(&contract(&ctau.eval(&fq.points), &n, &n), &rv, fq);
            let cr = ops::curl_f(&r)?.eval(&fq.points);
            let mut terms = vec![(0..2).map(|a| int(&contract(&tv, &n, &f.tangents[a]), &cr[a], fq)).sum::<f64>()];
            for (e, wfe, _, eq) in &f.edges {
                let t = m.edges[*e].tangent;
                terms.push(-wfe * int(&contract(&tau.eval(&eq.points), &n, &t), &scalar(r.eval(&eq.points)), eq));
            }
            rep.symcurl_face_nn = rep.symcurl_face_nn.max(residual(lhs, &terms));

            let [d11, d12, d22] = [&dtau[fi][0], &dtau[fi][1], &dtau[fi][2]];
            let (v11, v12, v22) = (d11.eval(&fq.points), d12.eval(&fq.points), d22.eval(&fq.points));
            let lap = contract(&v11, &t1, &t2) - contract(&v12, &t1, &t1) + contract(&v12, &t2, &t2)
                - contract(&v22, &t2, &t1);
            let lhs = int(&lap, &rv, fq);
            let cg = ops::curl_f(&ops::grad(&r)?)?.eval(&fq.points);
            let mut cgterm = 0.0;
            for a in 0..2 {
                for b in 0..2 {
                    cgterm += int(&contract(&tv, &f.tangents[a], &f.tangents[b]), &cg[2 * a + b], fq);
                }
            }
            let mut terms = vec![-cgterm];
            let gr = ops::grad(&r)?;
            for (e, wfe, nfe, eq) in &f.edges {
                let edge = &m.edges[*e];
                let t = edge.tangent;
                let te = tau.eval(&eq.points);
                let ge = gr.eval(&eq.points);
                let dn = frame_dot(&ge, &f.tangents, nfe);
                let dt = frame_dot(&ge, &f.tangents, &t);
                let re = scalar(r.eval(&eq.points));
                let dtn = directional(&tau, nfe).eval(&eq.points);
                terms.push(wfe * int(&contract(&te, nfe, &t), &dn, eq));
                terms.push(-wfe * int(&(contract(&te, nfe, nfe) * 2.0 + contract(&te, &n, &n)), &dt, eq));
                terms.push(-wfe * int(&contract(&dtn, nfe, &t), &re, eq));
                let ends = [m.vertices[edge.vertices[0]], m.vertices[edge.vertices[1]]];
                let tn = contract(&tau.eval(&ends), nfe, nfe);
                let rn = scalar(r.eval(&ends));
                terms.push(wfe * (tn[(1, 0)] * rn[(1, 0)] - tn[(0, 0)] * rn[(0, 0)]));
            }
            rep.symcurl_face_tt = rep.symcurl_face_tt.max(residual(lhs, &terms));
        }

        // divdiv, element
        let u = ops::sym(&random_field_on(cell_frame, rng, deg))?;
        let p = random_on(cell_frame, (1, 1), deg, 1, rng);
        let gp = ops::grad(&p)?;
        let ddu = ops::div(&ops::div(&u)?)?;
        let lhs = int(&scalar(ddu.eval(&qc.points)), &scalar(p.eval(&qc.points)), &qc);
        let mut terms = vec![int_all(&u.eval(&qc.points), &ops::hess(&p)?.eval(&qc.points), &qc)];
        let mut face_terms = 0.0;
        for f in &faces {
            let fq = &f.q;
            let w = f.orientation;
            for (_, wfe, nfe, eq) in &f.edges {
                let c = contract(&u.eval(&eq.points), nfe, &f.normal);
                terms.push(-w * wfe * int(&c, &scalar(p.eval(&eq.points)), eq));
            }
            let uv = u.eval(&fq.points);
            terms.push(-w * int(&contract(&uv, &f.normal, &f.normal), &dot(&gp.eval(&fq.points), &f.normal), fq));
            let mut d = contract(&directional(&u, &f.normal).eval(&fq.points), &f.normal, &f.normal);
            for t in &f.tangents {
                d += contract(&directional(&u, t).eval(&fq.points), &f.normal, t) * 2.0;
            }
            face_terms += w * int(&d, &scalar(p.eval(&fq.points)), fq);
        }
        let mut plus = terms.clone();
        plus.push(face_terms);
        terms.push(-face_terms);
        rep.divdiv_cell = rep.divdiv_cell.max(residual(lhs, &plus));
        rep.divdiv_cell_minus_face_term = rep.divdiv_cell_minus_face_term.max(residual(lhs, &terms));
    }
    Ok(rep)
}

fn random_field_on<R: Rng>(frame: Frame, rng: &mut R, deg: usize) -> PolyBasis {
    random_on(frame, (3, 3), deg, 1, rng)
}
