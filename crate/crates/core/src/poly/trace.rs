//! Restrictions of cell and face families to faces and edges, contracted
//! with the local frames.

use super::{contract, embed_matrix, embed_vector, scalar_basis, Entity, PolyBasis, Quadrature};
use crate::mesh::{Mesh, Point};
use crate::{Error, Result};
use nalgebra::DMatrix;

/// Which part of a trace to extract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceBlock {
    /// Normal-normal part (`2 x 2` on edges, scalar on faces).
    NormalNormal,
    /// Normal-tangential part: `n^T M t_a` on faces, `n_a^T M t_E` on edges.
    NormalTangential,
    /// Tangential part: `t_a^T M t_b` on faces, `t_E^T M t_E` on edges.
    Tangential,
    /// All components in the local frame (tangents first, then normals).
    Full,
}

/// Values with components along the global axes. Face families carry
/// components along `(t_1, t_2)`, or `(t_1, t_2, n)` when three-dimensional.
fn global_values(src: &PolyBasis, pts: &[Point]) -> Vec<DMatrix<f64>> {
    let vals = src.eval(pts);
    if src.frame.dim == 3 || src.shape == (1, 1) {
        return vals;
    }
    let [t1, t2, _] = src.frame.axes;
    let axes = [t1, t2, t1.cross(&t2)];
    let axes = &axes[..src.shape.0];
    if src.shape.1 == 1 {
        embed_vector(&vals, axes)
    } else {
        embed_matrix(&vals, axes)
    }
}

fn contract_values(
    vals: &[DMatrix<f64>],
    shape: (usize, usize),
    tangents: &[Point],
    normals: &[Point],
    block: TraceBlock,
) -> Result<(Vec<DMatrix<f64>>, (usize, usize))> {
    let frame: Vec<Point> = tangents.iter().chain(normals).copied().collect();
    let dotv = |u: &Point| &vals[0] * u[0] + &vals[1] * u[1] + &vals[2] * u[2];
    Ok(match shape {
        (1, 1) => (vals.to_vec(), (1, 1)),
        (3, 1) => {
            let axes: &[Point] = match block {
                TraceBlock::NormalNormal => normals,
                TraceBlock::Tangential => tangents,
                TraceBlock::Full => &frame,
                TraceBlock::NormalTangential => {
                    return Err(Error::InvalidArgument("normal-tangential trace of a vector".into()))
                }
            };
            (axes.iter().map(dotv).collect(), (axes.len(), 1))
        }
        (3, 3) => {
            let (rows, cols): (&[Point], &[Point]) = match block {
                TraceBlock::NormalNormal => (normals, normals),
                TraceBlock::NormalTangential => (normals, tangents),
                TraceBlock::Tangential => (tangents, tangents),
                TraceBlock::Full => (&frame, &frame),
            };
            let mut out = Vec::with_capacity(rows.len() * cols.len());
            for u in rows {
                for v in cols {
                    out.push(contract(vals, u, v));
                }
            }
            let shape = if cols.len() == 1 && rows.len() == 1 {
                (1, 1)
            } else if cols.len() == 1 {
                (rows.len(), 1)
            } else if rows.len() == 1 {
                (cols.len(), 1)
            } else {
                (rows.len(), cols.len())
            };
            (out, shape)
        }
        s => return Err(Error::InvalidArgument(format!("trace of shape {s:?}"))),
    })
}

/// Fits component values at the nodes of `q` with a family of degree
/// `degree` over the monomials of `entity`.
fn fit(
    m: &Mesh,
    entity: Entity,
    degree: usize,
    q: &Quadrature,
    vals: &[DMatrix<f64>],
    shape: (usize, usize),
) -> Result<PolyBasis> {
    let on = scalar_basis(m, entity, degree)?;
    let phi = on.eval(&q.points);
    let nm = on.nmono();
    let ncols = vals[0].ncols();
    let mut coef = DMatrix::zeros(nm * vals.len(), ncols);
    for (c, v) in vals.iter().enumerate() {
        let a = super::inner(&phi, std::slice::from_ref(v), &q.weights);
        coef.rows_mut(c * nm, nm).copy_from(&(&on.coef * a));
    }
    Ok(PolyBasis::new(on.frame, shape, degree, coef))
}

fn face_of_cell(m: &Mesh, cell: usize, face: usize) -> Result<()> {
    if m.cells.get(cell).is_some_and(|c| c.faces.contains(&face)) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("face {face} is not a face of cell {cell}")))
    }
}

/// Trace of a cell family on face `face`, in the face frame.
pub fn trace_to_face(m: &Mesh, cell: usize, src: &PolyBasis, face: usize, block: TraceBlock) -> Result<PolyBasis> {
    face_of_cell(m, cell, face)?;
    if src.frame.dim != 3 {
        return Err(Error::InvalidArgument("face traces take cell families".into()));
    }
    let f = &m.faces[face];
    let q = Entity::Face(face).quadrature(m, 2 * src.degree);
    let vals = global_values(src, &q.points);
    let (out, shape) = contract_values(&vals, src.shape, &f.tangents, &[f.normal], block)?;
    fit(m, Entity::Face(face), src.degree, &q, &out, shape)
}

/// Trace of a cell or face family on edge `edge`, in the edge frame.
pub fn trace_to_edge(m: &Mesh, src: &PolyBasis, edge: usize, block: TraceBlock) -> Result<PolyBasis> {
    let e = &m.edges[edge];
    let q = Entity::Edge(edge).quadrature(m, 2 * src.degree);
    let vals = global_values(src, &q.points);
    let shape = match src.shape {
        (1, 1) => (1, 1),
        (_, 1) => (3, 1),
        _ => (3, 3),
    };
    let (out, shape) = contract_values(&vals, shape, &[e.tangent], &e.normals, block)?;
    fit(m, Entity::Edge(edge), src.degree, &q, &out, shape)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{cartesian, perturbed_hexahedron, Mesh};
    use crate::poly::{ops, Frame};

    fn constant_matrix(m: &Mesh, vals: [f64; 9]) -> PolyBasis {
        PolyBasis::new(Frame::cell(m, 0), (3, 3), 0, DMatrix::from_column_slice(9, 1, &vals))
    }

    #[test]
    fn constant_normal_normal() {
        let m = perturbed_hexahedron(2);
        let vals = [1.0, 2.0, 3.0, 2.0, 5.0, 6.0, 3.0, 6.0, 9.0];
        let mm = nalgebra::Matrix3::from_row_slice(&vals);
        let src = constant_matrix(&m, vals);
        let f = m.cells[0].faces[2];
        let t = trace_to_face(&m, 0, &src, f, TraceBlock::NormalNormal).unwrap();
        let n = m.faces[f].normal;
        let v = t.eval(&[m.faces[f].center])[0][(0, 0)];
        assert!((v - n.dot(&(mm * n))).abs() < 1e-12);

        let e = m.cells[0].edges[3];
        let t = trace_to_edge(&m, &src, e, TraceBlock::NormalNormal).unwrap();
        assert_eq!(t.shape, (2, 2));
        let ns = m.edges[e].normals;
        let v = t.eval(&[m.edges[e].midpoint]);
        for a in 0..2 {
            for b in 0..2 {
                assert!((v[2 * a + b][(0, 0)] - ns[a].dot(&(mm * ns[b]))).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn coordinate_on_an_edge() {
        let m = cartesian(1, [0.0; 3], [1.0; 3]).unwrap();
        let e = m
            .edges
            .iter()
            .position(|e| (m.vertices[e.vertices[0]] - Point::zeros()).norm() < 1e-14 && e.tangent.x > 0.5)
            .unwrap();
        let x = PolyBasis::monomials(Frame::global(), 1).columns(1, 1);
        let t = trace_to_edge(&m, &x, e, TraceBlock::Full).unwrap();
        let v = t.eval(&[Point::zeros(), Point::x()])[0].clone();
        assert!(v[(0, 0)].abs() < 1e-13 && (v[(1, 0)] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn restriction_commutes_with_contraction() {
        let m = perturbed_hexahedron(4);
        let p = PolyBasis::monomials(Frame::cell(&m, 0), 3);
        let hess = ops::hess(&p.columns(16, 1)).unwrap();
        let e = m.cells[0].edges[5];
        let direct = trace_to_edge(&m, &hess, e, TraceBlock::NormalNormal).unwrap();
        let f = *m.cells[0].faces.iter().find(|&&f| m.faces[f].edges.contains(&e)).unwrap();
        let via_face = trace_to_face(&m, 0, &hess, f, TraceBlock::Full).unwrap();
        let two = trace_to_edge(&m, &via_face, e, TraceBlock::NormalNormal).unwrap();
        let pts = [m.edges[e].midpoint, m.vertices[m.edges[e].vertices[0]]];
        let (a, b) = (direct.eval(&pts), two.eval(&pts));
        for c in 0..4 {
            assert!((&a[c] - &b[c]).amax() < 1e-11);
        }
    }

    #[test]
    fn foreign_face_is_rejected() {
        let m = cartesian(2, [0.0; 3], [1.0; 3]).unwrap();
        let p = PolyBasis::monomials(Frame::cell(&m, 0), 1);
        let far = (0..m.faces.len()).find(|f| !m.cells[0].faces.contains(f)).unwrap();
        assert!(trace_to_face(&m, 0, &p, far, TraceBlock::Full).is_err());
    }
}
