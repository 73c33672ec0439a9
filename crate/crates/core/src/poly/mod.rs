//! Polynomial bases on mesh entities, quadrature, projections and the
//! direct-decomposition spaces.

mod basis;
mod edge;
pub mod monomial;
pub mod ops;
pub mod quadrature;
mod spaces;
mod trace;

pub use basis::{Frame, PolyBasis};
pub use edge::edge_derivative;
pub use quadrature::Quadrature;
pub use trace::{trace_to_edge, trace_to_face, TraceBlock};
pub use spaces::{
    decomposition_basis, orthonormalize, reduce_rank, scalar_basis, sym2_basis, sym_basis,
    traceless_basis, Entity, SpaceKind,
};

use crate::mesh::Point;
use nalgebra::DMatrix;

/// `sum_c a_c^T diag(w) b_c` for component-wise values at quadrature points.
pub fn inner(a: &[DMatrix<f64>], b: &[DMatrix<f64>], w: &[f64]) -> DMatrix<f64> {
    assert_eq!(a.len(), b.len(), "component counts differ");
    let ncols = a.first().map_or(0, |m| m.ncols());
    let mut out = DMatrix::zeros(ncols, b.first().map_or(0, |m| m.ncols()));
    for (ac, bc) in a.iter().zip(b) {
        let mut wa = ac.clone();
        for (p, &wp) in w.iter().enumerate() {
            wa.row_mut(p).scale_mut(wp);
        }
        out += wa.transpose() * bc;
    }
    out
}

/// Coefficients of the L2 projection onto an orthonormal basis of values
/// `f` (component-wise, one column per projected function) sampled at `q`.
pub fn l2_project(f: &[DMatrix<f64>], target: &PolyBasis, q: &Quadrature) -> DMatrix<f64> {
    inner(&target.eval(&q.points), f, &q.weights)
}

/// Vector values from local-frame coordinates: `sum_a v_a frame_a`.
pub fn embed_vector(v: &[DMatrix<f64>], frame: &[Point]) -> Vec<DMatrix<f64>> {
    (0..3)
        .map(|i| {
            let mut acc = &v[0] * frame[0][i];
            for a in 1..frame.len() {
                acc += &v[a] * frame[a][i];
            }
            acc
        })
        .collect()
}

/// Matrix values from local-frame entries: `sum_ab M_ab frame_a frame_b^T`.
pub fn embed_matrix(m: &[DMatrix<f64>], frame: &[Point]) -> Vec<DMatrix<f64>> {
    let d = frame.len();
    (0..9)
        .map(|r| {
            let (i, j) = (r / 3, r % 3);
            let mut acc = DMatrix::zeros(m[0].nrows(), m[0].ncols());
            for a in 0..d {
                for b in 0..d {
                    let s = frame[a][i] * frame[b][j];
                    if s != 0.0 {
                        acc += &m[a * d + b] * s;
                    }
                }
            }
            acc
        })
        .collect()
}

/// `u^T M v` for 3x3 matrix values.
pub fn contract(m: &[DMatrix<f64>], u: &Point, v: &Point) -> DMatrix<f64> {
    let mut acc = DMatrix::zeros(m[0].nrows(), m[0].ncols());
    for i in 0..3 {
        for j in 0..3 {
            let s = u[i] * v[j];
            if s != 0.0 {
                acc += &m[3 * i + j] * s;
            }
        }
    }
    acc
}

/// `v . u` for 3-vector values.
pub fn dot(v: &[DMatrix<f64>], u: &Point) -> DMatrix<f64> {
    &v[0] * u[0] + &v[1] * u[1] + &v[2] * u[2]
}

/// Values of `M u` for 3x3 matrix values.
pub fn apply(m: &[DMatrix<f64>], u: &Point) -> Vec<DMatrix<f64>> {
    (0..3)
        .map(|i| &m[3 * i] * u[0] + &m[3 * i + 1] * u[1] + &m[3 * i + 2] * u[2])
        .collect()
}

/// Values of `M x u` (row-wise cross product) for 3x3 matrix values.
pub fn cross_rows(m: &[DMatrix<f64>], u: &Point) -> Vec<DMatrix<f64>> {
    let mut out = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            let (p, q) = ((j + 1) % 3, (j + 2) % 3);
            out.push(&m[3 * i + p] * u[q] - &m[3 * i + q] * u[p]);
        }
    }
    out
}

/// Directional derivative `sum_a d_a d/dx_a` of a cell family.
pub fn directional(b: &PolyBasis, d: &Point) -> PolyBasis {
    assert_eq!(b.frame.dim, 3);
    let mut acc = b.derivative(0);
    acc.coef *= d[0];
    for a in 1..3 {
        acc.coef += b.derivative(a).coef * d[a];
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{perturbed_hexahedron, unit_cube};

    #[test]
    fn projection_of_x_on_unit_edge() {
        let m = unit_cube();
        let e = m
            .edges
            .iter()
            .position(|e| e.tangent.x == 1.0 && e.midpoint.y == 0.0 && e.midpoint.z == 0.0)
            .unwrap();
        let q = Entity::Edge(e).quadrature(&m, 4);
        let b = scalar_basis(&m, Entity::Edge(e), 1).unwrap();
        let f = |g: fn(f64) -> f64| vec![DMatrix::from_iterator(q.len(), 1, q.points.iter().map(|p| g(p.x)))];
        let c = l2_project(&f(|x| x), &b.columns(0, 1), &q);
        let v = b.columns(0, 1).eval(&[Point::zeros()])[0][(0, 0)] * c[(0, 0)];
        assert!((v - 0.5).abs() < 1e-14);
        // pi^1(x^2) = x - 1/6
        let c = l2_project(&f(|x| x * x), &b, &q);
        for x in [0.0, 0.25, 1.0] {
            let v = (b.eval(&[Point::new(x, 0.0, 0.0)])[0].row(0) * &c)[(0, 0)];
            assert!((v - (x - 1.0 / 6.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn scalar_basis_is_orthonormal_and_hierarchical() {
        let m = perturbed_hexahedron(4);
        for ent in [Entity::Cell(0), Entity::Face(2), Entity::Edge(5)] {
            let b = scalar_basis(&m, ent, 3).unwrap();
            let q = ent.quadrature(&m, 6);
            let v = b.eval(&q.points);
            let g = inner(&v, &v, &q.weights);
            assert!((g - DMatrix::identity(b.len(), b.len())).norm() < 1e-12);
            let b1 = scalar_basis(&m, ent, 1).unwrap();
            assert!((b.columns(0, b1.len()).coef - b1.with_degree(3).coef).norm() < 1e-10);
        }
    }

    #[test]
    fn projection_is_idempotent_and_contractive() {
        let m = perturbed_hexahedron(2);
        let ent = Entity::Face(1);
        let q = ent.quadrature(&m, 8);
        let b = scalar_basis(&m, ent, 2).unwrap();
        // a member of P^2(F) is reproduced
        let coef = DMatrix::from_fn(b.len(), 1, |i, _| (i as f64 + 1.0).sin());
        let f = b.combine(&coef).eval(&q.points);
        assert!((l2_project(&f, &b, &q) - &coef).norm() < 1e-12);
        // and a quartic is shortened
        let g = vec![DMatrix::from_iterator(q.len(), 1, q.points.iter().map(|p| p.x.powi(4) - p.y * p.z))];
        let c = l2_project(&g, &b, &q);
        let norm_f = inner(&g, &g, &q.weights)[(0, 0)].sqrt();
        assert!(c.norm() <= norm_f + 1e-14);
    }
}
