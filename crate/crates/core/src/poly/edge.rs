use super::{inner, scalar_basis, Entity};
use crate::mesh::Mesh;
use crate::Result;
use nalgebra::DMatrix;

/// Matrix of the tangential derivative reconstruction onto `P^l(E)`.
///
/// Columns are `[v_V1, v_V2, v_E]` with `v_E` in the orthonormal basis of
/// `P^{l-1}(E)`; rows are coefficients in the orthonormal basis of `P^l(E)`.
/// The result `D` satisfies, for every `r` in `P^l(E)`,
/// `int_E D r = -int_E v_E d_t r + v_V2 r(x_V2) - v_V1 r(x_V1)`.
pub fn edge_derivative(m: &Mesh, e: usize, l: usize) -> Result<DMatrix<f64>> {
    let r = scalar_basis(m, Entity::Edge(e), l)?;
    let nprev = l;
    let q = Entity::Edge(e).quadrature(m, 2 * l);
    let [v1, v2] = m.edges[e].vertices;
    let ends = r.eval(&[m.vertices[v1], m.vertices[v2]]);
    let dr = r.derivative(0).eval(&q.points);
    let phi = r.columns(0, nprev).eval(&q.points);
    let mut out = DMatrix::zeros(r.len(), 2 + nprev);
    for i in 0..r.len() {
        out[(i, 0)] = -ends[0][(0, i)];
        out[(i, 1)] = ends[0][(1, i)];
    }
    if nprev > 0 {
        let g = inner(&dr, &phi, &q.weights);
        out.columns_mut(2, nprev).copy_from(&(-g));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::unit_cube;
    use crate::poly::l2_project;

    fn x_edge(m: &Mesh) -> usize {
        m.edges
            .iter()
            .position(|e| (e.tangent - nalgebra::Vector3::x()).norm() < 1e-14 && e.midpoint.y == 0.0 && e.midpoint.z == 0.0)
            .unwrap()
    }

    #[test]
    fn derivative_of_linear_function_is_one() {
        let m = unit_cube();
        let e = x_edge(&m);
        for l in 0..4 {
            let d = edge_derivative(&m, e, l).unwrap();
            let q = Entity::Edge(e).quadrature(&m, 2 * l + 2);
            let mut rhs = nalgebra::DVector::zeros(2 + l);
            rhs[1] = 1.0;
            if l > 0 {
                let prev = scalar_basis(&m, Entity::Edge(e), l - 1).unwrap();
                let f: Vec<_> = vec![DMatrix::from_iterator(q.len(), 1, q.points.iter().map(|p| p.x))];
                rhs.rows_mut(2, l).copy_from(&l2_project(&f, &prev, &q).column(0));
            }
            let out = &d * rhs;
            let r = scalar_basis(&m, Entity::Edge(e), l).unwrap();
            // the constant 1 in the orthonormal basis of an edge of length 1
            let c0 = 1.0 / r.eval(&[m.edges[e].midpoint])[0][(0, 0)];
            assert!((out[0] - c0).abs() < 1e-13);
            assert!(out.rows(1, out.len() - 1).norm() < 1e-13);
        }
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let m = unit_cube();
        let d = edge_derivative(&m, 3, 2).unwrap();
        let prev = scalar_basis(&m, Entity::Edge(3), 1).unwrap();
        let c = 2.5;
        let mut rhs = nalgebra::DVector::zeros(4);
        rhs[0] = c;
        rhs[1] = c;
        // constant c in the orthonormal basis of P^1(E)
        rhs[2] = c / prev.eval(&[m.edges[3].midpoint])[0][(0, 0)];
        assert!((&d * rhs).norm() < 1e-13);
    }

    #[test]
    fn derivative_of_square_on_unit_edge() {
        // v = x^2 on [0, 1]: inputs (0, 1, 1/3) give 2x
        let m = unit_cube();
        let e = x_edge(&m);
        let d = edge_derivative(&m, e, 1).unwrap();
        let p0 = scalar_basis(&m, Entity::Edge(e), 0).unwrap();
        let one = p0.eval(&[m.edges[e].midpoint])[0][(0, 0)];
        let rhs = nalgebra::DVector::from_vec(vec![0.0, 1.0, (1.0 / 3.0) / one]);
        let c = &d * rhs;
        let r = scalar_basis(&m, Entity::Edge(e), 1).unwrap();
        for x in [0.0, 0.3, 1.0] {
            let p = nalgebra::Vector3::new(x, 0.0, 0.0);
            let v = r.eval(&[p])[0].row(0).dot(&c.transpose());
            assert!((v - 2.0 * x).abs() < 1e-13);
        }
    }
}
