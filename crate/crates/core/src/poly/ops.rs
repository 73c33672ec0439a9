//! Exact differential and algebraic operators on polynomial families.
//!
//! Three-dimensional operators act in the frame coordinates of a cell
//! (canonical axes). Operators suffixed `_f` act on face families whose
//! vector and matrix components are expressed in the face tangent frame.

use super::PolyBasis;
use crate::{Error, Result};
use nalgebra::DMatrix;

fn expect_shape(b: &PolyBasis, shape: (usize, usize), op: &str) -> Result<()> {
    if b.shape != shape {
        return Err(Error::InvalidArgument(format!(
            "{op} expects values of shape {shape:?}, got {:?}",
            b.shape
        )));
    }
    Ok(())
}

fn expect_dim(b: &PolyBasis, dim: usize, op: &str) -> Result<()> {
    if b.frame.dim != dim {
        return Err(Error::InvalidArgument(format!(
            "{op} needs a {dim}-variate family, got {}",
            b.frame.dim
        )));
    }
    Ok(())
}

/// Gradient of a scalar family, or row-wise Jacobian `(d_b v_a)` of a
/// vector family.
pub fn grad(b: &PolyBasis) -> Result<PolyBasis> {
    let d = b.frame.dim;
    if b.shape.1 != 1 {
        return Err(Error::InvalidArgument("grad of a matrix family".into()));
    }
    let der: Vec<PolyBasis> = (0..d).map(|a| b.derivative(a)).collect();
    let mut comps = Vec::with_capacity(b.shape.0 * d);
    for i in 0..b.shape.0 {
        for a in 0..d {
            comps.push(der[a].component(i));
        }
    }
    let shape = if b.shape.0 == 1 { (d, 1) } else { (b.shape.0, d) };
    Ok(PolyBasis::from_components(shape, &comps))
}

pub fn hess(b: &PolyBasis) -> Result<PolyBasis> {
    expect_shape(b, (1, 1), "hess")?;
    grad(&grad(b)?)
}

/// Divergence of a vector family, or row-wise divergence of a matrix family.
pub fn div(b: &PolyBasis) -> Result<PolyBasis> {
    let d = b.frame.dim;
    let (rows, cols) = b.shape;
    let (rows, vector) = if cols == 1 { (1, rows) } else { (rows, cols) };
    if vector != d {
        return Err(Error::InvalidArgument(format!("div of shape {:?}", b.shape)));
    }
    let der: Vec<PolyBasis> = (0..d).map(|a| b.derivative(a)).collect();
    let comps: Vec<PolyBasis> = (0..rows)
        .map(|i| {
            let mut acc = der[0].component(i * d);
            for (a, da) in der.iter().enumerate().skip(1) {
                acc.coef += da.component(i * d + a).coef;
            }
            acc
        })
        .collect();
    Ok(PolyBasis::from_components((rows, 1), &comps))
}

/// Row-wise curl of a 3x3 family, or curl of a 3-vector family.
pub fn curl(b: &PolyBasis) -> Result<PolyBasis> {
    expect_dim(b, 3, "curl")?;
    let rows = match b.shape {
        (3, 3) => 3,
        (3, 1) => 1,
        s => return Err(Error::InvalidArgument(format!("curl of shape {s:?}"))),
    };
    let der: Vec<PolyBasis> = (0..3).map(|a| b.derivative(a)).collect();
    let mut comps = Vec::with_capacity(rows * 3);
    for i in 0..rows {
        for j in 0..3 {
            let (p, q) = ((j + 1) % 3, (j + 2) % 3);
            // (curl w)_j = d_p w_q - d_q w_p
            let mut c = der[p].component(i * 3 + q);
            c.coef -= der[q].component(i * 3 + p).coef;
            comps.push(c);
        }
    }
    let shape = if rows == 1 { (3, 1) } else { (3, 3) };
    Ok(PolyBasis::from_components(shape, &comps))
}

fn square(b: &PolyBasis, op: &str) -> Result<usize> {
    if b.shape.0 != b.shape.1 {
        return Err(Error::InvalidArgument(format!("{op} of shape {:?}", b.shape)));
    }
    Ok(b.shape.0)
}

pub fn sym_matrix(d: usize) -> DMatrix<f64> {
    DMatrix::from_fn(d * d, d * d, |r, c| {
        let (i, j) = (r / d, r % d);
        0.5 * ((c == i * d + j) as u8 as f64 + (c == j * d + i) as u8 as f64)
    })
}

pub fn dev_matrix(d: usize) -> DMatrix<f64> {
    DMatrix::from_fn(d * d, d * d, |r, c| {
        let (i, j) = (r / d, r % d);
        let (k, l) = (c / d, c % d);
        (r == c) as u8 as f64 - ((i == j && k == l) as u8 as f64) / d as f64
    })
}

pub fn sym(b: &PolyBasis) -> Result<PolyBasis> {
    let d = square(b, "sym")?;
    Ok(b.map_components(b.shape, &sym_matrix(d)))
}

pub fn dev(b: &PolyBasis) -> Result<PolyBasis> {
    let d = square(b, "dev")?;
    Ok(b.map_components(b.shape, &dev_matrix(d)))
}

pub fn trace(b: &PolyBasis) -> Result<PolyBasis> {
    let d = square(b, "trace")?;
    let m = DMatrix::from_fn(1, d * d, |_, c| (c / d == c % d) as u8 as f64);
    Ok(b.map_components((1, 1), &m))
}

/// Outer product `v xi^T` of a vector family with the scaled coordinates.
pub fn outer_coordinates(b: &PolyBasis) -> Result<PolyBasis> {
    let d = b.frame.dim;
    expect_shape(b, (d, 1), "outer product with coordinates")?;
    let xi: Vec<PolyBasis> = (0..d).map(|a| b.times_coordinate(a)).collect();
    let comps: Vec<PolyBasis> = (0..d * d).map(|r| xi[r % d].component(r / d)).collect();
    Ok(PolyBasis::from_components((d, d), &comps))
}

/// Row-wise cross product `A x xi` of a 3x3 family with the scaled
/// coordinates.
pub fn cross_coordinates(b: &PolyBasis) -> Result<PolyBasis> {
    expect_dim(b, 3, "cross product")?;
    expect_shape(b, (3, 3), "cross product")?;
    let xi: Vec<PolyBasis> = (0..3).map(|a| b.times_coordinate(a)).collect();
    let mut comps = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            let (p, q) = ((j + 1) % 3, (j + 2) % 3);
            // (a x xi)_j = a_p xi_q - a_q xi_p
            let mut c = xi[q].component(i * 3 + p);
            c.coef -= xi[p].component(i * 3 + q).coef;
            comps.push(c);
        }
    }
    Ok(PolyBasis::from_components((3, 3), &comps))
}

/// Face curl of a scalar family, `(d_2 r, -d_1 r)`, or its row-wise
/// version on a 2-vector family.
pub fn curl_f(b: &PolyBasis) -> Result<PolyBasis> {
    expect_dim(b, 2, "curl_F")?;
    let rows = match b.shape {
        (1, 1) => 1,
        (2, 1) => 2,
        s => return Err(Error::InvalidArgument(format!("curl_F of shape {s:?}"))),
    };
    let d1 = b.derivative(0);
    let d2 = b.derivative(1);
    let mut comps = Vec::with_capacity(2 * rows);
    for i in 0..rows {
        comps.push(d2.component(i));
        let mut c = d1.component(i);
        c.coef *= -1.0;
        comps.push(c);
    }
    let shape = if rows == 1 { (2, 1) } else { (2, 2) };
    Ok(PolyBasis::from_components(shape, &comps))
}

/// Face rot of a 2-vector family, `d_1 w_2 - d_2 w_1`, or its row-wise
/// version on a 2x2 family.
pub fn rot_f(b: &PolyBasis) -> Result<PolyBasis> {
    expect_dim(b, 2, "rot_F")?;
    let rows = match b.shape {
        (2, 1) => 1,
        (2, 2) => 2,
        s => return Err(Error::InvalidArgument(format!("rot_F of shape {s:?}"))),
    };
    let d1 = b.derivative(0);
    let d2 = b.derivative(1);
    let comps: Vec<PolyBasis> = (0..rows)
        .map(|i| {
            let mut c = d1.component(2 * i + 1);
            c.coef -= d2.component(2 * i).coef;
            c
        })
        .collect();
    Ok(PolyBasis::from_components((rows, 1), &comps))
}

/// Adjugate of a 2x2 family: `[[a, b], [c, d]] -> [[d, -b], [-c, a]]`.
pub fn adj(b: &PolyBasis) -> Result<PolyBasis> {
    expect_shape(b, (2, 2), "adj")?;
    Ok(b.map_components((2, 2), &adj_matrix()))
}

pub fn adj_matrix() -> DMatrix<f64> {
    DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, 0.0, 0.0, 1.0, //
            0.0, -1.0, 0.0, 0.0, //
            0.0, 0.0, -1.0, 0.0, //
            1.0, 0.0, 0.0, 0.0,
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{monomial, Frame};

    fn poly(frame: Frame, deg: usize, terms: &[([usize; 3], f64)]) -> PolyBasis {
        let mut c = DMatrix::zeros(monomial::dim(frame.dim, deg as i64), 1);
        for (e, v) in terms {
            c[(monomial::index(frame.dim, *e), 0)] = *v;
        }
        PolyBasis::new(frame, (1, 1), deg, c)
    }

    fn face_frame() -> Frame {
        Frame {
            dim: 2,
            ..Frame::global()
        }
    }

    #[test]
    fn dev_of_identity_vanishes() {
        let one = poly(Frame::global(), 0, &[([0, 0, 0], 1.0)]);
        let id = PolyBasis::tensor(&one, (3, 3), &DMatrix::from_column_slice(9, 1, &[1., 0., 0., 0., 1., 0., 0., 0., 1.]));
        assert!(dev(&id).unwrap().coef.norm() < 1e-15);
        assert_eq!(trace(&id).unwrap().coef[(0, 0)], 3.0);
    }

    #[test]
    fn hessian_of_affine_vanishes() {
        let p = poly(Frame::global(), 1, &[([0, 0, 0], 2.0), ([1, 0, 0], -1.0), ([0, 0, 1], 3.0)]);
        assert!(hess(&p).unwrap().coef.norm() == 0.0);
        let q = poly(Frame::global(), 2, &[([1, 1, 0], 1.0)]);
        let h = hess(&q).unwrap();
        assert_eq!(h.shape, (3, 3));
        // d_x d_y (x y) = 1 in entries (0,1) and (1,0)
        assert_eq!(h.component(1).coef[(0, 0)], 1.0);
        assert_eq!(h.component(3).coef[(0, 0)], 1.0);
        assert_eq!(h.component(0).coef.norm(), 0.0);
    }

    #[test]
    fn face_divergence_of_adjugate_image() {
        // A(1, 0) = (Id - adj)[(1, 0) (x, y)] = [[x, 2y], [0, -x]]
        let f = face_frame();
        let one = poly(f, 0, &[([0, 0, 0], 1.0)]);
        let e1 = PolyBasis::tensor(&one, (2, 1), &DMatrix::from_column_slice(2, 1, &[1.0, 0.0]));
        let outer = outer_coordinates(&e1).unwrap();
        let a = outer.map_components((2, 2), &(DMatrix::identity(4, 4) - adj_matrix()));
        let x = monomial::index(2, [1, 0, 0]);
        let y = monomial::index(2, [0, 1, 0]);
        assert_eq!(a.component(0).coef[(x, 0)], 1.0);
        assert_eq!(a.component(1).coef[(y, 0)], 2.0);
        assert_eq!(a.component(2).coef.norm(), 0.0);
        assert_eq!(a.component(3).coef[(x, 0)], -1.0);
        let d = div(&a).unwrap();
        assert_eq!(d.component(0).coef[(0, 0)], 3.0);
        assert_eq!(d.component(1).coef.norm(), 0.0);
    }

    #[test]
    fn curl_of_gradient_vanishes() {
        let p = poly(Frame::global(), 3, &[([1, 2, 0], 1.0), ([0, 1, 2], -2.0)]);
        assert!(curl(&grad(&p).unwrap()).unwrap().coef.norm() < 1e-14);
        let f = face_frame();
        let r = poly(f, 3, &[([2, 1, 0], 1.0)]);
        assert!(div(&curl_f(&r).unwrap()).unwrap().coef.norm() < 1e-14);
        assert!(rot_f(&grad(&r).unwrap()).unwrap().coef.norm() < 1e-14);
    }

    #[test]
    fn incompatible_shapes_are_rejected() {
        let p = poly(Frame::global(), 1, &[([1, 0, 0], 1.0)]);
        assert!(matches!(curl(&p), Err(Error::InvalidArgument(_))));
        assert!(matches!(curl_f(&p), Err(Error::InvalidArgument(_))));
        assert!(dev(&grad(&p).unwrap()).is_err());
    }
}
