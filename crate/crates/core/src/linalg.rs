//! Dense linear-algebra helpers shared by basis construction and verification.

use nalgebra::{DMatrix, DVector};

/// Relative singular-value cutoff used for every rank decision.
pub const RANK_TOL: f64 = 1e-10;

/// Singular values in decreasing order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Numerical rank with cutoff `RANK_TOL * sigma_max`.
pub fn rank(m: &DMatrix<f64>) -> usize {
    rank_from_singular_values(&singular_values(m))
}

pub fn rank_from_singular_values(s: &[f64]) -> usize {
    match s.first() {
        None => 0,
        Some(&smax) if smax == 0.0 => 0,
        Some(&smax) => s.iter().filter(|&&x| x > RANK_TOL * smax).count(),
    }
}

/// Right singular vectors and singular values of `m`, with the full set of
/// `m.ncols()` right vectors (columns of the returned matrix), sorted by
/// decreasing singular value. Missing singular values are reported as zero.
pub fn right_singular(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.ncols();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let rows = m.nrows().max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..n).collect();
    let s = svd.singular_values;
    order.sort_by(|&a, &b| s[b].partial_cmp(&s[a]).unwrap());
    let mut v = DMatrix::zeros(n, n);
    let mut sv = Vec::with_capacity(n);
    for (j, &o) in order.iter().enumerate() {
        sv.push(s[o]);
        for i in 0..n {
            v[(i, j)] = vt[(o, i)];
        }
    }
    (sv, v)
}

/// Orthonormal basis (columns) of the kernel of `m`.
pub fn null_space(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let (s, v) = right_singular(m);
    let r = rank_from_singular_values(&s);
    v.columns(r, n - r).into_owned()
}

/// Largest relative residual of projecting the columns of `vectors` onto the
/// span of the orthonormal columns of `basis`.
pub fn containment_residual(basis: &DMatrix<f64>, vectors: &DMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..vectors.ncols() {
        let x: DVector<f64> = vectors.column(j).into_owned();
        let nx = x.norm();
        if nx == 0.0 {
            continue;
        }
        let proj = if basis.ncols() == 0 {
            DVector::zeros(x.len())
        } else {
            basis * (basis.transpose() * &x)
        };
        worst = worst.max((x - proj).norm() / nx);
    }
    worst
}

/// Solves `a x = b` for square `a` with a partially pivoted LU.
pub fn solve(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    if a.nrows() == 0 {
        return Some(DMatrix::zeros(0, b.ncols()));
    }
    a.clone().lu().solve(b)
}

/// Frobenius norm of `a - a^T` relative to the norm of `a`.
pub fn asymmetry(a: &DMatrix<f64>) -> f64 {
    let n = a.norm();
    if n == 0.0 {
        0.0
    } else {
        (a - a.transpose()).norm() / n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel_of_wide_matrix() {
        let m = DMatrix::from_row_slice(2, 4, &[1.0, 2.0, 0.0, 0.0, 2.0, 4.0, 0.0, 0.0]);
        assert_eq!(rank(&m), 1);
        let k = null_space(&m);
        assert_eq!(k.ncols(), 3);
        assert!((&m * &k).norm() < 1e-12);
        assert!((k.transpose() * &k - DMatrix::identity(3, 3)).norm() < 1e-12);
    }

    #[test]
    fn empty_shapes() {
        assert_eq!(rank(&DMatrix::zeros(0, 3)), 0);
        assert_eq!(null_space(&DMatrix::zeros(0, 3)).ncols(), 3);
        assert_eq!(null_space(&DMatrix::zeros(3, 0)).ncols(), 0);
    }
}
