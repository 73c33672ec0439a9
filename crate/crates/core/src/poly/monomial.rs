//! Graded monomial tables in one, two or three variables.
//!
//! Monomials of total degree `d` come after all monomials of degree `< d`,
//! so the first `dim(P^l)` entries of any table span `P^l`.

use nalgebra::DMatrix;

/// Dimension of `P^deg` in `nvars` variables; zero for negative degrees.
pub fn dim(nvars: usize, deg: i64) -> usize {
    if deg < 0 {
        return 0;
    }
    let d = deg as usize;
    match nvars {
        0 => 1,
        1 => d + 1,
        2 => (d + 1) * (d + 2) / 2,
        3 => (d + 1) * (d + 2) * (d + 3) / 6,
        _ => panic!("unsupported number of variables {nvars}"),
    }
}

/// Position of the monomial with exponents `e` in the graded table.
pub fn index(nvars: usize, e: [usize; 3]) -> usize {
    match nvars {
        1 => e[0],
        2 => {
            let d = e[0] + e[1];
            d * (d + 1) / 2 + e[1]
        }
        3 => {
            let d = e[0] + e[1] + e[2];
            let s = e[1] + e[2];
            d * (d + 1) * (d + 2) / 6 + s * (s + 1) / 2 + e[2]
        }
        _ => panic!("unsupported number of variables {nvars}"),
    }
}

/// Exponents of all monomials of degree `<= deg`, in table order.
pub fn exponents(nvars: usize, deg: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(dim(nvars, deg as i64));
    for d in 0..=deg {
        match nvars {
            1 => out.push([d, 0, 0]),
            2 => (0..=d).for_each(|b| out.push([d - b, b, 0])),
            3 => {
                for s in 0..=d {
                    for k in 0..=s {
                        out.push([d - s, s - k, k]);
                    }
                }
            }
            _ => panic!("unsupported number of variables {nvars}"),
        }
    }
    out
}

/// Values of all monomials of degree `<= deg` at local coordinates `xi`
/// (one row per point).
pub fn values(nvars: usize, deg: usize, xi: &[[f64; 3]]) -> DMatrix<f64> {
    let exps = exponents(nvars, deg);
    let mut out = DMatrix::zeros(xi.len(), exps.len());
    let mut pw = vec![[1.0; 3]; deg + 1];
    for (p, x) in xi.iter().enumerate() {
        for i in 1..=deg {
            for a in 0..nvars {
                pw[i][a] = pw[i - 1][a] * x[a];
            }
        }
        for (m, e) in exps.iter().enumerate() {
            let mut v = 1.0;
            for a in 0..nvars {
                v *= pw[e[a]][a];
            }
            out[(p, m)] = v;
        }
    }
    out
}

/// Matrix of `d/dxi_a` from the degree-`deg` table to itself.
pub fn derivative_matrix(nvars: usize, deg: usize, a: usize) -> DMatrix<f64> {
    let exps = exponents(nvars, deg);
    let mut m = DMatrix::zeros(exps.len(), exps.len());
    for (j, e) in exps.iter().enumerate() {
        if e[a] > 0 {
            let mut f = *e;
            f[a] -= 1;
            m[(index(nvars, f), j)] = e[a] as f64;
        }
    }
    m
}

/// Matrix of multiplication by `xi_a` from the degree-`deg` table to the
/// degree-`deg + 1` table.
pub fn shift_matrix(nvars: usize, deg: usize, a: usize) -> DMatrix<f64> {
    let exps = exponents(nvars, deg);
    let mut m = DMatrix::zeros(dim(nvars, deg as i64 + 1), exps.len());
    for (j, e) in exps.iter().enumerate() {
        let mut f = *e;
        f[a] += 1;
        m[(index(nvars, f), j)] = 1.0;
    }
    m
}
