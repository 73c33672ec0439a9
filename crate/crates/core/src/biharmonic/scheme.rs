use super::{GlobalDofMap, ManufacturedCase};
use crate::ddr::Element;
use crate::linalg::asymmetry;
use crate::mesh::Mesh;
use crate::poly::{inner, Entity};
use crate::{Error, Execution, Result};
use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Llt;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

/// Element contributions, with the interpolate of the exact solution kept
/// for the error computation.
#[derive(Clone, Debug)]
pub struct LocalSystem {
    pub dofs: Vec<usize>,
    pub product: DMatrix<f64>,
    pub dd: DMatrix<f64>,
    /// `int_T f phi_j` over the orthonormal basis of `P^k(T)`.
    pub load: DVector<f64>,
    pub sigma_interpolate: DVector<f64>,
    pub u_projection: DVector<f64>,
}

/// The saddle point system `[[A, B^T], [B, 0]] (sigma, u) = (0, -F)`,
/// where `A` is the global product and `B` the broken `DD` operator.
/// `matrix` holds the full indefinite matrix.
pub struct GlobalSystem {
    pub map: GlobalDofMap,
    pub matrix: SparseColMat<usize, f64>,
    pub rhs: DVector<f64>,
    pub locals: Vec<LocalSystem>,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub sigma: DVector<f64>,
    pub u: DVector<f64>,
    /// `|K z - b| / |b|`, or `|K z|` when `b` vanishes.
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ErrorNorms {
    pub err_sigma: f64,
    pub err_u: f64,
    pub err_total: f64,
}

fn local_system(m: &Mesh, k: usize, cell: usize, map: &GlobalDofMap, case: &ManufacturedCase) -> Result<LocalSystem> {
    let e = Element::new(m, cell, k)?;
    let ops = e.divdiv_operators()?;
    let q = Entity::Cell(cell).quadrature(m, case.f.degree.max(case.u.degree) + k);
    let phi = e.cell_poly(k as i64).eval(&q.points);
    let load = inner(&phi, &case.f.eval(&q.points), &q.weights).column(0).into_owned();
    let u_projection = inner(&phi, &case.u.eval(&q.points), &q.weights).column(0).into_owned();
    let sigma_interpolate = e.interpolate_divdiv(&case.sigma)?.column(0).into_owned();
    Ok(LocalSystem {
        dofs: map.local_to_global(&e.divdiv),
        product: ops.product,
        dd: ops.dd,
        load,
        sigma_interpolate,
        u_projection,
    })
}

/// Assembles the mixed scheme for `case` with element work scheduled by
/// `exec`.
pub fn assemble(m: &Mesh, k: usize, case: &ManufacturedCase, exec: Execution) -> Result<GlobalSystem> {
    let map = GlobalDofMap::new(m, k);
    let locals = exec
        .map_range(m.cells.len(), |c| local_system(m, k, c, &map, case))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut triplets = Vec::new();
    let mut rhs = DVector::zeros(map.total());
    for (c, l) in locals.iter().enumerate() {
        for (j, &gj) in l.dofs.iter().enumerate() {
            for (i, &gi) in l.dofs.iter().enumerate() {
                triplets.push(Triplet::new(gi, gj, l.product[(i, j)]));
            }
            let u0 = map.u_offset(c);
            for i in 0..l.dd.nrows() {
                let v = l.dd[(i, j)];
                triplets.push(Triplet::new(u0 + i, gj, v));
                triplets.push(Triplet::new(gj, u0 + i, v));
            }
        }
        let u0 = map.u_offset(c);
        for i in 0..l.load.len() {
            rhs[u0 + i] = -l.load[i];
        }
    }
    let n = map.total();
    let matrix = SparseColMat::try_new_from_triplets(n, n, &triplets)
        .map_err(|e| Error::Singular(format!("sparse assembly failed: {e:?}")))?;
    Ok(GlobalSystem {
        map,
        matrix,
        rhs,
        locals,
    })
}

impl GlobalSystem {
    pub fn dense(&self) -> DMatrix<f64> {
        let d = self.matrix.to_dense();
        DMatrix::from_fn(d.nrows(), d.ncols(), |i, j| d[(i, j)])
    }

    /// `|A - A^T| / |A|` of the full matrix.
    pub fn asymmetry(&self) -> f64 {
        asymmetry(&self.dense())
    }

    pub fn apply(&self, z: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.map.total());
        for t in self.matrix.as_ref().triplet_iter() {
            out[t.row] += t.val * z[t.col];
        }
        out
    }
}

/// Sparse Cholesky factor of the product block `A` and the dense Schur
/// complement `S = B A^{-1} B^T`.
struct BlockFactors {
    a: Llt<usize, f64>,
    s: DMatrix<f64>,
}

const SCHUR_CHUNK: usize = 64;

fn block_factors(system: &GlobalSystem) -> Result<BlockFactors> {
    let map = &system.map;
    let ns = map.sigma_dofs();
    let nu = map.u_dofs();
    let mut lower = Vec::new();
    for l in &system.locals {
        for (j, &gj) in l.dofs.iter().enumerate() {
            for (i, &gi) in l.dofs.iter().enumerate() {
                if gi >= gj {
                    lower.push(Triplet::new(gi, gj, l.product[(i, j)]));
                }
            }
        }
    }
    let a = SparseColMat::<usize, f64>::try_new_from_triplets(ns, ns, &lower)
        .map_err(|e| Error::Singular(format!("sparse assembly failed: {e:?}")))?;
    drop(lower);
    let a = a
        .sp_cholesky(Side::Lower)
        .map_err(|e| Error::Singular(format!("global product is not positive definite: {e:?}")))?;

    let ps = map.poly_size;
    let mut s = DMatrix::zeros(nu, nu);
    for start in (0..nu).step_by(SCHUR_CHUNK) {
        let width = SCHUR_CHUNK.min(nu - start);
        let mut bt = Mat::<f64>::zeros(ns, width);
        for col in 0..width {
            let (c, i) = ((start + col) / ps, (start + col) % ps);
            let l = &system.locals[c];
            for (j, &g) in l.dofs.iter().enumerate() {
                bt[(g, col)] = l.dd[(i, j)];
            }
        }
        let w = a.solve(&bt);
        for (c, l) in system.locals.iter().enumerate() {
            for i in 0..ps {
                for col in 0..width {
                    s[(c * ps + i, start + col)] = l.dofs.iter().enumerate().map(|(j, &g)| l.dd[(i, j)] * w[(g, col)]).sum();
                }
            }
        }
    }
    let s = (&s + s.transpose()) * 0.5;
    Ok(BlockFactors { a, s })
}

fn solve_a(a: &Llt<usize, f64>, b: &DVector<f64>) -> DVector<f64> {
    let x = a.solve(&faer::Col::from_fn(b.len(), |i| b[i]));
    DVector::from_fn(b.len(), |i, _| x[i])
}

/// `B x` and `B^T y` with the element blocks.
fn apply_b(system: &GlobalSystem, x: &DVector<f64>) -> DVector<f64> {
    let ps = system.map.poly_size;
    let mut out = DVector::zeros(system.map.u_dofs());
    for (c, l) in system.locals.iter().enumerate() {
        let xl = DVector::from_fn(l.dofs.len(), |j, _| x[l.dofs[j]]);
        out.rows_mut(c * ps, ps).copy_from(&(&l.dd * xl));
    }
    out
}

fn apply_bt(system: &GlobalSystem, y: &DVector<f64>) -> DVector<f64> {
    let ps = system.map.poly_size;
    let mut out = DVector::zeros(system.map.sigma_dofs());
    for (c, l) in system.locals.iter().enumerate() {
        let v = l.dd.transpose() * y.rows(c * ps, ps);
        for (j, &g) in l.dofs.iter().enumerate() {
            out[g] += v[j];
        }
    }
    out
}

/// Solves `K z = b` directly by block elimination: a sparse Cholesky
/// factorisation of the product block and a dense Cholesky factorisation
/// of the Schur complement.
pub fn solve_with(system: &GlobalSystem, rhs: &DVector<f64>) -> Result<Solution> {
    let f = block_factors(system)?;
    let ns = system.map.sigma_dofs();
    let nu = system.map.u_dofs();
    let (bs, bu) = (rhs.rows(0, ns).into_owned(), rhs.rows(ns, nu).into_owned());
    let s = f
        .s
        .cholesky()
        .ok_or_else(|| Error::Singular("Schur complement is not positive definite".into()))?;
    let a_bs = solve_a(&f.a, &bs);
    let u = s.solve(&(apply_b(system, &a_bs) - bu));
    let sigma = solve_a(&f.a, &(bs - apply_bt(system, &u)));
    if sigma.iter().chain(u.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Singular("non-finite solution".into()));
    }
    let mut z = DVector::zeros(ns + nu);
    z.rows_mut(0, ns).copy_from(&sigma);
    z.rows_mut(ns, nu).copy_from(&u);
    let r = (system.apply(&z) - rhs).norm();
    let nb = rhs.norm();
    Ok(Solution {
        sigma,
        u,
        residual: if nb > 0.0 { r / nb } else { r },
    })
}

pub fn solve(system: &GlobalSystem) -> Result<Solution> {
    solve_with(system, &system.rhs)
}

/// Errors against the interpolate of `sigma` in the discrete product norm
/// and against the projection of `u` in the broken L2 norm.
pub fn compute_error(system: &GlobalSystem, sol: &Solution) -> ErrorNorms {
    let mut es = 0.0;
    let mut eu = 0.0;
    for (c, l) in system.locals.iter().enumerate() {
        let d = DVector::from_fn(l.dofs.len(), |i, _| sol.sigma[l.dofs[i]]) - &l.sigma_interpolate;
        es += d.dot(&(&l.product * &d));
        let o = system.map.u_offset(c) - system.map.sigma_dofs();
        let du = sol.u.rows(o, l.u_projection.len()) - &l.u_projection;
        eu += du.norm_squared();
    }
    let (err_sigma, err_u) = (es.max(0.0).sqrt(), eu.sqrt());
    ErrorNorms {
        err_sigma,
        err_u,
        err_total: err_sigma + err_u,
    }
}

/// Extreme eigenvalues of the Schur complement `B A^{-1} B^T`.
pub fn schur_complement_spectrum(system: &GlobalSystem) -> Result<(f64, f64)> {
    let ev = SymmetricEigen::new(block_factors(system)?.s).eigenvalues;
    Ok((ev.min(), ev.max()))
}
