use super::{random_field, random_unit_vectors};
use crate::ddr::Element;
use crate::poly::{contract, inner, ops};
use crate::Result;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use serde::Serialize;

/// Largest relative residuals of the commutation and consistency
/// properties over a batch of random polynomial inputs.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CommutationReport {
    /// `uDG I_DG v` against `I_SC dev grad v`.
    pub devgrad: f64,
    /// `uSC I_SC tau` against `I_DD sym curl tau`.
    pub symcurl: f64,
    /// `DD I_DD u` against the projection of `div div u`.
    pub divdiv: f64,
    /// Potential of `I_DD u` against `u`, `u` of degree `k`.
    pub potential: f64,
    /// Potential of `uSC I_SC tau` against `sym curl tau`.
    pub potential_symcurl: f64,
    /// Stabilisation applied to `I_DD u`, `u` of degree `k`.
    pub stabilization: f64,
    /// Face trace reconstruction of `I_DD u` against `n^T u n`.
    pub gamma: f64,
    /// Discrete product of interpolates against the L2 product.
    pub product: f64,
}

impl CommutationReport {
    pub fn max(&self) -> f64 {
        [
            self.devgrad,
            self.symcurl,
            self.divdiv,
            self.potential,
            self.potential_symcurl,
            self.stabilization,
            self.gamma,
            self.product,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Column-wise `max |a_j - b_j| / |b_j|`.
fn worst_relative(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for (ca, cb) in a.column_iter().zip(b.column_iter()) {
        let n = cb.norm();
        let d = (ca - cb).norm();
        worst = worst.max(if n > 0.0 { d / n } else { d });
    }
    worst
}

pub fn check_commutation<R: Rng>(e: &Element, trials: usize, rng: &mut R) -> Result<CommutationReport> {
    let k = e.k;
    let m = e.mesh;
    let q = &e.q;
    let dg = e.op_devgrad()?;
    let sc = e.op_symcurl()?;
    let dd_ops = e.divdiv_operators()?;

    let v = random_field(m, (3, 1), k + 2, trials, rng);
    let lhs = &dg * e.interpolate_devgrad(&v)?;
    let rhs = e.interpolate_symcurl(&ops::dev(&ops::grad(&v)?)?)?;
    let devgrad = worst_relative(&lhs, &rhs);

    let tau = ops::dev(&random_field(m, (3, 3), k + 2, trials, rng))?;
    let lhs = &sc * e.interpolate_symcurl(&tau)?;
    let rhs = e.interpolate_divdiv(&ops::sym(&ops::curl(&tau)?)?)?;
    let symcurl = worst_relative(&lhs, &rhs);

    let u = ops::sym(&random_field(m, (3, 3), k + 2, trials, rng))?;
    let lhs = &dd_ops.dd * e.interpolate_divdiv(&u)?;
    let ddu = ops::div(&ops::div(&u)?)?;
    let rhs = inner(&e.cell_poly(k as i64).eval(&q.points), &ddu.eval(&q.points), &q.weights);
    let divdiv = worst_relative(&lhs, &rhs);

    let psi = e.potential_basis();
    let psi_vals = psi.eval(&q.points);
    let uk = ops::sym(&random_field(m, (3, 3), k, trials, rng))?;
    let iuk = e.interpolate_divdiv(&uk)?;
    let uk_vals = uk.eval(&q.points);
    let exact = inner(&psi_vals, &uk_vals, &q.weights);
    let potential = worst_relative(&(&dd_ops.potential * &iuk), &exact);

    let tau1 = ops::dev(&random_field(m, (3, 3), k + 1, trials, rng))?;
    let lhs = &dd_ops.potential * (&sc * e.interpolate_symcurl(&tau1)?);
    let scurl = ops::sym(&ops::curl(&tau1)?)?;
    let rhs = inner(&psi_vals, &scurl.eval(&q.points), &q.weights);
    let potential_symcurl = worst_relative(&lhs, &rhs);

    let s = &dd_ops.stabilization;
    let sx = s * &iuk;
    let scale = s.norm() * iuk.norm();
    let stabilization = if scale > 0.0 { sx.norm() / scale } else { sx.norm() };

    let mut gamma: f64 = 0.0;
    for (i, f) in e.faces.iter().enumerate() {
        let g = e.gamma(i)?;
        let fq = &f.q;
        let nn = contract(&uk.eval(&fq.points), &f.normal, &f.normal);
        let exact = inner(&f.poly(k as i64).eval(&fq.points), &[nn], &fq.weights);
        gamma = gamma.max(worst_relative(&(&g * &iuk), &exact));
    }

    let gram = inner(&uk_vals, &uk_vals, &q.weights);
    let discrete = iuk.transpose() * &dd_ops.product * &iuk;
    let product = (&discrete - &gram).norm() / gram.norm();

    Ok(CommutationReport {
        devgrad,
        symcurl,
        divdiv,
        potential,
        potential_symcurl,
        stabilization,
        gamma,
        product,
    })
}

/// Observed constants relating the component norm, the discrete L2 norm
/// and the boundedness of the divdiv operator and face traces.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NormMonitor {
    pub h: f64,
    /// Range of `tnorm / discrete norm` over random vectors.
    pub ratio_min: f64,
    pub ratio_max: f64,
    /// `max h^2 |DD u| / tnorm(u)`.
    pub divdiv_bound: f64,
    /// `max h_F^{1/2} |gamma_F u| / tnorm(u)`.
    pub gamma_bound: f64,
    /// Smallest eigenvalue of the local product.
    pub product_min_eigenvalue: f64,
}

pub fn monitor_norms<R: Rng>(e: &Element, trials: usize, rng: &mut R) -> Result<NormMonitor> {
    let ops = e.divdiv_operators()?;
    let w = e.component_weights();
    let x = random_unit_vectors(ops.product.nrows(), trials, rng);
    let h = e.diameter;
    let gammas: Vec<(f64, DMatrix<f64>)> = (0..e.faces.len())
        .map(|i| Ok((e.mesh.faces[e.faces[i].id].diameter, e.gamma(i)?)))
        .collect::<Result<_>>()?;
    let mut mon = NormMonitor {
        h,
        ratio_min: f64::INFINITY,
        ratio_max: 0.0,
        divdiv_bound: 0.0,
        gamma_bound: 0.0,
        product_min_eigenvalue: SymmetricEigen::new(ops.product.clone()).eigenvalues.min(),
    };
    for c in x.column_iter() {
        let t = c.iter().zip(w.iter()).map(|(a, b)| a * a * b).sum::<f64>().sqrt();
        let d = (c.transpose() * &ops.product * c)[(0, 0)].max(0.0).sqrt();
        mon.ratio_min = mon.ratio_min.min(t / d);
        mon.ratio_max = mon.ratio_max.max(t / d);
        mon.divdiv_bound = mon.divdiv_bound.max(h * h * (&ops.dd * c).norm() / t);
        for (hf, g) in &gammas {
            mon.gamma_bound = mon.gamma_bound.max(hf.sqrt() * (g * c).norm() / t);
        }
    }
    Ok(mon)
}
