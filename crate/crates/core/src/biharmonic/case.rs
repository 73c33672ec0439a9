use crate::mesh::Point;
use crate::poly::{monomial, ops, Frame, PolyBasis};
use crate::{Error, Result};
use nalgebra::DMatrix;

/// Closed-form solution of the clamped plate problem on the unit cube:
/// `u`, `sigma = -Hess u` and `f = div div (-sigma) = Laplacian^2 u`, all
/// polynomial on the global frame.
#[derive(Clone, Debug)]
pub struct ManufacturedCase {
    pub name: String,
    pub u: PolyBasis,
    pub sigma: PolyBasis,
    pub f: PolyBasis,
}

pub const CASES: [&str; 1] = ["bubble"];

/// `g(x) g(y) g(z)` with `g(t) = t^2 (1 - t)^2`.
fn bubble() -> PolyBasis {
    let g = [(2, 1.0), (3, -2.0), (4, 1.0)];
    let n = monomial::dim(3, 12);
    let mut coef = DMatrix::zeros(n, 1);
    for &(a, ca) in &g {
        for &(b, cb) in &g {
            for &(c, cc) in &g {
                coef[(monomial::index(3, [a, b, c]), 0)] += ca * cb * cc;
            }
        }
    }
    PolyBasis::new(Frame::global(), (1, 1), 12, coef)
}

impl ManufacturedCase {
    pub fn from_solution(name: &str, u: PolyBasis) -> Result<ManufacturedCase> {
        let hess = ops::hess(&u)?;
        let f = ops::div(&ops::div(&hess)?)?;
        let sigma = hess.combine(&DMatrix::from_element(1, 1, -1.0));
        Ok(ManufacturedCase {
            name: name.to_string(),
            u,
            sigma,
            f,
        })
    }

    pub fn u_at(&self, x: &Point) -> f64 {
        self.u.eval(std::slice::from_ref(x))[0][(0, 0)]
    }

    pub fn f_at(&self, x: &Point) -> f64 {
        self.f.eval(std::slice::from_ref(x))[0][(0, 0)]
    }
}

pub fn manufactured_case(name: &str) -> Result<ManufacturedCase> {
    match name {
        "bubble" | "paper-bubble" => ManufacturedCase::from_solution("bubble", bubble()),
        _ => Err(Error::InvalidArgument(format!(
            "unknown case {name:?} (known: {})",
            CASES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bubble_values_at_the_centre() {
        let c = manufactured_case("bubble").unwrap();
        let x = Point::new(0.5, 0.5, 0.5);
        assert!((c.u_at(&x) - 2.44140625e-4).abs() < 1e-18);
        assert!((c.f_at(&x) - 0.65625).abs() < 1e-12);
    }

    #[test]
    fn load_matches_finite_differences() {
        let c = manufactured_case("bubble").unwrap();
        let x = Point::new(0.3, 0.6, 0.45);
        let h = 1e-2;
        let u = |p: Point| c.u_at(&p);
        let lap = |p: Point| {
            (0..3)
                .map(|a| {
                    let e = Point::ith(a, h);
                    (u(p + e) - 2.0 * u(p) + u(p - e)) / (h * h)
                })
                .sum::<f64>()
        };
        let bilap: f64 = (0..3)
            .map(|a| {
                let e = Point::ith(a, h);
                (lap(x + e) - 2.0 * lap(x) + lap(x - e)) / (h * h)
            })
            .sum();
        assert!((bilap - c.f_at(&x)).abs() < 1e-3 * c.f_at(&x).abs().max(1.0));
    }

    #[test]
    fn clamped_on_the_boundary() {
        let c = manufactured_case("bubble").unwrap();
        let grad = ops::grad(&c.u).unwrap();
        for p in [Point::new(0.0, 0.3, 0.7), Point::new(0.2, 1.0, 0.5), Point::new(0.9, 0.4, 0.0)] {
            assert!(c.u_at(&p).abs() < 1e-16);
            let g = grad.eval(&[p]);
            assert!(g.iter().all(|v| v[(0, 0)].abs() < 1e-15));
        }
    }

    #[test]
    fn unknown_name_is_an_error() {
        assert!(manufactured_case("nope").is_err());
    }
}
