use divdiv::biharmonic::{assemble, fitted_slope, manufactured_case, solve_with, ConvergenceRow};
use divdiv::ddr::{expected_dimension, DofLayout, Element, SpaceTag};
use divdiv::mesh::{cartesian, pentagonal_prism, perturbed_hexahedron, reference_tetrahedron, Point};
use divdiv::verify::{
    check_commutation, check_complex, check_integration_by_parts, exactness_ranks, monitor_norms, CHECK_TOL, IPP_TOL,
};
use divdiv::Execution;
use nalgebra::{DVector, Matrix3, Rotation3};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn heavy() -> ProptestConfig {
    ProptestConfig::with_cases(6)
}

proptest! {
    #![proptest_config(heavy())]

    #[test]
    fn complex_holds_on_perturbed_hexahedra(seed in any::<u64>(), k in 0usize..2) {
        let m = perturbed_hexahedron(seed);
        let e = Element::new(&m, 0, k).unwrap();
        let r = check_complex(&e, 4, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(r.max() <= CHECK_TOL, "{r:?}");
    }

    #[test]
    fn ranks_are_rotation_invariant(seed in 0u64..1000, a in -3.0f64..3.0, b in -1.5f64..1.5, c in -3.0f64..3.0) {
        let m = pentagonal_prism(seed);
        let rot = Rotation3::from_euler_angles(a, b, c).into_inner();
        let moved = m.transformed(&rot, &Point::new(0.3, -2.0, 1.1)).unwrap();
        prop_assert_eq!(exactness_ranks(&m, 0, 1).unwrap(), exactness_ranks(&moved, 0, 1).unwrap());
    }

    #[test]
    fn commutation_survives_affine_similarity(s in 0.01f64..100.0, a in -3.0f64..3.0, seed in any::<u64>()) {
        let m = reference_tetrahedron();
        let map = Rotation3::from_euler_angles(a, 0.5 * a, -a).into_inner() * s;
        let moved = m.transformed(&map, &Point::new(s, 0.0, -s)).unwrap();
        let e = Element::new(&moved, 0, 1).unwrap();
        let r = check_commutation(&e, 3, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(r.max() <= CHECK_TOL, "{r:?}");
    }

    #[test]
    fn integration_by_parts_on_random_hexahedra(seed in any::<u64>(), k in 0usize..3) {
        let m = perturbed_hexahedron(seed);
        let r = check_integration_by_parts(&m, 0, k, 2, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(r.max() <= IPP_TOL, "{r:?}");
    }

    #[test]
    fn local_product_is_positive(seed in any::<u64>(), k in 0usize..2) {
        let m = pentagonal_prism(seed);
        let e = Element::new(&m, 0, k).unwrap();
        let n = monitor_norms(&e, 4, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(n.product_min_eigenvalue > 0.0);
        prop_assert!(n.ratio_min > 0.0 && n.ratio_min <= n.ratio_max);
    }

    #[test]
    fn solver_inverts_the_system(seed in any::<u64>(), k in 0usize..2) {
        let case = manufactured_case("bubble").unwrap();
        let sys = assemble(&cartesian(1, [0.0; 3], [1.0; 3]).unwrap(), k, &case, Execution::Sequential).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = DVector::from_fn(sys.map.total(), |_, _| rand::Rng::random_range(&mut rng, -1.0..1.0));
        let z = solve_with(&sys, &b).unwrap();
        prop_assert!(z.residual <= 1e-10, "{}", z.residual);
    }
}

proptest! {
    #[test]
    fn layouts_match_closed_form(seed in any::<u64>(), k in 0usize..4) {
        for m in [perturbed_hexahedron(seed), pentagonal_prism(seed)] {
            let c = &m.cells[0];
            for tag in [SpaceTag::DevGrad, SpaceTag::SymCurl, SpaceTag::DivDiv] {
                let got = DofLayout::new(tag, &m, 0, k).total();
                prop_assert_eq!(got, expected_dimension(tag, k, c.vertices.len(), c.edges.len(), c.faces.len()));
            }
        }
    }

    #[test]
    fn slope_recovers_power_law(p in 0.1f64..5.0, c in 1e-3f64..1e3, h0 in 0.1f64..2.0) {
        let rows: Vec<ConvergenceRow> = (0..4)
            .map(|i| {
                let h = h0 / 2f64.powi(i);
                let e = c * h.powf(p);
                ConvergenceRow { k: 0, h, ndof: 1, err_sigma: e, err_u: 0.0, err_total: e, residual: 0.0 }
            })
            .collect();
        prop_assert!((fitted_slope(&rows).unwrap() - p).abs() < 1e-9);
    }

    #[test]
    fn meshes_are_scale_consistent(n in 1usize..4, s in 0.1f64..10.0) {
        let m = cartesian(n, [0.0; 3], [s; 3]).unwrap();
        let unit = cartesian(n, [0.0; 3], [1.0; 3]).unwrap();
        prop_assert!((m.h() - s * unit.h()).abs() <= 1e-12 * s);
        let scaled = unit.transformed(&(Matrix3::identity() * s), &Point::zeros()).unwrap();
        prop_assert!((scaled.h() - m.h()).abs() <= 1e-12 * s);
    }
}
