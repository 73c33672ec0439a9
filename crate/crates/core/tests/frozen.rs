use approx::assert_relative_eq;
use divdiv::biharmonic::{fitted_slope, manufactured_case, solve_case};
use divdiv::mesh::{cartesian, Point};
use divdiv::verify::{check_dimensions, divf_monomial_identity, test_elements};
use divdiv::Execution;

#[test]
fn layout_sizes() {
    let expected: [(&str, [[usize; 4]; 4]); 5] = [
        ("cube", [[174, 274, 108, 1], [291, 471, 188, 4], [438, 723, 299, 10], [618, 1038, 444, 20]]),
        ("tetrahedron", [[88, 140, 60, 1], [153, 255, 110, 4], [240, 413, 187, 10], [352, 622, 294, 20]]),
        (
            "perturbed-hexahedron",
            [[174, 274, 108, 1], [291, 471, 188, 4], [438, 723, 299, 10], [618, 1038, 444, 20]],
        ),
        (
            "pentagonal-prism",
            [[217, 341, 132, 1], [360, 579, 227, 4], [537, 878, 355, 10], [751, 1246, 519, 20]],
        ),
        ("voronoi", [[518, 810, 300, 1], [843, 1335, 500, 4], [1230, 1963, 747, 10], [1682, 2702, 1044, 20]]),
    ];
    for ((name, m), (ename, sizes)) in test_elements(0).into_iter().zip(expected) {
        assert_eq!(name, ename);
        for (k, want) in sizes.iter().enumerate() {
            let got: Vec<usize> = check_dimensions(&m, 0, k).unwrap().iter().map(|d| d.constructed).collect();
            assert_eq!(&got[..], want, "{name} k={k}");
        }
    }
}

#[test]
fn bubble_values() {
    let case = manufactured_case("bubble").unwrap();
    let c = Point::new(0.5, 0.5, 0.5);
    assert_relative_eq!(case.u_at(&c), 2.44140625e-4, max_relative = 1e-14);
    assert_relative_eq!(case.f_at(&c), 0.65625, max_relative = 1e-13);
}

#[test]
fn monomial_divergence() {
    assert!(divf_monomial_identity().unwrap() <= 1e-12);
}

#[test]
fn coarse_cube_errors() {
    let case = manufactured_case("bubble").unwrap();
    // (n, k, ndof, err_sigma, err_u, err_total)
    let frozen = [
        (1, 0, 109, 6.509148198807303e-2, 2.3479363249197735e-2, 8.857084523727077e-2),
        (2, 0, 548, 4.156807248434353e-2, 2.433186179546911e-3, 4.400125866389044e-2),
        (1, 1, 192, 9.228289272874654e-2, 2.2033300832864745e-2, 1.1431619356161128e-1),
        (2, 1, 1014, 3.660861967734582e-2, 1.5899054046480173e-3, 3.819852508199384e-2),
    ];
    for (n, k, ndof, es, eu, et) in frozen {
        let m = cartesian(n, [0.0; 3], [1.0; 3]).unwrap();
        let r = solve_case(&m, k, &case, Execution::Parallel).unwrap();
        assert_eq!(r.ndof, ndof);
        assert_relative_eq!(r.err_sigma, es, max_relative = 1e-8);
        assert_relative_eq!(r.err_u, eu, max_relative = 1e-8);
        assert_relative_eq!(r.err_total, et, max_relative = 1e-8);
        assert!(r.residual < 1e-10);
    }
}

#[test]
fn coarse_slopes() {
    let case = manufactured_case("bubble").unwrap();
    let rows: Vec<_> = [1, 2]
        .iter()
        .map(|&n| solve_case(&cartesian(n, [0.0; 3], [1.0; 3]).unwrap(), 0, &case, Execution::Parallel).unwrap())
        .collect();
    assert_relative_eq!(fitted_slope(&rows).unwrap(), 1.0093, epsilon = 1e-4);
}
