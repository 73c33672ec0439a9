use super::{Mesh, Point};
use crate::{Error, Result};
use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniform hexahedral mesh of the box `[lo, hi]` with `n` cells per direction.
pub fn cartesian(n: usize, lo: [f64; 3], hi: [f64; 3]) -> Result<Mesh> {
    if n == 0 {
        return Err(Error::InvalidArgument("cartesian mesh needs n >= 1".into()));
    }
    if (0..3).any(|d| !(hi[d] > lo[d])) {
        return Err(Error::InvalidArgument("empty bounding box".into()));
    }
    let np = n + 1;
    let vid = |i: usize, j: usize, k: usize| i + np * (j + np * k);
    let mut vertices = Vec::with_capacity(np * np * np);
    for k in 0..np {
        for j in 0..np {
            for i in 0..np {
                let s = [i, j, k];
                vertices.push(Point::from_fn(|d, _| {
                    lo[d] + (hi[d] - lo[d]) * s[d] as f64 / n as f64
                }));
            }
        }
    }
    // Face with normal direction `d` at lattice position `p` (p[d] is the
    // plane index, the other two coordinates the lower corner).
    let mut loops = Vec::new();
    let mut face_id = std::collections::HashMap::new();
    for d in 0..3 {
        let (a, b) = ((d + 1) % 3, (d + 2) % 3);
        for k in 0..np {
            for j in 0..np {
                for i in 0..np {
                    let p = [i, j, k];
                    if p[a] == n || p[b] == n {
                        continue;
                    }
                    let corner = |da: usize, db: usize| {
                        let mut q = p;
                        q[a] += da;
                        q[b] += db;
                        vid(q[0], q[1], q[2])
                    };
                    face_id.insert((d, p), loops.len());
                    loops.push(vec![corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)]);
                }
            }
        }
    }
    let mut cells = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let mut fl = Vec::with_capacity(6);
                for d in 0..3 {
                    for s in 0..2 {
                        let mut p = [i, j, k];
                        p[d] += s;
                        fl.push(face_id[&(d, p)]);
                    }
                }
                cells.push(fl);
            }
        }
    }
    Mesh::from_raw(vertices, loops, cells)
}

pub fn unit_cube() -> Mesh {
    cartesian(1, [0.0; 3], [1.0; 3]).expect("unit cube")
}

/// Tetrahedron with vertices `0, e1, e2, e3`.
pub fn reference_tetrahedron() -> Mesh {
    let v = vec![
        Point::zeros(),
        Point::x(),
        Point::y(),
        Point::z(),
    ];
    let loops = vec![vec![0, 2, 1], vec![0, 1, 3], vec![0, 3, 2], vec![1, 2, 3]];
    Mesh::from_raw(v, loops, vec![vec![0, 1, 2, 3]]).expect("reference tetrahedron")
}

/// Single hexahedral cell with non-parallel side faces: the top face of the
/// unit cube is shrunk and shifted in its plane, then a random affine map is
/// applied. All faces stay planar.
pub fn perturbed_hexahedron(seed: u64) -> Mesh {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut v, loops, cells) = unit_cube().raw();
    let scale = rng.random_range(0.6..0.9);
    let shift = [rng.random_range(-0.1..0.1), rng.random_range(-0.1..0.1)];
    for x in v.iter_mut().filter(|x| x.z == 1.0) {
        x.x = 0.5 + scale * (x.x - 0.5) + shift[0];
        x.y = 0.5 + scale * (x.y - 0.5) + shift[1];
    }
    let a = Matrix3::identity() + Matrix3::from_fn(|_, _| rng.random_range(-0.2..0.2));
    let b = Point::from_fn(|_, _| rng.random_range(-0.5..0.5));
    let m = Mesh::from_raw(v, loops, cells).expect("frustum");
    m.transformed(&a, &b).expect("affine image of a valid cell")
}

/// Right prism over a randomly jittered convex pentagon.
pub fn pentagonal_prism(seed: u64) -> Mesh {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = Vec::with_capacity(10);
    let base: Vec<(f64, f64)> = (0..5)
        .map(|i| {
            let a = std::f64::consts::TAU * (i as f64 + rng.random_range(-0.15..0.15)) / 5.0;
            let r = 0.5 * rng.random_range(0.85..1.15);
            (r * a.cos(), r * a.sin())
        })
        .collect();
    for z in [0.0, 1.0] {
        v.extend(base.iter().map(|&(x, y)| Point::new(x, y, z)));
    }
    let mut loops = vec![(0..5).collect::<Vec<_>>(), (5..10).collect()];
    for i in 0..5 {
        let j = (i + 1) % 5;
        loops.push(vec![i, j, j + 5, i + 5]);
    }
    Mesh::from_raw(v, loops, vec![(0..7).collect()]).expect("pentagonal prism")
}
