//! Quadrature on edges, polygonal faces and polyhedral cells.
//!
//! Faces are split into triangles fanning out of `x_F`, cells into
//! tetrahedra coning those triangles to `x_T`. Simplices use collapsed
//! (Duffy) tensor rules with Gauss-Jacobi factors absorbing the Jacobian.

use crate::mesh::{Mesh, Point};
use nalgebra::{DMatrix, SymmetricEigen};

#[derive(Clone, Debug, Default)]
pub struct Quadrature {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    /// Total degree integrated exactly.
    pub degree: usize,
}

impl Quadrature {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(&Point) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(x, w)| w * f(x)).sum()
    }

    fn append(&mut self, other: Quadrature) {
        self.points.extend(other.points);
        self.weights.extend(other.weights);
    }
}

/// `n`-point Gauss-Jacobi rule on `[0, 1]` for the weight `u^beta`
/// (Golub-Welsch).
pub fn gauss_jacobi(n: usize, beta: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let a = 0.0;
    let b = beta;
    let mut j = DMatrix::zeros(n, n);
    for i in 0..n {
        let k = i as f64;
        let s = 2.0 * k + a + b;
        j[(i, i)] = if i == 0 && (a + b) == 0.0 {
            0.0
        } else if i == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if i + 1 < n {
            let k = k + 1.0;
            let s = 2.0 * k + a + b;
            let off = (4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0)))
                .sqrt();
            j[(i, i + 1)] = off;
            j[(i + 1, i)] = off;
        }
    }
    let eig = SymmetricEigen::new(j);
    // Total mass of the weight (1 + x)^b on [-1, 1] is 2^(b+1)/(b+1).
    let mu0 = 2f64.powf(b + 1.0) / (b + 1.0);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let v0 = eig.eigenvectors[(0, i)];
            ((1.0 + x) / 2.0, mu0 * v0 * v0 / 2f64.powf(b + 1.0))
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    pairs.into_iter().unzip()
}

fn npts(degree: usize) -> usize {
    degree / 2 + 1
}

pub fn segment(a: &Point, b: &Point, degree: usize) -> Quadrature {
    let (u, w) = gauss_jacobi(npts(degree), 0.0);
    let len = (b - a).norm();
    Quadrature {
        points: u.iter().map(|&s| a + (b - a) * s).collect(),
        weights: w.iter().map(|&x| x * len).collect(),
        degree,
    }
}

pub fn triangle(a: &Point, b: &Point, c: &Point, degree: usize) -> Quadrature {
    let n = npts(degree);
    let (u, wu) = gauss_jacobi(n, 1.0);
    let (v, wv) = gauss_jacobi(n, 0.0);
    let jac = (b - a).cross(&(c - b)).norm();
    let mut q = Quadrature {
        degree,
        ..Default::default()
    };
    for i in 0..n {
        for j in 0..n {
            q.points.push(a + (b - a) * u[i] + (c - b) * (u[i] * v[j]));
            q.weights.push(jac * wu[i] * wv[j]);
        }
    }
    q
}

pub fn tetrahedron(a: &Point, b: &Point, c: &Point, d: &Point, degree: usize) -> Quadrature {
    let n = npts(degree);
    let (u, wu) = gauss_jacobi(n, 2.0);
    let (v, wv) = gauss_jacobi(n, 1.0);
    let (w, ww) = gauss_jacobi(n, 0.0);
    let jac = (b - a).cross(&(c - b)).dot(&(d - c)).abs();
    let mut q = Quadrature {
        degree,
        ..Default::default()
    };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                q.points.push(
                    a + (b - a) * u[i] + (c - b) * (u[i] * v[j]) + (d - c) * (u[i] * v[j] * w[k]),
                );
                q.weights.push(jac * wu[i] * wv[j] * ww[k]);
            }
        }
    }
    q
}

pub fn edge_rule(m: &Mesh, e: usize, degree: usize) -> Quadrature {
    let [v1, v2] = m.edges[e].vertices;
    segment(&m.vertices[v1], &m.vertices[v2], degree)
}

pub fn face_rule(m: &Mesh, f: usize, degree: usize) -> Quadrature {
    let face = &m.faces[f];
    let nv = face.vertices.len();
    let mut q = Quadrature {
        degree,
        ..Default::default()
    };
    if nv == 3 {
        let [a, b, c] = [0, 1, 2].map(|i| m.vertices[face.vertices[i]]);
        return triangle(&a, &b, &c, degree);
    }
    for i in 0..nv {
        let a = m.vertices[face.vertices[i]];
        let b = m.vertices[face.vertices[(i + 1) % nv]];
        q.append(triangle(&face.center, &a, &b, degree));
    }
    q
}

pub fn cell_rule(m: &Mesh, c: usize, degree: usize) -> Quadrature {
    let cell = &m.cells[c];
    let mut q = Quadrature {
        degree,
        ..Default::default()
    };
    for &f in &cell.faces {
        let face = &m.faces[f];
        let nv = face.vertices.len();
        if nv == 3 {
            let [a, b, d] = [0, 1, 2].map(|i| m.vertices[face.vertices[i]]);
            q.append(tetrahedron(&cell.center, &a, &b, &d, degree));
            continue;
        }
        for i in 0..nv {
            let a = m.vertices[face.vertices[i]];
            let b = m.vertices[face.vertices[(i + 1) % nv]];
            q.append(tetrahedron(&cell.center, &face.center, &a, &b, degree));
        }
    }
    q
}
