//! Polyhedral meshes with oriented incidence and per-entity frames.
//!
//! Orientation conventions:
//! - an edge runs from its lower-index vertex `V1` to its higher-index vertex
//!   `V2`, `t_E = (x_V2 - x_V1) / h_E`;
//! - a face normal comes from the Newell formula over the stored vertex loop,
//!   so the loop is counter-clockwise with respect to `n_F`;
//! - `n_FE = n_F x t_E`, making `(t_E, n_FE, n_F)` right-handed, and
//!   `omega_FE = +1` iff `n_FE` points out of `F`;
//! - `omega_TF = +1` iff `n_F` points out of `T`.

mod generate;
mod io;

pub use generate::{cartesian, pentagonal_prism, perturbed_hexahedron, reference_tetrahedron, unit_cube};
pub use io::{load_mesh, read_mesh, MeshFile};

use crate::{Error, Result};
use nalgebra::Vector3;
use serde::Serialize;
use std::collections::HashMap;

pub type Point = Vector3<f64>;

/// Faces whose vertices deviate from the Newell plane by more than this
/// fraction of the face diameter are rejected.
pub const PLANARITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct Edge {
    pub vertices: [usize; 2],
    pub tangent: Point,
    pub midpoint: Point,
    pub length: f64,
    /// Orthonormal pair spanning the plane normal to the edge, with
    /// `(n_E1, n_E2, t_E)` right-handed.
    pub normals: [Point; 2],
}

#[derive(Clone, Debug)]
pub struct Face {
    /// Vertex loop as stored in the input.
    pub vertices: Vec<usize>,
    /// `edges[i]` joins `vertices[i]` and `vertices[i + 1]`.
    pub edges: Vec<usize>,
    /// `omega_FE` for each entry of `edges`.
    pub edge_orientations: Vec<f64>,
    /// `n_FE` for each entry of `edges`.
    pub edge_normals: Vec<Point>,
    pub normal: Point,
    /// `(t_F1, t_F2)` with `t_F1 x t_F2 = n_F`.
    pub tangents: [Point; 2],
    pub center: Point,
    pub diameter: f64,
    pub area: f64,
    /// Incident cells (one on the boundary, two inside).
    pub cells: Vec<usize>,
    /// Largest distance of a vertex to the face plane.
    pub planarity_residual: f64,
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub faces: Vec<usize>,
    /// `omega_TF` for each entry of `faces`.
    pub face_orientations: Vec<f64>,
    pub edges: Vec<usize>,
    pub vertices: Vec<usize>,
    pub center: Point,
    pub diameter: f64,
    pub volume: f64,
}

/// Immutable polyhedral mesh.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub vertices: Vec<Point>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
    pub cells: Vec<Cell>,
}

/// Unit vector orthogonal to `axis`, built from the canonical direction least
/// aligned with it. Ties go to the lowest coordinate index.
fn orthogonal_unit(axis: &Point) -> Point {
    let mut best = 0;
    for i in 1..3 {
        if axis[i].abs() < axis[best].abs() {
            best = i;
        }
    }
    let mut a = Point::zeros();
    a[best] = 1.0;
    (a - axis * a.dot(axis)).normalize()
}

fn diameter_of(points: impl Iterator<Item = Point> + Clone) -> f64 {
    let pts: Vec<Point> = points.collect();
    let mut d: f64 = 0.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            d = d.max((pts[i] - pts[j]).norm());
        }
    }
    d
}

impl Mesh {
    /// Builds a mesh from raw vertex coordinates, face vertex loops and cell
    /// face lists, deriving all incidence, frames and orientations.
    pub fn from_raw(
        vertices: Vec<Point>,
        face_loops: Vec<Vec<usize>>,
        cell_faces: Vec<Vec<usize>>,
    ) -> Result<Mesh> {
        let nv = vertices.len();
        let mut edges: Vec<Edge> = Vec::new();
        let mut edge_ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut faces = Vec::with_capacity(face_loops.len());

        for (fi, lp) in face_loops.iter().enumerate() {
            let name = || format!("face {fi}");
            if lp.len() < 3 {
                return Err(Error::MeshValidation {
                    entity: name(),
                    reason: format!("loop has {} vertices", lp.len()),
                });
            }
            if let Some(&bad) = lp.iter().find(|&&v| v >= nv) {
                return Err(Error::MeshValidation {
                    entity: name(),
                    reason: format!("vertex index {bad} out of range"),
                });
            }
            let mut sorted = lp.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != lp.len() {
                return Err(Error::MeshValidation {
                    entity: name(),
                    reason: "repeated vertex in loop".into(),
                });
            }

            // Newell normal; its length is twice the area.
            let mut newell = Point::zeros();
            for i in 0..lp.len() {
                let a = vertices[lp[i]];
                let b = vertices[lp[(i + 1) % lp.len()]];
                newell.x += (a.y - b.y) * (a.z + b.z);
                newell.y += (a.z - b.z) * (a.x + b.x);
                newell.z += (a.x - b.x) * (a.y + b.y);
            }
            let diameter = diameter_of(lp.iter().map(|&v| vertices[v]));
            let area = 0.5 * newell.norm();
            if area <= 1e-14 * diameter * diameter || diameter == 0.0 {
                return Err(Error::Degenerate(name()));
            }
            let normal = newell / (2.0 * area);
            let center = lp.iter().map(|&v| vertices[v]).sum::<Point>() / lp.len() as f64;
            let planarity_residual = lp
                .iter()
                .map(|&v| (vertices[v] - center).dot(&normal).abs())
                .fold(0.0, f64::max);
            if planarity_residual > PLANARITY_TOL * diameter {
                return Err(Error::MeshValidation {
                    entity: name(),
                    reason: format!(
                        "non-planar: vertex deviation {planarity_residual:.3e} exceeds {:.1e} * h_F",
                        PLANARITY_TOL
                    ),
                });
            }
            let t1 = orthogonal_unit(&normal);
            let t2 = normal.cross(&t1);

            let mut f_edges = Vec::with_capacity(lp.len());
            let mut f_orient = Vec::with_capacity(lp.len());
            let mut f_normals = Vec::with_capacity(lp.len());
            for i in 0..lp.len() {
                let a = lp[i];
                let b = lp[(i + 1) % lp.len()];
                let key = (a.min(b), a.max(b));
                let id = *edge_ids.entry(key).or_insert_with(|| {
                    let (v1, v2) = key;
                    let d = vertices[v2] - vertices[v1];
                    let length = d.norm();
                    let tangent = d / length;
                    let n1 = orthogonal_unit(&tangent);
                    let n2 = tangent.cross(&n1);
                    edges.push(Edge {
                        vertices: [v1, v2],
                        tangent,
                        midpoint: 0.5 * (vertices[v1] + vertices[v2]),
                        length,
                        normals: [n1, n2],
                    });
                    edges.len() - 1
                });
                if edges[id].length == 0.0 {
                    return Err(Error::Degenerate(format!("edge {id}")));
                }
                let t = edges[id].tangent;
                // The loop runs counter-clockwise around n_F, so an edge whose
                // tangent follows the loop has n_F x t_E pointing inwards.
                let omega = if a == key.0 { -1.0 } else { 1.0 };
                f_edges.push(id);
                f_orient.push(omega);
                f_normals.push(normal.cross(&t));
            }
            faces.push(Face {
                vertices: lp.clone(),
                edges: f_edges,
                edge_orientations: f_orient,
                edge_normals: f_normals,
                normal,
                tangents: [t1, t2],
                center,
                diameter,
                area,
                cells: Vec::new(),
                planarity_residual,
            });
        }

        let mut cells = Vec::with_capacity(cell_faces.len());
        for (ci, fl) in cell_faces.iter().enumerate() {
            let name = || format!("cell {ci}");
            if fl.len() < 4 {
                return Err(Error::MeshValidation {
                    entity: name(),
                    reason: format!("only {} faces", fl.len()),
                });
            }
            if let Some(&bad) = fl.iter().find(|&&f| f >= faces.len()) {
                return Err(Error::MeshValidation {
                    entity: name(),
                    reason: format!("face index {bad} out of range"),
                });
            }
            let mut c_vertices = Vec::new();
            let mut c_edges = Vec::new();
            for &f in fl {
                for &v in &faces[f].vertices {
                    if !c_vertices.contains(&v) {
                        c_vertices.push(v);
                    }
                }
                for &e in &faces[f].edges {
                    if !c_edges.contains(&e) {
                        c_edges.push(e);
                    }
                }
            }
            let center =
                c_vertices.iter().map(|&v| vertices[v]).sum::<Point>() / c_vertices.len() as f64;
            let diameter = diameter_of(c_vertices.iter().map(|&v| vertices[v]));
            let orient: Vec<f64> = fl
                .iter()
                .map(|&f| {
                    if faces[f].normal.dot(&(faces[f].center - center)) > 0.0 {
                        1.0
                    } else {
                        -1.0
                    }
                })
                .collect();

            // Watertightness: every edge is shared by exactly two faces of the
            // cell which induce opposite orientations on it.
            for &e in &c_edges {
                let mut count = 0;
                let mut sum = 0.0;
                for (j, &f) in fl.iter().enumerate() {
                    if let Some(p) = faces[f].edges.iter().position(|&x| x == e) {
                        count += 1;
                        sum += orient[j] * faces[f].edge_orientations[p];
                    }
                }
                if count != 2 || sum != 0.0 {
                    return Err(Error::MeshValidation {
                        entity: name(),
                        reason: format!("not watertight or inconsistently oriented at edge {e}"),
                    });
                }
            }
            let volume = fl
                .iter()
                .zip(&orient)
                .map(|(&f, &w)| w * faces[f].area * faces[f].center.dot(&faces[f].normal))
                .sum::<f64>()
                / 3.0;
            if volume <= 0.0 {
                return Err(Error::Degenerate(name()));
            }
            for &f in fl {
                faces[f].cells.push(ci);
            }
            cells.push(Cell {
                faces: fl.clone(),
                face_orientations: orient,
                edges: c_edges,
                vertices: c_vertices,
                center,
                diameter,
                volume,
            });
        }

        for (fi, f) in faces.iter().enumerate() {
            match f.cells.len() {
                0 => {
                    return Err(Error::MeshValidation {
                        entity: format!("face {fi}"),
                        reason: "dangling face (no cell)".into(),
                    })
                }
                1 => {}
                2 => {
                    let w = |c: usize| {
                        let cell = &cells[c];
                        cell.face_orientations[cell.faces.iter().position(|&x| x == fi).unwrap()]
                    };
                    if w(f.cells[0]) == w(f.cells[1]) {
                        return Err(Error::MeshValidation {
                            entity: format!("face {fi}"),
                            reason: "both incident cells see the normal as outward".into(),
                        });
                    }
                }
                n => {
                    return Err(Error::MeshValidation {
                        entity: format!("face {fi}"),
                        reason: format!("shared by {n} cells"),
                    })
                }
            }
        }
        let mut used = vec![false; nv];
        for f in &faces {
            for &v in &f.vertices {
                used[v] = true;
            }
        }
        if let Some(v) = used.iter().position(|&u| !u) {
            return Err(Error::MeshValidation {
                entity: format!("vertex {v}"),
                reason: "dangling vertex".into(),
            });
        }

        Ok(Mesh {
            vertices,
            edges,
            faces,
            cells,
        })
    }

    /// Global mesh size `h = max h_T`.
    pub fn h(&self) -> f64 {
        self.cells.iter().map(|c| c.diameter).fold(0.0, f64::max)
    }

    /// Sub-mesh made of a single cell, with renumbered entities.
    pub fn cell_mesh(&self, cell: usize) -> Mesh {
        let c = &self.cells[cell];
        let vmap: HashMap<usize, usize> =
            c.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let verts = c.vertices.iter().map(|&v| self.vertices[v]).collect();
        let loops = c
            .faces
            .iter()
            .map(|&f| self.faces[f].vertices.iter().map(|v| vmap[v]).collect())
            .collect();
        Mesh::from_raw(verts, loops, vec![(0..c.faces.len()).collect()])
            .expect("sub-mesh of a valid mesh is valid")
    }

    /// Applies `x -> a x + b` to every vertex and rebuilds derived data.
    pub fn transformed(&self, a: &nalgebra::Matrix3<f64>, b: &Point) -> Result<Mesh> {
        let (verts, loops, cells) = self.raw();
        Mesh::from_raw(verts.iter().map(|x| a * x + b).collect(), loops, cells)
    }

    /// Raw representation (vertices, face loops, cell face lists).
    pub fn raw(&self) -> (Vec<Point>, Vec<Vec<usize>>, Vec<Vec<usize>>) {
        (
            self.vertices.clone(),
            self.faces.iter().map(|f| f.vertices.clone()).collect(),
            self.cells.iter().map(|c| c.faces.clone()).collect(),
        )
    }
}

/// Per-cell entry of a [`ValidationReport`].
#[derive(Clone, Debug, Serialize)]
pub struct CellReport {
    pub cell: usize,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler: i64,
    /// True when `|V| - |E| + |F| != 2`.
    pub nontrivial_topology: bool,
    /// `|sum_F omega_TF |F| n_F|` relative to `h_T^2`.
    pub orientation_checksum: f64,
    /// Smallest distance from `x_T` to a face plane, divided by `h_T`.
    pub inscribed_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub cells: Vec<CellReport>,
    /// Largest planarity residual relative to the face diameter.
    pub max_planarity_residual: f64,
    /// Largest `|t_E x n_FE - n_F|` over face-edge pairs.
    pub max_frame_defect: f64,
}

impl ValidationReport {
    pub fn all_trivial(&self) -> bool {
        self.cells.iter().all(|c| !c.nontrivial_topology)
    }
}

/// Report-only inspection of a mesh.
pub fn validate_mesh(m: &Mesh) -> ValidationReport {
    let cells = m
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let euler = c.vertices.len() as i64 - c.edges.len() as i64 + c.faces.len() as i64;
            let flux: Point = c
                .faces
                .iter()
                .zip(&c.face_orientations)
                .map(|(&f, &w)| m.faces[f].normal * (w * m.faces[f].area))
                .sum();
            let inscribed = c
                .faces
                .iter()
                .map(|&f| (m.faces[f].center - c.center).dot(&m.faces[f].normal).abs())
                .fold(f64::INFINITY, f64::min);
            CellReport {
                cell: i,
                vertices: c.vertices.len(),
                edges: c.edges.len(),
                faces: c.faces.len(),
                euler,
                nontrivial_topology: euler != 2,
                orientation_checksum: flux.norm() / (c.diameter * c.diameter),
                inscribed_ratio: inscribed / c.diameter,
            }
        })
        .collect();
    let max_planarity_residual = m
        .faces
        .iter()
        .map(|f| f.planarity_residual / f.diameter)
        .fold(0.0, f64::max);
    let mut max_frame_defect: f64 = 0.0;
    for f in &m.faces {
        for (j, &e) in f.edges.iter().enumerate() {
            let d = m.edges[e].tangent.cross(&f.edge_normals[j]) - f.normal;
            max_frame_defect = max_frame_defect.max(d.norm());
        }
    }
    ValidationReport {
        cells,
        max_planarity_residual,
        max_frame_defect,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_cube_counts_and_invariants() {
        let m = unit_cube();
        assert_eq!(
            (m.cells.len(), m.faces.len(), m.edges.len(), m.vertices.len()),
            (1, 6, 12, 8)
        );
        let r = validate_mesh(&m);
        assert_eq!(r.cells[0].euler, 2);
        assert!(!r.cells[0].nontrivial_topology);
        assert!(r.cells[0].orientation_checksum < 1e-12);
        assert!(r.max_frame_defect < 1e-12);
        assert!((m.h() - 3f64.sqrt()).abs() < 1e-14);
        assert!((m.cells[0].volume - 1.0).abs() < 1e-14);
    }

    #[test]
    fn frames_are_right_handed_and_orthonormal() {
        let m = perturbed_hexahedron(3);
        for e in &m.edges {
            let [n1, n2] = e.normals;
            assert!((n1.cross(&n2) - e.tangent).norm() < 1e-14);
            assert!(n1.dot(&e.tangent).abs() < 1e-14);
        }
        for f in &m.faces {
            assert!((f.tangents[0].cross(&f.tangents[1]) - f.normal).norm() < 1e-14);
            for (j, &e) in f.edges.iter().enumerate() {
                // omega_FE n_FE points away from the face center
                let out = f.edge_orientations[j] * f.edge_normals[j];
                assert!(out.dot(&(m.edges[e].midpoint - f.center)) > 0.0);
            }
        }
    }

    #[test]
    fn cartesian_two_counts() {
        let m = cartesian(2, [0.0; 3], [1.0; 3]).unwrap();
        // (n+1)^3 vertices, 3n^2(n+1) faces, 3n(n+1)^2 edges
        assert_eq!(
            (m.cells.len(), m.faces.len(), m.edges.len(), m.vertices.len()),
            (8, 36, 54, 27)
        );
        for (fi, f) in m.faces.iter().enumerate() {
            if f.cells.len() == 2 {
                let w: Vec<f64> = f
                    .cells
                    .iter()
                    .map(|&c| {
                        let cell = &m.cells[c];
                        let p = cell.faces.iter().position(|&x| x == fi).unwrap();
                        cell.face_orientations[p]
                    })
                    .collect();
                assert_eq!(w[0], -w[1]);
            }
        }
        assert!((m.h() - 3f64.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn cartesian_rejects_zero_subdivisions() {
        assert!(matches!(
            cartesian(0, [0.0; 3], [1.0; 3]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn reversed_face_loop_still_loads() {
        let (v, mut loops, cells) = unit_cube().raw();
        loops[2].reverse();
        let m = Mesh::from_raw(v, loops, cells).unwrap();
        let r = validate_mesh(&m);
        assert!(r.cells[0].orientation_checksum < 1e-12);
        for (j, &f) in m.cells[0].faces.iter().enumerate() {
            let out = m.cells[0].face_orientations[j] * m.faces[f].normal;
            assert!(out.dot(&(m.faces[f].center - m.cells[0].center)) > 0.0);
        }
    }

    #[test]
    fn nonplanar_face_is_rejected() {
        let (mut v, loops, cells) = unit_cube().raw();
        // Lift one vertex of one face out of its plane by 1e-3 h_F.
        let f0 = &loops[0];
        let hf = 2f64.sqrt();
        let normal_axis = {
            let m = unit_cube();
            m.faces[0].normal
        };
        v[f0[0]] += normal_axis * (1e-3 * hf);
        match Mesh::from_raw(v, loops, cells) {
            Err(Error::MeshValidation { entity, .. }) => assert!(entity.starts_with("face")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn open_cell_is_rejected() {
        let (v, loops, mut cells) = unit_cube().raw();
        cells[0].pop();
        let loops5 = loops[..5].to_vec();
        assert!(Mesh::from_raw(v, loops5, cells).is_err());
    }

    #[test]
    fn tetrahedron_counts() {
        let m = reference_tetrahedron();
        assert_eq!(
            (m.cells.len(), m.faces.len(), m.edges.len(), m.vertices.len()),
            (1, 4, 6, 4)
        );
        assert_eq!(validate_mesh(&m).cells[0].euler, 2);
        assert!((m.cells[0].volume - 1.0 / 6.0).abs() < 1e-15);
    }
}
