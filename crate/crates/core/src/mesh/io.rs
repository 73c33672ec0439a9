use super::{Mesh, Point};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// On-disk mesh: vertex coordinates, face vertex loops, cell face lists.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeshFile {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
    pub cells: Vec<Vec<usize>>,
}

impl MeshFile {
    pub fn into_mesh(self) -> Result<Mesh> {
        let v = self.vertices.iter().map(|p| Point::from(*p)).collect();
        Mesh::from_raw(v, self.faces, self.cells)
    }
}

impl From<&Mesh> for MeshFile {
    fn from(m: &Mesh) -> Self {
        let (v, faces, cells) = m.raw();
        MeshFile {
            vertices: v.iter().map(|p| [p.x, p.y, p.z]).collect(),
            faces,
            cells,
        }
    }
}

impl Mesh {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&MeshFile::from(self)).expect("mesh serializes")
    }
}

/// Parses and validates a JSON mesh.
pub fn load_mesh(text: &str) -> Result<Mesh> {
    let f: MeshFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    f.into_mesh()
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<Mesh> {
    load_mesh(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::perturbed_hexahedron;

    #[test]
    fn json_round_trip() {
        let m = perturbed_hexahedron(7);
        let back = load_mesh(&m.to_json()).unwrap();
        for (a, b) in back.vertices.iter().zip(&m.vertices) {
            assert!((a - b).norm() < 1e-15);
        }
        assert_eq!(back.faces.len(), m.faces.len());
        for (a, b) in back.faces.iter().zip(&m.faces) {
            assert_eq!(a.vertices, b.vertices);
            assert!((a.normal - b.normal).norm() < 1e-14);
        }
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(load_mesh("{\"vertices\": 3}"), Err(Error::Parse(_))));
    }
}
