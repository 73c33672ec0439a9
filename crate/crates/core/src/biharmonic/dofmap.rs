use crate::ddr::layout::block_sizes;
use crate::ddr::{DofLayout, Location, SpaceTag};
use crate::mesh::Mesh;
use crate::poly::monomial;

/// Global numbering of the divdiv space followed by the broken `P^k`
/// unknowns: all face blocks, then all edge blocks, then cell blocks, then
/// the cell polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalDofMap {
    pub k: usize,
    pub n_faces: usize,
    pub n_edges: usize,
    pub n_cells: usize,
    pub face_size: usize,
    pub edge_size: usize,
    pub cell_size: usize,
    pub poly_size: usize,
}

impl GlobalDofMap {
    pub fn new(m: &Mesh, k: usize) -> GlobalDofMap {
        let sizes = block_sizes(SpaceTag::DivDiv, k);
        let total = |i: usize| sizes[i].iter().map(|b| b.1).sum::<usize>();
        GlobalDofMap {
            k,
            n_faces: m.faces.len(),
            n_edges: m.edges.len(),
            n_cells: m.cells.len(),
            face_size: total(1),
            edge_size: total(2),
            cell_size: total(0),
            poly_size: monomial::dim(3, k as i64),
        }
    }

    pub fn face_offset(&self, f: usize) -> usize {
        f * self.face_size
    }

    pub fn edge_offset(&self, e: usize) -> usize {
        self.n_faces * self.face_size + e * self.edge_size
    }

    pub fn cell_offset(&self, c: usize) -> usize {
        self.n_faces * self.face_size + self.n_edges * self.edge_size + c * self.cell_size
    }

    /// Dimension of the global divdiv space.
    pub fn sigma_dofs(&self) -> usize {
        self.cell_offset(self.n_cells)
    }

    pub fn u_offset(&self, c: usize) -> usize {
        self.sigma_dofs() + c * self.poly_size
    }

    pub fn u_dofs(&self) -> usize {
        self.n_cells * self.poly_size
    }

    pub fn total(&self) -> usize {
        self.sigma_dofs() + self.u_dofs()
    }

    /// Global index of every local divdiv DOF of a cell layout.
    pub fn local_to_global(&self, layout: &DofLayout) -> Vec<usize> {
        let mut out = vec![0; layout.total()];
        let mut current: Option<(Location, usize)> = None;
        let mut within = 0;
        for b in &layout.blocks {
            let key = (b.location, b.global);
            if current != Some(key) {
                current = Some(key);
                within = 0;
            }
            let base = match b.location {
                Location::Cell => self.cell_offset(b.global),
                Location::Face(_) => self.face_offset(b.global),
                Location::Edge(_) => self.edge_offset(b.global),
                Location::Vertex(_) => unreachable!("divdiv space has no vertex DOFs"),
            };
            for i in 0..b.size {
                out[b.offset + i] = base + within + i;
            }
            within += b.size;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::cartesian;

    #[test]
    fn shared_blocks_are_numbered_once() {
        let m = cartesian(2, [0.0; 3], [1.0; 3]).unwrap();
        for k in 0..3 {
            let map = GlobalDofMap::new(&m, k);
            let mut seen = vec![0usize; map.sigma_dofs()];
            for c in 0..m.cells.len() {
                let lay = DofLayout::new(SpaceTag::DivDiv, &m, c, k);
                let g = map.local_to_global(&lay);
                let mut sorted = g.clone();
                sorted.sort_unstable();
                sorted.dedup();
                assert_eq!(sorted.len(), g.len());
                for i in g {
                    seen[i] += 1;
                }
            }
            assert!(seen.iter().all(|&s| s > 0));
            let faces_total: usize = m.faces.iter().map(|f| f.cells.len()).sum();
            let shared: usize = seen.iter().sum();
            let expected = faces_total * map.face_size
                + m.cells.iter().map(|c| c.edges.len()).sum::<usize>() * map.edge_size
                + m.cells.len() * map.cell_size;
            assert_eq!(shared, expected);
        }
    }

    #[test]
    fn single_element_size() {
        let m = crate::mesh::unit_cube();
        let map = GlobalDofMap::new(&m, 0);
        let lay = DofLayout::new(SpaceTag::DivDiv, &m, 0, 0);
        assert_eq!(map.total(), lay.total() + 1);
    }
}
