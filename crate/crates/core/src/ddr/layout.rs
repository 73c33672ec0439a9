use crate::mesh::Mesh;
use crate::poly::monomial;
use crate::poly::SpaceKind;
use std::collections::HashMap;
use std::fmt;

/// The three discrete spaces of the complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum SpaceTag {
    DevGrad,
    SymCurl,
    DivDiv,
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceTag::DevGrad => "devgrad",
            SpaceTag::SymCurl => "symcurl",
            SpaceTag::DivDiv => "divdiv",
        })
    }
}

/// Where a block lives, with the entity's position in the cell's lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Location {
    Cell,
    Face(usize),
    Edge(usize),
    Vertex(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub location: Location,
    /// Global id of the entity carrying the block (the cell id for cell blocks).
    pub global: usize,
    pub name: &'static str,
    pub offset: usize,
    pub size: usize,
}

/// Ordered DOF blocks of one local discrete space: cell, then faces, edges
/// and vertices in the order of the cell's incidence lists.
#[derive(Clone, Debug)]
pub struct DofLayout {
    pub tag: SpaceTag,
    pub degree: usize,
    pub blocks: Vec<Block>,
    index: HashMap<(Location, &'static str), usize>,
}

fn d1(l: i64) -> usize {
    monomial::dim(1, l)
}

fn d2(l: i64) -> usize {
    monomial::dim(2, l)
}

fn d3(l: i64) -> usize {
    monomial::dim(3, l)
}

/// Block names and sizes per entity kind (cell, face, edge, vertex).
#[allow(clippy::type_complexity)]
pub fn block_sizes(
    tag: SpaceTag,
    k: usize,
) -> [Vec<(&'static str, usize)>; 4] {
    let k = k as i64;
    match tag {
        SpaceTag::DevGrad => [
            vec![("v", 3 * d3(k - 1))],
            vec![("vn", d2(k)), ("vt", 2 * d2(k - 1)), ("g", d2(k - 1))],
            vec![("vt", d1(k - 1)), ("vn", 2 * d1(k)), ("g", 4 * d1(k))],
            vec![("v", 3), ("g", 9)],
        ],
        SpaceTag::SymCurl => [
            vec![("tau", SpaceKind::SRTrim.dimension(k))],
            vec![("rt", SpaceKind::RT.dimension(k + 1)), ("cg", SpaceKind::CGTrim.dimension(k))],
            vec![("tau", 4 * d1(k)), ("tt", 2 * d1(k + 1)), ("c", 4 * d1(k + 1))],
            vec![("tau", 8)],
        ],
        SpaceTag::DivDiv => [
            vec![("h", SpaceKind::HTrim.dimension(k))],
            vec![("u", d2(k + 1)), ("d", d2(k + 1))],
            vec![("u", 3 * d1(k + 1))],
            vec![],
        ],
    }
}

impl DofLayout {
    pub fn new(tag: SpaceTag, m: &Mesh, cell: usize, k: usize) -> DofLayout {
        let c = &m.cells[cell];
        let sizes = block_sizes(tag, k);
        let mut blocks = Vec::new();
        let mut offset = 0;
        let mut push = |location, global, list: &[(&'static str, usize)]| {
            for &(name, size) in list {
                blocks.push(Block {
                    location,
                    global,
                    name,
                    offset,
                    size,
                });
                offset += size;
            }
        };
        push(Location::Cell, cell, &sizes[0]);
        for (i, &f) in c.faces.iter().enumerate() {
            push(Location::Face(i), f, &sizes[1]);
        }
        for (i, &e) in c.edges.iter().enumerate() {
            push(Location::Edge(i), e, &sizes[2]);
        }
        for (i, &v) in c.vertices.iter().enumerate() {
            push(Location::Vertex(i), v, &sizes[3]);
        }
        let index = blocks
            .iter()
            .enumerate()
            .map(|(i, b)| ((b.location, b.name), i))
            .collect();
        DofLayout {
            tag,
            degree: k,
            blocks,
            index,
        }
    }

    pub fn total(&self) -> usize {
        self.blocks.last().map_or(0, |b| b.offset + b.size)
    }

    pub fn block(&self, location: Location, name: &'static str) -> &Block {
        let i = self
            .index
            .get(&(location, name))
            .unwrap_or_else(|| panic!("no block {name} at {location:?} in {} layout", self.tag));
        &self.blocks[*i]
    }

    /// `(offset, size)` of a block.
    pub fn range(&self, location: Location, name: &'static str) -> (usize, usize) {
        let b = self.block(location, name);
        (b.offset, b.size)
    }

    /// DOF indices of every block attached to the given location.
    pub fn indices_at(&self, location: Location) -> Vec<usize> {
        self.blocks
            .iter()
            .filter(|b| b.location == location)
            .flat_map(|b| b.offset..b.offset + b.size)
            .collect()
    }
}

/// Closed-form dimension of a local space on an element with `nv`
/// vertices, `ne` edges and `nf` faces; valid for `k >= 1`. At `k = 0`
/// the divdiv count must be raised by 3 because the element block vanishes
/// instead of contributing `-3`.
pub fn closed_form_dimension(tag: SpaceTag, k: usize, nv: usize, ne: usize, nf: usize) -> i64 {
    let (k, nv, ne, nf) = (k as i64, nv as i64, ne as i64, nf as i64);
    match tag {
        SpaceTag::DevGrad => {
            12 * nv + (7 * k + 6) * ne + (2 * k * k + 3 * k + 1) * nf + (k * k * k + 3 * k * k + 2 * k) / 2
        }
        SpaceTag::SymCurl => {
            8 * nv
                + (10 * k + 16) * ne
                + (3 * k * k + 8 * k + 3) * nf
                + (8 * k * k * k + 33 * k * k + 25 * k) / 6
        }
        SpaceTag::DivDiv => {
            -3 + (3 * k + 6) * ne + (k * k + 5 * k + 6) * nf + (k * k * k + 5 * k * k + 5 * k)
        }
    }
}

/// [`closed_form_dimension`] with the `k = 0` divdiv correction applied.
pub fn expected_dimension(tag: SpaceTag, k: usize, nv: usize, ne: usize, nf: usize) -> usize {
    let base = closed_form_dimension(tag, k, nv, ne, nf);
    let corr = if tag == SpaceTag::DivDiv && k == 0 { 3 } else { 0 };
    (base + corr) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{reference_tetrahedron, unit_cube};

    #[test]
    fn cube_totals() {
        let m = unit_cube();
        assert_eq!(DofLayout::new(SpaceTag::DivDiv, &m, 0, 1).total(), 188);
        assert_eq!(DofLayout::new(SpaceTag::DevGrad, &m, 0, 1).total(), 291);
        for k in 0..4 {
            for tag in [SpaceTag::DevGrad, SpaceTag::SymCurl, SpaceTag::DivDiv] {
                let l = DofLayout::new(tag, &m, 0, k);
                assert_eq!(l.total(), expected_dimension(tag, k, 8, 12, 6), "{tag} k={k}");
            }
        }
    }

    #[test]
    fn tetrahedron_at_degree_zero() {
        let m = reference_tetrahedron();
        assert_eq!(closed_form_dimension(SpaceTag::DivDiv, 0, 4, 6, 4), 57);
        assert_eq!(DofLayout::new(SpaceTag::DivDiv, &m, 0, 0).total(), 60);
        assert_eq!(DofLayout::new(SpaceTag::DevGrad, &m, 0, 0).total(), 88);
        assert_eq!(DofLayout::new(SpaceTag::SymCurl, &m, 0, 0).total(), 140);
    }

    #[test]
    fn blocks_are_contiguous() {
        let m = unit_cube();
        let l = DofLayout::new(SpaceTag::SymCurl, &m, 0, 2);
        let mut off = 0;
        for b in &l.blocks {
            assert_eq!(b.offset, off);
            off += b.size;
        }
        assert_eq!(l.range(Location::Vertex(7), "tau").1, 8);
        assert_eq!(l.indices_at(Location::Edge(0)).len(), 4 * 3 + 2 * 4 + 4 * 4);
    }
}
