use super::layout::{DofLayout, SpaceTag};
use crate::mesh::{Mesh, Point};
use crate::poly::{
    decomposition_basis, edge_derivative, monomial, scalar_basis, Entity, PolyBasis, Quadrature,
    SpaceKind,
};
use crate::Result;
use nalgebra::{DMatrix, Dim, Matrix, RawStorage};

/// Face data seen from one element.
#[derive(Clone, Debug)]
pub struct FaceData {
    pub id: usize,
    /// `omega_TF`.
    pub orientation: f64,
    pub normal: Point,
    pub tangents: [Point; 2],
    pub q: Quadrature,
    /// Hierarchical orthonormal basis of `P^{k+1}(F)`.
    pub scalar: PolyBasis,
    /// `RT^{k+1}(F)`, components in the tangent frame.
    pub rt: PolyBasis,
    /// `CGtrim^k(F)`, components in the tangent frame.
    pub cg: PolyBasis,
    /// `(local edge index, omega_FE, n_FE)` for each edge of the face.
    pub edges: Vec<(usize, f64, Point)>,
}

/// Edge data seen from one element.
#[derive(Clone, Debug)]
pub struct EdgeData {
    pub id: usize,
    pub tangent: Point,
    pub normals: [Point; 2],
    pub q: Quadrature,
    /// Hierarchical orthonormal basis of `P^{k+1}(E)`.
    pub scalar: PolyBasis,
    /// Local indices of `V1`, `V2`.
    pub vertices: [usize; 2],
    /// Tangential derivative reconstructions onto `P^k(E)` and `P^{k+1}(E)`.
    pub derivative: [DMatrix<f64>; 2],
}

/// Polynomial bases, quadratures and layouts of one element at degree `k`.
#[derive(Clone, Debug)]
pub struct Element<'a> {
    pub mesh: &'a Mesh,
    pub cell: usize,
    pub k: usize,
    pub devgrad: DofLayout,
    pub symcurl: DofLayout,
    pub divdiv: DofLayout,
    pub q: Quadrature,
    /// Hierarchical orthonormal basis of `P^{k+2}(T)`.
    pub scalar: PolyBasis,
    pub srtrim: PolyBasis,
    pub htrim: PolyBasis,
    pub choly: PolyBasis,
    pub faces: Vec<FaceData>,
    pub edges: Vec<EdgeData>,
    pub diameter: f64,
}

/// Operator quadrature exactness for degree `k`.
pub fn quadrature_degree(k: usize) -> usize {
    2 * k + 6
}

pub(crate) fn d2(l: i64) -> usize {
    monomial::dim(2, l)
}

pub(crate) fn d3(l: i64) -> usize {
    monomial::dim(3, l)
}

impl<'a> Element<'a> {
    pub fn new(mesh: &'a Mesh, cell: usize, k: usize) -> Result<Element<'a>> {
        let c = &mesh.cells[cell];
        let qd = quadrature_degree(k);
        let ki = k as i64;
        let ent = Entity::Cell(cell);
        let edge_pos = |e: usize| c.edges.iter().position(|&x| x == e).expect("edge of cell");
        let vertex_pos = |v: usize| c.vertices.iter().position(|&x| x == v).expect("vertex of cell");

        let faces = c
            .faces
            .iter()
            .zip(&c.face_orientations)
            .map(|(&f, &o)| {
                let face = &mesh.faces[f];
                let fe = Entity::Face(f);
                Ok(FaceData {
                    id: f,
                    orientation: o,
                    normal: face.normal,
                    tangents: face.tangents,
                    q: fe.quadrature(mesh, qd),
                    scalar: scalar_basis(mesh, fe, k + 1)?,
                    rt: decomposition_basis(mesh, SpaceKind::RT, fe, ki + 1)?,
                    cg: decomposition_basis(mesh, SpaceKind::CGTrim, fe, ki)?,
                    edges: face
                        .edges
                        .iter()
                        .enumerate()
                        .map(|(i, &e)| (edge_pos(e), face.edge_orientations[i], face.edge_normals[i]))
                        .collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let edges = c
            .edges
            .iter()
            .map(|&e| {
                let edge = &mesh.edges[e];
                Ok(EdgeData {
                    id: e,
                    tangent: edge.tangent,
                    normals: edge.normals,
                    q: Entity::Edge(e).quadrature(mesh, qd),
                    scalar: scalar_basis(mesh, Entity::Edge(e), k + 1)?,
                    vertices: [vertex_pos(edge.vertices[0]), vertex_pos(edge.vertices[1])],
                    derivative: [edge_derivative(mesh, e, k)?, edge_derivative(mesh, e, k + 1)?],
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Element {
            mesh,
            cell,
            k,
            devgrad: DofLayout::new(SpaceTag::DevGrad, mesh, cell, k),
            symcurl: DofLayout::new(SpaceTag::SymCurl, mesh, cell, k),
            divdiv: DofLayout::new(SpaceTag::DivDiv, mesh, cell, k),
            q: ent.quadrature(mesh, qd),
            scalar: scalar_basis(mesh, ent, k + 2)?,
            srtrim: decomposition_basis(mesh, SpaceKind::SRTrim, ent, ki)?,
            htrim: decomposition_basis(mesh, SpaceKind::HTrim, ent, ki)?,
            choly: decomposition_basis(mesh, SpaceKind::CHoly, ent, ki)?,
            faces,
            edges,
            diameter: c.diameter,
        })
    }

    pub fn layout(&self, tag: SpaceTag) -> &DofLayout {
        match tag {
            SpaceTag::DevGrad => &self.devgrad,
            SpaceTag::SymCurl => &self.symcurl,
            SpaceTag::DivDiv => &self.divdiv,
        }
    }

    pub fn vertex_point(&self, local: usize) -> Point {
        self.mesh.vertices[self.mesh.cells[self.cell].vertices[local]]
    }

    /// Cell basis of `P^l(T)` (prefix of the hierarchical basis).
    pub fn cell_poly(&self, l: i64) -> PolyBasis {
        self.scalar.columns(0, d3(l))
    }
}

impl FaceData {
    /// Face basis of `P^l(F)` (prefix of the hierarchical basis).
    pub fn poly(&self, l: i64) -> PolyBasis {
        self.scalar.columns(0, d2(l))
    }

    /// Unit vector of the tangent frame or the normal: index 0, 1 are
    /// tangents, 2 the normal.
    pub fn axis(&self, a: usize) -> Point {
        if a < 2 {
            self.tangents[a]
        } else {
            self.normal
        }
    }
}

impl EdgeData {
    /// Edge basis of `P^l(E)`; empty for `l < 0`.
    pub fn poly(&self, l: i64) -> PolyBasis {
        self.scalar.columns(0, monomial::dim(1, l))
    }
}

/// `sum_a vals[a] (frame[a] . u)` for vector values in a local frame.
pub fn frame_dot(vals: &[DMatrix<f64>], frame: &[Point], u: &Point) -> DMatrix<f64> {
    let mut acc = DMatrix::zeros(vals[0].nrows(), vals[0].ncols());
    for (v, f) in vals.iter().zip(frame) {
        let s = f.dot(u);
        if s != 0.0 {
            acc += v * s;
        }
    }
    acc
}

/// `sum_ab vals[a d + b] (frame[a] . u) (frame[b] . v)` for matrix values
/// in a local frame of size `d`.
pub fn frame_contract(vals: &[DMatrix<f64>], frame: &[Point], u: &Point, v: &Point) -> DMatrix<f64> {
    let d = frame.len();
    let mut acc = DMatrix::zeros(vals[0].nrows(), vals[0].ncols());
    for a in 0..d {
        for b in 0..d {
            let s = frame[a].dot(u) * frame[b].dot(v);
            if s.abs() > 0.0 {
                acc += &vals[a * d + b] * s;
            }
        }
    }
    acc
}

/// Scales rows by quadrature weights.
pub fn weighted(vals: &DMatrix<f64>, w: &[f64]) -> DMatrix<f64> {
    let mut out = vals.clone();
    for (p, &wp) in w.iter().enumerate() {
        out.row_mut(p).scale_mut(wp);
    }
    out
}

/// `int a^T b` for scalar values at quadrature points.
pub fn integrate(a: &DMatrix<f64>, b: &DMatrix<f64>, w: &[f64]) -> DMatrix<f64> {
    weighted(a, w).transpose() * b
}

/// Adds `value` into the `(r, c)` view of `m`.
pub fn add_block<R, C, S>(m: &mut DMatrix<f64>, r: usize, c: usize, value: &Matrix<f64, R, C, S>)
where
    R: Dim,
    C: Dim,
    S: RawStorage<f64, R, C>,
{
    if value.is_empty() {
        return;
    }
    let (nr, nc) = value.shape();
    for j in 0..nc {
        for i in 0..nr {
            m[(r + i, c + j)] += value[(i, j)];
        }
    }
}
