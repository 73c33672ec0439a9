use super::{inner, monomial, ops, quadrature, Frame, PolyBasis, Quadrature};
use crate::linalg::RANK_TOL;
use crate::mesh::Mesh;
use crate::{Error, Result};
use nalgebra::DMatrix;
use std::f64::consts::SQRT_2;

/// A mesh entity carrying polynomial spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Entity {
    Cell(usize),
    Face(usize),
    Edge(usize),
}

impl Entity {
    pub fn frame(self, m: &Mesh) -> Frame {
        match self {
            Entity::Cell(c) => Frame::cell(m, c),
            Entity::Face(f) => Frame::face(m, f),
            Entity::Edge(e) => Frame::edge(m, e),
        }
    }

    pub fn quadrature(self, m: &Mesh, degree: usize) -> Quadrature {
        match self {
            Entity::Cell(c) => quadrature::cell_rule(m, c, degree),
            Entity::Face(f) => quadrature::face_rule(m, f, degree),
            Entity::Edge(e) => quadrature::edge_rule(m, e, degree),
        }
    }
}

/// Polynomial spaces obtained from the direct decompositions and their
/// trimmed combinations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// Scalar `P^l` on any entity.
    Full,
    /// `CURL_F P^{l+1}(F)`.
    Roly,
    /// `(x - x_F) P^{l-1}(F)`.
    CRoly,
    /// Row-wise `CURL_F P^{l+1}(F; R^2)`.
    CGoly,
    /// `(Id - adj)[P^{l-1}(F; R^2) (x - x_F)^T]`.
    CCGoly,
    /// Row-wise `CURL P^{l+1}(T; S)`.
    SRoly,
    /// `DEV[P^{l-1}(T; R^3) (x - x_T)^T]`.
    CSRoly,
    /// `HESS P^{l+2}(T)`.
    Holy,
    /// `SYM[P^{l-1}(T; T) x (x - x_T)]`, cross product row-wise.
    CHoly,
    /// `Roly^{l-1} + cRoly^l`.
    RT,
    /// `CGoly^{l-1} + cCGoly^l`.
    CGTrim,
    /// `SRoly^{l-1} + cSRoly^l`.
    SRTrim,
    /// `Holy^{l-2} + cHoly^l`.
    HTrim,
}

impl SpaceKind {
    /// Known dimension; zero whenever a negative index makes the space trivial.
    pub fn dimension(self, l: i64) -> usize {
        let d2 = |l: i64| monomial::dim(2, l) as i64;
        let d3 = |l: i64| monomial::dim(3, l) as i64;
        let v = match self {
            SpaceKind::Full => return usize::MAX,
            SpaceKind::Roly => d2(l + 1) - 1,
            SpaceKind::CRoly => d2(l - 1),
            SpaceKind::CGoly => 2 * (d2(l + 1) - 1),
            SpaceKind::CCGoly => 2 * d2(l - 1),
            SpaceKind::SRoly => {
                if l < 0 {
                    0
                } else {
                    8 * d3(l) - 3 * d3(l - 1)
                }
            }
            SpaceKind::CSRoly => 3 * d3(l - 1),
            SpaceKind::Holy => {
                if l < 0 {
                    0
                } else {
                    d3(l + 2) - 4
                }
            }
            SpaceKind::CHoly => {
                if l < 0 {
                    0
                } else {
                    6 * d3(l) - (d3(l + 2) - 4)
                }
            }
            SpaceKind::RT => return SpaceKind::Roly.dimension(l - 1) + SpaceKind::CRoly.dimension(l),
            SpaceKind::CGTrim => {
                return SpaceKind::CGoly.dimension(l - 1) + SpaceKind::CCGoly.dimension(l)
            }
            SpaceKind::SRTrim => {
                return SpaceKind::SRoly.dimension(l - 1) + SpaceKind::CSRoly.dimension(l)
            }
            SpaceKind::HTrim => {
                return SpaceKind::Holy.dimension(l - 2) + SpaceKind::CHoly.dimension(l)
            }
        };
        v.max(0) as usize
    }

    fn entity_dim(self) -> Option<usize> {
        match self {
            SpaceKind::Full => None,
            SpaceKind::Roly
            | SpaceKind::CRoly
            | SpaceKind::CGoly
            | SpaceKind::CCGoly
            | SpaceKind::RT
            | SpaceKind::CGTrim => Some(2),
            _ => Some(3),
        }
    }

    fn shape(self) -> (usize, usize) {
        match self {
            SpaceKind::Full => (1, 1),
            SpaceKind::Roly | SpaceKind::CRoly | SpaceKind::RT => (2, 1),
            SpaceKind::CGoly | SpaceKind::CCGoly | SpaceKind::CGTrim => (2, 2),
            _ => (3, 3),
        }
    }
}

/// Orthonormal basis of the symmetric 3x3 matrices.
pub fn sym_basis() -> DMatrix<f64> {
    let mut m = DMatrix::zeros(9, 6);
    for i in 0..3 {
        m[(4 * i, i)] = 1.0;
    }
    for (c, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        m[(3 * i + j, 3 + c)] = 1.0 / SQRT_2;
        m[(3 * j + i, 3 + c)] = 1.0 / SQRT_2;
    }
    m
}

/// Orthonormal basis of the traceless 3x3 matrices.
pub fn traceless_basis() -> DMatrix<f64> {
    let mut m = DMatrix::zeros(9, 8);
    for (c, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        m[(3 * i + j, c)] = 1.0 / SQRT_2;
        m[(3 * j + i, c)] = 1.0 / SQRT_2;
        m[(3 * i + j, 3 + c)] = 1.0 / SQRT_2;
        m[(3 * j + i, 3 + c)] = -1.0 / SQRT_2;
    }
    m[(0, 6)] = 1.0 / SQRT_2;
    m[(4, 6)] = -1.0 / SQRT_2;
    let s6 = 6f64.sqrt();
    m[(0, 7)] = 1.0 / s6;
    m[(4, 7)] = 1.0 / s6;
    m[(8, 7)] = -2.0 / s6;
    m
}

/// Orthonormal basis of the symmetric 2x2 matrices.
pub fn sym2_basis() -> DMatrix<f64> {
    DMatrix::from_column_slice(
        4,
        3,
        &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0 / SQRT_2, 1.0 / SQRT_2, 0.0],
    )
}

/// Rank-revealing reduction of a spanning family to an (algebraically)
/// orthonormal set of coefficient vectors; fails unless the rank matches.
pub fn reduce_rank(b: &PolyBasis, expected: usize, name: &str) -> Result<PolyBasis> {
    if b.is_empty() || expected == 0 {
        let found = if b.is_empty() { 0 } else { crate::linalg::rank(&b.coef) };
        if found != expected {
            return Err(Error::DimensionMismatch {
                space: name.into(),
                expected,
                found,
            });
        }
        return Ok(PolyBasis::empty(b.frame, b.shape, b.degree));
    }
    let svd = b.coef.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors");
    let smax = svd.singular_values.max();
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let keep: Vec<usize> = idx
        .into_iter()
        .filter(|&i| svd.singular_values[i] > RANK_TOL * smax)
        .collect();
    if keep.len() != expected {
        return Err(Error::DimensionMismatch {
            space: name.into(),
            expected,
            found: keep.len(),
        });
    }
    let coef = u.select_columns(keep.iter());
    Ok(PolyBasis::new(b.frame, b.shape, b.degree, coef))
}

/// L2-orthonormalizes a linearly independent family on the quadrature
/// (Gram-Cholesky, applied twice). Column order is preserved, so
/// prefix-nested families stay nested.
pub fn orthonormalize(b: &PolyBasis, q: &Quadrature) -> Result<PolyBasis> {
    if b.is_empty() {
        return Ok(b.clone());
    }
    let mut cur = b.clone();
    let table = b.frame.monomials(b.degree, &q.points);
    for _ in 0..2 {
        let vals = cur.eval_table(&table);
        let g = inner(&vals, &vals, &q.weights);
        let chol = g
            .cholesky()
            .ok_or_else(|| Error::Singular("Gram matrix of a polynomial family".into()))?;
        let linv = chol
            .l()
            .solve_lower_triangular(&DMatrix::identity(cur.len(), cur.len()))
            .ok_or_else(|| Error::Singular("Cholesky factor".into()))?;
        cur = cur.combine(&linv.transpose());
    }
    Ok(cur)
}

/// Hierarchical orthonormal basis of scalar `P^degree` on the entity: its
/// first `dim P^l` columns span `P^l`.
pub fn scalar_basis(m: &Mesh, entity: Entity, degree: usize) -> Result<PolyBasis> {
    let frame = entity.frame(m);
    let q = entity.quadrature(m, 2 * degree);
    orthonormalize(&PolyBasis::monomials(frame, degree), &q)
}

fn generators(kind: SpaceKind, frame: Frame, l: i64) -> Result<PolyBasis> {
    let mono = |deg: i64| -> Option<PolyBasis> {
        (deg >= 0).then(|| PolyBasis::monomials(frame, deg as usize))
    };
    let shape = kind.shape();
    let empty = || PolyBasis::empty(frame, shape, l.max(0) as usize);
    let id = |d: usize| DMatrix::<f64>::identity(d, d);
    Ok(match kind {
        SpaceKind::Full => mono(l).unwrap_or_else(empty),
        SpaceKind::Roly => match mono(l + 1) {
            Some(p) => ops::curl_f(&p)?,
            None => empty(),
        },
        SpaceKind::CRoly => match mono(l - 1) {
            Some(p) => PolyBasis::from_components(
                (2, 1),
                &[p.times_coordinate(0), p.times_coordinate(1)],
            ),
            None => empty(),
        },
        SpaceKind::CGoly => match mono(l + 1) {
            Some(p) => ops::curl_f(&PolyBasis::tensor(&p, (2, 1), &id(2)))?,
            None => empty(),
        },
        SpaceKind::CCGoly => match mono(l - 1) {
            Some(p) => {
                let outer = ops::outer_coordinates(&PolyBasis::tensor(&p, (2, 1), &id(2)))?;
                outer.map_components((2, 2), &(id(4) - ops::adj_matrix()))
            }
            None => empty(),
        },
        SpaceKind::SRoly => match mono(l + 1) {
            Some(p) => ops::curl(&PolyBasis::tensor(&p, (3, 3), &sym_basis()))?,
            None => empty(),
        },
        SpaceKind::CSRoly => match mono(l - 1) {
            Some(p) => ops::dev(&ops::outer_coordinates(&PolyBasis::tensor(&p, (3, 1), &id(3)))?)?,
            None => empty(),
        },
        SpaceKind::Holy => match mono(l + 2) {
            Some(p) if l >= 0 => ops::hess(&p)?,
            _ => empty(),
        },
        SpaceKind::CHoly => match mono(l - 1) {
            Some(p) => ops::sym(&ops::cross_coordinates(&PolyBasis::tensor(
                &p,
                (3, 3),
                &traceless_basis(),
            ))?)?,
            None => empty(),
        },
        SpaceKind::RT | SpaceKind::CGTrim | SpaceKind::SRTrim | SpaceKind::HTrim => {
            let (a, ca, shift) = match kind {
                SpaceKind::RT => (SpaceKind::Roly, SpaceKind::CRoly, 1),
                SpaceKind::CGTrim => (SpaceKind::CGoly, SpaceKind::CCGoly, 1),
                SpaceKind::SRTrim => (SpaceKind::SRoly, SpaceKind::CSRoly, 1),
                _ => (SpaceKind::Holy, SpaceKind::CHoly, 2),
            };
            let first = reduce_rank(&generators(a, frame, l - shift)?, a.dimension(l - shift), &format!("{a:?}"))?;
            let second = reduce_rank(&generators(ca, frame, l)?, ca.dimension(l), &format!("{ca:?}"))?;
            PolyBasis::hstack(&[&first, &second])
        }
    })
}

/// Orthonormal basis of the space `kind` of degree `l` on `entity`.
pub fn decomposition_basis(m: &Mesh, kind: SpaceKind, entity: Entity, l: i64) -> Result<PolyBasis> {
    let frame = entity.frame(m);
    if let Some(d) = kind.entity_dim() {
        if d != frame.dim {
            return Err(Error::InvalidArgument(format!(
                "{kind:?} lives on {d}-dimensional entities, got {entity:?}"
            )));
        }
    }
    let expected = if kind == SpaceKind::Full {
        monomial::dim(frame.dim, l)
    } else {
        kind.dimension(l)
    };
    let gens = generators(kind, frame, l)?;
    let reduced = reduce_rank(&gens, expected, &format!("{kind:?}^{l}"))?;
    if reduced.is_empty() {
        return Ok(reduced);
    }
    let q = entity.quadrature(m, 2 * reduced.degree);
    orthonormalize(&reduced, &q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::perturbed_hexahedron;

    const FACE_KINDS: [SpaceKind; 6] = [
        SpaceKind::Roly,
        SpaceKind::CRoly,
        SpaceKind::CGoly,
        SpaceKind::CCGoly,
        SpaceKind::RT,
        SpaceKind::CGTrim,
    ];
    const CELL_KINDS: [SpaceKind; 6] = [
        SpaceKind::SRoly,
        SpaceKind::CSRoly,
        SpaceKind::Holy,
        SpaceKind::CHoly,
        SpaceKind::SRTrim,
        SpaceKind::HTrim,
    ];

    #[test]
    fn frozen_dimensions() {
        assert_eq!(SpaceKind::CGoly.dimension(1), 10);
        assert_eq!(SpaceKind::CCGoly.dimension(1), 2);
        assert_eq!(SpaceKind::RT.dimension(1), 3);
        assert_eq!(SpaceKind::HTrim.dimension(0), 0);
        assert_eq!(SpaceKind::HTrim.dimension(1), 8);
        assert_eq!(SpaceKind::SRTrim.dimension(0), 0);
        assert_eq!(SpaceKind::SRTrim.dimension(1), 11);
        assert_eq!(SpaceKind::Holy.dimension(0), 6);
        assert_eq!(SpaceKind::CHoly.dimension(1), 8);
    }

    #[test]
    fn decompositions_are_direct_with_known_dimensions() {
        let m = perturbed_hexahedron(3);
        for l in 0..=3 {
            for kind in FACE_KINDS {
                let b = decomposition_basis(&m, kind, Entity::Face(1), l).unwrap();
                assert_eq!(b.len(), kind.dimension(l), "{kind:?}^{l}");
            }
            for kind in CELL_KINDS {
                let b = decomposition_basis(&m, kind, Entity::Cell(0), l).unwrap();
                assert_eq!(b.len(), kind.dimension(l), "{kind:?}^{l}");
            }
        }
    }

    #[test]
    fn full_spaces_split_into_pairs() {
        // P^l = Roly^l + cRoly^l on faces, and analogously for the other pairs
        let d2 = |l: i64| monomial::dim(2, l);
        let d3 = |l: i64| monomial::dim(3, l);
        for l in 0..5 {
            assert_eq!(SpaceKind::Roly.dimension(l) + SpaceKind::CRoly.dimension(l), 2 * d2(l));
            assert_eq!(SpaceKind::CGoly.dimension(l) + SpaceKind::CCGoly.dimension(l), 4 * d2(l));
            assert_eq!(SpaceKind::SRoly.dimension(l) + SpaceKind::CSRoly.dimension(l), 8 * d3(l));
            assert_eq!(SpaceKind::Holy.dimension(l) + SpaceKind::CHoly.dimension(l), 6 * d3(l));
        }
    }

    #[test]
    fn trimmed_spaces_are_orthonormal() {
        let m = perturbed_hexahedron(5);
        let q = Entity::Cell(0).quadrature(&m, 8);
        let b = decomposition_basis(&m, SpaceKind::HTrim, Entity::Cell(0), 2).unwrap();
        let v = b.eval(&q.points);
        let g = inner(&v, &v, &q.weights);
        assert!((g - DMatrix::identity(b.len(), b.len())).norm() < 1e-11);
    }

    #[test]
    fn wrong_entity_is_rejected() {
        let m = perturbed_hexahedron(1);
        assert!(decomposition_basis(&m, SpaceKind::RT, Entity::Cell(0), 1).is_err());
        assert!(decomposition_basis(&m, SpaceKind::HTrim, Entity::Face(0), 1).is_err());
    }
}
