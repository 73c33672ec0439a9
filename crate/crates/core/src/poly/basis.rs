use super::monomial;
use crate::mesh::{Mesh, Point};
use nalgebra::{DMatrix, DMatrixView};

/// Local affine coordinates `xi_a = axes[a] . (x - origin) / scale`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub origin: Point,
    pub axes: [Point; 3],
    pub dim: usize,
    pub scale: f64,
}

impl Frame {
    pub fn global() -> Frame {
        Frame {
            origin: Point::zeros(),
            axes: [Point::x(), Point::y(), Point::z()],
            dim: 3,
            scale: 1.0,
        }
    }

    pub fn cell(m: &Mesh, c: usize) -> Frame {
        Frame {
            origin: m.cells[c].center,
            scale: m.cells[c].diameter,
            ..Frame::global()
        }
    }

    pub fn face(m: &Mesh, f: usize) -> Frame {
        let face = &m.faces[f];
        Frame {
            origin: face.center,
            axes: [face.tangents[0], face.tangents[1], Point::zeros()],
            dim: 2,
            scale: face.diameter,
        }
    }

    pub fn edge(m: &Mesh, e: usize) -> Frame {
        let edge = &m.edges[e];
        Frame {
            origin: edge.midpoint,
            axes: [edge.tangent, Point::zeros(), Point::zeros()],
            dim: 1,
            scale: 0.5 * edge.length,
        }
    }

    pub fn local(&self, x: &Point) -> [f64; 3] {
        let d = (x - self.origin) / self.scale;
        let mut xi = [0.0; 3];
        for a in 0..self.dim {
            xi[a] = self.axes[a].dot(&d);
        }
        xi
    }

    /// Monomial values at physical points (one row per point).
    pub fn monomials(&self, degree: usize, pts: &[Point]) -> DMatrix<f64> {
        let xi: Vec<[f64; 3]> = pts.iter().map(|x| self.local(x)).collect();
        monomial::values(self.dim, degree, &xi)
    }
}

/// A finite family of polynomial fields on one entity, stored as
/// coefficients over the scaled monomials of its frame.
///
/// Values have shape `rows x cols`, flattened row-major into `ncomp`
/// components. Coefficient rows are component-major: row `c * nmono + m`
/// holds monomial `m` of component `c`; columns are the basis functions.
#[derive(Clone, Debug)]
pub struct PolyBasis {
    pub frame: Frame,
    pub shape: (usize, usize),
    pub degree: usize,
    pub coef: DMatrix<f64>,
}

impl PolyBasis {
    pub fn new(frame: Frame, shape: (usize, usize), degree: usize, coef: DMatrix<f64>) -> Self {
        let b = PolyBasis {
            frame,
            shape,
            degree,
            coef,
        };
        assert_eq!(b.coef.nrows(), b.ncomp() * b.nmono(), "coefficient rows");
        b
    }

    pub fn empty(frame: Frame, shape: (usize, usize), degree: usize) -> Self {
        let rows = shape.0 * shape.1 * monomial::dim(frame.dim, degree as i64);
        PolyBasis::new(frame, shape, degree, DMatrix::zeros(rows, 0))
    }

    /// All scalar monomials of degree `<= degree`.
    pub fn monomials(frame: Frame, degree: usize) -> Self {
        let n = monomial::dim(frame.dim, degree as i64);
        PolyBasis::new(frame, (1, 1), degree, DMatrix::identity(n, n))
    }

    pub fn ncomp(&self) -> usize {
        self.shape.0 * self.shape.1
    }

    pub fn nmono(&self) -> usize {
        monomial::dim(self.frame.dim, self.degree as i64)
    }

    pub fn len(&self) -> usize {
        self.coef.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.coef.ncols() == 0
    }

    pub fn block(&self, c: usize) -> DMatrixView<'_, f64> {
        let n = self.nmono();
        self.coef.rows(c * n, n)
    }

    /// Values of every component at the points: `out[c]` is `npts x len`.
    pub fn eval(&self, pts: &[Point]) -> Vec<DMatrix<f64>> {
        self.eval_table(&self.frame.monomials(self.degree, pts))
    }

    /// Same as [`eval`](Self::eval) with a precomputed monomial table of at
    /// least this basis' degree.
    pub fn eval_table(&self, table: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
        let n = self.nmono();
        let t = table.columns(0, n);
        (0..self.ncomp()).map(|c| &t * self.block(c)).collect()
    }

    /// Same family expressed over a larger monomial table.
    pub fn with_degree(&self, degree: usize) -> Self {
        if degree == self.degree {
            return self.clone();
        }
        assert!(degree > self.degree, "cannot truncate a basis");
        let (n0, n1) = (self.nmono(), monomial::dim(self.frame.dim, degree as i64));
        let mut coef = DMatrix::zeros(self.ncomp() * n1, self.len());
        for c in 0..self.ncomp() {
            coef.rows_mut(c * n1, n0).copy_from(&self.block(c));
        }
        PolyBasis::new(self.frame, self.shape, degree, coef)
    }

    fn from_blocks(&self, shape: (usize, usize), degree: usize, blocks: Vec<DMatrix<f64>>) -> Self {
        let n = monomial::dim(self.frame.dim, degree as i64);
        let mut coef = DMatrix::zeros(blocks.len() * n, self.len());
        for (c, b) in blocks.iter().enumerate() {
            coef.rows_mut(c * n, n).copy_from(&b.rows(0, n));
        }
        PolyBasis::new(self.frame, shape, degree, coef)
    }

    /// Physical derivative along frame axis `a`, component-wise.
    pub fn derivative(&self, a: usize) -> Self {
        let d = monomial::derivative_matrix(self.frame.dim, self.degree, a) / self.frame.scale;
        let blocks = (0..self.ncomp()).map(|c| &d * self.block(c)).collect();
        self.from_blocks(self.shape, self.degree.saturating_sub(1), blocks)
    }

    /// Multiplication by the scaled local coordinate `xi_a`.
    pub fn times_coordinate(&self, a: usize) -> Self {
        let s = monomial::shift_matrix(self.frame.dim, self.degree, a);
        let blocks = (0..self.ncomp()).map(|c| &s * self.block(c)).collect();
        self.from_blocks(self.shape, self.degree + 1, blocks)
    }

    /// Pointwise linear map of the values: component `i` of the result is
    /// `sum_j m[(i, j)] * component j`.
    pub fn map_components(&self, shape: (usize, usize), m: &DMatrix<f64>) -> Self {
        assert_eq!(m.ncols(), self.ncomp());
        assert_eq!(m.nrows(), shape.0 * shape.1);
        let blocks = (0..m.nrows())
            .map(|i| {
                let mut b = DMatrix::zeros(self.nmono(), self.len());
                for j in 0..m.ncols() {
                    if m[(i, j)] != 0.0 {
                        b += self.block(j) * m[(i, j)];
                    }
                }
                b
            })
            .collect();
        self.from_blocks(shape, self.degree, blocks)
    }

    /// Basis whose columns are `self * m`.
    pub fn combine(&self, m: &DMatrix<f64>) -> Self {
        PolyBasis::new(self.frame, self.shape, self.degree, &self.coef * m)
    }

    pub fn columns(&self, start: usize, n: usize) -> Self {
        PolyBasis::new(
            self.frame,
            self.shape,
            self.degree,
            self.coef.columns(start, n).into_owned(),
        )
    }

    /// Side-by-side concatenation of families sharing frame and shape.
    pub fn hstack(parts: &[&PolyBasis]) -> Self {
        let first = parts[0];
        let degree = parts.iter().map(|p| p.degree).max().unwrap();
        let lifted: Vec<PolyBasis> = parts.iter().map(|p| p.with_degree(degree)).collect();
        let total = lifted.iter().map(|p| p.len()).sum();
        let mut coef = DMatrix::zeros(lifted[0].coef.nrows(), total);
        let mut off = 0;
        for p in &lifted {
            assert_eq!(p.shape, first.shape);
            assert_eq!(p.frame, first.frame);
            coef.columns_mut(off, p.len()).copy_from(&p.coef);
            off += p.len();
        }
        PolyBasis::new(first.frame, first.shape, degree, coef)
    }

    /// Tensor family `{ scalar_j * e_c }`, column `c * len(scalar) + j`,
    /// where `e_c` is column `c` of `codomain` (flattened values of `shape`).
    pub fn tensor(scalar: &PolyBasis, shape: (usize, usize), codomain: &DMatrix<f64>) -> Self {
        assert_eq!(scalar.ncomp(), 1);
        assert_eq!(codomain.nrows(), shape.0 * shape.1);
        let (n, nm) = (scalar.len(), scalar.nmono());
        let mut coef = DMatrix::zeros(codomain.nrows() * nm, codomain.ncols() * n);
        for c in 0..codomain.ncols() {
            for i in 0..codomain.nrows() {
                let v = codomain[(i, c)];
                if v != 0.0 {
                    coef.view_mut((i * nm, c * n), (nm, n))
                        .copy_from(&(&scalar.coef * v));
                }
            }
        }
        PolyBasis::new(scalar.frame, shape, scalar.degree, coef)
    }

    /// Component `c` as a scalar family.
    pub fn component(&self, c: usize) -> Self {
        PolyBasis::new(self.frame, (1, 1), self.degree, self.block(c).into_owned())
    }

    /// Stacks scalar families with the same columns into one family of
    /// the given shape.
    pub fn from_components(shape: (usize, usize), comps: &[PolyBasis]) -> Self {
        let degree = comps.iter().map(|p| p.degree).max().unwrap();
        let lifted: Vec<DMatrix<f64>> =
            comps.iter().map(|p| p.with_degree(degree).coef).collect();
        let n = monomial::dim(comps[0].frame.dim, degree as i64);
        let mut coef = DMatrix::zeros(comps.len() * n, comps[0].len());
        for (c, b) in lifted.iter().enumerate() {
            coef.rows_mut(c * n, n).copy_from(b);
        }
        PolyBasis::new(comps[0].frame, shape, degree, coef)
    }
}
