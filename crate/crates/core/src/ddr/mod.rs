//! Discrete spaces and operators of the divdiv complex on one element.

mod devgrad;
mod divdiv;
pub mod element;
mod interp;
pub mod layout;
mod symcurl;

pub use divdiv::{sym2_contract, DivDivOperators, DD_FACE_SIGN, POTENTIAL_FACE_SIGN};
pub use element::{quadrature_degree, Element};
pub use layout::{closed_form_dimension, expected_dimension, Block, DofLayout, Location, SpaceTag};
pub use symcurl::c_tensor;

use nalgebra::DMatrix;

/// Coefficient vector of a discrete space on one element.
#[derive(Clone, Debug)]
pub struct DofVector {
    pub tag: SpaceTag,
    pub values: nalgebra::DVector<f64>,
}

/// Local operator between two discrete spaces.
#[derive(Clone, Debug)]
pub struct LocalOperator {
    pub source: SpaceTag,
    pub target: SpaceTag,
    pub matrix: DMatrix<f64>,
}

impl LocalOperator {
    pub fn apply(&self, x: &DofVector) -> crate::Result<DofVector> {
        if x.tag != self.source || x.values.len() != self.matrix.ncols() {
            return Err(crate::Error::InvalidArgument(format!(
                "operator from {} applied to a {} vector of length {}",
                self.source,
                x.tag,
                x.values.len()
            )));
        }
        Ok(DofVector {
            tag: self.target,
            values: &self.matrix * &x.values,
        })
    }
}

impl Element<'_> {
    /// `uDG` as a tagged operator.
    pub fn devgrad_operator(&self) -> crate::Result<LocalOperator> {
        Ok(LocalOperator {
            source: SpaceTag::DevGrad,
            target: SpaceTag::SymCurl,
            matrix: self.op_devgrad()?,
        })
    }

    /// `uSC` as a tagged operator.
    pub fn symcurl_operator(&self) -> crate::Result<LocalOperator> {
        Ok(LocalOperator {
            source: SpaceTag::SymCurl,
            target: SpaceTag::DivDiv,
            matrix: self.op_symcurl()?,
        })
    }
}
