//! Arbitrary-order discrete de Rham (DDR) divdiv complex on polyhedral meshes.
//!
//! The crate is organised bottom-up:
//!
//! - [`mesh`]: polyhedral meshes with oriented incidence, frames and JSON I/O;
//! - [`poly`]: polynomial bases on mesh entities, quadrature, projections and
//!   the direct-decomposition / trimmed polynomial spaces;
//! - [`ddr`]: the local discrete spaces (devgrad, symcurl, divdiv), their
//!   interpolators, discrete operators, potential and L²-like products;
//! - [`verify`]: executable checks of the complex and exactness properties;
//! - [`biharmonic`]: the mixed scheme for the biharmonic problem and
//!   convergence studies.
//!
//! Per-element work is data parallel; with the `parallel` feature (default)
//! it runs on rayon, otherwise every [`Execution`] mode falls back to a
//! sequential loop.

pub mod biharmonic;
pub mod ddr;
mod error;
pub mod linalg;
pub mod mesh;
mod par;
pub mod poly;
pub mod verify;

pub use error::{Error, Result};
pub use par::{set_threads, Execution};
