//! Generalized Jackson kernels, translation-operator smoothing and
//! approximation numbers of zonal integral operators on compact two-point
//! homogeneous spaces.
//!
//! The spectral path diagonalizes every zonal operator in the harmonic basis;
//! [`oracle`] is an independent dense-matrix path on the 2-sphere used to
//! validate it.

// `!(x > 0.0)` is used on purpose: it rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod fit;
pub mod jackson;
pub mod kernels;
pub mod operators;
pub mod oracle;
pub mod quadrature;
pub mod spaces;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use jackson::{JacksonParams, MultiplierSequence};
pub use kernels::{HoelderEstimate, ZonalKernelSpec};
pub use operators::{DecayFit, DiagonalOperator, SpectralEntry};
pub use quadrature::QuadratureRule;
pub use spaces::{Family, SpaceParams};
