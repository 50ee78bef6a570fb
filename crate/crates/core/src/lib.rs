//! Wavelet approximation with hybrid regularity on the unit cube.

pub mod band;
pub mod cli;
pub mod basis1d;
pub mod error;
pub mod nterm;
pub mod seqnorms;
pub mod tensorbasis;
pub mod testfunctions;
pub mod transform1d;
pub mod verify;

pub use band::BandMatrix;
pub use basis1d::{make_dku13_basis, make_haar_basis, make_mask_basis, BasisParams, BasisSpec, IndexKind, LevelIndex, MaskSet};
pub use error::{Error, Result};
pub use transform1d::{build_transform, Cascade, MultiscaleVector};
