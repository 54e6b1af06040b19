//! Computable asymptotic Hodge theory at desk scale.
//!
//! The crate combines an exact linear-algebra core over the Gaussian
//! rationals (subspaces, filtrations, Deligne bigradings, splitting
//! operators, weight filtrations of nilpotent operators) with a thin
//! floating-point boundary (Hodge metrics and norms, the twisted metric,
//! distance surrogates, grid scans and regression fits). Everything a
//! theorem states as an identity is asserted exactly; everything stated
//! asymptotically is measured on grids and fitted.
//!
//! See the `book/` directory for a guided tour, or start with
//! [`mhs::GradedPolarizedMhs`] and [`mhs::Bigrading`].

pub mod error;
pub mod scalar;
pub mod matrix;
pub mod subspace;
pub mod filtration;
pub mod numeric;
pub mod mhs;
pub mod weightfilt;
pub mod semisimple;
pub mod metrics;
pub mod orbits;
pub mod gallery;
pub mod scans;
pub mod biext;
pub mod limits;
pub mod io;
pub mod report;
pub mod cli;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::{GaussianRational, Rat};
pub use subspace::Subspace;
pub use filtration::{DecFiltration, GradedPiece, IncFiltration};
