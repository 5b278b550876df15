//! B-spline discretizations of the Laplacian on trimmed fictitious domains,
//! with mass lumping diagnostics: algebraic eigenvalue bounds, extreme
//! generalized eigenvalues and their scaling with the trimming parameter.

pub mod assembly;
pub mod bspline;
pub mod dense;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod quadrature;
pub mod sparse;
pub mod spectra;
pub mod tensor;

pub use error::{Error, Result};
