//! Shipped geometries, δ-sweeps, slope fits and the acceptance suite.

pub mod acceptance;
pub mod fit;
pub mod geometries;
pub mod report;
pub mod sweep;

pub use fit::{compare_report, fit_slope, predicted_exponents, Predicted, SlopeFit, Verdict};
pub use geometries::{build_geometry, make_space, Geometry, GeometryId};
pub use sweep::{run_case, run_sweep, write_csv, CaseResult, SweepResult, SweepRow, SweepSpec, CSV_HEADER};
