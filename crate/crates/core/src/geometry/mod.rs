//! Trimmed domains: regions, active mesh and basis, integration cells.

pub mod config;
pub mod mesh;
pub mod region;

pub use config::{classify_trim_configuration, TrimConfig, TrimConfigReport};
pub use mesh::{
    active_basis, classify_elements, partition_good_bad, trim_cells, ActiveBasisSet, ActiveMesh, Domain,
    ElementInfo, ElementStatus, QuadCell, DROP_TOL,
};
pub use region::{Point, Polygon, Region};
