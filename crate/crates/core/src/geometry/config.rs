//! Heuristic labelling of small basis functions by how the trim cuts their
//! support. Diagnostic only.

use super::mesh::{ActiveBasisSet, ActiveMesh};
use crate::error::{Error, Result};
use crate::tensor::TensorSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TrimConfig {
    /// One-dimensional trim (univariate spaces).
    OneD,
    /// Thin in one direction only.
    A,
    /// Thin in both directions, one factor does not vanish at the cut.
    B,
    /// Thin in both directions, both factors vanish at the cut.
    C,
    Other,
}

impl TrimConfig {
    pub fn label(&self) -> &'static str {
        match self {
            TrimConfig::OneD => "1D",
            TrimConfig::A => "A",
            TrimConfig::B => "B",
            TrimConfig::C => "C",
            TrimConfig::Other => "other",
        }
    }
}

impl std::fmt::Display for TrimConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrimConfigReport {
    pub index: usize,
    pub config: TrimConfig,
    /// Extent of the active support per direction.
    pub extent: [f64; 2],
    pub rho_min: f64,
    pub rho_max: f64,
}

/// Classifies the small function with global index `global`. `delta` is the
/// trimming parameter used for the "thin" threshold `5 delta + 1e-12`.
pub fn classify_trim_configuration(
    global: usize,
    space: &TensorSpace,
    mesh: &ActiveMesh,
    basis: &ActiveBasisSet,
    delta: f64,
) -> Result<TrimConfigReport> {
    let pos = basis.position(global).ok_or(Error::IndexOutOfRange {
        index: global,
        size: space.dim(),
    })?;
    if !basis.small[pos] {
        return Err(Error::param("index", format!("function {global} is not small")));
    }
    let d = space.dimension();
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for e in space.support_elements(global) {
        for c in &mesh.elements[e].cells {
            for v in c.vertices() {
                for l in 0..d {
                    lo[l] = lo[l].min(v[l]);
                    hi[l] = hi[l].max(v[l]);
                }
            }
        }
    }
    let thin = 5.0 * delta + 1e-12;
    let (slo, shi) = space.support_box(global);
    let multi = space.fn_multi(global);
    let mut extent = [0.0; 2];
    let mut small = [false; 2];
    let mut vanishes = [false; 2];
    for l in 0..d {
        extent[l] = hi[l] - lo[l];
        small[l] = extent[l] <= thin;
        let f = space.factor(l);
        let p = f.degree();
        let at_start = hi[l] - slo[l] <= thin;
        let at_end = shi[l] - lo[l] <= thin;
        vanishes[l] = (at_start && f.local_knot_count(multi[l], slo[l]) <= p)
            || (at_end && f.local_knot_count(multi[l], shi[l]) <= p);
    }
    let config = if d == 1 {
        TrimConfig::OneD
    } else {
        match (small[0], small[1]) {
            (true, true) if vanishes[0] && vanishes[1] => TrimConfig::C,
            (true, true) => TrimConfig::B,
            (true, false) | (false, true) => TrimConfig::A,
            (false, false) => TrimConfig::Other,
        }
    };
    let (rho_min, rho_max) = if d == 1 {
        (extent[0] / 2.0, extent[0] / 2.0)
    } else {
        (extent[0].min(extent[1]) / 2.0, 0.5 * extent[0].hypot(extent[1]))
    };
    Ok(TrimConfigReport {
        index: global,
        config,
        extent,
        rho_min,
        rho_max,
    })
}
