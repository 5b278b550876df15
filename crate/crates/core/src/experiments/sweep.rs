//! Full pipeline for one trimming parameter and sweeps over a δ list.

use super::geometries::{build_geometry, make_space, Geometry, GeometryId};
use crate::assembly::{
    apply_dirichlet_strong, assemble, kernel_residual, lump_rowsum, lumping_defect, QuadOrders, ReducedSystem,
};
use crate::error::{Error, Result};
use crate::geometry::{
    active_basis, classify_elements, classify_trim_configuration, partition_good_bad, TrimConfigReport, DROP_TOL,
};
use crate::spectra::{bound_report, spectral_report, BoundReport, SpectralReport};
use crate::tensor::TensorSpace;

/// Basis functions with active support below this fraction of `h^d` are pruned.
pub const PRUNE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub geometry: GeometryId,
    pub n: usize,
    pub p: usize,
    pub k: i64,
    /// Descending.
    pub deltas: Vec<f64>,
    pub gamma: f64,
    /// Overrides the default orders derived from `p`.
    pub orders: Option<QuadOrders>,
}

impl SweepSpec {
    /// Defaults of the geometry: its `N` and δ list, γ = 1/2.
    pub fn new(geometry: GeometryId, p: usize, k: i64) -> Self {
        SweepSpec {
            geometry,
            n: geometry.default_n(),
            p,
            k,
            deltas: geometry.default_deltas(),
            gamma: 0.5,
            orders: None,
        }
    }

    pub fn orders(&self) -> QuadOrders {
        self.orders.unwrap_or_else(|| QuadOrders::for_degree(self.p))
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::param("p", "degree must be at least 1"));
        }
        if self.k < 0 || self.k >= self.p as i64 {
            return Err(Error::param("k", format!("{} is outside [0, p-1] for p = {}", self.k, self.p)));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::param("gamma", format!("{} is outside [0, 1]", self.gamma)));
        }
        if self.deltas.is_empty() {
            return Err(Error::param("deltas", "empty list"));
        }
        if self.deltas.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::param("deltas", "must be strictly decreasing"));
        }
        if self.geometry.n_is_fixed() && self.n != self.geometry.default_n() {
            return Err(Error::param(
                "N",
                format!("{} uses N = {}", self.geometry, self.geometry.default_n()),
            ));
        }
        for &d in &self.deltas {
            build_geometry(self.geometry, self.n, d)?;
        }
        let o = self.orders();
        for (name, q) in [("q", o.rect), ("q_tri", o.tri)] {
            if !(1..=32).contains(&q) {
                return Err(Error::param(name, format!("{q} is outside [1, 32]")));
            }
        }
        Ok(())
    }
}

/// One row of a sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub delta: f64,
    pub lambda1_lumped: f64,
    pub lambdan_lumped: f64,
    pub lambdan_consistent: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub infnorm_bound: f64,
    pub improved_bound: f64,
    pub lambda1_below_floor: bool,
}

/// Everything computed for one δ.
#[derive(Debug, Clone)]
pub struct CaseResult {
    pub geometry: Geometry,
    pub space: TensorSpace,
    pub system: ReducedSystem,
    pub bounds: BoundReport,
    pub spectrum: SpectralReport,
    pub row: SweepRow,
    /// Configuration of every small function that survived the reduction.
    pub configs: Vec<TrimConfigReport>,
    /// `Σ_T |T ∩ Ω|`.
    pub measure: f64,
    /// `Σ_i M̂_ii` before the Dirichlet reduction.
    pub lumped_total: f64,
    pub lumping_defect: f64,
    /// `‖K 1‖ / ‖K‖` of the reduced stiffness.
    pub kernel_residual: f64,
    pub n_active: usize,
    pub max_entry_defect: f64,
}

impl CaseResult {
    /// Configuration label of the reduced row `i`, if it is a small function.
    pub fn config_of(&self, i: usize) -> Option<&TrimConfigReport> {
        let g = self.system.globals[i];
        self.configs.iter().find(|c| c.index == g)
    }
}

/// Runs the whole pipeline at one δ.
pub fn run_case(spec: &SweepSpec, delta: f64, want_vectors: bool) -> Result<CaseResult> {
    let at = |e: Error| Error::AtDelta {
        delta,
        source: Box::new(e),
    };
    let geometry = build_geometry(spec.geometry, spec.n, delta).map_err(at)?;
    let space = make_space(spec.geometry.dimension(), spec.n, spec.p, spec.k).map_err(at)?;
    run_on(spec, geometry, space, want_vectors).map_err(at)
}

fn run_on(spec: &SweepSpec, geometry: Geometry, space: TensorSpace, want_vectors: bool) -> Result<CaseResult> {
    let mut mesh = classify_elements(&space, &geometry.domain, DROP_TOL)?;
    partition_good_bad(&space, &mut mesh, spec.gamma)?;
    let basis = active_basis(&space, &mesh, PRUNE_TOL);
    let sys = assemble(&space, &basis, &mesh, spec.orders())?;
    let lumped = lump_rowsum(&sys.m)?;
    let defect = lumping_defect(&lumped, &sys.l1);
    let red = apply_dirichlet_strong(&sys, &lumped, &geometry.boundary, &space, &basis, &geometry.domain)?;
    let bounds = bound_report(&red.k, &red.lumped, &red.small_indices(), red.deflate)?;
    let spectrum = spectral_report(&red, want_vectors)?;
    let mut configs = Vec::new();
    for (i, &g) in red.globals.iter().enumerate() {
        if red.small[i] {
            configs.push(classify_trim_configuration(g, &space, &mesh, &basis, geometry.delta)?);
        }
    }
    let mut max_entry_defect: f64 = 0.0;
    for i in 0..red.n() {
        for (j, v) in red.k.row(i) {
            let cs = (red.k.get(i, i) * red.k.get(j, j)).sqrt();
            max_entry_defect = max_entry_defect.max(v.abs() / cs - 1.0);
        }
    }
    let row = SweepRow {
        delta: geometry.delta,
        lambda1_lumped: spectrum.lambda1_lumped,
        lambdan_lumped: spectrum.lambdan_lumped,
        lambdan_consistent: spectrum.lambdan_consistent,
        min_ratio: bounds.min_ratio,
        max_ratio: bounds.max_ratio,
        infnorm_bound: bounds.infnorm_bound,
        improved_bound: bounds.improved_bound,
        lambda1_below_floor: spectrum.lambda1_below_floor,
    };
    Ok(CaseResult {
        measure: mesh.total_measure(),
        lumped_total: lumped.iter().sum(),
        lumping_defect: defect,
        kernel_residual: kernel_residual(&red.k),
        n_active: basis.len(),
        max_entry_defect,
        geometry,
        space,
        system: red,
        bounds,
        spectrum,
        row,
        configs,
    })
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub cases: Vec<CaseResult>,
}

impl SweepResult {
    pub fn rows(&self) -> Vec<SweepRow> {
        self.cases.iter().map(|c| c.row.clone()).collect()
    }
}

/// One case per δ, in the order of the δ list.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let cases = spec
        .deltas
        .iter()
        .map(|&d| run_case(spec, d, false))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        spec: spec.clone(),
        cases,
    })
}

pub const CSV_HEADER: &str =
    "delta,lambda1_lumped,lambdan_lumped,lambdan_consistent,min_ratio,max_ratio,infnorm_bound,improved_bound,floor_flags";

/// CSV table with 17 significant digits.
pub fn write_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let flags = if r.lambda1_below_floor { "lambda1_lumped" } else { "none" };
        s.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
            r.delta,
            r.lambda1_lumped,
            r.lambdan_lumped,
            r.lambdan_consistent,
            r.min_ratio,
            r.max_ratio,
            r.infnorm_bound,
            r.improved_bound,
            flags
        ));
    }
    s
}
