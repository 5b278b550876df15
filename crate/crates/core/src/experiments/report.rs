//! Standard slope fits of a sweep and the human-readable report.

use std::fmt::Write;

use super::fit::{compare_report, fit_against, fit_slope, predicted_exponents, prediction_notes, Predicted, SlopeFit};
use super::geometries::GeometryId;
use super::sweep::{CaseResult, SweepResult, SweepSpec};
use crate::error::Result;
use crate::geometry::TrimConfig;

/// Slope tolerance for the δ-exponents: 0.05 in 1D, 0.1 in 2D.
pub fn slope_tolerance(dimension: usize) -> f64 {
    if dimension == 1 {
        0.05
    } else {
        0.1
    }
}

/// Tolerance when one fitted slope is compared with another.
pub fn matching_tolerance(dimension: usize) -> f64 {
    if dimension == 1 {
        0.1
    } else {
        0.15
    }
}

/// Geometries where `λ₁` is known to decay faster than the smallest
/// diagonal ratio; there it is compared with the improved bound.
pub fn lambda1_tracks_improved(id: GeometryId) -> bool {
    matches!(id, GeometryId::HouseWide | GeometryId::RotatedSquareShifted)
}

pub fn sweep_prediction(res: &SweepResult) -> Result<Predicted> {
    let s = &res.spec;
    let d = s.geometry.dimension();
    predicted_exponents(&vec![s.p; d], &vec![s.k as usize; d], &s.geometry.configurations())
}

pub const WINDOW_MIN_RATIO: &str = "min_ratio (trim-controlled)";
pub const WINDOW_IMPROVED: &str = "improved_bound (trim-controlled)";
pub const WINDOW_LAMBDA1: &str = "lambda1_lumped (trim-controlled)";

/// Rows for the diagnostic asymptotic `λ₁` fit: above the noise floor and,
/// once some row has `λ₁` within 5% of the improved bound (the smallest mode
/// lives on the small functions), only that row and the following ones.
/// Before that `λ₁` is still the smallest eigenvalue of the untrimmed problem.
pub fn trim_controlled_window(rows: &[super::sweep::SweepRow]) -> Vec<bool> {
    let start = rows
        .iter()
        .position(|r| r.improved_bound.is_finite() && r.lambda1_lumped >= 0.95 * r.improved_bound)
        .unwrap_or(0);
    rows.iter().enumerate().map(|(i, r)| i >= start && !r.lambda1_below_floor).collect()
}

/// Fits of every column of a sweep against the predicted exponents.
pub fn sweep_fits(res: &SweepResult) -> Result<Vec<SlopeFit>> {
    let pred = sweep_prediction(res)?;
    let d = res.spec.geometry.dimension();
    let tol = slope_tolerance(d);
    let mtol = matching_tolerance(d);
    let rows = res.rows();
    let deltas: Vec<f64> = rows.iter().map(|r| r.delta).collect();
    let col = |f: fn(&super::sweep::SweepRow) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let all = vec![true; rows.len()];
    let above: Vec<bool> = rows.iter().map(|r| !r.lambda1_below_floor).collect();
    let window = trim_controlled_window(&rows);
    let mut fits = vec![
        fit_slope("lambdan_lumped", &deltas, &col(|r| r.lambdan_lumped), &all, Some(pred.lambdan_lumped), tol),
        fit_slope(
            "lambdan_consistent",
            &deltas,
            &col(|r| r.lambdan_consistent),
            &all,
            Some(pred.lambdan_consistent),
            tol,
        ),
        fit_slope("min_ratio", &deltas, &col(|r| r.min_ratio), &all, Some(pred.lambda1_bound), tol),
    ];
    let min_ratio_above = fit_slope("min_ratio (above floor)", &deltas, &col(|r| r.min_ratio), &above, None, tol);
    if lambda1_tracks_improved(res.spec.geometry) {
        let imp = fit_slope("improved_bound (above floor)", &deltas, &col(|r| r.improved_bound), &above, None, tol);
        let l1 = fit_against("lambda1_lumped vs improved_bound", &deltas, &col(|r| r.lambda1_lumped), &above, &imp, mtol);
        let imp_w = fit_slope(WINDOW_IMPROVED, &deltas, &col(|r| r.improved_bound), &window, None, tol);
        let l1_w = fit_against(WINDOW_LAMBDA1, &deltas, &col(|r| r.lambda1_lumped), &window, &imp_w, mtol);
        fits.extend([imp, l1, imp_w, l1_w]);
    } else {
        let l1 = fit_against("lambda1_lumped vs min_ratio", &deltas, &col(|r| r.lambda1_lumped), &above, &min_ratio_above, mtol);
        let mr_w = fit_slope(WINDOW_MIN_RATIO, &deltas, &col(|r| r.min_ratio), &window, None, tol);
        let l1_w = fit_against(WINDOW_LAMBDA1, &deltas, &col(|r| r.lambda1_lumped), &window, &mr_w, mtol);
        fits.extend([min_ratio_above, l1, mr_w, l1_w]);
    }
    Ok(fits)
}

fn multi(res: &SweepResult, case: usize, row: usize) -> String {
    case_multi(&res.cases[case], row)
}

/// Text report: setup, predicted laws, per-δ table and verdicts.
pub fn render_report(res: &SweepResult, fits: &[SlopeFit]) -> String {
    let s = &res.spec;
    let mut out = String::new();
    let _ = writeln!(out, "geometry: {} ({})", s.geometry, s.geometry.description());
    let _ = writeln!(out, "N = {}, p = {}, k = {}, gamma = {}", s.n, s.p, s.k, s.gamma);
    let o = s.orders();
    let _ = writeln!(out, "quadrature: {} points per direction on rectangles, {} per collapsed direction on triangles", o.rect, o.tri);
    let configs = s.geometry.configurations();
    let labels: Vec<&str> = configs.iter().map(TrimConfig::label).collect();
    let _ = writeln!(out, "intended configurations: {}", labels.join(", "));
    if let Ok(p) = sweep_prediction(res) {
        let _ = writeln!(
            out,
            "predicted exponents: min_ratio {}, lambdan_lumped {}, lambdan_consistent {}",
            p.lambda1_bound, p.lambdan_lumped, p.lambdan_consistent
        );
    }
    for n in prediction_notes(&configs) {
        let _ = writeln!(out, "  - {n}");
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:>12} {:>6} {:>12} {:>12} {:>12} {:>12} {:>12}  {:<18} {:<18} {}",
        "delta", "dofs", "lambda1", "lambdan", "lambdan_cons", "dt_lumped", "dt_cons", "argmin", "argmax", "small configs"
    );
    for (ci, c) in res.cases.iter().enumerate() {
        let mut counts = std::collections::BTreeMap::new();
        for r in &c.configs {
            *counts.entry(r.config.label()).or_insert(0usize) += 1;
        }
        let cs: Vec<String> = counts.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        let floor = if c.row.lambda1_below_floor { "*" } else { " " };
        let _ = writeln!(
            out,
            "{:>12.4e} {:>6} {:>11.4e}{} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}  {:<18} {:<18} {}",
            c.row.delta,
            c.system.n(),
            c.row.lambda1_lumped,
            floor,
            c.row.lambdan_lumped,
            c.row.lambdan_consistent,
            c.spectrum.dt_lumped,
            c.spectrum.dt_consistent,
            multi(res, ci, c.bounds.argmin),
            multi(res, ci, c.bounds.argmax),
            if cs.is_empty() { "-".to_string() } else { cs.join(" ") }
        );
    }
    let _ = writeln!(out, "(* lambda1 below the noise floor 1e3*eps*lambdan, excluded from fits)");
    let _ = writeln!(out);
    out.push_str(&compare_report(fits));
    out
}

/// Fits that only inform and never decide a verdict.
pub fn is_diagnostic(fit: &SlopeFit) -> bool {
    fit.predicted.is_none() || fit.quantity.ends_with("(trim-controlled)")
}

/// Whether every judged fit passed.
pub fn all_judged_pass(fits: &[SlopeFit]) -> bool {
    fits.iter().filter(|f| !is_diagnostic(f)).all(|f| f.verdict.passed())
}

/// Text report of one case.
pub fn render_case(spec: &SweepSpec, case: &CaseResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "geometry: {} ({})", spec.geometry, spec.geometry.description());
    let _ = writeln!(out, "N = {}, p = {}, k = {}, gamma = {}, delta = {:e}", spec.n, spec.p, spec.k, spec.gamma, case.row.delta);
    let o = spec.orders();
    let _ = writeln!(out, "quadrature: {} points per direction on rectangles, {} per collapsed direction on triangles", o.rect, o.tri);
    let _ = writeln!(out, "active functions: {}, after Dirichlet reduction: {}, small: {}", case.n_active, case.system.n(), case.configs.len());
    let _ = writeln!(out, "measure of the trimmed domain: {:.16e}", case.measure);
    let _ = writeln!(out, "sum of lumped masses:          {:.16e}", case.lumped_total);
    let b = &case.bounds;
    let s = &case.spectrum;
    let rows = [
        ("lambda1_lumped", s.lambda1_lumped),
        ("lambdan_lumped", s.lambdan_lumped),
        ("lambdan_consistent", s.lambdan_consistent),
        ("dt_lumped", s.dt_lumped),
        ("dt_consistent", s.dt_consistent),
        ("min_ratio", b.min_ratio),
        ("max_ratio", b.max_ratio),
        ("infnorm_bound", b.infnorm_bound),
        ("sandwich_upper", b.sandwich_upper),
        ("improved_bound", b.improved_bound),
    ];
    for (name, v) in rows {
        let _ = writeln!(out, "{name:<20} {v:.16e}");
    }
    let _ = writeln!(out, "c_pd                 {}", b.c_pd);
    let _ = writeln!(out, "argmin                {}", case_multi(case, b.argmin));
    let _ = writeln!(out, "argmax                {}", case_multi(case, b.argmax));
    if s.lambda1_below_floor {
        let _ = writeln!(out, "note: lambda1_lumped is below the noise floor 1e3*eps*lambdan");
    }
    if s.consistent_truncated > 0 {
        let _ = writeln!(
            out,
            "note: the consistent mass is numerically singular; {} direction(s) dropped, lambdan_consistent is a lower bound",
            s.consistent_truncated
        );
    }
    if s.deflated {
        let _ = writeln!(out, "pure Neumann: constant kernel deflated, ‖K·1‖/‖K‖ = {:.3e}", case.kernel_residual);
    }
    let mut counts = std::collections::BTreeMap::new();
    for r in &case.configs {
        *counts.entry(r.config.label()).or_insert(0usize) += 1;
    }
    let cs: Vec<String> = counts.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    let _ = writeln!(out, "small configurations: {}", if cs.is_empty() { "-".into() } else { cs.join(" ") });
    out
}

fn case_multi(c: &CaseResult, row: usize) -> String {
    let g = c.system.globals[row];
    let m = c.space.multi_index(g).unwrap_or_default();
    let label = c.config_of(row).map(|r| r.config.label()).unwrap_or("large");
    let idx: Vec<String> = m.iter().map(|v| v.to_string()).collect();
    format!("({})[{}]", idx.join(","), label)
}
