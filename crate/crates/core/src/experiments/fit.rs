//! Predicted δ-exponents and least-squares slope fits on log-log data.

use crate::error::{Error, Result};
use crate::geometry::TrimConfig;

/// Expected exponents `e` in `value ~ δ^e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Predicted {
    /// Upper bound on `λ₁(K, M̂)` (the smallest diagonal ratio).
    pub lambda1_bound: f64,
    pub lambdan_lumped: f64,
    pub lambdan_consistent: f64,
}

/// Exponents for degrees `p` and smoothness `k` per direction and the trim
/// configurations present. With several configurations the fastest decay of
/// the `λ₁` bound and the fastest growth of `λn` win.
pub fn predicted_exponents(p: &[usize], k: &[usize], configs: &[TrimConfig]) -> Result<Predicted> {
    if p.is_empty() || p.len() != k.len() {
        return Err(Error::DimensionMismatch("p and k must have one entry per direction".into()));
    }
    if configs.is_empty() {
        return Err(Error::param("configs", "no configuration given"));
    }
    let pmax = *p.iter().max().unwrap() as f64;
    let psum: usize = p.iter().sum();
    let kmin = *k.iter().min().unwrap();
    let mut l1 = f64::NEG_INFINITY;
    let mut ln: f64 = 0.0;
    for c in configs {
        let (a, b) = match c {
            TrimConfig::OneD | TrimConfig::A | TrimConfig::B => {
                ((pmax - 2.0).max(0.0), if kmin == 0 { -1.0 } else { 0.0 })
            }
            TrimConfig::C => {
                let e = if p.len() == 1 { pmax - 2.0 } else { psum as f64 - 2.0 };
                (e.max(0.0), 0.0)
            }
            TrimConfig::Other => {
                return Err(Error::param("configs", "configuration `other` has no predicted exponent"));
            }
        };
        l1 = l1.max(a);
        ln = ln.min(b);
    }
    Ok(Predicted {
        lambda1_bound: l1,
        lambdan_lumped: ln,
        lambdan_consistent: -2.0,
    })
}

/// Plain-language statement of each predicted law, for reports.
pub fn prediction_notes(configs: &[TrimConfig]) -> Vec<String> {
    let mut out = Vec::new();
    for c in configs {
        out.push(match c {
            TrimConfig::OneD => "1D cut: smallest diagonal ratio ~ delta^max(p-2,0); largest lumped eigenvalue ~ delta^-1 only for C0 at the cut knot, bounded otherwise; consistent largest eigenvalue grows at least like delta^-2".to_string(),
            TrimConfig::A => "config A (thin in one direction): same laws as the 1D cut".to_string(),
            TrimConfig::B => "config B (thin in both directions, away from a support corner): smallest ratio ~ delta^max(p-2,0); largest lumped eigenvalue ~ delta^-1 for C0, bounded otherwise".to_string(),
            TrimConfig::C => "config C (cut wraps a support corner): smallest ratio ~ delta^max(p1+p2-2,0); largest lumped eigenvalue bounded for every continuity".to_string(),
            TrimConfig::Other => "other: no prediction".to_string(),
        });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    InsufficientData,
    NoPrediction,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::InsufficientData => "insufficient data",
            Verdict::NoPrediction => "no prediction",
        }
    }

    pub fn passed(&self) -> bool {
        *self == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub quantity: String,
    pub slope: f64,
    pub stderr: f64,
    pub points: usize,
    pub predicted: Option<f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
}

/// Ordinary least squares of `log value` on `log δ` over the points whose
/// `keep` flag is set. Fewer than three points gives `InsufficientData`.
pub fn fit_slope(
    quantity: &str,
    deltas: &[f64],
    values: &[f64],
    keep: &[bool],
    predicted: Option<f64>,
    tolerance: f64,
) -> SlopeFit {
    let pts: Vec<(f64, f64)> = deltas
        .iter()
        .zip(values)
        .zip(keep)
        .filter(|(_, &k)| k)
        .map(|((&d, &v), _)| (d.ln(), v.ln()))
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    let n = pts.len();
    let mut fit = SlopeFit {
        quantity: quantity.to_string(),
        slope: f64::NAN,
        stderr: f64::NAN,
        points: n,
        predicted,
        tolerance,
        verdict: Verdict::InsufficientData,
    };
    if n < 3 {
        return fit;
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    fit.slope = slope;
    fit.stderr = (sse / (nf - 2.0) / sxx).sqrt();
    fit.verdict = match predicted {
        None => Verdict::NoPrediction,
        Some(e) if (slope - e).abs() <= tolerance => Verdict::Pass,
        Some(_) => Verdict::Fail,
    };
    fit
}

/// Fits `values` and compares against another fit's slope instead of a
/// fixed prediction.
pub fn fit_against(quantity: &str, deltas: &[f64], values: &[f64], keep: &[bool], reference: &SlopeFit, tolerance: f64) -> SlopeFit {
    let pred = reference.verdict.ne(&Verdict::InsufficientData).then_some(reference.slope);
    let mut f = fit_slope(quantity, deltas, values, keep, pred, tolerance);
    if reference.verdict == Verdict::InsufficientData {
        f.verdict = Verdict::InsufficientData;
    }
    f
}

/// Renders fits as an aligned text table.
pub fn compare_report(fits: &[SlopeFit]) -> String {
    let mut s = format!(
        "{:<34} {:>10} {:>9} {:>6} {:>10} {:>6}  {}\n",
        "quantity", "slope", "stderr", "points", "expected", "tol", "verdict"
    );
    for f in fits {
        let pred = f.predicted.map(|p| format!("{p:.3}")).unwrap_or_else(|| "-".into());
        s.push_str(&format!(
            "{:<34} {:>10.4} {:>9.2e} {:>6} {:>10} {:>6.2}  {}\n",
            f.quantity,
            f.slope,
            f.stderr,
            f.points,
            pred,
            f.tolerance,
            f.verdict.label()
        ));
    }
    s
}

/// Machine-readable form of [`compare_report`]: one CSV line per fit.
pub fn compare_csv(fits: &[SlopeFit]) -> String {
    let mut s = String::from("quantity,slope,stderr,points,expected,tolerance,verdict\n");
    for f in fits {
        s.push_str(&format!(
            "{},{:.16e},{:.16e},{},{},{},{}\n",
            f.quantity,
            f.slope,
            f.stderr,
            f.points,
            f.predicted.map(|p| p.to_string()).unwrap_or_default(),
            f.tolerance,
            f.verdict.label()
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let d = [1e-2, 1e-3, 1e-4, 1e-5];
        let v: Vec<f64> = d.iter().map(|x| x * x).collect();
        let f = fit_slope("sq", &d, &v, &[true; 4], Some(2.0), 0.05);
        assert!((f.slope - 2.0).abs() < 1e-12);
        assert!(f.verdict.passed());
        let c = fit_slope("c", &d, &[7.0; 4], &[true; 4], Some(0.0), 0.05);
        assert!(c.slope.abs() < 1e-12);
    }

    #[test]
    fn insufficient_points_never_pass() {
        let d = [1e-2, 1e-3, 1e-4];
        let f = fit_slope("x", &d, &[1.0, 2.0, 3.0], &[true, true, false], Some(0.0), 10.0);
        assert_eq!(f.verdict, Verdict::InsufficientData);
        assert!(!f.verdict.passed());
    }

    #[test]
    fn one_d_predictions() {
        let p = predicted_exponents(&[3], &[2], &[TrimConfig::OneD]).unwrap();
        assert_eq!(p.lambda1_bound, 1.0);
        assert_eq!(p.lambdan_lumped, 0.0);
        assert_eq!(p.lambdan_consistent, -2.0);
        let p = predicted_exponents(&[5], &[0], &[TrimConfig::OneD]).unwrap();
        assert_eq!(p.lambda1_bound, 3.0);
        assert_eq!(p.lambdan_lumped, -1.0);
        assert_eq!(predicted_exponents(&[1], &[0], &[TrimConfig::OneD]).unwrap().lambda1_bound, 0.0);
    }

    #[test]
    fn two_d_predictions() {
        for p in 1..=5 {
            let c = predicted_exponents(&[p, p], &[0, 0], &[TrimConfig::C]).unwrap();
            assert_eq!(c.lambda1_bound, (2.0 * p as f64 - 2.0).max(0.0));
            assert_eq!(c.lambdan_lumped, 0.0);
        }
        let ac = predicted_exponents(&[3, 3], &[0, 0], &[TrimConfig::A, TrimConfig::C]).unwrap();
        assert_eq!(ac.lambda1_bound, 4.0);
        assert_eq!(ac.lambdan_lumped, -1.0);
        let b = predicted_exponents(&[4, 4], &[3, 3], &[TrimConfig::B]).unwrap();
        assert_eq!(b.lambda1_bound, 2.0);
        assert_eq!(b.lambdan_lumped, 0.0);
        assert!(predicted_exponents(&[2, 2], &[1, 1], &[TrimConfig::Other]).is_err());
        assert!(predicted_exponents(&[2, 2], &[1, 1], &[]).is_err());
    }
}
