//! Algebraic eigenvalue bounds and extreme generalized eigenvalues of
//! `(K, M̂)` and `(K, M)`.

use faer::Mat;

use crate::assembly::{kernel_residual, ReducedSystem};
use crate::dense::{cholesky, congruence_inverse, frobenius, sym_eig};
use crate::error::{Error, Result};
use crate::sparse::SymCsr;

/// Relative tolerance of the kernel check before deflation.
pub const KERNEL_TOL: f64 = 1e-10;

/// Computed `λ₁` below `NOISE_FLOOR · ε · λn` is not trusted.
pub const NOISE_FLOOR: f64 = 1e3;

pub fn below_noise_floor(lambda1: f64, lambdan: f64) -> bool {
    lambda1 < NOISE_FLOOR * f64::EPSILON * lambdan
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub infnorm_bound: f64,
    /// Largest number of nonzeros in a row of `K`.
    pub c_pd: usize,
    pub sandwich_upper: f64,
    /// `λ₁(K^S, M̂^S)` over the small functions, `+∞` if there are none.
    /// With a deflated kernel it is divided by `1 - Σ_S d_i / Σ d_i`, which
    /// bounds the loss of mass when the constant is projected out.
    pub improved_bound: f64,
    /// Row attaining `min_ratio` / `max_ratio`.
    pub argmin: usize,
    pub argmax: usize,
}

fn check_mass(d: &[f64]) -> Result<()> {
    for (i, &v) in d.iter().enumerate() {
        if !(v > 0.0) {
            return Err(Error::NonPositiveMass { index: i, value: v });
        }
    }
    Ok(())
}

/// Diagonal-ratio, infinity-norm and small-subspace bounds.
pub fn bound_report(k: &SymCsr, d: &[f64], small: &[usize], deflate: bool) -> Result<BoundReport> {
    if k.n() != d.len() {
        return Err(Error::DimensionMismatch(format!("K is {}x{}, M̂ has {} entries", k.n(), k.n(), d.len())));
    }
    check_mass(d)?;
    let kd = k.diag();
    let (mut argmin, mut argmax) = (0, 0);
    let ratio = |i: usize| kd[i] / d[i];
    for i in 1..d.len() {
        if ratio(i) < ratio(argmin) {
            argmin = i;
        }
        if ratio(i) > ratio(argmax) {
            argmax = i;
        }
    }
    let infnorm_bound = (0..k.n())
        .map(|i| k.row(i).map(|(j, v)| v.abs() / (d[i] * d[j]).sqrt()).sum::<f64>())
        .fold(0.0, f64::max);
    let c_pd = k.max_row_nnz();
    let improved_bound = if small.is_empty() {
        f64::INFINITY
    } else {
        let ks = k.submatrix(small);
        let ds: Vec<f64> = small.iter().map(|&i| d[i]).collect();
        let l = lumped_standard_form(&ks, &ds).and_then(|a| sym_eig(&a, false))?.values[0];
        if deflate {
            let share = ds.iter().sum::<f64>() / d.iter().sum::<f64>();
            if share < 1.0 {
                l / (1.0 - share)
            } else {
                f64::INFINITY
            }
        } else {
            l
        }
    };
    Ok(BoundReport {
        min_ratio: ratio(argmin),
        max_ratio: ratio(argmax),
        infnorm_bound,
        c_pd,
        sandwich_upper: c_pd as f64 * ratio(argmax),
        improved_bound,
        argmin,
        argmax,
    })
}

/// `(DAD, DBD)` with `D = diag(B_ii^{-1/2})`; also returns `D`.
pub fn jacobi_rescale(a: &Mat<f64>, b: &Mat<f64>) -> Result<(Mat<f64>, Mat<f64>, Vec<f64>)> {
    let n = b.nrows();
    let diag: Vec<f64> = (0..n).map(|i| b[(i, i)]).collect();
    check_mass(&diag)?;
    let s: Vec<f64> = diag.iter().map(|v| 1.0 / v.sqrt()).collect();
    let da = Mat::from_fn(n, n, |i, j| s[i] * a[(i, j)] * s[j]);
    let db = Mat::from_fn(n, n, |i, j| if i == j { 1.0 } else { s[i] * b[(i, j)] * s[j] });
    Ok((da, db, s))
}

/// `M̂^{-1/2} K M̂^{-1/2}` as a dense matrix.
pub fn lumped_standard_form(k: &SymCsr, d: &[f64]) -> Result<Mat<f64>> {
    check_mass(d)?;
    let n = k.n();
    let s: Vec<f64> = d.iter().map(|v| 1.0 / v.sqrt()).collect();
    let mut a = Mat::zeros(n, n);
    for i in 0..n {
        for (j, v) in k.row(i) {
            a[(i, j)] = s[i] * v * s[j];
        }
    }
    Ok(a)
}

/// Householder reflector `H = I - β v vᵀ` sending a unit vector to `∓e₀`.
#[derive(Debug, Clone)]
pub struct Deflation {
    v: Vec<f64>,
    beta: f64,
}

impl Deflation {
    pub fn new(w: &[f64]) -> Self {
        let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut v: Vec<f64> = w.iter().map(|x| x / nw).collect();
        let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
        v[0] += sign;
        let beta = 2.0 / v.iter().map(|x| x * x).sum::<f64>();
        Deflation { v, beta }
    }

    /// `H A H` with the first row and column removed.
    pub fn apply(&self, a: &Mat<f64>) -> Mat<f64> {
        let n = a.nrows();
        let v = &self.v;
        let g: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a[(i, j)] * v[j]).sum()).collect();
        let vg: f64 = v.iter().zip(&g).map(|(x, y)| x * y).sum();
        let b = self.beta;
        Mat::from_fn(n - 1, n - 1, |i, j| {
            let (i, j) = (i + 1, j + 1);
            let x = a[(i, j)] - b * v[i] * g[j] - b * g[i] * v[j] + b * b * vg * v[i] * v[j];
            let y = a[(j, i)] - b * v[j] * g[i] - b * g[j] * v[i] + b * b * vg * v[j] * v[i];
            0.5 * (x + y)
        })
    }

    /// Maps a vector of the deflated problem back: `H [0; y]`.
    pub fn lift(&self, y: &[f64]) -> Vec<f64> {
        let mut z = Vec::with_capacity(y.len() + 1);
        z.push(0.0);
        z.extend_from_slice(y);
        let vz: f64 = self.v.iter().zip(&z).map(|(a, b)| a * b).sum();
        z.iter().zip(&self.v).map(|(zi, vi)| zi - self.beta * vi * vz).collect()
    }
}

/// Eigenvalues of the symmetric `a` restricted to the orthogonal complement
/// of its null vector `w`.
pub fn deflate_kernel(a: &Mat<f64>, w: &[f64]) -> Result<(Mat<f64>, Deflation)> {
    let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    let n = a.nrows();
    let aw: f64 = (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)] * w[j]).sum::<f64>().powi(2))
        .sum::<f64>()
        .sqrt();
    let tol = KERNEL_TOL * frobenius(a) * nw;
    if aw > tol {
        return Err(Error::KernelCheck { residual: aw / nw, tolerance: tol / nw });
    }
    let h = Deflation::new(w);
    Ok((h.apply(a), h))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LumpedSpectrum {
    pub values: Vec<f64>,
    pub lambda1: f64,
    pub lambdan: f64,
    /// Extreme eigenvectors of `(K, M̂)`, if requested.
    pub x1: Option<Vec<f64>>,
    pub xn: Option<Vec<f64>>,
}

/// Spectrum of `(K, M̂)` through `M̂^{-1/2} K M̂^{-1/2}`; with `deflate`,
/// the constant kernel is removed first.
pub fn gen_eig_lumped(k: &SymCsr, d: &[f64], deflate: bool, want_vectors: bool) -> Result<LumpedSpectrum> {
    let a = lumped_standard_form(k, d)?;
    let s: Vec<f64> = d.iter().map(|v| 1.0 / v.sqrt()).collect();
    let (mat, defl) = if deflate {
        if kernel_residual(k) > KERNEL_TOL {
            return Err(Error::KernelCheck {
                residual: kernel_residual(k),
                tolerance: KERNEL_TOL,
            });
        }
        let w: Vec<f64> = d.iter().map(|v| v.sqrt()).collect();
        let (m, h) = deflate_kernel(&a, &w)?;
        (m, Some(h))
    } else {
        (a, None)
    };
    let e = sym_eig(&mat, want_vectors)?;
    let n = e.values.len();
    let back = |col: usize| -> Vec<f64> {
        let u = e.vectors.as_ref().expect("vectors requested");
        let y: Vec<f64> = (0..u.nrows()).map(|i| u[(i, col)]).collect();
        let z = match &defl {
            Some(h) => h.lift(&y),
            None => y,
        };
        z.iter().zip(&s).map(|(a, b)| a * b).collect()
    };
    Ok(LumpedSpectrum {
        lambda1: e.values[0],
        lambdan: e.values[n - 1],
        x1: want_vectors.then(|| back(0)),
        xn: want_vectors.then(|| back(n - 1)),
        values: e.values.clone(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistentSpectrum {
    pub values: Vec<f64>,
    pub lambda1: f64,
    pub lambdan: f64,
    /// Directions of `DMD` dropped as numerically null. When nonzero, the
    /// values are those of the pair restricted to the resolved subspace and
    /// `lambdan` is a lower bound for the true `λn(K, M)`.
    pub truncated: usize,
}

/// Spectrum of `(K, M)`: Jacobi rescaling, Cholesky `DMD = LLᵀ`, then the
/// standard problem for `L⁻¹ DKD L⁻ᵀ`.
pub fn gen_eig_consistent(k: &SymCsr, m: &SymCsr, deflate: bool) -> Result<ConsistentSpectrum> {
    let (dk, dm, s) = jacobi_rescale(&k.to_dense(), &m.to_dense())?;
    let l = match cholesky(&dm) {
        Ok(l) => l,
        Err(Error::CholeskyFailed { .. }) => return consistent_resolved(&dk, &dm),
        Err(e) => return Err(e),
    };
    let c = congruence_inverse(&l, &dk);
    let mat = if deflate {
        // K 1 = 0 gives the null vector Lᵀ D⁻¹ 1 of C
        let n = s.len();
        let w: Vec<f64> = (0..n).map(|i| (i..n).map(|j| l[(j, i)] / s[j]).sum()).collect();
        deflate_kernel(&c, &w)?.0
    } else {
        c
    };
    let e = sym_eig(&mat, false)?;
    let n = e.values.len();
    Ok(ConsistentSpectrum {
        lambda1: e.values[0],
        lambdan: e.values[n - 1],
        values: e.values,
        truncated: 0,
    })
}

/// Fallback when `DMD` is numerically singular: eigenvectors of `DMD` with
/// eigenvalues below `n ε λ_max` are dropped and the pair is solved on the rest.
fn consistent_resolved(dk: &Mat<f64>, dm: &Mat<f64>) -> Result<ConsistentSpectrum> {
    let n = dm.nrows();
    let em = sym_eig(dm, true)?;
    let q = em.vectors.ok_or(Error::EigenFailed)?;
    let top = em.values[n - 1];
    let cut = n as f64 * f64::EPSILON * top;
    let keep: Vec<usize> = (0..n).filter(|&i| em.values[i] > cut).collect();
    if keep.is_empty() {
        return Err(Error::CholeskyFailed { condition_estimate: f64::INFINITY });
    }
    let r = keep.len();
    let b = Mat::from_fn(n, r, |i, j| q[(i, keep[j])] / em.values[keep[j]].sqrt());
    let kb = dk * &b;
    let c = b.transpose() * &kb;
    let c = Mat::from_fn(r, r, |i, j| 0.5 * (c[(i, j)] + c[(j, i)]));
    let e = sym_eig(&c, false)?;
    Ok(ConsistentSpectrum {
        lambda1: e.values[0],
        lambdan: e.values[r - 1],
        values: e.values,
        truncated: n - r,
    })
}

/// `Δt_c = 2 / sqrt(λn)`.
pub fn critical_dt(lambdan: f64) -> Result<f64> {
    if !(lambdan > 0.0) {
        return Err(Error::NonPositiveEigenvalue(lambdan));
    }
    Ok(2.0 / lambdan.sqrt())
}

/// `‖K x - λ B x‖ / (‖K‖ ‖x‖)` with `B` given by its action.
pub fn residual(k: &SymCsr, bx: &[f64], x: &[f64], lambda: f64) -> f64 {
    let kx = k.matvec(x);
    let r: f64 = kx.iter().zip(bx).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
    let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    r / (k.norm() * nx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub lambda1_lumped: f64,
    pub lambdan_lumped: f64,
    pub lambdan_consistent: f64,
    pub dt_lumped: f64,
    pub dt_consistent: f64,
    pub deflated: bool,
    pub lambda1_below_floor: bool,
    /// See [`ConsistentSpectrum::truncated`].
    pub consistent_truncated: usize,
    /// Residuals of the extreme lumped pairs, when vectors were requested.
    pub residuals: Option<(f64, f64)>,
    pub x1: Option<Vec<f64>>,
    pub xn: Option<Vec<f64>>,
}

/// Extreme eigenvalues of both pairs of a reduced system.
pub fn spectral_report(sys: &ReducedSystem, want_vectors: bool) -> Result<SpectralReport> {
    let lumped = gen_eig_lumped(&sys.k, &sys.lumped, sys.deflate, want_vectors)?;
    let cons = gen_eig_consistent(&sys.k, &sys.m, sys.deflate)?;
    let residuals = match (&lumped.x1, &lumped.xn) {
        (Some(x1), Some(xn)) => {
            let b = |x: &[f64]| x.iter().zip(&sys.lumped).map(|(a, b)| a * b).collect::<Vec<_>>();
            Some((
                residual(&sys.k, &b(x1), x1, lumped.lambda1),
                residual(&sys.k, &b(xn), xn, lumped.lambdan),
            ))
        }
        _ => None,
    };
    Ok(SpectralReport {
        lambda1_lumped: lumped.lambda1,
        lambdan_lumped: lumped.lambdan,
        lambdan_consistent: cons.lambdan,
        consistent_truncated: cons.truncated,
        dt_lumped: critical_dt(lumped.lambdan)?,
        dt_consistent: critical_dt(cons.lambdan)?,
        deflated: sys.deflate,
        lambda1_below_floor: below_noise_floor(lumped.lambda1, lumped.lambdan),
        residuals,
        x1: lumped.x1,
        xn: lumped.xn,
    })
}
