//! Dense symmetric eigensolvers: cyclic Jacobi for small matrices and the
//! faer tridiagonal solver above [`JACOBI_MAX`].

use faer::{Mat, Side};

use crate::error::{Error, Result};

/// Largest order solved with cyclic Jacobi.
pub const JACOBI_MAX: usize = 200;

#[derive(Debug, Clone)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: Option<Mat<f64>>,
}

pub fn frobenius(a: &Mat<f64>) -> f64 {
    let mut s = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            s += a[(i, j)] * a[(i, j)];
        }
    }
    s.sqrt()
}

fn check_symmetric(a: &Mat<f64>) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", a.nrows(), a.ncols())));
    }
    let norm = frobenius(a);
    let mut defect: f64 = 0.0;
    for j in 0..a.ncols() {
        for i in 0..j {
            defect = defect.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    if defect > 1e-12 * norm {
        return Err(Error::NotSymmetric { defect, norm });
    }
    Ok(())
}

/// All eigenvalues (ascending) and optionally eigenvectors of a symmetric
/// matrix.
pub fn sym_eig(a: &Mat<f64>, want_vectors: bool) -> Result<Eigen> {
    check_symmetric(a)?;
    if a.nrows() <= JACOBI_MAX {
        jacobi_eig(a, want_vectors)
    } else {
        faer_eig(a, want_vectors)
    }
}

/// Cyclic Jacobi. A pair is rotated while `|a_pq| > ε sqrt(|a_pp a_qq|)`;
/// the iteration ends after a sweep without rotations.
pub fn jacobi_eig(a0: &Mat<f64>, want_vectors: bool) -> Result<Eigen> {
    let n = a0.nrows();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = 0.5 * (a0[(i, j)] + a0[(j, i)]);
        }
    }
    let mut v = if want_vectors {
        let mut v = vec![0.0; n * n];
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
        Some(v)
    } else {
        None
    };
    let eps = f64::EPSILON;
    let mut converged = n <= 1;
    for _sweep in 0..100 {
        let mut rotations = 0;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                if apq == 0.0 || apq.abs() <= eps * (app * aqq).abs().sqrt() {
                    continue;
                }
                rotations += 1;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let np = c * akp - s * akq;
                    let nq = s * akp + c * akq;
                    a[k * n + p] = np;
                    a[p * n + k] = np;
                    a[k * n + q] = nq;
                    a[q * n + k] = nq;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
        if rotations == 0 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::EigenFailed);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = v.map(|v| Mat::from_fn(n, n, |i, j| v[i * n + order[j]]));
    Ok(Eigen { values, vectors })
}

pub fn faer_eig(a: &Mat<f64>, want_vectors: bool) -> Result<Eigen> {
    if want_vectors {
        let e = a.self_adjoint_eigen(Side::Lower).map_err(|_| Error::EigenFailed)?;
        let s = e.S().column_vector();
        let values = (0..a.nrows()).map(|i| s[i]).collect();
        Ok(Eigen {
            values,
            vectors: Some(e.U().to_owned()),
        })
    } else {
        let values = a.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::EigenFailed)?;
        Ok(Eigen { values, vectors: None })
    }
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
pub fn cholesky(a: &Mat<f64>) -> Result<Mat<f64>> {
    let diag_ratio = || {
        let d: Vec<f64> = (0..a.nrows()).map(|i| a[(i, i)]).collect();
        let hi = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = d.iter().cloned().fold(f64::INFINITY, f64::min);
        hi / lo
    };
    let llt = a.llt(Side::Lower).map_err(|_| Error::CholeskyFailed {
        condition_estimate: diag_ratio(),
    })?;
    Ok(llt.L().to_owned())
}

/// `L^{-1} A L^{-T}` for a lower triangular `L`.
pub fn congruence_inverse(l: &Mat<f64>, a: &Mat<f64>) -> Mat<f64> {
    let mut x = a.clone();
    l.solve_lower_triangular_in_place(x.as_mut());
    let mut y = x.transpose().to_owned();
    l.solve_lower_triangular_in_place(y.as_mut());
    // symmetrize away the rounding asymmetry
    let n = y.nrows();
    Mat::from_fn(n, n, |i, j| 0.5 * (y[(i, j)] + y[(j, i)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sym(n: usize, seed: u64) -> Mat<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = Mat::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        Mat::from_fn(n, n, |i, j| b[(i, j)] + b[(j, i)])
    }

    #[test]
    fn diagonal_and_2x2() {
        let a = Mat::from_fn(3, 3, |i, j| if i == j { [3.0, 1.0, 2.0][i] } else { 0.0 });
        assert_eq!(sym_eig(&a, false).unwrap().values, vec![1.0, 2.0, 3.0]);
        let a = Mat::from_fn(2, 2, |i, j| if i == j { 2.0 } else { 1.0 });
        let e = sym_eig(&a, false).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15 && (e.values[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn trace_and_residuals() {
        let a = random_sym(40, 7);
        let e = jacobi_eig(&a, true).unwrap();
        let tr: f64 = (0..40).map(|i| a[(i, i)]).sum();
        let s: f64 = e.values.iter().sum();
        assert!((tr - s).abs() <= 1e-12 * frobenius(&a));
        let v = e.vectors.unwrap();
        let r = &a * &v - &v * Mat::from_fn(40, 40, |i, j| if i == j { e.values[i] } else { 0.0 });
        assert!(frobenius(&r) < 1e-12 * frobenius(&a));
    }

    #[test]
    fn jacobi_agrees_with_faer() {
        let a = random_sym(60, 3);
        let j = jacobi_eig(&a, false).unwrap().values;
        let f = faer_eig(&a, false).unwrap().values;
        for (x, y) in j.iter().zip(&f) {
            assert!((x - y).abs() < 1e-12 * frobenius(&a));
        }
    }

    #[test]
    fn rejects_nonsymmetric() {
        let mut a = random_sym(4, 1);
        a[(0, 1)] += 1e-6;
        assert!(matches!(sym_eig(&a, false), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn graded_matrix_small_eigenvalue_relative_accuracy() {
        // D B D with a well-conditioned B and a strongly graded D: Jacobi
        // keeps the tiny eigenvalue to high relative accuracy
        let b = Mat::from_fn(3, 3, |i, j| if i == j { 1.0 } else { 0.25 });
        let d = [1.0, 1e-5, 1e-10];
        let a = Mat::from_fn(3, 3, |i, j| d[i] * b[(i, j)] * d[j]);
        let det_b = 1.0 + 2.0 * 0.25f64.powi(3) - 3.0 * 0.0625;
        let e = jacobi_eig(&a, false).unwrap().values;
        let prod: f64 = e.iter().product();
        let exact = det_b * 1e-30;
        assert!(((prod - exact) / exact).abs() < 1e-10, "{prod} vs {exact}");
    }

    #[test]
    fn cholesky_congruence() {
        let n = 5;
        let b = random_sym(n, 11);
        let m = Mat::from_fn(n, n, |i, j| b[(i, j)] + if i == j { 10.0 } else { 0.0 });
        let l = cholesky(&m).unwrap();
        let c = congruence_inverse(&l, &m);
        for i in 0..n {
            for j in 0..n {
                let id = if i == j { 1.0 } else { 0.0 };
                assert!((c[(i, j)] - id).abs() < 1e-13);
            }
        }
        let neg = Mat::from_fn(2, 2, |i, j| if i == j { -1.0 } else { 0.0 });
        assert!(matches!(cholesky(&neg), Err(Error::CholeskyFailed { .. })));
    }
}
