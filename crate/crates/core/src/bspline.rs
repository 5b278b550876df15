//! Univariate B-spline spaces on open knot vectors.
//!
//! Indices are 0-based throughout: basis function `i` is supported on
//! `[knots[i], knots[i + p + 1]]` and element `e` is the `e`-th nonempty
//! knot interval.

use crate::error::{Error, Result};

/// Open knot vector: end knots repeated `degree + 1` times.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector {
    degree: usize,
    knots: Vec<f64>,
}

impl KnotVector {
    /// Builds an open knot vector from distinct breakpoints and the
    /// multiplicity of each interior breakpoint.
    pub fn open(degree: usize, breakpoints: &[f64], interior_mult: &[usize]) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidDegree(degree));
        }
        check_breakpoints(breakpoints)?;
        if interior_mult.len() + 2 != breakpoints.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} interior multiplicities for {} breakpoints",
                interior_mult.len(),
                breakpoints.len()
            )));
        }
        let mut knots = vec![breakpoints[0]; degree + 1];
        for (j, &m) in interior_mult.iter().enumerate() {
            if m == 0 || m > degree {
                return Err(Error::InvalidMultiplicity {
                    index: j + 1,
                    multiplicity: m,
                    degree,
                });
            }
            knots.extend(std::iter::repeat(breakpoints[j + 1]).take(m));
        }
        knots.extend(std::iter::repeat(*breakpoints.last().unwrap()).take(degree + 1));
        Ok(KnotVector { degree, knots })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Space dimension `#knots - p - 1`.
    pub fn dim(&self) -> usize {
        self.knots.len() - self.degree - 1
    }
}

fn check_breakpoints(bp: &[f64]) -> Result<()> {
    if bp.len() < 2 || bp.iter().any(|x| !x.is_finite()) || bp.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidBreakpoints);
    }
    Ok(())
}

/// Values (and optionally first derivatives) of the `p + 1` B-splines that
/// do not vanish on one element.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisEval {
    pub element: usize,
    /// Global index of the first local function; the others follow consecutively.
    pub first: usize,
    pub values: Vec<f64>,
    pub derivs: Option<Vec<f64>>,
}

impl BasisEval {
    pub fn indices(&self) -> std::ops::Range<usize> {
        self.first..self.first + self.values.len()
    }
}

/// A univariate spline space `S^k_{p,Xi}` with its element partition.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineSpace1D {
    knots: KnotVector,
    breakpoints: Vec<f64>,
    interior_mult: Vec<usize>,
    /// Knot span index `l` of each element: `knots[l] < knots[l + 1]`.
    element_span: Vec<usize>,
}

impl SplineSpace1D {
    /// Space with uniform interior multiplicity `p - k`, i.e. `C^k` at every
    /// interior breakpoint.
    pub fn new(degree: usize, breakpoints: &[f64], smoothness: i64) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidDegree(degree));
        }
        if smoothness < 0 || smoothness >= degree as i64 {
            return Err(Error::InvalidSmoothness {
                degree,
                k: smoothness,
            });
        }
        check_breakpoints(breakpoints)?;
        let m = degree - smoothness as usize;
        let mult = vec![m; breakpoints.len() - 2];
        Self::with_multiplicities(degree, breakpoints, &mult)
    }

    /// Space with an arbitrary multiplicity per interior breakpoint.
    pub fn with_multiplicities(degree: usize, breakpoints: &[f64], interior_mult: &[usize]) -> Result<Self> {
        let knots = KnotVector::open(degree, breakpoints, interior_mult)?;
        let mut element_span = Vec::with_capacity(breakpoints.len() - 1);
        let mut span = degree;
        element_span.push(span);
        for &m in interior_mult {
            span += m;
            element_span.push(span);
        }
        Ok(SplineSpace1D {
            knots,
            breakpoints: breakpoints.to_vec(),
            interior_mult: interior_mult.to_vec(),
            element_span,
        })
    }

    /// Uniform space on `[0, 1]` with `n` elements.
    pub fn uniform(degree: usize, n: usize, smoothness: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("N", "need at least one element"));
        }
        let bp: Vec<f64> = (0..=n).map(|j| j as f64 / n as f64).collect();
        Self::new(degree, &bp, smoothness)
    }

    pub fn degree(&self) -> usize {
        self.knots.degree
    }

    pub fn knot_vector(&self) -> &KnotVector {
        &self.knots
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots.knots
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn dim(&self) -> usize {
        self.knots.dim()
    }

    pub fn num_elements(&self) -> usize {
        self.element_span.len()
    }

    pub fn element(&self, e: usize) -> (f64, f64) {
        (self.breakpoints[e], self.breakpoints[e + 1])
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    /// Index of the first of the `p + 1` functions living on element `e`.
    pub fn first_function(&self, e: usize) -> usize {
        self.element_span[e] - self.degree()
    }

    /// Elements contained in the support of function `i`.
    pub fn support_elements(&self, i: usize) -> std::ops::Range<usize> {
        let p = self.degree();
        let lo = self.element_span.partition_point(|&s| s < i);
        let hi = self.element_span.partition_point(|&s| s <= i + p);
        lo..hi
    }

    /// Smoothness `p - m` across the interior breakpoint `index`.
    pub fn local_smoothness(&self, index: usize) -> Result<usize> {
        if index == 0 || index + 1 >= self.breakpoints.len() {
            return Err(Error::IndexOutOfRange {
                index,
                size: self.breakpoints.len(),
            });
        }
        Ok(self.degree() - self.interior_mult[index - 1])
    }

    /// Closed support `[xi_i, xi_{i+p+1}]` of function `i`.
    pub fn support_interval(&self, i: usize) -> Result<(f64, f64)> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: i,
                size: self.dim(),
            });
        }
        let k = self.knots();
        Ok((k[i], k[i + self.degree() + 1]))
    }

    /// Number of times the knot value `x` appears among the local knots of
    /// function `i`.
    pub fn local_knot_count(&self, i: usize, x: f64) -> usize {
        self.knots()[i..=i + self.degree() + 1].iter().filter(|&&t| t == x).count()
    }

    /// Element containing `x`: half-open elements, the last one closed.
    pub fn find_element(&self, x: f64) -> Result<usize> {
        let (a, b) = self.domain();
        if !(a..=b).contains(&x) {
            return Err(Error::OutsideDomain(format!("{x}")));
        }
        let e = self.breakpoints.partition_point(|&t| t <= x);
        Ok(e.saturating_sub(1).min(self.num_elements() - 1))
    }

    pub fn eval_basis(&self, x: f64, max_deriv: usize) -> Result<BasisEval> {
        let e = self.find_element(x)?;
        Ok(self.eval_on_element(e, x, max_deriv))
    }

    /// Evaluates the local functions of element `e` at `x` without locating
    /// the element; `x` may lie slightly outside the element.
    pub fn eval_on_element(&self, e: usize, x: f64, max_deriv: usize) -> BasisEval {
        let p = self.degree();
        let span = self.element_span[e];
        let knots = self.knots();
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        // Rows of the triangular Cox-de Boor table; `lower` keeps degree p-1.
        let mut n = vec![0.0; p + 1];
        let mut lower = vec![0.0; p];
        n[0] = 1.0;
        for j in 1..=p {
            left[j] = x - knots[span + 1 - j];
            right[j] = knots[span + j] - x;
            let mut saved = 0.0;
            for r in 0..j {
                let temp = n[r] / (right[r + 1] + left[j - r]);
                n[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            n[j] = saved;
            if j == p - 1 {
                lower.copy_from_slice(&n[..p]);
            }
        }
        if p == 1 {
            lower[0] = 1.0;
        }
        let derivs = (max_deriv >= 1).then(|| {
            let first = span - p;
            let mut d = vec![0.0; p + 1];
            for (r, dr) in d.iter_mut().enumerate() {
                let i = first + r;
                let mut v = 0.0;
                if r >= 1 {
                    let den = knots[i + p] - knots[i];
                    if den > 0.0 {
                        v += p as f64 * lower[r - 1] / den;
                    }
                }
                if r < p {
                    let den = knots[i + p + 1] - knots[i + 1];
                    if den > 0.0 {
                        v -= p as f64 * lower[r] / den;
                    }
                }
                *dr = v;
            }
            d
        });
        BasisEval {
            element: e,
            first: span - p,
            values: n,
            derivs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn dimension_examples() {
        let s = SplineSpace1D::new(1, &[0.0, 0.5, 1.0], 0).unwrap();
        assert_eq!(s.dim(), 3);
        let s = SplineSpace1D::uniform(5, 128, 4).unwrap();
        assert_eq!(s.dim(), 133);
        for k in 0..3 {
            let s = SplineSpace1D::new(3, &[0.0, 1.0], k).unwrap();
            assert_eq!(s.dim(), 4);
        }
        // n = p + 1 + (#interior) * m
        let s = SplineSpace1D::uniform(4, 10, 1).unwrap();
        assert_eq!(s.dim(), 4 + 1 + 9 * 3);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            SplineSpace1D::new(3, &[0.0, 1.0], 3),
            Err(Error::InvalidSmoothness { .. })
        ));
        assert!(matches!(
            SplineSpace1D::new(3, &[0.0, 1.0], -1),
            Err(Error::InvalidSmoothness { .. })
        ));
        assert_eq!(SplineSpace1D::new(2, &[0.0, 0.5, 0.5, 1.0], 1), Err(Error::InvalidBreakpoints));
        assert_eq!(SplineSpace1D::new(2, &[0.0], 1), Err(Error::InvalidBreakpoints));
        assert_eq!(SplineSpace1D::new(2, &[1.0, 0.0], 1), Err(Error::InvalidBreakpoints));
    }

    #[test]
    fn local_smoothness_matches_multiplicity() {
        let bp = [0.0, 0.25, 0.5, 0.75, 1.0];
        let s = SplineSpace1D::with_multiplicities(5, &bp, &[1, 5, 3]).unwrap();
        assert_eq!(s.local_smoothness(1).unwrap(), 4);
        assert_eq!(s.local_smoothness(2).unwrap(), 0);
        assert!(s.local_smoothness(0).is_err());
        assert!(s.local_smoothness(4).is_err());
        let s = SplineSpace1D::with_multiplicities(3, &bp, &[2, 2, 2]).unwrap();
        // count repeated knots in the constructed knot vector
        let reps = s.knots().iter().filter(|&&t| t == 0.5).count();
        assert_eq!(reps, 2);
        assert_eq!(s.local_smoothness(2).unwrap(), 3 - reps);
    }

    #[test]
    fn hat_functions() {
        let s = SplineSpace1D::new(1, &[0.0, 0.5, 1.0], 0).unwrap();
        let b = s.eval_basis(0.25, 1).unwrap();
        assert_eq!(b.first, 0);
        assert!(close(b.values[0], 0.5, 1e-15));
        assert!(close(b.values[1], 0.5, 1e-15));
        let d = b.derivs.unwrap();
        assert!(close(d[0], -2.0, 1e-15) && close(d[1], 2.0, 1e-15));
    }

    #[test]
    fn quadratic_central_value() {
        // function 4 has local knots 2,3,4,5 and equals 1/2 at 3 and 4
        let bp: Vec<f64> = (0..=6).map(|j| j as f64).collect();
        let s = SplineSpace1D::new(2, &bp, 1).unwrap();
        assert_eq!(s.support_interval(4).unwrap(), (2.0, 5.0));
        let b = s.eval_basis(3.0, 0).unwrap();
        let idx = 4 - b.first;
        assert!(close(b.values[idx], 0.5, 1e-15));
    }

    #[test]
    fn knot_evaluation_convention() {
        let s = SplineSpace1D::uniform(2, 4, 1).unwrap();
        // at an interior knot, right limit: element to the right
        assert_eq!(s.find_element(0.25).unwrap(), 1);
        // at the last knot, left limit
        let b = s.eval_basis(1.0, 0).unwrap();
        assert_eq!(b.element, 3);
        assert!(close(*b.values.last().unwrap(), 1.0, 1e-15));
        assert!(s.eval_basis(1.0 + 1e-12, 0).is_err());
        assert!(s.eval_basis(-1e-300, 0).is_err());
    }

    #[test]
    fn support_intervals() {
        let s = SplineSpace1D::new(1, &[0.0, 0.5, 1.0], 0).unwrap();
        assert_eq!(s.support_interval(1).unwrap(), (0.0, 1.0));
        let s = SplineSpace1D::uniform(3, 8, 2).unwrap();
        assert_eq!(s.support_interval(0).unwrap(), (0.0, s.knots()[3 + 1]));
        let (a, b) = s.support_interval(5).unwrap();
        assert!(close(b - a, 4.0 / 8.0, 1e-15));
        assert!(s.support_interval(s.dim()).is_err());
    }

    #[test]
    fn support_elements_consistent_with_intervals() {
        let bp = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
        let s = SplineSpace1D::with_multiplicities(3, &bp, &[1, 2, 3, 1]).unwrap();
        for i in 0..s.dim() {
            let (a, b) = s.support_interval(i).unwrap();
            let els: Vec<usize> = s.support_elements(i).collect();
            let expect: Vec<usize> = (0..s.num_elements())
                .filter(|&e| {
                    let (x0, x1) = s.element(e);
                    x0 >= a && x1 <= b
                })
                .collect();
            assert_eq!(els, expect, "function {i}");
        }
    }
}
