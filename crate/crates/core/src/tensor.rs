//! Tensor-product spline spaces in one or two parametric directions.
//!
//! Linear index of the multi-index `(i0, i1)` is `i0 + n0 * i1`; elements
//! are numbered the same way.

use crate::bspline::SplineSpace1D;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TensorSpace {
    factors: Vec<SplineSpace1D>,
}

/// Values and gradients of the functions living on one element.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorEval {
    pub element: usize,
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    /// Gradients; the second component is zero in 1D.
    pub grads: Option<Vec<[f64; 2]>>,
}

impl TensorSpace {
    pub fn new(factors: Vec<SplineSpace1D>) -> Result<Self> {
        if factors.is_empty() || factors.len() > 2 {
            return Err(Error::DimensionMismatch(format!(
                "{} factors, expected 1 or 2",
                factors.len()
            )));
        }
        Ok(TensorSpace { factors })
    }

    pub fn univariate(space: SplineSpace1D) -> Self {
        TensorSpace {
            factors: vec![space],
        }
    }

    /// Same univariate space in both directions.
    pub fn square(space: SplineSpace1D) -> Self {
        TensorSpace {
            factors: vec![space.clone(), space],
        }
    }

    pub fn dimension(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, l: usize) -> &SplineSpace1D {
        &self.factors[l]
    }

    pub fn factors(&self) -> &[SplineSpace1D] {
        &self.factors
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.degree()).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim()).collect()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).product()
    }

    pub fn elements_per_dir(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.num_elements()).collect()
    }

    pub fn num_elements(&self) -> usize {
        self.factors.iter().map(|f| f.num_elements()).product()
    }

    /// Number of functions that do not vanish on an element.
    pub fn local_count(&self) -> usize {
        self.factors.iter().map(|f| f.degree() + 1).product()
    }

    fn split(&self, i: usize, sizes: impl Fn(&SplineSpace1D) -> usize) -> [usize; 2] {
        match self.factors.len() {
            1 => [i, 0],
            _ => {
                let n0 = sizes(&self.factors[0]);
                [i % n0, i / n0]
            }
        }
    }

    /// Multi-index of a global function index.
    pub fn multi_index(&self, i: usize) -> Result<Vec<usize>> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index: i,
                size: self.dim(),
            });
        }
        let m = self.split(i, |f| f.dim());
        Ok(m[..self.factors.len()].to_vec())
    }

    pub fn linear_index(&self, multi: &[usize]) -> Result<usize> {
        if multi.len() != self.factors.len() {
            return Err(Error::DimensionMismatch(format!(
                "multi-index of length {} for a {}-variate space",
                multi.len(),
                self.factors.len()
            )));
        }
        let mut lin = 0;
        let mut stride = 1;
        for (&il, f) in multi.iter().zip(&self.factors) {
            if il >= f.dim() {
                return Err(Error::IndexOutOfRange {
                    index: il,
                    size: f.dim(),
                });
            }
            lin += il * stride;
            stride *= f.dim();
        }
        Ok(lin)
    }

    pub(crate) fn fn_multi(&self, i: usize) -> [usize; 2] {
        self.split(i, |f| f.dim())
    }

    pub(crate) fn elem_multi(&self, e: usize) -> [usize; 2] {
        self.split(e, |f| f.num_elements())
    }

    pub(crate) fn elem_linear(&self, m: [usize; 2]) -> usize {
        match self.factors.len() {
            1 => m[0],
            _ => m[0] + self.factors[0].num_elements() * m[1],
        }
    }

    /// Parametric box `[lo, hi]` of element `e`; unused second components are 0.
    pub fn element_box(&self, e: usize) -> ([f64; 2], [f64; 2]) {
        let m = self.elem_multi(e);
        let mut lo = [0.0; 2];
        let mut hi = [0.0; 2];
        for (l, f) in self.factors.iter().enumerate() {
            let (a, b) = f.element(m[l]);
            lo[l] = a;
            hi[l] = b;
        }
        (lo, hi)
    }

    pub fn element_measure(&self, e: usize) -> f64 {
        let (lo, hi) = self.element_box(e);
        (0..self.factors.len()).map(|l| hi[l] - lo[l]).product()
    }

    /// Global indices of the functions living on element `e`, in local order
    /// `a0 + (p0 + 1) * a1`.
    pub fn element_functions(&self, e: usize) -> Vec<usize> {
        let m = self.elem_multi(e);
        let f0 = &self.factors[0];
        let s0 = f0.first_function(m[0]);
        if self.factors.len() == 1 {
            return (s0..=s0 + f0.degree()).collect();
        }
        let f1 = &self.factors[1];
        let s1 = f1.first_function(m[1]);
        let n0 = f0.dim();
        (0..=f1.degree())
            .flat_map(|b| (0..=f0.degree()).map(move |a| (s0 + a) + n0 * (s1 + b)))
            .collect()
    }

    /// Elements inside the support of function `i`.
    pub fn support_elements(&self, i: usize) -> Vec<usize> {
        let m = self.fn_multi(i);
        match self.factors.len() {
            1 => self.factors[0].support_elements(m[0]).collect(),
            _ => {
                let r0 = self.factors[0].support_elements(m[0]);
                let r1 = self.factors[1].support_elements(m[1]);
                let ne0 = self.factors[0].num_elements();
                r1.flat_map(|e1| r0.clone().map(move |e0| e0 + ne0 * e1)).collect()
            }
        }
    }

    /// Support box of function `i`.
    pub fn support_box(&self, i: usize) -> ([f64; 2], [f64; 2]) {
        let m = self.fn_multi(i);
        let mut lo = [0.0; 2];
        let mut hi = [0.0; 2];
        for (l, f) in self.factors.iter().enumerate() {
            let (a, b) = f.support_interval(m[l]).expect("index in range");
            lo[l] = a;
            hi[l] = b;
        }
        (lo, hi)
    }

    /// Evaluates at a point, locating the element with the half-open rule.
    pub fn eval(&self, x: &[f64], max_deriv: usize) -> Result<TensorEval> {
        if x.len() != self.factors.len() {
            return Err(Error::DimensionMismatch(format!(
                "point of dimension {} for a {}-variate space",
                x.len(),
                self.factors.len()
            )));
        }
        let mut m = [0usize; 2];
        for (l, f) in self.factors.iter().enumerate() {
            m[l] = f.find_element(x[l]).map_err(|_| Error::OutsideDomain(format!("{x:?}")))?;
        }
        let e = self.elem_linear(m);
        Ok(self.eval_on_element(e, x, max_deriv))
    }

    /// Evaluates the local functions of element `e` at `x`.
    pub fn eval_on_element(&self, e: usize, x: &[f64], max_deriv: usize) -> TensorEval {
        let m = self.elem_multi(e);
        let ev: Vec<_> = self
            .factors
            .iter()
            .enumerate()
            .map(|(l, f)| f.eval_on_element(m[l], x[l], max_deriv))
            .collect();
        if ev.len() == 1 {
            let b = &ev[0];
            return TensorEval {
                element: e,
                indices: b.indices().collect(),
                values: b.values.clone(),
                grads: b.derivs.as_ref().map(|d| d.iter().map(|&v| [v, 0.0]).collect()),
            };
        }
        let (b0, b1) = (&ev[0], &ev[1]);
        let n0 = self.factors[0].dim();
        let cnt = b0.values.len() * b1.values.len();
        let mut indices = Vec::with_capacity(cnt);
        let mut values = Vec::with_capacity(cnt);
        let mut grads = Vec::with_capacity(if max_deriv >= 1 { cnt } else { 0 });
        for (bj, &v1) in b1.values.iter().enumerate() {
            for (aj, &v0) in b0.values.iter().enumerate() {
                indices.push(b0.first + aj + n0 * (b1.first + bj));
                values.push(v0 * v1);
                if let (Some(d0), Some(d1)) = (&b0.derivs, &b1.derivs) {
                    grads.push([d0[aj] * v1, v0 * d1[bj]]);
                }
            }
        }
        TensorEval {
            element: e,
            indices,
            values,
            grads: (max_deriv >= 1).then_some(grads),
        }
    }
}
