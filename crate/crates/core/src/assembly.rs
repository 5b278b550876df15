//! Stiffness and mass matrices over the active basis, row-sum lumping and
//! strong Dirichlet conditions.

use crate::error::{Error, Result};
use crate::geometry::{ActiveBasisSet, ActiveMesh, Domain, QuadCell};
use crate::quadrature::{gauss_rule, rect_points, triangle_points, GaussRule};
use crate::sparse::SymCsr;
use crate::tensor::TensorSpace;

/// Gauss orders per direction on rectangles/segments and per collapsed
/// direction on triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadOrders {
    pub rect: usize,
    pub tri: usize,
}

impl QuadOrders {
    /// `p + 2` on rectangles, `2p + 3` on triangles, with `p` the largest degree.
    pub fn for_degree(p: usize) -> Self {
        QuadOrders { rect: p + 2, tri: 2 * p + 3 }
    }

    pub fn doubled(&self) -> Self {
        QuadOrders {
            rect: (2 * self.rect).min(32),
            tri: (2 * self.tri).min(32),
        }
    }
}

/// `K` and `M` over the active functions, and the directly integrated
/// `L1` norms of those functions.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemMatrices {
    pub k: SymCsr,
    pub m: SymCsr,
    pub l1: Vec<f64>,
}

fn cell_points(cell: &QuadCell, rect: &GaussRule, tri: &GaussRule) -> Vec<([f64; 2], f64)> {
    match cell {
        QuadCell::Segment { a, b } => rect.mapped(*a, *b).map(|(x, w)| ([x, 0.0], w)).collect(),
        QuadCell::Rect { lo, hi } => rect_points(rect, *lo, *hi),
        QuadCell::Triangle(t) => triangle_points(tri, t),
    }
}

/// Assembles `K_ij = ∫ ∇φ_i·∇φ_j` and `M_ij = ∫ φ_i φ_j` over `Ω`, element
/// by element in ascending order.
pub fn assemble(space: &TensorSpace, basis: &ActiveBasisSet, mesh: &ActiveMesh, orders: QuadOrders) -> Result<SystemMatrices> {
    let rect = gauss_rule(orders.rect)?;
    let tri = gauss_rule(orders.tri)?;
    let d = space.dimension();
    let nloc = space.local_count();
    let mut kt = Vec::new();
    let mut mt = Vec::new();
    let mut l1 = vec![0.0; basis.len()];
    let mut kl = vec![0.0; nloc * nloc];
    let mut ml = vec![0.0; nloc * nloc];
    let mut ll = vec![0.0; nloc];
    for e in mesh.active_elements() {
        let info = &mesh.elements[e];
        if info.cells.is_empty() {
            return Err(Error::MissingCells(e));
        }
        kl.iter_mut().for_each(|v| *v = 0.0);
        ml.iter_mut().for_each(|v| *v = 0.0);
        ll.iter_mut().for_each(|v| *v = 0.0);
        for cell in &info.cells {
            for (x, w) in cell_points(cell, &rect, &tri) {
                let ev = space.eval_on_element(e, &x[..d], 1);
                let g = ev.grads.as_ref().expect("gradients requested");
                for a in 0..nloc {
                    let va = ev.values[a] * w;
                    let ga = [g[a][0] * w, g[a][1] * w];
                    ll[a] += va;
                    for b in a..nloc {
                        ml[a * nloc + b] += va * ev.values[b];
                        kl[a * nloc + b] += ga[0] * g[b][0] + ga[1] * g[b][1];
                    }
                }
            }
        }
        let pos: Vec<Option<usize>> = space.element_functions(e).into_iter().map(|i| basis.position(i)).collect();
        for a in 0..nloc {
            let Some(pa) = pos[a] else { continue };
            l1[pa] += ll[a];
            for b in a..nloc {
                let Some(pb) = pos[b] else { continue };
                let (i, j) = if pa <= pb { (pa, pb) } else { (pb, pa) };
                kt.push((i, j, kl[a * nloc + b]));
                mt.push((i, j, ml[a * nloc + b]));
            }
        }
    }
    let n = basis.len();
    Ok(SystemMatrices {
        k: SymCsr::from_upper_triplets(n, kt),
        m: SymCsr::from_upper_triplets(n, mt),
        l1,
    })
}

/// Row-sum lumping `d_i = Σ_j M_ij`.
pub fn lump_rowsum(m: &SymCsr) -> Result<Vec<f64>> {
    let d = m.row_sums();
    for (i, &v) in d.iter().enumerate() {
        if !(v > 0.0) {
            return Err(Error::NonPositiveMass { index: i, value: v });
        }
    }
    Ok(d)
}

/// Largest relative difference between row sums and directly integrated
/// `L1` norms.
pub fn lumping_defect(d: &[f64], l1: &[f64]) -> f64 {
    d.iter().zip(l1).map(|(a, b)| (a - b).abs() / b.abs()).fold(0.0, f64::max)
}

pub fn diag_ratios(k: &SymCsr, d: &[f64]) -> Vec<f64> {
    k.diag().iter().zip(d).map(|(a, b)| a / b).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Side {
    pub fn name(&self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::Bottom => "bottom",
            Side::Top => "top",
        }
    }

    fn axis(&self) -> usize {
        match self {
            Side::Left | Side::Right => 0,
            Side::Bottom | Side::Top => 1,
        }
    }

    fn at_end(&self) -> bool {
        matches!(self, Side::Right | Side::Top)
    }
}

/// Homogeneous Dirichlet sides (all others natural) and whether the
/// constant kernel must be deflated downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundarySpec {
    pub dirichlet: Vec<Side>,
    pub deflate: bool,
}

impl BoundarySpec {
    pub fn dirichlet(sides: &[Side]) -> Self {
        BoundarySpec {
            dirichlet: sides.to_vec(),
            deflate: false,
        }
    }

    pub fn pure_neumann() -> Self {
        BoundarySpec {
            dirichlet: Vec::new(),
            deflate: true,
        }
    }
}

/// Matrices after strong Dirichlet reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSystem {
    pub k: SymCsr,
    pub m: SymCsr,
    /// Lumped mass, computed before the reduction.
    pub lumped: Vec<f64>,
    /// Global function index of each reduced row.
    pub globals: Vec<usize>,
    pub small: Vec<bool>,
    pub deflate: bool,
}

impl ReducedSystem {
    pub fn n(&self) -> usize {
        self.k.n()
    }

    pub fn small_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.small[i]).collect()
    }
}

/// Whether `Ω` touches the given side of the parametric box along some
/// element edge.
pub fn side_is_fitted(space: &TensorSpace, domain: &Domain, side: Side) -> bool {
    let axis = side.axis();
    if axis >= space.dimension() {
        return false;
    }
    let f = space.factor(axis);
    let (a, b) = f.domain();
    let coord = if side.at_end() { b } else { a };
    match domain {
        Domain::Interval(x0, x1) => {
            if side.at_end() {
                *x1 >= b
            } else {
                *x0 <= a
            }
        }
        Domain::Planar(r) => {
            let other = space.factor(1 - axis);
            (0..other.num_elements()).any(|e| {
                let (u, v) = other.element(e);
                let mut x = [0.0; 2];
                x[axis] = coord;
                x[1 - axis] = 0.5 * (u + v);
                r.level(&x) > 0.0
            })
        }
    }
}

/// Removes the active functions with nonzero trace on Dirichlet sides.
pub fn apply_dirichlet_strong(
    sys: &SystemMatrices,
    lumped: &[f64],
    spec: &BoundarySpec,
    space: &TensorSpace,
    basis: &ActiveBasisSet,
    domain: &Domain,
) -> Result<ReducedSystem> {
    for side in &spec.dirichlet {
        if !side_is_fitted(space, domain, *side) {
            return Err(Error::TrimmedDirichletSide(side.name().to_string()));
        }
    }
    let dims = space.dims();
    let keep: Vec<usize> = (0..basis.len())
        .filter(|&p| {
            let m = space.fn_multi(basis.indices[p]);
            !spec.dirichlet.iter().any(|s| {
                let l = s.axis();
                if s.at_end() {
                    m[l] == dims[l] - 1
                } else {
                    m[l] == 0
                }
            })
        })
        .collect();
    Ok(ReducedSystem {
        k: sys.k.submatrix(&keep),
        m: sys.m.submatrix(&keep),
        lumped: keep.iter().map(|&p| lumped[p]).collect(),
        globals: keep.iter().map(|&p| basis.indices[p]).collect(),
        small: keep.iter().map(|&p| basis.small[p]).collect(),
        deflate: spec.deflate,
    })
}

/// `‖K 1‖` relative to `‖K‖` (Frobenius).
pub fn kernel_residual(k: &SymCsr) -> f64 {
    let r = k.matvec(&vec![1.0; k.n()]);
    r.iter().map(|v| v * v).sum::<f64>().sqrt() / k.norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bspline::SplineSpace1D;
    use crate::geometry::{active_basis, classify_elements, DROP_TOL};

    fn setup_1d(p: usize, n: usize, k: i64, b: f64) -> (TensorSpace, Domain, ActiveBasisSet, SystemMatrices) {
        let space = TensorSpace::univariate(SplineSpace1D::uniform(p, n, k).unwrap());
        let dom = Domain::Interval(0.0, b);
        let mesh = classify_elements(&space, &dom, DROP_TOL).unwrap();
        let basis = active_basis(&space, &mesh, DROP_TOL);
        let sys = assemble(&space, &basis, &mesh, QuadOrders::for_degree(p)).unwrap();
        (space, dom, basis, sys)
    }

    #[test]
    fn hat_function_entries() {
        let n = 8;
        let h = 1.0 / n as f64;
        let (_, _, _, sys) = setup_1d(1, n, 0, 1.0);
        for i in 1..n {
            assert!((sys.k.get(i, i) - 2.0 / h).abs() < 1e-12);
            assert!((sys.k.get(i, i + 1) + 1.0 / h).abs() < 1e-12);
            assert!((sys.m.get(i, i) - 2.0 * h / 3.0).abs() < 1e-15);
        }
        let d = lump_rowsum(&sys.m).unwrap();
        for di in &d[1..n] {
            assert!((di - h).abs() < 1e-15);
        }
        let r = diag_ratios(&sys.k, &d);
        assert!((r[3] - 2.0 / (h * h)).abs() < 1e-10);
    }

    #[test]
    fn single_element_lumping() {
        let (_, _, _, sys) = setup_1d(1, 1, 0, 1.0);
        let d = lump_rowsum(&sys.m).unwrap();
        assert!((d[0] - 0.5).abs() < 1e-15 && (d[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mass_sums_to_measure_and_matches_l1() {
        let n = 16;
        let h = 1.0 / n as f64;
        let b = 1.0 - h + 1e-4;
        let (_, _, _, sys) = setup_1d(4, n, 2, b);
        let d = lump_rowsum(&sys.m).unwrap();
        let total: f64 = d.iter().sum();
        assert!((total - b).abs() <= 1e-12 * b);
        assert!(lumping_defect(&d, &sys.l1) < 1e-12);
    }

    #[test]
    fn trimmed_scaling() {
        // the small function vanishing to order k + 1 at the cut:
        // K_ii ~ δ^{2k+1}, M̂_ii ~ δ^{k+2}
        let n = 16;
        let h = 1.0 / n as f64;
        let (p, k) = (3usize, 1i64);
        let vals: Vec<(f64, f64)> = [1e-4, 1e-5]
            .iter()
            .map(|&dl| {
                let (_, _, _, sys) = setup_1d(p, n, k, 1.0 - h + dl);
                let d = lump_rowsum(&sys.m).unwrap();
                let i = d.len() - (p - k as usize);
                (sys.k.get(i, i), d[i])
            })
            .collect();
        let sk = (vals[0].0 / vals[1].0).log10();
        let sm = (vals[0].1 / vals[1].1).log10();
        assert!((sk - (2 * k + 1) as f64).abs() < 0.01, "{sk}");
        assert!((sm - (k + 2) as f64).abs() < 0.01, "{sm}");
    }

    #[test]
    fn dirichlet_left_removes_first() {
        let (space, dom, basis, sys) = setup_1d(2, 4, 1, 1.0);
        let d = lump_rowsum(&sys.m).unwrap();
        let r = apply_dirichlet_strong(&sys, &d, &BoundarySpec::dirichlet(&[Side::Left]), &space, &basis, &dom).unwrap();
        assert_eq!(r.n(), basis.len() - 1);
        assert_eq!(r.globals[0], 1);
    }

    #[test]
    fn dirichlet_on_trimmed_side_rejected() {
        let (space, dom, basis, sys) = setup_1d(2, 4, 1, 0.9);
        let d = lump_rowsum(&sys.m).unwrap();
        let err = apply_dirichlet_strong(&sys, &d, &BoundarySpec::dirichlet(&[Side::Right]), &space, &basis, &dom);
        assert_eq!(err, Err(Error::TrimmedDirichletSide("right".into())));
    }

    #[test]
    fn neumann_kernel() {
        let (space, dom, basis, sys) = setup_1d(3, 8, 2, 0.93);
        let d = lump_rowsum(&sys.m).unwrap();
        let r = apply_dirichlet_strong(&sys, &d, &BoundarySpec::pure_neumann(), &space, &basis, &dom).unwrap();
        assert_eq!(r.n(), basis.len());
        assert!(r.deflate);
        assert!(kernel_residual(&r.k) < 1e-12);
    }
}
