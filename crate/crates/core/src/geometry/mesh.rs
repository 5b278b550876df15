//! Active mesh: element status, cut measures, good/bad flags, integration
//! cells and the active basis.

use super::region::{as_rectangle, fan_triangulate, polygon_area, rectangle, Point, Region};
use crate::error::{Error, Result};
use crate::tensor::TensorSpace;

/// Physical domain inside the parametric box.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// `(a, b)` in 1D.
    Interval(f64, f64),
    /// A planar region in 2D.
    Planar(Region),
}

impl Domain {
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Domain::Interval(a, b) => x[0] > *a && x[0] < *b,
            Domain::Planar(r) => r.contains(&[x[0], x[1]]),
        }
    }
}

/// Integration cell inside an element.
#[derive(Debug, Clone, PartialEq)]
pub enum QuadCell {
    Segment { a: f64, b: f64 },
    Rect { lo: Point, hi: Point },
    Triangle([Point; 3]),
}

impl QuadCell {
    pub fn measure(&self) -> f64 {
        match self {
            QuadCell::Segment { a, b } => b - a,
            QuadCell::Rect { lo, hi } => (hi[0] - lo[0]) * (hi[1] - lo[1]),
            QuadCell::Triangle(t) => polygon_area(t).abs(),
        }
    }

    pub fn vertices(&self) -> Vec<Point> {
        match self {
            QuadCell::Segment { a, b } => vec![[*a, 0.0], [*b, 0.0]],
            QuadCell::Rect { lo, hi } => rectangle(*lo, *hi),
            QuadCell::Triangle(t) => t.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementStatus {
    Interior,
    Cut,
    Outside,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementInfo {
    pub status: ElementStatus,
    /// `|T ∩ Ω|`.
    pub measure: f64,
    pub good: bool,
    pub cells: Vec<QuadCell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActiveMesh {
    pub elements: Vec<ElementInfo>,
    pub gamma: f64,
}

/// Relative measure below which a cut element is dropped.
pub const DROP_TOL: f64 = 1e-14;

impl ActiveMesh {
    pub fn is_active(&self, e: usize) -> bool {
        self.elements[e].status != ElementStatus::Outside
    }

    pub fn active_elements(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.elements.len()).filter(|&e| self.is_active(e))
    }

    pub fn total_measure(&self) -> f64 {
        self.elements.iter().map(|e| e.measure).sum()
    }

    pub fn num_bad(&self) -> usize {
        self.elements.iter().filter(|e| e.status != ElementStatus::Outside && !e.good).count()
    }
}

/// Integration cells covering `T ∩ Ω` for element `e`, with the element
/// measure `|T ∩ Ω|`. Pieces below `area_tol * |T|` are discarded.
pub fn trim_cells(space: &TensorSpace, e: usize, domain: &Domain, area_tol: f64) -> Result<(Vec<QuadCell>, f64)> {
    let (lo, hi) = space.element_box(e);
    let full = space.element_measure(e);
    match domain {
        Domain::Interval(a, b) => {
            let x0 = lo[0].max(*a);
            let x1 = hi[0].min(*b);
            if x1 - x0 <= area_tol * full {
                return Ok((Vec::new(), 0.0));
            }
            Ok((vec![QuadCell::Segment { a: x0, b: x1 }], x1 - x0))
        }
        Domain::Planar(region) => {
            if space.dimension() != 2 {
                return Err(Error::DimensionMismatch("planar region on a univariate space".into()));
            }
            let pieces = region.inside(&rectangle(lo, hi), 1e-16 * full);
            let measure: f64 = pieces.iter().map(|p| polygon_area(p)).sum();
            if measure <= area_tol * full {
                return Ok((Vec::new(), 0.0));
            }
            if (measure - full).abs() <= 1e-14 * full {
                return Ok((vec![QuadCell::Rect { lo, hi }], full));
            }
            let mut cells = Vec::new();
            for p in &pieces {
                match as_rectangle(p) {
                    Some((l, h)) => cells.push(QuadCell::Rect { lo: l, hi: h }),
                    None => cells.extend(fan_triangulate(p).into_iter().map(QuadCell::Triangle)),
                }
            }
            Ok((cells, measure))
        }
    }
}

/// Classifies every element of the background grid against the domain.
pub fn classify_elements(space: &TensorSpace, domain: &Domain, area_tol: f64) -> Result<ActiveMesh> {
    if !(area_tol > 0.0) {
        return Err(Error::param("area_tol", format!("{area_tol} must be positive")));
    }
    let mut elements = Vec::with_capacity(space.num_elements());
    for e in 0..space.num_elements() {
        let full = space.element_measure(e);
        let (cells, measure) = trim_cells(space, e, domain, area_tol)?;
        let status = if cells.is_empty() {
            ElementStatus::Outside
        } else if (measure - full).abs() <= 1e-14 * full {
            ElementStatus::Interior
        } else {
            ElementStatus::Cut
        };
        let (cells, measure) = match status {
            ElementStatus::Interior => {
                let (lo, hi) = space.element_box(e);
                let cell = if space.dimension() == 1 {
                    QuadCell::Segment { a: lo[0], b: hi[0] }
                } else {
                    QuadCell::Rect { lo, hi }
                };
                (vec![cell], full)
            }
            _ => (cells, measure),
        };
        elements.push(ElementInfo {
            status,
            measure,
            good: status != ElementStatus::Outside,
            cells,
        });
    }
    if elements.iter().all(|e| e.status == ElementStatus::Outside) {
        return Err(Error::EmptyDomain);
    }
    let mut mesh = ActiveMesh { elements, gamma: 0.0 };
    partition_good_bad(space, &mut mesh, 0.5)?;
    Ok(mesh)
}

/// Flags active elements with `|T ∩ Ω| >= γ |T|` as good.
pub fn partition_good_bad(space: &TensorSpace, mesh: &mut ActiveMesh, gamma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::param("gamma", format!("{gamma} is outside [0, 1]")));
    }
    for (e, info) in mesh.elements.iter_mut().enumerate() {
        info.good = info.status != ElementStatus::Outside && info.measure >= gamma * space.element_measure(e);
    }
    mesh.gamma = gamma;
    Ok(())
}

/// Active functions with their support measures and small/large flags.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveBasisSet {
    /// Global indices, ascending.
    pub indices: Vec<usize>,
    /// `s_i = |supp φ_i ∩ Ω|`.
    pub support_measure: Vec<f64>,
    /// Small functions have no good element in their support.
    pub small: Vec<bool>,
    position: Vec<Option<usize>>,
}

impl ActiveBasisSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Position of a global function in the active numbering.
    pub fn position(&self, global: usize) -> Option<usize> {
        self.position.get(global).copied().flatten()
    }

    pub fn small_globals(&self) -> Vec<usize> {
        self.indices.iter().zip(&self.small).filter(|(_, &s)| s).map(|(&i, _)| i).collect()
    }
}

/// Determines the active functions. Functions with `s_i < prune_tol * h^d`
/// are discarded; `h^d` is the smallest element measure.
pub fn active_basis(space: &TensorSpace, mesh: &ActiveMesh, prune_tol: f64) -> ActiveBasisSet {
    let n = space.dim();
    let mut s = vec![0.0; n];
    let mut has_good = vec![false; n];
    for e in mesh.active_elements() {
        let info = &mesh.elements[e];
        for i in space.element_functions(e) {
            s[i] += info.measure;
            has_good[i] |= info.good;
        }
    }
    let hmin = (0..space.num_elements()).map(|e| space.element_measure(e)).fold(f64::INFINITY, f64::min);
    let mut indices = Vec::new();
    let mut support_measure = Vec::new();
    let mut small = Vec::new();
    let mut position = vec![None; n];
    for i in 0..n {
        if s[i] > 0.0 && s[i] >= prune_tol * hmin {
            position[i] = Some(indices.len());
            indices.push(i);
            support_measure.push(s[i]);
            small.push(!has_good[i]);
        }
    }
    ActiveBasisSet {
        indices,
        support_measure,
        small,
        position,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bspline::SplineSpace1D;

    fn line(p: usize, n: usize, k: i64) -> TensorSpace {
        TensorSpace::univariate(SplineSpace1D::uniform(p, n, k).unwrap())
    }

    #[test]
    fn untrimmed_is_all_interior() {
        let s = TensorSpace::square(SplineSpace1D::uniform(2, 4, 1).unwrap());
        let dom = Domain::Planar(Region::Intersection(vec![]));
        let m = classify_elements(&s, &dom, DROP_TOL).unwrap();
        for (e, info) in m.elements.iter().enumerate() {
            assert_eq!(info.status, ElementStatus::Interior);
            assert_eq!(info.measure, s.element_measure(e));
        }
        let b = active_basis(&s, &m, DROP_TOL);
        assert_eq!(b.len(), s.dim());
        assert!(b.small.iter().all(|&x| !x));
    }

    #[test]
    fn one_d_trim_last_element() {
        let n = 128;
        let h = 1.0 / n as f64;
        let delta = 1e-3;
        let s = line(3, n, 2);
        let m = classify_elements(&s, &Domain::Interval(0.0, 1.0 - h + delta), DROP_TOL).unwrap();
        let last = &m.elements[n - 1];
        assert_eq!(last.status, ElementStatus::Cut);
        assert!((last.measure - delta).abs() < 1e-15);
        assert_eq!(m.num_bad(), 1);
        assert!((m.total_measure() - (1.0 - h + delta)).abs() < 1e-14);
    }

    #[test]
    fn small_set_size_is_multiplicity() {
        let n = 8;
        let h = 1.0 / n as f64;
        for p in 1..=4 {
            for k in 0..p as i64 {
                let s = line(p, n, k);
                let m = classify_elements(&s, &Domain::Interval(0.0, 1.0 - h + h / 10.0), DROP_TOL).unwrap();
                let b = active_basis(&s, &m, DROP_TOL);
                let mult = p - k as usize;
                assert_eq!(b.small.iter().filter(|&&x| x).count(), mult, "p={p} k={k}");
            }
        }
    }

    #[test]
    fn gamma_extremes() {
        let n = 8;
        let h = 1.0 / n as f64;
        let s = TensorSpace::square(SplineSpace1D::uniform(2, n, 1).unwrap());
        let dom = Domain::Planar(Region::Intersection(vec![
            Region::x_below(1.0 - h + 0.3 * h),
            Region::y_below(1.0 - h + 0.7 * h),
        ]));
        let mut m = classify_elements(&s, &dom, DROP_TOL).unwrap();
        partition_good_bad(&s, &mut m, 0.0).unwrap();
        assert!(m.active_elements().all(|e| m.elements[e].good));
        partition_good_bad(&s, &mut m, 1.0).unwrap();
        assert!(m.active_elements().all(|e| m.elements[e].good == (m.elements[e].status == ElementStatus::Interior)));
        assert!(partition_good_bad(&s, &mut m, 1.5).is_err());
    }

    #[test]
    fn cells_match_measure() {
        let s = TensorSpace::square(SplineSpace1D::uniform(2, 4, 1).unwrap());
        let dom = Domain::Planar(Region::half_plane([0.1, 0.0], [-1.0, -0.7]).complement());
        let m = classify_elements(&s, &dom, DROP_TOL).unwrap();
        for info in &m.elements {
            let a: f64 = info.cells.iter().map(|c| c.measure()).sum();
            assert!((a - info.measure).abs() <= 1e-12 * s.element_measure(0));
        }
    }

    #[test]
    fn empty_domain_rejected() {
        let s = line(2, 4, 1);
        assert_eq!(classify_elements(&s, &Domain::Interval(2.0, 3.0), DROP_TOL), Err(Error::EmptyDomain));
        assert!(classify_elements(&s, &Domain::Interval(0.0, 1.0), 0.0).is_err());
    }
}
