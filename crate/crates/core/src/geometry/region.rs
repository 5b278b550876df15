//! Planar regions built from half-planes, convex polygons and discs, and
//! exact decomposition of a convex polygon into its parts inside and
//! outside a region.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub type Point = [f64; 2];
/// Convex polygon, counter-clockwise.
pub type Polygon = Vec<Point>;

#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    /// `{x : (x - point) . normal >= 0}`.
    HalfPlane { point: Point, normal: Point },
    /// `{x : x[axis] <= value}` if `below`, else `{x : x[axis] >= value}`.
    /// Cut points on the line get their coordinate set to `value` exactly.
    AxisHalfPlane { axis: usize, value: f64, below: bool },
    /// Convex polygon, counter-clockwise.
    ConvexPolygon(Polygon),
    /// Disc, clipped as its inscribed polygon.
    Disc { center: Point, radius: f64, polygon: Polygon },
    Complement(Box<Region>),
    Intersection(Vec<Region>),
    Union(Vec<Region>),
}

/// A single oriented cutting line.
#[derive(Debug, Clone, Copy)]
enum Cut {
    General { point: Point, normal: Point },
    Axis { axis: usize, value: f64, below: bool },
}

impl Cut {
    fn eval(&self, x: &Point) -> f64 {
        match *self {
            Cut::General { point, normal } => (x[0] - point[0]) * normal[0] + (x[1] - point[1]) * normal[1],
            Cut::Axis { axis, value, below } => {
                if below {
                    value - x[axis]
                } else {
                    x[axis] - value
                }
            }
        }
    }

    fn flip(&self) -> Cut {
        match *self {
            Cut::General { point, normal } => Cut::General {
                point,
                normal: [-normal[0], -normal[1]],
            },
            Cut::Axis { axis, value, below } => Cut::Axis {
                axis,
                value,
                below: !below,
            },
        }
    }

    fn crossing(&self, a: &Point, b: &Point, sa: f64, sb: f64) -> Point {
        let t = sa / (sa - sb);
        let mut p = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
        if let Cut::Axis { axis, value, .. } = *self {
            p[axis] = value;
        }
        p
    }

    /// Sutherland-Hodgman clip of a convex polygon against this half-plane.
    fn clip(&self, poly: &[Point]) -> Polygon {
        let s: Vec<f64> = poly.iter().map(|x| self.eval(x)).collect();
        if s.iter().all(|&v| v >= 0.0) {
            return poly.to_vec();
        }
        if s.iter().all(|&v| v <= 0.0) {
            return Vec::new();
        }
        let n = poly.len();
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let j = (i + 1) % n;
            if s[i] >= 0.0 {
                out.push(poly[i]);
            }
            if (s[i] > 0.0 && s[j] < 0.0) || (s[i] < 0.0 && s[j] > 0.0) {
                out.push(self.crossing(&poly[i], &poly[j], s[i], s[j]));
            }
        }
        out
    }
}

fn edge_cuts(poly: &[Point]) -> impl Iterator<Item = Cut> + '_ {
    let n = poly.len();
    (0..n).map(move |i| {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        // inward normal of a counter-clockwise edge
        Cut::General {
            point: a,
            normal: [-(b[1] - a[1]), b[0] - a[0]],
        }
    })
}

pub fn polygon_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s
}

fn bbox(poly: &[Point]) -> (Point, Point) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in poly {
        for l in 0..2 {
            lo[l] = lo[l].min(p[l]);
            hi[l] = hi[l].max(p[l]);
        }
    }
    (lo, hi)
}

fn boxes_overlap(a: &(Point, Point), b: &(Point, Point)) -> bool {
    (0..2).all(|l| a.0[l] < b.1[l] && b.0[l] < a.1[l])
}

/// Number of chords so that an inscribed polygon stays within `tol` of a
/// circle of radius `radius`.
pub fn disc_segments(radius: f64, tol: f64) -> usize {
    let half_angle = (1.0 - (tol / radius).min(1.0)).acos();
    ((PI / half_angle).ceil() as usize).max(8)
}

impl Region {
    pub fn half_plane(point: Point, normal: Point) -> Self {
        Region::HalfPlane { point, normal }
    }

    pub fn x_below(value: f64) -> Self {
        Region::AxisHalfPlane {
            axis: 0,
            value,
            below: true,
        }
    }

    pub fn y_below(value: f64) -> Self {
        Region::AxisHalfPlane {
            axis: 1,
            value,
            below: true,
        }
    }

    /// Convex polygon; the vertex order is normalized to counter-clockwise.
    pub fn convex_polygon(mut vertices: Polygon) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::param("polygon", "need at least three vertices"));
        }
        let a = polygon_area(&vertices);
        if a == 0.0 {
            return Err(Error::param("polygon", "zero area"));
        }
        if a < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        for i in 0..n {
            let (p, q, r) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
            let cross = (q[0] - p[0]) * (r[1] - q[1]) - (q[1] - p[1]) * (r[0] - q[0]);
            if cross < 0.0 {
                return Err(Error::param("polygon", "vertices do not form a convex polygon"));
            }
        }
        Ok(Region::ConvexPolygon(vertices))
    }

    /// Disc approximated by an inscribed polygon with sagitta at most `tol`.
    pub fn disc(center: Point, radius: f64, tol: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::param("radius", format!("{radius} is not positive")));
        }
        if !(tol > 0.0) {
            return Err(Error::param("sagitta_tol", format!("{tol} is not positive")));
        }
        let n = disc_segments(radius, tol);
        let polygon = (0..n)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / n as f64;
                [center[0] + radius * t.cos(), center[1] + radius * t.sin()]
            })
            .collect();
        Ok(Region::Disc {
            center,
            radius,
            polygon,
        })
    }

    pub fn complement(self) -> Self {
        Region::Complement(Box::new(self))
    }

    /// Level function: positive inside, negative outside. Discs use the
    /// exact circle.
    pub fn level(&self, x: &Point) -> f64 {
        match self {
            Region::HalfPlane { point, normal } => {
                let nn = normal[0].hypot(normal[1]);
                Cut::General {
                    point: *point,
                    normal: *normal,
                }
                .eval(x)
                    / nn
            }
            Region::AxisHalfPlane { axis, value, below } => Cut::Axis {
                axis: *axis,
                value: *value,
                below: *below,
            }
            .eval(x),
            Region::ConvexPolygon(poly) => edge_cuts(poly)
                .map(|c| match c {
                    Cut::General { normal, .. } => c.eval(x) / normal[0].hypot(normal[1]),
                    Cut::Axis { .. } => c.eval(x),
                })
                .fold(f64::INFINITY, f64::min),
            Region::Disc { center, radius, .. } => radius - (x[0] - center[0]).hypot(x[1] - center[1]),
            Region::Complement(r) => -r.level(x),
            Region::Intersection(rs) => rs.iter().map(|r| r.level(x)).fold(f64::INFINITY, f64::min),
            Region::Union(rs) => rs.iter().map(|r| r.level(x)).fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.level(x) > 0.0
    }

    /// Boundary polylines of the curved or polygonal primitives.
    pub fn boundary_polylines(&self) -> Vec<Polygon> {
        match self {
            Region::ConvexPolygon(p) | Region::Disc { polygon: p, .. } => vec![p.clone()],
            Region::Complement(r) => r.boundary_polylines(),
            Region::Intersection(rs) | Region::Union(rs) => rs.iter().flat_map(|r| r.boundary_polylines()).collect(),
            _ => Vec::new(),
        }
    }

    fn convex_pieces_inside(poly: &[Point], cuts: impl Iterator<Item = Cut>) -> Vec<Polygon> {
        let mut cur = poly.to_vec();
        for c in cuts {
            cur = c.clip(&cur);
            if cur.is_empty() {
                return Vec::new();
            }
        }
        vec![cur]
    }

    fn convex_pieces_outside(poly: &[Point], cuts: impl Iterator<Item = Cut>, min_area: f64) -> Vec<Polygon> {
        let mut out = Vec::new();
        let mut cur = poly.to_vec();
        for c in cuts {
            let o = c.flip().clip(&cur);
            if polygon_area(&o) > min_area {
                out.push(o);
            }
            cur = c.clip(&cur);
            if cur.is_empty() {
                break;
            }
        }
        out
    }

    /// Convex pieces of `poly ∩ self`; pieces with area `<= min_area` are
    /// dropped.
    pub fn inside(&self, poly: &[Point], min_area: f64) -> Vec<Polygon> {
        let keep = |v: Vec<Polygon>| v.into_iter().filter(|p| polygon_area(p) > min_area).collect();
        match self {
            Region::HalfPlane { point, normal } => keep(Self::convex_pieces_inside(
                poly,
                std::iter::once(Cut::General {
                    point: *point,
                    normal: *normal,
                }),
            )),
            Region::AxisHalfPlane { axis, value, below } => keep(Self::convex_pieces_inside(
                poly,
                std::iter::once(Cut::Axis {
                    axis: *axis,
                    value: *value,
                    below: *below,
                }),
            )),
            Region::ConvexPolygon(q) | Region::Disc { polygon: q, .. } => {
                if !boxes_overlap(&bbox(q), &bbox(poly)) {
                    return Vec::new();
                }
                keep(Self::convex_pieces_inside(poly, edge_cuts(q)))
            }
            Region::Complement(r) => r.outside(poly, min_area),
            Region::Intersection(rs) => {
                let mut pieces = vec![poly.to_vec()];
                for r in rs {
                    pieces = pieces.iter().flat_map(|p| r.inside(p, min_area)).collect();
                    if pieces.is_empty() {
                        break;
                    }
                }
                pieces
            }
            Region::Union(rs) => {
                let mut out = Vec::new();
                let mut rest = vec![poly.to_vec()];
                for r in rs {
                    let mut next = Vec::new();
                    for p in &rest {
                        out.extend(r.inside(p, min_area));
                        next.extend(r.outside(p, min_area));
                    }
                    rest = next;
                    if rest.is_empty() {
                        break;
                    }
                }
                out
            }
        }
    }

    /// Convex pieces of `poly \ self`.
    pub fn outside(&self, poly: &[Point], min_area: f64) -> Vec<Polygon> {
        match self {
            Region::HalfPlane { .. } | Region::AxisHalfPlane { .. } => {
                let cut = match *self {
                    Region::HalfPlane { point, normal } => Cut::General { point, normal },
                    Region::AxisHalfPlane { axis, value, below } => Cut::Axis { axis, value, below },
                    _ => unreachable!(),
                };
                let o = cut.flip().clip(poly);
                if polygon_area(&o) > min_area {
                    vec![o]
                } else {
                    Vec::new()
                }
            }
            Region::ConvexPolygon(q) | Region::Disc { polygon: q, .. } => {
                if !boxes_overlap(&bbox(q), &bbox(poly)) {
                    return vec![poly.to_vec()];
                }
                Self::convex_pieces_outside(poly, edge_cuts(q), min_area)
            }
            Region::Complement(r) => r.inside(poly, min_area),
            Region::Intersection(rs) => {
                let mut out = Vec::new();
                let mut rest = vec![poly.to_vec()];
                for r in rs {
                    let mut next = Vec::new();
                    for p in &rest {
                        out.extend(r.outside(p, min_area));
                        next.extend(r.inside(p, min_area));
                    }
                    rest = next;
                    if rest.is_empty() {
                        break;
                    }
                }
                out
            }
            Region::Union(rs) => {
                let mut pieces = vec![poly.to_vec()];
                for r in rs {
                    pieces = pieces.iter().flat_map(|p| r.outside(p, min_area)).collect();
                    if pieces.is_empty() {
                        break;
                    }
                }
                pieces
            }
        }
    }
}

/// Fan triangulation of a convex polygon from its first vertex.
pub fn fan_triangulate(poly: &[Point]) -> Vec<[Point; 3]> {
    (1..poly.len().saturating_sub(1)).map(|i| [poly[0], poly[i], poly[i + 1]]).collect()
}

/// Bounding box of an axis-aligned rectangle, if `poly` is one.
pub fn as_rectangle(poly: &[Point]) -> Option<(Point, Point)> {
    let (lo, hi) = bbox(poly);
    let corner = |p: &Point| (p[0] == lo[0] || p[0] == hi[0]) && (p[1] == lo[1] || p[1] == hi[1]);
    if poly.len() == 4 && poly.iter().all(corner) {
        let a = polygon_area(poly);
        let box_area = (hi[0] - lo[0]) * (hi[1] - lo[1]);
        if a == box_area {
            return Some((lo, hi));
        }
    }
    None
}

pub fn rectangle(lo: Point, hi: Point) -> Polygon {
    vec![lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(pieces: &[Polygon]) -> f64 {
        pieces.iter().map(|p| polygon_area(p)).sum()
    }

    #[test]
    fn half_plane_through_edge_midpoints() {
        // line through (0.5, 0) and (0, 0.5), keeping the corner at the origin
        let sq = rectangle([0.0, 0.0], [1.0, 1.0]);
        let r = Region::half_plane([0.5, 0.0], [-1.0, -1.0]);
        let a = total(&r.inside(&sq, 0.0));
        assert!((a - 0.125).abs() < 1e-15);
        let b = total(&r.outside(&sq, 0.0));
        assert!((a + b - 1.0).abs() < 1e-15);
        assert!(r.inside(&sq, 0.0)[0].len() <= 5);
    }

    #[test]
    fn axis_cut_snaps() {
        let sq = rectangle([0.0, 0.0], [1.0, 1.0]);
        let r = Region::x_below(0.3);
        let p = &r.inside(&sq, 0.0)[0];
        assert!(p.iter().all(|v| v[0] == 0.0 || v[0] == 0.3));
        assert_eq!(as_rectangle(p), Some(([0.0, 0.0], [0.3, 1.0])));
    }

    #[test]
    fn polygon_complement_union_intersection() {
        let sq = rectangle([0.0, 0.0], [1.0, 1.0]);
        let tri = Region::convex_polygon(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!((total(&tri.inside(&sq, 0.0)) - 0.5).abs() < 1e-15);
        assert!((total(&tri.outside(&sq, 0.0)) - 0.5).abs() < 1e-15);
        let c = tri.clone().complement();
        assert!((total(&c.inside(&sq, 0.0)) - 0.5).abs() < 1e-15);
        let u = Region::Union(vec![tri.clone(), Region::x_below(0.5)]);
        // triangle plus the part of the left half above the diagonal: 0.5 + 0.125
        assert!((total(&u.inside(&sq, 0.0)) - 0.625).abs() < 1e-15);
        assert!((total(&u.outside(&sq, 0.0)) - 0.375).abs() < 1e-15);
        let i = Region::Intersection(vec![tri, Region::x_below(0.5)]);
        assert!((total(&i.inside(&sq, 0.0)) - 0.375).abs() < 1e-15);
        assert!((total(&i.outside(&sq, 0.0)) - 0.625).abs() < 1e-15);
    }

    #[test]
    fn disc_area_within_sagitta() {
        let tol = 1e-6;
        let d = Region::disc([0.5, 0.5], 0.3, tol).unwrap();
        let sq = rectangle([0.0, 0.0], [1.0, 1.0]);
        let a = total(&d.inside(&sq, 0.0));
        let exact = PI * 0.09;
        // inscribed polygon loses at most perimeter * sagitta
        assert!(a < exact && exact - a < 2.0 * PI * 0.3 * tol);
        assert!(d.contains(&[0.5, 0.5]) && !d.contains(&[0.0, 0.0]));
    }

    #[test]
    fn rejects_nonconvex() {
        assert!(Region::convex_polygon(vec![[0.0, 0.0], [1.0, 0.0], [0.2, 0.2], [0.0, 1.0]]).is_err());
        assert!(Region::convex_polygon(vec![[0.0, 0.0], [1.0, 0.0]]).is_err());
        // clockwise input is accepted and reoriented
        let r = Region::convex_polygon(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]).unwrap();
        if let Region::ConvexPolygon(p) = r {
            assert!(polygon_area(&p) > 0.0);
        }
    }

    #[test]
    fn fan_triangles_cover_polygon() {
        let p = vec![[0.0, 0.0], [1.0, 0.0], [1.5, 0.5], [1.0, 1.0], [0.0, 1.0]];
        let tris = fan_triangulate(&p);
        assert_eq!(tris.len(), 3);
        let a: f64 = tris.iter().map(|t| polygon_area(t)).sum();
        assert!((a - polygon_area(&p)).abs() < 1e-15);
    }
}
