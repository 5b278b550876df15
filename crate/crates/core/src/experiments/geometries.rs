//! The shipped trimmed geometries.

use std::f64::consts::PI;

use crate::assembly::{BoundarySpec, Side};
use crate::bspline::SplineSpace1D;
use crate::error::{Error, Result};
use crate::geometry::{Domain, Region, TrimConfig};
use crate::tensor::TensorSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeometryId {
    Trim1d,
    SquareCorner,
    House,
    HouseWide,
    RotatedSquare,
    RotatedSquareShifted,
    PlateHole,
}

impl GeometryId {
    pub const ALL: [GeometryId; 7] = [
        GeometryId::Trim1d,
        GeometryId::SquareCorner,
        GeometryId::House,
        GeometryId::HouseWide,
        GeometryId::RotatedSquare,
        GeometryId::RotatedSquareShifted,
        GeometryId::PlateHole,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GeometryId::Trim1d => "1d_trim",
            GeometryId::SquareCorner => "square_corner",
            GeometryId::House => "house",
            GeometryId::HouseWide => "house_wide",
            GeometryId::RotatedSquare => "rotated_square",
            GeometryId::RotatedSquareShifted => "rotated_square_shifted",
            GeometryId::PlateHole => "plate_hole",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::param("geometry", format!("unknown geometry `{s}`")))
    }

    pub fn dimension(&self) -> usize {
        match self {
            GeometryId::Trim1d => 1,
            _ => 2,
        }
    }

    pub fn default_n(&self) -> usize {
        match self {
            GeometryId::Trim1d => 128,
            GeometryId::PlateHole => 20,
            _ => 16,
        }
    }

    /// Whether `N` is a free parameter.
    pub fn n_is_fixed(&self) -> bool {
        matches!(self, GeometryId::PlateHole)
    }

    /// Exclusive upper bound on δ for mesh size `h`.
    pub fn delta_limit(&self, h: f64) -> f64 {
        match self {
            GeometryId::Trim1d | GeometryId::SquareCorner => h,
            _ => h / 2.0,
        }
    }

    pub fn default_deltas(&self) -> Vec<f64> {
        match self {
            GeometryId::Trim1d => vec![1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8],
            _ => log_spaced(1e-2, 1e-5, 7),
        }
    }

    /// Trim configurations the geometry is built to produce.
    pub fn configurations(&self) -> Vec<TrimConfig> {
        match self {
            GeometryId::Trim1d => vec![TrimConfig::OneD],
            GeometryId::SquareCorner => vec![TrimConfig::A, TrimConfig::C],
            GeometryId::House | GeometryId::RotatedSquare => vec![TrimConfig::B, TrimConfig::C],
            GeometryId::HouseWide | GeometryId::RotatedSquareShifted => vec![TrimConfig::B],
            GeometryId::PlateHole => vec![TrimConfig::C],
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            GeometryId::Trim1d => "(0, 1-h+delta), Dirichlet at x=0",
            GeometryId::SquareCorner => "(0, 1-h+delta)^2, Dirichlet on left and bottom",
            GeometryId::House => "unit-width house, 45 degree roof, apex on a vertical grid line, Dirichlet on bottom",
            GeometryId::HouseWide => "house with the apex between vertical grid lines, Dirichlet on bottom",
            GeometryId::RotatedSquare => "square rotated 45 degrees, corners delta past grid lines, pure Neumann",
            GeometryId::RotatedSquareShifted => "rotated square shifted by h/2 horizontally, pure Neumann",
            GeometryId::PlateHole => "unit square minus a central disc and four corner discs, N fixed to 20, Dirichlet on outer edges",
        }
    }
}

impl std::fmt::Display for GeometryId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `count` values from `hi` down to `lo`, equally spaced in `log10`.
pub fn log_spaced(hi: f64, lo: f64, count: usize) -> Vec<f64> {
    let (a, b) = (hi.log10(), lo.log10());
    (0..count)
        .map(|j| 10f64.powf(a + (b - a) * j as f64 / (count - 1) as f64))
        .collect()
}

/// A trimmed domain with its boundary conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    pub id: GeometryId,
    pub n: usize,
    pub delta: f64,
    pub domain: Domain,
    pub boundary: BoundarySpec,
    /// Exact `|Ω|` (curved boundaries taken exactly).
    pub area: f64,
    /// Allowed deviation of the computed measure from `area`.
    pub area_tol: f64,
}

fn check_delta(id: GeometryId, n: usize, delta: f64) -> Result<f64> {
    if n < 4 {
        return Err(Error::param("N", format!("{n} is too small (need at least 4)")));
    }
    let h = 1.0 / n as f64;
    if !(delta > 0.0 && delta < id.delta_limit(h)) {
        return Err(Error::param(
            "delta",
            format!("{delta:e} is outside (0, {:e}) for {id} with N = {n}", id.delta_limit(h)),
        ));
    }
    Ok(h)
}

pub fn geometry_1d_trim(n: usize, delta: f64) -> Result<Geometry> {
    let h = check_delta(GeometryId::Trim1d, n, delta)?;
    let b = 1.0 - h + delta;
    Ok(Geometry {
        id: GeometryId::Trim1d,
        n,
        delta,
        domain: Domain::Interval(0.0, b),
        boundary: BoundarySpec::dirichlet(&[Side::Left]),
        area: b,
        area_tol: 1e-14,
    })
}

pub fn geometry_square_corner(n: usize, delta: f64) -> Result<Geometry> {
    let h = check_delta(GeometryId::SquareCorner, n, delta)?;
    let b = 1.0 - h + delta;
    Ok(Geometry {
        id: GeometryId::SquareCorner,
        n,
        delta,
        domain: Domain::Planar(Region::Intersection(vec![Region::x_below(b), Region::y_below(b)])),
        boundary: BoundarySpec::dirichlet(&[Side::Left, Side::Bottom]),
        area: b * b,
        area_tol: 1e-12,
    })
}

/// Rectangle `[0,1] x [0,e]` with a 45 degree gable. The horizontal grid line
/// `y_g` cuts the roof `delta` below the apex, so a triangle of height
/// `delta` and base `2 delta` sticks into the element row above `y_g`.
pub fn geometry_house(n: usize, delta: f64, wide: bool) -> Result<Geometry> {
    let id = if wide { GeometryId::HouseWide } else { GeometryId::House };
    let h = check_delta(id, n, delta)?;
    let yg = (0.75 * n as f64).round() / n as f64;
    let eave = yg - 0.4 * h;
    let w = 0.4 * h + delta;
    let xa = if wide { 0.5 + h / 2.0 } else { 0.5 };
    let roof = Region::convex_polygon(vec![[xa - w, eave], [xa + w, eave], [xa, yg + delta]])?;
    Ok(Geometry {
        id,
        n,
        delta,
        domain: Domain::Planar(Region::Union(vec![Region::y_below(eave), roof])),
        boundary: BoundarySpec::dirichlet(&[Side::Bottom]),
        area: eave + w * w,
        area_tol: 1e-12,
    })
}

/// Square rotated by 45 degrees with half-diagonal `floor(3N/8) h + delta`
/// centred at `(cx, 1/2)`; `cx = 1/2`, or `1/2 + h/2` when shifted.
pub fn geometry_rotated_square(n: usize, delta: f64, shifted: bool) -> Result<Geometry> {
    let id = if shifted {
        GeometryId::RotatedSquareShifted
    } else {
        GeometryId::RotatedSquare
    };
    let h = check_delta(id, n, delta)?;
    if n % 2 != 0 {
        return Err(Error::param("N", format!("{n} must be even so that x = 1/2 is a grid line")));
    }
    let r = (3 * n / 8) as f64 * h + delta;
    let cx = if shifted { 0.5 + h / 2.0 } else { 0.5 };
    let poly = Region::convex_polygon(vec![[cx + r, 0.5], [cx, 0.5 + r], [cx - r, 0.5], [cx, 0.5 - r]])?;
    Ok(Geometry {
        id,
        n,
        delta,
        domain: Domain::Planar(poly),
        boundary: BoundarySpec::pure_neumann(),
        area: 2.0 * r * r,
        area_tol: 1e-12,
    })
}

/// Sagitta tolerance used for the discs of the plate.
pub fn plate_sagitta(delta: f64) -> f64 {
    (1e-2 * delta).min(1e-6)
}

/// Unit square minus a central disc of radius `sqrt(1/25 + h²) - delta` and
/// four corner discs of radius `1/4 - delta`, with `h = 1/20`.
pub fn geometry_plate_hole(delta: f64) -> Result<Geometry> {
    let n = 20;
    let h = check_delta(GeometryId::PlateHole, n, delta)?;
    let tol = plate_sagitta(delta);
    let r_in = (0.04 + h * h).sqrt() - delta;
    let r_c = 0.25 - delta;
    let mut parts = vec![Region::disc([0.5, 0.5], r_in, tol)?.complement()];
    for c in [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]] {
        parts.push(Region::disc(c, r_c, tol)?.complement());
    }
    let area = 1.0 - PI * r_in * r_in - PI * r_c * r_c;
    // inscribed chords lose at most (perimeter x sagitta) of each disc
    let area_tol = 2.0 * PI * (r_in + r_c) * tol;
    Ok(Geometry {
        id: GeometryId::PlateHole,
        n,
        delta,
        domain: Domain::Planar(Region::Intersection(parts)),
        boundary: BoundarySpec::dirichlet(&[Side::Left, Side::Right, Side::Bottom, Side::Top]),
        area,
        area_tol,
    })
}

pub fn build_geometry(id: GeometryId, n: usize, delta: f64) -> Result<Geometry> {
    match id {
        GeometryId::Trim1d => geometry_1d_trim(n, delta),
        GeometryId::SquareCorner => geometry_square_corner(n, delta),
        GeometryId::House => geometry_house(n, delta, false),
        GeometryId::HouseWide => geometry_house(n, delta, true),
        GeometryId::RotatedSquare => geometry_rotated_square(n, delta, false),
        GeometryId::RotatedSquareShifted => geometry_rotated_square(n, delta, true),
        GeometryId::PlateHole => {
            if n != 20 {
                return Err(Error::param("N", format!("plate_hole uses N = 20, got {n}")));
            }
            geometry_plate_hole(delta)
        }
    }
}

/// Uniform spline space on the unit interval or square.
pub fn make_space(dimension: usize, n: usize, p: usize, k: i64) -> Result<TensorSpace> {
    let s = SplineSpace1D::uniform(p, n, k)?;
    Ok(if dimension == 1 {
        TensorSpace::univariate(s)
    } else {
        TensorSpace::square(s)
    })
}
