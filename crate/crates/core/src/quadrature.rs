//! Gauss-Legendre rules on intervals, rectangles and (via the Duffy map)
//! triangles.

use crate::error::{Error, Result};

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let r = 0.5 * (b - a);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (c + r * x, r * w))
    }
}

/// Builds the `q`-point rule by Newton iteration on the Legendre polynomial.
pub fn gauss_rule(q: usize) -> Result<GaussRule> {
    if !(1..=32).contains(&q) {
        return Err(Error::param("q", format!("{q} is outside [1, 32]")));
    }
    let mut nodes = vec![0.0; q];
    let mut weights = vec![0.0; q];
    let m = q.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(q, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (_, d) = legendre(q, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[q - 1 - i] = x;
        weights[i] = w;
        weights[q - 1 - i] = w;
    }
    if q % 2 == 1 {
        nodes[q / 2] = 0.0;
    }
    Ok(GaussRule { nodes, weights })
}

/// `P_q(x)` and `P_q'(x)` by the three-term recurrence.
fn legendre(q: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if q == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=q {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = q as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor rule on an axis-aligned rectangle: `(point, weight)` pairs.
pub fn rect_points(rule: &GaussRule, lo: [f64; 2], hi: [f64; 2]) -> Vec<([f64; 2], f64)> {
    let xs: Vec<_> = rule.mapped(lo[0], hi[0]).collect();
    let ys: Vec<_> = rule.mapped(lo[1], hi[1]).collect();
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for &(y, wy) in &ys {
        for &(x, wx) in &xs {
            out.push(([x, y], wx * wy));
        }
    }
    out
}

/// Collapsed (Duffy) rule on the triangle `v0 v1 v2`: the unit square
/// `(u, v)` maps to `v0 + u ((1 - v)(v1 - v0) + v (v2 - v0))`.
pub fn triangle_points(rule: &GaussRule, v: &[[f64; 2]; 3]) -> Vec<([f64; 2], f64)> {
    let e1 = [v[1][0] - v[0][0], v[1][1] - v[0][1]];
    let e2 = [v[2][0] - v[0][0], v[2][1] - v[0][1]];
    let twice_area = (e1[0] * e2[1] - e1[1] * e2[0]).abs();
    let us: Vec<_> = rule.mapped(0.0, 1.0).collect();
    let mut out = Vec::with_capacity(us.len() * us.len());
    for &(t, wt) in &us {
        for &(u, wu) in &us {
            let dx = (1.0 - t) * e1[0] + t * e2[0];
            let dy = (1.0 - t) * e1[1] + t * e2[1];
            out.push(([v[0][0] + u * dx, v[0][1] + u * dy], wu * wt * twice_area * u));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_rules() {
        let r = gauss_rule(1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - 2.0).abs() < 1e-15);
        let r = gauss_rule(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + s).abs() < 1e-15 && (r.nodes[1] - s).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15 && (r.weights[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_order() {
        assert!(gauss_rule(0).is_err());
        assert!(gauss_rule(33).is_err());
    }

    #[test]
    fn x6_with_four_points() {
        let r = gauss_rule(4).unwrap();
        let v: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(6)).sum();
        assert!((v - 2.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn exact_up_to_degree_2q_minus_1() {
        for q in 1..=32 {
            let r = gauss_rule(q).unwrap();
            let wsum: f64 = r.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-14, "q={q}");
            for deg in 0..2 * q {
                let v: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((v - exact).abs() < 1e-14, "q={q} deg={deg}: {v} vs {exact}");
            }
        }
    }

    #[test]
    fn triangle_monomials() {
        // integral of x^a y^b over the unit right triangle is a! b! / (a+b+2)!
        let r = gauss_rule(5).unwrap();
        let tri = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let pts = triangle_points(&r, &tri);
        let fact = |n: u32| (1..=n).product::<u32>() as f64;
        for a in 0..=4u32 {
            for b in 0..=(8 - a).min(4) {
                let v: f64 = pts.iter().map(|(x, w)| w * x[0].powi(a as i32) * x[1].powi(b as i32)).sum();
                let exact = fact(a) * fact(b) / fact(a + b + 2);
                assert!((v - exact).abs() < 1e-15, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn rectangle_area() {
        let r = gauss_rule(3).unwrap();
        let pts = rect_points(&r, [0.5, -1.0], [2.0, 3.0]);
        let a: f64 = pts.iter().map(|p| p.1).sum();
        assert!((a - 6.0).abs() < 1e-14);
    }
}
