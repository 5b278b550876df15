use faer::Mat;
use proptest::prelude::*;

use trimspec::assembly::{assemble, lump_rowsum, QuadOrders};
use trimspec::bspline::SplineSpace1D;
use trimspec::dense::{faer_eig, jacobi_eig};
use trimspec::experiments::{build_geometry, make_space, GeometryId};
use trimspec::geometry::region::polygon_area;
use trimspec::geometry::{active_basis, classify_elements, partition_good_bad, Region, DROP_TOL};
use trimspec::quadrature::{gauss_rule, triangle_points};
use trimspec::sparse::SymCsr;
use trimspec::spectra::{bound_report, gen_eig_lumped};

/// Textbook recursive Cox-de Boor, half-open intervals, last interval closed.
fn cox_de_boor(t: &[f64], i: usize, p: usize, x: f64) -> f64 {
    if p == 0 {
        let last = *t.last().unwrap();
        let inside = t[i] <= x && x < t[i + 1];
        let at_end = x == last && t[i] < t[i + 1] && t[i + 1] == last;
        return if inside || at_end { 1.0 } else { 0.0 };
    }
    let mut v = 0.0;
    if t[i + p] > t[i] {
        v += (x - t[i]) / (t[i + p] - t[i]) * cox_de_boor(t, i, p - 1, x);
    }
    if t[i + p + 1] > t[i + 1] {
        v += (t[i + p + 1] - x) / (t[i + p + 1] - t[i + 1]) * cox_de_boor(t, i + 1, p - 1, x);
    }
    v
}

fn space_strategy() -> impl Strategy<Value = (usize, usize, i64)> {
    (1usize..=5, 1usize..=9).prop_flat_map(|(p, n)| (Just(p), Just(n), 0..p as i64))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basis_matches_recursive_definition((p, n, k) in space_strategy(), x in 0.0f64..=1.0) {
        let s = SplineSpace1D::uniform(p, n, k).unwrap();
        let e = s.eval_basis(x, 0).unwrap();
        for i in 0..s.dim() {
            let want = cox_de_boor(s.knots(), i, p, x);
            let got = if e.indices().contains(&i) { e.values[i - e.first] } else { 0.0 };
            prop_assert!((want - got).abs() < 1e-13, "i={i} want={want} got={got}");
        }
    }

    #[test]
    fn partition_of_unity_and_positivity((p, n, k) in space_strategy(), x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
        let s = SplineSpace1D::uniform(p, n, k).unwrap();
        let e = s.eval_basis(x, 1).unwrap();
        prop_assert!((e.values.iter().sum::<f64>() - 1.0).abs() <= 1e-13);
        prop_assert!(e.values.iter().all(|&v| v >= -1e-15));
        prop_assert!(e.derivs.unwrap().iter().sum::<f64>().abs() <= 1e-10 * n as f64);
        let t = make_space(2, n, p, k).unwrap();
        let e = t.eval(&[x, y], 0).unwrap();
        prop_assert!((e.values.iter().sum::<f64>() - 1.0).abs() <= 1e-13);
    }

    #[test]
    fn derivative_matches_central_difference((p, n, k) in space_strategy(), u in 0.05f64..0.95) {
        let s = SplineSpace1D::uniform(p, n, k).unwrap();
        let e = s.find_element(u).unwrap();
        let (a, b) = s.element(e);
        // stay inside one element so every function is a polynomial there
        let x = a + (b - a) * (0.25 + 0.5 * (u * 7.0).fract());
        let h = 1e-6 * (b - a);
        let d = s.eval_on_element(e, x, 1).derivs.unwrap();
        let plus = s.eval_on_element(e, x + h, 0).values;
        let minus = s.eval_on_element(e, x - h, 0).values;
        for j in 0..d.len() {
            let fd = (plus[j] - minus[j]) / (2.0 * h);
            prop_assert!((fd - d[j]).abs() <= 1e-5 * (1.0 + d[j].abs()) * n as f64, "{fd} vs {}", d[j]);
        }
    }

    #[test]
    fn continuity_across_breakpoints((p, n, k) in space_strategy()) {
        prop_assume!(n >= 2);
        let s = SplineSpace1D::uniform(p, n, k).unwrap();
        for e in 1..s.num_elements() {
            let x = s.element(e).0;
            let left = s.eval_on_element(e - 1, x, 1);
            let right = s.eval_on_element(e, x, 1);
            let val = |ev: &trimspec::bspline::BasisEval, i: usize, d: bool| {
                if !ev.indices().contains(&i) { return 0.0; }
                if d { ev.derivs.as_ref().unwrap()[i - ev.first] } else { ev.values[i - ev.first] }
            };
            for i in 0..s.dim() {
                prop_assert!((val(&left, i, false) - val(&right, i, false)).abs() < 1e-12);
                if k >= 1 {
                    let scale = n as f64 * p as f64;
                    prop_assert!((val(&left, i, true) - val(&right, i, true)).abs() < 1e-10 * scale);
                }
            }
        }
    }

    #[test]
    fn gauss_exact_for_polynomials(q in 1usize..=20, deg in 0usize..40) {
        prop_assume!(deg < 2 * q);
        let r = gauss_rule(q).unwrap();
        let got: f64 = r.mapped(0.0, 1.0).map(|(x, w)| w * x.powi(deg as i32)).sum();
        prop_assert!((got - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14);
    }

    #[test]
    fn triangle_rule_integrates_monomials(q in 2usize..8, a in 0u32..4, b in 0u32..4) {
        prop_assume!((a + b) as usize + 1 < 2 * q);
        // reference triangle: ∫ x^a y^b = a! b! / (a + b + 2)!
        let r = gauss_rule(q).unwrap();
        let pts = triangle_points(&r, &[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        let got: f64 = pts.iter().map(|(x, w)| w * x[0].powi(a as i32) * x[1].powi(b as i32)).sum();
        let fact = |m: u32| (1..=m).map(f64::from).product::<f64>();
        let want = fact(a) * fact(b) / fact(a + b + 2);
        prop_assert!((got - want).abs() < 1e-14);
    }
}

/// Independent Sutherland-Hodgman clip of a convex polygon by `n·(x - c) >= 0`.
fn clip(poly: &[[f64; 2]], c: [f64; 2], n: [f64; 2]) -> Vec<[f64; 2]> {
    let f = |x: &[f64; 2]| (x[0] - c[0]) * n[0] + (x[1] - c[1]) * n[1];
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        let (fa, fb) = (f(&a), f(&b));
        if fa >= 0.0 {
            out.push(a);
        }
        if (fa >= 0.0) != (fb >= 0.0) {
            let t = fa / (fa - fb);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn half_plane_clipping_matches_oracle(cx in -0.2f64..1.2, cy in -0.2f64..1.2, angle in 0.0f64..std::f64::consts::TAU) {
        let sq = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let n = [angle.cos(), angle.sin()];
        let r = Region::half_plane([cx, cy], n);
        let inside: f64 = r.inside(&sq, 0.0).iter().map(|p| polygon_area(p).abs()).sum();
        let outside: f64 = r.outside(&sq, 0.0).iter().map(|p| polygon_area(p).abs()).sum();
        let oracle = clip(&sq, [cx, cy], n);
        let want = if oracle.len() >= 3 { polygon_area(&oracle).abs() } else { 0.0 };
        prop_assert!((inside - want).abs() < 1e-13);
        prop_assert!((inside + outside - 1.0).abs() < 1e-13);
    }

    #[test]
    fn lumped_mass_sums_to_measure(i in 0usize..6, t in 0.0f64..1.0) {
        let ids = [
            GeometryId::SquareCorner,
            GeometryId::House,
            GeometryId::HouseWide,
            GeometryId::RotatedSquare,
            GeometryId::RotatedSquareShifted,
            GeometryId::PlateHole,
        ];
        let g = ids[i];
        let n = g.default_n();
        let h = 1.0 / n as f64;
        let delta = g.delta_limit(h) * (1e-4 + 0.9 * t);
        let geo = build_geometry(g, n, delta).unwrap();
        let space = make_space(2, n, 2, 1).unwrap();
        let mut mesh = classify_elements(&space, &geo.domain, DROP_TOL).unwrap();
        partition_good_bad(&space, &mut mesh, 0.5).unwrap();
        let basis = active_basis(&space, &mesh, 1e-14);
        let sys = assemble(&space, &basis, &mesh, QuadOrders::for_degree(2)).unwrap();
        let d = lump_rowsum(&sys.m).unwrap();
        let total: f64 = d.iter().sum();
        prop_assert!((total - mesh.total_measure()).abs() <= 1e-12 * total);
        prop_assert!((mesh.total_measure() - geo.area).abs() <= geo.area_tol.max(1e-12));
        // constants are in the kernel of the unreduced stiffness
        let k1 = sys.k.matvec(&vec![1.0; sys.k.n()]);
        let r = k1.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!(r <= 1e-10 * sys.k.norm());
    }

    #[test]
    fn more_elements_are_bad_as_gamma_grows(t in 0.0f64..1.0, g1 in 0.0f64..1.0, g2 in 0.0f64..1.0) {
        let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
        let geo = build_geometry(GeometryId::PlateHole, 20, 0.02 * (1e-3 + t)).unwrap();
        let space = make_space(2, 20, 2, 1).unwrap();
        let mut mesh = classify_elements(&space, &geo.domain, DROP_TOL).unwrap();
        partition_good_bad(&space, &mut mesh, lo).unwrap();
        let a = mesh.num_bad();
        let small_a = active_basis(&space, &mesh, 1e-14).small_globals().len();
        partition_good_bad(&space, &mut mesh, hi).unwrap();
        prop_assert!(a <= mesh.num_bad());
        prop_assert!(small_a <= active_basis(&space, &mesh, 1e-14).small_globals().len());
    }

    #[test]
    fn rayleigh_bounds_enclose_the_spectrum(seed in any::<u64>(), n in 2usize..30) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut trip = Vec::new();
        for i in 0..n {
            trip.push((i, i, 0.0));
            for j in i + 1..n.min(i + 4) {
                let v: f64 = rng.gen_range(-1.0..1.0);
                trip.push((i, j, v));
            }
        }
        // diagonal dominance makes K positive definite
        let off = SymCsr::from_upper_triplets(n, trip.clone());
        let mut full = trip;
        for i in 0..n {
            let s: f64 = off.row(i).map(|(_, v)| v.abs()).sum();
            full.push((i, i, s + rng.gen_range(0.1..2.0)));
        }
        let k = SymCsr::from_upper_triplets(n, full);
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..3.0)).collect();
        let small: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
        let b = bound_report(&k, &d, &small, false).unwrap();
        let e = gen_eig_lumped(&k, &d, false, false).unwrap();
        let tol = 1e-12 * e.lambdan;
        prop_assert!(e.lambda1 <= b.improved_bound + tol);
        // improved bound <= every diagonal ratio over the small set
        let kd = k.diag();
        for &i in &small {
            prop_assert!(b.improved_bound <= kd[i] / d[i] + tol);
        }
        prop_assert!(e.lambda1 <= b.min_ratio + tol);
        prop_assert!(b.max_ratio <= e.lambdan + tol);
        prop_assert!(e.lambdan <= b.infnorm_bound + tol);
        prop_assert!(e.lambdan <= b.sandwich_upper + tol);
    }

    #[test]
    fn jacobi_and_faer_agree(seed in any::<u64>(), n in 1usize..40) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = Mat::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let a = Mat::from_fn(n, n, |i, j| g[(i, j)] + g[(j, i)]);
        let x = jacobi_eig(&a, true).unwrap();
        let y = faer_eig(&a, false).unwrap();
        let scale = x.values.iter().map(|v| v.abs()).fold(1.0, f64::max);
        for (u, v) in x.values.iter().zip(&y.values) {
            prop_assert!((u - v).abs() <= 1e-12 * scale);
        }
        // A V = V Λ
        let v = x.vectors.unwrap();
        let av = &a * &v;
        for j in 0..n {
            for i in 0..n {
                prop_assert!((av[(i, j)] - v[(i, j)] * x.values[j]).abs() <= 1e-11 * scale);
            }
        }
    }

    #[test]
    fn coordinate_format_round_trips(seed in any::<u64>(), n in 1usize..20) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let trip: Vec<_> = (0..3 * n)
            .map(|_| {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(i..n);
                (i, j, rng.gen_range(-1e3..1e3))
            })
            .collect();
        let a = SymCsr::from_triplets(n, trip.iter().flat_map(|&(i, j, v)| {
            if i == j { vec![(i, j, v)] } else { vec![(i, j, v), (j, i, v)] }
        }).collect());
        let mut buf = Vec::new();
        a.write_coordinate(&mut buf).unwrap();
        let b = SymCsr::read_coordinate(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }
}
