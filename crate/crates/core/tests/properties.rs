use helmholtz_gaspt::dirichlet::{solve_at, BoundaryData, Pchip};
use helmholtz_gaspt::fdoracle::fd_solve;
use helmholtz_gaspt::fundsol::{q, FundIndex, MediumParams, Point};
use helmholtz_gaspt::green::{g4, QuarterDisk};
use helmholtz_gaspt::hyperfun::{a2_3, gauss_2f1, h3, pochhammer, A2Params, SeriesConfig};
use helmholtz_gaspt::quadrature::QuadratureSpec;
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Interior point of the unit quarter disk at polar (r, θ).
fn polar(r: f64, t: f64) -> Point {
    Point::new(r * t.cos(), r * t.sin())
}

fn exponents() -> impl Strategy<Value = (f64, f64)> {
    (0.05f64..0.45, 0.05f64..0.45)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pochhammer_recurrence(a in 0.1f64..5.0, n in -4i64..8) {
        let lhs = pochhammer(a, n + 1).unwrap();
        let rhs = pochhammer(a, n).unwrap() * (a + n as f64);
        prop_assert!(close(lhs, rhs, 1e-13), "{lhs} vs {rhs}");
    }

    #[test]
    fn a2_swaps_its_two_axes(
        a in 0.2f64..3.0, b1 in 0.1f64..1.0, b2 in 0.1f64..1.0,
        c1 in 1.0f64..2.0, c2 in 1.0f64..2.0,
        x in -0.9f64..0.0, y in -0.9f64..0.0, z in -0.5f64..0.0,
    ) {
        prop_assume!((a - a.round()).abs() > 1e-3);
        let cfg = SeriesConfig::default();
        let u = a2_3(&A2Params::new(a, b1, b2, c1, c2), x, y, z, &cfg).unwrap().value;
        let v = a2_3(&A2Params::new(a, b2, b1, c2, c1), y, x, z, &cfg).unwrap().value;
        prop_assert!(close(u, v, 1e-10), "{u} vs {v}");
    }

    #[test]
    fn h3_without_second_argument_is_gauss(a in -1.5f64..2.5, b in 0.1f64..2.0, c in 1.0f64..3.0, x in -0.9f64..0.5) {
        let cfg = SeriesConfig::default();
        let h = h3(a, b, c, x, 0.0, &cfg).unwrap().value;
        let g = gauss_2f1(a, b, c, x, &cfg).unwrap().value;
        prop_assert!(close(h, g, 1e-12), "{h} vs {g}");
    }

    #[test]
    fn q_is_symmetric(
        (al, be) in exponents(), la in 0.0f64..1.5,
        r in 0.1f64..0.95, t in 0.05f64..1.5, r0 in 0.1f64..0.95, t0 in 0.05f64..1.5,
    ) {
        let (p, p0) = (polar(r, t), polar(r0, t0));
        prop_assume!(p.dist2(&p0) > 1e-4);
        // q2 and q3 have a pole at α = β when λ ≠ 0
        prop_assume!(la == 0.0 || (al - be).abs() > 1e-2);
        let m = MediumParams::new(al, be, la).unwrap();
        let cfg = SeriesConfig::default();
        for i in FundIndex::ALL {
            let u = q(i, &p, &p0, &m, &cfg).unwrap().value;
            let v = q(i, &p0, &p, &m, &cfg).unwrap().value;
            prop_assert!(close(u, v, 1e-10), "q{}: {u} vs {v}", i.number());
        }
    }

    /// Positive for the Laplace case only; with λ > 0 q4 changes sign once
    /// λ|p − p₀| is of order one.
    #[test]
    fn q4_is_positive_without_lambda((al, be) in exponents(), r in 0.1f64..0.95, t in 0.05f64..1.5, r0 in 0.1f64..0.95, t0 in 0.05f64..1.5) {
        let (p, p0) = (polar(r, t), polar(r0, t0));
        prop_assume!(p.dist2(&p0) > 1e-4);
        let m = MediumParams::new(al, be, 0.0).unwrap();
        prop_assert!(q(FundIndex::Q4, &p, &p0, &m, &SeriesConfig::default()).unwrap().value > 0.0);
    }

    #[test]
    fn green_vanishes_on_the_axes((al, be) in exponents(), la in 0.0f64..1.5, s in 0.0f64..1.0, r0 in 0.1f64..0.9, t0 in 0.1f64..1.4) {
        let dom = QuarterDisk::new(1.0).unwrap();
        let m = MediumParams::new(al, be, la).unwrap();
        let cfg = SeriesConfig::default();
        let p0 = polar(r0, t0);
        prop_assert_eq!(g4(&Point::new(s, 0.0), &p0, &dom, &m, &cfg).unwrap().value, 0.0);
        prop_assert_eq!(g4(&Point::new(0.0, s), &p0, &dom, &m, &cfg).unwrap().value, 0.0);
    }

    #[test]
    fn pchip_keeps_monotone_data_monotone(steps in prop::collection::vec((0.01f64..1.0, 0.0f64..2.0), 2..20), probes in prop::collection::vec(0.0f64..1.0, 1..40)) {
        let mut xs = vec![0.0];
        let mut ys = vec![0.0];
        for (dx, dy) in &steps {
            xs.push(xs.last().unwrap() + dx);
            ys.push(ys.last().unwrap() + dy);
        }
        let end = *xs.last().unwrap();
        let f = Pchip::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            prop_assert!((f.eval(*x) - y).abs() <= 1e-12 * y.abs().max(1.0));
        }
        let mut t: Vec<f64> = probes.iter().map(|u| u * end).collect();
        t.sort_by(f64::total_cmp);
        for w in t.windows(2) {
            prop_assert!(f.eval(w[1]) >= f.eval(w[0]) - 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Non-negative data give a field between zero and the largest boundary
    /// value. Pole data stay positive only for λ = 0, so with λ > 0 the
    /// data are constant.
    #[test]
    fn fd_solution_obeys_the_maximum_principle((al, be) in exponents(), la in 0.0f64..1.0, c in 0.0f64..3.0, w in 0.0f64..3.0) {
        let dom = QuarterDisk::new(1.0).unwrap();
        let cfg = SeriesConfig::default();
        for lambda in [0.0, la] {
            let m = MediumParams::new(al, be, lambda).unwrap();
            let mut parts = vec![(c, BoundaryData::Constant(1.0))];
            if lambda == 0.0 {
                parts.push((w, BoundaryData::family("pole4", &dom, &m, &cfg).unwrap()));
            }
            let data = BoundaryData::Combination(parts);
            let mut top: f64 = 0.0;
            for k in 0..=400 {
                let t = k as f64 / 400.0;
                top = top
                    .max(data.tau1(t, &dom).unwrap())
                    .max(data.tau2(t, &dom).unwrap())
                    .max(data.phi(t * dom.arc_length(), &dom).unwrap());
            }
            let f = fd_solve(&data, &dom, &m, 16).unwrap();
            prop_assert!(f.min() >= 0.0, "min {}", f.min());
            prop_assert!(f.max_abs() <= top * (1.0 + 1e-12), "max {} above {top}", f.max_abs());
        }
    }

    #[test]
    fn solve_is_linear_in_the_data((al, be) in exponents(), c1 in -2.0f64..2.0, c2 in -2.0f64..2.0, r in 0.2f64..0.8, t in 0.2f64..1.3) {
        let dom = QuarterDisk::new(1.0).unwrap();
        let m = MediumParams::new(al, be, 0.0).unwrap();
        let cfg = SeriesConfig::default();
        let quad = QuadratureSpec { panels: 16, nodes_per_panel: 8, ..QuadratureSpec::default() };
        let d1 = BoundaryData::Constant(1.0);
        let d2 = BoundaryData::Quadratic { params: m };
        let mix = BoundaryData::Combination(vec![(c1, d1.clone()), (c2, d2.clone())]);
        let p = polar(r, t);
        let u1 = solve_at(&p, &d1, &dom, &m, &quad, &cfg).unwrap().value;
        let u2 = solve_at(&p, &d2, &dom, &m, &quad, &cfg).unwrap().value;
        let u = solve_at(&p, &mix, &dom, &m, &quad, &cfg).unwrap().value;
        prop_assert!(close(u, c1 * u1 + c2 * u2, 1e-10), "{u} vs {}", c1 * u1 + c2 * u2);
    }
}
