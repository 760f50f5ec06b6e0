//! Acceptance suite: nine numbered criteria, each printed as one PASS/FAIL
//! line with the measured quantities. Runs without the libtest harness so the
//! lines always appear in `cargo test` output; exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{oracles, rel_err};
use helmholtz_gaspt::dirichlet::{
    energy_integral, ring_integrals, solve_at, solve_at_kdf, BoundaryData, PoleSolution, Solution, ENERGY_QUADRATURE,
};
use helmholtz_gaspt::fdoracle::{fd_solve, pde_residual};
use helmholtz_gaspt::fundsol::{q, FundIndex, MediumParams, Point};
use helmholtz_gaspt::green::{arc_residual, g4, QuarterDisk};
use helmholtz_gaspt::hyperfun::{
    a2_3, a2_3_direct, a2_3_expansion, a2_3_partial_derivative, contiguous_relation, gamma, gauss_2f1, h3, kdf_1_1_0,
    A2Params, SeriesConfig,
};
use helmholtz_gaspt::quadrature::QuadratureSpec;
use helmholtz_gaspt::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String), Error>;
type Criterion = (&'static str, fn() -> Outcome);

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn a2p(v: &[f64]) -> A2Params {
    A2Params::new(v[0], v[1], v[2], v[3], v[4])
}

fn unit_disk() -> QuarterDisk {
    QuarterDisk::new(1.0).unwrap()
}

fn series_oracles() -> Outcome {
    let o = oracles();
    let cfg = SeriesConfig::default();
    type Eval = Box<dyn Fn(&[f64]) -> Result<f64, Error>>;
    let sets: Vec<(&str, &[common::Case], Eval)> = vec![
        (
            "a2_3_direct",
            &o.a2_3_direct,
            Box::new(move |v| Ok(a2_3_direct(&a2p(v), v[5], v[6], v[7], &cfg)?.value)),
        ),
        (
            "a2_3_expansion",
            &o.a2_3_expansion,
            Box::new(move |v| Ok(a2_3_expansion(&a2p(v), v[5], v[6], v[7], &cfg)?.value)),
        ),
        (
            "h3",
            &o.h3,
            Box::new(move |v| Ok(h3(v[0], v[1], v[2], v[3], v[4], &cfg)?.value)),
        ),
        (
            "gauss_2f1",
            &o.gauss_2f1,
            Box::new(move |v| Ok(gauss_2f1(v[0], v[1], v[2], v[3], &cfg)?.value)),
        ),
        (
            "kdf_1_1_0",
            &o.kdf_1_1_0,
            Box::new(move |v| Ok(kdf_1_1_0(v[0], v[1], v[2], v[3], v[4], v[5], v[6], &cfg)?.value)),
        ),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, cases, eval) in sets {
        let mut worst: f64 = 0.0;
        for c in cases {
            worst = worst.max(rel_err(eval(&c.args)?, c.want()));
        }
        ok &= cases.len() >= 20 && worst <= 1e-10;
        parts.push(format!("{name} {}/{worst:.1e}", cases.len()));
    }
    Ok((ok, parts.join(", ")))
}

fn structural_identities() -> Outcome {
    let cfg = SeriesConfig::default();
    let tight = SeriesConfig { rel_tol: 1e-14, ..cfg };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut contiguous, mut reduction, mut connection, mut derivative) = (0f64, 0f64, 0f64, 0f64);
    for _ in 0..25 {
        let p = A2Params::new(
            rng.gen_range(1.05..3.0),
            rng.gen_range(0.05..1.0),
            rng.gen_range(0.05..1.0),
            rng.gen_range(1.0..2.0),
            rng.gen_range(1.0..2.0),
        );
        let (x, y, z) = (
            rng.gen_range(-0.8..0.0),
            rng.gen_range(-0.8..0.0),
            rng.gen_range(-0.5..0.0),
        );
        let (l, r) = contiguous_relation(&p, x, y, z, &cfg)?;
        contiguous = contiguous.max(rel(l, r));

        let first = a2_3(&p, 0.0, y, z, &tight)?.value;
        let second = a2_3(&p, x, 0.0, z, &tight)?.value;
        reduction = reduction
            .max(rel(first, h3(p.a, p.b2, p.c2, y, z, &tight)?.value))
            .max(rel(second, h3(p.a, p.b1, p.c1, x, z, &tight)?.value));

        // H3(a, b; c; ρ, ρ*) = (1−ρ)^{−b} KdF(c−a, b, c, 1−a, c−a; ρ/(ρ−1), −ρ*)
        let (a, b, c) = (
            rng.gen_range(-1.5..1.5),
            rng.gen_range(0.1..1.5),
            rng.gen_range(1.0..2.5),
        );
        let (rho, rho_s) = (rng.gen_range(-0.8..0.6), rng.gen_range(-0.5..0.0));
        let lhs = h3(a, b, c, rho, rho_s, &cfg)?.value;
        let rhs = (1.0 - rho).powf(-b) * kdf_1_1_0(c - a, b, c, 1.0 - a, c - a, rho / (rho - 1.0), -rho_s, &cfg)?.value;
        connection = connection.max(rel(lhs, rhs));

        let h = 1e-4;
        for (orders, shift) in [
            ((1, 0, 0), (h, 0.0, 0.0)),
            ((0, 1, 0), (0.0, h, 0.0)),
            ((0, 0, 1), (0.0, 0.0, h)),
        ] {
            let d = a2_3_partial_derivative(orders, &p, x, y, z, &tight)?.value;
            let plus = a2_3(&p, x + shift.0, y + shift.1, z + shift.2, &tight)?.value;
            let minus = a2_3(&p, x - shift.0, y - shift.1, z - shift.2, &tight)?.value;
            derivative = derivative.max(rel(d, (plus - minus) / (2.0 * h)));
        }
    }
    let ok = contiguous <= 1e-9 && reduction <= 1e-12 && connection <= 1e-10 && derivative <= 1e-6;
    Ok((
        ok,
        format!(
            "contiguous {contiguous:.1e}, reductions {reduction:.1e}, H3/KdF {connection:.1e}, derivatives {derivative:.1e}"
        ),
    ))
}

fn p11_limit() -> Outcome {
    let cfg = SeriesConfig::default();
    let o = oracles();
    let p0 = Point::new(0.3, 0.4);
    let mut worst: f64 = 0.0;
    let mut oracle_gap: f64 = 0.0;
    for (al, be, key) in [
        (0.2, 0.3, "p11_limit_0.2_0.3"),
        (0.25, 0.25, "p11_limit_0.25_0.25"),
        (0.1, 0.4, "p11_limit_0.1_0.4"),
    ] {
        let m = MediumParams::new(al, be, 0.0)?;
        let want =
            gamma(2.0 - 2.0 * al) * gamma(2.0 - 2.0 * be) / (gamma(1.0 - al) * gamma(1.0 - be) * gamma(3.0 - al - be));
        oracle_gap = oracle_gap.max(rel_err(want, o.scalar(key)));
        for phi in [0.3, 2.0, 4.4] {
            let got = helmholtz_gaspt::dirichlet::p11(1e-4, phi, &p0, &m, &cfg)?.value;
            worst = worst.max((got - want).abs());
        }
    }
    Ok((
        worst <= 1e-4 && oracle_gap <= 1e-13,
        format!("worst |P11 - limit| {worst:.1e} over 3 parameter sets, limit vs oracle {oracle_gap:.1e}"),
    ))
}

fn fundamental_solutions() -> Outcome {
    let cfg = SeriesConfig::default();
    // q2 and q3 have a pole at α = β once λ ≠ 0, so equal exponents appear
    // only in the Laplace case
    let configs = [
        (0.15, 0.15, 0.0),
        (0.15, 0.25, 0.5),
        (0.15, 0.4, 1.0),
        (0.25, 0.15, 1.0),
        (0.25, 0.25, 0.0),
        (0.25, 0.4, 0.5),
        (0.4, 0.15, 0.5),
        (0.4, 0.25, 1.0),
        (0.4, 0.4, 0.0),
        (0.25, 0.4, 1.0),
    ];
    let pairs = [
        (Point::new(0.6, 0.3), Point::new(0.25, 0.45)),
        (Point::new(0.2, 0.7), Point::new(0.55, 0.35)),
        (Point::new(0.45, 0.5), Point::new(0.15, 0.2)),
    ];
    let h = 1e-3;
    let (mut residual, mut symmetry) = (0f64, 0f64);
    for (al, be, la) in configs {
        let m = MediumParams::new(al, be, la)?;
        for (p, p0) in &pairs {
            assert!(p.dist2(p0).sqrt() >= 0.2 && p.x >= 0.15 && p.y >= 0.15);
            for i in FundIndex::ALL {
                let f = |x: &Point| q(i, x, p0, &m, &cfg).map(|r| r.value);
                let v = f(p)?;
                residual = residual.max(pde_residual(f, p, h, &m)?.abs() / v.abs().max(1.0));
                let swapped = q(i, p0, p, &m, &cfg)?.value;
                symmetry = symmetry.max((v - swapped).abs() / v.abs().max(swapped.abs()));
            }
        }
    }
    Ok((
        residual <= 1e-4 && symmetry <= 1e-10,
        format!("10 configurations, FD residual {residual:.1e}, symmetry {symmetry:.1e}"),
    ))
}

fn greens_function() -> Outcome {
    let cfg = SeriesConfig::default();
    let dom = unit_disk();
    let p0 = Point::new(0.3, 0.4);
    let others = [Point::new(0.6, 0.2), Point::new(0.1, 0.8), Point::new(0.45, 0.45)];
    let mut report = Vec::new();
    let mut ok = true;
    for la in [0.0, 0.5] {
        let m = MediumParams::new(0.2, 0.3, la)?;
        let mut on_axes: f64 = 0.0;
        for t in [0.1, 0.5, 0.9] {
            on_axes = on_axes
                .max(g4(&Point::new(t, 0.0), &p0, &dom, &m, &cfg)?.value.abs())
                .max(g4(&Point::new(0.0, t), &p0, &dom, &m, &cfg)?.value.abs());
        }
        let arc = arc_residual(&p0, &dom, &m, 50, &cfg)?;
        let mut symmetry: f64 = 0.0;
        for p in &others {
            let a = g4(p, &p0, &dom, &m, &cfg)?.value;
            let b = g4(&p0, p, &dom, &m, &cfg)?.value;
            symmetry = symmetry.max((a - b).abs() / a.abs().max(b.abs()));
        }
        ok &= on_axes == 0.0;
        if la == 0.0 {
            ok &= arc <= 1e-8 && symmetry <= 1e-8;
            report.push(format!(
                "lambda 0: axes {on_axes:e}, arc {arc:.1e}, symmetry {symmetry:.1e}"
            ));
        } else {
            report.push(format!(
                "lambda {la} (report only): arc {arc:.1e}, symmetry {symmetry:.1e}"
            ));
        }
    }
    Ok((ok, report.join("; ")))
}

fn ring_limits() -> Outcome {
    let cfg = SeriesConfig::default();
    let dom = unit_disk();
    let p0 = Point::new(0.3, 0.4);
    let mut ok = true;
    let mut report = Vec::new();
    for la in [0.0, 0.5] {
        let m = MediumParams::new(0.2, 0.3, la)?;
        let u = PoleSolution {
            pole: BoundaryData::default_pole(&dom),
            params: m,
            cfg,
        };
        let target = u.value(&p0)?;
        let mut errors = Vec::new();
        let mut rest = 0.0;
        for rho in [0.05, 0.02, 0.01] {
            let j = ring_integrals(&u, &p0, rho, 64, &dom, &m, &cfg)?;
            errors.push((j.j11 - target).abs());
            rest = j.j12.abs().max(j.j13.abs()).max(j.j14.abs()) / target.abs();
        }
        ok &= errors.windows(2).all(|w| w[1] < w[0]) && rest <= 1e-3;
        report.push(format!(
            "lambda {la}: J11 errors {:.1e}/{:.1e}/{:.1e}, J12..J14 {rest:.1e}",
            errors[0], errors[1], errors[2]
        ));
    }
    Ok((ok, report.join("; ")))
}

fn reproduction() -> Outcome {
    let start = Instant::now();
    let cfg = SeriesConfig::default();
    let dom = unit_disk();
    let m = MediumParams::new(0.2, 0.3, 0.0)?;
    let data = BoundaryData::family("pole4", &dom, &m, &cfg)?;
    let probes = [Point::new(0.3, 0.4), Point::new(0.6, 0.2), Point::new(0.15, 0.7)];
    let quad = QuadratureSpec::default();
    let mut repro: f64 = 0.0;
    for p in &probes {
        let want = data.exact_value(p, &m).unwrap()?;
        repro = repro.max(rel(solve_at(p, &data, &dom, &m, &quad, &cfg)?.value, want));
    }

    let coarse = QuadratureSpec {
        panels: 8,
        nodes_per_panel: 8,
        ..quad
    };
    let (mut e1, mut e2) = (0f64, 0f64);
    for p in &probes {
        let want = data.exact_value(p, &m).unwrap()?;
        e1 = e1.max((solve_at(p, &data, &dom, &m, &coarse, &cfg)?.value - want).abs());
        e2 = e2.max((solve_at(p, &data, &dom, &m, &coarse.refined(2), &cfg)?.value - want).abs());
    }

    // pole4 data vanish on both axes, so the axis kernels are compared on
    // data that do not
    let mut forms: f64 = 0.0;
    for family in ["pole1", "constant"] {
        let d = BoundaryData::family(family, &dom, &m, &cfg)?;
        for p in &probes {
            let horn = solve_at(p, &d, &dom, &m, &quad, &cfg)?.value;
            let kdf = solve_at_kdf(p, &d, &dom, &m, &quad, &cfg)?.value;
            forms = forms.max(rel(horn, kdf));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        repro <= 1e-3 && e1 >= 2.0 * e2 && forms <= 1e-9 && secs < 60.0,
        format!(
            "pole4 error {repro:.1e}, panels 8 -> 16 error {e1:.1e} -> {e2:.1e}, Horn vs KdF {forms:.1e}, {secs:.1} s"
        ),
    ))
}

fn finite_differences() -> Outcome {
    let cfg = SeriesConfig::default();
    let quad = QuadratureSpec::default();
    let dom = unit_disk();
    let m = MediumParams::new(0.2, 0.3, 0.0)?;
    let data = BoundaryData::family("pole4", &dom, &m, &cfg)?;
    let exact = |p: &Point| data.exact_value(p, &m).unwrap();

    let fine = fd_solve(&data, &dom, &m, 128)?;
    let tol_base = 2e-3 * fine.max_abs();
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_diff: f64 = 0.0;
    for i in (8..128).step_by(24) {
        for j in (8..128).step_by(24) {
            let Some(v) = fine.get(i, j) else { continue };
            let p = Point::new(i as f64 * fine.h, j as f64 * fine.h);
            let r = solve_at(&p, &data, &dom, &m, &quad, &cfg)?;
            let diff = (v - r.value).abs();
            let tol = tol_base.max(r.quadrature_error_estimate + r.kernel_series_error);
            worst_diff = worst_diff.max(diff);
            worst_excess = worst_excess.max(diff - tol);
        }
    }

    let e32 = fd_solve(&data, &dom, &m, 32)?.max_error(exact)?;
    let e64 = fd_solve(&data, &dom, &m, 64)?.max_error(exact)?;
    let ratio = e32 / e64;
    Ok((
        worst_excess <= 0.0 && (3.2..=4.8).contains(&ratio),
        format!("N=128 vs boundary solver {worst_diff:.1e} (tolerance {tol_base:.1e}), error ratio N=32/64 {ratio:.2}"),
    ))
}

fn zero_data_and_energy() -> Outcome {
    let cfg = SeriesConfig::default();
    let quad = QuadratureSpec::default();
    let dom = unit_disk();
    let mut ok = true;
    let mut energy = Vec::new();
    for la in [0.0, 0.5] {
        let m = MediumParams::new(0.2, 0.3, la)?;
        let u = solve_at(&Point::new(0.3, 0.4), &BoundaryData::Zero, &dom, &m, &quad, &cfg)?;
        let f = fd_solve(&BoundaryData::Zero, &dom, &m, 32)?;
        ok &= u.value == 0.0 && f.values.iter().all(|&v| v == 0.0);
        let pole = PoleSolution {
            pole: BoundaryData::default_pole(&dom),
            params: m,
            cfg,
        };
        let d = energy_integral(&pole, &dom, &m, &ENERGY_QUADRATURE)?.defect;
        ok &= d <= 1e-3;
        energy.push(format!("lambda {la} {d:.1e}"));
    }
    Ok((
        ok,
        format!("zero data exact in both solvers, energy defect {}", energy.join(", ")),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("series oracles", series_oracles),
        ("structural identities", structural_identities),
        ("P11 limit", p11_limit),
        ("fundamental solutions", fundamental_solutions),
        ("Green's function", greens_function),
        ("ring limits", ring_limits),
        ("reproduction", reproduction),
        ("finite differences", finite_differences),
        ("zero data and energy", zero_data_and_energy),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {}: {verdict} {name}: {detail} [{:.1} s]",
            k + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
