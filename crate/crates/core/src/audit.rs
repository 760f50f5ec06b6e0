//! A fixed suite of numerical self-checks for one parameter set, each
//! reduced to a single measured value compared against a threshold.
//!
//! Sample points are drawn from a seeded generator, so a given
//! configuration always produces the same report.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dirichlet::{
    energy_integral, greens_identity_residual, p11, ring_integrals, solve_at, BoundaryData, PoleSolution, Solution,
    ENERGY_QUADRATURE,
};
use crate::error::Result;
use crate::fdoracle::{fd_solve, pde_residual};
use crate::fundsol::{q, FundIndex, MediumParams, Point};
use crate::green::{arc_residual, g4, g4_trace_x0_with, QuarterDisk, TraceReading};
use crate::hyperfun::{a2_3, contiguous_relation, gamma, h3, A2Params, SeriesConfig};
use crate::quadrature::QuadratureSpec;

const SEED: u64 = 0x5eed_a2a3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditStatus {
    Pass,
    Fail,
    /// Measured and recorded, but not held to the threshold.
    ReportOnly,
    /// The check itself could not be evaluated.
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRecord {
    pub name: &'static str,
    pub value: Option<f64>,
    pub threshold: f64,
    pub status: AuditStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub radius: f64,
    pub passed: bool,
    pub records: Vec<AuditRecord>,
}

/// How a measured value is compared with its threshold.
enum Rule {
    AtMost,
    AtLeast,
    Below,
    ReportOnly,
}

fn record(name: &'static str, value: Result<f64>, threshold: f64, rule: Rule) -> AuditRecord {
    match value {
        Ok(v) => {
            let status = match rule {
                Rule::ReportOnly => AuditStatus::ReportOnly,
                Rule::AtMost if v <= threshold => AuditStatus::Pass,
                Rule::AtLeast if v >= threshold => AuditStatus::Pass,
                Rule::Below if v < threshold => AuditStatus::Pass,
                _ => AuditStatus::Fail,
            };
            AuditRecord {
                name,
                value: Some(v),
                threshold,
                status,
                error: None,
            }
        }
        Err(e) => AuditRecord {
            name,
            value: None,
            threshold,
            status: if matches!(rule, Rule::ReportOnly) {
                AuditStatus::ReportOnly
            } else {
                AuditStatus::Error
            },
            error: Some(e.to_string()),
        },
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Random point of the quarter disk with x, y ≥ margin and |p| ≤ (1 − margin) a.
fn interior(rng: &mut ChaCha8Rng, dom: &QuarterDisk, margin: f64) -> Point {
    loop {
        let x = rng.gen_range(margin..dom.a);
        let y = rng.gen_range(margin..dom.a);
        if (x * x + y * y).sqrt() <= (1.0 - margin) * dom.a {
            return Point::new(x, y);
        }
    }
}

fn contiguous(rng: &mut ChaCha8Rng, cfg: &SeriesConfig) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
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
        let (l, r) = contiguous_relation(&p, x, y, z, cfg)?;
        worst = worst.max(rel(l, r));
    }
    Ok(worst)
}

/// A2 with one vanishing argument against H3. Both sides are summed to a
/// tighter tolerance than the default, which leaves about 1e-12 on each.
fn reductions(rng: &mut ChaCha8Rng, cfg: &SeriesConfig) -> Result<f64> {
    let cfg = &SeriesConfig {
        rel_tol: cfg.rel_tol.min(1e-14),
        ..*cfg
    };
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let p = A2Params::new(
            rng.gen_range(0.5..3.0),
            rng.gen_range(0.1..1.0),
            rng.gen_range(0.1..1.0),
            rng.gen_range(1.0..2.0),
            rng.gen_range(1.0..2.0),
        );
        let (t, z) = (rng.gen_range(-0.9..0.0), rng.gen_range(-0.5..0.0));
        let first = a2_3(&p, 0.0, t, z, cfg)?.value;
        let second = a2_3(&p, t, 0.0, z, cfg)?.value;
        let e1 = rel(first, h3(p.a, p.b2, p.c2, t, z, cfg)?.value);
        let e2 = rel(second, h3(p.a, p.b1, p.c1, t, z, cfg)?.value);
        worst = worst.max(e1).max(e2);
    }
    Ok(worst)
}

fn p11_limit(m: &MediumParams, dom: &QuarterDisk, cfg: &SeriesConfig) -> Result<f64> {
    let (al, be) = (m.alpha, m.beta);
    let want =
        gamma(2.0 - 2.0 * al) * gamma(2.0 - 2.0 * be) / (gamma(1.0 - al) * gamma(1.0 - be) * gamma(3.0 - al - be));
    let p0 = Point::new(0.3 * dom.a, 0.4 * dom.a);
    let mut worst: f64 = 0.0;
    for phi in [0.3, 2.0, 4.4] {
        let got = p11(1e-4 * dom.a, phi, &p0, m, cfg)?.value;
        worst = worst.max((got - want).abs() / want.abs());
    }
    Ok(worst)
}

fn q_symmetry(rng: &mut ChaCha8Rng, m: &MediumParams, dom: &QuarterDisk, cfg: &SeriesConfig) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let (p, p0) = (interior(rng, dom, 0.05), interior(rng, dom, 0.05));
        for i in FundIndex::ALL {
            let a = q(i, &p, &p0, m, cfg)?.value;
            let b = q(i, &p0, &p, m, cfg)?.value;
            worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE));
        }
    }
    Ok(worst)
}

fn q_residual(rng: &mut ChaCha8Rng, m: &MediumParams, dom: &QuarterDisk, cfg: &SeriesConfig) -> Result<f64> {
    let h = 1e-3 * dom.a;
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let p0 = interior(rng, dom, 0.05);
        // h²/x² governs the truncation error of solutions like x^{1−2α}
        let p = loop {
            let p = interior(rng, dom, 0.15);
            if p.dist2(&p0).sqrt() >= 0.2 * dom.a {
                break p;
            }
        };
        for i in FundIndex::ALL {
            let f = |x: &Point| q(i, x, &p0, m, cfg).map(|r| r.value);
            let r = pde_residual(f, &p, h, m)?;
            worst = worst.max(r.abs() / f(&p)?.abs().max(1.0));
        }
    }
    Ok(worst)
}

fn g4_symmetry(rng: &mut ChaCha8Rng, m: &MediumParams, dom: &QuarterDisk, cfg: &SeriesConfig) -> Result<f64> {
    let mut diffs: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for _ in 0..10 {
        let (p, p0) = (interior(rng, dom, 0.05), interior(rng, dom, 0.05));
        let a = g4(&p, &p0, dom, m, cfg)?.value;
        let b = g4(&p0, &p, dom, m, cfg)?.value;
        diffs = diffs.max((a - b).abs());
        scale = scale.max(a.abs()).max(b.abs());
    }
    Ok(diffs / scale.max(f64::MIN_POSITIVE))
}

/// Relative distance of the y-axis trace kernel, under either reading of
/// its source distance, from the limit of x^{2α} ∂G4/∂x as x → 0. Near the
/// axis G4 = x^{1−2α} (c₀ + c₁ x² + …), and the kernel is (1−2α) c₀, taken
/// here by Richardson extrapolation from two small offsets.
fn trace_reading(m: &MediumParams, dom: &QuarterDisk, cfg: &SeriesConfig, reading: TraceReading) -> Result<f64> {
    let p0 = Point::new(0.3 * dom.a, 0.4 * dom.a);
    let e = 1e-3 * dom.a;
    let k = 1.0 - 2.0 * m.alpha;
    let mut worst: f64 = 0.0;
    for t in [0.2, 0.5, 0.8] {
        let y = t * dom.a;
        let r = |x: f64| g4(&Point::new(x, y), &p0, dom, m, cfg).map(|g| g.value / x.powf(k));
        let limit = k * (4.0 * r(e)? - r(2.0 * e)?) / 3.0;
        let got = g4_trace_x0_with(y, &p0, dom, m, reading, cfg)?.value;
        worst = worst.max((got - limit).abs() / limit.abs());
    }
    Ok(worst)
}

/// Ratio of successive J11 errors over shrinking rings (below 1 when the
/// error decreases monotonically) and the largest |J1k| / |u|, k = 2, 3, 4,
/// on the smallest ring.
fn ring_limits(u: &PoleSolution, dom: &QuarterDisk, cfg: &SeriesConfig) -> Result<(f64, f64)> {
    let p0 = Point::new(0.3 * dom.a, 0.4 * dom.a);
    let target = u.value(&p0)?;
    let mut errors = Vec::new();
    let mut rest = 0.0;
    for rho in [0.05, 0.02, 0.01] {
        let j = ring_integrals(u, &p0, rho * dom.a, 64, dom, &u.params, cfg)?;
        errors.push((j.j11 - target).abs());
        rest = j.j12.abs().max(j.j13.abs()).max(j.j14.abs()) / target.abs();
    }
    let ratio = errors.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    Ok((ratio, rest))
}

/// Run the whole suite for one parameter set. Checks tied to the image
/// construction are report-only when λ ≠ 0, since the image term then no
/// longer cancels exactly on the arc.
pub fn run_audit(
    m: &MediumParams,
    dom: &QuarterDisk,
    cfg: &SeriesConfig,
    quad: &QuadratureSpec,
) -> Result<AuditReport> {
    m.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let helmholtz = m.lambda != 0.0;
    let image_rule = || if helmholtz { Rule::ReportOnly } else { Rule::AtMost };
    let u = PoleSolution {
        pole: BoundaryData::default_pole(dom),
        params: *m,
        cfg: *cfg,
    };
    let data = BoundaryData::family("pole4", dom, m, cfg)?;
    let p0 = Point::new(0.3 * dom.a, 0.4 * dom.a);
    let mut records = vec![
        record("contiguous_relation", contiguous(&mut rng, cfg), 1e-9, Rule::AtMost),
        record("reductions", reductions(&mut rng, cfg), 1e-12, Rule::AtMost),
        record("p11_limit", p11_limit(m, dom, cfg), 1e-4, Rule::AtMost),
        record("q_symmetry", q_symmetry(&mut rng, m, dom, cfg), 1e-10, Rule::AtMost),
        record("q_fd_residual", q_residual(&mut rng, m, dom, cfg), 1e-4, Rule::AtMost),
        record("arc_vanishing", arc_residual(&p0, dom, m, 50, cfg), 1e-8, image_rule()),
        record("g4_symmetry", g4_symmetry(&mut rng, m, dom, cfg), 1e-8, image_rule()),
        record(
            "trace_reading_corrected",
            trace_reading(m, dom, cfg, TraceReading::Corrected),
            1e-8,
            Rule::AtMost,
        ),
        // the printed reading must visibly disagree
        record(
            "trace_reading_literal",
            trace_reading(m, dom, cfg, TraceReading::Literal),
            1e-2,
            Rule::AtLeast,
        ),
    ];
    let rings = ring_limits(&u, dom, cfg);
    records.push(record(
        "ring_j11_error_ratio",
        rings.as_ref().map(|r| r.0).map_err(Clone::clone),
        1.0,
        Rule::Below,
    ));
    records.push(record("ring_j12_j14_relative", rings.map(|r| r.1), 1e-3, Rule::AtMost));
    let other = PoleSolution {
        pole: Point::new(0.2 * dom.a, 1.3 * dom.a),
        ..u
    };
    let green = greens_identity_residual(&u, &other, dom, m, quad).map(|r| r.residual / r.scale);
    records.push(record("greens_identity", green, 1e-8, Rule::AtMost));
    let energy = energy_integral(&u, dom, m, &ENERGY_QUADRATURE).map(|r| r.defect);
    records.push(record("energy_identity", energy, 1e-3, Rule::AtMost));
    let reproduction = solve_at(&p0, &data, dom, m, quad, cfg).and_then(|r| Ok(rel(r.value, u.value(&p0)?)));
    records.push(record("reproduction", reproduction, 1e-3, image_rule()));
    let fd = fd_solve(&data, dom, m, 64);
    let fd_error = fd
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|f| Ok(f.max_error(|p| u.value(p))? / f.max_abs()));
    records.push(record("fd_error_n64", fd_error, 2e-3, Rule::AtMost));
    let fd_min = fd.map(|f| (-f.min()).max(0.0));
    records.push(record("fd_maximum_principle", fd_min, 1e-12, Rule::AtMost));
    let passed = records
        .iter()
        .all(|r| matches!(r.status, AuditStatus::Pass | AuditStatus::ReportOnly));
    Ok(AuditReport {
        alpha: m.alpha,
        beta: m.beta,
        lambda: m.lambda,
        radius: dom.a,
        passed,
        records,
    })
}
