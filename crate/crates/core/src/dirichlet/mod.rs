//! Dirichlet problem in the quarter disk.
//!
//! For interior p₀ the solution is
//!
//! u(p₀) = ∫₀ᵃ x^{2α} τ₁(x) K₁(x) dx + ∫₀ᵃ y^{2β} τ₂(y) K₂(y) dy
//!         − ∫_Γ x^{2α} y^{2β} φ(s) ∂G4/∂n ds,
//!
//! with K₁ = y^{2β} ∂G4/∂y on y = 0 and K₂ = x^{2α} ∂G4/∂x on x = 0 (see
//! [`crate::green`]). The three integrals are taken with composite
//! Gauss–Legendre rules graded toward the corners; the error estimate is the
//! change when the number of panels is halved.

mod data;
mod diagnostics;

pub use data::{read_samples, BoundaryData, Pchip, PoleSolution, QuadraticSolution, Solution, FAMILIES};
pub use diagnostics::{
    energy_integral, greens_identity_residual, p11, ring_integrals, EnergyReport, IdentityReport, RingIntegrals,
    ENERGY_QUADRATURE,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fundsol::{MediumParams, Point};
use crate::green::{
    g4_trace_x0, g4_trace_x0_kdf, g4_trace_y0, g4_trace_y0_kdf, image_point, normal_derivative_g4_on_arc, QuarterDisk,
};
use crate::hyperfun::{SeriesConfig, SeriesResult};
use crate::par;
use crate::quadrature::{GaussLegendre, QuadratureSpec};

/// Allowed mismatch of the data at the three corners.
pub const CORNER_TOL: f64 = 1e-9;

/// Relative accuracy aimed at by the boundary quadrature. Halving the panels
/// may change the result by at most ten times this before the solve fails.
pub const QUAD_TARGET: f64 = 1e-6;

/// Points closer to the boundary than this fraction of the radius get four
/// times as many panels.
pub const NEAR_BOUNDARY: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveReport {
    pub value: f64,
    /// Change of the value when the number of panels is halved.
    pub quadrature_error_estimate: f64,
    /// Propagated error bound of the kernel series.
    pub kernel_series_error: f64,
}

/// Which closed form supplies the axis kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelForm {
    /// Horn H3 functions.
    Horn,
    /// Kampé de Fériet functions.
    KampeDeFeriet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Piece {
    XAxis,
    YAxis,
    Arc,
}

struct Node {
    piece: Piece,
    t: f64,
    w: f64,
}

struct Sums {
    value: f64,
    magnitude: f64,
    kernel_err: f64,
}

fn check_interior(p0: &Point, dom: &QuarterDisk) -> Result<()> {
    if !(p0.x.is_finite() && p0.y.is_finite() && dom.contains(p0)) {
        return Err(Error::OutsideDomain { x: p0.x, y: p0.y });
    }
    Ok(())
}

/// Gauss nodes of the three boundary pieces, with extra refinement around
/// the boundary points nearest to p₀.
fn layout(p0: &Point, dom: &QuarterDisk, spec: &QuadratureSpec) -> Vec<Node> {
    let rule = GaussLegendre::shared(spec.nodes_per_panel);
    let r0 = p0.norm2().sqrt();
    // refine around the nearest boundary point when p₀ is close to a piece
    let refine = |c: f64, d: f64| if d < 0.25 * dom.a { vec![(c, d)] } else { vec![] };
    let pieces = [
        (Piece::XAxis, dom.a, refine(p0.x, p0.y)),
        (Piece::YAxis, dom.a, refine(p0.y, p0.x)),
        (
            Piece::Arc,
            dom.arc_length(),
            refine(dom.a * p0.y.atan2(p0.x), dom.a - r0),
        ),
    ];
    let mut nodes = Vec::new();
    for (piece, len, extra) in pieces {
        let pts = spec.breakpoints(0.0, len, &extra);
        for w in pts.windows(2) {
            nodes.extend(rule.mapped(w[0], w[1]).map(|(t, w)| Node { piece, t, w }));
        }
    }
    nodes
}

fn kernel(
    piece: Piece,
    t: f64,
    p0: &Point,
    dom: &QuarterDisk,
    m: &MediumParams,
    form: KernelForm,
    cfg: &SeriesConfig,
) -> Result<SeriesResult> {
    let sign_weight = |k: SeriesResult, f: f64| SeriesResult {
        value: k.value * f,
        abs_error_estimate: k.abs_error_estimate * f.abs(),
        terms_used: k.terms_used,
    };
    match piece {
        Piece::XAxis => {
            let k = match form {
                KernelForm::Horn => g4_trace_y0(t, p0, dom, m, cfg)?,
                KernelForm::KampeDeFeriet => g4_trace_y0_kdf(t, p0, dom, m, cfg)?,
            };
            Ok(sign_weight(k, t.powf(2.0 * m.alpha)))
        }
        Piece::YAxis => {
            let k = match form {
                KernelForm::Horn => g4_trace_x0(t, p0, dom, m, cfg)?,
                KernelForm::KampeDeFeriet => g4_trace_x0_kdf(t, p0, dom, m, cfg)?,
            };
            Ok(sign_weight(k, t.powf(2.0 * m.beta)))
        }
        Piece::Arc => {
            let (p, _) = dom.arc_point(t);
            let k = normal_derivative_g4_on_arc(t, p0, dom, m, cfg)?;
            Ok(sign_weight(k, -p.x.powf(2.0 * m.alpha) * p.y.powf(2.0 * m.beta)))
        }
    }
}

fn boundary_sums(
    p0: &Point,
    data: &BoundaryData,
    dom: &QuarterDisk,
    m: &MediumParams,
    spec: &QuadratureSpec,
    form: KernelForm,
    cfg: &SeriesConfig,
) -> Result<Sums> {
    let nodes = layout(p0, dom, spec);
    let terms = par::map(&nodes, |n| -> Result<(f64, f64)> {
        let d = match n.piece {
            Piece::XAxis => data.tau1(n.t, dom)?,
            Piece::YAxis => data.tau2(n.t, dom)?,
            Piece::Arc => data.phi(n.t, dom)?,
        };
        if d == 0.0 {
            return Ok((0.0, 0.0));
        }
        let k = kernel(n.piece, n.t, p0, dom, m, form, cfg)?;
        Ok((n.w * d * k.value, (n.w * d).abs() * k.abs_error_estimate))
    });
    let mut s = Sums {
        value: 0.0,
        magnitude: 0.0,
        kernel_err: 0.0,
    };
    for t in terms {
        let (v, e) = t?;
        s.value += v;
        s.magnitude += v.abs();
        s.kernel_err += e;
    }
    Ok(s)
}

fn solve_with(
    p0: &Point,
    data: &BoundaryData,
    dom: &QuarterDisk,
    m: &MediumParams,
    quad: &QuadratureSpec,
    form: KernelForm,
    cfg: &SeriesConfig,
) -> Result<SolveReport> {
    check_interior(p0, dom)?;
    m.validate()?;
    quad.validate()?;
    data.check_corners(dom, CORNER_TOL)?;
    image_point(p0, dom, m)?;
    if data.is_zero() {
        return Ok(SolveReport {
            value: 0.0,
            quadrature_error_estimate: 0.0,
            kernel_series_error: 0.0,
        });
    }
    let spec = if dom.boundary_distance(p0) < NEAR_BOUNDARY * dom.a {
        quad.refined(4)
    } else {
        *quad
    };
    let half = QuadratureSpec {
        panels: (spec.panels / 2).max(1),
        ..spec
    };
    let fine = boundary_sums(p0, data, dom, m, &spec, form, cfg)?;
    let coarse = boundary_sums(p0, data, dom, m, &half, form, cfg)?;
    let est = (fine.value - coarse.value).abs();
    let allowed = 10.0 * QUAD_TARGET * fine.magnitude.max(fine.value.abs());
    if est > allowed && spec.panels > 1 {
        return Err(Error::QuadratureNotConverged { estimate: est, allowed });
    }
    Ok(SolveReport {
        value: fine.value,
        quadrature_error_estimate: est,
        kernel_series_error: fine.kernel_err,
    })
}

/// u(p₀) from the boundary data with the Horn-function axis kernels.
pub fn solve_at(
    p0: &Point,
    data: &BoundaryData,
    dom: &QuarterDisk,
    m: &MediumParams,
    quad: &QuadratureSpec,
    cfg: &SeriesConfig,
) -> Result<SolveReport> {
    solve_with(p0, data, dom, m, quad, KernelForm::Horn, cfg)
}

/// [`solve_at`] with the axis kernels in Kampé de Fériet form.
pub fn solve_at_kdf(
    p0: &Point,
    data: &BoundaryData,
    dom: &QuarterDisk,
    m: &MediumParams,
    quad: &QuadratureSpec,
    cfg: &SeriesConfig,
) -> Result<SolveReport> {
    solve_with(p0, data, dom, m, quad, KernelForm::KampeDeFeriet, cfg)
}

/// [`solve_at`] at every point; errors are kept per point.
pub fn solve_grid(
    points: &[Point],
    data: &BoundaryData,
    dom: &QuarterDisk,
    m: &MediumParams,
    quad: &QuadratureSpec,
    cfg: &SeriesConfig,
) -> Vec<Result<SolveReport>> {
    par::map(points, |p| solve_at(p, data, dom, m, quad, cfg))
}
