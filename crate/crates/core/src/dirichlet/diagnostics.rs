//! Identity checks for solutions: Green's second identity and the energy
//! identity on the quarter disk, and the integrals over a small circle
//! around the source that yield the solution formula in the limit.

use serde::Serialize;

use super::data::Solution;
use crate::error::{Error, Result};
use crate::fundsol::{normal_derivative_q4, normal_derivative_q4_terms, MediumParams, Point};
use crate::green::{g4, image_point, QuarterDisk};
use crate::hyperfun::{a2_3, A2Params, SeriesConfig, SeriesResult};
use crate::par;
use crate::quadrature::{GaussLegendre, QuadratureSpec};

/// ∫ over ∂Ω₀ of x^{2α} y^{2β} (u ∂v/∂n − v ∂u/∂n), and the same integral of
/// |u ∂v/∂n| as its scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    pub residual: f64,
    pub scale: f64,
}

/// Both sides of the energy identity
/// ∫_Ω x^{2α} y^{2β} (|∇u|² + λ² u²) = ∫_{∂Ω} x^{2α} y^{2β} u ∂u/∂n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyReport {
    pub lhs: f64,
    pub rhs: f64,
    /// |lhs − rhs| / max(|lhs|, |rhs|), zero when both vanish.
    pub defect: f64,
}

/// Values and weighted normal derivatives x^{2α} y^{2β} ∂/∂n on the three
/// boundary pieces, with the exterior normal. Returns (node weight, u, n·).
fn boundary_samples(
    f: &dyn Solution,
    dom: &QuarterDisk,
    m: &MediumParams,
    quad: &QuadratureSpec,
) -> Result<Vec<(f64, f64, f64)>> {
    quad.validate()?;
    let rule = GaussLegendre::shared(quad.nodes_per_panel);
    let mut nodes = Vec::new();
    for piece in 0..3 {
        let len = if piece == 2 { dom.arc_length() } else { dom.a };
        let pts = quad.breakpoints(0.0, len, &[]);
        for w in pts.windows(2) {
            nodes.extend(rule.mapped(w[0], w[1]).map(|(t, w)| (piece, t, w)));
        }
    }
    par::map(&nodes, |&(piece, t, w)| -> Result<(f64, f64, f64)> {
        match piece {
            0 => {
                // y = 0, n = (0, -1)
                let p = Point::new(t, 0.0);
                let (_, gy) = f.weighted_grad(&p)?;
                Ok((w, f.value(&p)?, -t.powf(2.0 * m.alpha) * gy))
            }
            1 => {
                // x = 0, n = (-1, 0)
                let p = Point::new(0.0, t);
                let (gx, _) = f.weighted_grad(&p)?;
                Ok((w, f.value(&p)?, -t.powf(2.0 * m.beta) * gx))
            }
            _ => {
                let (p, (dxs, dys)) = dom.arc_point(t);
                let (gx, gy) = f.weighted_grad(&p)?;
                let dn = p.y.powf(2.0 * m.beta) * gx * dys - p.x.powf(2.0 * m.alpha) * gy * dxs;
                Ok((w, f.value(&p)?, dn))
            }
        }
    })
    .into_iter()
    .collect()
}

/// Green's second identity on ∂Ω₀ for two solutions u, v.
pub fn greens_identity_residual(
    u: &dyn Solution,
    v: &dyn Solution,
    dom: &QuarterDisk,
    m: &MediumParams,
    quad: &QuadratureSpec,
) -> Result<IdentityReport> {
    let su = boundary_samples(u, dom, m, quad)?;
    let sv = boundary_samples(v, dom, m, quad)?;
    let mut residual = 0.0;
    let mut scale = 0.0;
    for (&(w, uu, un), &(_, vv, vn)) in su.iter().zip(&sv) {
        residual += w * (uu * vn - vv * un);
        scale += w * (uu * vn).abs();
    }
    Ok(IdentityReport {
        residual: residual.abs(),
        scale,
    })
}

/// Default layout of the area integral: 16 panels of 8 nodes in each polar
/// direction, graded strongly toward the axes where x^{2α} |u_y|² and
/// y^{2β} |u_x|² carry the singular weights x^{-2α}, y^{-2β}.
pub const ENERGY_QUADRATURE: QuadratureSpec = QuadratureSpec {
    panels: 16,
    nodes_per_panel: 8,
    endpoint_grading: 8.0,
};

/// Both sides of the energy identity for `u`, the area integral in polar
/// coordinates with `quad` in each direction.
pub fn energy_integral(
    u: &dyn Solution,
    dom: &QuarterDisk,
    m: &MediumParams,
    quad: &QuadratureSpec,
) -> Result<EnergyReport> {
    quad.validate()?;
    let rule = GaussLegendre::shared(quad.nodes_per_panel);
    let nodes_in = |len: f64| -> Vec<(f64, f64)> {
        let pts = quad.breakpoints(0.0, len, &[]);
        pts.windows(2)
            .flat_map(|w| rule.mapped(w[0], w[1]).collect::<Vec<_>>())
            .collect()
    };
    let radial = nodes_in(dom.a);
    let angular = nodes_in(std::f64::consts::FRAC_PI_2);
    let cells: Vec<((f64, f64), (f64, f64))> = radial
        .iter()
        .flat_map(|&r| angular.iter().map(move |&t| (r, t)))
        .collect();
    let (al, be, l2) = (m.alpha, m.beta, m.lambda * m.lambda);
    let vals = par::map(&cells, |&((r, wr), (t, wt))| -> Result<f64> {
        let (s, c) = t.sin_cos();
        let p = Point::new(r * c, r * s);
        let (gx, gy) = u.weighted_grad(&p)?;
        let (xa, yb) = (p.x.powf(2.0 * al), p.y.powf(2.0 * be));
        let mut e = gx * gx * yb / xa + gy * gy * xa / yb;
        if l2 != 0.0 {
            let v = u.value(&p)?;
            e += l2 * xa * yb * v * v;
        }
        Ok(wr * wt * r * e)
    });
    let mut lhs = 0.0;
    for v in vals {
        lhs += v?;
    }
    let rhs: f64 = boundary_samples(u, dom, m, quad)?
        .iter()
        .map(|&(w, v, dn)| w * v * dn)
        .sum();
    let den = lhs.abs().max(rhs.abs());
    Ok(EnergyReport {
        lhs,
        rhs,
        defect: if den == 0.0 { 0.0 } else { (lhs - rhs).abs() / den },
    })
}

/// Integrals over the circle of radius ρ about p₀ with u a solution regular
/// there. `j11` … `j14` are the four parts of ∫ x^{2α} y^{2β} u ∂q4/∂n ds
/// (the a-shifted, unshifted, x-shifted and y-shifted series in that order),
/// `j2` the image part of the same integral for G4, and `jg` the integral of
/// x^{2α} y^{2β} G4 ∂u/∂n. The normal points toward p₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RingIntegrals {
    pub rho: f64,
    pub j11: f64,
    pub j12: f64,
    pub j13: f64,
    pub j14: f64,
    pub j2: f64,
    pub jg: f64,
}

/// Ring integrals by the trapezoidal rule with `n` nodes in the angle.
pub fn ring_integrals(
    u: &dyn Solution,
    p0: &Point,
    rho: f64,
    n: usize,
    dom: &QuarterDisk,
    m: &MediumParams,
    cfg: &SeriesConfig,
) -> Result<RingIntegrals> {
    if !(rho > 0.0 && rho < dom.boundary_distance(p0)) {
        return Err(Error::Domain(format!(
            "ring of radius {rho} does not fit inside the domain"
        )));
    }
    if n < 4 {
        return Err(Error::Domain(format!("ring rule needs at least 4 nodes, got {n}")));
    }
    let img = image_point(p0, dom, m)?;
    let angles: Vec<f64> = (0..n)
        .map(|k| 2.0 * std::f64::consts::PI * k as f64 / n as f64)
        .collect();
    let h = 2.0 * std::f64::consts::PI / n as f64 * rho;
    let parts = par::map(&angles, |&phi| -> Result<[f64; 6]> {
        let (s, c) = phi.sin_cos();
        let p = Point::new(p0.x + rho * c, p0.y + rho * s);
        let tangent = (s, -c);
        let (xa, yb) = (p.x.powf(2.0 * m.alpha), p.y.powf(2.0 * m.beta));
        let uv = u.value(&p)?;
        let wt = h * xa * yb * uv;
        let t = normal_derivative_q4_terms(&p, tangent, p0, m, cfg)?;
        let im = normal_derivative_q4(&p, tangent, &img.point(), m, cfg)?;
        let (gx, gy) = u.weighted_grad(&p)?;
        // x^{2α} y^{2β} ∂u/∂n with n = (−cos φ, −sin φ)
        let dn = -(yb * gx * c + xa * gy * s);
        let g = g4(&p, p0, dom, m, cfg)?;
        Ok([
            wt * t.t[0],
            wt * t.t[1],
            wt * t.t[2],
            wt * t.t[3],
            -img.scale_factor * wt * im.value,
            h * g.value * dn,
        ])
    });
    let mut acc = [0.0; 6];
    for part in parts {
        for (a, v) in acc.iter_mut().zip(part?) {
            *a += v;
        }
    }
    Ok(RingIntegrals {
        rho,
        j11: acc[0],
        j12: acc[1],
        j13: acc[2],
        j14: acc[3],
        j2: acc[4],
        jg: acc[5],
    })
}

/// The double series left after the singular factors are taken out of the
/// a-shifted q4 series on the circle of radius ρ about p₀ at angle φ:
///
/// A2(3−α−β; 1−α, 1−β; 2−2α, 2−2β; ξ, η, ζ) (1−ξ)^{1−α} (1−η)^{1−β}.
///
/// As ρ → 0 it tends to Γ(2−2α)Γ(2−2β) / (Γ(1−α)Γ(1−β)Γ(3−α−β)).
pub fn p11(rho: f64, phi: f64, p0: &Point, m: &MediumParams, cfg: &SeriesConfig) -> Result<SeriesResult> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Domain(format!("radius must be positive, got {rho}")));
    }
    let (s, c) = phi.sin_cos();
    let p = Point::new(p0.x + rho * c, p0.y + rho * s);
    let r2 = rho * rho;
    let xi = -4.0 * p.x * p0.x / r2;
    let eta = -4.0 * p.y * p0.y / r2;
    let zeta = -m.lambda * m.lambda * r2 / 4.0;
    let (al, be) = (m.alpha, m.beta);
    let params = A2Params::new(3.0 - al - be, 1.0 - al, 1.0 - be, 2.0 - 2.0 * al, 2.0 - 2.0 * be);
    let f = (1.0 - xi).powf(1.0 - al) * (1.0 - eta).powf(1.0 - be);
    Ok(a2_3(&params, xi, eta, zeta, cfg)?.scaled(f, 8.0 * f64::EPSILON))
}
