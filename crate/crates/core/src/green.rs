//! Green's function of the quarter disk Ω₀ = {x, y > 0, x² + y² < a²}.
//!
//! G4(p; p₀) = q4(p; p₀) − (R₀²/a²)^{−α−β} q4(p; p̄₀) with the image
//! p̄₀ = a² p₀ / R₀² obtained by inversion in the circle of radius a. q4
//! vanishes on both axes, so G4 does too. On the arc the two terms cancel
//! exactly when λ = 0; for λ > 0 the image term carries a different third
//! series argument and the cancellation is only approximate (see
//! [`arc_residual`]).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fundsol::{k_const, normal_derivative_q4, q, FundIndex, MediumParams, Point};
use crate::hyperfun::{h3, kdf_1_1_0, SeriesConfig, SeriesResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuarterDisk {
    pub a: f64,
}

impl QuarterDisk {
    pub fn new(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParams(format!("radius must be positive, got {a}")));
        }
        Ok(QuarterDisk { a })
    }

    /// Length of the arc Γ.
    pub fn arc_length(&self) -> f64 {
        std::f64::consts::FRAC_PI_2 * self.a
    }

    /// Point of Γ at arc length s from A(a, 0), and the unit tangent
    /// (dx/ds, dy/ds) in the counterclockwise direction.
    pub fn arc_point(&self, s: f64) -> (Point, (f64, f64)) {
        // cos t as the sine of the complementary angle, so that both ends
        // land exactly on the axes
        let sn = (s / self.a).sin();
        let cs = ((self.arc_length() - s) / self.a).sin();
        (Point::new(self.a * cs, self.a * sn), (-sn, cs))
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.x > 0.0 && p.y > 0.0 && p.norm2() < self.a * self.a
    }

    /// Distance from an interior point to the boundary.
    pub fn boundary_distance(&self, p: &Point) -> f64 {
        p.x.min(p.y).min(self.a - p.norm2().sqrt())
    }
}

/// Image point and the multiplier of the image term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImageGeometry {
    pub r0_2: f64,
    pub xbar0: f64,
    pub ybar0: f64,
    pub scale_factor: f64,
}

impl ImageGeometry {
    pub fn point(&self) -> Point {
        Point::new(self.xbar0, self.ybar0)
    }
}

fn check_source(p0: &Point, dom: &QuarterDisk) -> Result<()> {
    if p0.norm2() == 0.0 {
        return Err(Error::OriginSource);
    }
    let on_or_inside = p0.norm2() <= dom.a * dom.a * (1.0 + 1e-12);
    if !(p0.x >= 0.0 && p0.y >= 0.0 && on_or_inside) {
        return Err(Error::OutsideDomain { x: p0.x, y: p0.y });
    }
    Ok(())
}

/// Inversion of p₀ in the circle of radius a, p̄₀ = a² p₀ / R₀², with the
/// image-term multiplier (R₀²/a²)^{−α−β}.
pub fn image_point(p0: &Point, dom: &QuarterDisk, m: &MediumParams) -> Result<ImageGeometry> {
    check_source(p0, dom)?;
    let r0_2 = p0.norm2();
    let k = dom.a * dom.a / r0_2;
    Ok(ImageGeometry {
        r0_2,
        xbar0: k * p0.x,
        ybar0: k * p0.y,
        scale_factor: (r0_2 / (dom.a * dom.a)).powf(-m.alpha - m.beta),
    })
}

/// G4(p; p₀). Exactly zero when p lies on an axis.
pub fn g4(p: &Point, p0: &Point, dom: &QuarterDisk, m: &MediumParams, cfg: &SeriesConfig) -> Result<SeriesResult> {
    let img = image_point(p0, dom, m)?;
    if p.x == 0.0 || p.y == 0.0 {
        return Ok(SeriesResult::exact(0.0));
    }
    let direct = q(FundIndex::Q4, p, p0, m, cfg)?;
    let image = q(FundIndex::Q4, p, &img.point(), m, cfg)?;
    Ok(SeriesResult {
        value: direct.value - img.scale_factor * image.value,
        abs_error_estimate: direct.abs_error_estimate + img.scale_factor * image.abs_error_estimate,
        terms_used: direct.terms_used + image.terms_used,
    })
}

/// Series arguments of the two axis traces. `rho1`, `rho2` (and starred)
/// belong to the point (x, 0), `rho3`, `rho4` to (0, y); the odd ones come
/// from the source, the even ones from its image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceParams {
    pub rho1: f64,
    pub rho1s: f64,
    pub rho2: f64,
    pub rho2s: f64,
    pub rho3: f64,
    pub rho3s: f64,
    pub rho4: f64,
    pub rho4s: f64,
}

/// Squared distances used by the traces: source and image distance from
/// (x, 0) and from (0, y). The image distances are returned divided by
/// a²/R₀², in which form they no longer depend on the image point.
#[derive(Debug, Clone, Copy)]
struct TraceDistances {
    d1: f64,
    d2: f64,
    d3: f64,
    d4: f64,
}

fn trace_distances(x: f64, y: f64, p0: &Point, dom: &QuarterDisk) -> TraceDistances {
    let a = dom.a;
    TraceDistances {
        d1: (x - p0.x).powi(2) + p0.y * p0.y,
        d2: (a - x * p0.x / a).powi(2) + x * x * p0.y * p0.y / (a * a),
        d3: p0.x * p0.x + (y - p0.y).powi(2),
        d4: (a - y * p0.y / a).powi(2) + p0.x * p0.x * y * y / (a * a),
    }
}

impl TraceParams {
    pub fn new(x: f64, y: f64, p0: &Point, dom: &QuarterDisk, m: &MediumParams) -> Self {
        let d = trace_distances(x, y, p0, dom);
        let l2 = m.lambda * m.lambda / 4.0;
        let img = dom.a * dom.a / p0.norm2();
        TraceParams {
            rho1: -4.0 * x * p0.x / d.d1,
            rho1s: -l2 * d.d1,
            rho2: -4.0 * x * p0.x / d.d2,
            rho2s: -l2 * img * d.d2,
            rho3: -4.0 * y * p0.y / d.d3,
            rho3s: -l2 * d.d3,
            rho4: -4.0 * y * p0.y / d.d4,
            rho4s: -l2 * img * d.d4,
        }
    }
}

/// Reading of the squared distance in the source term of the trace on the
/// y-axis. The printed form has (y − y₀²)², which is dimensionally
/// inconsistent; `Corrected` uses (y − y₀)².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceReading {
    #[default]
    Corrected,
    Literal,
}

fn check_trace_arg(t: f64, dom: &QuarterDisk) -> Result<()> {
    if !(t > 0.0 && t <= dom.a) {
        return Err(Error::Domain(format!("trace coordinate {t} outside (0, {}]", dom.a)));
    }
    Ok(())
}

fn combine(pref: f64, first: SeriesResult, w1: f64, second: SeriesResult, w2: f64) -> SeriesResult {
    let v1 = first.value * w1;
    let v2 = second.value * w2;
    SeriesResult {
        value: pref * (v1 - v2),
        abs_error_estimate: pref.abs()
            * (first.abs_error_estimate * w1.abs()
                + second.abs_error_estimate * w2.abs()
                + 8.0 * f64::EPSILON * (v1.abs() + v2.abs())),
        terms_used: first.terms_used + second.terms_used,
    }
}

/// y^{2β} ∂G4/∂y at (x, 0):
///
/// k4 (1−2β) x₀^{1−2α} y₀^{1−2β} x^{1−2α}
///   [H3(a, 1−α; 2−2α; ρ₁, ρ₁*) / d₁^a − H3(a, 1−α; 2−2α; ρ₂, ρ₂*) / d₂^a],
///
/// a = 2−α−β, d₁ = (x−x₀)² + y₀², d₂ = (a_Ω − xx₀/a_Ω)² + x²y₀²/a_Ω².
/// This is the kernel of the x-axis data in the solution formula.
pub fn g4_trace_y0(
    x: f64,
    p0: &Point,
    dom: &QuarterDisk,
    m: &MediumParams,
    cfg: &SeriesConfig,
) -> Result<SeriesResult> {
    check_source(p0, dom)?;
    check_trace_arg(x, dom)?;
    let tp = TraceParams::new(x, 0.0, p0, dom, m);
    let d = trace_distances(x, 0.0, p0, dom);
    let (al, be) = (m.alpha, m.beta);
    let a = m.a4();
    let h1 = h3(a, 1.0 - al, 2.0 - 2.0 * al, tp.rho1, tp.rho1s, cfg)?;
    let h2 = h3(a, 1.0 - al, 2.0 - 2.0 * al, tp.rho2, tp.rho2s, cfg)?;
    let pref = k_const(FundIndex::Q4, m)
        * (1.0 - 2.0 * be)
        * p0.x.powf(1.0 - 2.0 * al)
        * p0.y.powf(1.0 - 2.0 * be)
        * x.powf(1.0 - 2.0 * al);
    Ok(combine(pref, h1, d.d1.powf(-a), h2, d.d2.powf(-a)))
}

/// x^{2α} ∂G4/∂x at (0, y), the mirror image of [`g4_trace_y0`].
pub fn g4_trace_x0(
    y: f64,
    p0: &Point,
    dom: &QuarterDisk,
    m: &MediumParams,
    cfg: &SeriesConfig,
) -> Result<SeriesResult> {
    g4_trace_x0_with(y, p0, dom, m, TraceReading::Corrected, cfg)
}

/// [`g4_trace_x0`] with an explicit reading of the source-term distance.
pub fn g4_trace_x0_with(
    y: f64,
    p0: &Point,
    dom: &QuarterDisk,
    m: &MediumParams,
    reading: TraceReading,
    cfg: &SeriesConfig,
) -> Result<SeriesResult> {
    check_source(p0, dom)?;
    check_trace_arg(y, dom)?;
    let tp = TraceParams::new(0.0, y, p0, dom, m);
    let mut d = trace_distances(0.0, y, p0, dom);
    if reading == TraceReading::Literal {
        d.d3 = p0.x * p0.x + (y - p0.y * p0.y).powi(2);
    }
    let (al, be) = (m.alpha, m.beta);
    let a = m.a4();
    let h1 = h3(a, 1.0 - be, 2.0 - 2.0 * be, tp.rho3, tp.rho3s, cfg)?;
    let h2 = h3(a, 1.0 - be, 2.0 - 2.0 * be, tp.rho4, tp.rho4s, cfg)?;
    let pref = k_const(FundIndex::Q4, m)
        * (1.0 - 2.0 * al)
        * p0.x.powf(1.0 - 2.0 * al)
        * p0.y.powf(1.0 - 2.0 * be)
        * y.powf(1.0 - 2.0 * be);
    Ok(combine(pref, h1, d.d3.powf(-a), h2, d.d4.powf(-a)))
}

/// [`g4_trace_y0`] assembled from the Kampé de Fériet form
///
/// H3(a, b; c; ρ, ρ*) = (1−ρ)^{−b} F(c−a; b; c; 1−a, c−a; ρ/(ρ−1), −ρ*),
///
/// which turns each term into F(β−α; 1−α; 2−2α; α+β−1, β−α; σ, σ*)
/// over d^{1−β} e^{1−α}, with e the squared distance to the mirrored source.
pub fn g4_trace_y0_kdf(
    x: f64,
    p0: &Point,
    dom: &QuarterDisk,
    m: &MediumParams,
    cfg: &SeriesConfig,
) -> Result<SeriesResult> {
    check_source(p0, dom)?;
    check_trace_arg(x, dom)?;
    let (al, be) = (m.alpha, m.beta);
    let d = trace_distances(x, 0.0, p0, dom);
    let am = dom.a;
    let e1 = (x + p0.x).powi(2) + p0.y * p0.y;
    let e2 = (am + x * p0.x / am).powi(2) + x * x * p0.y * p0.y / (am * am);
    let l2 = m.lambda * m.lambda / 4.0;
    let img = am * am / p0.norm2();
    let (top, b, c, g1, g2) = (be - al, 1.0 - al, 2.0 - 2.0 * al, al + be - 1.0, be - al);
    let f1 = kdf_1_1_0(top, b, c, g1, g2, 4.0 * x * p0.x / e1, l2 * d.d1, cfg)?;
    let f2 = kdf_1_1_0(top, b, c, g1, g2, 4.0 * x * p0.x / e2, l2 * img * d.d2, cfg)?;
    let pref = k_const(FundIndex::Q4, m)
        * (1.0 - 2.0 * be)
        * p0.x.powf(1.0 - 2.0 * al)
        * p0.y.powf(1.0 - 2.0 * be)
        * x.powf(1.0 - 2.0 * al);
    let w1 = d.d1.powf(be - 1.0) * e1.powf(al - 1.0);
    let w2 = d.d2.powf(be - 1.0) * e2.powf(al - 1.0);
    Ok(combine(pref, f1, w1, f2, w2))
}

/// [`g4_trace_x0`] assembled from the Kampé de Fériet form.
pub fn g4_trace_x0_kdf(
    y: f64,
    p0: &Point,
    dom: &QuarterDisk,
    m: &MediumParams,
    cfg: &SeriesConfig,
) -> Result<SeriesResult> {
    check_source(p0, dom)?;
    check_trace_arg(y, dom)?;
    let (al, be) = (m.alpha, m.beta);
    let d = trace_distances(0.0, y, p0, dom);
    let am = dom.a;
    let e3 = p0.x * p0.x + (y + p0.y).powi(2);
    let e4 = (am + y * p0.y / am).powi(2) + p0.x * p0.x * y * y / (am * am);
    let l2 = m.lambda * m.lambda / 4.0;
    let img = am * am / p0.norm2();
    let (top, b, c, g1, g2) = (al - be, 1.0 - be, 2.0 - 2.0 * be, al + be - 1.0, al - be);
    let f3 = kdf_1_1_0(top, b, c, g1, g2, 4.0 * y * p0.y / e3, l2 * d.d3, cfg)?;
    let f4 = kdf_1_1_0(top, b, c, g1, g2, 4.0 * y * p0.y / e4, l2 * img * d.d4, cfg)?;
    let pref = k_const(FundIndex::Q4, m)
        * (1.0 - 2.0 * al)
        * p0.x.powf(1.0 - 2.0 * al)
        * p0.y.powf(1.0 - 2.0 * be)
        * y.powf(1.0 - 2.0 * be);
    let w3 = d.d3.powf(al - 1.0) * e3.powf(be - 1.0);
    let w4 = d.d4.powf(al - 1.0) * e4.powf(be - 1.0);
    Ok(combine(pref, f3, w3, f4, w4))
}

/// ∂G4/∂n on Γ at arc length s from A(a, 0), with the exterior normal.
pub fn normal_derivative_g4_on_arc(
    s: f64,
    p0: &Point,
    dom: &QuarterDisk,
    m: &MediumParams,
    cfg: &SeriesConfig,
) -> Result<SeriesResult> {
    if !(s >= 0.0 && s <= dom.arc_length() * (1.0 + 1e-14)) {
        return Err(Error::Domain(format!(
            "arc length {s} outside [0, {}]",
            dom.arc_length()
        )));
    }
    let img = image_point(p0, dom, m)?;
    let (p, tangent) = dom.arc_point(s);
    if p.x <= 0.0 || p.y <= 0.0 {
        return Err(Error::Domain("arc end points carry no normal derivative".into()));
    }
    let direct = normal_derivative_q4(&p, tangent, p0, m, cfg)?;
    let image = normal_derivative_q4(&p, tangent, &img.point(), m, cfg)?;
    Ok(SeriesResult {
        value: direct.value - img.scale_factor * image.value,
        abs_error_estimate: direct.abs_error_estimate + img.scale_factor * image.abs_error_estimate,
        terms_used: direct.terms_used + image.terms_used,
    })
}

/// Largest |G4| / |q4| over `n` interior points of Γ (equally spaced in arc
/// length, end points excluded). Zero up to rounding when λ = 0.
pub fn arc_residual(p0: &Point, dom: &QuarterDisk, m: &MediumParams, n: usize, cfg: &SeriesConfig) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let s = dom.arc_length() * (k as f64 + 0.5) / n as f64;
        let (p, _) = dom.arc_point(s);
        let g = g4(&p, p0, dom, m, cfg)?.value;
        let qv = q(FundIndex::Q4, &p, p0, m, cfg)?.value;
        worst = worst.max((g / qv).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    #[test]
    fn image_points() {
        let m = MediumParams::new(0.2, 0.3, 0.0).unwrap();
        let img = image_point(&Point::new(0.6, 0.8), &QuarterDisk::new(2.0).unwrap(), &m).unwrap();
        assert!((img.xbar0 - 2.4).abs() < 1e-14 && (img.ybar0 - 3.2).abs() < 1e-14);
        let on = Point::new(0.6, 0.8);
        let img = image_point(&on, &QuarterDisk::new(1.0).unwrap(), &m).unwrap();
        assert!((img.xbar0 - 0.6).abs() < 1e-15 && (img.ybar0 - 0.8).abs() < 1e-15);
        assert!((img.scale_factor - 1.0).abs() < 1e-15);
        let d = QuarterDisk::new(1.0).unwrap();
        assert!(matches!(
            image_point(&Point::new(0.0, 0.0), &d, &m),
            Err(Error::OriginSource)
        ));
        assert!(matches!(
            image_point(&Point::new(0.9, 0.9), &d, &m),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn trace_routes_agree() {
        let d = QuarterDisk::new(1.0).unwrap();
        let p0 = Point::new(0.3, 0.4);
        for lam in [0.0, 0.5] {
            let m = MediumParams::new(0.2, 0.3, lam).unwrap();
            for t in [0.1, 0.45, 0.9] {
                let h = g4_trace_y0(t, &p0, &d, &m, &cfg()).unwrap().value;
                let k = g4_trace_y0_kdf(t, &p0, &d, &m, &cfg()).unwrap().value;
                assert!((h - k).abs() < 1e-10 * h.abs(), "{t}: {h} {k}");
                let h = g4_trace_x0(t, &p0, &d, &m, &cfg()).unwrap().value;
                let k = g4_trace_x0_kdf(t, &p0, &d, &m, &cfg()).unwrap().value;
                assert!((h - k).abs() < 1e-10 * h.abs(), "{t}: {h} {k}");
            }
        }
    }

    #[test]
    fn trace_mirror_symmetry() {
        let d = QuarterDisk::new(1.0).unwrap();
        let m = MediumParams::new(0.15, 0.35, 0.4).unwrap();
        let w = MediumParams::new(0.35, 0.15, 0.4).unwrap();
        let p0 = Point::new(0.3, 0.5);
        let pw = Point::new(0.5, 0.3);
        for t in [0.2, 0.6] {
            let a = g4_trace_x0(t, &p0, &d, &m, &cfg()).unwrap().value;
            let b = g4_trace_y0(t, &pw, &d, &w, &cfg()).unwrap().value;
            assert!((a - b).abs() < 1e-13 * a.abs());
        }
    }

    #[test]
    fn arc_vanishing_at_zero_lambda() {
        let d = QuarterDisk::new(1.0).unwrap();
        let m = MediumParams::new(0.2, 0.3, 0.0).unwrap();
        let r = arc_residual(&Point::new(0.3, 0.4), &d, &m, 20, &cfg()).unwrap();
        assert!(r < 1e-8, "{r}");
    }
}
