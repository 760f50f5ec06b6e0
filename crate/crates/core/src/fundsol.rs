//! Fundamental solutions q1..q4 of
//!
//! u_xx + u_yy + (2α/x) u_x + (2β/y) u_y − λ² u = 0
//!
//! in the open quadrant, their normalising constants, and the weighted
//! gradient and normal derivative of q4.
//!
//! Every q_i is a power prefactor times A2 evaluated at the invariants
//! ξ = −4xx₀/r², η = −4yy₀/r², ζ = −λ²r²/4.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperfun::{a2_3, gamma, A2Params, SeriesConfig, SeriesResult};

/// Equation coefficients. Construct through [`MediumParams::new`] to get the
/// validity checks 0 < 2α < 1, 0 < 2β < 1, λ >= 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
}

impl MediumParams {
    pub fn new(alpha: f64, beta: f64, lambda: f64) -> Result<Self> {
        let p = MediumParams { alpha, beta, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok_axis = |v: f64| v.is_finite() && v > 0.0 && 2.0 * v < 1.0;
        if !ok_axis(self.alpha) {
            return Err(Error::InvalidParams(format!(
                "alpha = {} must satisfy 0 < 2 alpha < 1",
                self.alpha
            )));
        }
        if !ok_axis(self.beta) {
            return Err(Error::InvalidParams(format!(
                "beta = {} must satisfy 0 < 2 beta < 1",
                self.beta
            )));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "lambda = {} must be finite and >= 0",
                self.lambda
            )));
        }
        Ok(())
    }

    /// The shared A2 top parameter 2 − α − β of q4.
    pub fn a4(&self) -> f64 {
        2.0 - self.alpha - self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist2(&self, other: &Point) -> f64 {
        (self.x - other.x).powi(2) + (self.y - other.y).powi(2)
    }

    pub fn norm2(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }
}

/// Squared distances to the point and to its axis reflections, and the
/// three series arguments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeomInvariants {
    pub r2: f64,
    pub r1_2: f64,
    pub r2_2: f64,
    pub xi: f64,
    pub eta: f64,
    pub zeta: f64,
}

/// Points closer than this multiple of |p₀|² (squared) count as coincident.
const COINCIDENT_REL: f64 = 1e-12;

pub fn geom_invariants(p: &Point, p0: &Point, lambda: f64) -> Result<GeomInvariants> {
    let r2 = p.dist2(p0);
    let scale = p0.norm2().max(p.norm2());
    if r2 == 0.0 || r2 < COINCIDENT_REL * scale {
        return Err(Error::CoincidentPoints);
    }
    let r1_2 = (p.x + p0.x).powi(2) + (p.y - p0.y).powi(2);
    let r2_2 = (p.x - p0.x).powi(2) + (p.y + p0.y).powi(2);
    Ok(GeomInvariants {
        r2,
        r1_2,
        r2_2,
        xi: -4.0 * p.x * p0.x / r2,
        eta: -4.0 * p.y * p0.y / r2,
        zeta: -lambda * lambda * r2 / 4.0,
    })
}

/// Which of the four fundamental solutions. `Q2` vanishes on the y-axis,
/// `Q3` on the x-axis and `Q4` on both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FundIndex {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl FundIndex {
    pub const ALL: [FundIndex; 4] = [FundIndex::Q1, FundIndex::Q2, FundIndex::Q3, FundIndex::Q4];

    pub fn from_number(i: u8) -> Result<Self> {
        match i {
            1 => Ok(FundIndex::Q1),
            2 => Ok(FundIndex::Q2),
            3 => Ok(FundIndex::Q3),
            4 => Ok(FundIndex::Q4),
            _ => Err(Error::InvalidParams(format!(
                "fundamental solution index {i} not in 1..=4"
            ))),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            FundIndex::Q1 => 1,
            FundIndex::Q2 => 2,
            FundIndex::Q3 => 3,
            FundIndex::Q4 => 4,
        }
    }

    /// Exponents (ex, ey) of the x x₀ and y y₀ prefactors.
    fn axis_exponents(self, m: &MediumParams) -> (f64, f64) {
        let ex = 1.0 - 2.0 * m.alpha;
        let ey = 1.0 - 2.0 * m.beta;
        match self {
            FundIndex::Q1 => (0.0, 0.0),
            FundIndex::Q2 => (ex, 0.0),
            FundIndex::Q3 => (0.0, ey),
            FundIndex::Q4 => (ex, ey),
        }
    }

    /// Parameters of the A2 factor. The A2 top parameter a also fixes the
    /// power (r²)^{-a}.
    pub fn a2_params(self, m: &MediumParams) -> A2Params {
        let (al, be) = (m.alpha, m.beta);
        match self {
            FundIndex::Q1 => A2Params::new(al + be, al, be, 2.0 * al, 2.0 * be),
            FundIndex::Q2 => A2Params::new(1.0 - al + be, 1.0 - al, be, 2.0 - 2.0 * al, 2.0 * be),
            FundIndex::Q3 => A2Params::new(1.0 + al - be, al, 1.0 - be, 2.0 * al, 2.0 - 2.0 * be),
            FundIndex::Q4 => A2Params::new(2.0 - al - be, 1.0 - al, 1.0 - be, 2.0 - 2.0 * al, 2.0 - 2.0 * be),
        }
    }
}

/// Normalising constant k_i = 2^{2a} / (4π) Γ(b1) Γ(b2) Γ(a) / (Γ(c1) Γ(c2))
/// with (a; b1, b2; c1, c2) the A2 parameters of q_i.
pub fn k_const(i: FundIndex, m: &MediumParams) -> f64 {
    let p = i.a2_params(m);
    2f64.powf(2.0 * p.a) / (4.0 * std::f64::consts::PI) * gamma(p.b1) * gamma(p.b2) * gamma(p.a)
        / (gamma(p.c1) * gamma(p.c2))
}

/// q_i(p; p₀). Returns an exact zero when p or p₀ lies on an axis where the
/// prefactor vanishes.
pub fn q(i: FundIndex, p: &Point, p0: &Point, m: &MediumParams, cfg: &SeriesConfig) -> Result<SeriesResult> {
    let (ex, ey) = i.axis_exponents(m);
    if (ex > 0.0 && p.x * p0.x == 0.0) || (ey > 0.0 && p.y * p0.y == 0.0) {
        return Ok(SeriesResult::exact(0.0));
    }
    let g = geom_invariants(p, p0, m.lambda)?;
    let ap = i.a2_params(m);
    let pref = k_const(i, m) * g.r2.powf(-ap.a) * (p.x * p0.x).powf(ex) * (p.y * p0.y).powf(ey);
    let s = a2_3(&ap, g.xi, g.eta, g.zeta, cfg)?;
    Ok(s.scaled(pref, 16.0 * f64::EPSILON))
}

/// The four A2 values that make up the first derivatives of q4:
/// `base` = A2(a; b1, b2; c1, c2), `shift_a` = A2(a+1; b1, b2; c1, c2),
/// `shift_x` = A2(a+1; b1+1, b2; c1+1, c2), `shift_y` = A2(a+1; b1, b2+1; c1, c2+1)
/// with (a; b1, b2; c1, c2) = (2−α−β; 1−α, 1−β; 2−2α, 2−2β).
#[derive(Debug, Clone, Copy)]
struct Q4Pieces {
    g: GeomInvariants,
    base: SeriesResult,
    shift_a: SeriesResult,
    shift_x: SeriesResult,
    shift_y: SeriesResult,
}

fn q4_pieces(p: &Point, p0: &Point, m: &MediumParams, cfg: &SeriesConfig) -> Result<Q4Pieces> {
    let g = geom_invariants(p, p0, m.lambda)?;
    let b = FundIndex::Q4.a2_params(m);
    let sa = A2Params::new(b.a + 1.0, b.b1, b.b2, b.c1, b.c2);
    let sx = A2Params::new(b.a + 1.0, b.b1 + 1.0, b.b2, b.c1 + 1.0, b.c2);
    let sy = A2Params::new(b.a + 1.0, b.b1, b.b2 + 1.0, b.c1, b.c2 + 1.0);
    Ok(Q4Pieces {
        g,
        base: a2_3(&b, g.xi, g.eta, g.zeta, cfg)?,
        shift_a: a2_3(&sa, g.xi, g.eta, g.zeta, cfg)?,
        shift_x: a2_3(&sx, g.xi, g.eta, g.zeta, cfg)?,
        shift_y: a2_3(&sy, g.xi, g.eta, g.zeta, cfg)?,
    })
}

/// Weighted gradient (x^{2α} ∂q4/∂x, y^{2β} ∂q4/∂y) with a combined error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedGrad {
    pub gx: f64,
    pub gy: f64,
    pub abs_error_estimate: f64,
}

/// x^{2α} ∂q4/∂x and y^{2β} ∂q4/∂y.
///
/// With C = k4 (r²)^{α+β−2} and a = 2−α−β:
///
/// x^{2α} q4_x = C x₀^{1−2α} (yy₀)^{1−2β} [(1−2α) A − 2a x x₀/r² A_x − 2a x (x−x₀)/r² A_a]
///
/// and symmetrically in y, where A, A_a, A_x are the base, a-shifted and
/// x-shifted A2 values. Valid on the closed quadrant minus p₀; on the axis
/// x = 0 the first component is the finite weighted trace.
pub fn weighted_grad_q4(p: &Point, p0: &Point, m: &MediumParams, cfg: &SeriesConfig) -> Result<WeightedGrad> {
    if p0.x <= 0.0 || p0.y <= 0.0 {
        return Err(Error::OutsideDomain { x: p0.x, y: p0.y });
    }
    let pc = q4_pieces(p, p0, m, cfg)?;
    let (al, be) = (m.alpha, m.beta);
    let a = m.a4();
    let r2 = pc.g.r2;
    let c = k_const(FundIndex::Q4, m) * r2.powf(-a);
    let ya = (p.y * p0.y).powf(1.0 - 2.0 * be);
    let xa = (p.x * p0.x).powf(1.0 - 2.0 * al);
    let cx = c * p0.x.powf(1.0 - 2.0 * al) * ya;
    let cy = c * p0.y.powf(1.0 - 2.0 * be) * xa;

    let tx = [
        (1.0 - 2.0 * al) * pc.base.value,
        -2.0 * a * p.x * p0.x / r2 * pc.shift_x.value,
        -2.0 * a * p.x * (p.x - p0.x) / r2 * pc.shift_a.value,
    ];
    let ex = (1.0 - 2.0 * al) * pc.base.abs_error_estimate
        + 2.0 * a * p.x * p0.x / r2 * pc.shift_x.abs_error_estimate
        + 2.0 * a * (p.x * (p.x - p0.x)).abs() / r2 * pc.shift_a.abs_error_estimate;
    let ty = [
        (1.0 - 2.0 * be) * pc.base.value,
        -2.0 * a * p.y * p0.y / r2 * pc.shift_y.value,
        -2.0 * a * p.y * (p.y - p0.y) / r2 * pc.shift_a.value,
    ];
    let ey = (1.0 - 2.0 * be) * pc.base.abs_error_estimate
        + 2.0 * a * p.y * p0.y / r2 * pc.shift_y.abs_error_estimate
        + 2.0 * a * (p.y * (p.y - p0.y)).abs() / r2 * pc.shift_a.abs_error_estimate;

    let sx: f64 = tx.iter().sum();
    let sy: f64 = ty.iter().sum();
    let round = 8.0 * f64::EPSILON;
    Ok(WeightedGrad {
        gx: cx * sx,
        gy: cy * sy,
        abs_error_estimate: (cx * ex).abs()
            + (cy * ey).abs()
            + round
                * (cx.abs() * tx.iter().map(|t| t.abs()).sum::<f64>()
                    + cy.abs() * ty.iter().map(|t| t.abs()).sum::<f64>()),
    })
}

/// The four pieces of ∂q4/∂n at a point of a curve with unit tangent
/// (dx/ds, dy/ds) and normal n = (dy/ds, −dx/ds). Their sum is the normal
/// derivative. With C = k4 (r²)^{α+β−2} (xx₀)^{1−2α} (yy₀)^{1−2β}, a = 2−α−β:
///
/// - `t[0]` = −a C A_a ∂(ln r²)/∂n
/// - `t[1]` = k4 (r²)^{α+β−2} x₀^{1−2α} y₀^{1−2β} x^{−2α} y^{−2β}
///   [(1−2α) y dy/ds − (1−2β) x dx/ds] A
/// - `t[2]` = −2a C x₀/r² A_x dy/ds
/// - `t[3]` = +2a C y₀/r² A_y dx/ds
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalDerivTerms {
    pub t: [f64; 4],
    pub abs_error_estimate: f64,
}

impl NormalDerivTerms {
    pub fn total(&self) -> f64 {
        self.t.iter().sum()
    }
}

fn check_tangent(tangent: (f64, f64)) -> Result<()> {
    let n = tangent.0 * tangent.0 + tangent.1 * tangent.1;
    if !((n - 1.0).abs() <= 1e-12) {
        return Err(Error::NonUnitTangent(n.sqrt()));
    }
    Ok(())
}

/// Four-term decomposition of ∂q4(·, p₀)/∂n at an interior point p.
pub fn normal_derivative_q4_terms(
    p: &Point,
    tangent: (f64, f64),
    p0: &Point,
    m: &MediumParams,
    cfg: &SeriesConfig,
) -> Result<NormalDerivTerms> {
    check_tangent(tangent)?;
    if p.x <= 0.0 || p.y <= 0.0 {
        return Err(Error::OutsideDomain { x: p.x, y: p.y });
    }
    let (dxs, dys) = tangent;
    let pc = q4_pieces(p, p0, m, cfg)?;
    let (al, be) = (m.alpha, m.beta);
    let a = m.a4();
    let r2 = pc.g.r2;
    let k4 = k_const(FundIndex::Q4, m);
    let base = k4 * r2.powf(-a);
    let c = base * (p.x * p0.x).powf(1.0 - 2.0 * al) * (p.y * p0.y).powf(1.0 - 2.0 * be);
    let dlog = 2.0 * ((p.x - p0.x) * dys - (p.y - p0.y) * dxs) / r2;
    let c2 = base
        * p0.x.powf(1.0 - 2.0 * al)
        * p0.y.powf(1.0 - 2.0 * be)
        * p.x.powf(-2.0 * al)
        * p.y.powf(-2.0 * be)
        * ((1.0 - 2.0 * al) * p.y * dys - (1.0 - 2.0 * be) * p.x * dxs);
    let coefs = [
        -a * c * dlog,
        c2,
        -2.0 * a * c * p0.x / r2 * dys,
        2.0 * a * c * p0.y / r2 * dxs,
    ];
    let vals = [pc.shift_a, pc.base, pc.shift_x, pc.shift_y];
    let mut t = [0.0; 4];
    let mut err = 0.0;
    for k in 0..4 {
        t[k] = coefs[k] * vals[k].value;
        err += (coefs[k] * vals[k].abs_error_estimate).abs() + 8.0 * f64::EPSILON * t[k].abs();
    }
    Ok(NormalDerivTerms {
        t,
        abs_error_estimate: err,
    })
}

/// ∂q4(·, p₀)/∂n with n = (dy/ds, −dx/ds) the normal to the right of the
/// direction of travel (the exterior normal for counterclockwise traversal).
pub fn normal_derivative_q4(
    p: &Point,
    tangent: (f64, f64),
    p0: &Point,
    m: &MediumParams,
    cfg: &SeriesConfig,
) -> Result<SeriesResult> {
    let nd = normal_derivative_q4_terms(p, tangent, p0, m, cfg)?;
    Ok(SeriesResult {
        value: nd.total(),
        abs_error_estimate: nd.abs_error_estimate,
        terms_used: 4,
    })
}
