use super::gamma::gamma_ratio;
use super::shifted::ShiftedGauss;
use super::{dist_to_nonpos_int, nonpos_int, SeriesConfig, SeriesResult, EPS};
use crate::error::{Error, Result};

/// How close c-a-b may come to an integer before the 1-x connection formula
/// is abandoned in favour of brute-force summation.
const GAMMA_INT_GUARD: f64 = 1e-5;

/// Number of terms the direct series is allowed on 0.5 < x < 1 before the
/// connection formula is tried instead.
const DIRECT_TRIAL: usize = 64;

/// Gauss hypergeometric function 2F1(a, b; c; x) for real x <= 1.
///
/// Negative arguments are mapped into (0, 1) by the Pfaff transformation,
/// arguments above 1/2 are treated by the connection formula around x = 1
/// unless the plain series converges quickly, and x = 1 uses Gauss's sum.
pub fn gauss_2f1(a: f64, b: f64, c: f64, x: f64, cfg: &SeriesConfig) -> Result<SeriesResult> {
    let w = 1.0 - x;
    let low = b.min(c);
    if x > 0.5 && w > 0.0 && low >= 2.0 && (low - 1.0) * w > 2.0 && a.is_finite() {
        // both connection terms grow like e^{b(1-x)} and cancel; step down
        // to a small base and come back up along the recurrence in b and c
        let n = low.floor() - 1.0;
        let mut fam = ShiftedGauss::new(a, b - n, c - n, x, n as usize, cfg)?;
        return fam.at(n as usize);
    }
    gauss_2f1_unreduced(a, b, c, x, cfg)
}

/// [`gauss_2f1`] without the reduction of large b and c.
pub(crate) fn gauss_2f1_unreduced(a: f64, b: f64, c: f64, x: f64, cfg: &SeriesConfig) -> Result<SeriesResult> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && x.is_finite()) {
        return Err(Error::Domain(format!("non-finite input to 2F1({a}, {b}; {c}; {x})")));
    }
    if x > 1.0 {
        return Err(Error::DivergentSeries(format!("2F1 argument {x} > 1")));
    }
    if x == 0.0 {
        return Ok(SeriesResult::exact(1.0));
    }
    let poly = match (nonpos_int(a), nonpos_int(b)) {
        (Some(m), Some(n)) => Some(m.min(n)),
        (Some(m), None) | (None, Some(m)) => Some(m),
        _ => None,
    };
    if let Some(n) = poly {
        if (-1.0..=1.0).contains(&x) || dist_to_nonpos_int(c) < cfg.pole_guard {
            return polynomial(a, b, c, x, n, cfg);
        }
    }
    if dist_to_nonpos_int(c) < cfg.pole_guard {
        return Err(Error::PolePochhammer {
            a: c,
            n: (1.0 - c).round() as i64,
        });
    }
    if x == 1.0 {
        let g = c - a - b;
        if g <= 0.0 {
            return Err(Error::DivergentSeries(format!(
                "2F1 at x = 1 needs c - a - b > 0, got {g}"
            )));
        }
        let (v, rel) = gamma_ratio(&[c, g], &[c - a, c - b], cfg.pole_guard)?;
        return Ok(SeriesResult {
            value: v,
            abs_error_estimate: rel * v.abs(),
            terms_used: 1,
        });
    }
    if x < -0.5 {
        // Pfaff: (1-x)^{-a} F(a, c-b; c; x/(x-1)); use the b-version when it terminates
        let t = x / (x - 1.0);
        let (p, q) = if nonpos_int(c - a).is_some() && nonpos_int(c - b).is_none() {
            (b, c - a)
        } else {
            (a, c - b)
        };
        let inner = gauss_2f1_unreduced(p, q, c, t, cfg)?;
        let f = (1.0 - x).powf(-p);
        return Ok(inner.scaled(f, 4.0 * EPS * (1.0 + p.abs() * (1.0 - x).ln().abs())));
    }
    if x <= 0.5 {
        return direct(a, b, c, x, cfg, cfg.max_terms_outer);
    }
    if let Ok(r) = direct(a, b, c, x, cfg, DIRECT_TRIAL) {
        return Ok(r);
    }
    let g = c - a - b;
    if (g - g.round()).abs() < GAMMA_INT_GUARD {
        return direct(a, b, c, x, cfg, cfg.max_terms_outer);
    }
    connection(a, b, c, x, cfg)
}

/// Series that feed a cancelling combination are summed to round-off.
pub(crate) fn full_precision(cfg: &SeriesConfig) -> SeriesConfig {
    SeriesConfig {
        rel_tol: 0.5 * EPS,
        ..*cfg
    }
}

/// Plain power series with a ratio-based tail bound.
pub(crate) fn direct(a: f64, b: f64, c: f64, x: f64, cfg: &SeriesConfig, cap: usize) -> Result<SeriesResult> {
    let mut t = 1.0;
    let mut s = 1.0;
    let mut abs_sum = 1.0;
    let ax = x.abs();
    for k in 0..cap {
        let kf = k as f64;
        let r = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        t *= r;
        s += t;
        abs_sum += t.abs();
        if t == 0.0 {
            return Ok(SeriesResult {
                value: s,
                abs_error_estimate: 2.0 * EPS * abs_sum,
                terms_used: k + 2,
            });
        }
        let rho = r.abs().max(ax);
        if r.abs() < 1.0 && rho < 1.0 {
            let tail = t.abs() * rho / (1.0 - rho);
            if tail <= cfg.tol(s) {
                return Ok(SeriesResult {
                    value: s,
                    abs_error_estimate: tail + 2.0 * EPS * abs_sum,
                    terms_used: k + 2,
                });
            }
        }
    }
    Err(Error::MaxTermsExceeded { limit: cap, partial: s })
}

fn polynomial(a: f64, b: f64, c: f64, x: f64, n: u64, cfg: &SeriesConfig) -> Result<SeriesResult> {
    let mut t = 1.0;
    let mut s = 1.0;
    let mut abs_sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        if (c + kf).abs() < cfg.pole_guard {
            return Err(Error::PolePochhammer { a: c, n: k as i64 + 1 });
        }
        t *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        s += t;
        abs_sum += t.abs();
    }
    Ok(SeriesResult {
        value: s,
        abs_error_estimate: 2.0 * EPS * abs_sum * (n as f64 + 1.0),
        terms_used: n as usize + 1,
    })
}

/// Connection formula around x = 1:
/// F = A1 F(a, b; 1-g; 1-x) + (1-x)^g A2 F(c-a, c-b; 1+g; 1-x), g = c-a-b.
fn connection(a: f64, b: f64, c: f64, x: f64, cfg: &SeriesConfig) -> Result<SeriesResult> {
    let cfg = &full_precision(cfg);
    let g = c - a - b;
    let w = 1.0 - x;
    let (k1, r1) = gamma_ratio(&[c, g], &[c - a, c - b], cfg.pole_guard)?;
    let (k2, r2) = gamma_ratio(&[c, -g], &[a, b], cfg.pole_guard)?;
    let k2 = k2 * w.powf(g);
    let mut value = 0.0;
    let mut err = 0.0;
    let mut mag = 0.0;
    let mut terms = 0;
    if k1 != 0.0 {
        let s = direct(a, b, 1.0 - g, w, cfg, cfg.max_terms_outer)?;
        let t = k1 * s.value;
        value += t;
        mag += t.abs();
        err += k1.abs() * s.abs_error_estimate + r1 * t.abs();
        terms += s.terms_used;
    }
    if k2 != 0.0 {
        let s = direct(c - a, c - b, 1.0 + g, w, cfg, cfg.max_terms_outer)?;
        let t = k2 * s.value;
        value += t;
        mag += t.abs();
        err += k2.abs() * s.abs_error_estimate + (r2 + 4.0 * EPS * (1.0 + (g * w.ln()).abs())) * t.abs();
        terms += s.terms_used;
    }
    Ok(SeriesResult {
        value,
        abs_error_estimate: err + 2.0 * EPS * mag,
        terms_used: terms,
    })
}
