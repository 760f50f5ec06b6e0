use super::a2::{neg_index_ratio, neg_index_sum};
use super::gauss::gauss_2f1;
use super::{dist_to_nonpos_int, nonpos_int, SeriesConfig, SeriesResult, EPS};
use crate::error::{Error, Result};

fn check(a: f64, c: f64, y: f64, cfg: &SeriesConfig) -> Result<()> {
    if dist_to_nonpos_int(c) < cfg.pole_guard {
        return Err(Error::PolePochhammer {
            a: c,
            n: (1.0 - c).round() as i64,
        });
    }
    if y != 0.0 && a >= 1.0 - cfg.pole_guard && (a - a.round()).abs() < cfg.pole_guard {
        return Err(Error::PolePochhammer {
            a,
            n: -(a.round() as i64),
        });
    }
    Ok(())
}

/// Horn's H3(a, b; c; x, y) = Σ (a)_{n-p} (b)_n / ((c)_n n! p!) x^n y^p.
///
/// Uses the double series for |x| <= 1/2 and otherwise the representation
/// Σ_p (a)_{-p} y^p / p! 2F1(a-p, b; c; x), which continues H3 to all x < 1.
/// For y > 0 the terms of that sum alternate and grow like
/// (y (1-x))^p / p!^2 before they decay, so the double series is kept up to
/// |x| = 0.9. Far outside the unit disc positive y loses digits to this
/// cancellation; the error estimate accounts for it.
pub fn h3(a: f64, b: f64, c: f64, x: f64, y: f64, cfg: &SeriesConfig) -> Result<SeriesResult> {
    if x.abs() <= 0.5 || (y > 0.0 && x.abs() <= 0.9) {
        return h3_direct(a, b, c, x, y, cfg);
    }
    if !(x < 1.0) || !y.is_finite() {
        return Err(Error::DivergentSeries(format!("H3 needs x < 1, got {x}")));
    }
    check(a, c, y, cfg)?;
    let mut s = 0.0;
    let mut err = 0.0;
    let mut abs_sum = 0.0;
    let mut coef = 1.0; // (a)_{-p} y^p / p!
    let mut terms = 0;
    for p in 0..cfg.max_terms_outer {
        let pf = p as f64;
        let f = gauss_2f1(a - pf, b, c, x, cfg)?;
        let t = coef * f.value;
        s += t;
        abs_sum += t.abs();
        err += (coef * f.abs_error_estimate).abs();
        terms += f.terms_used;
        if y == 0.0 {
            break;
        }
        let r = y / ((pf + 1.0) * (a - pf - 1.0));
        // 2F1(a-p-1, ...)/2F1(a-p, ...) is bounded by max(1, 1-x)
        let rho = (r * (1.0 - x).max(1.0)).abs();
        if pf > a.abs() + 1.0 && rho < 0.5 {
            let tail = t.abs() * rho / (1.0 - rho);
            if tail <= cfg.tol(s) {
                err += tail;
                return Ok(SeriesResult {
                    value: s,
                    abs_error_estimate: err + 2.0 * EPS * abs_sum,
                    terms_used: terms,
                });
            }
        }
        coef *= r;
    }
    if y == 0.0 {
        return Ok(SeriesResult {
            value: s,
            abs_error_estimate: err + 2.0 * EPS * abs_sum,
            terms_used: terms,
        });
    }
    Err(Error::MaxTermsExceeded {
        limit: cfg.max_terms_outer,
        partial: s,
    })
}

/// The defining double series of H3, for |x| < 1.
pub fn h3_direct(a: f64, b: f64, c: f64, x: f64, y: f64, cfg: &SeriesConfig) -> Result<SeriesResult> {
    if !(x.abs() < 1.0) || !y.is_finite() {
        return Err(Error::DivergentSeries(format!(
            "direct H3 series needs |x| < 1, got {x}"
        )));
    }
    check(a, c, y, cfg)?;
    let mut s = 0.0;
    let mut err = 0.0;
    let mut abs_sum = 0.0;
    let folded = !(y != 0.0 && nonpos_int(a).is_some());
    let mut head = 1.0; // [(a)_n] (b)_n x^n / ((c)_n n!)
    let mut prev: Option<f64> = None;
    let cap = cfg.max_terms_per_axis.max(4000);
    for n in 0..cap {
        let nf = n as f64;
        let (g, ge) = if folded {
            neg_index_ratio(a, n, y, cfg)?
        } else {
            neg_index_sum(a, n, y, cfg)?
        };
        let t = head * g;
        s += t;
        abs_sum += t.abs();
        err += (head * ge).abs();
        if x == 0.0 || head == 0.0 {
            return Ok(SeriesResult {
                value: s,
                abs_error_estimate: err + 2.0 * EPS * abs_sum,
                terms_used: n + 1,
            });
        }
        if let Some(pt) = prev {
            if pt != 0.0 {
                let obs = (t / pt).abs();
                let rho = obs.max(x.abs());
                if obs < 1.0 && rho < 1.0 {
                    let tail = t.abs() * rho / (1.0 - rho);
                    if tail <= cfg.tol(s) {
                        return Ok(SeriesResult {
                            value: s,
                            abs_error_estimate: err + tail + 2.0 * EPS * abs_sum,
                            terms_used: n + 1,
                        });
                    }
                }
            }
        }
        prev = Some(t);
        let af = if folded { a + nf } else { 1.0 };
        head *= af * (b + nf) * x / ((c + nf) * (nf + 1.0));
    }
    Err(Error::MaxTermsExceeded { limit: cap, partial: s })
}
