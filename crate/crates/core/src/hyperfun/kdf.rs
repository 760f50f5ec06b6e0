use super::gauss::gauss_2f1;
use super::{dist_to_nonpos_int, SeriesConfig, SeriesResult, EPS};
use crate::error::{Error, Result};

/// Kampé de Fériet function
///
/// Σ_{r,s} (a)_{r+s} (b)_r / ((c)_r (g1)_s (g2)_s r! s!) x^r y^s,
///
/// summed as Σ_s (a)_s / ((g1)_s (g2)_s s!) y^s 2F1(a+s, b; c; x). The inner
/// Gauss functions carry the continuation to x < 1. When g2 equals a the
/// common Pochhammer factor cancels exactly, so g2 may then sit at a pole.
pub fn kdf_1_1_0(a: f64, b: f64, c: f64, g1: f64, g2: f64, x: f64, y: f64, cfg: &SeriesConfig) -> Result<SeriesResult> {
    if !(x < 1.0) || !y.is_finite() {
        return Err(Error::DivergentSeries(format!(
            "Kampé de Fériet series needs x < 1, got {x}"
        )));
    }
    let cancel = g2 == a;
    for (v, check) in [(c, true), (g1, true), (g2, !cancel)] {
        if check && dist_to_nonpos_int(v) < cfg.pole_guard {
            return Err(Error::PolePochhammer {
                a: v,
                n: (1.0 - v).round() as i64,
            });
        }
    }
    let mut s = 0.0;
    let mut err = 0.0;
    let mut abs_sum = 0.0;
    let mut coef = 1.0;
    let mut terms = 0;
    let growth = 1.0 / (1.0 - x.max(0.0));
    for k in 0..cfg.max_terms_outer {
        let kf = k as f64;
        let f = gauss_2f1(a + kf, b, c, x, cfg)?;
        let t = coef * f.value;
        s += t;
        abs_sum += t.abs();
        err += (coef * f.abs_error_estimate).abs();
        terms += f.terms_used;
        if y == 0.0 || coef == 0.0 {
            break;
        }
        let r = if cancel {
            y / ((g1 + kf) * (kf + 1.0))
        } else {
            (a + kf) * y / ((g1 + kf) * (g2 + kf) * (kf + 1.0))
        };
        let rho = (r * growth).abs();
        if rho < 0.5 && kf > (a.abs() + g1.abs() + g2.abs()) {
            let tail = t.abs() * rho / (1.0 - rho);
            if tail <= cfg.tol(s) {
                err += tail;
                break;
            }
        }
        coef *= r;
        if k + 1 == cfg.max_terms_outer {
            return Err(Error::MaxTermsExceeded {
                limit: cfg.max_terms_outer,
                partial: s,
            });
        }
    }
    Ok(SeriesResult {
        value: s,
        abs_error_estimate: err + 2.0 * EPS * abs_sum,
        terms_used: terms,
    })
}
