use super::{dist_to_nonpos_int, EPS};
use crate::error::{Error, Result};

/// Γ(x). Returns ±inf at the poles.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// ln|Γ(x)| together with the sign of Γ(x).
pub fn ln_gamma(x: f64) -> (f64, f64) {
    let (l, s) = libm::lgamma_r(x);
    (l, if s < 0 { -1.0 } else { 1.0 })
}

/// 1/Γ(x), which is zero at the non-positive integers.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.round() {
        return 0.0;
    }
    if x.abs() < 150.0 {
        1.0 / libm::tgamma(x)
    } else {
        let (l, s) = ln_gamma(x);
        s * (-l).exp()
    }
}

/// Product of gamma functions `Π Γ(num) / Π Γ(den)` in log space.
///
/// A pole in the denominator gives an exact zero; a pole in the numerator is
/// an error. The second component is a relative error bound for the result.
pub(crate) fn gamma_ratio(num: &[f64], den: &[f64], guard: f64) -> Result<(f64, f64)> {
    let mut log = 0.0;
    let mut sign = 1.0;
    let mut mag = 0.0;
    for &d in den {
        if d <= 0.0 && d == d.round() {
            return Ok((0.0, 0.0));
        }
    }
    for &n in num {
        if dist_to_nonpos_int(n) < guard {
            return Err(Error::PoleGamma(n));
        }
        let (l, s) = ln_gamma(n);
        log += l;
        sign *= s;
        mag += l.abs() + 1.0;
    }
    for &d in den {
        let (l, s) = ln_gamma(d);
        log -= l;
        sign *= s;
        mag += l.abs() + 1.0;
    }
    Ok((sign * log.exp(), 4.0 * EPS * mag))
}

const DIRECT_LIMIT: i64 = 64;

/// Pochhammer symbol (a)_n = Γ(a+n)/Γ(a) for any integer n.
///
/// For n < 0 this is 1/((a-1)(a-2)...(a+n)), which has poles at
/// a = 1, 2, ..., -n. Those poles (within the guard distance) are errors,
/// whereas zeros for a non-positive integer and n > -a are returned as 0.
pub fn pochhammer(a: f64, n: i64) -> Result<f64> {
    pochhammer_guarded(a, n, 1e-8)
}

pub(crate) fn pochhammer_guarded(a: f64, n: i64, guard: f64) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    if n < 0 {
        // (a)_{-k} = 1/((a-1)...(a-k)); pole when a-j == 0 for j in 1..=k
        let k = -n;
        let r = a.round();
        if r >= 1.0 && r <= k as f64 && (a - r).abs() < guard {
            return Err(Error::PolePochhammer { a, n });
        }
        if k <= DIRECT_LIMIT {
            let mut p = 1.0;
            for j in 1..=k {
                p *= a - j as f64;
            }
            return Ok(1.0 / p);
        }
        let (la, sa) = ln_gamma(a);
        let (lb, sb) = ln_gamma(a + n as f64);
        return Ok(sa * sb * (lb - la).exp());
    }
    if a <= 0.0 && a == a.round() && (-a) < n as f64 {
        return Ok(0.0);
    }
    if n <= DIRECT_LIMIT {
        let mut p = 1.0;
        for j in 0..n {
            p *= a + j as f64;
        }
        return Ok(p);
    }
    let (la, sa) = ln_gamma(a);
    let (lb, sb) = ln_gamma(a + n as f64);
    Ok(sa * sb * (lb - la).exp())
}
