use super::accel::levin_u;
use super::gamma::{gamma_ratio, pochhammer_guarded};
use super::gauss::gauss_2f1;
use super::h3::h3;
use super::shifted::ShiftedGauss;
use super::{dist_to_nonpos_int, nonpos_int, SeriesConfig, SeriesResult, EPS};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Parameter tuple (a; b1, b2; c1, c2) of the triple series
///
/// A2(x, y, z) = Σ (a)_{m+n-p} (b1)_m (b2)_n / ((c1)_m (c2)_n m! n! p!) x^m y^n z^p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct A2Params {
    pub a: f64,
    pub b1: f64,
    pub b2: f64,
    pub c1: f64,
    pub c2: f64,
}

impl A2Params {
    pub fn new(a: f64, b1: f64, b2: f64, c1: f64, c2: f64) -> Self {
        A2Params { a, b1, b2, c1, c2 }
    }

    fn check(&self, z: f64, cfg: &SeriesConfig) -> Result<()> {
        for c in [self.c1, self.c2] {
            if dist_to_nonpos_int(c) < cfg.pole_guard {
                return Err(Error::PolePochhammer {
                    a: c,
                    n: (1.0 - c).round() as i64,
                });
            }
        }
        // (a)_{k-p} with p > k has poles at a = 1, 2, ...
        if z != 0.0 && self.a >= 1.0 - cfg.pole_guard && (self.a - self.a.round()).abs() < cfg.pole_guard {
            return Err(Error::PolePochhammer {
                a: self.a,
                n: -(self.a.round() as i64),
            });
        }
        Ok(())
    }
}

/// Σ_p (a)_{k-p} z^p / p! divided by (a)_k, that is
/// Σ_p z^p / (p! (a+k-1)(a+k-2)...(a+k-p)), with an absolute error bound.
///
/// Callers fold (a)_k into their running coefficient so that nothing
/// overflows at large k. Not usable when (a)_k = 0.
pub(crate) fn neg_index_ratio(a: f64, k: usize, z: f64, cfg: &SeriesConfig) -> Result<(f64, f64)> {
    if z == 0.0 {
        return Ok((1.0, 0.0));
    }
    neg_index_tail(a, k, z, 0, 1.0, cfg)
}

/// Σ_p (a)_{k-p} z^p / p! without normalisation, for a a non-positive
/// integer where (a)_k may vanish while later terms do not.
pub(crate) fn neg_index_sum(a: f64, k: usize, z: f64, cfg: &SeriesConfig) -> Result<(f64, f64)> {
    let lead = pochhammer_guarded(a, k as i64, cfg.pole_guard)?;
    if z == 0.0 {
        return Ok((lead, 2.0 * EPS * lead.abs() * (k as f64 + 1.0)));
    }
    let p0 = match nonpos_int(a) {
        Some(m) if (k as u64) > m => k - m as usize,
        _ => 0,
    };
    let t0 = if p0 == 0 {
        lead
    } else {
        let mut f = 1.0;
        for p in 1..=p0 {
            f *= z / p as f64;
        }
        pochhammer_guarded(a, k as i64 - p0 as i64, cfg.pole_guard)? * f
    };
    neg_index_tail(a, k, z, p0, t0, cfg)
}

fn neg_index_tail(a: f64, k: usize, z: f64, p0: usize, t0: f64, cfg: &SeriesConfig) -> Result<(f64, f64)> {
    let kf = k as f64;
    let mut t = t0;
    let mut s = t;
    let mut abs_sum = t.abs();
    let mut p = p0;
    loop {
        let den = (p as f64 + 1.0) * (a + kf - p as f64 - 1.0);
        let r = z / den;
        t *= r;
        s += t;
        abs_sum += t.abs();
        p += 1;
        // past the turning point the ratio |z| / ((p+1)|a+k-p-1|) only decreases
        if p as f64 > kf + a.abs() + 1.0 {
            let rho = r.abs();
            if t == 0.0 {
                return Ok((s, 2.0 * EPS * abs_sum));
            }
            if rho < 0.5 && t.abs() * rho / (1.0 - rho) <= EPS * 0.5 * s.abs().max(abs_sum * 1e-3) {
                return Ok((s, t.abs() * 2.0 + 2.0 * EPS * abs_sum));
            }
        }
        if p > k + cfg.max_terms_outer {
            return Err(Error::MaxTermsExceeded { limit: p, partial: s });
        }
    }
}

/// Direct summation of the triple series, valid for |x| + |y| < 1.
///
/// The p-index is summed innermost (it only enters through (a)_{m+n-p}, so
/// the p-sum is cached per total degree m+n), then n, then m, each with a
/// ratio-based tail bound.
pub fn a2_3_direct(p: &A2Params, x: f64, y: f64, z: f64, cfg: &SeriesConfig) -> Result<SeriesResult> {
    if !(x.is_finite() && y.is_finite() && z.is_finite()) {
        return Err(Error::Domain("non-finite A2 argument".into()));
    }
    let reach = x.abs() + y.abs();
    if reach >= 1.0 {
        return Err(Error::DivergentSeries(format!(
            "direct A2 series needs |x| + |y| < 1, got {reach}"
        )));
    }
    p.check(z, cfg)?;
    let cap = cfg.max_terms_per_axis;
    // (a)_{m+n} lives in the running coefficient unless it can vanish while
    // the z-sum does not
    let folded = !(z != 0.0 && nonpos_int(p.a).is_some());
    let mut g: Vec<(f64, f64)> = Vec::new();
    let gk = |k: usize, g: &mut Vec<(f64, f64)>| -> Result<(f64, f64)> {
        while g.len() <= k {
            let v = if folded {
                neg_index_ratio(p.a, g.len(), z, cfg)?
            } else {
                neg_index_sum(p.a, g.len(), z, cfg)?
            };
            g.push(v);
        }
        Ok(g[k])
    };
    let afac = |k: f64| if folded { p.a + k } else { 1.0 };
    let mut total = 0.0;
    let mut abs_total = 0.0;
    let mut err = 0.0;
    let mut terms = 0usize;
    let mut head_m = 1.0; // [(a)_m] (b1)_m x^m / ((c1)_m m!)
    let mut prev_slab: Option<f64> = None;
    for m in 0..cap {
        let mf = m as f64;
        let mut head = head_m;
        let mut slab = 0.0;
        let mut prev_t: Option<f64> = None;
        let mut slab_tail = f64::INFINITY;
        for n in 0..cap {
            let nf = n as f64;
            let (gv, ge) = gk(m + n, &mut g)?;
            let t = head * gv;
            slab += t;
            abs_total += t.abs();
            err += head.abs() * ge;
            terms += 1;
            if y == 0.0 {
                slab_tail = 0.0;
                break;
            }
            if let Some(pt) = prev_t {
                if pt != 0.0 {
                    let obs = (t / pt).abs();
                    let rho = obs.max(y.abs());
                    if obs < 1.0 && rho < 1.0 {
                        let tail = t.abs() * rho / (1.0 - rho);
                        if tail <= cfg.tol(slab).max(cfg.tol(total) * 1e-2) {
                            slab_tail = tail;
                            break;
                        }
                    }
                } else if t == 0.0 {
                    slab_tail = 0.0;
                    break;
                }
            }
            prev_t = Some(t);
            head *= afac(mf + nf) * (p.b2 + nf) * y / ((p.c2 + nf) * (nf + 1.0));
        }
        if !slab_tail.is_finite() {
            return Err(Error::MaxTermsExceeded {
                limit: cap,
                partial: total + slab,
            });
        }
        total += slab;
        err += slab_tail;
        let done = |tail: f64| SeriesResult {
            value: total,
            abs_error_estimate: err + tail + 2.0 * EPS * abs_total,
            terms_used: terms,
        };
        if x == 0.0 {
            return Ok(done(0.0));
        }
        if let Some(ps) = prev_slab {
            if ps != 0.0 {
                let obs = (slab / ps).abs();
                let rho = obs.max(reach);
                if obs < 1.0 && rho < 1.0 {
                    let tail = slab.abs() * rho / (1.0 - rho);
                    if tail <= cfg.tol(total) {
                        return Ok(done(tail));
                    }
                }
            } else if slab == 0.0 {
                return Ok(done(0.0));
            }
        }
        prev_slab = Some(slab);
        head_m *= afac(mf) * (p.b1 + mf) * x / ((p.c1 + mf) * (mf + 1.0));
    }
    Err(Error::MaxTermsExceeded {
        limit: cap,
        partial: total,
    })
}

/// The family F(A_j, b + i; c + i; X) for successive j, each advanced in i.
enum Family {
    Shifted(ShiftedGauss),
    Generic { a: f64, b: f64, c: f64, x: f64 },
}

impl Family {
    fn new(a: f64, b: f64, c: f64, x: f64, start: usize, cfg: &SeriesConfig) -> Result<Family> {
        if (0.0..1.0).contains(&x) {
            Ok(Family::Shifted(ShiftedGauss::new(a, b, c, x, start, cfg)?))
        } else {
            Ok(Family::Generic { a, b, c, x })
        }
    }

    fn at(&mut self, i: usize, cfg: &SeriesConfig) -> Result<SeriesResult> {
        match self {
            Family::Shifted(s) => s.at(i),
            Family::Generic { a, b, c, x } => {
                let fi = i as f64;
                gauss_2f1(*a, *b + fi, *c + fi, *x, cfg)
            }
        }
    }
}

/// Number of leading outer terms handed to the Levin transform when the
/// plain outer sum would need more than `max_terms_outer` terms.
const LEVIN_TERMS: usize = 40;

/// Inner double sum of the expansion formula, without the prefactor
/// (1-x)^{-b1} (1-y)^{-b2}:
///
/// Σ_{i,j} (a)_{i-j}(b1)_i(b2)_i / ((c1)_i(c2)_i i! j!) (XY)^i z^j
///   F(c1-a+j, b1+i; c1+i; X) F(c2-a+j, b2+i; c2+i; Y),  X = x/(x-1), Y = y/(y-1).
///
/// Requires x, y < 1 and |XY| < 1.
pub fn expansion_core(p: &A2Params, x: f64, y: f64, z: f64, cfg: &SeriesConfig) -> Result<SeriesResult> {
    if !(x < 1.0 && y < 1.0 && z.is_finite()) {
        return Err(Error::Domain(format!("expansion needs x, y < 1, got ({x}, {y})")));
    }
    p.check(z, cfg)?;
    let bx = x / (x - 1.0);
    let by = y / (y - 1.0);
    let q = bx * by;
    if q.abs() >= 1.0 {
        return Err(Error::DivergentSeries(format!(
            "expansion ratio |XY| = {} >= 1",
            q.abs()
        )));
    }
    let tol_terms = (1.0 / cfg.rel_tol).ln() + 10.0;
    let needed = if q == 0.0 { 1.0 } else { tol_terms / -(q.abs().ln()) };
    let levin = needed > cfg.max_terms_outer as f64;
    if levin && p.b1 + p.b2 - p.a - 1.0 >= -1.0 && q > 0.0 {
        // the outer terms decay no faster than 1/i up to i ~ 1/(1-XY); the
        // transform cannot see the cutoff and extrapolation would be biased
        return Err(Error::MaxTermsExceeded {
            limit: cfg.max_terms_outer,
            partial: f64::NAN,
        });
    }
    let cap = if levin { LEVIN_TERMS } else { cfg.max_terms_outer };

    let mut fx: Vec<Family> = Vec::new();
    let mut fy: Vec<Family> = Vec::new();
    let mut rows: Vec<f64> = Vec::new();
    let mut total = 0.0;
    let mut abs_total = 0.0;
    let mut err = 0.0;
    let mut terms = 0usize;
    let folded = !(z != 0.0 && nonpos_int(p.a).is_some());
    // [(a)_i] (b1)_i(b2)_i / ((c1)_i(c2)_i i!) q^i
    let mut head = 1.0;
    for i in 0..cap {
        let fi = i as f64;
        let mut row = 0.0;
        // (a)_{i-j} z^j / j!, divided by (a)_i when that factor is folded into head
        let mut d = if folded {
            1.0
        } else {
            pochhammer_guarded(p.a, fi as i64, cfg.pole_guard)?
        };
        let mut j = 0usize;
        let mut row_done = false;
        while !row_done {
            let fj = j as f64;
            if fx.len() <= j {
                fx.push(Family::new(p.c1 - p.a + fj, p.b1, p.c1, bx, i, cfg)?);
                fy.push(Family::new(p.c2 - p.a + fj, p.b2, p.c2, by, i, cfg)?);
            }
            let t = if head == 0.0 || d == 0.0 {
                0.0
            } else {
                let f1 = fx[j].at(i, cfg)?;
                let f2 = fy[j].at(i, cfg)?;
                let c = head * d;
                err += (c * f1.abs_error_estimate * f2.value).abs() + (c * f1.value * f2.abs_error_estimate).abs();
                c * f1.value * f2.value
            };
            row += t;
            abs_total += t.abs();
            terms += 1;
            if z == 0.0 {
                row_done = true;
            } else {
                let den = (fj + 1.0) * (p.a + fi - fj - 1.0);
                let r = z / den;
                let next_d = if folded || d != 0.0 {
                    d * r
                } else {
                    pochhammer_guarded(p.a, fi as i64 - fj as i64 - 1, cfg.pole_guard)? * z.powi(j as i32 + 1)
                        / (1..=j + 1).map(|k| k as f64).product::<f64>()
                };
                // F(A+1, ...)/F(A, ...) is bounded by 1/(1-X) for X in [0, 1)
                let growth = (1.0 / (1.0 - bx.max(0.0))) * (1.0 / (1.0 - by.max(0.0)));
                let rho = (r * growth).abs();
                if fj > fi + p.a.abs() + 1.0 && rho < 0.5 {
                    let tail = t.abs() * rho / (1.0 - rho);
                    if tail <= cfg.tol(row).max(cfg.tol(total)) * 1e-2 {
                        err += tail;
                        row_done = true;
                    }
                }
                if j > i + cfg.max_terms_per_axis {
                    return Err(Error::MaxTermsExceeded {
                        limit: j,
                        partial: total + row,
                    });
                }
                d = next_d;
                j += 1;
            }
        }
        total += row;
        rows.push(row);
        if q == 0.0 {
            return Ok(SeriesResult {
                value: total,
                abs_error_estimate: err + 2.0 * EPS * abs_total,
                terms_used: terms,
            });
        }
        if !levin && i >= 2 {
            let prev = rows[i - 1];
            if prev != 0.0 {
                let obs = (row / prev).abs();
                let rho = obs.max(q.abs());
                if obs < 1.0 && rho < 1.0 {
                    let tail = row.abs() * rho / (1.0 - rho);
                    if tail <= cfg.tol(total) {
                        return Ok(SeriesResult {
                            value: total,
                            abs_error_estimate: err + tail + 2.0 * EPS * abs_total,
                            terms_used: terms,
                        });
                    }
                }
            } else if row == 0.0 {
                return Ok(SeriesResult {
                    value: total,
                    abs_error_estimate: err + 2.0 * EPS * abs_total,
                    terms_used: terms,
                });
            }
        }
        let af = if folded { p.a + fi } else { 1.0 };
        head *= af * (p.b1 + fi) * (p.b2 + fi) / ((p.c1 + fi) * (p.c2 + fi) * (fi + 1.0)) * q;
    }
    if levin {
        let (v, e) = levin_u(&rows).ok_or(Error::MaxTermsExceeded {
            limit: cap,
            partial: total,
        })?;
        // the transform extrapolates a pure power-law tail; the geometric
        // cutoff at i ~ 1/(1-XY) shifts the limit by about eps |ln eps|
        let eps = 1.0 - q.abs();
        let bias = eps * (1.0 + eps.ln().abs()) * v.abs();
        return Ok(SeriesResult {
            value: v,
            abs_error_estimate: e + bias + err + 2.0 * EPS * abs_total,
            terms_used: terms,
        });
    }
    Err(Error::MaxTermsExceeded {
        limit: cap,
        partial: total,
    })
}

/// Expansion in products of Gauss functions, valid for x, y <= 0.
///
/// A2 = (1-x)^{-b1} (1-y)^{-b2} Σ_{i,j} (a)_{i-j}(b1)_i(b2)_i/((c1)_i(c2)_i i! j!)
///      (XY)^i z^j F(c1-a+j, b1+i; c1+i; X) F(c2-a+j, b2+i; c2+i; Y)
///
/// with X = x/(x-1), Y = y/(y-1) in [0, 1).
pub fn a2_3_expansion(p: &A2Params, x: f64, y: f64, z: f64, cfg: &SeriesConfig) -> Result<SeriesResult> {
    if !(x <= 0.0 && y <= 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::Domain(format!("expansion needs x, y <= 0, got ({x}, {y})")));
    }
    let core = expansion_core(p, x, y, z, cfg)?;
    let f = (1.0 - x).powf(-p.b1) * (1.0 - y).powf(-p.b2);
    let rel = 4.0 * EPS * (1.0 + (p.b1 * (1.0 - x).ln()).abs() + (p.b2 * (1.0 - y).ln()).abs());
    Ok(core.scaled(f, rel))
}

/// Evaluation through the transformation
///
/// A2(a; b1, b2; c1, c2; x, y, z)
///   = (1-x-y)^{-a} A2(a; c1-b1, c2-b2; c1, c2; u, v, z (1-x-y)),
/// u = x/(x+y-1), v = y/(x+y-1),
///
/// which moves x, y <= 0 into the simplex u, v >= 0, u + v < 1. It keeps the
/// z-sum well conditioned where the plain expansion suffers cancellation.
pub fn a2_3_transformed(p: &A2Params, x: f64, y: f64, z: f64, cfg: &SeriesConfig) -> Result<SeriesResult> {
    if !(x <= 0.0 && y <= 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::Domain(format!("transformation needs x, y <= 0, got ({x}, {y})")));
    }
    let s = 1.0 - x - y;
    let u = -x / s;
    let v = -y / s;
    let inner = A2Params::new(p.a, p.c1 - p.b1, p.c2 - p.b2, p.c1, p.c2);
    let zz = z * s;
    let r = if u + v <= 0.5 {
        a2_3_direct(&inner, u, v, zz, cfg)?
    } else {
        let core = expansion_core(&inner, u, v, zz, cfg)?;
        let f = (1.0 - u).powf(-inner.b1) * (1.0 - v).powf(-inner.b2);
        core.scaled(
            f,
            4.0 * EPS * (1.0 + (inner.b1 * (1.0 - u).ln()).abs() + (inner.b2 * (1.0 - v).ln()).abs()),
        )
    };
    Ok(r.scaled(s.powf(-p.a), 4.0 * EPS * (1.0 + (p.a * s.ln()).abs())))
}

/// Panels shrink by this factor toward the ends of the Euler integral.
const PANEL_RATIO: f64 = 4.0;

/// Evaluation through Euler's integral in the first variable,
///
/// A2 = Γ(c1)/(Γ(b1)Γ(c1-b1)) ∫_0^1 t^{b1-1} (1-t)^{c1-b1-1} (1-xt)^{-a}
///        H3(a, b2; c2; y/(1-xt), z(1-xt)) dt,
///
/// for x, y <= 0 and c1 > b1 > 0 (or the same in the second variable with the
/// roles swapped). It costs a few hundred H3 values but no longer depends on
/// how close (x, y) is to the singular corner, which is where the series
/// representations need their term counts to grow without bound.
///
/// The integrand changes on the scale t ~ 1/|x|, so the panels are geometric
/// toward both ends, and the two end panels absorb the power singularities by
/// the substitutions t = h s^{1/b1} and 1-t = h s^{1/(c1-b1)}. The error
/// estimate compares 16- and 12-point rules on every panel.
pub fn a2_3_integral(p: &A2Params, x: f64, y: f64, z: f64, cfg: &SeriesConfig) -> Result<SeriesResult> {
    if !(x <= 0.0 && y <= 0.0 && x.is_finite() && y.is_finite() && z.is_finite()) {
        return Err(Error::Domain(format!("Euler integral needs x, y <= 0, got ({x}, {y})")));
    }
    p.check(z, cfg)?;
    let ok1 = p.c1 > p.b1 && p.b1 > 0.0;
    let ok2 = p.c2 > p.b2 && p.b2 > 0.0;
    // integrate over the variable with the larger modulus when both are allowed
    let first = match (ok1, ok2) {
        (true, true) => x.abs() >= y.abs(),
        (true, false) => true,
        (false, true) => false,
        (false, false) => {
            return Err(Error::Domain(format!(
                "Euler integral needs c > b > 0 in one variable, got {p:?}"
            )))
        }
    };
    let (b, c, u, bo, co, v) = if first {
        (p.b1, p.c1, x, p.b2, p.c2, y)
    } else {
        (p.b2, p.c2, y, p.b1, p.c1, x)
    };
    let e = c - b;
    let (norm, norm_rel) = gamma_ratio(&[c], &[b, e], cfg.pole_guard)?;
    let inner_cfg = SeriesConfig {
        rel_tol: cfg.rel_tol.min(1e-13),
        ..*cfg
    };
    // (1-ut)^{-a} H3(a, bo; co; v/(1-ut), z(1-ut)) with its error
    let smooth = |t: f64| -> Result<(f64, f64)> {
        let w = 1.0 - u * t;
        let f = w.powf(-p.a);
        let h = h3(p.a, bo, co, v / w, z * w, &inner_cfg)?;
        Ok((
            f * h.value,
            f.abs() * h.abs_error_estimate + 4.0 * EPS * (f * h.value).abs(),
        ))
    };

    let hi_rule = GaussLegendre::shared(16);
    let lo_rule = GaussLegendre::shared(12);
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut mag = 0.0;
    let mut evals = 0;
    let mut panel = |g: &mut dyn FnMut(f64) -> Result<(f64, f64)>, lo: f64, hi: f64| -> Result<()> {
        let mut s16 = 0.0;
        let mut e16 = 0.0;
        let mut m16 = 0.0;
        for (s, w) in hi_rule.mapped(lo, hi) {
            let (v, dv) = g(s)?;
            s16 += w * v;
            e16 += w.abs() * dv;
            m16 += (w * v).abs();
        }
        let mut s12 = 0.0;
        for (s, w) in lo_rule.mapped(lo, hi) {
            s12 += w * g(s)?.0;
        }
        evals += hi_rule.len() + lo_rule.len();
        sum += s16;
        err += e16 + (s16 - s12).abs();
        mag += m16;
        Ok(())
    };

    // t = 0 side: panels [h/4, h] down to t0, then t = t0 s^{1/b} on [0, t0]
    let t0 = 1e-9 / u.abs().max(1.0);
    // 1-t side: down to 1-t1
    let t1 = 1e-10;
    let mid = 0.5;
    let mut h = mid;
    while h > t0 {
        let l = (h / PANEL_RATIO).max(t0);
        panel(
            &mut |t| {
                smooth(t).map(|(v, dv)| {
                    let wt = t.powf(b - 1.0) * (1.0 - t).powf(e - 1.0);
                    (wt * v, wt.abs() * dv)
                })
            },
            l,
            h,
        )?;
        h = l;
    }
    panel(
        &mut |s| {
            let t = t0 * s.powf(1.0 / b);
            smooth(t).map(|(v, dv)| {
                let wt = (1.0 - t).powf(e - 1.0) * t0.powf(b) / b;
                (wt * v, wt.abs() * dv)
            })
        },
        0.0,
        1.0,
    )?;
    let mut h = 1.0 - mid;
    while h > t1 {
        let l = (h / PANEL_RATIO).max(t1);
        panel(
            &mut |r| {
                smooth(1.0 - r).map(|(v, dv)| {
                    let t = 1.0 - r;
                    let wt = t.powf(b - 1.0) * r.powf(e - 1.0);
                    (wt * v, wt.abs() * dv)
                })
            },
            l,
            h,
        )?;
        h = l;
    }
    panel(
        &mut |s| {
            let r = t1 * s.powf(1.0 / e);
            smooth(1.0 - r).map(|(v, dv)| {
                let wt = (1.0 - r).powf(b - 1.0) * t1.powf(e) / e;
                (wt * v, wt.abs() * dv)
            })
        },
        0.0,
        1.0,
    )?;

    let err = err + 8.0 * EPS * mag;
    Ok(SeriesResult {
        value: sum,
        abs_error_estimate: err,
        terms_used: evals,
    }
    .scaled(norm, norm_rel))
}

/// Production evaluator choosing the representation by argument:
/// direct series near the origin, the Euler integral for x, y <= 0 near the
/// singular corner, the Gauss-product expansion for other x, y <= 0 when
/// z = 0, and the transformation for x, y <= 0 when z != 0.
pub fn a2_3(p: &A2Params, x: f64, y: f64, z: f64, cfg: &SeriesConfig) -> Result<SeriesResult> {
    let reach = x.abs() + y.abs();
    if reach <= 0.5 {
        return a2_3_direct(p, x, y, z, cfg);
    }
    if x <= 0.0 && y <= 0.0 {
        // outer terms of the expansion grow like 1/(1 - XY) with
        // X = x/(x-1), Y = y/(y-1); past a threshold the Euler integral,
        // whose cost does not grow, is cheaper
        let gap = 1.0 / (1.0 - x) + 1.0 / (1.0 - y) - 1.0 / ((1.0 - x) * (1.0 - y));
        let limit = if z == 0.0 { 0.04 } else { 0.25 };
        if gap < limit {
            match a2_3_integral(p, x, y, z, cfg) {
                Err(Error::Domain(_)) => {}
                r => return r,
            }
        }
        if z == 0.0 {
            return a2_3_expansion(p, x, y, z, cfg);
        }
        return a2_3_transformed(p, x, y, z, cfg);
    }
    if reach < 1.0 {
        return a2_3_direct(
            p,
            x,
            y,
            z,
            &SeriesConfig {
                max_terms_per_axis: cfg.max_terms_per_axis.max(4000),
                ..*cfg
            },
        );
    }
    Err(Error::DivergentSeries(format!(
        "no convergent representation for mixed-sign arguments ({x}, {y})"
    )))
}

/// Partial derivative ∂^{i+j+k} A2 / ∂x^i ∂y^j ∂z^k, which is again an A2 with
/// shifted parameters:
/// (a)_{i+j-k}(b1)_i(b2)_j/((c1)_i(c2)_j) A2(a+i+j-k; b1+i, b2+j; c1+i, c2+j).
pub fn a2_3_partial_derivative(
    orders: (u32, u32, u32),
    p: &A2Params,
    x: f64,
    y: f64,
    z: f64,
    cfg: &SeriesConfig,
) -> Result<SeriesResult> {
    let (i, j, k) = orders;
    let shift = i as i64 + j as i64 - k as i64;
    let coef = pochhammer_guarded(p.a, shift, cfg.pole_guard)?
        * pochhammer_guarded(p.b1, i as i64, cfg.pole_guard)?
        * pochhammer_guarded(p.b2, j as i64, cfg.pole_guard)?
        / (pochhammer_guarded(p.c1, i as i64, cfg.pole_guard)? * pochhammer_guarded(p.c2, j as i64, cfg.pole_guard)?);
    if coef == 0.0 {
        return Ok(SeriesResult::exact(0.0));
    }
    let q = A2Params::new(
        p.a + shift as f64,
        p.b1 + i as f64,
        p.b2 + j as f64,
        p.c1 + i as f64,
        p.c2 + j as f64,
    );
    Ok(a2_3(&q, x, y, z, cfg)?.scaled(coef, 4.0 * EPS * (i + j + k + 1) as f64))
}

/// Both sides of the contiguous relation in the first parameter,
///
/// (a b1/c1) x A2(a+1; b1+1, b2; c1+1, c2) + (a b2/c2) y A2(a+1; b1, b2+1; c1, c2+1)
///   − z/(a−1) A2(a−1; b1, b2; c1, c2)
/// = a A2(a+1; b1, b2; c1, c2) − a A2(a; b1, b2; c1, c2),
///
/// every term by [`a2_3`]. Returns (left, right).
pub fn contiguous_relation(p: &A2Params, x: f64, y: f64, z: f64, cfg: &SeriesConfig) -> Result<(f64, f64)> {
    if (p.a - 1.0).abs() < cfg.pole_guard {
        return Err(Error::Domain("contiguous relation needs a != 1".into()));
    }
    let a = p.a;
    let f = |q: A2Params| a2_3(&q, x, y, z, cfg).map(|r| r.value);
    let up_x = f(A2Params::new(a + 1.0, p.b1 + 1.0, p.b2, p.c1 + 1.0, p.c2))?;
    let up_y = f(A2Params::new(a + 1.0, p.b1, p.b2 + 1.0, p.c1, p.c2 + 1.0))?;
    let down = f(A2Params::new(a - 1.0, p.b1, p.b2, p.c1, p.c2))?;
    let up = f(A2Params::new(a + 1.0, p.b1, p.b2, p.c1, p.c2))?;
    let same = f(*p)?;
    let left = a * p.b1 / p.c1 * x * up_x + a * p.b2 / p.c2 * y * up_y - z / (a - 1.0) * down;
    Ok((left, a * up - a * same))
}
