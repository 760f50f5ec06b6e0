/// Levin u-transform of a sequence of partial sums.
///
/// `terms[k]` is the k-th term and the partial sums are formed internally.
/// Returns the extrapolated limit and the smallest difference between
/// consecutive transformation orders, which serves as an error estimate.
pub fn levin_u(terms: &[f64]) -> Option<(f64, f64)> {
    let n = terms.len();
    if n < 3 {
        return None;
    }
    let mut sums = Vec::with_capacity(n);
    let mut s = 0.0;
    for &t in terms {
        s += t;
        sums.push(s);
    }
    if terms.contains(&0.0) {
        return None;
    }
    let beta = 1.0;
    let mut best: Option<(f64, f64)> = None;
    let mut prev: Option<f64> = None;
    for k in 1..n {
        let mut num = 0.0;
        let mut den = 0.0;
        let mut binom = 1.0;
        for j in 0..=k {
            if j > 0 {
                binom *= (k - j + 1) as f64 / j as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let ratio = ((beta + j as f64) / (beta + k as f64)).powi(k as i32 - 1);
            let omega = (beta + j as f64) * terms[j];
            let c = sign * binom * ratio / omega;
            num += c * sums[j];
            den += c;
        }
        let l = num / den;
        if !l.is_finite() {
            continue;
        }
        if let Some(p) = prev {
            let d = (l - p).abs();
            if best.is_none_or(|(_, e)| d < e) {
                best = Some((l, d));
            }
        }
        prev = Some(l);
    }
    best
}
