//! Gauss–Legendre rules and composite, endpoint-graded panel layouts.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Largest rule order kept in the shared table.
pub const MAX_NODES: usize = 64;

/// An n-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes from Newton iteration on the three-term Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss–Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for k in 0..n.div_ceil(2) {
            // Tricomi's initial guess for the k-th largest root
            let theta = std::f64::consts::PI * (4.0 * k as f64 + 3.0) / (4.0 * nf + 2.0);
            let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[k] = x;
            nodes[n - 1 - k] = -x;
            weights[k] = w;
            weights[n - 1 - k] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        nodes.reverse();
        weights.reverse();
        GaussLegendre { nodes, weights }
    }

    /// Shared rule of order `n` (1 ..= MAX_NODES).
    pub fn shared(n: usize) -> &'static GaussLegendre {
        static TABLE: OnceLock<Vec<GaussLegendre>> = OnceLock::new();
        assert!((1..=MAX_NODES).contains(&n), "rule order {n} outside 1..={MAX_NODES}");
        let t = TABLE.get_or_init(|| (1..=MAX_NODES).map(GaussLegendre::new).collect());
        &t[n - 1]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 0.5 * (b - a);
        let m = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&t, &w)| (m + h * t, h * w))
    }

    /// ∫_a^b f.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// P_n(x) and P_n'(x).
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss–Legendre layout for the boundary integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// Exponent q of the grading map g(u) = u^q / (u^q + (1-u)^q); 1 is uniform.
    pub endpoint_grading: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            panels: 64,
            nodes_per_panel: 16,
            endpoint_grading: 2.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.panels < 1 {
            return Err(Error::Domain("quadrature needs at least one panel".into()));
        }
        if !(2..=MAX_NODES).contains(&self.nodes_per_panel) {
            return Err(Error::Domain(format!(
                "nodes per panel must lie in 2..={MAX_NODES}, got {}",
                self.nodes_per_panel
            )));
        }
        if !(self.endpoint_grading >= 1.0 && self.endpoint_grading.is_finite()) {
            return Err(Error::Domain(format!(
                "endpoint grading must be a finite exponent >= 1, got {}",
                self.endpoint_grading
            )));
        }
        Ok(())
    }

    /// The same layout with `factor` times as many panels.
    pub fn refined(&self, factor: usize) -> Self {
        QuadratureSpec {
            panels: self.panels * factor,
            ..*self
        }
    }

    /// Panel breakpoints on [a, b], graded toward both ends, with `extra`
    /// breakpoints (e.g. the projection of a nearby source) inserted and the
    /// panels around them split geometrically.
    pub fn breakpoints(&self, a: f64, b: f64, extra: &[(f64, f64)]) -> Vec<f64> {
        let q = self.endpoint_grading;
        let grade = |u: f64| {
            let uq = u.powf(q);
            uq / (uq + (1.0 - u).powf(q))
        };
        let n = self.panels;
        let mut pts: Vec<f64> = (0..=n).map(|k| a + (b - a) * grade(k as f64 / n as f64)).collect();
        for &(c, scale) in extra {
            if !(c > a && c < b) || !(scale > 0.0) {
                continue;
            }
            // geometric refinement toward c down to about `scale`
            let mut h = (b - a) / n as f64;
            pts.push(c);
            while h > 0.25 * scale {
                for s in [c - h, c + h] {
                    if s > a && s < b {
                        pts.push(s);
                    }
                }
                h *= 0.5;
            }
        }
        pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * (b - a).abs());
        pts
    }

    /// ∫_a^b f over the graded layout with optional refinement points.
    pub fn integrate<F: FnMut(f64) -> Result<f64>>(
        &self,
        a: f64,
        b: f64,
        extra: &[(f64, f64)],
        mut f: F,
    ) -> Result<f64> {
        let rule = GaussLegendre::shared(self.nodes_per_panel);
        let pts = self.breakpoints(a, b, extra);
        let mut s = 0.0;
        for w in pts.windows(2) {
            for (x, wt) in rule.mapped(w[0], w[1]) {
                s += wt * f(x)?;
            }
        }
        Ok(s)
    }
}
