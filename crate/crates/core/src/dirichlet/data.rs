use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fundsol::{q, weighted_grad_q4, FundIndex, MediumParams, Point};
use crate::green::QuarterDisk;
use crate::hyperfun::SeriesConfig;

/// Monotone piecewise cubic Hermite interpolant (Fritsch–Carlson slopes).
///
/// Between samples the curve stays within the range of the two neighbouring
/// values, so monotone data are never given spurious wiggles.
#[derive(Debug, Clone, PartialEq)]
pub struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl Pchip {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::Data(format!(
                "need at least two (coordinate, value) samples, got {} and {}",
                xs.len(),
                ys.len()
            )));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::Data("samples must be finite".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Data("coordinates must be strictly increasing".into()));
        }
        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let del: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
        let mut ds = vec![0.0; n];
        if n == 2 {
            ds[0] = del[0];
            ds[1] = del[0];
        } else {
            for k in 1..n - 1 {
                if del[k - 1] * del[k] > 0.0 {
                    // weighted harmonic mean
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    ds[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
                }
            }
            ds[0] = end_slope(h[0], h[1], del[0], del[1]);
            ds[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
        }
        Ok(Pchip { xs, ys, ds })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    /// Value at `x`; outside the sample range the end values are held.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let k = self.xs.partition_point(|&v| v <= x) - 1;
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[k] + h10 * h * self.ds[k] + h01 * self.ys[k + 1] + h11 * h * self.ds[k + 1]
    }
}

fn on_segment(t: f64, dom: &QuarterDisk) -> Result<()> {
    if !(t >= 0.0 && t <= dom.a * (1.0 + 1e-12)) {
        return Err(Error::Domain(format!(
            "axis coordinate {t} lies outside [0, {}]",
            dom.a
        )));
    }
    Ok(())
}

/// Three-point end slope, limited to keep the end interval monotone.
fn end_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d * del0 <= 0.0 {
        0.0
    } else if del0 * del1 <= 0.0 && d.abs() > 3.0 * del0.abs() {
        3.0 * del0
    } else {
        d
    }
}

#[derive(Debug, Deserialize)]
struct Sample {
    coordinate: f64,
    value: f64,
}

/// Read a `coordinate,value` table with a header row.
pub fn read_samples(path: &Path) -> Result<Pchip> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for row in rdr.deserialize::<Sample>() {
        let s = row.map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        xs.push(s.coordinate);
        ys.push(s.value);
    }
    Pchip::new(xs, ys).map_err(|e| Error::Data(format!("{}: {e}", path.display())))
}

/// A solution of the equation with known values and weighted gradient,
/// used as a source of exact boundary data and for the identity checks.
pub trait Solution: Send + Sync {
    fn value(&self, p: &Point) -> Result<f64>;

    /// (x^{2α} u_x, y^{2β} u_y), finite up to the axes.
    fn weighted_grad(&self, p: &Point) -> Result<(f64, f64)>;
}

/// u = q4(·, pole) with the pole outside the closed quarter disk.
#[derive(Debug, Clone, Copy)]
pub struct PoleSolution {
    pub pole: Point,
    pub params: MediumParams,
    pub cfg: SeriesConfig,
}

impl Solution for PoleSolution {
    fn value(&self, p: &Point) -> Result<f64> {
        Ok(q(FundIndex::Q4, p, &self.pole, &self.params, &self.cfg)?.value)
    }

    fn weighted_grad(&self, p: &Point) -> Result<(f64, f64)> {
        let g = weighted_grad_q4(p, &self.pole, &self.params, &self.cfg)?;
        Ok((g.gx, g.gy))
    }
}

/// u = (1+2β) x² − (1+2α) y², a solution for λ = 0.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticSolution {
    pub params: MediumParams,
}

impl Solution for QuadraticSolution {
    fn value(&self, p: &Point) -> Result<f64> {
        let m = &self.params;
        Ok((1.0 + 2.0 * m.beta) * p.x * p.x - (1.0 + 2.0 * m.alpha) * p.y * p.y)
    }

    fn weighted_grad(&self, p: &Point) -> Result<(f64, f64)> {
        let m = &self.params;
        Ok((
            2.0 * (1.0 + 2.0 * m.beta) * p.x.powf(1.0 + 2.0 * m.alpha),
            -2.0 * (1.0 + 2.0 * m.alpha) * p.y.powf(1.0 + 2.0 * m.beta),
        ))
    }
}

/// Dirichlet data (τ₁ on the x-axis segment, τ₂ on the y-axis segment, φ on
/// the arc by arc length from (a, 0)).
#[derive(Clone)]
pub enum BoundaryData {
    Zero,
    Constant(f64),
    /// Restriction of a fundamental solution with its pole outside the domain.
    Pole {
        index: FundIndex,
        pole: Point,
        params: MediumParams,
        cfg: SeriesConfig,
    },
    /// (1+2β) x² − (1+2α) y².
    Quadratic {
        params: MediumParams,
    },
    Tabulated {
        tau1: Arc<Pchip>,
        tau2: Arc<Pchip>,
        phi: Arc<Pchip>,
    },
    /// Σ cₖ dataₖ.
    Combination(Vec<(f64, BoundaryData)>),
}

impl std::fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryData::Zero => write!(f, "Zero"),
            BoundaryData::Constant(c) => write!(f, "Constant({c})"),
            BoundaryData::Pole { index, pole, .. } => write!(f, "Pole({index:?} at ({}, {}))", pole.x, pole.y),
            BoundaryData::Quadratic { .. } => write!(f, "Quadratic"),
            BoundaryData::Tabulated { .. } => write!(f, "Tabulated"),
            BoundaryData::Combination(v) => f.debug_list().entries(v.iter()).finish(),
        }
    }
}

/// Built-in data families selectable by name.
pub const FAMILIES: [&str; 5] = ["zero", "constant", "quadratic", "pole4", "pole1"];

impl BoundaryData {
    /// Default exterior pole (1.2a, 1.2a).
    pub fn default_pole(dom: &QuarterDisk) -> Point {
        Point::new(1.2 * dom.a, 1.2 * dom.a)
    }

    /// A named family: `zero`, `constant` (u = 1), `quadratic`, `pole4` or
    /// `pole1` (q4 or q1 with the pole at (1.2a, 1.2a)).
    pub fn family(name: &str, dom: &QuarterDisk, params: &MediumParams, cfg: &SeriesConfig) -> Result<Self> {
        let pole = |index| BoundaryData::Pole {
            index,
            pole: Self::default_pole(dom),
            params: *params,
            cfg: *cfg,
        };
        match name {
            "zero" => Ok(BoundaryData::Zero),
            "constant" => Ok(BoundaryData::Constant(1.0)),
            "quadratic" => Ok(BoundaryData::Quadratic { params: *params }),
            "pole4" => Ok(pole(FundIndex::Q4)),
            "pole1" => Ok(pole(FundIndex::Q1)),
            _ => Err(Error::Data(format!(
                "unknown data family {name:?} (expected one of {})",
                FAMILIES.join(", ")
            ))),
        }
    }

    /// Tabulated data from three `coordinate,value` CSV files.
    pub fn from_csv(tau1: &Path, tau2: &Path, phi: &Path) -> Result<Self> {
        Ok(BoundaryData::Tabulated {
            tau1: Arc::new(read_samples(tau1)?),
            tau2: Arc::new(read_samples(tau2)?),
            phi: Arc::new(read_samples(phi)?),
        })
    }

    /// Sample this data at `n` points per piece into tabulated form.
    pub fn tabulate(&self, dom: &QuarterDisk, n: usize) -> Result<Self> {
        let n = n.max(2);
        let sample = |len: f64, f: &dyn Fn(f64) -> Result<f64>| -> Result<Pchip> {
            let xs: Vec<f64> = (0..n).map(|k| len * k as f64 / (n - 1) as f64).collect();
            let ys = xs.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
            Pchip::new(xs, ys)
        };
        Ok(BoundaryData::Tabulated {
            tau1: Arc::new(sample(dom.a, &|x| self.tau1(x, dom))?),
            tau2: Arc::new(sample(dom.a, &|y| self.tau2(y, dom))?),
            phi: Arc::new(sample(dom.arc_length(), &|s| self.phi(s, dom))?),
        })
    }

    pub fn scaled(self, c: f64) -> Self {
        BoundaryData::Combination(vec![(c, self)])
    }

    fn at(&self, p: &Point, piece: Piece, t: f64) -> Result<f64> {
        match self {
            BoundaryData::Zero => Ok(0.0),
            BoundaryData::Constant(c) => Ok(*c),
            BoundaryData::Pole {
                index,
                pole,
                params,
                cfg,
            } => Ok(q(*index, p, pole, params, cfg)?.value),
            BoundaryData::Quadratic { params } => QuadraticSolution { params: *params }.value(p),
            BoundaryData::Tabulated { tau1, tau2, phi } => Ok(match piece {
                Piece::XAxis => tau1.eval(t),
                Piece::YAxis => tau2.eval(t),
                Piece::Arc => phi.eval(t),
            }),
            BoundaryData::Combination(parts) => {
                let mut s = 0.0;
                for (c, d) in parts {
                    s += c * d.at(p, piece, t)?;
                }
                Ok(s)
            }
        }
    }

    /// τ₁(x) = u(x, 0).
    pub fn tau1(&self, x: f64, dom: &QuarterDisk) -> Result<f64> {
        on_segment(x, dom)?;
        self.at(&Point::new(x, 0.0), Piece::XAxis, x)
    }

    /// τ₂(y) = u(0, y).
    pub fn tau2(&self, y: f64, dom: &QuarterDisk) -> Result<f64> {
        on_segment(y, dom)?;
        self.at(&Point::new(0.0, y), Piece::YAxis, y)
    }

    /// φ(s) = u on the arc at arc length s from (a, 0).
    pub fn phi(&self, s: f64, dom: &QuarterDisk) -> Result<f64> {
        let (p, _) = dom.arc_point(s);
        self.at(&p, Piece::Arc, s)
    }

    /// Check τ₁(0) = τ₂(0), τ₁(a) = φ(0) and τ₂(a) = φ(πa/2) to `tol`
    /// relative to the largest corner value (absolute below 1).
    pub fn check_corners(&self, dom: &QuarterDisk, tol: f64) -> Result<()> {
        let pairs = [
            ("O", self.tau1(0.0, dom)?, self.tau2(0.0, dom)?),
            ("A", self.tau1(dom.a, dom)?, self.phi(0.0, dom)?),
            ("B", self.tau2(dom.a, dom)?, self.phi(dom.arc_length(), dom)?),
        ];
        for (corner, left, right) in pairs {
            let scale = left.abs().max(right.abs()).max(1.0);
            if !((left - right).abs() <= tol * scale) {
                return Err(Error::CornerMismatch { corner, left, right });
            }
        }
        Ok(())
    }

    /// The solution these data come from, when it is known in closed form.
    pub fn exact(&self, params: &MediumParams) -> Option<Box<dyn Solution>> {
        match self {
            BoundaryData::Pole {
                index: FundIndex::Q4,
                pole,
                params,
                cfg,
            } => Some(Box::new(PoleSolution {
                pole: *pole,
                params: *params,
                cfg: *cfg,
            })),
            BoundaryData::Quadratic { params: p } if p.lambda == 0.0 && params.lambda == 0.0 => {
                Some(Box::new(QuadraticSolution { params: *p }))
            }
            _ => None,
        }
    }

    /// Exact interior value, when the family solves the equation with
    /// parameters `params`.
    pub fn exact_value(&self, p: &Point, params: &MediumParams) -> Option<Result<f64>> {
        match self {
            BoundaryData::Zero => Some(Ok(0.0)),
            BoundaryData::Constant(c) if params.lambda == 0.0 => Some(Ok(*c)),
            BoundaryData::Pole {
                index,
                pole,
                params: own,
                cfg,
            } if own == params => Some(q(*index, p, pole, own, cfg).map(|s| s.value)),
            BoundaryData::Quadratic { params: own } if own == params && params.lambda == 0.0 => {
                Some(QuadraticSolution { params: *own }.value(p))
            }
            BoundaryData::Combination(parts) => {
                let mut s = 0.0;
                for (c, d) in parts {
                    match d.exact_value(p, params)? {
                        Ok(v) => s += c * v,
                        Err(e) => return Some(Err(e)),
                    }
                }
                Some(Ok(s))
            }
            _ => None,
        }
    }

    /// True when every value is zero by construction.
    pub fn is_zero(&self) -> bool {
        match self {
            BoundaryData::Zero => true,
            BoundaryData::Constant(c) => *c == 0.0,
            BoundaryData::Combination(parts) => parts.iter().all(|(c, d)| *c == 0.0 || d.is_zero()),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Piece {
    XAxis,
    YAxis,
    Arc,
}
