//! Run configuration: built-in defaults, overridden by a flat `key = value`
//! file, overridden in turn by command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};

use helmholtz_gaspt::dirichlet::{BoundaryData, FAMILIES};
use helmholtz_gaspt::fundsol::{FundIndex, MediumParams, Point};
use helmholtz_gaspt::green::QuarterDisk;
use helmholtz_gaspt::hyperfun::SeriesConfig;
use helmholtz_gaspt::quadrature::QuadratureSpec;

/// A problem with the configuration itself; the process exits with status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub source: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(source: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            source: source.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.source, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Study {
    /// Finite-difference grid refinement.
    Fd,
    /// Boundary-quadrature panel doubling.
    Panels,
}

/// Where the Dirichlet data come from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Family(String),
    Csv { tau1: PathBuf, tau2: PathBuf, phi: PathBuf },
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    Size(usize, usize),
    Points(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub radius: f64,
    pub grid: GridSpec,
    pub data: DataSource,
    /// Source point in units of the radius; `None` picks the command default.
    pub source: Option<(f64, f64)>,
    pub index: u8,
    pub out: Option<PathBuf>,
    /// `None` leaves the choice to the command (JSON for audit, CSV otherwise).
    pub format: Option<Format>,
    pub keep_going: bool,
    pub sizes: Option<Vec<usize>>,
    pub study: Study,
    /// Solve with the finite-difference solver on this grid instead.
    pub fd: Option<usize>,
    pub series: SeriesConfig,
    pub quadrature: QuadratureSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            alpha: 0.2,
            beta: 0.3,
            lambda: 0.0,
            radius: 1.0,
            grid: GridSpec::Size(5, 5),
            data: DataSource::Family("pole4".into()),
            source: None,
            index: 4,
            out: None,
            format: None,
            keep_going: false,
            sizes: None,
            study: Study::Fd,
            fd: None,
            series: SeriesConfig::default(),
            quadrature: QuadratureSpec::default(),
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64, String> {
    match v.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("{key} expects a finite number, got {v:?}")),
    }
}

fn parse_usize(key: &str, v: &str) -> Result<usize, String> {
    v.trim()
        .parse::<usize>()
        .map_err(|_| format!("{key} expects a non-negative integer, got {v:?}"))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, String> {
    match v.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("{key} expects true or false, got {v:?}")),
    }
}

fn parse_pair(key: &str, v: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = v.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("{key} expects X,Y, got {v:?}"));
    }
    Ok((parse_f64(key, parts[0])?, parse_f64(key, parts[1])?))
}

/// `NXxNY`, also accepting `×` and `X` as separator.
pub fn parse_grid(v: &str) -> Result<GridSpec, String> {
    let norm = v.trim().replace(['×', 'X'], "x");
    let (a, b) = norm
        .split_once('x')
        .ok_or_else(|| format!("grid expects NXxNY, got {v:?}"))?;
    let nx = parse_usize("grid", a)?;
    let ny = parse_usize("grid", b)?;
    if nx == 0 || ny == 0 {
        return Err(format!("grid sizes must be positive, got {v:?}"));
    }
    Ok(GridSpec::Size(nx, ny))
}

/// `X,Y;X,Y;...`
pub fn parse_points(v: &str) -> Result<GridSpec, String> {
    let pts = v
        .split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_pair("points", s))
        .collect::<Result<Vec<_>, _>>()?;
    if pts.is_empty() {
        return Err("points expects at least one X,Y pair".into());
    }
    Ok(GridSpec::Points(pts))
}

/// A family name, or three CSV paths `TAU1,TAU2,PHI`.
pub fn parse_data(v: &str) -> Result<DataSource, String> {
    let v = v.trim();
    if v.contains(',') {
        let parts: Vec<&str> = v.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!(
                "data expects a family or three CSV paths TAU1,TAU2,PHI, got {v:?}"
            ));
        }
        for p in &parts {
            if !Path::new(p).is_file() {
                return Err(format!("data file {p:?} does not exist"));
            }
        }
        return Ok(DataSource::Csv {
            tau1: parts[0].into(),
            tau2: parts[1].into(),
            phi: parts[2].into(),
        });
    }
    if FAMILIES.contains(&v) {
        Ok(DataSource::Family(v.to_string()))
    } else {
        Err(format!(
            "unknown data family {v:?} (expected one of {})",
            FAMILIES.join(", ")
        ))
    }
}

pub fn parse_format(v: &str) -> Result<Format, String> {
    match v.trim() {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        _ => Err(format!("format expects csv or json, got {v:?}")),
    }
}

pub fn parse_sizes(v: &str) -> Result<Vec<usize>, String> {
    let sizes = v
        .split(',')
        .map(|s| parse_usize("sizes", s))
        .collect::<Result<Vec<_>, _>>()?;
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(format!("sizes expects positive integers, got {v:?}"));
    }
    Ok(sizes)
}

impl RunConfig {
    /// Apply one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "alpha" => self.alpha = parse_f64(key, value)?,
            "beta" => self.beta = parse_f64(key, value)?,
            "lambda" => self.lambda = parse_f64(key, value)?,
            "radius" => self.radius = parse_f64(key, value)?,
            "grid" => self.grid = parse_grid(value)?,
            "points" => self.grid = parse_points(value)?,
            "data" => self.data = parse_data(value)?,
            "source" => self.source = Some(parse_pair(key, value)?),
            "index" => {
                let i = parse_usize(key, value)?;
                if !(1..=4).contains(&i) {
                    return Err(format!("index expects 1, 2, 3 or 4, got {value:?}"));
                }
                self.index = i as u8;
            }
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "format" => self.format = Some(parse_format(value)?),
            "keep_going" => self.keep_going = parse_bool(key, value)?,
            "sizes" => self.sizes = Some(parse_sizes(value)?),
            "study" => {
                self.study = match value.trim() {
                    "fd" => Study::Fd,
                    "panels" => Study::Panels,
                    _ => return Err(format!("study expects fd or panels, got {value:?}")),
                }
            }
            "fd" => self.fd = Some(parse_usize(key, value)?),
            "rel_tol" => self.series.rel_tol = parse_f64(key, value)?,
            "max_terms_per_axis" => self.series.max_terms_per_axis = parse_usize(key, value)?,
            "panels" => self.quadrature.panels = parse_usize(key, value)?,
            "nodes_per_panel" => self.quadrature.nodes_per_panel = parse_usize(key, value)?,
            "grading" => self.quadrature.endpoint_grading = parse_f64(key, value)?,
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    /// Apply a configuration file: one `key = value` per line, `#` starts a
    /// comment, blank lines are skipped.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let src = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::new(&src, e.to_string()))?;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = format!("{src}:{}", n + 1);
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::new(&at, format!("expected key = value, got {line:?}")))?;
            self.set(k.trim(), v.trim()).map_err(|m| ConfigError::new(&at, m))?;
        }
        Ok(())
    }

    /// Check everything the commands rely on and build the library values.
    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let err = |m: String| ConfigError::new("config", m);
        let params = MediumParams::new(self.alpha, self.beta, self.lambda).map_err(|e| err(e.to_string()))?;
        let dom = QuarterDisk::new(self.radius).map_err(|e| err(e.to_string()))?;
        self.quadrature.validate().map_err(|e| err(e.to_string()))?;
        if !(self.series.rel_tol > 0.0 && self.series.rel_tol < 1.0) {
            return Err(err(format!("rel_tol must lie in (0, 1), got {}", self.series.rel_tol)));
        }
        let index = FundIndex::from_number(self.index).map_err(|e| err(e.to_string()))?;
        let data = match &self.data {
            DataSource::Family(name) => BoundaryData::family(name, &dom, &params, &self.series),
            DataSource::Csv { tau1, tau2, phi } => BoundaryData::from_csv(tau1, tau2, phi),
        }
        .map_err(|e| err(e.to_string()))?;
        Ok(Resolved {
            params,
            dom,
            data,
            index,
            source: self.source.map(|(x, y)| Point::new(x * self.radius, y * self.radius)),
        })
    }
}

/// Library objects built from a [`RunConfig`].
#[derive(Debug, Clone)]
pub struct Resolved {
    pub params: MediumParams,
    pub dom: QuarterDisk,
    pub data: BoundaryData,
    pub index: FundIndex,
    pub source: Option<Point>,
}
