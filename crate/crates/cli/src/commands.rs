//! The five subcommands. Each builds a [`Table`] (or the audit report);
//! point evaluations run through the library's parallel map and come back
//! in grid order.

use std::f64::consts::FRAC_PI_2;

use helmholtz_gaspt::audit::{run_audit, AuditReport};
use helmholtz_gaspt::dirichlet::{solve_at, solve_at_kdf, SolveReport};
use helmholtz_gaspt::fdoracle::{fd_solve, FdField};
use helmholtz_gaspt::fundsol::{q, Point};
use helmholtz_gaspt::green::g4;
use helmholtz_gaspt::hyperfun::SeriesResult;
use helmholtz_gaspt::quadrature::QuadratureSpec;
use helmholtz_gaspt::{par, Error};

use crate::config::{GridSpec, Resolved, RunConfig, Study};
use crate::output::{Cell, Table};

/// Default source point, in units of the radius.
const DEFAULT_SOURCE: (f64, f64) = (0.4, 0.55);

const FD_SIZES: [usize; 3] = [32, 64, 128];
const PANEL_SIZES: [usize; 3] = [8, 16, 32];

/// Probe points of the panel study, in units of the radius.
const PANEL_PROBES: [(f64, f64); 3] = [(0.3, 0.4), (0.5, 0.2), (0.1, 0.7)];

/// Cartesian grid x_i = a i/(nx+1), y_j = a j/(ny+1) over the square
/// [0, a]², rows ordered by y then x.
fn square_grid(cfg: &RunConfig) -> Vec<Point> {
    let a = cfg.radius;
    match &cfg.grid {
        GridSpec::Size(nx, ny) => (1..=*ny)
            .flat_map(|j| {
                (1..=*nx).map(move |i| Point::new(a * i as f64 / (*nx + 1) as f64, a * j as f64 / (*ny + 1) as f64))
            })
            .collect(),
        GridSpec::Points(pts) => pts.iter().map(|&(x, y)| Point::new(x * a, y * a)).collect(),
    }
}

/// Polar grid r_i = a i/(nx+1), θ_j = (π/2) j/(ny+1), which lies inside
/// the quarter disk; explicit points are taken as given.
fn disk_grid(cfg: &RunConfig) -> Vec<Point> {
    let a = cfg.radius;
    match &cfg.grid {
        GridSpec::Size(nr, nt) => (1..=*nt)
            .flat_map(|j| {
                let t = FRAC_PI_2 * j as f64 / (*nt + 1) as f64;
                (1..=*nr).map(move |i| {
                    let r = a * i as f64 / (*nr + 1) as f64;
                    Point::new(r * t.cos(), r * t.sin())
                })
            })
            .collect(),
        GridSpec::Points(pts) => pts.iter().map(|&(x, y)| Point::new(x * a, y * a)).collect(),
    }
}

fn source(res: &Resolved, cfg: &RunConfig) -> Point {
    res.source
        .unwrap_or_else(|| Point::new(DEFAULT_SOURCE.0 * cfg.radius, DEFAULT_SOURCE.1 * cfg.radius))
}

/// Rows for per-point results: the values, or (with `keep_going`) empty
/// cells and the error kind. Without `keep_going` the first error aborts.
fn collect_rows<T>(
    table: &mut Table,
    points: &[Point],
    results: Vec<Result<T, Error>>,
    keep_going: bool,
    cells: impl Fn(&T) -> Vec<Cell>,
) -> Result<(), Error> {
    let width = table.columns.len() - 3;
    for (p, r) in points.iter().zip(results) {
        let mut row = vec![Cell::num(p.x), Cell::num(p.y)];
        match r {
            Ok(v) => {
                let c = cells(&v);
                let bad = c.contains(&Cell::NonFinite);
                row.extend(c);
                row.push(if bad {
                    Cell::Text("NonFinite".into())
                } else {
                    Cell::Empty
                });
            }
            Err(e) if keep_going => {
                eprintln!("warning: ({}, {}): {e}", p.x, p.y);
                row.extend(std::iter::repeat_n(Cell::Empty, width));
                row.push(Cell::Text(e.kind().into()));
            }
            Err(e) => return Err(e),
        }
        table.push(row);
    }
    Ok(())
}

fn series_cells(r: &SeriesResult) -> Vec<Cell> {
    vec![Cell::num(r.value), Cell::num(r.abs_error_estimate)]
}

pub fn eval_fundamental(cfg: &RunConfig, res: &Resolved) -> Result<Table, Error> {
    let p0 = source(res, cfg);
    let points = square_grid(cfg);
    let results = par::map(&points, |p| q(res.index, p, &p0, &res.params, &cfg.series));
    let mut t = Table::new(
        "eval-fundamental",
        vec!["x", "y", "value", "abs_error_estimate", "error"],
    );
    collect_rows(&mut t, &points, results, cfg.keep_going, series_cells)?;
    Ok(t)
}

pub fn eval_green(cfg: &RunConfig, res: &Resolved) -> Result<Table, Error> {
    let p0 = source(res, cfg);
    let points = disk_grid(cfg);
    let results = par::map(&points, |p| g4(p, &p0, &res.dom, &res.params, &cfg.series));
    let mut t = Table::new("eval-green", vec!["x", "y", "value", "abs_error_estimate", "error"]);
    collect_rows(&mut t, &points, results, cfg.keep_going, series_cells)?;
    Ok(t)
}

struct SolvedPoint {
    horn: SolveReport,
    kdf: SolveReport,
    exact: Option<f64>,
}

fn solve_point(p: &Point, res: &Resolved, cfg: &RunConfig, quad: &QuadratureSpec) -> Result<SolvedPoint, Error> {
    let horn = solve_at(p, &res.data, &res.dom, &res.params, quad, &cfg.series)?;
    let kdf = solve_at_kdf(p, &res.data, &res.dom, &res.params, quad, &cfg.series)?;
    let exact = res.data.exact_value(p, &res.params).transpose()?;
    Ok(SolvedPoint { horn, kdf, exact })
}

pub fn solve(cfg: &RunConfig, res: &Resolved) -> Result<Table, Error> {
    let points = disk_grid(cfg);
    let results = par::map(&points, |p| solve_point(p, res, cfg, &cfg.quadrature));
    let mut t = Table::new(
        "solve",
        vec![
            "x",
            "y",
            "value",
            "quadrature_error_estimate",
            "kernel_series_error",
            "cross_check",
            "exact",
            "error",
        ],
    );
    collect_rows(&mut t, &points, results, cfg.keep_going, |s| {
        vec![
            Cell::num(s.horn.value),
            Cell::num(s.horn.quadrature_error_estimate),
            Cell::num(s.horn.kernel_series_error),
            Cell::num((s.horn.value - s.kdf.value).abs()),
            Cell::opt(s.exact),
        ]
    })?;
    Ok(t)
}

/// Discrete field of the finite-difference solver as (x, y, u) rows.
pub fn fd_field(res: &Resolved, n: usize) -> Result<Table, Error> {
    let f = fd_solve(&res.data, &res.dom, &res.params, n)?;
    let mut t = Table::new("solve-fd", vec!["x", "y", "value"]);
    for (p, v) in f.points.iter().zip(&f.values) {
        t.push(vec![Cell::num(p.x), Cell::num(p.y), Cell::num(*v)]);
    }
    Ok(t)
}

pub fn audit(cfg: &RunConfig, res: &Resolved) -> Result<AuditReport, Error> {
    run_audit(&res.params, &res.dom, &cfg.series, &cfg.quadrature)
}

/// One row of a refinement study: size, step column, error or failure.
struct StudyRow {
    size: usize,
    step: Cell,
    error: Result<f64, &'static str>,
}

fn with_ratios(t: &mut Table, rows: &[StudyRow], with_ratio: bool) {
    let mut prev: Option<f64> = None;
    for r in rows {
        let err = r.error.ok();
        let mut row = vec![Cell::Int(r.size as i64), r.step.clone(), Cell::opt(err)];
        if with_ratio {
            row.push(match (prev, err) {
                (Some(p), Some(e)) if e > 0.0 => Cell::num(p / e),
                _ => Cell::Empty,
            });
        }
        row.push(match r.error {
            Ok(_) => Cell::Empty,
            Err(kind) => Cell::Text(kind.into()),
        });
        prev = err;
        t.push(row);
    }
}

fn fd_error(f: &FdField, res: &Resolved) -> Result<f64, Error> {
    f.max_error(|p| {
        res.data.exact_value(p, &res.params).unwrap_or_else(|| {
            Err(Error::Data(
                "the data have no closed-form solution to compare with".into(),
            ))
        })
    })
}

/// Error against the known solution as the finite-difference grid or the
/// number of boundary panels is doubled, with the ratio of successive errors.
pub fn convergence(cfg: &RunConfig, res: &Resolved) -> Result<Table, Error> {
    if res
        .data
        .exact_value(&Point::new(0.5 * cfg.radius, 0.5 * cfg.radius), &res.params)
        .is_none()
    {
        return Err(Error::Data(
            "convergence needs data with a known solution (zero, pole4, pole1; constant or quadratic at lambda = 0)"
                .into(),
        ));
    }
    let mut rows = Vec::new();
    match cfg.study {
        Study::Fd => {
            let sizes = cfg.sizes.clone().unwrap_or_else(|| FD_SIZES.to_vec());
            for n in sizes {
                match fd_solve(&res.data, &res.dom, &res.params, n).and_then(|f| fd_error(&f, res).map(|e| (f, e))) {
                    Ok((f, e)) => rows.push(StudyRow {
                        size: n,
                        step: Cell::num(f.h),
                        error: Ok(e),
                    }),
                    Err(e) if cfg.keep_going => {
                        eprintln!("warning: N = {n}: {e}");
                        rows.push(StudyRow {
                            size: n,
                            step: Cell::num(cfg.radius / n as f64),
                            error: Err(e.kind()),
                        });
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Study::Panels => {
            let sizes = cfg.sizes.clone().unwrap_or_else(|| PANEL_SIZES.to_vec());
            let probes: Vec<Point> = match &cfg.grid {
                GridSpec::Points(_) => disk_grid(cfg),
                GridSpec::Size(..) => PANEL_PROBES
                    .iter()
                    .map(|&(x, y)| Point::new(x * cfg.radius, y * cfg.radius))
                    .collect(),
            };
            for n in sizes {
                let quad = QuadratureSpec {
                    panels: n,
                    ..cfg.quadrature
                };
                let run = || -> Result<f64, Error> {
                    let mut worst: f64 = 0.0;
                    for p in &probes {
                        let got = solve_at(p, &res.data, &res.dom, &res.params, &quad, &cfg.series)?.value;
                        let want = res.data.exact_value(p, &res.params).expect("checked above")?;
                        worst = worst.max((got - want).abs() / want.abs().max(f64::MIN_POSITIVE));
                    }
                    Ok(worst)
                };
                match run() {
                    Ok(e) => rows.push(StudyRow {
                        size: n,
                        step: Cell::Int(quad.nodes_per_panel as i64),
                        error: Ok(e),
                    }),
                    Err(e) if cfg.keep_going => {
                        eprintln!("warning: {n} panels: {e}");
                        rows.push(StudyRow {
                            size: n,
                            step: Cell::Int(quad.nodes_per_panel as i64),
                            error: Err(e.kind()),
                        });
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    let with_ratio = rows.len() > 1;
    let (size_col, step_col, err_col) = match cfg.study {
        Study::Fd => ("n", "h", "max_error"),
        Study::Panels => ("panels", "nodes_per_panel", "max_relative_error"),
    };
    let mut columns = vec![size_col, step_col, err_col];
    if with_ratio {
        columns.push("ratio");
    }
    columns.push("error");
    let mut t = Table::new("convergence", columns);
    with_ratios(&mut t, &rows, with_ratio);
    Ok(t)
}
