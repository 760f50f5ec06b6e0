//! Command-line front end of the `helmholtz-gaspt` library.
//!
//! Exit status: 0 on success, 1 when a computation fails (or an audit does
//! not pass), 2 for unusable flags or configuration.

mod commands;
mod config;
mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use helmholtz_gaspt::par;
use serde_json::json;

use config::{ConfigError, Format, RunConfig};
use output::write_json;

#[derive(Parser, Debug)]
#[command(
    name = "helmholtz-gaspt",
    version,
    about = "Fundamental solutions, Green's function and Dirichlet solver for the bi-axially symmetric Helmholtz equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Evaluate a fundamental solution q1..q4 on a grid over [0, a]².
    EvalFundamental,
    /// Evaluate the Green's function of the quarter disk on a polar grid.
    EvalGreen,
    /// Solve the Dirichlet problem on a polar grid inside the quarter disk.
    Solve,
    /// Run the self-check suite and report one record per check (JSON).
    Audit,
    /// Error table under grid refinement or panel doubling.
    Convergence,
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Flat `key = value` configuration file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    beta: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    lambda: Option<String>,
    /// Radius a of the quarter disk.
    #[arg(long, global = true)]
    radius: Option<String>,
    /// Grid size NXxNY (radial x angular for the domain commands).
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Explicit points `X,Y;X,Y;...` in units of the radius.
    #[arg(long, global = true)]
    points: Option<String>,
    /// Data family (zero, constant, quadratic, pole4, pole1) or three CSV
    /// files TAU1,TAU2,PHI with `coordinate,value` columns.
    #[arg(long, global = true)]
    data: Option<String>,
    /// Source point `X,Y` in units of the radius.
    #[arg(long, global = true)]
    source: Option<String>,
    /// Which fundamental solution eval-fundamental evaluates (1-4).
    #[arg(long, global = true)]
    index: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Record per-point failures in the output instead of stopping.
    #[arg(long, global = true)]
    keep_going: bool,
    /// Comma-separated grid sizes or panel counts for convergence.
    #[arg(long, global = true)]
    sizes: Option<String>,
    /// Convergence study: fd or panels.
    #[arg(long, global = true)]
    study: Option<String>,
    /// Solve with the finite-difference solver on an N x N grid.
    #[arg(long, global = true)]
    fd: Option<String>,
}

impl Flags {
    fn apply(&self, cfg: &mut RunConfig) -> Result<(), ConfigError> {
        let pairs = [
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("lambda", &self.lambda),
            ("radius", &self.radius),
            ("grid", &self.grid),
            ("points", &self.points),
            ("data", &self.data),
            ("source", &self.source),
            ("index", &self.index),
            ("format", &self.format),
            ("sizes", &self.sizes),
            ("study", &self.study),
            ("fd", &self.fd),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, v).map_err(|m| ConfigError::new(format!("--{key}"), m))?;
            }
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        if self.keep_going {
            cfg.keep_going = true;
        }
        Ok(())
    }
}

fn config_error(e: &ConfigError) -> ExitCode {
    let record = json!({ "error": { "kind": "ConfigError", "source": e.source, "message": e.message } });
    eprintln!("{record}");
    ExitCode::from(2)
}

fn run_error(e: &helmholtz_gaspt::Error) -> ExitCode {
    let record = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
    eprintln!("{record}");
    ExitCode::from(1)
}

fn write_out(cfg: &RunConfig, f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<(), String> {
    let result = match &cfg.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let mut w = BufWriter::new(file);
            f(&mut w).and_then(|_| w.flush())
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            f(&mut w).and_then(|_| w.flush())
        }
    };
    result.map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.flags.config {
        if let Err(e) = cfg.apply_file(path) {
            return config_error(&e);
        }
    }
    if let Err(e) = cli.flags.apply(&mut cfg) {
        return config_error(&e);
    }
    match par::max_threads_from_env() {
        Ok(cap) => par::configure_threads(cap),
        Err(e) => return config_error(&ConfigError::new(par::THREADS_ENV, e.to_string())),
    }
    let res = match cfg.resolve() {
        Ok(r) => r,
        Err(e) => return config_error(&e),
    };

    let written = match cli.command {
        Command::Audit => match commands::audit(&cfg, &res) {
            Ok(report) => {
                let passed = report.passed;
                let w = match cfg.format.unwrap_or(Format::Json) {
                    Format::Json => write_out(&cfg, |w| write_json(&report, w)),
                    Format::Csv => {
                        let mut t = output::Table::new("audit", vec!["name", "value", "threshold", "status", "error"]);
                        for r in &report.records {
                            let status = serde_json::to_value(r.status)
                                .ok()
                                .and_then(|v| v.as_str().map(String::from));
                            t.push(vec![
                                output::Cell::Text(r.name.into()),
                                output::Cell::opt(r.value),
                                output::Cell::num(r.threshold),
                                output::Cell::Text(status.unwrap_or_default()),
                                output::Cell::Text(r.error.clone().unwrap_or_default()),
                            ]);
                        }
                        write_out(&cfg, |w| t.write(Format::Csv, w))
                    }
                };
                w.map(|_| passed)
            }
            Err(e) => return run_error(&e),
        },
        other => {
            let table = match (other, cfg.fd) {
                (Command::EvalFundamental, _) => commands::eval_fundamental(&cfg, &res),
                (Command::EvalGreen, _) => commands::eval_green(&cfg, &res),
                (Command::Solve, Some(n)) => commands::fd_field(&res, n),
                (Command::Solve, None) => commands::solve(&cfg, &res),
                _ => commands::convergence(&cfg, &res),
            };
            match table {
                Ok(t) => write_out(&cfg, |w| t.write(cfg.format.unwrap_or(Format::Csv), w)).map(|_| true),
                Err(e) => return run_error(&e),
            }
        }
    };
    match written {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("{}", json!({ "error": { "kind": "OutputError", "message": msg } }));
            ExitCode::from(1)
        }
    }
}
