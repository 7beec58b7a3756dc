//! `riccati-qlm`: energies, WKB levels, g-series checks, benchmark tables
//! and wave-function curves.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure.

mod benchmark;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use riccati_qlm::curves::{wavefunction_curves, CurveEnergies};
use riccati_qlm::expansion::{verify_2p_law, ExpansionError};
use riccati_qlm::potentials::PotentialError;
use riccati_qlm::qlm::GuessKind;
use riccati_qlm::spectrum::{solve_energy, wkb_level, SolveConfig, SpectrumError};
use riccati_qlm::wkb::WkbError;
use riccati_qlm::Real;
use thiserror::Error;

use config::{CommonArgs, Extra, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> CliError {
        match e {
            SpectrumError::GuessUnsupported(_) | SpectrumError::BadDepth => CliError::Config(e.to_string()),
            SpectrumError::Potential(PotentialError::UnknownModel(_) | PotentialError::BadParameter(_)) => {
                CliError::Config(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<ExpansionError> for CliError {
    fn from(e: ExpansionError) -> CliError {
        match e {
            ExpansionError::JetOrderExhausted(_) => CliError::Config(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<WkbError> for CliError {
    fn from(e: WkbError) -> CliError {
        CliError::Numerical(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "riccati-qlm", version, about = "Bound states by quasilinearization of the Riccati equation")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Energy of one level at iterate depths 1..=p.
    Solve,
    /// WKB energy of one level.
    Wkb,
    /// Compare the g-expansion of iterates 1..=p with the WKB series.
    Series {
        /// Anchor radius (default: middle of the allowed region).
        #[arg(long)]
        r0: Option<String>,
        /// Energy (default: the WKB level `n`).
        #[arg(long)]
        energy: Option<String>,
    },
    /// Reference table for the standard models.
    Benchmark {
        /// Restrict to these model ids (comma separated).
        #[arg(long)]
        only: Option<String>,
        /// Alternative benchmark file.
        #[arg(long)]
        table: Option<std::path::PathBuf>,
    },
    /// Wave functions on a uniform grid as CSV.
    Wavefunction {
        #[arg(long)]
        points: Option<usize>,
        /// Depth of the iterate standing in for the exact solution.
        #[arg(long = "exact-p", default_value_t = 10)]
        exact_p: usize,
        #[arg(long = "stop-tol")]
        stop_tol: Option<String>,
    },
}

fn solve_config(cfg: &RunConfig) -> SolveConfig {
    SolveConfig { digits: cfg.ode_digits(), root_tol: cfg.root_tol, guess: cfg.guess, escalate: true }
}

fn check_guess(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.guess != GuessKind::Langer {
        return Err(CliError::Config("only the langer guess supports energy searches".into()));
    }
    Ok(())
}

fn cmd_solve(cfg: &RunConfig) -> Result<(), CliError> {
    check_guess(cfg)?;
    let model = cfg.model()?;
    let res = solve_energy(&model, cfg.n, cfg.p, None, &solve_config(cfg))?;
    output::emit(cfg, &output::solve_record(cfg, &res), || output::solve_csv(cfg, &res))
}

fn cmd_wkb(cfg: &RunConfig) -> Result<(), CliError> {
    let model = cfg.model()?;
    let e = wkb_level(&model, cfg.n)?;
    let reference = model.reference_energy(cfg.n).map_err(|e| CliError::Numerical(e.to_string()))?;
    let rec = output::wkb_record(cfg, e, reference);
    output::emit(cfg, &rec, || {
        let d = cfg.digits as usize;
        let r = reference.map_or(String::new(), |r| output::fmt(r, d));
        format!("n,wkb,reference\n{},{},{}\n", cfg.n, output::fmt(e, d), r)
    })
}

fn cmd_series(cfg: &RunConfig) -> Result<bool, CliError> {
    let model = cfg.model()?;
    let p_max = cfg.p;
    if p_max == 0 || p_max > 4 {
        return Err(CliError::Config(format!("series needs 1 ≤ p ≤ 4, got {p_max}")));
    }
    let e = match cfg.energy {
        Some(e) => e,
        None => wkb_level(&model, cfg.n)?,
    };
    let r0 = match cfg.r0 {
        Some(r) => r,
        None => {
            let (a, b) = model
                .turning_points(e, riccati_qlm::potentials::KForm::Plain)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            model.r_of_z((a + b) * 0.5 + (b - a) * 0.123)
        }
    };
    let reps = verify_2p_law(&model, e, r0, p_max, cfg.digits)?;
    let holds = reps
        .iter()
        .all(|r| r.degenerate || (r.exact_matches >= 1 << r.p && r.next_differs != Some(false)));
    let rec = output::series_record(cfg, e, r0, &reps, holds);
    output::emit(cfg, &rec, || output::series_csv(&reps))?;
    Ok(holds)
}

fn cmd_wavefunction(cfg: &RunConfig, exact_p: usize) -> Result<(), CliError> {
    check_guess(cfg)?;
    if cfg.format == config::Format::Json {
        return Err(CliError::Config("wavefunction output is CSV only".into()));
    }
    let model = cfg.model()?;
    let res = solve_energy(&model, cfg.n, cfg.p.max(1), None, &solve_config(cfg))?;
    let energies = CurveEnergies { wkb: res.energies[0], qlm1: res.energies[1], exact: res.energy() };
    let points = cfg.points.unwrap_or(200);
    let stop = cfg.stop_tol.unwrap_or(Real::ZERO);
    let curves = wavefunction_curves(&model, cfg.n, energies, exact_p, stop, cfg.ode_digits(), points)?;
    let csv = output::curves_csv(&curves, cfg.digits as usize);
    output::write_text(cfg, &csv)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let (extra, default_p) = match &cli.cmd {
        Cmd::Series { r0, energy } => (Extra { r0: r0.clone(), energy: energy.clone(), ..Extra::default() }, 3),
        Cmd::Wavefunction { points, stop_tol, .. } => {
            (Extra { points: *points, stop_tol: stop_tol.clone(), ..Extra::default() }, 6)
        }
        _ => (Extra::default(), 6),
    };
    match cli.cmd {
        Cmd::Benchmark { only, table } => {
            benchmark::run(&cli.common, only.as_deref(), table.as_deref())?;
            Ok(0)
        }
        Cmd::Solve => cmd_solve(&RunConfig::build(&cli.common, extra, default_p)?).map(|_| 0),
        Cmd::Wkb => cmd_wkb(&RunConfig::build(&cli.common, extra, default_p)?).map(|_| 0),
        Cmd::Series { .. } => {
            let holds = cmd_series(&RunConfig::build(&cli.common, extra, default_p)?)?;
            Ok(if holds { 0 } else { 2 })
        }
        Cmd::Wavefunction { exact_p, .. } => {
            let mut common = cli.common.clone();
            common.format = Some(common.format.unwrap_or(config::Format::Csv));
            cmd_wavefunction(&RunConfig::build(&common, extra, default_p)?, exact_p).map(|_| 0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
