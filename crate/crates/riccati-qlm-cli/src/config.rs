//! Run configuration: command-line flags merged with an optional JSON file.
//! The file wins where both set a value.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use riccati_qlm::potentials::{PotentialModel, PotentialSpec};
use riccati_qlm::qlm::GuessKind;
use riccati_qlm::Real;
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guess {
    Langer,
    Ik,
}

impl From<Guess> for GuessKind {
    fn from(g: Guess) -> GuessKind {
        match g {
            Guess::Langer => GuessKind::Langer,
            Guess::Ik => GuessKind::Ik,
        }
    }
}

#[derive(Args, Clone, Debug, Default)]
pub struct CommonArgs {
    /// Potential id, e.g. quartic, harmonic, hulthen.
    #[arg(long, global = true)]
    pub potential: Option<String>,
    /// Parameter overrides as `name=value,...`.
    #[arg(long, global = true)]
    pub params: Option<String>,
    /// Number of nodes of the state.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Angular momentum.
    #[arg(long, global = true)]
    pub l: Option<u32>,
    /// Iteration depth.
    #[arg(long, global = true)]
    pub p: Option<usize>,
    /// Working decimal digits.
    #[arg(long, global = true)]
    pub digits: Option<u32>,
    #[arg(long, global = true, value_enum)]
    pub guess: Option<Guess>,
    /// Local integration tolerance, e.g. 1e-30.
    #[arg(long = "ode-tol", global = true)]
    pub ode_tol: Option<String>,
    /// Energy tolerance of the root search.
    #[arg(long = "root-tol", global = true)]
    pub root_tol: Option<String>,
    /// Write here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub potential: Option<PotentialSpec>,
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub digits: Option<u32>,
    pub guess: Option<Guess>,
    pub tolerances: Option<FileTolerances>,
    pub output: Option<FileOutput>,
    pub r0: Option<String>,
    pub energy: Option<String>,
    pub points: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileTolerances {
    pub ode: Option<String>,
    pub root: Option<String>,
    pub stop: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileOutput {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub spec: PotentialSpec,
    pub n: usize,
    pub p: usize,
    pub digits: u32,
    pub guess: GuessKind,
    pub ode_tol: Option<Real>,
    pub root_tol: Option<Real>,
    pub stop_tol: Option<Real>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub r0: Option<Real>,
    pub energy: Option<Real>,
    pub points: Option<usize>,
}

pub fn parse_real(what: &str, s: &str) -> Result<Real, CliError> {
    s.trim()
        .parse::<Real>()
        .map_err(|_| CliError::Config(format!("{what}: `{s}` is not a decimal number")))
}

pub fn parse_params(s: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("parameter `{item}` is not of the form name=value")))?;
        parse_real(k, v)?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

// File value wins; a differing flag value is reported.
fn pick<T: PartialEq + std::fmt::Debug>(name: &str, flag: Option<T>, file: Option<T>) -> Option<T> {
    match (flag, file) {
        (Some(a), Some(b)) => {
            if a != b {
                eprintln!("warning: {name} from the config file ({b:?}) overrides the flag ({a:?})");
            }
            Some(b)
        }
        (a, b) => b.or(a),
    }
}

impl RunConfig {
    /// Merges flags with the file named by `--config`. `default_p` depends
    /// on the subcommand.
    pub fn build(args: &CommonArgs, extra: Extra, default_p: usize) -> Result<RunConfig, CliError> {
        let file: FileConfig = match &args.config {
            None => FileConfig::default(),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
        };
        let flag_spec = match &args.potential {
            None => None,
            Some(id) => Some(PotentialSpec {
                id: id.clone(),
                params: match &args.params {
                    Some(p) => parse_params(p)?,
                    None => BTreeMap::new(),
                },
                l: args.l.unwrap_or(0),
                units: None,
            }),
        };
        if flag_spec.is_none() && (args.params.is_some() || args.l.is_some()) && file.potential.is_none() {
            return Err(CliError::Config("--params and --l need --potential".into()));
        }
        let spec = pick("potential", flag_spec, file.potential)
            .ok_or_else(|| CliError::Config("no potential given (use --potential or a config file)".into()))?;
        PotentialModel::from_spec(&spec).map_err(|e| CliError::Config(e.to_string()))?;
        let tol_file = file.tolerances.unwrap_or_default();
        let out_file = file.output.unwrap_or_default();
        let ode = pick("ode tolerance", args.ode_tol.clone(), tol_file.ode);
        let root = pick("root tolerance", args.root_tol.clone(), tol_file.root);
        let stop = pick("stop tolerance", extra.stop_tol, tol_file.stop);
        let r0 = pick("r0", extra.r0, file.r0);
        let energy = pick("energy", extra.energy, file.energy);
        let digits = pick("digits", args.digits, file.digits).unwrap_or(34);
        if !(16..=60).contains(&digits) {
            return Err(CliError::Config(format!("digits = {digits} is outside 16..=60")));
        }
        let p = pick("p", args.p, file.p).unwrap_or(default_p);
        let positive = |name: &str, v: Option<String>| -> Result<Option<Real>, CliError> {
            match v {
                None => Ok(None),
                Some(s) => {
                    let x = parse_real(name, &s)?;
                    if x <= Real::ZERO {
                        return Err(CliError::Config(format!("{name} must be positive")));
                    }
                    Ok(Some(x))
                }
            }
        };
        Ok(RunConfig {
            spec,
            n: pick("n", args.n, file.n).unwrap_or(0),
            p,
            digits,
            guess: pick("guess", args.guess, file.guess).unwrap_or(Guess::Langer).into(),
            ode_tol: positive("ode tolerance", ode)?,
            root_tol: positive("root tolerance", root)?,
            stop_tol: positive("stop tolerance", stop)?,
            format: pick("format", args.format, out_file.format).unwrap_or(Format::Json),
            output: pick("output", args.output.clone(), out_file.path),
            r0: r0.map(|s| parse_real("r0", &s)).transpose()?,
            energy: energy.map(|s| parse_real("energy", &s)).transpose()?,
            points: pick("points", extra.points, file.points),
        })
    }

    pub fn model(&self) -> Result<PotentialModel, CliError> {
        PotentialModel::from_spec(&self.spec).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Digits used for integration: `--ode-tol` when given, else `digits`.
    pub fn ode_digits(&self) -> u32 {
        match self.ode_tol {
            Some(t) => ((-t.to_f64().log10()).ceil() as u32).clamp(16, self.digits.max(16)),
            None => self.digits,
        }
    }
}

/// Subcommand-specific values that may also come from the file.
#[derive(Clone, Debug, Default)]
pub struct Extra {
    pub stop_tol: Option<String>,
    pub r0: Option<String>,
    pub energy: Option<String>,
    pub points: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse() {
        let p = parse_params("A=4, a=1").unwrap();
        assert_eq!(p["A"], "4");
        assert_eq!(p["a"], "1");
        assert!(parse_params("A4").is_err());
        assert!(parse_params("A=x").is_err());
    }

    #[test]
    fn file_overrides_flags() {
        let dir = std::env::temp_dir().join(format!("rq-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.json");
        std::fs::write(&path, r#"{"potential": {"id": "harmonic"}, "n": 2}"#).unwrap();
        let args = CommonArgs { potential: Some("quartic".into()), n: Some(1), config: Some(path), ..Default::default() };
        let cfg = RunConfig::build(&args, Extra::default(), 4).unwrap();
        assert_eq!(cfg.spec.id, "harmonic");
        assert_eq!(cfg.n, 2);
        assert_eq!(cfg.p, 4);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"potentail": {}}"#).is_err());
    }
}
