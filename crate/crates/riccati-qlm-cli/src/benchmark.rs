//! Consolidated comparison table over a fixed set of models.

use std::path::Path;

use riccati_qlm::curves::{bulk_errors, wavefunction_curves, CurveEnergies};
use riccati_qlm::potentials::{PotentialModel, PotentialSpec};
use riccati_qlm::spectrum::{solve_energy, SolveConfig};
use riccati_qlm::Real;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::config::{parse_real, CommonArgs, Format};
use crate::output::{fmt, SCHEMA};
use crate::CliError;

const DEFAULT_TABLE: &str = include_str!("../benchmarks/default.json");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Table {
    rows: Vec<Row>,
    wavefunction: Option<WaveRow>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Row {
    potential: PotentialSpec,
    n: usize,
    p: usize,
    digits: u32,
    /// Published value used when the model has no closed form.
    #[serde(default)]
    published: Option<String>,
    #[serde(default)]
    note: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WaveRow {
    potential: PotentialSpec,
    n: usize,
    digits: u32,
    points: usize,
    exact_p: usize,
}

fn rel(e: Real, r: Real) -> Real {
    ((e - r) / r).abs()
}

fn run_row(row: &Row, digits: Option<u32>) -> Result<Value, CliError> {
    let model = PotentialModel::from_spec(&row.potential).map_err(|e| CliError::Config(e.to_string()))?;
    let d = digits.unwrap_or(row.digits);
    let res = solve_energy(&model, row.n, row.p, None, &SolveConfig::with_digits(d))?;
    let reference = match (&res.reference, &row.published) {
        (Some(r), _) => Some(*r),
        (None, Some(s)) => Some(parse_real("published", s)?),
        (None, None) => None,
    };
    let ds = d as usize;
    let (wkb, e1, ep) = (res.energies[0], res.energies[1], res.energy());
    let err = |e: Real| reference.map(|r| fmt(rel(e, r), 4));
    Ok(json!({
        "model": model.id.name(),
        "params": row.potential.params,
        "n": row.n,
        "p": row.p,
        "digits": d,
        "e_wkb": fmt(wkb, ds),
        "e_qlm1": fmt(e1, ds),
        "e_qlm": fmt(ep, ds),
        "reference": reference.map(|r| fmt(r, ds)),
        "rel_err_wkb": err(wkb),
        "rel_err_qlm1": err(e1),
        "rel_err_qlm": err(ep),
        "convergence_exponent": res.convergence.exponent,
        "note": row.note,
    }))
}

fn run_wave(w: &WaveRow) -> Result<Value, CliError> {
    let model = PotentialModel::from_spec(&w.potential).map_err(|e| CliError::Config(e.to_string()))?;
    let res = solve_energy(&model, w.n, 6, None, &SolveConfig::with_digits(w.digits))?;
    let en = CurveEnergies { wkb: res.energies[0], qlm1: res.energies[1], exact: res.energy() };
    let c = wavefunction_curves(&model, w.n, en, w.exact_p, Real::ZERO, w.digits, w.points)?;
    let (ew, eq) = bulk_errors(&c);
    Ok(json!({
        "model": model.id.name(),
        "n": w.n,
        "bulk_sup_err_wkb": fmt(ew, 6),
        "bulk_sup_err_qlm1": fmt(eq, 6),
        "ratio": (ew / eq).to_f64(),
    }))
}

pub fn run(common: &CommonArgs, only: Option<&str>, table: Option<&Path>) -> Result<(), CliError> {
    let text = match table {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?,
        None => DEFAULT_TABLE.to_string(),
    };
    let table: Table = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("benchmark table: {e}")))?;
    let keep: Option<Vec<&str>> = only.map(|s| s.split(',').map(str::trim).collect());
    let wanted = |id: &str| keep.as_ref().is_none_or(|k| k.contains(&id));
    let mut rows = Vec::new();
    for row in table.rows.iter().filter(|r| wanted(&r.potential.id)) {
        rows.push(run_row(row, common.digits)?);
    }
    let wave = match &table.wavefunction {
        Some(w) if wanted(&w.potential.id) => Some(run_wave(w)?),
        _ => None,
    };
    let format = common.format.unwrap_or(Format::Json);
    let text = match format {
        Format::Json => {
            let mut t = serde_json::to_string_pretty(&json!({
                "schema": SCHEMA,
                "rows": rows,
                "wavefunction": wave,
            }))
            .expect("serializable");
            t.push('\n');
            t
        }
        Format::Csv => {
            let cols = [
                "model", "n", "p", "e_wkb", "e_qlm1", "e_qlm", "reference", "rel_err_wkb", "rel_err_qlm1", "rel_err_qlm",
            ];
            let mut t = cols.join(",");
            t.push('\n');
            for r in &rows {
                let cells: Vec<String> = cols
                    .iter()
                    .map(|c| match &r[*c] {
                        Value::String(s) => s.clone(),
                        Value::Null => String::new(),
                        v => v.to_string(),
                    })
                    .collect();
                t.push_str(&cells.join(","));
                t.push('\n');
            }
            if let Some(w) = &wave {
                t.push_str(&format!("# wavefunction {} ratio {}\n", w["model"].as_str().unwrap_or(""), w["ratio"]));
            }
            t
        }
    };
    match &common.output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
