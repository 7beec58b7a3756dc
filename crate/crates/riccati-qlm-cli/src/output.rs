//! Result records (`riccati-qlm/1` JSON) and CSV tables.

use std::io::Write;

use riccati_qlm::curves::Curves;
use riccati_qlm::expansion::MatchReport;
use riccati_qlm::potentials::PotentialModel;
use riccati_qlm::spectrum::EigenResult;
use riccati_qlm::Real;
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};
use crate::CliError;

pub const SCHEMA: &str = "riccati-qlm/1";

/// `x` with `digits` significant digits.
pub fn fmt(x: Real, digits: usize) -> String {
    format!("{x:.digits$}")
}

fn opt(x: Option<Real>, d: usize) -> Value {
    x.map_or(Value::Null, |v| Value::String(fmt(v, d)))
}

pub fn model_json(model: &PotentialModel, cfg: &RunConfig) -> Value {
    let params: Map<String, Value> =
        model.params.iter().map(|(k, v)| (k.clone(), Value::String(v.to_string()))).collect();
    json!({
        "id": model.id.name(),
        "params": params,
        "l": model.l,
        "domain": model.domain,
        "units": { "m": model.units.m.to_string(), "hbar": model.units.hbar.to_string() },
        "spec": cfg.spec,
    })
}

fn record(cfg: &RunConfig, model: &PotentialModel, wkb: Real, qlm: Map<String, Value>, final_e: Option<Real>, reference: Option<Real>, diagnostics: Value) -> Value {
    let d = cfg.digits as usize;
    json!({
        "schema": SCHEMA,
        "model": model_json(model, cfg),
        "state": { "n": cfg.n, "l": model.l },
        "energy": opt(final_e, d),
        "energies": { "wkb": fmt(wkb, d), "qlm": qlm },
        "reference": opt(reference, d),
        "diagnostics": diagnostics,
    })
}

pub fn solve_record(cfg: &RunConfig, res: &EigenResult) -> Value {
    let d = cfg.digits as usize;
    let qlm: Map<String, Value> =
        res.energies.iter().enumerate().skip(1).map(|(q, e)| (q.to_string(), Value::String(fmt(*e, d)))).collect();
    let strs = |v: &[Real]| v.iter().map(|x| fmt(*x, 6)).collect::<Vec<_>>();
    let diagnostics = json!({
        "digits": res.digits,
        "digits_converged": res.digits_converged,
        "evaluations": res.evaluations,
        "mismatches": strs(&res.mismatches[1..]),
        "pole_counts": &res.pole_counts[1..],
        "wkb_rel_error": res.wkb_rel_error.map(|v| fmt(v, 6)),
        "rel_errors": strs(&res.rel_errors),
        "convergence": {
            "norms": strs(&res.convergence.norms),
            "exponent": res.convergence.exponent,
            "quadratic": res.convergence.quadratic,
        },
    });
    record(cfg, &res.model, res.wkb_energy, qlm, Some(res.energy()), res.reference, diagnostics)
}

pub fn solve_csv(cfg: &RunConfig, res: &EigenResult) -> String {
    let d = cfg.digits as usize;
    let mut s = String::from("depth,energy,rel_error\n");
    for (q, e) in res.energies.iter().enumerate() {
        let label = if q == 0 { "wkb".to_string() } else { q.to_string() };
        let rel = match (q, res.reference) {
            (0, _) => res.wkb_rel_error,
            (_, Some(_)) => res.rel_errors.get(q - 1).copied(),
            _ => None,
        };
        s.push_str(&format!("{label},{},{}\n", fmt(*e, d), rel.map_or(String::new(), |v| fmt(v, 6))));
    }
    s
}

pub fn wkb_record(cfg: &RunConfig, e: Real, reference: Option<Real>) -> Value {
    let model = cfg.model().expect("validated");
    let rel = reference.map(|r| ((e - r) / r).abs());
    let diagnostics = json!({ "rel_error": rel.map(|v| fmt(v, 6)) });
    record(cfg, &model, e, Map::new(), None, reference, diagnostics)
}

pub fn series_record(cfg: &RunConfig, e: Real, r0: Real, reps: &[MatchReport], holds: bool) -> Value {
    let model = cfg.model().expect("validated");
    let diagnostics = json!({
        "energy": fmt(e, cfg.digits as usize),
        "r0": fmt(r0, cfg.digits as usize),
        "law_holds": holds,
        "reports": reps,
    });
    record(cfg, &model, e, Map::new(), None, None, diagnostics)
}

pub fn series_csv(reps: &[MatchReport]) -> String {
    let mut s = String::from("p,n,exact_matches,next_differs,degenerate\n");
    for r in reps {
        let nd = r.next_differs.map_or(String::new(), |b| b.to_string());
        s.push_str(&format!("{},{},{},{},{}\n", r.p, r.n, r.exact_matches, nd, r.degenerate));
    }
    s
}

fn log10_abs(x: Real) -> String {
    let v = x.abs();
    if v.is_zero() {
        "-inf".into()
    } else {
        format!("{:.6}", v.to_f64().log10())
    }
}

pub fn curves_csv(c: &Curves, digits: usize) -> String {
    let d = digits.min(20);
    let mut s = String::from("r,chi_exact,chi_wkb,chi_qlm1,log10_err_wkb,log10_err_qlm1\n");
    for i in 0..c.r.len() {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt(c.r[i], d),
            fmt(c.exact[i], d),
            fmt(c.wkb[i], d),
            fmt(c.qlm1[i], d),
            log10_abs(c.exact[i] - c.wkb[i]),
            log10_abs(c.exact[i] - c.qlm1[i]),
        ));
    }
    s
}

pub fn write_text(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Writes `rec` as JSON or the CSV built by `csv`.
pub fn emit(cfg: &RunConfig, rec: &Value, csv: impl FnOnce() -> String) -> Result<(), CliError> {
    let text = match cfg.format {
        Format::Json => {
            let mut t = serde_json::to_string_pretty(rec).expect("serializable");
            t.push('\n');
            t
        }
        Format::Csv => csv(),
    };
    write_text(cfg, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_strings_round_trip() {
        for s in ["2.393644016482303116027334213769635", "-0.25", "0.9999933401485388801200000000000000"] {
            let x: Real = s.parse().unwrap();
            let once = fmt(x, 34);
            let again = fmt(once.parse().unwrap(), 34);
            assert_eq!(once, again);
        }
    }
}
