//! WebAssembly bindings for the static demo page in `www/`. Every export
//! returns a JSON string; errors come back as `{"error": "..."}`.

use riccati_qlm::curves::{wavefunction_curves, CurveEnergies};
use riccati_qlm::expansion::verify_2p_law;
use riccati_qlm::potentials::{KForm, PotentialModel, PotentialSpec};
use riccati_qlm::spectrum::{solve_energy, wkb_level, SolveConfig};
use riccati_qlm::Real;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

// Browser runs are kept short.
const DIGITS: u32 = 20;

fn model(id: &str, params: &str) -> Result<PotentialModel, String> {
    let mut spec = PotentialSpec { id: id.to_string(), ..PotentialSpec::default() };
    for item in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or(format!("bad parameter `{item}`"))?;
        spec.params.insert(k.trim().to_string(), v.trim().to_string());
    }
    PotentialModel::from_spec(&spec).map_err(|e| e.to_string())
}

fn finish(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn f(x: Real) -> f64 {
    x.to_f64()
}

pub fn curves_json(id: &str, params: &str, n: usize, points: usize) -> Result<Value, String> {
    let m = model(id, params)?;
    let res = solve_energy(&m, n, 4, None, &SolveConfig::with_digits(DIGITS)).map_err(|e| e.to_string())?;
    let en = CurveEnergies { wkb: res.energies[0], qlm1: res.energies[1], exact: res.energy() };
    let c = wavefunction_curves(&m, n, en, 6, Real::ZERO, DIGITS, points).map_err(|e| e.to_string())?;
    let v = |xs: &[Real]| xs.iter().map(|x| f(*x)).collect::<Vec<f64>>();
    Ok(json!({
        "r": v(&c.r), "exact": v(&c.exact), "wkb": v(&c.wkb), "qlm1": v(&c.qlm1),
        "energies": { "wkb": en.wkb.to_string(), "qlm1": en.qlm1.to_string(), "exact": en.exact.to_string() },
    }))
}

pub fn convergence_json(id: &str, params: &str, n: usize, p: usize) -> Result<Value, String> {
    let m = model(id, params)?;
    let res = solve_energy(&m, n, p.clamp(1, 6), None, &SolveConfig::with_digits(DIGITS)).map_err(|e| e.to_string())?;
    let last = res.energy();
    let rows: Vec<Value> = res
        .energies
        .iter()
        .enumerate()
        .map(|(q, e)| {
            let target = res.reference.unwrap_or(last);
            json!({ "depth": q, "energy": format!("{e:.20}"), "log10_err": f(((*e - target) / target).abs()).log10() })
        })
        .collect();
    Ok(json!({ "rows": rows, "reference": res.reference.map(|r| r.to_string()) }))
}

pub fn series_json(id: &str, params: &str, n: usize, p_max: usize) -> Result<Value, String> {
    let m = model(id, params)?;
    let e = wkb_level(&m, n).map_err(|e| e.to_string())?;
    let (a, b) = m.turning_points(e, KForm::Plain).map_err(|e| e.to_string())?;
    let r0 = m.r_of_z((a + b) * 0.5 + (b - a) * 0.123);
    let reps = verify_2p_law(&m, e, r0, p_max.clamp(1, 3), DIGITS + 14).map_err(|e| e.to_string())?;
    Ok(json!({ "energy": e.to_string(), "r0": f(r0), "reports": reps }))
}

/// Peak-normalized exact, Langer and first-iterate wave functions.
#[wasm_bindgen]
pub fn curves(id: &str, params: &str, n: usize, points: usize) -> String {
    finish(curves_json(id, params, n, points))
}

/// Energies at depths `0..=p` with their errors.
#[wasm_bindgen]
pub fn convergence(id: &str, params: &str, n: usize, p: usize) -> String {
    finish(convergence_json(id, params, n, p))
}

/// Matching WKB coefficients of iterates `1..=p_max`.
#[wasm_bindgen]
pub fn series(id: &str, params: &str, n: usize, p_max: usize) -> String {
    finish(series_json(id, params, n, p_max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_table() {
        let v = series_json("harmonic", "", 0, 3).unwrap();
        let m: Vec<u64> = v["reports"].as_array().unwrap().iter().map(|r| r["exact_matches"].as_u64().unwrap()).collect();
        assert_eq!(m, vec![2, 4, 8]);
    }

    #[test]
    fn errors_are_reported() {
        let s = series("nope", "", 0, 1);
        assert!(s.contains("error"));
        assert!(convergence("harmonic", "c", 0, 1).contains("error"));
    }
}
