//! Secant search for the coupling that puts the converged ground state of
//! the modified Coulomb model at a target energy.
//!
//! `cargo run --release --example calibrate_alpha -- <target> <alpha0> <alpha1>`

use riccati_qlm::potentials::{ModelId, PotentialModel};
use riccati_qlm::spectrum::{solve_energy, SolveConfig};
use riccati_qlm::Real;

fn energy(alpha: Real) -> Real {
    let s = alpha.to_string();
    let m = PotentialModel::with_params(ModelId::ModifiedCoulombDirac, &[("alpha", s.as_str())], 0).unwrap();
    solve_energy(&m, 0, 6, None, &SolveConfig::with_digits(34)).unwrap().energy()
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let target: Real = args[1].parse().unwrap();
    let mut a0: Real = args[2].parse().unwrap();
    let mut a1: Real = args[3].parse().unwrap();
    let mut f0 = energy(a0) - target;
    for _ in 0..6 {
        let f1 = energy(a1) - target;
        println!("alpha {a1} residual {:e}", f1.to_f64());
        if f1.abs() < Real::pow10(-30) {
            break;
        }
        let a2 = a1 - f1 * (a1 - a0) / (f1 - f0);
        a0 = a1;
        f0 = f1;
        a1 = a2;
    }
    println!("alpha {a1}");
}
