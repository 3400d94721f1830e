//! Deficits 1 - eta and 1 - F across many decades of frequency, down to the
//! laboratory regime omega ~ 1e-33 Omega_P.

use gravdeco::perturbation::mode_report;
use gravdeco::{ModeParams, QuadratureSpec, TruncationSpec};
use rayon::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trunc = TruncationSpec::default();
    let spec = QuadratureSpec::default();
    let exponents: Vec<i32> = (-33..=0).step_by(3).collect();

    for lc in [1.0, 2.0] {
        println!("L_c = {lc} L_P");
        println!("{:>8} {:>16} {:>16} {:>10}", "omega", "log10(1-eta)", "log10(1-F)", "converged");
        let rows = exponents
            .par_iter()
            .map(|&e| mode_report(&ModeParams::new(10f64.powi(e), lc)?, &trunc, &spec))
            .collect::<Result<Vec<_>, _>>()?;
        for r in rows {
            println!("{:>8.0e} {:>16.6} {:>16.6} {:>10}", r.omega, r.log10_one_minus_eta, r.log10_one_minus_fidelity, r.converged);
        }
        println!();
    }
    Ok(())
}
