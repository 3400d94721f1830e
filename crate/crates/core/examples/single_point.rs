//! Purity, fidelity and ground-state energy of one mode.
//!
//! ```text
//! cargo run --example single_point -- 1e-2 1.0
//! ```

use gravdeco::perturbation::{build_gamma, mode_report};
use gravdeco::{ModeParams, QuadratureSpec, TruncationSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let omega: f64 = args.next().as_deref().unwrap_or("1e-2").parse()?;
    let lc: f64 = args.next().as_deref().unwrap_or("1").parse()?;

    let params = ModeParams::new(omega, lc)?;
    let trunc = TruncationSpec::default();
    let spec = QuadratureSpec::default();
    let report = mode_report(&params, &trunc, &spec)?;

    println!("omega = {omega:e} Omega_P, L_c = {lc} L_P");
    println!("  beta = {:e}, chi = {:e}", params.beta, params.chi);
    println!("  <U>/hbar omega   = {:e}", report.mean_potential_over_hbar_omega);
    println!("  E00/hbar omega   = {:.15}", report.e00_over_hbar_omega);
    println!("  1 - eta          = {:e}  (log10 {:.6})", report.one_minus_eta, report.log10_one_minus_eta);
    println!("  1 - F            = {:e}  (log10 {:.6})", report.one_minus_fidelity, report.log10_one_minus_fidelity);
    println!("  Z^2 - 1          = {:e}", report.z_squared - 1.0);

    let g = build_gamma(&params, &trunc, &spec)?;
    println!("  gamma_20 = {:e}, gamma_11 = {:e}, gamma_02 = {:e}", g.gamma(2, 0), g.gamma(1, 1), g.gamma(0, 2));
    println!(
        "  truncation: n_max = {}, change vs n_max/2 = {:.2e} ({})",
        report.n_max,
        g.truncation_change(),
        if report.converged { "converged" } else { "not converged" }
    );
    if !report.weak_coupling() {
        println!("  note: |<U>/hbar omega| > 0.1, first-order theory is stretched here");
    }
    Ok(())
}
