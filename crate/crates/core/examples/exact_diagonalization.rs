//! First-order theory against exact diagonalization of the truncated
//! two-mode Hamiltonian.

use gravdeco::oracle::{compare, ComparisonTolerances};
use gravdeco::{ModeParams, QuadratureSpec, TruncationSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trunc = TruncationSpec::new(32, 1e-10)?;
    let spec = QuadratureSpec::default();
    let tol = ComparisonTolerances::default();

    println!(
        "{:>6} {:>4} {:>13} {:>13} {:>10} {:>10} {:>11} {:>11} {:>5}",
        "omega", "L_c", "1-F (PT)", "1-F (exact)", "rel 1-F", "rel 1-eta", "E gap", "1-overlap", "pass"
    );
    for (omega, lc) in [(1e-3, 1.0), (1e-2, 1.0), (1e-2, 2.0), (0.05, 1.0), (0.2, 1.0), (1.0, 1.0)] {
        let r = compare(&ModeParams::new(omega, lc)?, &trunc, &spec)?;
        println!(
            "{omega:>6} {lc:>4} {:>13.6e} {:>13.6e} {:>10.2e} {:>10.2e} {:>11.3e} {:>11.3e} {:>5}",
            r.perturbative.one_minus_fidelity,
            r.exact.one_minus_fidelity,
            r.rel_diff_one_minus_fidelity,
            r.rel_diff_one_minus_eta,
            r.energy_gap,
            r.state_infidelity,
            r.passes(&tol)
        );
    }
    Ok(())
}
