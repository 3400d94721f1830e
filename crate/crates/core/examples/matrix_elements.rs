//! First-order coefficients two ways: the defining double integral over
//! (q, q̄) and the rotated-basis reduction to a single kernel integral.

use std::time::Instant;

use gravdeco::coupling::{gamma_element, gamma_element_reduced, mean_potential_closed_form, potential_matrix, product_index};
use gravdeco::{ModeParams, QuadratureSpec, TruncationSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ModeParams::new(0.1, 1.0)?;
    let spec = QuadratureSpec::default();
    println!("omega = 0.1, L_c = 1: eps = L_c/beta = {:.6}", params.lc_over_beta());
    println!("<U>/hbar omega closed form = {:.15e}\n", mean_potential_closed_form(&params));

    println!("{:>8} {:>24} {:>24} {:>10}", "(n,nb)", "double integral", "rotated basis", "rel diff");
    for (n, nb) in [(2, 0), (1, 1), (0, 2), (4, 0), (3, 1), (2, 2), (6, 4), (8, 0)] {
        let t = Instant::now();
        let direct = gamma_element(n, nb, &params, &spec)?.value();
        let slow = t.elapsed();
        let t = Instant::now();
        let fast = gamma_element_reduced(n, nb, &params, &spec)?.value();
        let quick = t.elapsed();
        println!("{:>8} {direct:>24.15e} {fast:>24.15e} {:>10.1e}   ({slow:.1?} vs {quick:.1?})", format!("({n},{nb})"), ((direct - fast) / fast).abs());
    }

    let trunc = TruncationSpec::new(6, 1e-10)?;
    let u = potential_matrix(&params, &trunc, &spec)?;
    let idx = |n, nb| product_index(n, nb, trunc.n_max);
    println!("\npotential matrix on {0}x{0} states", u.nrows());
    println!("  <00|U|00> = {:e}", u[(idx(0, 0), idx(0, 0))]);
    println!("  <20|U|00> = {:e}", u[(idx(2, 0), idx(0, 0))]);
    println!("  <31|U|13> = {:e}", u[(idx(3, 1), idx(1, 3))]);
    println!("  <10|U|00> = {:e} (parity)", u[(idx(1, 0), idx(0, 0))]);
    Ok(())
}
