//! Normalized harmonic-oscillator eigenfunctions.
//!
//! `φ_n(q) = (2ⁿ n!)^{-1/2} (2πβ²)^{-1/4} e^{-q²/(4β²)} H_n(q/(β√2))`, evaluated
//! through the three-term recurrence of the normalized functions so that
//! neither `n!`, `2ⁿ` nor raw Hermite polynomials ever appear.

use std::f64::consts::{PI, SQRT_2};

/// Rescaling threshold for the running recurrence values.
const RESCALE: f64 = 1e150;

/// Fills `out[k] = h_k(t)` for `k = 0..out.len()`, where `h_k` is the
/// oscillator eigenfunction of unit width (`β = 1`). For a general width,
/// `φ_k(q) = β^{-1/2} h_k(q/β)`.
///
/// The polynomial part is propagated with a separate log-scale so that the
/// Gaussian factor is only applied at the end; values stay finite for any
/// `t` and any number of functions.
pub fn hermite_functions(t: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let xi = t / SQRT_2;
    let norm0 = (2.0 * PI).powf(-0.25);
    let mut log_scale = -0.5 * xi * xi;
    let mut factor = norm0 * log_scale.exp();

    let mut prev = 0.0;
    let mut cur = 1.0;
    out[0] = cur * factor;
    for k in 0..out.len() - 1 {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            log_scale += RESCALE.ln();
            factor = norm0 * log_scale.exp();
        }
        out[k + 1] = cur * factor;
    }
}

/// Single eigenfunction `φ_n(q)` for width `β`.
pub fn phi_n(n: usize, q: f64, beta: f64) -> f64 {
    debug_assert!(beta > 0.0);
    let mut buf = vec![0.0; n + 1];
    hermite_functions(q / beta, &mut buf);
    buf[n] / beta.sqrt()
}
