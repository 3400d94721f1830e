//! Exponentially scaled modified Bessel function of the second kind, order 0.

use std::f64::consts::PI;

use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `e^x K₀(x)` for `x > 0`.
///
/// Power series around the origin for `x ≤ 2`, Steed's continued fraction
/// (Temme's CF2 for order zero) above. The scaled form stays representable
/// for arguments as small as `1e-300`, where `K₀(x) ≈ -ln(x/2) - γ_E`.
pub fn bessel_k0_scaled(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::param("x", format!("e^x K0(x) needs a positive finite argument, got {x}")));
    }
    Ok(if x <= 2.0 { series(x) * x.exp() } else { continued_fraction(x) })
}

// K0(x) = -(ln(x/2) + γ) I0(x) + Σ_{k≥1} (x²/4)^k / (k!)² H_k
fn series(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let log_term = -((0.5 * x).ln() + EULER_GAMMA);
    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut harmonic = 0.0;
    let mut tail = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= y / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += term * harmonic;
        if term * harmonic < 1e-18 * tail.abs().max(1e-300) && term < 1e-18 * i0 {
            break;
        }
    }
    log_term * i0 + tail
}

fn continued_fraction(x: f64) -> f64 {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    (PI / (2.0 * x)).sqrt() / s
}
