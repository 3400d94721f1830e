use std::f64::consts::PI;

use crate::specfun::bessel_k0_scaled;
use crate::ModeParams;

/// `𝒰(s) = -μ² / √(s² + L_c²)` for a fixed mode.
#[derive(Debug, Clone, Copy)]
pub struct PotentialEval {
    pub params: ModeParams,
}

impl PotentialEval {
    pub fn new(params: ModeParams) -> Self {
        Self { params }
    }

    pub fn eval(&self, s: f64) -> f64 {
        potential(s, &self.params)
    }

    /// Deepest value, reached at zero separation.
    pub fn floor(&self) -> f64 {
        -self.params.mu * self.params.mu / self.params.lc
    }
}

/// Potential between mode and clone at separation `s = q - q̄` (Planck units).
pub fn potential(s: f64, params: &ModeParams) -> f64 {
    -params.mu * params.mu / s.hypot(params.lc)
}

/// `⟨Θ₀₀|𝒰|Θ₀₀⟩ / ħω = -(x²/√(2π)) e^χ K₀(χ)`.
///
/// Evaluated through the scaled Bessel function so that `e^χ` and `K₀(χ)`
/// never appear separately; valid for `χ` down to ~1e-300.
pub fn mean_potential_closed_form(params: &ModeParams) -> f64 {
    let k0e = bessel_k0_scaled(params.chi).expect("chi is positive for valid params");
    -params.omega * params.omega / (2.0 * PI).sqrt() * k0e
}
