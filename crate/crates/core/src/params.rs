//! Dimensionless problem definition.
//!
//! With `ħ = 1` every quantity is measured in Planck units: the mode
//! frequency `x = ω/Ω_P`, the regularization length `c = L_c/L_P`, the energy
//! scale `μ = ħω = x`, the ground-state width `β = √(ħ/(2μω)) = 1/(x√2)` and
//! the Bessel argument `χ = L_c²/(8β²) = (c·x)²/4`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeParams {
    /// Mode frequency in units of the Planck frequency.
    pub omega: f64,
    /// Regularization length in units of the Planck length.
    pub lc: f64,
    pub beta: f64,
    pub mu: f64,
    pub chi: f64,
}

impl ModeParams {
    pub fn new(omega: f64, lc: f64) -> Result<Self> {
        check_positive("omega", omega)?;
        check_positive("lc", lc)?;
        let beta = 1.0 / (omega * std::f64::consts::SQRT_2);
        let cx = lc * omega;
        Ok(Self { omega, lc, beta, mu: omega, chi: 0.25 * cx * cx })
    }

    /// Regularization length measured in ground-state widths, `ε = L_c/β = c·x·√2`.
    ///
    /// Matrix elements of the potential depend on the parameters only
    /// through this ratio once the `μ²/ħω` prefactor is factored out.
    pub fn lc_over_beta(&self) -> f64 {
        self.lc * self.omega * std::f64::consts::SQRT_2
    }
}

/// Fock-basis cutoff shared by the perturbative and exact pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec {
    /// Each mode keeps the states `0..=n_max`.
    pub n_max: usize,
    /// Relative tolerance for the `n_max/2` vs `n_max` convergence check.
    pub tol: f64,
}

impl TruncationSpec {
    pub fn new(n_max: usize, tol: f64) -> Result<Self> {
        let spec = Self { n_max, tol };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max < 2 {
            return Err(Error::param("n_max", format!("must be at least 2, got {}", self.n_max)));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::param("tol", format!("must be positive and finite, got {}", self.tol)));
        }
        Ok(())
    }
}

impl Default for TruncationSpec {
    fn default() -> Self {
        Self { n_max: 64, tol: 1e-10 }
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be positive and finite, got {value}")))
    }
}
