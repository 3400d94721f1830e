//! First-order perturbed ground state of mode + clone and the reduced state
//! of the mode.
//!
//! The unnormalized coefficients are `γ₀₀ = 1` and
//! `γ_{n n̄} = ⟨Θ_{n n̄}|𝒰|Θ₀₀⟩ / (𝒲₀₀ - 𝒲_{n n̄})`, stored in factored form
//! `γ_{n n̄} = x² g_{n n̄}` so that the coupling strength and the `O(1)`
//! shape of the correction are kept apart. The purity and fidelity deficits
//! are assembled from sums of non-negative terms that are each
//! proportional to `x⁴`, never as `1 - (number close to 1)`; they remain
//! meaningful (and their logarithms finite) far below `f64::EPSILON`.

use std::f64::consts::LN_10;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::coupling::{mean_potential_closed_form, potential_column, product_index};
use crate::sum::CompensatedSum;
use crate::{ModeParams, QuadratureSpec, Result, TruncationSpec};

/// Coefficients of a two-mode state `Σ γ_{n n̄} |n⟩|n̄⟩` on `{0..=n_max}²`,
/// stored as an anchor `γ₀₀` plus `scale · reduced` for every other entry.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaMatrix {
    anchor: f64,
    scale: f64,
    reduced: DMatrix<f64>,
    converged: bool,
    truncation_change: f64,
}

impl GammaMatrix {
    /// Builds a state from its factored parts; `reduced[(0, 0)]` is ignored.
    pub fn from_parts(anchor: f64, scale: f64, mut reduced: DMatrix<f64>) -> Self {
        assert!(reduced.is_square() && reduced.nrows() >= 1);
        reduced[(0, 0)] = 0.0;
        let mut g = Self { anchor, scale, reduced, converged: true, truncation_change: 0.0 };
        g.assess_truncation(f64::INFINITY);
        g
    }

    pub fn n_max(&self) -> usize {
        self.reduced.nrows() - 1
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn reduced(&self) -> &DMatrix<f64> {
        &self.reduced
    }

    pub fn gamma(&self, n: usize, nbar: usize) -> f64 {
        if n == 0 && nbar == 0 {
            self.anchor
        } else {
            self.scale * self.reduced[(n, nbar)]
        }
    }

    /// Dense unnormalized coefficient matrix.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = &self.reduced * self.scale;
        m[(0, 0)] = self.anchor;
        m
    }

    /// `Σ' g²` over every entry except `(0, 0)`.
    pub fn reduced_weight(&self) -> f64 {
        off_anchor_weight(&self.reduced, self.n_max())
    }

    /// `Z² = Σ γ²`.
    pub fn z_squared(&self) -> f64 {
        self.anchor * self.anchor + self.scale * self.scale * self.reduced_weight()
    }

    pub fn z(&self) -> f64 {
        self.z_squared().sqrt()
    }

    /// Whether halving the cutoff changed `Σ' γ²` by at most the tolerance
    /// used when the matrix was built.
    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Relative change of `Σ' γ²` between cutoffs `n_max/2` and `n_max`.
    pub fn truncation_change(&self) -> f64 {
        self.truncation_change
    }

    fn assess_truncation(&mut self, tol: f64) {
        let full = self.reduced_weight();
        let half = off_anchor_weight(&self.reduced, self.n_max() / 2);
        self.truncation_change = if full > 0.0 { (full - half).abs() / full } else { 0.0 };
        self.converged = self.truncation_change <= tol;
    }
}

fn off_anchor_weight(reduced: &DMatrix<f64>, cutoff: usize) -> f64 {
    let mut acc = CompensatedSum::new();
    for n in 0..=cutoff {
        for k in 0..=cutoff {
            if n + k > 0 {
                acc.add(reduced[(n, k)] * reduced[(n, k)]);
            }
        }
    }
    acc.value()
}

/// First-order coefficients on `{0..=n_max}²`.
///
/// Elements with odd `n + n̄` vanish by parity and are left exactly zero.
/// Convergence in the cutoff is judged by comparing `Σ' γ²` restricted to
/// `n, n̄ ≤ n_max/2` with the full sum.
pub fn build_gamma(params: &ModeParams, trunc: &TruncationSpec, spec: &QuadratureSpec) -> Result<GammaMatrix> {
    trunc.validate()?;
    let n_max = trunc.n_max;
    let column = potential_column(params, n_max, spec)?;
    let mut reduced = DMatrix::zeros(n_max + 1, n_max + 1);
    for n in 0..=n_max {
        for k in (0..=n_max).filter(|k| (n + k) % 2 == 0 && n + k > 0) {
            // ⟨Θ_{n n̄}|𝒰|Θ₀₀⟩/ħω = x² · column;  𝒲₀₀ - 𝒲_{n n̄} = -ħω(n + n̄)
            reduced[(n, k)] = -column[product_index(n, k, n_max)] / (n + k) as f64;
        }
    }
    let mut g = GammaMatrix { anchor: 1.0, scale: params.omega * params.omega, reduced, converged: true, truncation_change: 0.0 };
    g.assess_truncation(trunc.tol);
    Ok(g)
}

/// Reduced state of the mode, `ρ_{n n'}`, in the oscillator basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub rho: DMatrix<f64>,
}

impl DensityMatrix {
    pub fn trace(&self) -> f64 {
        self.rho.diagonal().iter().copied().collect::<CompensatedSum>().value()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.rho.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }
}

/// Partial trace over the clone: `ρ = Γ Γᵀ` with `Γ = γ / Z`.
pub fn reduce_density(g: &GammaMatrix) -> DensityMatrix {
    let gamma = g.to_dense() / g.z();
    DensityMatrix { rho: &gamma * gamma.transpose() }
}

/// `η = Σ |ρ_{n n'}|²`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.rho.iter().map(|v| v * v).collect::<CompensatedSum>().value()
}

/// `η = Tr[(γγᵀ)²] / [Tr(γγᵀ)]²`, computed without forming `ρ` from `Γ`.
pub fn purity_from_gamma(g: &GammaMatrix) -> f64 {
    let gamma = g.to_dense();
    let a = &gamma * gamma.transpose();
    let tr = a.diagonal().iter().copied().collect::<CompensatedSum>().value();
    let tr2 = a.iter().map(|v| v * v).collect::<CompensatedSum>().value();
    tr2 / (tr * tr)
}

/// `F = ρ₀₀`, the weight of the unperturbed ground state.
pub fn fidelity(rho: &DensityMatrix) -> f64 {
    rho.rho[(0, 0)]
}

/// `F = Σ_{n̄} |Γ_{0 n̄}|²` straight from the coefficients.
pub fn fidelity_from_gamma(g: &GammaMatrix) -> f64 {
    let z2 = g.z_squared();
    (0..=g.n_max()).map(|k| g.gamma(0, k) * g.gamma(0, k) / z2).collect::<CompensatedSum>().value()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deficits {
    pub one_minus_eta: f64,
    pub log10_one_minus_eta: f64,
    pub one_minus_fidelity: f64,
    pub log10_one_minus_fidelity: f64,
}

/// `1 - F` and `1 - η` in factored form.
///
/// With `γ₀₀ = a` and all other entries `s·g`:
///
/// * `1 - F = s² Σ_{n≥1, n̄} g² / Z²`
/// * `1 - η = [(Tr A)² - Tr A²] / (Tr A)²` with `A = γγᵀ`. The numerator is
///   twice the sum of all squared 2×2 minors of `γ` (Cauchy-Binet), which
///   splits into `s² D₁ + s⁴ D₂`: minors through `γ₀₀` and all others.
pub fn deficits(g: &GammaMatrix) -> Deficits {
    let (a, s, r) = (g.anchor, g.scale, &g.reduced);
    let dim = g.n_max() + 1;

    let mut excited = CompensatedSum::new();
    for n in 1..dim {
        for k in 0..dim {
            excited.add(r[(n, k)] * r[(n, k)]);
        }
    }
    let excited = excited.value();

    let mut d1 = CompensatedSum::new();
    for n in 1..dim {
        for k in 1..dim {
            let m = a * r[(n, k)] - s * r[(0, k)] * r[(n, 0)];
            d1.add(m * m);
        }
    }
    let mut d2 = CompensatedSum::new();
    // rows {0, n}, columns {k, k'} with k, k' ≥ 1
    for n in 1..dim {
        for k in 1..dim {
            for kp in k + 1..dim {
                let m = r[(0, k)] * r[(n, kp)] - r[(0, kp)] * r[(n, k)];
                d2.add(m * m);
            }
        }
    }
    // rows {n, n'} with n, n' ≥ 1, any columns
    for n in 1..dim {
        for np in n + 1..dim {
            for k in 0..dim {
                let (x, y) = (r[(n, k)], r[(np, k)]);
                if x == 0.0 && y == 0.0 {
                    continue;
                }
                for kp in k + 1..dim {
                    let m = x * r[(np, kp)] - r[(n, kp)] * y;
                    d2.add(m * m);
                }
            }
        }
    }
    let minors = d1.value() + s * s * d2.value();

    let z2 = g.z_squared();
    let ln_s = s.abs().ln();
    let log10_f = (2.0 * ln_s + excited.ln() - z2.ln()) / LN_10;
    let log10_eta = (2f64.ln() + 2.0 * ln_s + minors.ln() - 2.0 * z2.ln()) / LN_10;
    Deficits {
        one_minus_eta: 2.0 * s * s * minors / (z2 * z2),
        log10_one_minus_eta: log10_eta,
        one_minus_fidelity: s * s * excited / z2,
        log10_one_minus_fidelity: log10_f,
    }
}

/// `ℰ₀₀/ħω = 1 + ⟨𝒰⟩_{Θ₀₀}/ħω`.
pub fn ground_state_energy(params: &ModeParams) -> f64 {
    1.0 + mean_potential_closed_form(params)
}

/// Everything reported for one `(ω, L_c)` point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeReport {
    pub omega: f64,
    pub lc: f64,
    pub purity: f64,
    pub fidelity: f64,
    pub one_minus_eta: f64,
    pub log10_one_minus_eta: f64,
    pub one_minus_fidelity: f64,
    pub log10_one_minus_fidelity: f64,
    pub z_squared: f64,
    /// Ground-state energy in units of `ħω`.
    pub e00_over_hbar_omega: f64,
    pub mean_potential_over_hbar_omega: f64,
    pub n_max: usize,
    pub converged: bool,
}

impl ModeReport {
    pub fn from_state(params: &ModeParams, g: &GammaMatrix, energy: f64, converged: bool) -> Self {
        let d = deficits(g);
        Self {
            omega: params.omega,
            lc: params.lc,
            purity: 1.0 - d.one_minus_eta,
            fidelity: 1.0 - d.one_minus_fidelity,
            one_minus_eta: d.one_minus_eta,
            log10_one_minus_eta: d.log10_one_minus_eta,
            one_minus_fidelity: d.one_minus_fidelity,
            log10_one_minus_fidelity: d.log10_one_minus_fidelity,
            z_squared: g.z_squared(),
            e00_over_hbar_omega: energy,
            mean_potential_over_hbar_omega: mean_potential_closed_form(params),
            n_max: g.n_max(),
            converged,
        }
    }

    /// Whether first-order theory is inside its comfort zone,
    /// `|⟨𝒰⟩/ħω| ≤ 0.1`.
    pub fn weak_coupling(&self) -> bool {
        self.mean_potential_over_hbar_omega.abs() <= 0.1
    }
}

/// Perturbative pipeline end to end.
pub fn mode_report(params: &ModeParams, trunc: &TruncationSpec, spec: &QuadratureSpec) -> Result<ModeReport> {
    let g = build_gamma(params, trunc, spec)?;
    Ok(ModeReport::from_state(params, &g, ground_state_energy(params), g.converged()))
}
