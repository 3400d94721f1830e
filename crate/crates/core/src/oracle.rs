//! Exact diagonalization of `𝒲 + 𝒰` in the truncated product Fock basis,
//! used as an independent check of the first-order pipeline.
//!
//! Parity of `n + n̄` is conserved by the potential, so by default only the
//! even sector (which holds the ground state) is diagonalized. The full
//! space is available for checking that the odd sector really decouples.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::coupling::{potential_matrix, product_index};
use crate::perturbation::{build_gamma, ground_state_energy, GammaMatrix, ModeReport};
use crate::sum::CompensatedSum;
use crate::{Error, ModeParams, QuadratureSpec, Result, TruncationSpec};

/// Largest cutoff accepted for dense assembly: `(81)² = 6561` states.
pub const MAX_DENSE_N_MAX: usize = 80;

/// `H = 𝒲 + 𝒰` in units of `ħω`, with `𝒲_{n n̄} = n + n̄ + 1`, indexed by
/// [`product_index`].
pub fn assemble_hamiltonian(params: &ModeParams, trunc: &TruncationSpec, spec: &QuadratureSpec) -> Result<DMatrix<f64>> {
    if trunc.n_max > MAX_DENSE_N_MAX {
        return Err(Error::BasisTooLarge { n_max: trunc.n_max, limit: MAX_DENSE_N_MAX });
    }
    let mut h = potential_matrix(params, trunc, spec)?;
    add_free_energies(&mut h, trunc.n_max);
    Ok(h)
}

/// `𝒲` alone.
pub fn free_hamiltonian(n_max: usize) -> DMatrix<f64> {
    let dim = n_max + 1;
    let mut h = DMatrix::zeros(dim * dim, dim * dim);
    add_free_energies(&mut h, n_max);
    h
}

fn add_free_energies(h: &mut DMatrix<f64>, n_max: usize) {
    for n in 0..=n_max {
        for k in 0..=n_max {
            let i = product_index(n, k, n_max);
            h[(i, i)] += (n + k + 1) as f64;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParitySector {
    /// States with even `n + n̄` only.
    Even,
    Full,
}

#[derive(Debug, Clone)]
pub struct ExactGroundState {
    pub params: ModeParams,
    /// `c_{n n̄}`, unit norm, sign fixed by `c₀₀ > 0`.
    pub coefficients: DMatrix<f64>,
    /// Ground energy in units of `ħω`.
    pub energy: f64,
    /// `‖H c - E c‖₂`.
    pub residual: f64,
    /// Frobenius norm of `H`, an upper bound on its spectral norm.
    pub hamiltonian_norm: f64,
}

impl ExactGroundState {
    pub fn n_max(&self) -> usize {
        self.coefficients.nrows() - 1
    }

    pub fn residual_ok(&self) -> bool {
        self.residual <= 1e-10 * self.hamiltonian_norm
    }

    /// The state in the factored layout used by the deficit formulas
    /// (anchor `c₀₀`, unit scale).
    pub fn gamma_matrix(&self) -> GammaMatrix {
        GammaMatrix::from_parts(self.coefficients[(0, 0)], 1.0, self.coefficients.clone())
    }

    /// Total weight on odd `n + n̄`.
    pub fn odd_weight(&self) -> f64 {
        let c = &self.coefficients;
        let dim = c.nrows();
        (0..dim).flat_map(|n| (0..dim).map(move |k| (n, k))).filter(|(n, k)| (n + k) % 2 == 1).map(|(n, k)| c[(n, k)] * c[(n, k)]).sum()
    }
}

/// Lowest eigenpair of the assembled Hamiltonian in the even sector.
pub fn exact_ground_state(params: &ModeParams, trunc: &TruncationSpec, spec: &QuadratureSpec) -> Result<ExactGroundState> {
    let h = assemble_hamiltonian(params, trunc, spec)?;
    ground_state_of(&h, params, trunc.n_max, ParitySector::Even)
}

/// Lowest eigenpair of a given Hamiltonian on `{0..=n_max}²`.
pub fn ground_state_of(h: &DMatrix<f64>, params: &ModeParams, n_max: usize, sector: ParitySector) -> Result<ExactGroundState> {
    let dim = n_max + 1;
    if h.nrows() != dim * dim || !h.is_square() {
        return Err(Error::param("hamiltonian", format!("expected {0}x{0}, got {1}x{2}", dim * dim, h.nrows(), h.ncols())));
    }
    let indices: Vec<usize> = (0..dim * dim).filter(|i| sector == ParitySector::Full || (i / dim + i % dim) % 2 == 0).collect();
    let sub = DMatrix::from_fn(indices.len(), indices.len(), |i, j| h[(indices[i], indices[j])]);
    let max_iter = 1000 * indices.len();
    let eig = SymmetricEigen::try_new(sub, f64::EPSILON, max_iter)
        .ok_or_else(|| Error::Eigensolver(format!("no convergence within {max_iter} sweeps on {} states", indices.len())))?;
    let lowest = eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap();
    let energy = eig.eigenvalues[lowest];

    let mut full = DVector::zeros(dim * dim);
    for (i, &idx) in indices.iter().enumerate() {
        full[idx] = eig.eigenvectors[(i, lowest)];
    }
    let sign = if full[0] < 0.0 { -1.0 } else { 1.0 };
    full *= sign / full.norm();
    let residual = (h * &full - &full * energy).norm();
    let coefficients = DMatrix::from_fn(dim, dim, |n, k| full[product_index(n, k, n_max)]);
    Ok(ExactGroundState { params: *params, coefficients, energy, residual, hamiltonian_norm: h.norm() })
}

/// Purity, fidelity and deficits of the exact reduced state `ρ = C Cᵀ`.
/// `converged` reports whether the eigen residual is within `1e-10‖H‖`.
pub fn exact_reduced_report(state: &ExactGroundState) -> ModeReport {
    ModeReport::from_state(&state.params, &state.gamma_matrix(), state.energy, state.residual_ok())
}

/// `1 - |⟨a|b⟩|²` for unit vectors, as `½ Σ_{ij} (a_i b_j - a_j b_i)²`.
pub fn infidelity(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let (a, b) = (a.as_slice(), b.as_slice());
    let mut acc = CompensatedSum::new();
    for i in 0..a.len() {
        if a[i] == 0.0 && b[i] == 0.0 {
            continue;
        }
        for j in i + 1..a.len() {
            let m = a[i] * b[j] - a[j] * b[i];
            acc.add(m * m);
        }
    }
    acc.value()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonTolerances {
    /// Relative agreement of `1 - F` and `1 - η`.
    pub deficit_rel: f64,
    /// Absolute agreement of ground energies, units of `ħω`.
    pub energy_abs: f64,
}

impl Default for ComparisonTolerances {
    fn default() -> Self {
        Self { deficit_rel: 1e-3, energy_abs: 1e-7 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub omega: f64,
    pub lc: f64,
    pub n_max: usize,
    pub perturbative: ModeReport,
    pub exact: ModeReport,
    pub rel_diff_one_minus_fidelity: f64,
    pub rel_diff_one_minus_eta: f64,
    /// `ℰ₀₀ - E_exact` in units of `ħω`; non-negative by Rayleigh-Ritz.
    pub energy_gap: f64,
    /// `1 - |⟨Φ_PT|Φ_exact⟩|²`.
    pub state_infidelity: f64,
    pub eigen_residual: f64,
}

impl ComparisonReport {
    pub fn passes(&self, tol: &ComparisonTolerances) -> bool {
        self.rel_diff_one_minus_fidelity <= tol.deficit_rel
            && self.rel_diff_one_minus_eta <= tol.deficit_rel
            && self.energy_gap.abs() <= tol.energy_abs
            && self.exact.converged
    }
}

fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

/// Perturbative and exact results side by side, in the same truncated space.
pub fn compare(params: &ModeParams, trunc: &TruncationSpec, spec: &QuadratureSpec) -> Result<ComparisonReport> {
    let g = build_gamma(params, trunc, spec)?;
    let pt = ModeReport::from_state(params, &g, ground_state_energy(params), g.converged());
    let state = exact_ground_state(params, trunc, spec)?;
    let exact = exact_reduced_report(&state);
    let pt_state = g.to_dense() / g.z();
    Ok(ComparisonReport {
        omega: params.omega,
        lc: params.lc,
        n_max: trunc.n_max,
        perturbative: pt,
        exact,
        rel_diff_one_minus_fidelity: rel_diff(pt.one_minus_fidelity, exact.one_minus_fidelity),
        rel_diff_one_minus_eta: rel_diff(pt.one_minus_eta, exact.one_minus_eta),
        energy_gap: pt.e00_over_hbar_omega - state.energy,
        state_infidelity: infidelity(&pt_state, &state.coefficients),
        eigen_residual: state.residual,
    })
}
