//! The regularized mode-clone potential and its matrix elements.
//!
//! All energies returned here are in units of `ħω`. With `t = q/β` the
//! potential reads `𝒰/ħω = -x²√2 / √((t - t̄)² + ε²)` where `ε = L_c/β`, so
//! every matrix element is `-x²√2` times an `ε`-dependent integral over
//! unit-width oscillator functions. The `x²` prefactor is applied once,
//! outside the quadrature.

mod elements;
mod potential;
mod rotation;

pub use elements::{
    gamma_element, gamma_element_reduced, matrix_element_2d, potential_column, potential_matrix,
    reduced_kernel_column, reduced_kernel_matrix, GammaElement,
};
pub use potential::{mean_potential_closed_form, potential, PotentialEval};
pub use rotation::RotatedBasisMap;

/// Index of the product state `|n, n̄⟩` in a basis with `0..=n_max` per mode.
#[inline]
pub fn product_index(n: usize, nbar: usize, n_max: usize) -> usize {
    n * (n_max + 1) + nbar
}
