//! Self-decoherence of a harmonic internal-vibration mode through its
//! gravitational coupling to a virtual clone.
//!
//! Everything is expressed in Planck units with `ħ = G = c = 1`, so a mode is
//! described by two numbers: its frequency `ω/Ω_P` and the regularization
//! length `L_c/L_P` of the mode-clone potential. From these the crate builds
//! the first-order perturbed ground state of mode + clone, traces out the
//! clone, and reports purity, fidelity to the unperturbed ground state and
//! the ground-state energy. An exact diagonalization of the truncated
//! two-mode Hamiltonian is shipped alongside as a brute-force check.
//!
//! ```
//! use gravdeco::{ModeParams, TruncationSpec, QuadratureSpec, perturbation};
//!
//! let params = ModeParams::new(1e-2, 1.0).unwrap();
//! let report = perturbation::mode_report(&params, &TruncationSpec::default(), &QuadratureSpec::default()).unwrap();
//! assert!(report.one_minus_fidelity > 0.0 && report.one_minus_fidelity < 1e-6);
//! ```

pub mod cli;
pub mod coupling;
mod error;
pub mod oracle;
pub mod params;
pub mod perturbation;
pub mod specfun;
pub mod sum;

pub use error::{Error, Result};
pub use params::{ModeParams, TruncationSpec};
pub use perturbation::{DensityMatrix, GammaMatrix, ModeReport};
pub use specfun::quadrature::{QuadScheme, QuadratureSpec};
