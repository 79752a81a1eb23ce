//! Finite-difference realizations of `L1`, `L2` and `K = L1ᵀL1 + L2ᵀL2` on
//! a Dirichlet grid, smallest eigenvalues, `λ`-sweeps and exponent fits,
//! plus grid checks of the integration-by-parts identity and the
//! one-dimensional sign lemma.

mod amg;
mod assemble;
mod eig;
mod energy;
mod fit;
mod grid;
mod lemma1d;
mod sparse;
mod sweep;

pub use amg::Amg;
pub use assemble::{assemble_l, assemble_witten, max_gradient};
pub use eig::{min_eig, min_eig_with, EigOptions, EigResult, DEFAULT_MAX_ITER, DEFAULT_TOL};
pub use energy::{energy_identity_check, observed_order, smooth_test_function};
pub use fit::{fit_exponent, fit_power_law, ExponentFit, DEFAULT_TAIL, MIN_FIT_POINTS};
pub use grid::{interpolate, GridSpec};
pub use lemma1d::{oned_sign_lemma_check, oned_sign_lemma_check_with, LemmaReport};
pub use sparse::{dot, norm, CsrMatrix};
pub use sweep::{geometric_lambdas, solve_lambda, sweep, GridPolicy, SweepRecord};
