//! Decision procedures and numerical checks for the complex vector fields
//! `L1 = ∂x + λ∂xφ`, `L2 = ∂y + λ∂yφ` attached to a polynomial potential `φ(x, y)`.
//!
//! The crate is split into four layers:
//!
//! * [`poly`]: exact rational polynomials in `x`, `y` and a parser for them.
//! * [`psi`]: real-root isolation, sign-transition classification and the
//!   sampled decision of the assumptions `H1(α)` / `H2(α)`.
//! * [`quantities`]: the weights `M1`, `M2`, `G`, iterated brackets, scaled
//!   profiles and slow-variation scans.
//! * [`spectral`]: finite-difference realizations of `L1`, `L2` and of the
//!   Witten Laplacian `K = L1ᵀL1 + L2ᵀL2`, smallest-eigenvalue sweeps in `λ`
//!   and log-log exponent fits.
//!
//! [`catalog`] and [`report`] hold the shared example potentials and the
//! stable JSON/CSV formatting used by the command-line front end.

// NaN must fail positivity checks, so `!(x > 0.0)` is intended.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod error;
pub mod poly;
pub mod psi;
pub mod quantities;
pub mod report;
pub mod spectral;

pub use error::Error;
pub use poly::{parse_poly, Axis, BivariatePoly, Rational, UnivariatePoly, Var};
pub use psi::{check_h1, check_h2, H1Verdict, Status};
