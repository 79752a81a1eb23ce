//! Condition (Ψ) analysis: exact root isolation of the one-variable sections
//! of `∂xφ` and `∂yφ`, tracing of the curves `r(y)` where `∂xφ(·, y)` turns
//! from negative to positive, and the sampled decision of `H1(α)`, `H2(α)`.

mod branches;
mod roots;
mod sign;
mod verdict;

pub use branches::{
    branch_slope, trace_branches, y_grid, BranchSample, BranchTrace, CurveBranch, DegenerateKind,
    DegenerateSection, PsiBox, Slope, MIN_SAMPLES,
};
pub use roots::{real_roots, sturm_roots, IsolatingInterval, REFINE_BITS};
pub use sign::{classify_sign_changes, minus_to_plus, section_psi_bar_ok, SignChangeEvent, Transition};
pub use verdict::{check_h1, check_h2, witness_rechecks, H1Verdict, Status, Witness};
