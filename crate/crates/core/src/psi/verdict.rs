use serde::Serialize;

use super::branches::{trace_branches, CurveBranch, DegenerateSection, PsiBox};
use super::roots::IsolatingInterval;
use super::sign::minus_to_plus;
use crate::error::PsiError;
use crate::poly::{Axis, BivariatePoly, Rational, UnivariatePoly};
use crate::report::{ser_f64, ser_rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    Holds,
    Fails,
    Undecided,
}

/// A concrete violation, one per failing clause.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "clause")]
pub enum Witness {
    /// More than one `-` to `+` transition of `s ↦ ∂xφ(s, y)`.
    MultipleMinusToPlus {
        #[serde(serialize_with = "ser_rational")]
        y: Rational,
        count: usize,
    },
    /// `s ↦ ∂yφ(r(y), s)` changes sign from `-` to `+` inside `event`,
    /// for every `r` in `root`.
    PsiBarSection {
        #[serde(serialize_with = "ser_rational")]
        y: Rational,
        root: IsolatingInterval,
        event: IsolatingInterval,
    },
    /// `|dr/dy| < α` at `y`.
    SlopeBelowAlpha {
        #[serde(serialize_with = "ser_rational")]
        y: Rational,
        root: IsolatingInterval,
        #[serde(serialize_with = "ser_f64")]
        slope: f64,
        certified: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct H1Verdict {
    pub status: Status,
    #[serde(serialize_with = "ser_f64")]
    pub alpha: f64,
    #[serde(rename = "box")]
    pub bx: PsiBox,
    pub n_samples: usize,
    pub branches: Vec<CurveBranch>,
    pub degenerate: Vec<DegenerateSection>,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl H1Verdict {
    /// The branches, when they certify the assumption.
    pub fn certificate(&self) -> Option<&[CurveBranch]> {
        (self.status == Status::Holds).then_some(self.branches.as_slice())
    }
}

/// Decides `H1(α)` on the box by exact per-sample checks along a rational
/// `y`-grid of `n_samples` points.
pub fn check_h1(
    phi: &BivariatePoly,
    bx: &PsiBox,
    alpha: f64,
    n_samples: usize,
) -> Result<H1Verdict, PsiError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(PsiError::InvalidParameter("alpha must be positive".into()));
    }
    let mut v = H1Verdict {
        status: Status::Holds,
        alpha,
        bx: bx.clone(),
        n_samples,
        branches: Vec::new(),
        degenerate: Vec::new(),
        witnesses: Vec::new(),
        notes: Vec::new(),
    };
    let trace = match trace_branches(phi, bx, n_samples) {
        Ok(t) => t,
        Err(PsiError::DegenerateDerivative) => {
            v.notes.push("∂xφ vanishes identically: no sign changes, holds vacuously".into());
            return Ok(v);
        }
        Err(PsiError::MultipleSignChanges { y, count }) => {
            v.status = Status::Fails;
            v.witnesses.push(Witness::MultipleMinusToPlus { y, count });
            return Ok(v);
        }
        Err(e) => return Err(e),
    };
    v.branches = trace.branches;
    v.degenerate = trace.degenerate;
    if v.branches.is_empty() {
        v.notes.push("no sign change from - to + in any sampled section".into());
    }

    let dy_phi = phi.partial_derivative(Axis::Y, 1);
    let (s_lo, s_hi) = (-bx.dy.clone(), bx.dy.clone());
    let mut undecided_sections = 0usize;
    let mut undecided_slopes = 0usize;
    let mut psi_bar_witness = None;
    let mut slope_witness = None;

    for b in &v.branches {
        for smp in &b.samples {
            // Clause (ii): ∂yφ(r(y), ·) with r replaced by the bracket ends.
            let rs: Vec<Rational> = match &smp.root.exact {
                Some(r) => vec![r.clone()],
                None => vec![smp.root.lo.clone(), smp.root.hi.clone()],
            };
            let events: Vec<_> = rs
                .iter()
                .map(|r| {
                    let q: UnivariatePoly = dy_phi.restrict(Axis::X, r);
                    minus_to_plus(&q, &s_lo, &s_hi).unwrap_or_default()
                })
                .collect();
            let bad = events.iter().filter(|e| !e.is_empty()).count();
            if bad == events.len() {
                if psi_bar_witness.is_none() {
                    psi_bar_witness = Some(Witness::PsiBarSection {
                        y: smp.y.clone(),
                        root: smp.root.clone(),
                        event: events[0][0].location.clone(),
                    });
                }
            } else if bad > 0 {
                undecided_sections += 1;
            }

            // Clause (iii).
            let s = smp.slope;
            if s.value.is_nan() {
                undecided_slopes += 1;
            } else if s.value.abs() < alpha {
                if slope_witness.is_none() {
                    slope_witness = Some(Witness::SlopeBelowAlpha {
                        y: smp.y.clone(),
                        root: smp.root.clone(),
                        slope: s.value,
                        certified: s.certified,
                    });
                }
            } else if !s.certified {
                undecided_slopes += 1;
            }
        }
    }

    v.witnesses.extend(psi_bar_witness);
    v.witnesses.extend(slope_witness);
    if undecided_sections > 0 {
        v.notes.push(format!(
            "{undecided_sections} sample(s): ∂yφ(r, ·) differs between the ends of the root bracket"
        ));
    }
    if undecided_slopes > 0 {
        v.notes.push(format!("{undecided_slopes} sample(s) without a certified slope"));
    }
    v.status = if !v.witnesses.is_empty() {
        Status::Fails
    } else if undecided_sections + undecided_slopes > 0 {
        Status::Undecided
    } else {
        Status::Holds
    };
    if v.status == Status::Holds && !v.branches.is_empty() {
        v.notes.push(format!("verified at {n_samples} sampled sections"));
    }
    Ok(v)
}

/// `H2(α)`: `H1(α)` for the potential with `x` and `y` exchanged.
pub fn check_h2(
    phi: &BivariatePoly,
    bx: &PsiBox,
    alpha: f64,
    n_samples: usize,
) -> Result<H1Verdict, PsiError> {
    check_h1(&phi.swap(), &bx.swap(), alpha, n_samples)
}

/// Re-checks a witness by plain float evaluation of `φ`'s derivatives on a
/// fine grid, independent of the exact root machinery.
pub fn witness_rechecks(phi: &BivariatePoly, bx: &PsiBox, alpha: f64, w: &Witness) -> bool {
    use crate::poly::to_f64;
    let dx = phi.partial_derivative(Axis::X, 1).to_float();
    let dy = phi.partial_derivative(Axis::Y, 1).to_float();
    let sign_flips_up = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64| -> usize {
        let n = 20_000;
        let mut count = 0;
        let mut prev = f(lo + (hi - lo) * 0.5 / n as f64);
        for k in 1..n {
            let v = f(lo + (hi - lo) * (k as f64 + 0.5) / n as f64);
            if prev < 0.0 && v > 0.0 {
                count += 1;
            }
            if v != 0.0 {
                prev = v;
            }
        }
        count
    };
    let (xd, yd) = (to_f64(&bx.dx), to_f64(&bx.dy));
    match w {
        Witness::MultipleMinusToPlus { y, .. } => {
            let y = to_f64(y);
            sign_flips_up(&|s| dx.eval(s, y), -xd, xd) >= 2
        }
        Witness::PsiBarSection { root, event, .. } => {
            let r = root.midpoint_f64();
            let (a, b) = (to_f64(&event.lo), to_f64(&event.hi));
            let pad = (b - a).max(1e-9);
            let (a, b) = ((a - pad).max(-yd), (b + pad).min(yd));
            dy.eval(r, a) < 0.0 && dy.eval(r, b) > 0.0
        }
        Witness::SlopeBelowAlpha { y, root, .. } => {
            let (y, r) = (to_f64(y), root.midpoint_f64());
            let h = 1e-6;
            let dxx = (dx.eval(r + h, y) - dx.eval(r - h, y)) / (2.0 * h);
            let dxy = (dx.eval(r, y + h) - dx.eval(r, y - h)) / (2.0 * h);
            dxx.abs() > 0.0 && (dxy / dxx).abs() < alpha
        }
    }
}
