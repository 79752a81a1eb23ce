use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::roots::IsolatingInterval;
use super::sign::{minus_to_plus, SignChangeEvent};
use crate::error::PsiError;
use crate::poly::{int, to_f64, Axis, BivariatePoly, Rational};
use crate::report::{ser_f64, ser_f64_opt, ser_rational, ser_rational_pair};

pub const MIN_SAMPLES: usize = 33;

/// Half-widths of the box `(-dx, dx) × (-dy, dy)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiBox {
    #[serde(serialize_with = "ser_rational")]
    pub dx: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub dy: Rational,
}

impl PsiBox {
    pub fn square(d: Rational) -> Self {
        PsiBox { dx: d.clone(), dy: d }
    }

    pub fn swap(&self) -> Self {
        PsiBox { dx: self.dy.clone(), dy: self.dx.clone() }
    }
}

/// `n` interior points `y_k = -dy + (k+1)·2dy/(n+1)`; odd `n` includes `y = 0`.
pub fn y_grid(dy: &Rational, n: usize) -> Vec<Rational> {
    let step = dy * int(2) / int(n as i64 + 1);
    (0..n).map(|k| -dy.clone() + &step * int(k as i64 + 1)).collect()
}

/// `dr/dy` at a sample. Certified values come from the implicit function
/// theorem at a simple root; the rest are difference quotients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Slope {
    #[serde(serialize_with = "ser_f64")]
    pub value: f64,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchSample {
    #[serde(serialize_with = "ser_rational")]
    pub y: Rational,
    pub root: IsolatingInterval,
    pub slope: Slope,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveBranch {
    #[serde(serialize_with = "ser_rational_pair")]
    pub omega: (Rational, Rational),
    pub samples: Vec<BranchSample>,
    /// Smallest certified `|dr/dy|`; `None` when no sample is certified.
    #[serde(serialize_with = "ser_f64_opt")]
    pub slope_bound: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DegenerateKind {
    /// The section `s ↦ ∂xφ(s, y)` vanishes identically.
    IdenticallyZero,
    /// The number of `-` to `+` transitions differs from a neighbouring sample.
    CountChange,
    /// Consecutive transitions failed the continuation rule; `y` is the midpoint.
    ContinuationGap,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegenerateSection {
    #[serde(serialize_with = "ser_rational")]
    pub y: Rational,
    pub kind: DegenerateKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchTrace {
    pub branches: Vec<CurveBranch>,
    pub degenerate: Vec<DegenerateSection>,
}

enum Section {
    Zero,
    Events(Vec<SignChangeEvent>),
}

struct Derivs {
    dx: BivariatePoly,
    dxx: BivariatePoly,
    dxy: BivariatePoly,
}

impl Derivs {
    fn new(phi: &BivariatePoly) -> Self {
        let dx = phi.partial_derivative(Axis::X, 1);
        Derivs {
            dxx: dx.partial_derivative(Axis::X, 1),
            dxy: dx.partial_derivative(Axis::Y, 1),
            dx,
        }
    }

    /// `-∂y∂xφ / ∂x²φ` at a simple root; `None` otherwise.
    fn implicit_slope(&self, root: &IsolatingInterval, y: &Rational) -> Option<f64> {
        if root.multiplicity != 1 {
            return None;
        }
        let r = root.midpoint();
        let den = self.dxx.evaluate(&r, y);
        if den.is_zero() {
            return None;
        }
        Some(to_f64(&(-self.dxy.evaluate(&r, y) / den)))
    }

    fn section(&self, y: &Rational, bx: &PsiBox) -> Result<Section, PsiError> {
        let q = self.dx.restrict(Axis::Y, y);
        if q.is_zero() {
            return Ok(Section::Zero);
        }
        minus_to_plus(&q, &-bx.dx.clone(), &bx.dx).map(Section::Events)
    }
}

/// Traces the curves on which `s ↦ ∂xφ(s, y)` changes sign from `-` to `+`.
pub fn trace_branches(
    phi: &BivariatePoly,
    bx: &PsiBox,
    n_samples: usize,
) -> Result<BranchTrace, PsiError> {
    if n_samples < MIN_SAMPLES {
        return Err(PsiError::InvalidParameter(format!("n_samples must be at least {MIN_SAMPLES}")));
    }
    if !bx.dx.is_positive() || !bx.dy.is_positive() {
        return Err(PsiError::InvalidParameter("box half-widths must be positive".into()));
    }
    let d = Derivs::new(phi);
    if d.dx.is_zero() {
        return Err(PsiError::DegenerateDerivative);
    }
    let ys = y_grid(&bx.dy, n_samples);
    let sections: Vec<Section> =
        ys.par_iter().map(|y| d.section(y, bx)).collect::<Result<_, _>>()?;

    for (y, s) in ys.iter().zip(&sections) {
        if let Section::Events(ev) = s {
            if ev.len() >= 2 {
                return Err(PsiError::MultipleSignChanges { y: y.clone(), count: ev.len() });
            }
        }
    }

    let event = |k: usize| match &sections[k] {
        Section::Events(ev) => ev.first(),
        Section::Zero => None,
    };
    let slopes: Vec<Option<f64>> = (0..n_samples)
        .into_par_iter()
        .map(|k| event(k).and_then(|e| d.implicit_slope(&e.location, &ys[k])))
        .collect();
    let dy_step = to_f64(&(&ys[1] - &ys[0]));
    let linked = |k: usize| -> bool {
        let (a, b) = (&event(k).unwrap().location, &event(k + 1).unwrap().location);
        match (slopes[k], slopes[k + 1]) {
            (Some(sa), Some(sb)) => {
                let reach = 2.0 * dy_step * sa.abs().max(sb.abs()).max(1.0)
                    + to_f64(&a.width())
                    + to_f64(&b.width());
                (b.midpoint_f64() - a.midpoint_f64()).abs() <= reach
            }
            _ => true,
        }
    };

    let mut degenerate = Vec::new();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for k in 0..n_samples {
        match (&sections[k], event(k)) {
            (Section::Zero, _) => {
                degenerate.push(DegenerateSection { y: ys[k].clone(), kind: DegenerateKind::IdenticallyZero })
            }
            (_, None) => {
                let near = (k > 0 && event(k - 1).is_some()) || (k + 1 < n_samples && event(k + 1).is_some());
                if near {
                    degenerate.push(DegenerateSection { y: ys[k].clone(), kind: DegenerateKind::CountChange });
                }
            }
            (_, Some(_)) => {
                if k > 0 && event(k - 1).is_some() {
                    if linked(k - 1) {
                        runs.last_mut().unwrap().1 = k;
                        continue;
                    }
                    degenerate.push(DegenerateSection {
                        y: midpoint(&ys[k - 1], &ys[k]),
                        kind: DegenerateKind::ContinuationGap,
                    });
                }
                runs.push((k, k));
            }
        }
    }

    let branches = runs
        .into_iter()
        .map(|(i, j)| {
            let left = if i == 0 {
                -bx.dy.clone()
            } else if event(i - 1).is_some() {
                midpoint(&ys[i - 1], &ys[i])
            } else {
                ys[i - 1].clone()
            };
            let right = if j + 1 == n_samples {
                bx.dy.clone()
            } else if event(j + 1).is_some() {
                midpoint(&ys[j], &ys[j + 1])
            } else {
                ys[j + 1].clone()
            };
            let mids: Vec<f64> = (i..=j).map(|k| event(k).unwrap().location.midpoint_f64()).collect();
            let yf: Vec<f64> = (i..=j).map(|k| to_f64(&ys[k])).collect();
            let samples: Vec<BranchSample> = (i..=j)
                .map(|k| {
                    let slope = match slopes[k] {
                        Some(v) => Slope { value: v, certified: true },
                        None => Slope { value: difference_quotient(&yf, &mids, k - i), certified: false },
                    };
                    BranchSample { y: ys[k].clone(), root: event(k).unwrap().location.clone(), slope }
                })
                .collect();
            let slope_bound = samples
                .iter()
                .filter(|s| s.slope.certified)
                .map(|s| s.slope.value.abs())
                .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v))));
            CurveBranch { omega: (left, right), samples, slope_bound }
        })
        .collect();

    Ok(BranchTrace { branches, degenerate })
}

fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

/// Central difference inside the run, one-sided at its ends, NaN for a single sample.
fn difference_quotient(y: &[f64], r: &[f64], t: usize) -> f64 {
    let n = y.len();
    if n < 2 {
        return f64::NAN;
    }
    let (a, b) = if t == 0 {
        (0, 1)
    } else if t + 1 == n {
        (n - 2, n - 1)
    } else {
        (t - 1, t + 1)
    };
    (r[b] - r[a]) / (y[b] - y[a])
}

/// `dr/dy` of `branch` at `y`: the stored value at a sample, otherwise the
/// implicit slope at the transition nearest the interpolated branch position,
/// falling back to a difference quotient.
pub fn branch_slope(phi: &BivariatePoly, branch: &CurveBranch, y: &Rational) -> Slope {
    if let Some(s) = branch.samples.iter().find(|s| &s.y == y) {
        return s.slope;
    }
    let yf = to_f64(y);
    let k = branch.samples.partition_point(|s| &s.y < y);
    let (a, b) = match branch.samples.len() {
        0 => return Slope { value: f64::NAN, certified: false },
        1 => (0, 0),
        n => (k.saturating_sub(1).min(n - 2), k.saturating_sub(1).min(n - 2) + 1),
    };
    let (sa, sb) = (&branch.samples[a], &branch.samples[b]);
    let (ya, yb) = (to_f64(&sa.y), to_f64(&sb.y));
    let (ra, rb) = (sa.root.midpoint_f64(), sb.root.midpoint_f64());
    let quotient = if a == b { f64::NAN } else { (rb - ra) / (yb - ya) };
    let guess = if a == b { ra } else { ra + quotient * (yf - ya) };

    let d = Derivs::new(phi);
    let width = to_f64(&branch.omega.1) - to_f64(&branch.omega.0);
    let span = Rational::from_float(guess.abs() + width + 1.0).unwrap_or_else(|| int(1));
    if let Ok(Section::Events(ev)) = d.section(y, &PsiBox { dx: span, dy: int(1) }) {
        let nearest = ev.iter().min_by(|p, q| {
            let dp = (p.location.midpoint_f64() - guess).abs();
            let dq = (q.location.midpoint_f64() - guess).abs();
            dp.total_cmp(&dq)
        });
        if let Some(e) = nearest {
            if let Some(v) = d.implicit_slope(&e.location, y) {
                return Slope { value: v, certified: true };
            }
        }
    }
    Slope { value: quotient, certified: false }
}
