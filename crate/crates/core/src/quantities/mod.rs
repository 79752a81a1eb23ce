//! The weights `M1`, `M2`, `G` attached to `λφ`, the sets where they cannot
//! vanish, iterated brackets, scaled profiles and slow-variation scans.

mod bracket;
mod profile;
mod slow;

pub use bracket::{bracket_a, commutator, ImagPoly};
pub use profile::{c0_bound, eta_profile, scaled_profile, ProfileKind, ProfileReport};
pub use slow::{slow_variation_scan, SlowVariationReport, SlowVariationStat};

use num_traits::Zero;
use serde::Serialize;

use crate::error::QuantityError;
use crate::poly::{from_f64, to_f64, Axis, BivariatePoly, Rational};
use crate::psi::real_roots;

/// `φ`, `λ` and the derivatives every quantity is built from.
#[derive(Clone, Debug)]
pub struct QuantityContext {
    pub phi: BivariatePoly,
    pub lambda: f64,
    /// Degree of `∂xφ` in `x`; `None` when `∂xφ ≡ 0`.
    pub l: Option<u32>,
    /// Degree of `∂yφ` in `y`; `None` when `∂yφ ≡ 0`.
    pub d: Option<u32>,
    pub m: u32,
    dx: Vec<BivariatePoly>,
    dy: Vec<BivariatePoly>,
    mixed: Vec<((u32, u32), BivariatePoly)>,
}

impl QuantityContext {
    pub fn new(phi: BivariatePoly, lambda: f64) -> Result<Self, QuantityError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(QuantityError::InvalidParameter("lambda must be positive".into()));
        }
        let m = phi.total_degree();
        let l = phi.partial_derivative(Axis::X, 1).degree_in(Axis::X);
        let d = phi.partial_derivative(Axis::Y, 1).degree_in(Axis::Y);
        let pure = |axis, top: Option<u32>| -> Vec<BivariatePoly> {
            top.map_or(Vec::new(), |t| (0..=t).map(|j| phi.partial_derivative(axis, j + 1)).collect())
        };
        let dx = pure(Axis::X, l);
        let dy = pure(Axis::Y, d);
        let mut mixed = Vec::new();
        for order in 1..=m {
            for i in (0..=order).rev() {
                let p = phi.mixed_derivative(i, order - i);
                if !p.is_zero() {
                    mixed.push(((i, order - i), p));
                }
            }
        }
        Ok(QuantityContext { phi, lambda, l, d, m, dx, dy, mixed })
    }

    /// `∂^{j+1}φ` along `axis`, for `j = 0..=L` (or `d`).
    pub(crate) fn pure_derivatives(&self, axis: Axis) -> &[BivariatePoly] {
        match axis {
            Axis::X => &self.dx,
            Axis::Y => &self.dy,
        }
    }

    /// The summands `|λ∂^{j+1}φ(x0, y0)|^{1/(j+1)}` of `M1` (axis x) or `M2` (axis y).
    pub fn m_terms(&self, axis: Axis, x0: &Rational, y0: &Rational) -> Vec<f64> {
        self.pure_derivatives(axis)
            .iter()
            .enumerate()
            .map(|(j, p)| root_term(self.lambda, &p.evaluate(x0, y0), j as u32 + 1))
            .collect()
    }

    pub fn m1(&self, x0: &Rational, y0: &Rational) -> f64 {
        self.m_terms(Axis::X, x0, y0).iter().sum()
    }

    pub fn m2(&self, x0: &Rational, y0: &Rational) -> f64 {
        self.m_terms(Axis::Y, x0, y0).iter().sum()
    }

    /// `G = Σ_{1 ≤ i+j ≤ m} |λ∂x^i∂y^jφ|^{1/(i+j)}`.
    pub fn g(&self, x0: &Rational, y0: &Rational) -> f64 {
        self.mixed
            .iter()
            .map(|((i, j), p)| root_term(self.lambda, &p.evaluate(x0, y0), i + j))
            .sum()
    }

    pub fn m1_f64(&self, x0: f64, y0: f64) -> f64 {
        self.m1(&from_f64(x0), &from_f64(y0))
    }

    pub fn m2_f64(&self, x0: f64, y0: f64) -> f64 {
        self.m2(&from_f64(x0), &from_f64(y0))
    }

    pub fn g_f64(&self, x0: f64, y0: f64) -> f64 {
        self.g(&from_f64(x0), &from_f64(y0))
    }

    /// `y0 ∈ N1`: `M1(·, y0)` has no zero on the real line.
    pub fn in_n1(&self, y0: &Rational) -> bool {
        no_common_real_root(&self.dx, Axis::Y, y0)
    }

    /// `x0 ∈ N2`: `M2(x0, ·)` has no zero on the real line.
    pub fn in_n2(&self, x0: &Rational) -> bool {
        no_common_real_root(&self.dy, Axis::X, x0)
    }
}

fn root_term(lambda: f64, v: &Rational, k: u32) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    (lambda * to_f64(v)).abs().powf(1.0 / k as f64)
}

/// The polynomials `family[j](·)` with `fixed` set to `value` share no real root.
fn no_common_real_root(family: &[BivariatePoly], fixed: Axis, value: &Rational) -> bool {
    // The last member is the constant top coefficient times a factorial.
    match family.last() {
        None => return false,
        Some(top) if !top.restrict(fixed, value).is_zero() && top.restrict(fixed, value).is_constant() => {
            return true
        }
        _ => {}
    }
    let mut g: Option<crate::poly::UnivariatePoly> = None;
    for p in family {
        let q = p.restrict(fixed, value);
        g = Some(match g {
            None => q,
            Some(g) => g.gcd(&q),
        });
    }
    let g = g.expect("nonempty family");
    if g.is_zero() {
        return false;
    }
    if g.is_constant() {
        return true;
    }
    real_roots(&g).map(|r| r.is_empty()).unwrap_or(false)
}

/// Smallest `k ≥ 1` with `∂x^{k+1}φ(0, 0) ≠ 0`.
pub fn finite_type_order_x(phi: &BivariatePoly) -> Option<u32> {
    phi.terms().filter(|(&(i, j), _)| j == 0 && i >= 2).map(|(&(i, _), _)| i - 1).min()
}

/// Everything the `quantities` command reports at one point.
#[derive(Clone, Debug, Serialize)]
pub struct PointQuantities {
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub m1: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub m2: f64,
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub g: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub in_n1: bool,
    pub in_n2: bool,
}

pub fn point_quantities(ctx: &QuantityContext, x0: &Rational, y0: &Rational) -> PointQuantities {
    PointQuantities {
        m1: ctx.m1(x0, y0),
        m2: ctx.m2(x0, y0),
        g: ctx.g(x0, y0),
        k: finite_type_order_x(&ctx.phi),
        in_n1: ctx.in_n1(y0),
        in_n2: ctx.in_n2(x0),
    }
}
