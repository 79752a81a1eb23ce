use serde::Serialize;

use super::QuantityContext;
use crate::error::QuantityError;
use crate::poly::{to_f64, Axis, Rational};
use crate::report::{ser_f64, ser_f64_vec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    /// `ξ(x) = λ∂xφ(x0 + x/M1, y0) / M1`
    Xi,
    /// `ζ(y) = λ∂yφ(x0, y0 + y/M2) / M2`
    Zeta,
    /// `η(y) = λ∂yφ(x0, y0 + y/G) / G`
    Eta,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileReport {
    pub kind: ProfileKind,
    /// The normalizing weight `M1`, `M2` or `G` at the base point.
    #[serde(serialize_with = "ser_f64")]
    pub scale: f64,
    /// Taylor coefficients of the profile in the scaled variable, lowest first.
    #[serde(serialize_with = "ser_f64_vec")]
    pub coeffs: Vec<f64>,
    /// `|∂^j profile(0)|`.
    #[serde(serialize_with = "ser_f64_vec")]
    pub normalized: Vec<f64>,
    #[serde(serialize_with = "ser_f64")]
    pub sup_coeff: f64,
    pub peak_order: usize,
    #[serde(serialize_with = "ser_f64")]
    pub peak_value: f64,
    #[serde(serialize_with = "ser_f64")]
    pub c0_bound: f64,
}

/// `(m+1)^{-(m+1)}`: the peak summand of a weight with at most `m + 1`
/// terms carries at least this normalized size.
pub fn c0_bound(m: u32) -> f64 {
    let b = (m + 1) as f64;
    b.powf(-b)
}

/// `ξ` (axis x) or `ζ` (axis y) at the base point.
pub fn scaled_profile(
    ctx: &QuantityContext,
    axis: Axis,
    x0: &Rational,
    y0: &Rational,
) -> Result<ProfileReport, QuantityError> {
    let terms = ctx.m_terms(axis, x0, y0);
    let scale: f64 = terms.iter().sum();
    let kind = match axis {
        Axis::X => ProfileKind::Xi,
        Axis::Y => ProfileKind::Zeta,
    };
    build(ctx, kind, axis, x0, y0, scale, &terms)
}

/// `η` at the base point, normalized by `G`.
pub fn eta_profile(ctx: &QuantityContext, x0: &Rational, y0: &Rational) -> Result<ProfileReport, QuantityError> {
    let terms = ctx.m_terms(Axis::Y, x0, y0);
    build(ctx, ProfileKind::Eta, Axis::Y, x0, y0, ctx.g(x0, y0), &terms)
}

fn build(
    ctx: &QuantityContext,
    kind: ProfileKind,
    axis: Axis,
    x0: &Rational,
    y0: &Rational,
    scale: f64,
    terms: &[f64],
) -> Result<ProfileReport, QuantityError> {
    if !(scale > 0.0) {
        return Err(QuantityError::ZeroScale);
    }
    let mut coeffs = Vec::with_capacity(terms.len());
    let mut normalized = Vec::with_capacity(terms.len());
    let mut factorial = 1.0;
    for (j, p) in ctx.pure_derivatives(axis).iter().enumerate() {
        if j > 0 {
            factorial *= j as f64;
        }
        let d = ctx.lambda * to_f64(&p.evaluate(x0, y0)) / scale.powi(j as i32 + 1);
        coeffs.push(d / factorial);
        normalized.push(d.abs());
    }
    let peak_order = terms
        .iter()
        .enumerate()
        .fold(0, |best, (j, &t)| if t > terms[best] { j } else { best });
    Ok(ProfileReport {
        kind,
        scale,
        sup_coeff: normalized.iter().cloned().fold(0.0, f64::max),
        peak_value: normalized[peak_order],
        coeffs,
        normalized,
        peak_order,
        c0_bound: c0_bound(ctx.m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, parse_poly};

    #[test]
    fn maire_zeta_is_minus_identity() {
        let ctx = QuantityContext::new(parse_poly("x^3 - x*y^2").unwrap(), 1.0).unwrap();
        let r = scaled_profile(&ctx, Axis::Y, &int(1), &int(0)).unwrap();
        assert!((r.scale - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.coeffs.len(), 2);
        assert_eq!(r.coeffs[0], 0.0);
        assert!((r.coeffs[1] + 1.0).abs() < 1e-15);
        assert_eq!(r.peak_order, 1);
        assert!((r.peak_value - 1.0).abs() < 1e-15);
        assert!(r.sup_coeff <= 1.0 + 1e-12);
    }

    #[test]
    fn quadratic_zeta() {
        let ctx = QuantityContext::new(parse_poly("y^2/2").unwrap(), 1.0).unwrap();
        let r = scaled_profile(&ctx, Axis::Y, &int(0), &int(0)).unwrap();
        assert_eq!(r.scale, 1.0);
        assert_eq!(r.coeffs, vec![0.0, 1.0]);
        assert_eq!(r.peak_order, 1);
        assert_eq!(r.c0_bound, 1.0 / 27.0);
    }

    #[test]
    fn zero_potential_has_no_scale() {
        let ctx = QuantityContext::new(parse_poly("0").unwrap(), 1.0).unwrap();
        for axis in [Axis::X, Axis::Y] {
            assert!(matches!(scaled_profile(&ctx, axis, &int(0), &int(0)), Err(QuantityError::ZeroScale)));
        }
        assert!(matches!(eta_profile(&ctx, &int(0), &int(0)), Err(QuantityError::ZeroScale)));
    }
}
