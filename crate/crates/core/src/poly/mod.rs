//! Exact polynomial arithmetic over the rationals.

mod bivariate;
mod parse;
mod univariate;

pub use bivariate::{BivariatePoly, FloatPoly2};
pub use parse::{parse_poly, ParseError, ParseErrorKind};
pub use univariate::UnivariatePoly;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Exact coefficient type. Always stored in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// A coordinate axis of the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }

    pub fn as_var(self) -> Var {
        match self {
            Axis::X => Var::X,
            Axis::Y => Var::Y,
        }
    }
}

/// Name of the free variable of a [`UnivariatePoly`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    X,
    Y,
    S,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::S => "s",
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact conversion of a finite float. Panics on NaN or infinities.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// `-1`, `0` or `1`.
pub fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// `p` or `p/q`, the form accepted by [`parse_poly`].
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
