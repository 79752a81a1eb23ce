use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{format_rational, to_f64, Rational, Var};

/// Dense univariate polynomial, lowest degree first.
///
/// The highest stored coefficient is nonzero; the zero polynomial has no
/// coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariatePoly {
    coeffs: Vec<Rational>,
    var: Var,
}

impl UnivariatePoly {
    pub fn new(mut coeffs: Vec<Rational>, var: Var) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs, var }
    }

    pub fn from_i64(coeffs: &[i64], var: Var) -> Self {
        Self::new(coeffs.iter().map(|&c| super::int(c)).collect(), var)
    }

    pub fn zero(var: Var) -> Self {
        UnivariatePoly { coeffs: Vec::new(), var }
    }

    pub fn constant(c: Rational, var: Var) -> Self {
        Self::new(vec![c], var)
    }

    /// `s - a`
    pub fn linear_root(a: &Rational, var: Var) -> Self {
        Self::new(vec![-a.clone(), Rational::one()], var)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, s: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }

    pub fn eval_f64(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + to_f64(c))
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    pub fn sign_at(&self, s: &Rational) -> i8 {
        super::sign(&self.eval(s))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rational::from_integer(k.into()))
            .collect();
        Self::new(coeffs, self.var)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect(), self.var)
    }

    /// Divides by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => self.clone(),
        }
    }

    /// Euclidean division. Panics when `d` is zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(self.var), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot, self.var), Self::new(rem, self.var))
    }

    /// Exact quotient; the caller guarantees `d` divides `self`.
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self / gcd(self, self')`, monic. Same distinct roots, all simple.
    pub fn squarefree_part(&self) -> Self {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).monic()
    }

    /// Yun's square-free decomposition: `factors[i]` collects the roots of
    /// multiplicity `i + 1`, each as a monic square-free polynomial.
    pub fn squarefree_decomposition(&self) -> Vec<Self> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let d = self.derivative();
        let a0 = self.gcd(&d);
        let mut b = self.exact_div(&a0);
        let mut c = d.exact_div(&a0);
        let mut dd = &c - &b.derivative();
        while !b.is_constant() {
            let a = b.gcd(&dd);
            b = b.exact_div(&a);
            c = dd.exact_div(&a);
            dd = &c - &b.derivative();
            out.push(a);
        }
        out
    }

    /// Cauchy bound: every real root lies in `(-B, B)`.
    pub fn root_bound(&self) -> Rational {
        let lc = match self.leading() {
            Some(lc) => lc.abs(),
            None => return Rational::one(),
        };
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lc)
            .fold(Rational::zero(), |m, c| if c > m { c } else { m });
        max + Rational::one()
    }
}

impl fmt::Display for UnivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let v = self.var.name();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{}", format_rational(&a))?,
                (1, true) => write!(f, "{v}")?,
                (1, false) => write!(f, "{}*{v}", format_rational(&a))?,
                (_, true) => write!(f, "{v}^{k}")?,
                (_, false) => write!(f, "{}*{v}^{k}", format_rational(&a))?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a UnivariatePoly> for &'a UnivariatePoly {
    type Output = UnivariatePoly;
    fn add(self, rhs: &UnivariatePoly) -> UnivariatePoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero);
                match rhs.coeffs.get(k) {
                    Some(b) => a + b,
                    None => a,
                }
            })
            .collect();
        UnivariatePoly::new(coeffs, self.var)
    }
}

impl<'a> Sub<&'a UnivariatePoly> for &'a UnivariatePoly {
    type Output = UnivariatePoly;
    fn sub(self, rhs: &UnivariatePoly) -> UnivariatePoly {
        self + &(-rhs)
    }
}

impl Neg for &UnivariatePoly {
    type Output = UnivariatePoly;
    fn neg(self) -> UnivariatePoly {
        UnivariatePoly::new(self.coeffs.iter().map(|c| -c).collect(), self.var)
    }
}

impl<'a> Mul<&'a UnivariatePoly> for &'a UnivariatePoly {
    type Output = UnivariatePoly;
    fn mul(self, rhs: &UnivariatePoly) -> UnivariatePoly {
        if self.is_zero() || rhs.is_zero() {
            return UnivariatePoly::zero(self.var);
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UnivariatePoly::new(out, self.var)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn p(c: &[i64]) -> UnivariatePoly {
        UnivariatePoly::from_i64(c, Var::S)
    }

    #[test]
    fn trailing_zeros_are_dropped() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[]).degree(), None);
    }

    #[test]
    fn division_identity() {
        let a = p(&[-1, 0, 0, 2, 5]);
        let d = p(&[3, 0, 1]);
        let (q, r) = a.div_rem(&d);
        assert!(r.degree().is_none_or(|k| k < 2));
        assert_eq!(&(&q * &d) + &r, a);
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (s-1)(s+2) and (s-1)(s-3)
        let a = p(&[-2, 1, 1]);
        let b = p(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
    }

    #[test]
    fn yun_splits_multiplicities() {
        // s^3 (s-1)^2 (s+1)
        let f = &(&p(&[0, 0, 0, 1]) * &p(&[1, -2, 1])) * &p(&[1, 1]);
        let dec = f.squarefree_decomposition();
        assert_eq!(dec.len(), 3);
        assert_eq!(dec[0], p(&[1, 1]));
        assert_eq!(dec[1], p(&[-1, 1]));
        assert_eq!(dec[2], p(&[0, 1]));
        assert_eq!(f.squarefree_part(), p(&[0, -1, 0, 1]));
    }

    #[test]
    fn eval_and_display() {
        let q = p(&[-1, 0, 3]);
        assert_eq!(q.eval(&rat(1, 3)), rat(-2, 3));
        assert_eq!(q.to_string(), "3*s^2 - 1");
        assert_eq!(q.derivative(), p(&[0, 6]));
        assert_eq!(q.root_bound(), rat(4, 3));
        assert_eq!(p(&[0, -1]).to_string(), "-s");
        assert_eq!(UnivariatePoly::constant(int(0), Var::S).to_string(), "0");
    }
}
