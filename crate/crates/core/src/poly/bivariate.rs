use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{format_rational, to_f64, Axis, Rational, UnivariatePoly, Var};

/// Sparse polynomial in `x` and `y` with exact rational coefficients.
///
/// Stored as a map from exponent pair `(i, j)` (meaning `x^i y^j`) to a
/// nonzero coefficient, so map equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn monomial(c: Rational, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        BivariatePoly { terms }
    }

    /// Sums repeated exponents and drops zero coefficients.
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Rational)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree `max(i + j)`; `0` for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    /// Degree in one variable; `None` for the zero polynomial.
    pub fn degree_in(&self, axis: Axis) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| match axis {
                Axis::X => i,
                Axis::Y => j,
            })
            .max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(&e, a)| (e, a * c)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `∂^order p` along `axis`; order 0 is the identity.
    pub fn partial_derivative(&self, axis: Axis, order: u32) -> Self {
        if order == 0 {
            return self.clone();
        }
        Self::from_terms(self.terms.iter().filter_map(|(&(i, j), c)| {
            let e = match axis {
                Axis::X => i,
                Axis::Y => j,
            };
            if e < order {
                return None;
            }
            let falling: u64 = (e - order + 1..=e).map(u64::from).product();
            let c = c * Rational::from_integer(falling.into());
            Some(match axis {
                Axis::X => ((i - order, j), c),
                Axis::Y => ((i, j - order), c),
            })
        }))
    }

    /// `∂x^i ∂y^j p`.
    pub fn mixed_derivative(&self, i: u32, j: u32) -> Self {
        self.partial_derivative(Axis::X, i).partial_derivative(Axis::Y, j)
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())))
    }

    /// Nested Horner evaluation at a rational point: outer in `x`, inner in `y`.
    pub fn evaluate(&self, x0: &Rational, y0: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut last_i = None;
        // Descending x-powers; each x-slice is a y-polynomial.
        for (i, slice) in self.x_slices().into_iter().rev() {
            if let Some(prev) = last_i {
                for _ in i..prev {
                    acc *= x0;
                }
            }
            acc += horner(&slice, y0);
            last_i = Some(i);
        }
        if let Some(lowest) = last_i {
            for _ in 0..lowest {
                acc *= x0;
            }
        }
        acc
    }

    pub fn evaluate_f64(&self, x0: f64, y0: f64) -> f64 {
        self.to_float().eval(x0, y0)
    }

    /// Coefficient slices: `p = Σ_i x^i · slice_i(y)`, ascending in `i`.
    fn x_slices(&self) -> Vec<(u32, Vec<Rational>)> {
        let mut out: Vec<(u32, Vec<Rational>)> = Vec::new();
        for (&(i, j), c) in &self.terms {
            if out.last().map(|s| s.0) != Some(i) {
                out.push((i, Vec::new()));
            }
            let slice = &mut out.last_mut().unwrap().1;
            if slice.len() <= j as usize {
                slice.resize(j as usize + 1, Rational::zero());
            }
            slice[j as usize] = c.clone();
        }
        out
    }

    /// Fixes one variable at `value`; the result is a polynomial in the other
    /// variable, tagged `s`.
    pub fn restrict(&self, fixed_axis: Axis, value: &Rational) -> UnivariatePoly {
        let mut coeffs: Vec<Rational> = Vec::new();
        for (&(i, j), c) in &self.terms {
            let (free, fixed) = match fixed_axis {
                Axis::X => (j, i),
                Axis::Y => (i, j),
            };
            if coeffs.len() <= free as usize {
                coeffs.resize(free as usize + 1, Rational::zero());
            }
            coeffs[free as usize] += c * pow_rat(value, fixed);
        }
        UnivariatePoly::new(coeffs, Var::S)
    }

    /// Coefficient polynomials along `axis`: `p = Σ_k c_k(other) · axis^k`.
    /// For `∂xφ` and `Axis::X` these are the `a_k(y)`.
    pub fn coefficients_in(&self, axis: Axis) -> Vec<UnivariatePoly> {
        let deg = match self.degree_in(axis) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut slices = vec![Vec::<Rational>::new(); deg + 1];
        for (&(i, j), c) in &self.terms {
            let (k, o) = match axis {
                Axis::X => (i, j),
                Axis::Y => (j, i),
            };
            let s = &mut slices[k as usize];
            if s.len() <= o as usize {
                s.resize(o as usize + 1, Rational::zero());
            }
            s[o as usize] = c.clone();
        }
        let var = axis.other().as_var();
        slices.into_iter().map(|c| UnivariatePoly::new(c, var)).collect()
    }

    /// Raw mixed partials `∂x^i ∂y^j p(x0, y0)` for `i + j ≤ max_order`
    /// (no factorial normalization).
    pub fn taylor_table(
        &self,
        x0: &Rational,
        y0: &Rational,
        max_order: u32,
    ) -> BTreeMap<(u32, u32), Rational> {
        let mut table = BTreeMap::new();
        for i in 0..=max_order {
            let dx = self.partial_derivative(Axis::X, i);
            for j in 0..=(max_order - i) {
                let v = dx.partial_derivative(Axis::Y, j).evaluate(x0, y0);
                table.insert((i, j), v);
            }
        }
        table
    }

    /// Float copy of the coefficients for fast repeated evaluation.
    pub fn to_float(&self) -> FloatPoly2 {
        let slices = self
            .x_slices()
            .into_iter()
            .map(|(i, s)| (i, s.iter().map(to_f64).collect()))
            .collect();
        FloatPoly2 { slices }
    }

    /// Canonical rendering, graded lexicographic (highest total degree first,
    /// then highest power of `x`). Accepted verbatim by [`super::parse_poly`].
    pub fn render(&self) -> String {
        self.to_string()
    }

    fn graded_terms(&self) -> Vec<(&(u32, u32), &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            let (ai, aj) = *a.0;
            let (bi, bj) = *b.0;
            (bi + bj).cmp(&(ai + aj)).then(bi.cmp(&ai))
        });
        v
    }
}

fn horner(coeffs: &[Rational], t: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

fn pow_rat(v: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..k {
        acc *= v;
    }
    acc
}

fn monomial_text(i: u32, j: u32) -> String {
    let part = |v: &str, e: u32| match e {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{v}^{e}")),
    };
    [part("x", i), part("y", j)].into_iter().flatten().collect::<Vec<_>>().join("*")
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (&(i, j), c)) in self.graded_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mono = monomial_text(i, j);
            if mono.is_empty() {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl Add<&BivariatePoly> for &BivariatePoly {
    type Output = BivariatePoly;
    fn add(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub<&BivariatePoly> for &BivariatePoly {
    type Output = BivariatePoly;
    fn sub(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        BivariatePoly { terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect() }
    }
}

impl Mul<&BivariatePoly> for &BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = BivariatePoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term((i + k, j + l), a * b);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<BivariatePoly> for BivariatePoly {
            type Output = BivariatePoly;
            fn $m(self, rhs: BivariatePoly) -> BivariatePoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        -&self
    }
}

/// Float coefficients grouped by power of `x`, evaluated with nested Horner.
#[derive(Clone, Debug)]
pub struct FloatPoly2 {
    slices: Vec<(u32, Vec<f64>)>,
}

impl FloatPoly2 {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        let mut prev: Option<u32> = None;
        for (i, s) in self.slices.iter().rev() {
            if let Some(p) = prev {
                acc *= x.powi((p - i) as i32);
            }
            acc += s.iter().rev().fold(0.0, |a, c| a * y + c);
            prev = Some(*i);
        }
        if let Some(p) = prev {
            acc *= x.powi(p as i32);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, parse_poly, rat};

    fn maire() -> BivariatePoly {
        parse_poly("x^3 - x*y^2").unwrap()
    }

    #[test]
    fn maire_derivatives() {
        let phi = maire();
        assert_eq!(phi.partial_derivative(Axis::X, 1), parse_poly("3*x^2 - y^2").unwrap());
        assert_eq!(phi.partial_derivative(Axis::Y, 1), parse_poly("-2*x*y").unwrap());
        assert_eq!(phi.partial_derivative(Axis::X, 0), phi);
        assert!(BivariatePoly::constant(rat(7, 3)).partial_derivative(Axis::X, 1).is_zero());
    }

    #[test]
    fn evaluation_examples() {
        let phi = maire();
        assert_eq!(phi.evaluate(&int(1), &int(1)), int(0));
        assert_eq!(phi.evaluate(&int(0), &rat(-5, 7)), int(0));
        let dx = phi.partial_derivative(Axis::X, 1);
        assert_eq!(dx.evaluate(&int(0), &int(2)), int(-4));
        assert_eq!(dx.evaluate_f64(0.0, 2.0), -4.0);
    }

    #[test]
    fn restriction_examples() {
        let dx = parse_poly("3*x^2 - y^2").unwrap();
        assert_eq!(dx.restrict(Axis::Y, &int(1)), UnivariatePoly::from_i64(&[-1, 0, 3], Var::S));
        let dy = parse_poly("-2*x*y").unwrap();
        assert!(dy.restrict(Axis::X, &int(0)).is_zero());
        assert_eq!(maire().restrict(Axis::Y, &int(0)), UnivariatePoly::from_i64(&[0, 0, 0, 1], Var::S));
    }

    #[test]
    fn taylor_tables() {
        let t = maire().taylor_table(&int(0), &int(0), 3);
        for (&(i, j), v) in &t {
            let expected = match (i, j) {
                (3, 0) => int(6),
                (1, 2) => int(-2),
                _ => int(0),
            };
            assert_eq!(v, &expected, "entry ({i},{j})");
        }
        assert!(BivariatePoly::zero().taylor_table(&int(1), &int(2), 2).values().all(Zero::is_zero));
        let t = parse_poly("x^2").unwrap().taylor_table(&int(1), &int(0), 2);
        assert_eq!(t[&(1, 0)], int(2));
        assert_eq!(t[&(2, 0)], int(2));
        assert_eq!(t[&(0, 0)], int(1));
        assert_eq!(t[&(0, 1)], int(0));
    }

    #[test]
    fn coefficient_polys_of_dx() {
        // ∂xφ = 3x² − y²: a0(y) = −y², a1 = 0, a2 = 3
        let a = maire().partial_derivative(Axis::X, 1).coefficients_in(Axis::X);
        assert_eq!(a.len(), 3);
        assert_eq!(a[0], UnivariatePoly::from_i64(&[0, 0, -1], Var::Y));
        assert!(a[1].is_zero());
        assert_eq!(a[2], UnivariatePoly::from_i64(&[3], Var::Y));
    }

    #[test]
    fn rendering_is_graded_lex() {
        assert_eq!(maire().render(), "x^3 - x*y^2");
        assert_eq!(parse_poly("0.5*y^2 + 0.5*x^2").unwrap().render(), "1/2*x^2 + 1/2*y^2");
        assert_eq!(parse_poly("-1/2*x^2 - 1/2*y^2").unwrap().render(), "-1/2*x^2 - 1/2*y^2");
        assert_eq!(parse_poly("3 + x - 7*y").unwrap().render(), "x - 7*y + 3");
        assert_eq!(BivariatePoly::zero().render(), "0");
    }

    #[test]
    fn float_copy_agrees() {
        let p = parse_poly("x^3*y - 2*x*y^4 + 1/3*y + 5").unwrap();
        let f = p.to_float();
        for &(x, y) in &[(0.3, -1.2), (2.0, 0.5), (0.0, 0.0), (-1.5, 0.0)] {
            let exact = to_f64(&p.evaluate(&crate::poly::from_f64(x), &crate::poly::from_f64(y)));
            assert!((f.eval(x, y) - exact).abs() <= 1e-12 * (1.0 + exact.abs()));
        }
    }

    #[test]
    fn swap_exchanges_variables() {
        assert_eq!(maire().swap(), parse_poly("y^3 - x^2*y").unwrap());
    }
}
