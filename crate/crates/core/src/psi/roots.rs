use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::PsiError;
use crate::poly::{sign, to_f64, Rational, UnivariatePoly};
use crate::report::{ser_rational, ser_rational_opt};

/// Refinement depth: isolating intervals are at most `(hi - lo) / 2^40` wide.
pub const REFINE_BITS: u32 = 40;

/// A rational bracket holding exactly one distinct real root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsolatingInterval {
    #[serde(serialize_with = "ser_rational")]
    pub lo: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub hi: Rational,
    pub multiplicity: u32,
    /// Set when bisection hit the root exactly.
    #[serde(serialize_with = "ser_rational_opt", skip_serializing_if = "Option::is_none")]
    pub exact: Option<Rational>,
}

impl IsolatingInterval {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// The exact root when known, the bracket midpoint otherwise.
    pub fn midpoint(&self) -> Rational {
        match &self.exact {
            Some(r) => r.clone(),
            None => (&self.lo + &self.hi) / Rational::from_integer(2.into()),
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        to_f64(&self.midpoint())
    }

    pub fn contains(&self, r: &Rational) -> bool {
        &self.lo <= r && r <= &self.hi
    }
}

/// Sturm chain `p0 = g, p1 = g', p_{k+1} = -rem(p_{k-1}, p_k)`.
struct SturmChain(Vec<UnivariatePoly>);

impl SturmChain {
    fn new(g: &UnivariatePoly) -> Self {
        let mut seq = vec![g.clone(), g.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            seq.push(-&r);
        }
        seq.pop();
        SturmChain(seq)
    }

    fn variations(&self, t: &Rational) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for p in &self.0 {
            let s = p.sign_at(t);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Distinct roots in `(a, b]`.
    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

/// Every distinct real root of `q` in the open interval `(lo, hi)`, sorted,
/// with multiplicities.
pub fn sturm_roots(
    q: &UnivariatePoly,
    lo: &Rational,
    hi: &Rational,
) -> Result<Vec<IsolatingInterval>, PsiError> {
    if q.is_zero() {
        return Err(PsiError::IdenticallyZero);
    }
    if lo >= hi {
        return Err(PsiError::EmptyInterval);
    }
    if q.is_constant() {
        return Ok(Vec::new());
    }
    let g0 = q.squarefree_part();
    let factors = q.squarefree_decomposition();
    let mut g = g0.clone();
    for e in [lo, hi] {
        if g.eval(e).is_zero() {
            g = g.exact_div(&UnivariatePoly::linear_root(e, g.var()));
        }
    }
    let ctx = Ctx {
        g0_chain: SturmChain::new(&g0),
        g0,
        target: (hi - lo) / Rational::from_integer(num_bigint::BigInt::one() << REFINE_BITS),
    };
    let mut brackets = Vec::new();
    ctx.isolate(g, lo.clone(), hi.clone(), &mut brackets);
    let mut out: Vec<IsolatingInterval> = brackets
        .into_iter()
        .map(|(lo, hi, exact)| {
            let multiplicity = multiplicity(&factors, &lo, &hi, exact.as_ref());
            IsolatingInterval { lo, hi, multiplicity, exact }
        })
        .collect();
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

/// Roots on the whole real line, searched inside the Cauchy bound.
pub fn real_roots(q: &UnivariatePoly) -> Result<Vec<IsolatingInterval>, PsiError> {
    let b = q.root_bound();
    sturm_roots(q, &-b.clone(), &b)
}

fn multiplicity(
    factors: &[UnivariatePoly],
    lo: &Rational,
    hi: &Rational,
    exact: Option<&Rational>,
) -> u32 {
    for (i, f) in factors.iter().enumerate() {
        let hit = match exact {
            Some(r) => f.eval(r).is_zero(),
            None => f.sign_at(lo) * f.sign_at(hi) < 0,
        };
        if hit {
            return i as u32 + 1;
        }
    }
    1
}

struct Ctx {
    g0: UnivariatePoly,
    g0_chain: SturmChain,
    target: Rational,
}

type Bracket = (Rational, Rational, Option<Rational>);

impl Ctx {
    /// `g` is square-free and nonzero at `a` and `b`.
    fn isolate(&self, g: UnivariatePoly, a: Rational, b: Rational, out: &mut Vec<Bracket>) {
        if g.is_constant() {
            return;
        }
        let chain = SturmChain::new(&g);
        let mut stack = vec![(a, b)];
        while let Some((a, b)) = stack.pop() {
            match chain.count(&a, &b) {
                0 => {}
                1 => out.push(self.refine(&g, a, b)),
                _ => {
                    let m = (&a + &b) * half();
                    if g.eval(&m).is_zero() {
                        out.push(self.exact_bracket(m.clone()));
                        let rest = g.exact_div(&UnivariatePoly::linear_root(&m, g.var()));
                        self.isolate(rest.clone(), a, m.clone(), out);
                        self.isolate(rest, m, b, out);
                        // Remaining stack entries still refer to `g`; finish them with it.
                    } else {
                        stack.push((m.clone(), b));
                        stack.push((a, m));
                    }
                }
            }
        }
    }

    /// Bisection on a single sign change, until narrow enough and clear of
    /// every other root of the full square-free part.
    fn refine(&self, g: &UnivariatePoly, mut a: Rational, mut b: Rational) -> Bracket {
        let sa = g.sign_at(&a);
        while &b - &a > self.target || self.g0.eval(&a).is_zero() || self.g0.eval(&b).is_zero() {
            let m = (&a + &b) * half();
            let sm = g.sign_at(&m);
            if sm == 0 {
                return self.exact_bracket(m);
            }
            if sm == sa {
                a = m;
            } else {
                b = m;
            }
        }
        (a, b, None)
    }

    fn exact_bracket(&self, r: Rational) -> Bracket {
        let mut w = self.target.clone() * half();
        loop {
            let (a, b) = (&r - &w, &r + &w);
            if sign(&self.g0.eval(&a)) != 0
                && sign(&self.g0.eval(&b)) != 0
                && self.g0_chain.count(&a, &b) == 1
            {
                return (a, b, Some(r));
            }
            w *= half();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat, Var};

    fn p(c: &[i64]) -> UnivariatePoly {
        UnivariatePoly::from_i64(c, Var::S)
    }

    #[test]
    fn unit_circle_roots() {
        let r = sturm_roots(&p(&[-1, 0, 1]), &int(-2), &int(2)).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].contains(&int(-1)) && r[1].contains(&int(1)));
        assert!(r.iter().all(|i| i.multiplicity == 1));
    }

    #[test]
    fn irrational_roots_are_narrow() {
        let r = sturm_roots(&p(&[-1, 0, 3]), &int(-1), &int(1)).unwrap();
        assert_eq!(r.len(), 2);
        let s = 1.0 / 3f64.sqrt();
        assert!((r[0].midpoint_f64() + s).abs() < 1e-11);
        assert!((r[1].midpoint_f64() - s).abs() < 1e-11);
        for i in &r {
            assert!(i.exact.is_none());
            assert!(i.width() <= rat(2, 1) / Rational::from_integer(num_bigint::BigInt::one() << 40));
        }
    }

    #[test]
    fn triple_root() {
        let r = sturm_roots(&p(&[0, 0, 0, 1]), &int(-1), &int(1)).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 3);
        assert_eq!(r[0].exact, Some(int(0)));
    }

    #[test]
    fn endpoints_are_excluded() {
        let r = sturm_roots(&p(&[-1, 0, 1]), &int(-1), &int(1)).unwrap();
        assert!(r.is_empty());
        assert_eq!(sturm_roots(&p(&[]), &int(0), &int(1)), Err(PsiError::IdenticallyZero));
    }

    #[test]
    fn clustered_exact_roots() {
        // s (s - 1/1024) (s + 3): mid-point hits at 0 with a neighbour close by
        let f = &(&p(&[0, 1]) * &UnivariatePoly::linear_root(&rat(1, 1024), Var::S)) * &p(&[3, 1]);
        let r = sturm_roots(&f, &int(-4), &int(4)).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r[0].contains(&int(-3)));
        assert!(r[1].contains(&int(0)));
        assert!(r[2].contains(&rat(1, 1024)));
        assert!(r[1].hi < r[2].lo);
    }

    #[test]
    fn whole_line() {
        let r = real_roots(&p(&[6, -5, 1])).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].contains(&int(2)) && r[1].contains(&int(3)));
    }
}
