use serde::Serialize;

use super::roots::{sturm_roots, IsolatingInterval};
use crate::error::PsiError;
use crate::poly::{Rational, UnivariatePoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Transition {
    MinusToPlus,
    PlusToMinus,
    NoChange,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignChangeEvent {
    pub location: IsolatingInterval,
    pub transition: Transition,
}

/// One event per distinct root of `q` in `(lo, hi)`, in increasing order.
///
/// Odd multiplicity roots are classified by the exact sign of `q` at the right
/// end of the isolating bracket, which lies strictly before the next root.
pub fn classify_sign_changes(
    q: &UnivariatePoly,
    lo: &Rational,
    hi: &Rational,
) -> Result<Vec<SignChangeEvent>, PsiError> {
    Ok(sturm_roots(q, lo, hi)?
        .into_iter()
        .map(|location| {
            let transition = if location.multiplicity % 2 == 0 {
                Transition::NoChange
            } else if q.sign_at(&location.hi) > 0 {
                Transition::MinusToPlus
            } else {
                Transition::PlusToMinus
            };
            SignChangeEvent { location, transition }
        })
        .collect())
}

/// Events of `q` that go from `-` to `+`. Empty for the zero polynomial.
pub fn minus_to_plus(
    q: &UnivariatePoly,
    lo: &Rational,
    hi: &Rational,
) -> Result<Vec<SignChangeEvent>, PsiError> {
    if q.is_zero() {
        return Ok(Vec::new());
    }
    let mut ev = classify_sign_changes(q, lo, hi)?;
    ev.retain(|e| e.transition == Transition::MinusToPlus);
    Ok(ev)
}

/// True when `q` never changes sign from `-` to `+` on `(lo, hi)`; in
/// particular when it vanishes identically.
pub fn section_psi_bar_ok(q: &UnivariatePoly, lo: &Rational, hi: &Rational) -> bool {
    minus_to_plus(q, lo, hi).map(|e| e.is_empty()).unwrap_or(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, Var};

    fn p(c: &[i64]) -> UnivariatePoly {
        UnivariatePoly::from_i64(c, Var::S)
    }

    fn kinds(q: &UnivariatePoly) -> Vec<Transition> {
        classify_sign_changes(q, &int(-1), &int(1)).unwrap().into_iter().map(|e| e.transition).collect()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(kinds(&p(&[0, 1])), vec![Transition::MinusToPlus]);
        assert_eq!(kinds(&p(&[-1, 0, 3])), vec![Transition::PlusToMinus, Transition::MinusToPlus]);
        assert_eq!(kinds(&p(&[0, 0, 1])), vec![Transition::NoChange]);
        assert_eq!(kinds(&p(&[0, 0, 0, -1])), vec![Transition::PlusToMinus]);
    }

    #[test]
    fn psi_bar_examples() {
        let (lo, hi) = (int(-1), int(1));
        assert!(section_psi_bar_ok(&p(&[0, -1]), &lo, &hi));
        assert!(!section_psi_bar_ok(&p(&[0, 1]), &lo, &hi));
        assert!(section_psi_bar_ok(&p(&[]), &lo, &hi));
        // -2 c s with c = 3/10
        let c = crate::poly::rat(3, 10);
        let q = p(&[0, -2]).scale(&c);
        assert!(section_psi_bar_ok(&q, &lo, &hi));
    }
}
