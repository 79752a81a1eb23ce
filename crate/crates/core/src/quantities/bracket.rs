use crate::error::QuantityError;
use crate::poly::{Axis, BivariatePoly, Rational};

/// `i^ipow · poly`, a polynomial with a single complex phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImagPoly {
    pub ipow: u8,
    pub poly: BivariatePoly,
}

impl ImagPoly {
    pub fn real(poly: BivariatePoly) -> Self {
        ImagPoly { ipow: 0, poly }
    }

    pub fn times_i(&self, k: u8) -> Self {
        ImagPoly { ipow: (self.ipow + k) % 4, poly: self.poly.clone() }
    }

    /// Normal form with `ipow ∈ {0, 1}`.
    fn normalized(&self) -> Self {
        if self.ipow >= 2 {
            ImagPoly { ipow: self.ipow - 2, poly: -&self.poly }
        } else {
            self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// The real polynomial `P` with `self = P`, if `self` is real.
    pub fn as_real(&self) -> Option<BivariatePoly> {
        let n = self.normalized();
        (n.ipow == 0 || n.is_zero()).then_some(n.poly)
    }
}

/// The derivation `∂_axis / i` applied to `i^k u`.
fn apply_vector_field(axis: Axis, u: &ImagPoly) -> ImagPoly {
    ImagPoly { ipow: (u.ipow + 3) % 4, poly: u.poly.partial_derivative(axis, 1) }
}

fn probes() -> [BivariatePoly; 4] {
    let (x, y) = (BivariatePoly::x(), BivariatePoly::y());
    [BivariatePoly::one(), x.clone(), y.clone(), &(&x * &y) + &x]
}

/// `[∂_axis / i, f]` as an operator: `Z u ↦ Z(f u) - f Z(u)`, evaluated on
/// probe functions and read back as a multiplication operator.
pub fn commutator(axis: Axis, f: &ImagPoly) -> ImagPoly {
    let act = |u: &BivariatePoly| -> ImagPoly {
        let fu = ImagPoly { ipow: f.ipow, poly: &f.poly * u };
        let left = apply_vector_field(axis, &fu).normalized();
        let zu = apply_vector_field(axis, &ImagPoly::real(u.clone()));
        let right = ImagPoly { ipow: (zu.ipow + f.ipow) % 4, poly: &zu.poly * &f.poly }.normalized();
        debug_assert!(left.is_zero() || right.is_zero() || left.ipow == right.ipow);
        let ipow = if left.is_zero() { right.ipow } else { left.ipow };
        ImagPoly { ipow, poly: &left.poly - &right.poly }
    };
    let [one, rest @ ..] = probes();
    let h = act(&one);
    for u in &rest {
        let got = act(u);
        let want = ImagPoly { ipow: h.ipow, poly: &h.poly * u };
        assert!(
            got.poly == want.poly && (got.is_zero() || got.ipow == want.ipow),
            "commutator is not a multiplication operator"
        );
    }
    h
}

/// `i·A_{p,q}` for `A_{0,q} = i^{q-1}[X,[X,…[X, λ∂xφ]…]]` (`q` brackets) and
/// `A_{p,q} = i[Y, A_{p-1,q}]`, with `X = ∂x/i`, `Y = ∂y/i`.
///
/// The result is real and equals `λ∂y^p∂x^{q+1}φ`; the recursion is checked
/// against that closed form.
pub fn bracket_a(
    phi: &BivariatePoly,
    lambda: &Rational,
    p: u32,
    q: u32,
) -> Result<BivariatePoly, QuantityError> {
    if q == 0 {
        return Err(QuantityError::InvalidParameter("q must be at least 1".into()));
    }
    let mut a = ImagPoly::real(phi.partial_derivative(Axis::X, 1).scale(lambda));
    for _ in 0..q {
        a = commutator(Axis::X, &a);
    }
    a = a.times_i(((q - 1) % 4) as u8);
    for _ in 0..p {
        a = commutator(Axis::Y, &a).times_i(1);
    }
    let closed = phi.mixed_derivative(q + 1, p).scale(lambda);
    match a.times_i(1).as_real() {
        Some(r) if r == closed => Ok(closed),
        _ => Err(QuantityError::ClosedFormMismatch { p, q }),
    }
}
