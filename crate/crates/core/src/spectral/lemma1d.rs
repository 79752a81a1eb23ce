use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::SpectralError;
use crate::poly::{to_f64, Rational, UnivariatePoly};
use crate::psi::section_psi_bar_ok;

/// Sine modes in each random test function.
const MODES: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub trials: usize,
    pub violations: usize,
    pub seed: u64,
    /// Largest `(lhs - rhs) / allowance` seen; negative when every trial holds
    /// without using the allowance.
    #[serde(serialize_with = "crate::report::ser_f64")]
    pub worst_ratio: f64,
}

/// Checks `max|v|² + 2∫|λq||v|² ≤ 2∫|(d/ds + λq)v||v|` on `trials` random
/// grid functions vanishing at the ends of `[a, b]`.
///
/// Each `v` is a sine series with `N(0,1)/k²` coefficients sampled at `n`
/// interior nodes. Integrals are grid sums, `d/ds` the forward difference.
/// A trial counts as a violation when the left side exceeds the right by
/// more than `5h·(max|v|² + ‖Dv‖² + λ‖q‖∞ max|v|²)`.
pub fn oned_sign_lemma_check(
    q: &UnivariatePoly,
    lambda: f64,
    interval: (&Rational, &Rational),
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<LemmaReport, SpectralError> {
    oned_sign_lemma_check_with(q, lambda, interval, n, trials, seed, 1.0)
}

/// As [`oned_sign_lemma_check`] with the right side multiplied by `factor`.
pub fn oned_sign_lemma_check_with(
    q: &UnivariatePoly,
    lambda: f64,
    interval: (&Rational, &Rational),
    n: usize,
    trials: usize,
    seed: u64,
    factor: f64,
) -> Result<LemmaReport, SpectralError> {
    let (lo, hi) = interval;
    if lo >= hi {
        return Err(SpectralError::InvalidParameter("interval must satisfy a < b".into()));
    }
    if n < 2 || !(lambda >= 0.0) {
        return Err(SpectralError::InvalidParameter("need n ≥ 2 and λ ≥ 0".into()));
    }
    if !section_psi_bar_ok(q, lo, hi) {
        return Err(SpectralError::PreconditionViolated);
    }
    let (a, b) = (to_f64(lo), to_f64(hi));
    let h = (b - a) / (n as f64 + 1.0);
    let s: Vec<f64> = (0..n + 2).map(|i| a + i as f64 * h).collect();
    let lq: Vec<f64> = s.iter().map(|&x| lambda * q.eval_f64(x)).collect();
    let lq_max = lq.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    let mut v = vec![0.0; n + 2];
    for _ in 0..trials {
        let c: Vec<f64> = (1..=MODES)
            .map(|k| {
                let z: f64 = StandardNormal.sample(&mut rng);
                z / (k * k) as f64
            })
            .collect();
        for (i, vi) in v.iter_mut().enumerate().take(n + 1).skip(1) {
            let t = std::f64::consts::PI * i as f64 / (n as f64 + 1.0);
            *vi = c.iter().enumerate().map(|(k, ck)| ck * ((k + 1) as f64 * t).sin()).sum();
        }
        let max_sq = v.iter().fold(0.0f64, |m, x| m.max(x * x));
        let mut weighted = 0.0;
        let mut rhs = 0.0;
        let mut grad = 0.0;
        for i in 0..=n {
            let dv = (v[i + 1] - v[i]) / h;
            weighted += h * lq[i].abs() * v[i] * v[i];
            rhs += h * (dv + lq[i] * v[i]).abs() * v[i].abs();
            grad += h * dv * dv;
        }
        let lhs = max_sq + 2.0 * weighted;
        let rhs = 2.0 * factor * rhs;
        let allowance = 5.0 * h * (max_sq + grad + lq_max * max_sq);
        let ratio = (lhs - rhs) / allowance;
        worst = worst.max(ratio);
        if lhs > rhs + allowance {
            violations += 1;
        }
    }
    Ok(LemmaReport { trials, violations, seed, worst_ratio: worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, Var};

    fn q(c: &[i64]) -> UnivariatePoly {
        UnivariatePoly::from_i64(c, Var::S)
    }

    #[test]
    fn decreasing_section_holds() {
        let r = oned_sign_lemma_check(&q(&[0, -1]), 50.0, (&int(-1), &int(1)), 400, 1000, 3).unwrap();
        assert_eq!(r.violations, 0);
        assert_eq!(r.trials, 1000);
    }

    #[test]
    fn zero_section_holds() {
        let r = oned_sign_lemma_check(&q(&[0]), 50.0, (&int(-1), &int(1)), 400, 500, 3).unwrap();
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn increasing_section_rejected() {
        let r = oned_sign_lemma_check(&q(&[0, 1]), 50.0, (&int(-1), &int(1)), 400, 10, 3);
        assert_eq!(r.unwrap_err(), SpectralError::PreconditionViolated);
    }
}
