//! Example potentials with their expected behaviour.

use serde::Serialize;

use crate::poly::{parse_poly, BivariatePoly};
use crate::psi::Status;
use crate::spectral::{fit_exponent, geometric_lambdas, SweepRecord, DEFAULT_TAIL};

/// What a sweep over an entry's `λ` list must show.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepExpectation {
    /// Tail-fit slope in `[lo, hi]`.
    SlopeIn { lo: f64, hi: f64 },
    /// `μ` at the last `λ` below `μ` at the first.
    Decreasing,
    /// `μ/λ` at the last `λ` in `[lo, hi]`.
    RatioAtLast { lo: f64, hi: f64 },
    Unchecked,
}

impl SweepExpectation {
    /// `Some(ok)` when the expectation can be evaluated on the records.
    pub fn check(&self, records: &[SweepRecord]) -> Option<bool> {
        let (first, last) = (records.first()?, records.last()?);
        match *self {
            SweepExpectation::SlopeIn { lo, hi } => {
                let f = fit_exponent(records, DEFAULT_TAIL).ok()?;
                Some(lo <= f.slope && f.slope <= hi)
            }
            SweepExpectation::Decreasing => Some(last.mu_min < first.mu_min),
            SweepExpectation::RatioAtLast { lo, hi } => {
                let r = last.mu_min / last.lambda;
                Some(last.converged && lo <= r && r <= hi)
            }
            SweepExpectation::Unchecked => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub phi: &'static str,
    pub description: &'static str,
    /// Half-width of the box for the `H1` check, as a rational literal.
    pub psi_box: &'static str,
    pub alpha: f64,
    pub expect_h1: Status,
    /// Half-width of the spectral box.
    pub delta: f64,
    pub lambda_start: f64,
    pub lambda_factor: f64,
    pub lambda_count: usize,
    pub sweep: SweepExpectation,
}

impl CatalogEntry {
    pub fn potential(&self) -> BivariatePoly {
        parse_poly(self.phi).expect("catalog potentials parse")
    }

    pub fn lambdas(&self) -> Vec<f64> {
        geometric_lambdas(self.lambda_start, self.lambda_factor, self.lambda_count)
    }
}

const fn entry(name: &'static str, phi: &'static str, description: &'static str) -> CatalogEntry {
    CatalogEntry {
        name,
        phi,
        description,
        psi_box: "1",
        alpha: 0.25,
        expect_h1: Status::Holds,
        delta: 0.5,
        lambda_start: 10.0,
        lambda_factor: 2.0,
        lambda_count: 8,
        sweep: SweepExpectation::Unchecked,
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            sweep: SweepExpectation::SlopeIn { lo: 0.60, hi: 0.73 },
            ..entry("maire-l1", "x^3 - x*y^2", "Maire example, l = 1: mu ~ lambda^(2/3)")
        },
        CatalogEntry {
            delta: 0.25,
            lambda_count: 10,
            sweep: SweepExpectation::SlopeIn { lo: 0.33, hi: 0.47 },
            ..entry("maire-l2", "x^5 - x*y^2", "Maire example, l = 2: mu ~ lambda^(2/5)")
        },
        CatalogEntry {
            psi_box: "1/2",
            ..entry("maire-l3", "x^7 - x*y^2", "Maire example, l = 3")
        },
        CatalogEntry {
            expect_h1: Status::Fails,
            sweep: SweepExpectation::Decreasing,
            ..entry("well", "1/2*x^2 + 1/2*y^2", "local minimum: H1 fails, no subelliptic gain")
        },
        CatalogEntry {
            sweep: SweepExpectation::RatioAtLast { lo: 3.8, hi: 4.2 },
            ..entry("elliptic", "-1/2*x^2 - 1/2*y^2", "local maximum: harmonic oscillator, mu ~ 4 lambda")
        },
        CatalogEntry {
            sweep: SweepExpectation::SlopeIn { lo: -0.01, hi: 0.01 },
            ..entry("flat", "0", "zero potential: Dirichlet Laplacian, independent of lambda")
        },
    ]
}

pub fn find(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

/// One-dimensional sections without a `-` to `+` sign change, for the sign
/// lemma: `(name, q(s), a, b)`.
pub fn lemma_sections() -> Vec<(&'static str, &'static str, &'static str, &'static str)> {
    vec![
        ("decreasing-linear", "-x", "-1", "1"),
        ("decreasing-cubic", "-x^3", "-1", "1"),
        ("plus-to-minus", "-x + x^2", "-1/2", "1/2"),
        ("zero", "0", "-1", "1"),
        ("maire-dy-section", "-2*x", "-1/2", "1/2"),
        ("elliptic-dx-section", "-x", "-1/2", "1/2"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_parse_and_are_unique() {
        let c = catalog();
        for e in &c {
            e.potential();
            assert_eq!(c.iter().filter(|o| o.name == e.name).count(), 1);
        }
        assert_eq!(find("maire-l2").unwrap().lambdas().last().copied(), Some(5120.0));
        assert!(find("nope").is_none());
    }

    #[test]
    fn rendered_forms_are_canonical() {
        for e in catalog() {
            assert_eq!(e.potential().to_string(), e.phi);
        }
    }
}
