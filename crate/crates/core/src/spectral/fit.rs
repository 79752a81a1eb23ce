use serde::Serialize;

use super::sweep::SweepRecord;
use crate::error::SpectralError;
use crate::report::ser_f64;

pub const MIN_FIT_POINTS: usize = 4;
pub const DEFAULT_TAIL: f64 = 0.5;

/// Least-squares line `log μ = slope·log λ + intercept`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentFit {
    #[serde(serialize_with = "ser_f64")]
    pub slope: f64,
    #[serde(serialize_with = "ser_f64")]
    pub intercept: f64,
    #[serde(serialize_with = "ser_f64")]
    pub r_squared: f64,
    pub points_used: usize,
}

/// Fits the last `⌈tail_fraction·count⌉` converged records with `μ > 0`.
pub fn fit_exponent(records: &[SweepRecord], tail_fraction: f64) -> Result<ExponentFit, SpectralError> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(SpectralError::InvalidParameter("tail fraction must lie in (0, 1]".into()));
    }
    let usable: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.converged && r.mu_min > 0.0 && r.lambda > 0.0)
        .map(|r| (r.lambda, r.mu_min))
        .collect();
    let take = (tail_fraction * usable.len() as f64).ceil() as usize;
    fit_power_law(&usable[usable.len() - take..])
}

/// Least squares on `(log x, log y)`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<ExponentFit, SpectralError> {
    if points.len() < MIN_FIT_POINTS {
        return Err(SpectralError::InsufficientData { got: points.len(), need: MIN_FIT_POINTS });
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(SpectralError::InvalidParameter("fit needs at least two distinct lambda values".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    let ss_res: f64 = logs.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
    Ok(ExponentFit { slope, intercept, r_squared, points_used: logs.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(lambda: f64, mu: f64, converged: bool) -> SweepRecord {
        SweepRecord { lambda, mu_min: mu, n_used: 64, converged, residual: 0.0 }
    }

    #[test]
    fn exact_power_law() {
        let recs: Vec<_> = (0..8).map(|k| 10.0 * 2f64.powi(k)).map(|l| rec(l, 7.0 * l.powf(0.4), true)).collect();
        let f = fit_exponent(&recs, 0.5).unwrap();
        assert!((f.slope - 0.4).abs() < 1e-10);
        assert!((f.intercept - 7f64.ln()).abs() < 1e-10);
        assert!((f.r_squared - 1.0).abs() < 1e-10);
        assert_eq!(f.points_used, 4);
    }

    #[test]
    fn skips_unconverged_and_needs_four() {
        let mut recs: Vec<_> = (0..8).map(|k| 10.0 * 2f64.powi(k)).map(|l| rec(l, l, true)).collect();
        recs[7].converged = false;
        recs[6].mu_min = 1.0;
        recs[6].converged = false;
        assert!(matches!(
            fit_exponent(&recs, 0.5),
            Err(SpectralError::InsufficientData { got: 3, need: 4 })
        ));
        let f = fit_exponent(&recs, 1.0).unwrap();
        assert_eq!(f.points_used, 6);
        assert!((f.slope - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flat_data_has_unit_r_squared() {
        let recs: Vec<_> = (0..4).map(|k| rec(10.0 * 2f64.powi(k), 3.0, true)).collect();
        let f = fit_exponent(&recs, 1.0).unwrap();
        assert_eq!(f.slope, 0.0);
        assert_eq!(f.r_squared, 1.0);
    }
}
