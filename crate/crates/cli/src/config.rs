use std::path::PathBuf;

use witten_psi::poly::{to_f64, Rational};
use witten_psi::spectral::{geometric_lambdas, GridPolicy};
use witten_psi::{parse_poly, BivariatePoly};

use crate::args::{Assumption, Format, Opts};
use crate::CliError;

/// Validated options of one run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub phi: BivariatePoly,
    pub alpha: f64,
    pub psi_box: Rational,
    pub delta: f64,
    pub samples: usize,
    pub lambdas: Vec<f64>,
    pub lambda: Option<f64>,
    pub policy: GridPolicy,
    pub seed: u64,
    pub point: (Rational, Rational),
    pub assumption: Assumption,
    pub tail: f64,
    pub pairs: usize,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("--{name} must be positive, got {v}")))
    }
}

/// A rational constant written as a decimal, an integer or p/q.
pub fn parse_constant(name: &str, text: &str) -> Result<Rational, CliError> {
    let p = parse_poly(text).map_err(|e| CliError::Config(format!("--{name}: {e}")))?;
    if p.total_degree() > 0 {
        return Err(CliError::Config(format!("--{name} must be a number, got {text:?}")));
    }
    Ok(p.coeff(0, 0))
}

impl RunConfig {
    /// `phi` overrides `--phi` (catalog entries).
    pub fn from_opts(o: &Opts, phi: Option<&str>) -> Result<Self, CliError> {
        let text = phi
            .or(o.phi.as_deref())
            .ok_or_else(|| CliError::Config("--phi is required".into()))?;
        let phi = parse_poly(text)?;
        let psi_box = parse_constant("box", &o.bx)?;
        let delta = positive("box", to_f64(&psi_box))?;
        positive("alpha", o.alpha)?;
        positive("lambda-start", o.lambda_start)?;
        positive("tol", o.tol)?;
        if !(o.lambda_factor > 1.0 && o.lambda_factor.is_finite()) {
            return Err(CliError::Config("--lambda-factor must exceed 1 so the schedule increases".into()));
        }
        if o.lambda_count == 0 || o.samples == 0 || o.pairs == 0 {
            return Err(CliError::Config("--lambda-count, --samples and --pairs must be positive".into()));
        }
        if !(o.tail > 0.0 && o.tail <= 1.0) {
            return Err(CliError::Config("--tail must lie in (0, 1]".into()));
        }
        if let Some(l) = o.lambda {
            positive("lambda", l)?;
        }
        let policy = match o.grid_n {
            Some(0) => return Err(CliError::Config("--grid-n must be positive".into())),
            Some(n) => GridPolicy { eig_tol: o.tol, ..GridPolicy::fixed(delta, n) },
            None => GridPolicy { delta, eig_tol: o.tol, ..Default::default() },
        };
        let (px, py) = o
            .point
            .split_once(',')
            .ok_or_else(|| CliError::Config(format!("--point must be X,Y, got {:?}", o.point)))?;
        let point = (parse_constant("point", px.trim())?, parse_constant("point", py.trim())?);
        Ok(RunConfig {
            phi,
            alpha: o.alpha,
            psi_box,
            delta,
            samples: o.samples,
            lambdas: geometric_lambdas(o.lambda_start, o.lambda_factor, o.lambda_count),
            lambda: o.lambda,
            policy,
            seed: o.seed,
            point,
            assumption: o.assumption,
            tail: o.tail,
            pairs: o.pairs,
            out: o.out.clone(),
            format: o.format,
        })
    }
}
