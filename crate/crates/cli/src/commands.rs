use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use witten_psi::catalog::{catalog, find, CatalogEntry};
use witten_psi::poly::Rational;
use witten_psi::psi::{check_h1, check_h2, witness_rechecks, H1Verdict, PsiBox, Status};
use witten_psi::quantities::{
    eta_profile, point_quantities, scaled_profile, slow_variation_scan, PointQuantities, ProfileReport,
    QuantityContext, SlowVariationReport,
};
use witten_psi::report::{plot_data, ser_f64, ser_rational_pair, to_json, write_csv, SCHEMA};
use witten_psi::spectral::{fit_exponent, solve_lambda, sweep, ExponentFit, GridPolicy, SweepRecord};
use witten_psi::Axis;

use crate::args::{Assumption, CatalogAction, Command, Format, Opts};
use crate::config::{parse_constant, RunConfig};
use crate::{CliError, EXIT_FAILS, EXIT_MISMATCH, EXIT_NO_CONVERGENCE, EXIT_OK, EXIT_UNDECIDED};

pub fn dispatch(cmd: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::CheckPsi(o) => check_psi(&RunConfig::from_opts(o, None)?, out),
        Command::Quantities(o) => quantities(&RunConfig::from_opts(o, None)?, out),
        Command::Eig(o) => eig(&RunConfig::from_opts(o, None)?, out),
        Command::Sweep(o) => sweep_cmd(&RunConfig::from_opts(o, None)?, out),
        Command::Report(o) => report(&RunConfig::from_opts(o, None)?, out),
        Command::Catalog { action: CatalogAction::List(o) } => catalog_list(o, out),
        Command::Catalog { action: CatalogAction::Run { name, opts } } => catalog_run(name, opts, out),
    }
}

fn json_only(cfg: &RunConfig) -> Result<(), CliError> {
    match cfg.format {
        Some(Format::Csv) => Err(CliError::Config("--format csv is only available for sweep".into())),
        _ => Ok(()),
    }
}

/// Writes `text` to `--out` when given, otherwise to `out`.
fn emit(cfg: &RunConfig, out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(p) => fs::write(p, text)?,
        None => {
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Holds => EXIT_OK,
        Status::Fails => EXIT_FAILS,
        Status::Undecided => EXIT_UNDECIDED,
    }
}

fn combine(a: Status, b: Status) -> Status {
    match (a, b) {
        (Status::Fails, _) | (_, Status::Fails) => Status::Fails,
        (Status::Undecided, _) | (_, Status::Undecided) => Status::Undecided,
        _ => Status::Holds,
    }
}

#[derive(Serialize)]
struct CheckPsiReport<'a> {
    schema: u32,
    command: &'static str,
    phi: String,
    assumption: &'static str,
    status: Status,
    h1: &'a H1Verdict,
    h2: &'a H1Verdict,
}

pub fn check_psi(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    json_only(cfg)?;
    let bx = PsiBox::square(cfg.psi_box.clone());
    let h1 = check_h1(&cfg.phi, &bx, cfg.alpha, cfg.samples)?;
    let h2 = check_h2(&cfg.phi, &bx, cfg.alpha, cfg.samples)?;
    let (assumption, status) = match cfg.assumption {
        Assumption::H1 => ("h1", h1.status),
        Assumption::H2 => ("h2", h2.status),
        Assumption::Both => ("both", combine(h1.status, h2.status)),
    };
    let rep = CheckPsiReport {
        schema: SCHEMA,
        command: "check-psi",
        phi: cfg.phi.to_string(),
        assumption,
        status,
        h1: &h1,
        h2: &h2,
    };
    emit(cfg, out, &to_json(&rep))?;
    Ok(status_code(status))
}

#[derive(Serialize)]
struct QuantitiesReport {
    schema: u32,
    command: &'static str,
    phi: String,
    #[serde(serialize_with = "ser_f64")]
    lambda: f64,
    #[serde(serialize_with = "ser_rational_pair")]
    point: (Rational, Rational),
    #[serde(flatten)]
    values: PointQuantities,
}

pub fn quantities(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    json_only(cfg)?;
    let lambda = cfg.lambda.unwrap_or(1.0);
    let ctx = QuantityContext::new(cfg.phi.clone(), lambda)?;
    let (x, y) = &cfg.point;
    let rep = QuantitiesReport {
        schema: SCHEMA,
        command: "quantities",
        phi: cfg.phi.to_string(),
        lambda,
        point: cfg.point.clone(),
        values: point_quantities(&ctx, x, y),
    };
    emit(cfg, out, &to_json(&rep))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct EigReport<'a> {
    schema: u32,
    command: &'static str,
    phi: String,
    policy: &'a GridPolicy,
    #[serde(flatten)]
    record: SweepRecord,
}

pub fn eig(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    json_only(cfg)?;
    let lambda = cfg.lambda.unwrap_or(cfg.lambdas[0]);
    let record = solve_lambda(&cfg.phi, lambda, &cfg.policy)?;
    let converged = record.converged;
    let rep = EigReport { schema: SCHEMA, command: "eig", phi: cfg.phi.to_string(), policy: &cfg.policy, record };
    emit(cfg, out, &to_json(&rep))?;
    Ok(if converged { EXIT_OK } else { EXIT_NO_CONVERGENCE })
}

#[derive(Serialize)]
struct FitReport {
    schema: u32,
    command: &'static str,
    phi: String,
    #[serde(serialize_with = "ser_f64")]
    delta: f64,
    #[serde(serialize_with = "ser_f64")]
    tail: f64,
    fit: Option<ExponentFit>,
    fit_error: Option<String>,
}

#[derive(Serialize)]
struct SweepReport<'a> {
    schema: u32,
    command: &'static str,
    phi: String,
    policy: &'a GridPolicy,
    records: &'a [SweepRecord],
    fit: Option<ExponentFit>,
    fit_error: Option<String>,
}

fn with_suffix(p: &Path, suffix: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn sweep_cmd(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let records = sweep(&cfg.phi, &cfg.lambdas, &cfg.policy)?;
    let (fit, fit_error) = match fit_exponent(&records, cfg.tail) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut csv = Vec::new();
            write_csv(&mut csv, &records)?;
            let fit_json = to_json(&FitReport {
                schema: SCHEMA,
                command: "sweep",
                phi: cfg.phi.to_string(),
                delta: cfg.policy.delta,
                tail: cfg.tail,
                fit,
                fit_error,
            });
            match &cfg.out {
                Some(p) => {
                    fs::write(p, &csv)?;
                    fs::write(with_suffix(p, ".fit.json"), &fit_json)?;
                    fs::write(with_suffix(p, ".dat"), plot_data(&records))?;
                    out.write_all(fit_json.as_bytes())?;
                }
                None => {
                    out.write_all(&csv)?;
                    out.write_all(fit_json.as_bytes())?;
                }
            }
            out.flush()?;
        }
        Format::Json => {
            let rep = SweepReport {
                schema: SCHEMA,
                command: "sweep",
                phi: cfg.phi.to_string(),
                policy: &cfg.policy,
                records: &records,
                fit,
                fit_error,
            };
            emit(cfg, out, &to_json(&rep))?;
            if let Some(p) = &cfg.out {
                fs::write(with_suffix(p, ".dat"), plot_data(&records))?;
            }
        }
    }
    Ok(if records.iter().all(|r| r.converged) { EXIT_OK } else { EXIT_NO_CONVERGENCE })
}

#[derive(Serialize)]
struct Profiles {
    xi: Option<ProfileReport>,
    zeta: Option<ProfileReport>,
    eta: Option<ProfileReport>,
}

#[derive(Serialize)]
struct FullReport<'a> {
    schema: u32,
    command: &'static str,
    phi: String,
    #[serde(serialize_with = "ser_f64")]
    lambda: f64,
    #[serde(serialize_with = "ser_rational_pair")]
    point: (Rational, Rational),
    h1: &'a H1Verdict,
    h2: &'a H1Verdict,
    quantities: PointQuantities,
    profiles: Profiles,
    slow_variation: SlowVariationReport,
}

pub fn report(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    json_only(cfg)?;
    let bx = PsiBox::square(cfg.psi_box.clone());
    let h1 = check_h1(&cfg.phi, &bx, cfg.alpha, cfg.samples)?;
    let h2 = check_h2(&cfg.phi, &bx, cfg.alpha, cfg.samples)?;
    let lambda = cfg.lambda.unwrap_or(1.0);
    let ctx = QuantityContext::new(cfg.phi.clone(), lambda)?;
    let (x, y) = &cfg.point;
    let rep = FullReport {
        schema: SCHEMA,
        command: "report",
        phi: cfg.phi.to_string(),
        lambda,
        point: cfg.point.clone(),
        h1: &h1,
        h2: &h2,
        quantities: point_quantities(&ctx, x, y),
        profiles: Profiles {
            xi: scaled_profile(&ctx, Axis::X, x, y).ok(),
            zeta: scaled_profile(&ctx, Axis::Y, x, y).ok(),
            eta: eta_profile(&ctx, x, y).ok(),
        },
        slow_variation: slow_variation_scan(&ctx, cfg.delta, None, cfg.pairs, cfg.seed),
    };
    emit(cfg, out, &to_json(&rep))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CatalogListing {
    schema: u32,
    entries: Vec<CatalogEntry>,
}

fn catalog_list(o: &Opts, out: &mut dyn Write) -> Result<i32, CliError> {
    if o.format == Some(Format::Csv) {
        return Err(CliError::Config("--format csv is only available for sweep".into()));
    }
    let text = to_json(&CatalogListing { schema: SCHEMA, entries: catalog() });
    match &o.out {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CatalogRun<'a> {
    schema: u32,
    command: &'static str,
    entry: &'a CatalogEntry,
    h1: &'a H1Verdict,
    h1_ok: bool,
    witnesses_recheck: bool,
    records: &'a [SweepRecord],
    fit: Option<ExponentFit>,
    /// `null` when the entry has no sweep expectation or it cannot be evaluated.
    sweep_ok: Option<bool>,
    pass: bool,
}

/// The entry's potential, `α`, box and `λ` schedule replace the
/// corresponding flags; grid and tolerance flags still apply.
fn catalog_run(name: &str, o: &Opts, out: &mut dyn Write) -> Result<i32, CliError> {
    let entry = find(name).ok_or_else(|| CliError::UnknownEntry(name.to_string()))?;
    let mut cfg = RunConfig::from_opts(o, Some(entry.phi))?;
    json_only(&cfg)?;
    cfg.alpha = entry.alpha;
    cfg.psi_box = parse_constant("box", entry.psi_box)?;
    cfg.lambdas = entry.lambdas();
    cfg.policy.delta = entry.delta;

    let bx = PsiBox::square(cfg.psi_box.clone());
    let h1 = check_h1(&cfg.phi, &bx, cfg.alpha, cfg.samples)?;
    let witnesses_recheck = h1.witnesses.iter().all(|w| witness_rechecks(&cfg.phi, &bx, cfg.alpha, w));
    let h1_ok = h1.status == entry.expect_h1 && witnesses_recheck;

    let records = sweep(&cfg.phi, &cfg.lambdas, &cfg.policy)?;
    let sweep_ok = entry.sweep.check(&records);
    let pass = h1_ok && sweep_ok != Some(false);
    let rep = CatalogRun {
        schema: SCHEMA,
        command: "catalog-run",
        entry: &entry,
        h1: &h1,
        h1_ok,
        witnesses_recheck,
        records: &records,
        fit: fit_exponent(&records, cfg.tail).ok(),
        sweep_ok,
        pass,
    };
    emit(&cfg, out, &to_json(&rep))?;
    Ok(if pass { EXIT_OK } else { EXIT_MISMATCH })
}
