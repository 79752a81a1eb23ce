use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "witten-psi",
    version,
    about = "Sign-change assumptions, proof quantities and Witten-Laplacian spectra for polynomial potentials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide H1(α) and H2(α) on a box and print both verdicts.
    CheckPsi(Opts),
    /// M1, M2, G, the finite-type order and N1/N2 membership at a point.
    Quantities(Opts),
    /// Smallest eigenvalue of the discrete Witten Laplacian at one λ.
    Eig(Opts),
    /// Smallest eigenvalues over a geometric λ schedule and a log-log fit.
    Sweep(Opts),
    /// Built-in example potentials.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Verdicts, quantities, profiles and a slow-variation scan in one JSON report.
    Report(Opts),
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    /// Print the entries.
    List(Opts),
    /// Check one entry against its expected verdict and sweep behaviour.
    Run {
        name: String,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Assumption {
    H1,
    H2,
    Both,
}

#[derive(Clone, Debug, Args)]
pub struct Opts {
    /// Potential, e.g. "x^3 - x*y^2".
    #[arg(long)]
    pub phi: Option<String>,
    #[arg(long, default_value_t = 0.25)]
    pub alpha: f64,
    /// Half-width δ of the box (-δ, δ)²; a decimal or p/q.
    #[arg(long = "box", default_value = "0.5")]
    pub bx: String,
    /// y-samples for the H1 check.
    #[arg(long, default_value_t = 129)]
    pub samples: usize,
    #[arg(long, default_value_t = 10.0)]
    pub lambda_start: f64,
    #[arg(long, default_value_t = 2.0)]
    pub lambda_factor: f64,
    #[arg(long, default_value_t = 8)]
    pub lambda_count: usize,
    /// Single λ for `quantities` (default 1) and `eig` (default --lambda-start).
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Fixed grid size; without it the grid is refined from 64 up to 1024.
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Eigensolver tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Base point "X,Y" for `quantities` and `report`.
    #[arg(long, default_value = "0,0")]
    pub point: String,
    /// Verdict that sets the exit code of `check-psi`.
    #[arg(long, value_enum, default_value_t = Assumption::H1)]
    pub assumption: Assumption,
    /// Fraction of the converged sweep used by the fit.
    #[arg(long, default_value_t = 0.5)]
    pub tail: f64,
    /// Slow-variation pairs per weight in `report`.
    #[arg(long, default_value_t = 10_000)]
    pub pairs: usize,
    /// Write the report here; `sweep` also writes PATH.dat and PATH.fit.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Defaults to csv for `sweep`, json otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}
