//! `hbnorm`: norm estimates, lemma checks, region maps and operator checks
//! for the Hilbert matrix on weighted Bergman spaces.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug, Serialize)]
#[command(name = "hbnorm", version, about = "Hilbert matrix operator on weighted Bergman spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format (default: json for point reports, csv for sweeps).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads for parallel sweeps.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Target norm, test-function lower bounds over a gamma ladder, and coefficient ascent.
    Norm(NormArgs),
    /// Grid check of F <= 0, k >= 0 and g nondecreasing.
    VerifyLemma(LemmaArgs),
    /// Classification and curve data.
    #[command(subcommand)]
    Region(RegionCommand),
    /// Double-integral condition and operator identities.
    #[command(subcommand)]
    Check(CheckCommand),
}

#[derive(Args, Debug, Serialize)]
pub struct NormArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub alpha: f64,
    /// Fractions theta of (alpha+2)/p; gamma = theta (alpha+2)/p.
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.9,0.99")]
    pub gammas: Vec<f64>,
    /// Degree recorded for the test functions (used for the series residual).
    #[arg(long, default_value_t = 2048)]
    pub degree: usize,
    /// Coefficients for the ascent; 0 skips it.
    #[arg(long, default_value_t = 16)]
    pub coeffs: usize,
    #[arg(long, default_value_t = 100)]
    pub iterations: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Override the ascent's s-rule Gauss level.
    #[arg(long)]
    pub level: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct LemmaArgs {
    #[arg(long, requires = "alpha", conflicts_with = "sample")]
    pub p: Option<f64>,
    #[arg(long, requires = "p")]
    pub alpha: Option<f64>,
    /// Draw this many seeded in-region (p, alpha) instead of one point.
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub grid: usize,
    #[arg(long, default_value_t = 1.5)]
    pub p_min: f64,
    #[arg(long, default_value_t = 50.0)]
    pub p_max: f64,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionCommand {
    /// Settling results at one point.
    Classify {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// Classification over a (p, alpha) grid with all curve witnesses.
    Sweep(SweepArgs),
    /// p-curves against alpha: p1, p3, p4, 2(alpha+2), the alpha0 bracket and root.
    Curves {
        #[arg(long, default_value_t = 0.0)]
        alpha_min: f64,
        #[arg(long, default_value_t = 10.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 0.1)]
        alpha_step: f64,
    },
    /// alpha-curves against p: alpha_low, alpha_up and the rewritten curves.
    Band {
        #[arg(long, default_value_t = 1.5)]
        p_min: f64,
        #[arg(long, default_value_t = 50.0)]
        p_max: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
    },
    /// Consistency relations between alpha_up and the rewritten curves.
    Sanity {
        #[arg(long, default_value_t = 1.5)]
        p_min: f64,
        #[arg(long, default_value_t = 50.0)]
        p_max: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
}

#[derive(Args, Debug, Serialize)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 2.0)]
    pub p_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub p_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub step: f64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 0.25)]
    pub alpha_step: f64,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckCommand {
    /// Both sides of the double-integral sufficient condition.
    Dai {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// Coefficient form against integral form of H on random polynomials.
    Identity {
        #[arg(long, default_value_t = 20)]
        degree: usize,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// ||Hf|| against its Minkowski bound on sample polynomials.
    Minkowski {
        #[arg(long, default_value_t = 5.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
