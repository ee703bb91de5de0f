//! `gramcert` command-line tool.
//!
//! Exit codes: 0 success, 1 input error, 2 radius beyond the validity radius,
//! 3 solver diagnostic.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "gramcert", version, about = "Hellinger-ball risk certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Value recorded in the report's `timestamp` field (null when absent).
    #[arg(long, global = true)]
    timestamp: Option<String>,

    /// Run data-parallel loops on a single thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DirectionArg {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BudgetArg {
    /// Transport budget |delta|^2.
    Squared,
    /// Transport budget |delta|.
    Linear,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// Loss file (`loss` CSV or JSONL).
    pub file: PathBuf,
    #[arg(long)]
    pub rho: f64,
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    #[arg(long = "max-loss", default_value_t = 1.0)]
    pub max_loss: f64,
    #[arg(long, value_enum, default_value_t = DirectionArg::Upper)]
    pub direction: DirectionArg,
}

#[derive(Args, Debug)]
pub struct AccuracyArgs {
    /// Prediction file (`pred,label` CSV or JSONL).
    pub file: PathBuf,
    #[arg(long)]
    pub rho: f64,
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = DirectionArg::Upper)]
    pub direction: DirectionArg,
}

#[derive(Args, Debug)]
pub struct AucArgs {
    /// Score file (`score,label` CSV or JSONL, labels -1/+1).
    pub file: PathBuf,
    /// Radius on each class-conditional covariate distribution.
    #[arg(long = "rho-conditional")]
    pub rho_conditional: f64,
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    /// Seed of the random positive/negative pairing.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// Instance JSON `{"p": [...], "losses": [...], "M": .., "rho": ..}`.
    pub file: PathBuf,
    /// Seed of the projected-gradient restarts.
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct LabelShiftArgs {
    /// Prediction file with true classes; a synthetic 10-class set is
    /// generated when absent.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "unseen-classes", default_value_t = 2)]
    pub unseen_classes: usize,
    /// Scatter CSV (trial, mechanism, hellinger, loss, lower, upper).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Certificate curve CSV sampled at 200 radii.
    #[arg(long = "curve-csv")]
    pub curve_csv: Option<PathBuf>,
    /// Records in the generated synthetic dataset.
    #[arg(long = "synthetic-records", default_value_t = 10_000)]
    pub synthetic_records: usize,
}

#[derive(Args, Debug)]
pub struct MixtureArgs {
    /// Mixture weights of the reference distribution.
    #[arg(long = "gamma-grid", value_delimiter = ',')]
    pub gamma_grid: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    #[arg(long = "label-noise", default_value_t = 0.05)]
    pub label_noise: f64,
    /// Records in the reference sample and in every mixture.
    #[arg(long = "n-reference", default_value_t = 20_000)]
    pub n_reference: usize,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long, value_delimiter = ',', default_value = "16")]
    pub widths: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub depths: Vec<usize>,
    /// Dislocation norms |delta|.
    #[arg(long = "delta-grid", value_delimiter = ',')]
    pub delta_grid: Option<Vec<f64>>,
    /// Dislocation direction as `x,y`.
    #[arg(long, value_delimiter = ',', num_args = 2, default_value = "1,0", allow_negative_numbers = true)]
    pub direction: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "budget-convention", value_enum, default_value_t = BudgetArg::Squared)]
    pub budget_convention: BudgetArg,
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    #[arg(long, default_value_t = 2000)]
    pub steps: usize,
    #[arg(long = "n-train", default_value_t = 2000)]
    pub n_train: usize,
    #[arg(long = "n-eval", default_value_t = 2000)]
    pub n_eval: usize,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify the worst-case mean of a loss file.
    Certify(CertifyArgs),
    /// Certify classification error from predictions.
    CertifyAccuracy(AccuracyArgs),
    /// Lower-certify AUC from scores.
    CertifyAuc(AucArgs),
    /// Exact worst case of a discrete instance next to the certificates.
    Oracle(OracleArgs),
    /// Label-shift Monte Carlo with certificate containment.
    LabelShift(LabelShiftArgs),
    /// Covariate shift by mixing with a disjoint distribution.
    Mixture(MixtureArgs),
    /// Hellinger versus Wasserstein certificates on the Gaussian task.
    SyntheticCompare(CompareArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = commands::Context {
        timestamp: cli.timestamp.clone(),
        execution: if cli.sequential {
            gramcert::Execution::Sequential
        } else {
            gramcert::Execution::Parallel
        },
    };
    let outcome = match &cli.command {
        Command::Certify(a) => commands::certify(&ctx, a),
        Command::CertifyAccuracy(a) => commands::certify_accuracy(&ctx, a),
        Command::CertifyAuc(a) => commands::certify_auc(&ctx, a),
        Command::Oracle(a) => commands::oracle(&ctx, a),
        Command::LabelShift(a) => commands::label_shift(&ctx, a),
        Command::Mixture(a) => commands::mixture(&ctx, a),
        Command::SyntheticCompare(a) => commands::synthetic_compare(&ctx, a),
    };
    match outcome {
        Ok(out) => {
            let code = out.code;
            if let Err(e) = commands::emit(&out, cli.output.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
