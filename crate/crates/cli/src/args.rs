use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use crude_core::data::SplitSpec;
use crude_core::Method;

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "crude",
    version,
    about = "Recalibrate regression uncertainty from (mu, sigma, y) files"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a recalibrator on a labeled calibration CSV and write it as JSON.
    Fit(FitArgs),
    /// Append a `quantile` column at level --p to a prediction CSV.
    Quantile(QuantileArgs),
    /// Append `lower,upper` interval columns to a prediction CSV.
    Interval(IntervalArgs),
    /// Score methods on a test set and write report_<method>.json files.
    Evaluate(EvaluateArgs),
    /// Write the calibration curve `p,p_hat` of a model on a test set.
    Curve(CurveArgs),
    /// Generate a synthetic dataset with a known error family.
    Synth(SynthArgs),
    /// Run the repeated-split benchmark over several methods.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub method: Method,
    /// Labeled calibration CSV (`mu,sigma,y`).
    #[arg(long)]
    pub cal: PathBuf,
    /// Model JSON path; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuantileArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Prediction CSV (`mu,sigma[,y]`).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IntervalArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long = "p-l", default_value_t = 0.05)]
    pub p_l: f64,
    #[arg(long = "p-u", default_value_t = 0.95)]
    pub p_u: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Where calibration and test data come from.
#[derive(Debug, Args)]
pub struct DataArgs {
    /// Calibration CSV; use with --test.
    #[arg(long, requires = "test", conflicts_with = "input")]
    pub cal: Option<PathBuf>,
    /// Test CSV; use with --cal.
    #[arg(long, requires = "cal", conflicts_with = "input")]
    pub test: Option<PathBuf>,
    /// One labeled CSV to split into train/calibration/test.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Train,calibration,test fractions.
    #[arg(long, default_value = "0.5,0.4,0.1")]
    pub split: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Which split of the sequence to use with --input.
    #[arg(long, default_value_t = 0)]
    pub trial: usize,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// A method, a comma-separated list, or `all`.
    #[arg(long, alias = "methods")]
    pub method: String,
    #[command(flatten)]
    pub data: DataArgs,
    /// Curve steps S.
    #[arg(long, default_value_t = crude_core::metrics::DEFAULT_STEPS)]
    pub steps: usize,
    /// Output directory.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Fitted model JSON; alternatively fit --method on --cal.
    #[arg(long, conflicts_with_all = ["method", "cal"])]
    pub model: Option<PathBuf>,
    #[arg(long, requires = "cal")]
    pub method: Option<Method>,
    #[arg(long, requires = "method")]
    pub cal: Option<PathBuf>,
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long, default_value_t = crude_core::metrics::DEFAULT_STEPS)]
    pub steps: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum FamilyArg {
    Gaussian,
    LognormalShifted,
    StudentT,
}

impl FamilyArg {
    pub fn name(self) -> &'static str {
        match self {
            FamilyArg::Gaussian => "gaussian",
            FamilyArg::LognormalShifted => "lognormal_shifted",
            FamilyArg::StudentT => "student_t",
        }
    }
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Log-scale s for lognormal_shifted (default 0.8) or degrees of freedom
    /// for student_t (default 5).
    #[arg(long)]
    pub param: Option<f64>,
    /// Let the true scale grow with x.
    #[arg(long)]
    pub hetero: bool,
    /// Factor applied to the true scale before it is reported.
    #[arg(long = "miscal-scale", default_value_t = 1.0)]
    pub miscal_scale: f64,
    /// CSV path; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PredictorArg {
    /// Use the `mu` and `sigma` (or `sigma_reported`) columns as given.
    Given,
    /// Fit k-nearest neighbours on each trial's training part.
    Knn,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "all")]
    pub methods: String,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "0.5,0.4,0.1")]
    pub split: String,
    #[arg(long, default_value_t = crude_core::metrics::DEFAULT_STEPS)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = PredictorArg::Given)]
    pub model: PredictorArg,
    /// Neighbours for --model knn.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// Feature columns for --model knn.
    #[arg(long, default_value = "x", value_delimiter = ',')]
    pub features: Vec<String>,
    /// Interval levels used for the crude/conformal agreement check.
    #[arg(long = "p-l", default_value_t = 0.05)]
    pub p_l: f64,
    #[arg(long = "p-u", default_value_t = 0.95)]
    pub p_u: f64,
    /// Output directory.
    #[arg(long)]
    pub output: PathBuf,
}

pub fn parse_methods(text: &str) -> Result<Vec<Method>> {
    if text == "all" {
        return Ok(Method::ALL.to_vec());
    }
    let mut methods = Vec::new();
    for part in text.split(',') {
        let method: Method = part
            .trim()
            .parse()
            .map_err(|e| CliError::Usage(format!("invalid method {part:?}: {e}")))?;
        if !methods.contains(&method) {
            methods.push(method);
        }
    }
    Ok(methods)
}

pub fn parse_split(text: &str, seed: u64, trials: usize) -> Result<SplitSpec> {
    let parts = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| CliError::Usage(format!("invalid --split {text:?}")))?;
    let [train, cal, test] = parts[..] else {
        return Err(CliError::Usage(format!(
            "--split needs three fractions, got {text:?}"
        )));
    };
    SplitSpec::new(train, cal, test, seed, trials).map_err(|e| CliError::Usage(e.to_string()))
}
