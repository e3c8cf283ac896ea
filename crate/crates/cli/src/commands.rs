use std::fs;
use std::path::Path;

use crude_core::data::rng::stream_seed;
use crude_core::data::{split, synth_generate, ErrorFamily, SyntheticConfig};
use crude_core::metrics::{calibration_curve, evaluate};
use crude_core::{Error, FittedRecalibrator, Prediction, PredictionSet, Recalibrator};
use log::info;

use crate::args::{
    parse_methods, parse_split, Cli, Command, CurveArgs, DataArgs, EvaluateArgs, FitArgs,
    IntervalArgs, QuantileArgs, SynthArgs,
};
use crate::bench;
use crate::error::{CliError, Result};
use crate::model::{load_model, model_to_json, report_to_json};
use crate::table::{curve_rows, load_csv, synthetic_rows, write_csv, Table};

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fit(args) => fit(args),
        Command::Quantile(args) => quantile(args),
        Command::Interval(args) => interval(args),
        Command::Evaluate(args) => evaluate_cmd(args),
        Command::Curve(args) => curve(args),
        Command::Synth(args) => synth(args),
        Command::Bench(args) => bench::run(args),
    }
}

/// Errors caused by a flag value rather than by file contents.
fn usage(err: Error) -> CliError {
    CliError::Usage(err.to_string())
}

pub fn check_steps(steps: usize) -> Result<()> {
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    Ok(())
}

pub fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

fn fit(args: FitArgs) -> Result<()> {
    let cal = load_csv(&args.cal)?;
    let model = FittedRecalibrator::fit(args.method, &cal)?;
    write_text(args.output.as_deref(), &model_to_json(&model))?;
    info!(
        "fitted {} on {} calibration records",
        args.method,
        cal.len()
    );
    Ok(())
}

fn quantile(args: QuantileArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    model
        .quantile(Prediction::new(0.0, 1.0), args.p)
        .map_err(usage)?;
    let table = Table::read(&args.input)?;
    let set = table.predictions()?;
    let values = set
        .iter()
        .map(|r| model.quantile(r.prediction(), args.p).map(|q| vec![q]))
        .collect::<crude_core::Result<Vec<_>>>()?;
    let out = table.with_columns(&["quantile"], &values);
    write_csv(args.output.as_deref(), &out.headers, &out.rows)
}

fn interval(args: IntervalArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    model
        .interval(Prediction::new(0.0, 1.0), args.p_l, args.p_u)
        .map_err(usage)?;
    let table = Table::read(&args.input)?;
    let set = table.predictions()?;
    let mut values = Vec::with_capacity(set.len());
    for (i, r) in set.iter().enumerate() {
        let (lower, upper) = model.interval(r.prediction(), args.p_l, args.p_u)?;
        if !(lower <= upper) {
            return Err(CliError::Invariant(format!(
                "row {}: lower {lower} above upper {upper}",
                i + 1
            )));
        }
        values.push(vec![lower, upper]);
    }
    let out = table.with_columns(&["lower", "upper"], &values);
    write_csv(args.output.as_deref(), &out.headers, &out.rows)
}

/// Calibration and test sets plus the seed recorded in reports.
fn load_data(data: &DataArgs) -> Result<(PredictionSet, PredictionSet, u64)> {
    match (&data.cal, &data.test, &data.input) {
        (Some(cal), Some(test), None) => Ok((load_csv(cal)?, load_csv(test)?, data.seed)),
        (None, None, Some(input)) => {
            let spec = parse_split(&data.split, data.seed, data.trial + 1)?;
            let set = load_csv(input)?;
            let (_, cal, test) = split(&set, &spec, data.trial)?;
            Ok((cal, test, stream_seed(data.seed, data.trial as u64)))
        }
        _ => Err(CliError::Usage(
            "give either --cal and --test, or --input".into(),
        )),
    }
}

fn evaluate_cmd(args: EvaluateArgs) -> Result<()> {
    let methods = parse_methods(&args.method)?;
    check_steps(args.steps)?;
    let (cal, test, seed) = load_data(&args.data)?;
    create_dir(&args.output)?;
    for method in methods {
        let model = FittedRecalibrator::fit(method, &cal)?;
        let report = evaluate(&model, &test, args.steps, seed)?;
        let path = args.output.join(format!("report_{}.json", method.name()));
        write_text(Some(&path), &report_to_json(&report))?;
        info!(
            "{method}: calibration_rmse {} sharpness {}",
            report.calibration_rmse, report.sharpness
        );
    }
    Ok(())
}

fn curve(args: CurveArgs) -> Result<()> {
    check_steps(args.steps)?;
    let model = match (&args.model, args.method, &args.cal) {
        (Some(path), None, None) => load_model(path)?,
        (None, Some(method), Some(cal)) => FittedRecalibrator::fit(method, &load_csv(cal)?)?,
        _ => {
            return Err(CliError::Usage(
                "give either --model, or --method and --cal".into(),
            ))
        }
    };
    let test = load_csv(&args.test)?;
    let curve = calibration_curve(
        &test,
        |pred, p| model.extended_quantile(pred, p),
        args.steps,
    )?;
    let (headers, rows) = curve_rows(&curve);
    write_csv(args.output.as_deref(), &headers, &rows)
}

fn synth(args: SynthArgs) -> Result<()> {
    let family = ErrorFamily::from_name(args.family.name(), args.param).map_err(usage)?;
    let config = SyntheticConfig::new(args.n, family, args.seed)
        .hetero(args.hetero)
        .miscal_scale(args.miscal_scale);
    let data = synth_generate(&config).map_err(usage)?;
    let (headers, rows) = synthetic_rows(&data);
    write_csv(args.output.as_deref(), &headers, &rows)?;
    info!("generated {} {} rows", args.n, family.name());
    Ok(())
}
