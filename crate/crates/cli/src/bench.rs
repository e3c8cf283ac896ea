//! Repeated-split benchmark: for every trial, split the data, optionally fit
//! the k-NN predictor on the training part, fit each method on the
//! calibration part and score it on the test part.

use std::path::Path;
use std::thread;

use crude_core::data::rng::stream_seed;
use crude_core::data::{split_indices, KnnPredictor, SplitSpec};
use crude_core::metrics::evaluate;
use crude_core::{
    validate_predictions, EvaluationReport, FittedRecalibrator, Method, PredictionSet,
};
use log::info;
use serde::Serialize;

use crate::args::{parse_methods, parse_split, BenchArgs, PredictorArg};
use crate::commands::{check_steps, create_dir, write_text};
use crate::error::{CliError, Result};
use crate::table::{write_csv, Table};

enum Source {
    Given(PredictionSet),
    Knn {
        x: Vec<Vec<f64>>,
        y: Vec<f64>,
        k: usize,
    },
}

impl Source {
    fn len(&self) -> usize {
        match self {
            Source::Given(set) => set.len(),
            Source::Knn { y, .. } => y.len(),
        }
    }

    fn cal_and_test(
        &self,
        spec: &SplitSpec,
        trial: usize,
    ) -> Result<(PredictionSet, PredictionSet)> {
        let idx = split_indices(self.len(), spec, trial)?;
        match self {
            Source::Given(set) => Ok((set.select(&idx.cal), set.select(&idx.test))),
            Source::Knn { x, y, k } => {
                let knn = KnnPredictor::new(
                    idx.train.iter().map(|&i| x[i].clone()).collect(),
                    idx.train.iter().map(|&i| y[i]).collect(),
                    *k,
                )?;
                let predict = |rows: &[usize]| -> Result<PredictionSet> {
                    let mut out = Vec::with_capacity(rows.len());
                    for &i in rows {
                        let pred = knn.predict(&x[i])?;
                        out.push((pred.mu, pred.sigma, Some(y[i])));
                    }
                    Ok(validate_predictions(out)?)
                };
                Ok((predict(&idx.cal)?, predict(&idx.test)?))
            }
        }
    }
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalCheck {
    pub compared: usize,
    pub mismatches: usize,
}

struct TrialOutcome {
    reports: Vec<EvaluationReport>,
    intervals: Option<IntervalCheck>,
}

/// Compare crude quantile pairs against conformal intervals bit for bit.
pub fn interval_agreement(
    crude: &FittedRecalibrator,
    conformal: &FittedRecalibrator,
    test: &PredictionSet,
    p_l: f64,
    p_u: f64,
) -> Result<IntervalCheck> {
    let mut check = IntervalCheck::default();
    for record in test {
        let pred = record.prediction();
        let (a_lo, a_hi) = crude.interval(pred, p_l, p_u)?;
        let (b_lo, b_hi) = conformal.interval(pred, p_l, p_u)?;
        check.compared += 1;
        if a_lo.to_bits() != b_lo.to_bits() || a_hi.to_bits() != b_hi.to_bits() {
            check.mismatches += 1;
        }
    }
    Ok(check)
}

fn run_trial(
    source: &Source,
    spec: &SplitSpec,
    trial: usize,
    methods: &[Method],
    args: &BenchArgs,
) -> Result<TrialOutcome> {
    let (cal, test) = source.cal_and_test(spec, trial)?;
    let seed = stream_seed(spec.seed, trial as u64);
    let mut fitted = Vec::with_capacity(methods.len());
    let mut reports = Vec::with_capacity(methods.len());
    for &method in methods {
        let model = FittedRecalibrator::fit(method, &cal)?;
        reports.push(evaluate(&model, &test, args.steps, seed)?);
        fitted.push(model);
    }
    let find = |m: Method| fitted.iter().find(|f| f.method() == m);
    let intervals = match (find(Method::Crude), find(Method::Conformal)) {
        (Some(crude), Some(conformal)) => Some(interval_agreement(
            crude, conformal, &test, args.p_l, args.p_u,
        )?),
        _ => None,
    };
    Ok(TrialOutcome { reports, intervals })
}

#[derive(Debug, Serialize)]
struct Checks {
    trials: usize,
    interval_levels: [f64; 2],
    interval_compared: Option<usize>,
    interval_mismatches: Option<usize>,
    kuleshov_sharpness_ge_crude: Option<usize>,
    lowest_mean_calibration_rmse: String,
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

pub fn run(args: BenchArgs) -> Result<()> {
    let methods = parse_methods(&args.methods)?;
    check_steps(args.steps)?;
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let spec = parse_split(&args.split, args.seed, args.trials)?;
    if !(0.0..=1.0).contains(&args.p_l)
        || !(0.0..=1.0).contains(&args.p_u)
        || !(args.p_l < args.p_u)
    {
        return Err(CliError::Usage(
            "interval levels need 0 <= p-l < p-u <= 1".into(),
        ));
    }
    let table = Table::read(&args.input)?;
    let source = match args.model {
        PredictorArg::Given => Source::Given(table.predictions()?),
        PredictorArg::Knn => Source::Knn {
            x: table.features(&args.features)?,
            y: table.targets()?,
            k: args.k,
        },
    };

    // Trials own their random streams, so they run in parallel and are
    // merged in trial order.
    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(args.trials);
    let outcomes: Vec<Result<TrialOutcome>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let (source, spec, methods, args) = (&source, &spec, &methods, &args);
                scope.spawn(move || {
                    (w..args.trials)
                        .step_by(workers)
                        .map(|t| (t, run_trial(source, spec, t, methods, args)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        let mut all: Vec<_> = handles
            .into_iter()
            .flat_map(|h| h.join().expect("benchmark worker panicked"))
            .collect();
        all.sort_by_key(|(t, _)| *t);
        all.into_iter().map(|(_, r)| r).collect()
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;

    create_dir(&args.output)?;
    write_trials(&args.output, &outcomes)?;
    let means = write_summary(&args.output, &methods, &outcomes)?;

    let report_of = |o: &TrialOutcome, m: Method| o.reports.iter().find(|r| r.method == m).cloned();
    let kuleshov_ge = (methods.contains(&Method::Kuleshov) && methods.contains(&Method::Crude))
        .then(|| {
            outcomes
                .iter()
                .filter(|o| {
                    let k = report_of(o, Method::Kuleshov).expect("kuleshov scored");
                    let c = report_of(o, Method::Crude).expect("crude scored");
                    k.sharpness >= c.sharpness
                })
                .count()
        });
    let intervals = outcomes
        .iter()
        .filter_map(|o| o.intervals)
        .reduce(|a, b| IntervalCheck {
            compared: a.compared + b.compared,
            mismatches: a.mismatches + b.mismatches,
        });
    let best = means
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(m, _, _)| m.name().to_owned())
        .unwrap_or_default();
    let checks = Checks {
        trials: args.trials,
        interval_levels: [args.p_l, args.p_u],
        interval_compared: intervals.map(|c| c.compared),
        interval_mismatches: intervals.map(|c| c.mismatches),
        kuleshov_sharpness_ge_crude: kuleshov_ge,
        lowest_mean_calibration_rmse: best,
    };
    let mut text = serde_json::to_string_pretty(&checks).expect("finite values");
    text.push('\n');
    write_text(Some(&args.output.join("checks.json")), &text)?;

    for (method, rmse, sharp) in &means {
        println!(
            "{:<10} calibration_rmse {:.5}  sharpness {:.5}",
            method.name(),
            rmse,
            sharp
        );
    }
    if let Some(n) = kuleshov_ge {
        info!("kuleshov sharpness >= crude in {n}/{} trials", args.trials);
    }
    match intervals {
        Some(c) if c.mismatches > 0 => Err(CliError::Invariant(format!(
            "crude and conformal intervals differ on {} of {} test points",
            c.mismatches, c.compared
        ))),
        _ => Ok(()),
    }
}

fn write_trials(dir: &Path, outcomes: &[TrialOutcome]) -> Result<()> {
    let headers = ["trial", "seed", "method", "calibration_rmse", "sharpness"].map(str::to_owned);
    let rows: Vec<Vec<String>> = outcomes
        .iter()
        .enumerate()
        .flat_map(|(t, o)| {
            o.reports.iter().map(move |r| {
                vec![
                    t.to_string(),
                    r.trial_seed.to_string(),
                    r.method.name().to_owned(),
                    r.calibration_rmse.to_string(),
                    r.sharpness.to_string(),
                ]
            })
        })
        .collect();
    write_csv(Some(&dir.join("trials.csv")), &headers, &rows)
}

fn write_summary(
    dir: &Path,
    methods: &[Method],
    outcomes: &[TrialOutcome],
) -> Result<Vec<(Method, f64, f64)>> {
    let headers = [
        "method",
        "trials",
        "mean_calibration_rmse",
        "sd_calibration_rmse",
        "mean_sharpness",
        "sd_sharpness",
    ]
    .map(str::to_owned);
    let mut rows = Vec::new();
    let mut means = Vec::new();
    for &method in methods {
        let reports: Vec<&EvaluationReport> = outcomes
            .iter()
            .flat_map(|o| o.reports.iter().filter(move |r| r.method == method))
            .collect();
        let rmse: Vec<f64> = reports.iter().map(|r| r.calibration_rmse).collect();
        let sharp: Vec<f64> = reports.iter().map(|r| r.sharpness).collect();
        let (rmse_mean, rmse_sd) = mean_sd(&rmse);
        let (sharp_mean, sharp_sd) = mean_sd(&sharp);
        rows.push(vec![
            method.name().to_owned(),
            reports.len().to_string(),
            rmse_mean.to_string(),
            rmse_sd.to_string(),
            sharp_mean.to_string(),
            sharp_sd.to_string(),
        ]);
        means.push((method, rmse_mean, sharp_mean));
    }
    write_csv(Some(&dir.join("summary.csv")), &headers, &rows)?;
    Ok(means)
}
