//! Calibration curves, calibration RMSE, sharpness and PIT values.
//!
//! Every metric takes the predictor as a per-example oracle closure, so any
//! recalibrator (or a hand-written distribution in a test) can be scored.
//! Reductions run in record order, so repeated evaluations are bit-identical.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::recalibrator::{FittedRecalibrator, Method, Recalibrator};
use crate::record::{Prediction, PredictionSet};

/// Number of curve steps used when none is given.
pub const DEFAULT_STEPS: usize = 100;

/// Expected levels `p_j = j / S` for `j = 0..=S` and the observed fraction of
/// targets strictly below each level's predicted quantile.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationCurve {
    expected: Vec<f64>,
    observed: Vec<f64>,
    steps: usize,
}

impl CalibrationCurve {
    /// A curve from observed frequencies at the `S + 1` knots `0, 1/S, .., 1`.
    pub fn from_observed(observed: Vec<f64>) -> Result<Self> {
        if observed.len() < 2 {
            return Err(Error::InvalidSteps);
        }
        if observed.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::ProbabilityOutOfRange(
                observed
                    .iter()
                    .copied()
                    .find(|v| !(0.0..=1.0).contains(v))
                    .unwrap_or(f64::NAN),
            ));
        }
        let steps = observed.len() - 1;
        Ok(CalibrationCurve {
            expected: levels(steps),
            observed,
            steps,
        })
    }

    pub fn expected(&self) -> &[f64] {
        &self.expected
    }

    pub fn observed(&self) -> &[f64] {
        &self.observed
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// `(p_j, p_hat_j)` pairs.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.expected
            .iter()
            .copied()
            .zip(self.observed.iter().copied())
    }
}

fn levels(steps: usize) -> Vec<f64> {
    (0..=steps).map(|j| j as f64 / steps as f64).collect()
}

/// For each `p_j = j / S`, the fraction of test targets with
/// `y < quantile_fn(pred, p_j)`.
pub fn calibration_curve<F>(
    test: &PredictionSet,
    quantile_fn: F,
    steps: usize,
) -> Result<CalibrationCurve>
where
    F: Fn(Prediction, f64) -> f64,
{
    if steps == 0 {
        return Err(Error::InvalidSteps);
    }
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    if !test.is_labeled() {
        return Err(Error::UnlabeledTestSet);
    }
    let expected = levels(steps);
    let mut below = alloc::vec![0usize; steps + 1];
    for record in test {
        let pred = record.prediction();
        let y = record.y().expect("labeled set");
        for (count, &p) in below.iter_mut().zip(&expected) {
            if y < quantile_fn(pred, p) {
                *count += 1;
            }
        }
    }
    let n = test.len() as f64;
    Ok(CalibrationCurve {
        expected,
        observed: below.into_iter().map(|c| c as f64 / n).collect(),
        steps,
    })
}

/// `sqrt((1/S) sum_{j=0}^{S} (p_hat_j - p_j)^2)`.
///
/// The sum runs over all `S + 1` knots and is divided by `S`.
pub fn calibration_score(curve: &CalibrationCurve) -> f64 {
    let sum: f64 = curve
        .points()
        .map(|(p, p_hat)| (p_hat - p) * (p_hat - p))
        .sum();
    libm::sqrt(sum / curve.steps as f64)
}

/// Square root of the mean predicted variance over the test set. Targets are
/// not needed.
pub fn sharpness<F>(test: &PredictionSet, variance_fn: F) -> Result<f64>
where
    F: Fn(Prediction) -> f64,
{
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let total: f64 = test.iter().map(|r| variance_fn(r.prediction())).sum();
    Ok(libm::sqrt(total / test.len() as f64))
}

/// Probability integral transform values `F_x(y)`, one per test record.
#[derive(Debug, Clone, PartialEq)]
pub struct PitSample {
    values: Vec<f64>,
}

impl PitSample {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Kolmogorov-Smirnov distance between the sample and `Uniform(0, 1)`.
    pub fn ks_statistic(&self) -> f64 {
        let mut sorted = self.values.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        let n = sorted.len() as f64;
        sorted
            .iter()
            .enumerate()
            .map(|(i, &u)| {
                let above = (i + 1) as f64 / n - u;
                let below = u - i as f64 / n;
                above.max(below)
            })
            .fold(0.0, f64::max)
    }
}

pub fn pit_values<F>(test: &PredictionSet, cdf_fn: F) -> Result<PitSample>
where
    F: Fn(Prediction, f64) -> f64,
{
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    if !test.is_labeled() {
        return Err(Error::UnlabeledTestSet);
    }
    let values = test
        .iter()
        .map(|r| cdf_fn(r.prediction(), r.y().expect("labeled set")).clamp(0.0, 1.0))
        .collect();
    Ok(PitSample { values })
}

/// Fraction of test targets inside the closed interval returned by
/// `interval_fn`.
pub fn interval_coverage<F>(test: &PredictionSet, interval_fn: F) -> Result<f64>
where
    F: Fn(Prediction) -> Result<(f64, f64)>,
{
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    if !test.is_labeled() {
        return Err(Error::UnlabeledTestSet);
    }
    let mut inside = 0usize;
    for record in test {
        let (lo, hi) = interval_fn(record.prediction())?;
        let y = record.y().expect("labeled set");
        if lo <= y && y <= hi {
            inside += 1;
        }
    }
    Ok(inside as f64 / test.len() as f64)
}

/// Calibration and sharpness of one method on one test set.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub method: Method,
    pub calibration_rmse: f64,
    pub sharpness: f64,
    pub trial_seed: u64,
}

pub fn evaluate(
    recalibrator: &FittedRecalibrator,
    test: &PredictionSet,
    steps: usize,
    trial_seed: u64,
) -> Result<EvaluationReport> {
    let curve = calibration_curve(
        test,
        |pred, p| recalibrator.extended_quantile(pred, p),
        steps,
    )?;
    Ok(EvaluationReport {
        method: recalibrator.method(),
        calibration_rmse: calibration_score(&curve),
        sharpness: sharpness(test, |pred| recalibrator.variance(pred))?,
        trial_seed,
    })
}
