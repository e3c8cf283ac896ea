//! Split (inductive) conformal intervals with the signed nonconformity score
//! `A((x, y)) = (y - mu(x)) / sigma(x)`.
//!
//! Level selection goes through [`crate::empirical::order_statistic`], the
//! same routine CRUDE uses, and endpoints through
//! [`Prediction::scale_shift`]. A conformal interval at `(p_l, p_u)` is
//! therefore bit-identical to the pair of CRUDE quantiles at those levels.

use alloc::vec::Vec;

use crate::empirical::order_statistic;
use crate::error::{Error, Result};
use crate::record::{Prediction, PredictionSet};

#[derive(Debug, Clone, PartialEq)]
pub struct ConformalCalibration {
    scores: Vec<f64>,
    // population variance of the scores
    variance: f64,
}

impl ConformalCalibration {
    pub fn fit(cal: &PredictionSet) -> Result<Self> {
        if cal.is_empty() {
            return Err(Error::EmptyCalibrationSet);
        }
        let scores = cal.z_scores().ok_or(Error::UnlabeledCalibrationSet)?;
        Self::from_scores(scores)
    }

    /// Sort raw nonconformity scores.
    pub fn from_scores(mut scores: Vec<f64>) -> Result<Self> {
        if scores.is_empty() {
            return Err(Error::EmptyCalibrationSet);
        }
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidModel("non-finite nonconformity score"));
        }
        scores.sort_unstable_by(f64::total_cmp);
        let n = scores.len() as f64;
        let mean = scores.iter().sum::<f64>() / n;
        let variance = scores.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / n;
        Ok(ConformalCalibration { scores, variance })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `scores[min(floor(p L), L - 1)]`.
    pub fn level(&self, p: f64) -> Result<f64> {
        order_statistic(&self.scores, p)
    }

    /// `(mu + sigma z_l, mu + sigma z_u)`: every `y` whose score lies in
    /// `[z_l, z_u]`.
    pub fn interval(&self, pred: Prediction, p_l: f64, p_u: f64) -> Result<(f64, f64)> {
        let z_l = self.level(p_l)?;
        let z_u = self.level(p_u)?;
        if !(p_l < p_u) {
            return Err(Error::InvertedLevels {
                lower: p_l,
                upper: p_u,
            });
        }
        Ok((pred.scale_shift(z_l), pred.scale_shift(z_u)))
    }

    /// Variance of the interval-generating distribution at `pred`.
    pub fn variance(&self, pred: Prediction) -> f64 {
        pred.sigma * pred.sigma * self.variance
    }

    /// Fraction of scores at or below the score of `y`. Same step function as
    /// the CRUDE CDF.
    pub fn cdf(&self, pred: Prediction, y: f64) -> f64 {
        self.scores.partition_point(|&z| pred.scale_shift(z) <= y) as f64 / self.len() as f64
    }
}

pub fn fit_conformal(cal: &PredictionSet) -> Result<ConformalCalibration> {
    ConformalCalibration::fit(cal)
}
