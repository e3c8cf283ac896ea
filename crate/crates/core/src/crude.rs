//! Calibrating Regression Uncertainty Distributions Empirically (CRUDE).
//!
//! Calibration z-scores `(y - mu) / sigma` are sorted once; the predictive
//! distribution for a new example is that empirical distribution scaled by
//! its `sigma` and shifted by its `mu`. Fitting costs O(L log L) for the sort
//! plus O(L) for the moments; afterwards a quantile is one index lookup, a
//! moment query is O(1) and a CDF query is a binary search.

use crate::empirical::EmpiricalErrorDistribution;
use crate::error::{Error, Result};
use crate::record::{Prediction, PredictionSet};

#[derive(Debug, Clone, PartialEq)]
pub struct CrudeModel {
    dist: EmpiricalErrorDistribution,
}

impl CrudeModel {
    pub fn fit(cal: &PredictionSet) -> Result<Self> {
        if cal.is_empty() {
            return Err(Error::EmptyCalibrationSet);
        }
        let scores = cal.z_scores().ok_or(Error::UnlabeledCalibrationSet)?;
        Ok(CrudeModel {
            dist: EmpiricalErrorDistribution::from_scores(scores)?,
        })
    }

    pub fn from_distribution(dist: EmpiricalErrorDistribution) -> Self {
        CrudeModel { dist }
    }

    pub fn distribution(&self) -> &EmpiricalErrorDistribution {
        &self.dist
    }

    /// `mu + sigma * z_sorted[min(floor(p L), L - 1)]`.
    #[inline]
    pub fn quantile(&self, pred: Prediction, p: f64) -> Result<f64> {
        Ok(pred.scale_shift(self.dist.quantile(p)?))
    }

    /// Fraction of calibration z-scores whose scaled and shifted value is at
    /// most `y`. Comparing on the target scale (rather than z-scoring `y`)
    /// keeps `cdf(quantile(p)) >= p` exact in floating point.
    pub fn cdf(&self, pred: Prediction, y: f64) -> f64 {
        self.dist.count_le_by(|z| pred.scale_shift(z) <= y) as f64 / self.dist.len() as f64
    }

    /// Predictive mean and variance: `(mu + sigma E[z], sigma^2 V[z])`.
    #[inline]
    pub fn moments(&self, pred: Prediction) -> (f64, f64) {
        (
            pred.scale_shift(self.dist.mean()),
            pred.sigma * pred.sigma * self.dist.variance(),
        )
    }
}

/// Fit CRUDE on a labeled, non-empty calibration set.
pub fn fit_crude(cal: &PredictionSet) -> Result<CrudeModel> {
    CrudeModel::fit(cal)
}
