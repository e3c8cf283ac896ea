use crate::error::{Error, Result};
use crate::normal;
use crate::record::{Prediction, PredictionSet};

/// Floor on the fitted z-score scale.
pub const MIN_SCALE: f64 = 1e-12;

/// Gaussian maximum-likelihood recalibration of the z-scores.
///
/// The predictive law for `(mu, sigma)` is `Normal(mu + sigma m, (sigma s)^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMleModel {
    m: f64,
    s: f64,
}

impl GaussianMleModel {
    pub fn new(m: f64, s: f64) -> Result<Self> {
        if !m.is_finite() || !s.is_finite() || s < MIN_SCALE {
            return Err(Error::InvalidModel(
                "gaussian_mle needs finite m and s >= 1e-12",
            ));
        }
        Ok(GaussianMleModel { m, s })
    }

    /// Mean and population standard deviation of the calibration z-scores.
    pub fn fit(cal: &PredictionSet) -> Result<Self> {
        if cal.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: cal.len(),
            });
        }
        let z = cal.z_scores().ok_or(Error::UnlabeledCalibrationSet)?;
        let n = z.len() as f64;
        let m = z.iter().sum::<f64>() / n;
        let var = z.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n;
        if !m.is_finite() || !var.is_finite() {
            return Err(Error::InvalidModel("non-finite z-score moments"));
        }
        Ok(GaussianMleModel {
            m,
            s: libm::sqrt(var).max(MIN_SCALE),
        })
    }

    pub fn shift(&self) -> f64 {
        self.m
    }

    pub fn scale(&self) -> f64 {
        self.s
    }

    pub fn quantile(&self, pred: Prediction, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::ProbabilityOutOfOpenRange(p));
        }
        Ok(self.quantile_unchecked(pred, p))
    }

    pub(crate) fn quantile_unchecked(&self, pred: Prediction, p: f64) -> f64 {
        pred.mu + pred.sigma * self.m + pred.sigma * self.s * normal::quantile(p)
    }

    pub fn cdf(&self, pred: Prediction, y: f64) -> f64 {
        normal::cdf((pred.z_score(y) - self.m) / self.s)
    }

    pub fn variance(&self, pred: Prediction) -> f64 {
        let scale = pred.sigma * self.s;
        scale * scale
    }
}

pub fn fit_gaussian_mle(cal: &PredictionSet) -> Result<GaussianMleModel> {
    GaussianMleModel::fit(cal)
}
