//! Comparison recalibrators: the model's own Gaussian read (identity), a
//! Gaussian maximum-likelihood fit of the z-scores, and isotonic
//! recalibration of the Gaussian CDF levels.

mod gaussian;
mod kuleshov;
mod pava;

pub use gaussian::{fit_gaussian_mle, GaussianMleModel, MIN_SCALE};
pub use kuleshov::{fit_kuleshov, KuleshovModel, LEVEL_CLAMP, QUADRATURE_SLICES};
pub use pava::pava;

use crate::error::{Error, Result};
use crate::normal;
use crate::record::Prediction;

/// `mu + sigma * Phi^-1(p)`: the model's own Gaussian read of its outputs.
pub fn identity_quantile(pred: Prediction, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ProbabilityOutOfOpenRange(p));
    }
    Ok(pred.scale_shift(normal::quantile(p)))
}

pub fn identity_cdf(pred: Prediction, y: f64) -> f64 {
    normal::cdf(pred.z_score(y))
}

pub fn identity_variance(pred: Prediction) -> f64 {
    pred.sigma * pred.sigma
}
