//! A common query interface over every recalibration method.

use core::fmt;
use core::str::FromStr;

use crate::baselines::{self, GaussianMleModel, KuleshovModel};
use crate::conformal::ConformalCalibration;
use crate::crude::CrudeModel;
use crate::error::{Error, Result};
use crate::record::{Prediction, PredictionSet};

/// Per-example predictive distribution queries.
pub trait Recalibrator {
    /// Quantile at level `p`, with each method's own domain for `p`.
    fn quantile(&self, pred: Prediction, p: f64) -> Result<f64>;

    /// Quantile on the closed interval `[0, 1]`. Methods whose quantile
    /// function is only defined on `(0, 1)` return `-inf` at 0 and `+inf`
    /// at 1; elsewhere this agrees with [`Recalibrator::quantile`].
    fn extended_quantile(&self, pred: Prediction, p: f64) -> f64;

    fn cdf(&self, pred: Prediction, y: f64) -> f64;

    /// Variance of the recalibrated predictive distribution.
    fn variance(&self, pred: Prediction) -> f64;
}

/// The uncalibrated Gaussian read `Normal(mu, sigma^2)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Identity;

fn open_range_extended(p: f64, inner: impl FnOnce(f64) -> f64) -> f64 {
    if p <= 0.0 {
        f64::NEG_INFINITY
    } else if p >= 1.0 {
        f64::INFINITY
    } else {
        inner(p)
    }
}

impl Recalibrator for Identity {
    fn quantile(&self, pred: Prediction, p: f64) -> Result<f64> {
        baselines::identity_quantile(pred, p)
    }

    fn extended_quantile(&self, pred: Prediction, p: f64) -> f64 {
        open_range_extended(p, |p| pred.scale_shift(crate::normal::quantile(p)))
    }

    fn cdf(&self, pred: Prediction, y: f64) -> f64 {
        baselines::identity_cdf(pred, y)
    }

    fn variance(&self, pred: Prediction) -> f64 {
        baselines::identity_variance(pred)
    }
}

impl Recalibrator for CrudeModel {
    fn quantile(&self, pred: Prediction, p: f64) -> Result<f64> {
        CrudeModel::quantile(self, pred, p)
    }

    fn extended_quantile(&self, pred: Prediction, p: f64) -> f64 {
        CrudeModel::quantile(self, pred, p.clamp(0.0, 1.0)).unwrap_or(f64::NAN)
    }

    fn cdf(&self, pred: Prediction, y: f64) -> f64 {
        CrudeModel::cdf(self, pred, y)
    }

    fn variance(&self, pred: Prediction) -> f64 {
        self.moments(pred).1
    }
}

impl Recalibrator for ConformalCalibration {
    fn quantile(&self, pred: Prediction, p: f64) -> Result<f64> {
        Ok(pred.scale_shift(self.level(p)?))
    }

    fn extended_quantile(&self, pred: Prediction, p: f64) -> f64 {
        self.level(p.clamp(0.0, 1.0))
            .map(|z| pred.scale_shift(z))
            .unwrap_or(f64::NAN)
    }

    fn cdf(&self, pred: Prediction, y: f64) -> f64 {
        ConformalCalibration::cdf(self, pred, y)
    }

    fn variance(&self, pred: Prediction) -> f64 {
        ConformalCalibration::variance(self, pred)
    }
}

impl Recalibrator for GaussianMleModel {
    fn quantile(&self, pred: Prediction, p: f64) -> Result<f64> {
        GaussianMleModel::quantile(self, pred, p)
    }

    fn extended_quantile(&self, pred: Prediction, p: f64) -> f64 {
        open_range_extended(p, |p| self.quantile_unchecked(pred, p))
    }

    fn cdf(&self, pred: Prediction, y: f64) -> f64 {
        GaussianMleModel::cdf(self, pred, y)
    }

    fn variance(&self, pred: Prediction) -> f64 {
        GaussianMleModel::variance(self, pred)
    }
}

impl Recalibrator for KuleshovModel {
    fn quantile(&self, pred: Prediction, p: f64) -> Result<f64> {
        KuleshovModel::quantile(self, pred, p)
    }

    fn extended_quantile(&self, pred: Prediction, p: f64) -> f64 {
        open_range_extended(p, |p| {
            KuleshovModel::quantile(self, pred, p).unwrap_or(f64::NAN)
        })
    }

    fn cdf(&self, pred: Prediction, y: f64) -> f64 {
        KuleshovModel::cdf(self, pred, y)
    }

    fn variance(&self, pred: Prediction) -> f64 {
        KuleshovModel::variance(self, pred)
    }
}

/// Method selector, named as on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    None,
    Crude,
    GaussianMle,
    Kuleshov,
    Conformal,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::None,
        Method::Crude,
        Method::GaussianMle,
        Method::Kuleshov,
        Method::Conformal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::None => "none",
            Method::Crude => "crude",
            Method::GaussianMle => "mle",
            Method::Kuleshov => "kuleshov",
            Method::Conformal => "conformal",
        }
    }

    /// Smallest calibration set the method can be fitted on.
    pub fn min_calibration_size(self) -> usize {
        match self {
            Method::None | Method::Crude | Method::Conformal => 1,
            Method::GaussianMle | Method::Kuleshov => 2,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownMethod;

impl fmt::Display for UnknownMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected one of none, crude, mle, kuleshov, conformal")
    }
}

impl core::error::Error for UnknownMethod {}

impl FromStr for Method {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s {
            "none" | "identity" => Ok(Method::None),
            "crude" => Ok(Method::Crude),
            "mle" | "gaussian_mle" => Ok(Method::GaussianMle),
            "kuleshov" => Ok(Method::Kuleshov),
            "conformal" => Ok(Method::Conformal),
            _ => Err(UnknownMethod),
        }
    }
}

/// A fitted recalibrator of any method.
#[derive(Debug, Clone, PartialEq)]
pub enum FittedRecalibrator {
    Identity,
    Crude(CrudeModel),
    GaussianMle(GaussianMleModel),
    Kuleshov(KuleshovModel),
    Conformal(ConformalCalibration),
}

impl FittedRecalibrator {
    /// Fit `method` on a labeled calibration set. The identity method ignores
    /// the data but still requires it to be valid for fitting.
    pub fn fit(method: Method, cal: &PredictionSet) -> Result<Self> {
        Ok(match method {
            Method::None => {
                if cal.is_empty() {
                    return Err(Error::EmptyCalibrationSet);
                }
                if !cal.is_labeled() {
                    return Err(Error::UnlabeledCalibrationSet);
                }
                FittedRecalibrator::Identity
            }
            Method::Crude => FittedRecalibrator::Crude(CrudeModel::fit(cal)?),
            Method::GaussianMle => FittedRecalibrator::GaussianMle(GaussianMleModel::fit(cal)?),
            Method::Kuleshov => FittedRecalibrator::Kuleshov(KuleshovModel::fit(cal)?),
            Method::Conformal => FittedRecalibrator::Conformal(ConformalCalibration::fit(cal)?),
        })
    }

    pub fn method(&self) -> Method {
        match self {
            FittedRecalibrator::Identity => Method::None,
            FittedRecalibrator::Crude(_) => Method::Crude,
            FittedRecalibrator::GaussianMle(_) => Method::GaussianMle,
            FittedRecalibrator::Kuleshov(_) => Method::Kuleshov,
            FittedRecalibrator::Conformal(_) => Method::Conformal,
        }
    }

    /// Central interval between levels `p_l < p_u`. Conformal models use
    /// their own interval rule; every other method returns its quantile pair.
    pub fn interval(&self, pred: Prediction, p_l: f64, p_u: f64) -> Result<(f64, f64)> {
        if let FittedRecalibrator::Conformal(m) = self {
            return m.interval(pred, p_l, p_u);
        }
        let lower = self.quantile(pred, p_l)?;
        let upper = self.quantile(pred, p_u)?;
        if !(p_l < p_u) {
            return Err(Error::InvertedLevels {
                lower: p_l,
                upper: p_u,
            });
        }
        Ok((lower, upper))
    }

    fn inner(&self) -> &dyn Recalibrator {
        match self {
            FittedRecalibrator::Identity => &Identity,
            FittedRecalibrator::Crude(m) => m,
            FittedRecalibrator::GaussianMle(m) => m,
            FittedRecalibrator::Kuleshov(m) => m,
            FittedRecalibrator::Conformal(m) => m,
        }
    }
}

impl Recalibrator for FittedRecalibrator {
    fn quantile(&self, pred: Prediction, p: f64) -> Result<f64> {
        self.inner().quantile(pred, p)
    }

    fn extended_quantile(&self, pred: Prediction, p: f64) -> f64 {
        self.inner().extended_quantile(pred, p)
    }

    fn cdf(&self, pred: Prediction, y: f64) -> f64 {
        self.inner().cdf(pred, y)
    }

    fn variance(&self, pred: Prediction) -> f64 {
        self.inner().variance(pred)
    }
}
