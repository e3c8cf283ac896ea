//! Post-hoc recalibration of regression uncertainty.
//!
//! A black-box model supplies a shift `mu` and a positive scale `sigma` per
//! example. This crate turns those pairs into full predictive distributions:
//!
//! - [`crude`]: the empirical distribution of calibration z-scores
//!   `(y - mu) / sigma`, scaled and shifted per example.
//! - [`baselines`]: the uncalibrated Gaussian read, a Gaussian maximum
//!   likelihood recalibration and an isotonic (Kuleshov-style) recalibration.
//! - [`conformal`]: split conformal intervals with the signed z-score as
//!   nonconformity measure.
//! - [`metrics`]: calibration curves, calibration RMSE, sharpness and PIT.
//! - [`data`]: seeded splits, synthetic data with known error families and a
//!   k-NN predictor.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `!(a < b)` checks deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod baselines;
pub mod conformal;
pub mod crude;
pub mod data;
pub mod empirical;
pub mod error;
pub mod metrics;
pub mod normal;
pub mod recalibrator;
pub mod record;

pub use baselines::{GaussianMleModel, KuleshovModel};
pub use conformal::ConformalCalibration;
pub use crude::CrudeModel;
pub use empirical::EmpiricalErrorDistribution;
pub use error::{Error, Field, Result};
pub use metrics::{CalibrationCurve, EvaluationReport, PitSample};
pub use recalibrator::{FittedRecalibrator, Method, Recalibrator};
pub use record::{validate_predictions, Prediction, PredictionRecord, PredictionSet};
