//! JSON documents for fitted models and evaluation reports.
//!
//! A CRUDE model is stored as `{"z_sorted", "mean_z", "var_z"}` with no method
//! tag; every other model carries a `"method"` field.

use std::fs;
use std::path::Path;

use crude_core::{
    ConformalCalibration, CrudeModel, EmpiricalErrorDistribution, EvaluationReport,
    FittedRecalibrator, GaussianMleModel, KuleshovModel,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CrudeDoc {
    z_sorted: Vec<f64>,
    mean_z: f64,
    var_z: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
enum TaggedDoc {
    None,
    Crude {
        z_sorted: Vec<f64>,
        mean_z: f64,
        var_z: f64,
    },
    GaussianMle {
        m: f64,
        s: f64,
    },
    Kuleshov {
        iso_x: Vec<f64>,
        iso_y: Vec<f64>,
    },
    Conformal {
        scores: Vec<f64>,
    },
}

pub fn model_to_json(model: &FittedRecalibrator) -> String {
    let text = match model {
        FittedRecalibrator::Crude(m) => {
            let dist = m.distribution();
            serde_json::to_string_pretty(&CrudeDoc {
                z_sorted: dist.z_sorted().to_vec(),
                mean_z: dist.mean(),
                var_z: dist.variance(),
            })
        }
        FittedRecalibrator::Identity => serde_json::to_string_pretty(&TaggedDoc::None),
        FittedRecalibrator::GaussianMle(m) => {
            serde_json::to_string_pretty(&TaggedDoc::GaussianMle {
                m: m.shift(),
                s: m.scale(),
            })
        }
        FittedRecalibrator::Kuleshov(m) => serde_json::to_string_pretty(&TaggedDoc::Kuleshov {
            iso_x: m.iso_x().to_vec(),
            iso_y: m.iso_y().to_vec(),
        }),
        FittedRecalibrator::Conformal(m) => serde_json::to_string_pretty(&TaggedDoc::Conformal {
            scores: m.scores().to_vec(),
        }),
    };
    let mut text = text.expect("model documents hold only finite floats");
    text.push('\n');
    text
}

fn crude(z_sorted: Vec<f64>, mean_z: f64, var_z: f64) -> crude_core::Result<FittedRecalibrator> {
    let dist = EmpiricalErrorDistribution::from_parts(z_sorted, mean_z, var_z)?;
    Ok(FittedRecalibrator::Crude(CrudeModel::from_distribution(
        dist,
    )))
}

pub fn model_from_json(text: &str) -> std::result::Result<FittedRecalibrator, String> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let built = if value.get("method").is_some() {
        match serde_json::from_value(value).map_err(|e| e.to_string())? {
            TaggedDoc::None => Ok(FittedRecalibrator::Identity),
            TaggedDoc::Crude {
                z_sorted,
                mean_z,
                var_z,
            } => crude(z_sorted, mean_z, var_z),
            TaggedDoc::GaussianMle { m, s } => {
                GaussianMleModel::new(m, s).map(FittedRecalibrator::GaussianMle)
            }
            TaggedDoc::Kuleshov { iso_x, iso_y } => {
                KuleshovModel::from_knots(iso_x, iso_y).map(FittedRecalibrator::Kuleshov)
            }
            TaggedDoc::Conformal { scores } => {
                ConformalCalibration::from_scores(scores).map(FittedRecalibrator::Conformal)
            }
        }
    } else {
        let doc: CrudeDoc = serde_json::from_value(value).map_err(|e| e.to_string())?;
        crude(doc.z_sorted, doc.mean_z, doc.var_z)
    };
    built.map_err(|e| e.to_string())
}

pub fn load_model(path: &Path) -> Result<FittedRecalibrator> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    model_from_json(&text).map_err(|message| CliError::Model {
        path: path.to_path_buf(),
        message,
    })
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ReportDoc {
    pub method: String,
    pub calibration_rmse: f64,
    pub sharpness: f64,
    pub seed: u64,
}

impl From<&EvaluationReport> for ReportDoc {
    fn from(r: &EvaluationReport) -> Self {
        ReportDoc {
            method: r.method.name().to_owned(),
            calibration_rmse: r.calibration_rmse,
            sharpness: r.sharpness,
            seed: r.trial_seed,
        }
    }
}

pub fn report_to_json(report: &EvaluationReport) -> String {
    let mut text = serde_json::to_string_pretty(&ReportDoc::from(report))
        .expect("reports hold only finite floats");
    text.push('\n');
    text
}
