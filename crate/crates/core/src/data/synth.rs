//! Synthetic regression data with a known error shape.
//!
//! For each row a latent `x ~ U(0, 1)` sets the true shift `mu(x)` and scale
//! `sigma(x)`, a standardized error `z` is drawn from the chosen family, and
//! `y = mu + z sigma`. The reported scale is `sigma * miscal_scale`, so values
//! below 1 mimic an overconfident model.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::rng::StreamRng;
use crate::error::{Error, Result};
use crate::normal;
use crate::record::{validate_predictions, PredictionSet};

/// Error distributions, each standardized to mean 0 and variance 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErrorFamily {
    Gaussian,
    /// `exp(s g)` for standard normal `g`, centred and scaled. Right-skewed.
    LognormalShifted {
        s: f64,
    },
    /// Student's t with `dof > 2` degrees of freedom, scaled to unit
    /// variance. Heavy-tailed.
    StudentT {
        dof: f64,
    },
}

impl ErrorFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ErrorFamily::Gaussian => "gaussian",
            ErrorFamily::LognormalShifted { .. } => "lognormal_shifted",
            ErrorFamily::StudentT { .. } => "student_t",
        }
    }

    /// Build a family from its name and optional parameter (log-scale `s` or
    /// degrees of freedom). Defaults: `s = 0.8`, `dof = 5`.
    pub fn from_name(name: &str, param: Option<f64>) -> Result<Self> {
        let family = match name {
            "gaussian" => ErrorFamily::Gaussian,
            "lognormal_shifted" | "lognormal" => ErrorFamily::LognormalShifted {
                s: param.unwrap_or(0.8),
            },
            "student_t" | "t" => ErrorFamily::StudentT {
                dof: param.unwrap_or(5.0),
            },
            _ => return Err(Error::InvalidFamilyParams("unknown family")),
        };
        family.validate()?;
        Ok(family)
    }

    pub fn param(&self) -> Option<f64> {
        match *self {
            ErrorFamily::Gaussian => None,
            ErrorFamily::LognormalShifted { s } => Some(s),
            ErrorFamily::StudentT { dof } => Some(dof),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ErrorFamily::Gaussian => Ok(()),
            ErrorFamily::LognormalShifted { s } if s > 0.0 && s.is_finite() => Ok(()),
            ErrorFamily::LognormalShifted { .. } => Err(Error::InvalidFamilyParams(
                "lognormal log-scale must be > 0",
            )),
            ErrorFamily::StudentT { dof } if dof > 2.0 && dof.is_finite() => Ok(()),
            ErrorFamily::StudentT { .. } => {
                Err(Error::InvalidFamilyParams("student_t needs dof > 2"))
            }
        }
    }

    /// One standardized draw.
    pub fn sample(&self, rng: &mut StreamRng) -> f64 {
        match *self {
            ErrorFamily::Gaussian => normal::quantile(rng.open_uniform()),
            ErrorFamily::LognormalShifted { s } => {
                let g = normal::quantile(rng.open_uniform());
                let s2 = s * s;
                let mean = libm::exp(0.5 * s2);
                let sd = libm::sqrt(libm::expm1(s2) * libm::exp(s2));
                (libm::exp(s * g) - mean) / sd
            }
            ErrorFamily::StudentT { dof } => student_t(rng, dof) * libm::sqrt((dof - 2.0) / dof),
        }
    }
}

// Bailey's polar method: exact for real dof.
fn student_t(rng: &mut StreamRng, dof: f64) -> f64 {
    loop {
        let u = 2.0 * rng.uniform() - 1.0;
        let v = 2.0 * rng.uniform() - 1.0;
        let w = u * u + v * v;
        if w > 0.0 && w <= 1.0 {
            return u * libm::sqrt(dof * (libm::pow(w, -2.0 / dof) - 1.0) / w);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticConfig {
    pub n: usize,
    pub family: ErrorFamily,
    /// Scale varies with `x` when true; constant 1 otherwise.
    pub hetero: bool,
    pub miscal_scale: f64,
    pub seed: u64,
}

impl SyntheticConfig {
    pub fn new(n: usize, family: ErrorFamily, seed: u64) -> Self {
        SyntheticConfig {
            n,
            family,
            hetero: false,
            miscal_scale: 1.0,
            seed,
        }
    }

    pub fn hetero(mut self, hetero: bool) -> Self {
        self.hetero = hetero;
        self
    }

    pub fn miscal_scale(mut self, scale: f64) -> Self {
        self.miscal_scale = scale;
        self
    }
}

/// True shift as a function of the latent input.
pub fn true_mu(x: f64) -> f64 {
    libm::sin(2.0 * PI * x) + 2.0 * x
}

/// True scale as a function of the latent input.
pub fn true_sigma(x: f64, hetero: bool) -> f64 {
    if hetero {
        0.25 + x
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticRow {
    pub x: f64,
    pub mu: f64,
    pub sigma_reported: f64,
    pub sigma_true: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    pub config: SyntheticConfig,
    pub rows: Vec<SyntheticRow>,
}

impl SyntheticData {
    /// Records carrying the reported `(mu, sigma)` as the model output.
    pub fn to_prediction_set(&self) -> Result<PredictionSet> {
        validate_predictions(
            self.rows
                .iter()
                .map(|r| (r.mu, r.sigma_reported, Some(r.y))),
        )
    }

    /// Latent inputs, one feature per row.
    pub fn features(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| alloc::vec![r.x]).collect()
    }
}

pub fn synth_generate(config: &SyntheticConfig) -> Result<SyntheticData> {
    config.family.validate()?;
    if !(config.miscal_scale > 0.0 && config.miscal_scale.is_finite()) {
        return Err(Error::InvalidFamilyParams("miscal_scale must be > 0"));
    }
    if config.n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut rng = StreamRng::new(config.seed);
    let rows = (0..config.n)
        .map(|_| {
            let x = rng.uniform();
            let z = config.family.sample(&mut rng);
            let mu = true_mu(x);
            let sigma_true = true_sigma(x, config.hetero);
            SyntheticRow {
                x,
                mu,
                sigma_reported: sigma_true * config.miscal_scale,
                sigma_true,
                y: mu + z * sigma_true,
            }
        })
        .collect();
    Ok(SyntheticData {
        config: *config,
        rows,
    })
}
