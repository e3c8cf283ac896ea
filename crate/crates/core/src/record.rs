//! Prediction records and their validation.

use alloc::vec::Vec;

use crate::error::{Error, Field, Result};

/// A model's output for one example: shift `mu` and scale `sigma > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub mu: f64,
    pub sigma: f64,
}

impl Prediction {
    pub const fn new(mu: f64, sigma: f64) -> Self {
        Prediction { mu, sigma }
    }

    /// `mu + sigma * z`. Every quantile and interval endpoint in the crate goes
    /// through this one expression so equal z-values give bit-equal outputs.
    #[inline]
    pub fn scale_shift(self, z: f64) -> f64 {
        self.mu + self.sigma * z
    }

    #[inline]
    pub fn z_score(self, y: f64) -> f64 {
        (y - self.mu) / self.sigma
    }
}

/// One validated row: predicted shift, predicted scale and optional target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionRecord {
    mu: f64,
    sigma: f64,
    y: Option<f64>,
}

impl PredictionRecord {
    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn y(&self) -> Option<f64> {
        self.y
    }

    pub fn prediction(&self) -> Prediction {
        Prediction::new(self.mu, self.sigma)
    }

    /// `(y - mu) / sigma`, when the target is known.
    pub fn z_score(&self) -> Option<f64> {
        self.y.map(|y| self.prediction().z_score(y))
    }
}

/// An ordered, immutable collection of validated records.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionSet {
    records: Vec<PredictionRecord>,
    labeled: bool,
}

impl PredictionSet {
    pub fn records(&self) -> &[PredictionRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// True iff every record carries a target.
    pub fn is_labeled(&self) -> bool {
        self.labeled
    }

    pub fn iter(&self) -> core::slice::Iter<'_, PredictionRecord> {
        self.records.iter()
    }

    /// Z-scores in record order, or `None` if any target is missing.
    pub fn z_scores(&self) -> Option<Vec<f64>> {
        self.records.iter().map(PredictionRecord::z_score).collect()
    }

    /// A new set made of the records at `indices`, in that order.
    ///
    /// Panics if an index is out of bounds.
    pub fn select(&self, indices: &[usize]) -> PredictionSet {
        let records: Vec<_> = indices.iter().map(|&i| self.records[i]).collect();
        PredictionSet::from_valid(records)
    }

    fn from_valid(records: Vec<PredictionRecord>) -> PredictionSet {
        let labeled = records.iter().all(|r| r.y.is_some());
        PredictionSet { records, labeled }
    }
}

impl<'a> IntoIterator for &'a PredictionSet {
    type Item = &'a PredictionRecord;
    type IntoIter = core::slice::Iter<'a, PredictionRecord>;

    fn into_iter(self) -> Self::IntoIter {
        self.records.iter()
    }
}

/// Validate raw `(mu, sigma, y)` rows into a [`PredictionSet`].
///
/// Rows keep their input order. A set where some rows lack `y` is valid but
/// unlabeled; fitting and scoring reject it later.
pub fn validate_predictions<I>(rows: I) -> Result<PredictionSet>
where
    I: IntoIterator<Item = (f64, f64, Option<f64>)>,
{
    let mut records = Vec::new();
    for (row, (mu, sigma, y)) in rows.into_iter().enumerate() {
        if !mu.is_finite() {
            return Err(Error::NonFiniteValue {
                row,
                field: Field::Mu,
            });
        }
        if !sigma.is_finite() {
            return Err(Error::NonFiniteValue {
                row,
                field: Field::Sigma,
            });
        }
        if let Some(y) = y {
            if !y.is_finite() {
                return Err(Error::NonFiniteValue {
                    row,
                    field: Field::Y,
                });
            }
        }
        if sigma <= 0.0 {
            return Err(Error::NonPositiveSigma { row, sigma });
        }
        records.push(PredictionRecord { mu, sigma, y });
    }
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(PredictionSet::from_valid(records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn single_labeled_row() {
        let set = validate_predictions([(0.0, 1.0, Some(0.5))]).unwrap();
        assert!(set.is_labeled());
        assert_eq!(set.len(), 1);
    }

    #[test]
    fn zero_sigma_rejected_with_row() {
        let err = validate_predictions([(0.0, 0.0, Some(0.5))]).unwrap_err();
        assert_eq!(err, Error::NonPositiveSigma { row: 0, sigma: 0.0 });
        let err = validate_predictions([(0.0, 1.0, None), (0.0, -2.0, None)]).unwrap_err();
        assert_eq!(
            err,
            Error::NonPositiveSigma {
                row: 1,
                sigma: -2.0
            }
        );
    }

    #[test]
    fn missing_label_makes_set_unlabeled() {
        let set = validate_predictions([(1.0, 2.0, None), (3.0, 1.0, Some(4.0))]).unwrap();
        assert!(!set.is_labeled());
        assert_eq!(set.len(), 2);
        assert_eq!(set.records()[0].mu(), 1.0);
        assert_eq!(set.records()[1].y(), Some(4.0));
        assert!(set.z_scores().is_none());
    }

    #[test]
    fn non_finite_values() {
        assert_eq!(
            validate_predictions([(f64::NAN, 1.0, None)]).unwrap_err(),
            Error::NonFiniteValue {
                row: 0,
                field: Field::Mu
            }
        );
        assert_eq!(
            validate_predictions([(0.0, f64::INFINITY, None)]).unwrap_err(),
            Error::NonFiniteValue {
                row: 0,
                field: Field::Sigma
            }
        );
        assert_eq!(
            validate_predictions([(0.0, 1.0, Some(0.0)), (0.0, 1.0, Some(f64::NEG_INFINITY))])
                .unwrap_err(),
            Error::NonFiniteValue {
                row: 1,
                field: Field::Y
            }
        );
    }

    #[test]
    fn empty_rows() {
        assert_eq!(validate_predictions(vec![]).unwrap_err(), Error::EmptyInput);
    }

    #[test]
    fn select_recomputes_labeling() {
        let set = validate_predictions([(0.0, 1.0, None), (1.0, 1.0, Some(2.0))]).unwrap();
        let sub = set.select(&[1]);
        assert!(sub.is_labeled());
        assert_eq!(sub.z_scores().unwrap(), vec![1.0]);
    }
}
