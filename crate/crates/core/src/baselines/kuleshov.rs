//! Recalibration through an isotonic map of the base Gaussian CDF levels.
//!
//! Each calibration record gets a base level `q = Phi((y - mu) / sigma)` and an
//! empirical target `e = rank(q) / L`. An isotonic fit of `e` against `q`,
//! padded with `(0, 0)` and `(1, 1)` and linearly interpolated, is the map
//! `R`. A recalibrated quantile at level `p` is the base Gaussian quantile at
//! the smallest `p'` with `R(p') >= p`.

use alloc::vec::Vec;

use super::pava::pava;
use crate::error::{Error, Result};
use crate::normal;
use crate::record::{Prediction, PredictionSet};

/// Inverted levels are clamped to `[LEVEL_CLAMP, 1 - LEVEL_CLAMP]` before the
/// Gaussian quantile is taken.
pub const LEVEL_CLAMP: f64 = 1e-6;

/// Number of equal-probability slices used to integrate the variance.
pub const QUADRATURE_SLICES: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct KuleshovModel {
    iso_x: Vec<f64>,
    iso_y: Vec<f64>,
    // Variance of the recalibrated distribution at (mu, sigma) = (0, 1).
    unit_variance: f64,
}

impl KuleshovModel {
    pub fn fit(cal: &PredictionSet) -> Result<Self> {
        if cal.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: cal.len(),
            });
        }
        let z = cal.z_scores().ok_or(Error::UnlabeledCalibrationSet)?;
        let mut levels: Vec<f64> = z.iter().map(|&z| normal::cdf(z)).collect();
        if levels.iter().any(|q| q.is_nan()) {
            return Err(Error::InvalidModel("non-finite z-score"));
        }
        levels.sort_unstable_by(f64::total_cmp);

        // Tied levels are contiguous after sorting; each tie group becomes one
        // knot at its average rank, weighted by its size.
        let n = levels.len() as f64;
        let mut xs = Vec::new();
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        let mut start = 0;
        while start < levels.len() {
            let mut end = start + 1;
            while end < levels.len() && levels[end] == levels[start] {
                end += 1;
            }
            // 1-based ranks start+1 ..= end
            let avg_rank = (start + 1 + end) as f64 / 2.0;
            xs.push(levels[start]);
            targets.push(avg_rank / n);
            weights.push((end - start) as f64);
            start = end;
        }

        let fitted = pava(&xs, &targets, &weights)?;
        let (iso_x, iso_y) = augment_endpoints(&xs, &fitted);
        Self::from_knots(iso_x, iso_y)
    }

    /// Build from the knots of a map `R` that already includes `(0, 0)` and
    /// `(1, 1)`.
    pub fn from_knots(iso_x: Vec<f64>, iso_y: Vec<f64>) -> Result<Self> {
        if iso_x.len() != iso_y.len() {
            return Err(Error::LengthMismatch {
                expected: iso_x.len(),
                got: iso_y.len(),
            });
        }
        if iso_x.len() < 2 {
            return Err(Error::InvalidModel("kuleshov map needs at least two knots"));
        }
        let last = iso_x.len() - 1;
        if iso_x[0] != 0.0 || iso_y[0] != 0.0 || iso_x[last] != 1.0 || iso_y[last] != 1.0 {
            return Err(Error::InvalidModel(
                "kuleshov map must run from (0, 0) to (1, 1)",
            ));
        }
        if iso_x.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidModel("iso_x must be strictly increasing"));
        }
        if iso_y.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::InvalidModel("iso_y must be non-decreasing"));
        }
        let mut model = KuleshovModel {
            iso_x,
            iso_y,
            unit_variance: 0.0,
        };
        model.unit_variance = model.integrate_unit_variance();
        Ok(model)
    }

    pub fn iso_x(&self) -> &[f64] {
        &self.iso_x
    }

    pub fn iso_y(&self) -> &[f64] {
        &self.iso_y
    }

    /// The map `R`, linear between knots.
    pub fn recalibrate(&self, level: f64) -> f64 {
        let level = level.clamp(0.0, 1.0);
        let j = self.iso_x.partition_point(|&x| x < level);
        if j == 0 {
            return self.iso_y[0];
        }
        if j == self.iso_x.len() {
            return self.iso_y[j - 1];
        }
        let (x0, x1) = (self.iso_x[j - 1], self.iso_x[j]);
        let (y0, y1) = (self.iso_y[j - 1], self.iso_y[j]);
        y0 + (level - x0) / (x1 - x0) * (y1 - y0)
    }

    /// Smallest base level `p'` with `R(p') >= p`, for `p` in `[0, 1]`.
    pub fn invert(&self, p: f64) -> f64 {
        let j = self.iso_y.partition_point(|&y| y < p);
        if j == 0 {
            return self.iso_x[0];
        }
        // iso_y ends at 1 >= p, so j is a valid knot with iso_y[j - 1] < p <= iso_y[j].
        let j = j.min(self.iso_y.len() - 1);
        let (y0, y1) = (self.iso_y[j - 1], self.iso_y[j]);
        if p >= y1 {
            return self.iso_x[j];
        }
        let (x0, x1) = (self.iso_x[j - 1], self.iso_x[j]);
        let mut level = x0 + (p - y0) / (y1 - y0) * (x1 - x0);
        // On steep segments rounding can leave R(level) a hair below p; move
        // up to the first float that reaches it.
        while level < x1 && self.recalibrate(level) < p {
            level = level.next_up();
        }
        level.min(x1)
    }

    fn unit_quantile(&self, p: f64) -> f64 {
        let level = self.invert(p).clamp(LEVEL_CLAMP, 1.0 - LEVEL_CLAMP);
        normal::quantile(level)
    }

    pub fn quantile(&self, pred: Prediction, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::ProbabilityOutOfOpenRange(p));
        }
        Ok(pred.scale_shift(self.unit_quantile(p)))
    }

    pub fn cdf(&self, pred: Prediction, y: f64) -> f64 {
        self.recalibrate(normal::cdf(pred.z_score(y)))
    }

    pub fn variance(&self, pred: Prediction) -> f64 {
        pred.sigma * pred.sigma * self.unit_variance
    }

    // Midpoint rule over QUADRATURE_SLICES equal-probability slices of the
    // quantile function, i.e. levels (k + 1/2) / QUADRATURE_SLICES.
    fn integrate_unit_variance(&self) -> f64 {
        let slices = QUADRATURE_SLICES as f64;
        let q: Vec<f64> = (0..QUADRATURE_SLICES)
            .map(|k| self.unit_quantile((k as f64 + 0.5) / slices))
            .collect();
        let mean = q.iter().sum::<f64>() / slices;
        q.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / slices
    }
}

// Knots at level 0 or 1 are replaced by the endpoints themselves so that
// iso_x stays strictly increasing with R(0) = 0 and R(1) = 1.
fn augment_endpoints(xs: &[f64], ys: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut iso_x = Vec::with_capacity(xs.len() + 2);
    let mut iso_y = Vec::with_capacity(xs.len() + 2);
    iso_x.push(0.0);
    iso_y.push(0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        if x > 0.0 && x < 1.0 {
            iso_x.push(x);
            iso_y.push(y.clamp(0.0, 1.0));
        }
    }
    iso_x.push(1.0);
    iso_y.push(1.0);
    (iso_x, iso_y)
}

pub fn fit_kuleshov(cal: &PredictionSet) -> Result<KuleshovModel> {
    KuleshovModel::fit(cal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::validate_predictions;
    use alloc::vec;

    fn identity_map() -> KuleshovModel {
        KuleshovModel::from_knots(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap()
    }

    #[test]
    fn isotonic_knots_before_augmentation() {
        let fitted = pava(&[0.1, 0.2, 0.3], &[0.3, 0.2, 0.5], &[1.0; 3]).unwrap();
        let (x, y) = augment_endpoints(&[0.1, 0.2, 0.3], &fitted);
        assert_eq!(x, vec![0.0, 0.1, 0.2, 0.3, 1.0]);
        let expected = [0.0, 0.25, 0.25, 0.5, 1.0];
        assert!(y.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-12));
    }

    #[test]
    fn calibrated_base_gives_near_identity() {
        let l = 200;
        let rows = (1..=l).map(|i| {
            let z = normal::quantile(i as f64 / (l as f64 + 1.0));
            (0.0, 1.0, Some(z))
        });
        let model = fit_kuleshov(&validate_predictions(rows).unwrap()).unwrap();
        assert_eq!(model.iso_x().len(), l + 2);
        for (x, y) in model.iso_x().iter().zip(model.iso_y()) {
            assert!((x - y).abs() <= 2.0 / l as f64, "knot ({x}, {y})");
        }
    }

    #[test]
    fn total_overconfidence_collapses_near_one() {
        let rows = (0..50).map(|i| (0.0, 1.0, Some(7.0 + i as f64 * 0.01)));
        let model = fit_kuleshov(&validate_predictions(rows).unwrap()).unwrap();
        let interior = &model.iso_x()[1..model.iso_x().len() - 1];
        assert!(interior.iter().all(|&x| x > 1.0 - 1e-9));
        // below the knot cluster R is a single straight segment from (0, 0)
        assert!(model.recalibrate(0.999) <= model.iso_y()[1]);
    }

    #[test]
    fn ties_share_average_rank() {
        let rows = [
            (0.0, 1.0, Some(0.5)),
            (0.0, 1.0, Some(0.5)),
            (0.0, 1.0, Some(-1.0)),
        ];
        let model = fit_kuleshov(&validate_predictions(rows).unwrap()).unwrap();
        assert_eq!(model.iso_x().len(), 4);
        assert!((model.iso_y()[1] - 1.0 / 3.0).abs() < 1e-15);
        assert!((model.iso_y()[2] - 2.5 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn identity_map_reduces_to_gaussian() {
        let q = identity_map()
            .quantile(Prediction::new(0.0, 1.0), 0.975)
            .unwrap();
        assert!((q - 1.959_963_984_540_054).abs() < 1e-9);
    }

    #[test]
    fn flat_segment_takes_infimum() {
        let model =
            KuleshovModel::from_knots(vec![0.0, 0.3, 0.7, 1.0], vec![0.0, 0.5, 0.5, 1.0]).unwrap();
        assert_eq!(model.invert(0.5), 0.3);
        assert_eq!(model.invert(0.0), 0.0);
        assert_eq!(model.invert(1.0), 1.0);
        assert!((model.invert(0.75) - 0.85).abs() < 1e-15);
    }

    #[test]
    fn compressed_map_widens_intervals() {
        // R(p) = 0.1 + 0.8 p in the interior
        let x = vec![0.0, 0.05, 0.95, 1.0];
        let y: Vec<f64> = vec![0.0, 0.14, 0.86, 1.0];
        let model = KuleshovModel::from_knots(x, y).unwrap();
        let pred = Prediction::new(1.0, 2.0);
        for p in [0.6, 0.75, 0.9, 0.95] {
            let base = (
                super::super::identity_quantile(pred, 1.0 - p).unwrap(),
                super::super::identity_quantile(pred, p).unwrap(),
            );
            let recal = (
                model.quantile(pred, 1.0 - p).unwrap(),
                model.quantile(pred, p).unwrap(),
            );
            assert!(recal.1 - recal.0 > base.1 - base.0, "p={p}");
        }
    }

    #[test]
    fn clamp_and_range() {
        let model = identity_map();
        let pred = Prediction::new(0.0, 1.0);
        let q = model.quantile(pred, 1e-9).unwrap();
        assert!((q - normal::quantile(LEVEL_CLAMP)).abs() < 1e-12);
        assert_eq!(
            model.quantile(pred, 0.0),
            Err(Error::ProbabilityOutOfOpenRange(0.0))
        );
    }

    #[test]
    fn identity_map_variance_near_one() {
        let v = identity_map().variance(Prediction::new(3.0, 2.0));
        // midpoint quadrature truncates the tails slightly
        assert!((v / 4.0 - 1.0).abs() < 0.01, "v = {v}");
    }

    #[test]
    fn knot_validation() {
        assert!(KuleshovModel::from_knots(vec![0.0, 0.5], vec![0.0, 1.0]).is_err());
        assert!(
            KuleshovModel::from_knots(vec![0.0, 0.5, 0.5, 1.0], vec![0.0, 0.2, 0.3, 1.0]).is_err()
        );
        assert!(KuleshovModel::from_knots(vec![0.0, 0.5, 1.0], vec![0.0, 0.6, 0.5]).is_err());
        assert!(KuleshovModel::from_knots(vec![0.0, 1.0], vec![0.0]).is_err());
    }

    #[test]
    fn fit_errors() {
        let one = validate_predictions([(0.0, 1.0, Some(0.0))]).unwrap();
        assert_eq!(
            fit_kuleshov(&one),
            Err(Error::TooFewPoints { needed: 2, got: 1 })
        );
        let unlabeled = validate_predictions([(0.0, 1.0, Some(0.0)), (0.0, 1.0, None)]).unwrap();
        assert_eq!(
            fit_kuleshov(&unlabeled),
            Err(Error::UnlabeledCalibrationSet)
        );
    }
}
