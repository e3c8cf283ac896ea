//! The empirical distribution of calibration z-scores and the order-statistic
//! rule shared by the CRUDE and conformal code paths.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Index of the order statistic selected at level `p` among `len` sorted
/// values: `floor(p * len)`, clamped to `len - 1` so that `p = 1` picks the
/// maximum.
///
/// `p` must already be checked to lie in `[0, 1]` and `len` must be positive.
#[inline]
pub fn level_index(p: f64, len: usize) -> usize {
    debug_assert!((0.0..=1.0).contains(&p) && len > 0);
    // `as usize` truncates toward zero, which is floor for p * len >= 0.
    let idx = (p * len as f64) as usize;
    idx.min(len - 1)
}

/// Order statistic of `sorted` at level `p`, with `p` checked against `[0, 1]`.
#[inline]
pub fn order_statistic(sorted: &[f64], p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(sorted[level_index(p, sorted.len())])
}

/// Sorted z-scores with their population mean and variance precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalErrorDistribution {
    z_sorted: Vec<f64>,
    mean_z: f64,
    var_z: f64,
}

impl EmpiricalErrorDistribution {
    /// Sort `scores` and compute the moments. O(L log L).
    pub fn from_scores(mut scores: Vec<f64>) -> Result<Self> {
        if scores.is_empty() {
            return Err(Error::EmptyCalibrationSet);
        }
        if scores.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidModel("non-finite z-score"));
        }
        scores.sort_unstable_by(f64::total_cmp);
        let (mean_z, var_z) = population_moments(&scores);
        Ok(EmpiricalErrorDistribution {
            z_sorted: scores,
            mean_z,
            var_z,
        })
    }

    /// Rebuild from stored parts without recomputing the moments, so a saved
    /// distribution reloads bit for bit.
    pub fn from_parts(z_sorted: Vec<f64>, mean_z: f64, var_z: f64) -> Result<Self> {
        if z_sorted.is_empty() {
            return Err(Error::EmptyCalibrationSet);
        }
        if z_sorted.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidModel("non-finite z-score"));
        }
        if z_sorted.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidModel("z_sorted is not sorted"));
        }
        if !mean_z.is_finite() || !var_z.is_finite() || var_z < 0.0 {
            return Err(Error::InvalidModel(
                "moments must be finite with var_z >= 0",
            ));
        }
        Ok(EmpiricalErrorDistribution {
            z_sorted,
            mean_z,
            var_z,
        })
    }

    pub fn z_sorted(&self) -> &[f64] {
        &self.z_sorted
    }

    pub fn len(&self) -> usize {
        self.z_sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mean(&self) -> f64 {
        self.mean_z
    }

    /// Population variance (divides by L).
    pub fn variance(&self) -> f64 {
        self.var_z
    }

    /// Step quantile function: a single index lookup.
    #[inline]
    pub fn quantile(&self, p: f64) -> Result<f64> {
        order_statistic(&self.z_sorted, p)
    }

    /// `|{z_c <= z}| / L`, by binary search.
    pub fn cdf(&self, z: f64) -> f64 {
        self.count_le_by(|zc| zc <= z) as f64 / self.len() as f64
    }

    /// Number of stored z-scores satisfying a predicate that is monotone
    /// (true then false) over the sorted values.
    pub(crate) fn count_le_by(&self, pred: impl Fn(f64) -> bool) -> usize {
        self.z_sorted.partition_point(|&zc| pred(zc))
    }
}

fn population_moments(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn index_rule() {
        assert_eq!(level_index(0.0, 3), 0);
        assert_eq!(level_index(0.05, 3), 0);
        assert_eq!(level_index(0.5, 3), 1);
        assert_eq!(level_index(0.9, 3), 2);
        assert_eq!(level_index(0.95, 3), 2);
        assert_eq!(level_index(1.0, 3), 2);
        assert_eq!(level_index(1.0, 1), 0);
    }

    #[test]
    fn moments_three_points() {
        let d = EmpiricalErrorDistribution::from_scores(vec![1.0, -1.0, 0.0]).unwrap();
        assert_eq!(d.z_sorted(), &[-1.0, 0.0, 1.0]);
        assert_eq!(d.mean(), 0.0);
        assert!((d.variance() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn cdf_counts_ties() {
        let d = EmpiricalErrorDistribution::from_scores(vec![0.0, 0.0, 1.0, 2.0]).unwrap();
        assert_eq!(d.cdf(-0.5), 0.0);
        assert_eq!(d.cdf(0.0), 0.5);
        assert_eq!(d.cdf(1.5), 0.75);
        assert_eq!(d.cdf(2.0), 1.0);
    }

    #[test]
    fn from_parts_checks() {
        assert!(EmpiricalErrorDistribution::from_parts(vec![1.0, 0.0], 0.5, 0.25).is_err());
        assert!(EmpiricalErrorDistribution::from_parts(vec![], 0.0, 0.0).is_err());
        assert!(EmpiricalErrorDistribution::from_parts(vec![0.0], 0.0, -1.0).is_err());
        assert!(EmpiricalErrorDistribution::from_parts(vec![0.0, 1.0], 0.5, 0.25).is_ok());
    }

    #[test]
    fn quantile_range_check() {
        let d = EmpiricalErrorDistribution::from_scores(vec![0.0]).unwrap();
        assert_eq!(d.quantile(1.5), Err(Error::ProbabilityOutOfRange(1.5)));
        assert_eq!(d.quantile(-0.0), Ok(0.0));
    }
}
