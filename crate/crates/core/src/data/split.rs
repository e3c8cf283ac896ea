//! Repeated shuffled train/calibration/test splits.

use alloc::vec::Vec;

use super::rng::StreamRng;
use crate::error::{Error, Result};
use crate::record::PredictionSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_frac: f64,
    pub cal_frac: f64,
    pub test_frac: f64,
    pub seed: u64,
    pub trials: usize,
}

impl SplitSpec {
    pub fn new(
        train_frac: f64,
        cal_frac: f64,
        test_frac: f64,
        seed: u64,
        trials: usize,
    ) -> Result<Self> {
        let fracs = [train_frac, cal_frac, test_frac];
        if fracs.iter().any(|f| !f.is_finite() || *f <= 0.0) {
            return Err(Error::InvalidSplit("fractions must be positive"));
        }
        if (fracs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidSplit("fractions must sum to 1"));
        }
        if trials == 0 {
            return Err(Error::InvalidSplit("trials must be positive"));
        }
        Ok(SplitSpec {
            train_frac,
            cal_frac,
            test_frac,
            seed,
            trials,
        })
    }

    /// 50/40/10 over 20 trials.
    pub fn standard(seed: u64) -> Self {
        SplitSpec {
            train_frac: 0.5,
            cal_frac: 0.4,
            test_frac: 0.1,
            seed,
            trials: 20,
        }
    }

    /// Partition sizes `(floor(n f_train), floor(n f_cal), remainder)`.
    pub fn sizes(&self, n: usize) -> (usize, usize, usize) {
        // the small offset keeps e.g. 100 * 0.29 from flooring to 28
        let part = |f: f64| libm::floor(n as f64 * f + 1e-9) as usize;
        let train = part(self.train_frac).min(n);
        let cal = part(self.cal_frac).min(n - train);
        (train, cal, n - train - cal)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub cal: Vec<usize>,
    pub test: Vec<usize>,
}

/// Shuffle `0..n` with stream `trial` under `spec.seed` and cut it into
/// train, calibration and test parts.
pub fn split_indices(n: usize, spec: &SplitSpec, trial: usize) -> Result<SplitIndices> {
    if trial >= spec.trials {
        return Err(Error::TrialOutOfRange {
            trial,
            trials: spec.trials,
        });
    }
    let (n_train, n_cal, n_test) = spec.sizes(n);
    if n_train == 0 {
        return Err(Error::EmptyPartition("train"));
    }
    if n_cal == 0 {
        return Err(Error::EmptyPartition("calibration"));
    }
    if n_test == 0 {
        return Err(Error::EmptyPartition("test"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    StreamRng::for_stream(spec.seed, trial as u64).shuffle(&mut order);
    let test = order.split_off(n_train + n_cal);
    let cal = order.split_off(n_train);
    Ok(SplitIndices {
        train: order,
        cal,
        test,
    })
}

/// Split a prediction set into `(train, cal, test)`.
pub fn split(
    set: &PredictionSet,
    spec: &SplitSpec,
    trial: usize,
) -> Result<(PredictionSet, PredictionSet, PredictionSet)> {
    let idx = split_indices(set.len(), spec, trial)?;
    Ok((
        set.select(&idx.train),
        set.select(&idx.cal),
        set.select(&idx.test),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_sizes() {
        let spec = SplitSpec::standard(1);
        assert_eq!(spec.sizes(100), (50, 40, 10));
        assert_eq!(spec.sizes(7), (3, 2, 2));
        assert_eq!(spec.sizes(10_000), (5000, 4000, 1000));
        let odd = SplitSpec::new(0.29, 0.31, 0.4, 0, 1).unwrap();
        assert_eq!(odd.sizes(100), (29, 31, 40));
    }

    #[test]
    fn disjoint_and_exhaustive() {
        let spec = SplitSpec::standard(5);
        let idx = split_indices(103, &spec, 4).unwrap();
        let mut all: Vec<usize> = idx
            .train
            .iter()
            .chain(&idx.cal)
            .chain(&idx.test)
            .copied()
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..103).collect::<Vec<_>>());
        assert_eq!(
            (idx.train.len(), idx.cal.len(), idx.test.len()),
            (51, 41, 11)
        );
    }

    #[test]
    fn deterministic_per_trial() {
        let spec = SplitSpec::standard(11);
        assert_eq!(split_indices(60, &spec, 3), split_indices(60, &spec, 3));
        assert_ne!(split_indices(60, &spec, 3), split_indices(60, &spec, 4));
    }

    #[test]
    fn errors() {
        let spec = SplitSpec::standard(0);
        assert_eq!(
            split_indices(100, &spec, 20),
            Err(Error::TrialOutOfRange {
                trial: 20,
                trials: 20
            })
        );
        assert_eq!(
            split_indices(2, &spec, 0),
            Err(Error::EmptyPartition("calibration"))
        );
        assert_eq!(
            split_indices(1, &spec, 0),
            Err(Error::EmptyPartition("train"))
        );
        assert!(SplitSpec::new(0.5, 0.5, 0.0, 0, 1).is_err());
        assert!(SplitSpec::new(0.5, 0.4, 0.2, 0, 1).is_err());
        assert!(SplitSpec::new(0.5, 0.4, 0.1, 0, 0).is_err());
    }
}
