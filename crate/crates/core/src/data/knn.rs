//! k-nearest-neighbour regression with a local spread estimate, used as a
//! stand-in black-box model for end-to-end runs.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::record::Prediction;

/// Floor on the predicted scale.
pub const MIN_SIGMA: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct KnnPredictor {
    train_x: Vec<Vec<f64>>,
    train_y: Vec<f64>,
    k: usize,
    dim: usize,
}

impl KnnPredictor {
    pub fn new(train_x: Vec<Vec<f64>>, train_y: Vec<f64>, k: usize) -> Result<Self> {
        if train_x.len() != train_y.len() {
            return Err(Error::LengthMismatch {
                expected: train_x.len(),
                got: train_y.len(),
            });
        }
        if train_x.is_empty() {
            return Err(Error::EmptyInput);
        }
        if k < 2 {
            return Err(Error::InvalidK(k));
        }
        if k > train_x.len() {
            return Err(Error::KTooLarge {
                k,
                n: train_x.len(),
            });
        }
        let dim = train_x[0].len();
        if let Some(bad) = train_x.iter().find(|x| x.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: bad.len(),
            });
        }
        Ok(KnnPredictor {
            train_x,
            train_y,
            k,
            dim,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Mean and population standard deviation (floored at [`MIN_SIGMA`]) of
    /// the targets of the `k` nearest training points. Distance ties go to
    /// the lower training index.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut dist: Vec<(f64, usize)> = self
            .train_x
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let d: f64 = t.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                (d, i)
            })
            .collect();
        let by_distance =
            |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        dist.select_nth_unstable_by(self.k - 1, by_distance);
        let neighbours = &mut dist[..self.k];
        neighbours.sort_unstable_by(by_distance);

        let k = self.k as f64;
        let mean = neighbours
            .iter()
            .map(|&(_, i)| self.train_y[i])
            .sum::<f64>()
            / k;
        let var = neighbours
            .iter()
            .map(|&(_, i)| (self.train_y[i] - mean) * (self.train_y[i] - mean))
            .sum::<f64>()
            / k;
        Ok(Prediction::new(mean, libm::sqrt(var).max(MIN_SIGMA)))
    }
}
