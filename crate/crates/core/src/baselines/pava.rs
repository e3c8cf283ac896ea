//! Weighted pool-adjacent-violators.

use alloc::vec::Vec;

use crate::error::{Error, Result};

struct Block {
    weighted_sum: f64,
    weight: f64,
    len: usize,
}

impl Block {
    fn mean(&self) -> f64 {
        self.weighted_sum / self.weight
    }
}

/// Weighted least-squares non-decreasing fit of `y` over the ordering of `x`.
///
/// `x` only fixes the order and must already be sorted; pooled blocks take the
/// weighted mean of their members.
pub fn pava(x: &[f64], y: &[f64], weights: &[f64]) -> Result<Vec<f64>> {
    if y.len() != x.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if weights.len() != x.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: weights.len(),
        });
    }
    debug_assert!(x.windows(2).all(|w| w[0] <= w[1]), "x must be sorted");
    debug_assert!(weights.iter().all(|&w| w > 0.0));

    let mut blocks: Vec<Block> = Vec::with_capacity(y.len());
    for (&yi, &wi) in y.iter().zip(weights) {
        blocks.push(Block {
            weighted_sum: yi * wi,
            weight: wi,
            len: 1,
        });
        while blocks.len() > 1 {
            let n = blocks.len();
            if blocks[n - 2].mean() <= blocks[n - 1].mean() {
                break;
            }
            let last = blocks.pop().unwrap();
            let prev = blocks.last_mut().unwrap();
            prev.weighted_sum += last.weighted_sum;
            prev.weight += last.weight;
            prev.len += last.len;
        }
    }

    let mut fitted = Vec::with_capacity(y.len());
    for block in &blocks {
        let mean = block.mean();
        fitted.extend(core::iter::repeat_n(mean, block.len));
    }
    Ok(fitted)
}
