//! Data plumbing that needs no IO: seeded random streams, the
//! train/calibration/test split protocol, synthetic data with known error
//! families and a k-nearest-neighbour predictor.

pub mod knn;
pub mod rng;
pub mod split;
pub mod synth;

pub use knn::KnnPredictor;
pub use rng::StreamRng;
pub use split::{split, split_indices, SplitIndices, SplitSpec};
pub use synth::{synth_generate, ErrorFamily, SyntheticConfig, SyntheticData, SyntheticRow};
