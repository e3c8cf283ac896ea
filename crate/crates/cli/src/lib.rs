//! File formats and command-line driver for `crude-core`.

// `!(a < b)` checks deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod bench;
pub mod commands;
pub mod error;
pub mod model;
pub mod table;

pub use error::{CliError, Result};
pub use table::load_csv;
