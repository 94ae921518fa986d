//! File formats, multi-threaded drivers and the `minsym` command line on
//! top of [`minsym_core`].

pub mod error;
pub mod format;
pub mod parallel;

pub use error::{Error, Result};
