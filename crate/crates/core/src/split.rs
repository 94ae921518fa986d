//! Seeded train/eval partition.

use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Default share of each bucket used for training (8000 of 10000).
pub const DEFAULT_TRAIN_RATIO: f64 = 0.8;

/// Shuffles `0..n` with random stream `(seed, stream)` and cuts it at
/// `round(n * train_ratio)`. Both halves are returned in ascending order.
pub fn split_indices(n: usize, train_ratio: f64, seed: u64, stream: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(0.0..=1.0).contains(&train_ratio) {
        return Err(Error::InvalidArgument("train ratio must lie in [0, 1]"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut stream_rng(seed, stream));
    let cut = libm::round(n as f64 * train_ratio) as usize;
    let mut eval = order.split_off(cut);
    order.sort_unstable();
    eval.sort_unstable();
    Ok((order, eval))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_sized_split() {
        let (train, eval) = split_indices(10_000, DEFAULT_TRAIN_RATIO, 3, 0).unwrap();
        assert_eq!((train.len(), eval.len()), (8000, 2000));
        let mut all: Vec<usize> = train.iter().chain(&eval).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..10_000).collect::<Vec<_>>());
        assert_eq!(split_indices(10_000, DEFAULT_TRAIN_RATIO, 3, 0).unwrap(), (train.clone(), eval));
        assert_ne!(split_indices(10_000, DEFAULT_TRAIN_RATIO, 4, 0).unwrap().0, train);
    }

    #[test]
    fn edge_ratios() {
        assert_eq!(split_indices(0, 0.8, 1, 0).unwrap(), (vec![], vec![]));
        assert_eq!(split_indices(5, 1.0, 1, 0).unwrap().1.len(), 0);
        assert_eq!(split_indices(5, 0.0, 1, 0).unwrap().0.len(), 0);
        assert!(split_indices(5, 1.5, 1, 0).is_err());
    }
}
