//! Multi-threaded versions of the sampling, histogram, Monte Carlo,
//! evaluation and verification loops.
//!
//! Each unit of work owns its random stream, and results are combined in a
//! fixed order, so the output for a given seed is the same for any worker
//! count, including the single-threaded functions in `minsym_core`.

use minsym_core::game::{play_instance, EvalReport, Receiver, Sender};
use minsym_core::prob::{monte_carlo_block, num_blocks, CollisionQuery, Estimate};
use minsym_core::sampler::{
    draw_and_solve, histogram_trial, Collector, LabeledDataset, LabeledInstance, MinSymHistogram, SampleError,
    SamplerConfig,
};
use minsym_core::AttributeSpace;
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::{Error, Result};

/// Draws sampled per worker between collector passes.
const DRAWS_PER_WORKER: u64 = 256;

pub fn pool(workers: usize) -> ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().expect("failed to start worker threads")
}

pub fn controlled_sample(config: &SamplerConfig, workers: usize) -> std::result::Result<LabeledDataset, SampleError> {
    let mut collector = Collector::new(config.clone()).map_err(SampleError::Config)?;
    let batch = DRAWS_PER_WORKER * workers.max(1) as u64;
    pool(workers).install(|| {
        while !collector.is_done() && !collector.is_exhausted() {
            let start = collector.next_draw();
            let end = (start + batch).min(config.max_attempts);
            let results: Vec<_> = (start..end).into_par_iter().map(|d| draw_and_solve(config, d)).collect();
            for (instance, outcome) in results {
                collector.offer(instance, outcome);
                if collector.is_done() {
                    break;
                }
            }
        }
    });
    collector.finish()
}

pub fn min_m_histogram(
    space: &AttributeSpace,
    num_distractors: usize,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<MinSymHistogram> {
    if trials == 0 || num_distractors == 0 {
        // Same validation as the serial path.
        return Ok(minsym_core::min_m_histogram(space, num_distractors, trials, seed)?);
    }
    Ok(pool(workers).install(|| {
        (0..trials)
            .into_par_iter()
            .fold(MinSymHistogram::default, |mut h, t| {
                h.record(histogram_trial(space, num_distractors, seed, t));
                h
            })
            .reduce(MinSymHistogram::default, |mut a, b| {
                a.merge(&b);
                a
            })
    }))
}

pub fn monte_carlo_exists(q: &CollisionQuery, trials: u64, seed: u64, workers: usize) -> Result<Estimate> {
    if trials == 0 {
        return Ok(minsym_core::monte_carlo_exists(q, trials, seed)?);
    }
    let hits = pool(workers)
        .install(|| (0..num_blocks(trials)).into_par_iter().map(|b| monte_carlo_block(q, trials, seed, b)).sum());
    Ok(Estimate::from_counts(hits, trials))
}

pub fn evaluate<S, R>(
    instances: &[LabeledInstance],
    sender: &S,
    receiver: &R,
    max_length: usize,
    episodes_per_instance: usize,
    seed: u64,
    workers: usize,
) -> Result<EvalReport>
where
    S: Sender + Sync + ?Sized,
    R: Receiver + Sync + ?Sized,
{
    if instances.is_empty() || episodes_per_instance == 0 {
        return Ok(minsym_core::evaluate(instances, sender, receiver, max_length, episodes_per_instance, seed)?);
    }
    let outcomes = pool(workers).install(|| {
        instances
            .par_iter()
            .map(|li| play_instance(li, sender, receiver, max_length, episodes_per_instance, seed))
            .collect::<minsym_core::Result<Vec<_>>>()
    })?;
    Ok(EvalReport::from_outcomes(max_length, outcomes))
}

/// Re-solves every stored instance with the enumeration solver. Returns
/// the number of instances checked, or the violation on the lowest line.
/// `lines` gives each instance's records-file line; without it, lines are
/// counted as if the dataset had just been written.
pub fn verify_dataset(ds: &LabeledDataset, lines: Option<&[usize]>, workers: usize) -> Result<usize> {
    let items: Vec<&LabeledInstance> = ds.instances().collect();
    let failures: Vec<(usize, Error)> = pool(workers).install(|| {
        items
            .par_iter()
            .enumerate()
            .filter_map(|(i, li)| {
                let line = lines.map_or(i + 1, |l| l[i]);
                crate::format::dataset::check_purity(li, line).err().map(|e| (line, e))
            })
            .collect()
    });
    match failures.into_iter().min_by_key(|&(line, _)| line) {
        Some((_, e)) => Err(e),
        None => Ok(items.len()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use minsym_core::{OracleReceiver, OracleSender};

    #[test]
    fn sampling_matches_serial() {
        let space = AttributeSpace::new(6, 3).unwrap();
        let config = SamplerConfig::new(space, 9, 15, [2, 3], 21).unwrap();
        let serial = minsym_core::controlled_sample(&config).unwrap();
        for workers in [1, 3, 4] {
            assert_eq!(controlled_sample(&config, workers).unwrap(), serial);
        }
    }

    #[test]
    fn exhaustion_matches_serial() {
        let space = AttributeSpace::new(6, 3).unwrap();
        let config = SamplerConfig::new(space, 9, 15, [6], 21).unwrap().with_max_attempts(700).unwrap();
        let serial = minsym_core::controlled_sample(&config).unwrap_err();
        assert_eq!(controlled_sample(&config, 3).unwrap_err(), serial);
    }

    #[test]
    fn histogram_and_monte_carlo_match_serial() {
        let space = AttributeSpace::new(8, 3).unwrap();
        let serial = minsym_core::min_m_histogram(&space, 12, 2000, 4).unwrap();
        assert_eq!(min_m_histogram(&space, 12, 2000, 4, 4).unwrap(), serial);

        let q = CollisionQuery::new(30, 2, 100).unwrap();
        let serial = minsym_core::monte_carlo_exists(&q, 5000, 8).unwrap();
        assert_eq!(monte_carlo_exists(&q, 5000, 8, 3).unwrap(), serial);
    }

    #[test]
    fn evaluation_matches_serial() {
        let space = AttributeSpace::new(6, 3).unwrap();
        let ds = minsym_core::controlled_sample(&SamplerConfig::new(space, 9, 20, [2], 2).unwrap()).unwrap();
        let items = ds.bucket(2);
        let serial = minsym_core::evaluate(items, &OracleSender, &OracleReceiver, 1, 4, 6).unwrap();
        assert_eq!(evaluate(items, &OracleSender, &OracleReceiver, 1, 4, 6, 4).unwrap(), serial);
        assert_eq!(verify_dataset(&ds, None, 2).unwrap(), 20);
    }
}
