//! Uniform instance generation and min(|M|)-controlled rejection sampling.
//!
//! Objects are drawn i.i.d. from the full `|V|^|A|` universe. Draw `i` of a
//! run uses random stream `(seed, i)`, so a draw can be reproduced alone and
//! workers can process disjoint draws. Results are fed to a [`Collector`]
//! in draw order, which makes the dataset independent of the worker count.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::stream_rng;
use crate::sms::solve_min_sym;
use crate::space::{AttributeSpace, GameInstance, ObjectVector};

/// Attempts allowed per requested instance when no explicit cap is given.
pub const DEFAULT_ATTEMPTS_PER_INSTANCE: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplerConfig {
    pub space: AttributeSpace,
    pub num_distractors: usize,
    /// Instances wanted in every tracked bucket.
    pub per_bucket_target: usize,
    pub tracked_buckets: BTreeSet<usize>,
    pub seed: u64,
    /// Total draws before giving up.
    pub max_attempts: u64,
}

impl SamplerConfig {
    /// Config with the default attempt cap of
    /// `10^4 * per_bucket_target * |tracked_buckets|`.
    pub fn new(
        space: AttributeSpace,
        num_distractors: usize,
        per_bucket_target: usize,
        tracked_buckets: impl IntoIterator<Item = usize>,
        seed: u64,
    ) -> Result<Self> {
        let tracked_buckets: BTreeSet<usize> = tracked_buckets.into_iter().collect();
        let max_attempts = DEFAULT_ATTEMPTS_PER_INSTANCE
            .saturating_mul(per_bucket_target as u64)
            .saturating_mul(tracked_buckets.len() as u64);
        let config = Self { space, num_distractors, per_bucket_target, tracked_buckets, seed, max_attempts };
        config.validate()?;
        Ok(config)
    }

    pub fn with_max_attempts(mut self, max_attempts: u64) -> Result<Self> {
        self.max_attempts = max_attempts;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_distractors == 0 {
            return Err(Error::InvalidConfig("need at least one distractor"));
        }
        if self.per_bucket_target == 0 {
            return Err(Error::InvalidConfig("per-bucket target must be at least 1"));
        }
        if self.tracked_buckets.is_empty() {
            return Err(Error::InvalidConfig("no buckets tracked"));
        }
        if self.tracked_buckets.contains(&0) {
            return Err(Error::InvalidConfig("bucket 0 can never be filled"));
        }
        if self.max_attempts < self.per_bucket_target as u64 {
            return Err(Error::InvalidConfig("max attempts below per-bucket target"));
        }
        Ok(())
    }
}

/// Draws `num_distractors + 1` uniform objects and a uniform target index.
pub fn sample_instance<R: Rng + ?Sized>(space: &AttributeSpace, num_distractors: usize, rng: &mut R) -> GameInstance {
    let nv = space.num_values() as u32;
    let objects = (0..=num_distractors)
        .map(|_| {
            let values = (0..space.num_attributes()).map(|_| rng.gen_range(0..nv) as u16).collect();
            ObjectVector::from_raw(values)
        })
        .collect();
    let target = rng.gen_range(0..=num_distractors);
    GameInstance::new(*space, objects, target).expect("sampled objects lie in the space")
}

/// Instance number `draw` of the run seeded with `seed`.
pub fn draw_instance(space: &AttributeSpace, num_distractors: usize, seed: u64, draw: u64) -> GameInstance {
    sample_instance(space, num_distractors, &mut stream_rng(seed, draw))
}

/// Counts of solved `min(|M|)` values plus unsolvable draws.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MinSymHistogram {
    pub solved: BTreeMap<usize, u64>,
    pub unsolvable: u64,
}

impl MinSymHistogram {
    pub fn record(&mut self, outcome: Option<usize>) {
        match outcome {
            Some(k) => *self.solved.entry(k).or_default() += 1,
            None => self.unsolvable += 1,
        }
    }

    pub fn merge(&mut self, other: &MinSymHistogram) {
        for (&k, &c) in &other.solved {
            *self.solved.entry(k).or_default() += c;
        }
        self.unsolvable += other.unsolvable;
    }

    pub fn total(&self) -> u64 {
        self.solved.values().sum::<u64>() + self.unsolvable
    }

    pub fn frequency(&self, outcome: Option<usize>) -> f64 {
        let count = match outcome {
            Some(k) => self.solved.get(&k).copied().unwrap_or(0),
            None => self.unsolvable,
        };
        count as f64 / self.total().max(1) as f64
    }

    /// Largest combined frequency of two adjacent values `(k, k + 1)`.
    pub fn top_adjacent_pair(&self) -> Option<((usize, usize), f64)> {
        let total = self.total().max(1) as f64;
        self.solved
            .keys()
            .map(|&k| {
                let c = self.solved[&k] + self.solved.get(&(k + 1)).copied().unwrap_or(0);
                ((k, k + 1), c as f64 / total)
            })
            .fold(None, |best: Option<((usize, usize), f64)>, cur| match best {
                Some(b) if b.1 >= cur.1 => Some(b),
                _ => Some(cur),
            })
    }
}

impl fmt::Display for MinSymHistogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in &self.solved {
            write!(f, "{k}:{c} ")?;
        }
        write!(f, "unsolvable:{}", self.unsolvable)
    }
}

/// A stored instance. `id` is its draw index within the sampling run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledInstance {
    pub id: u64,
    pub min_symbols: usize,
    pub instance: GameInstance,
}

/// Buckets of instances keyed by `min(|M|)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDataset {
    pub config: SamplerConfig,
    pub buckets: BTreeMap<usize, Vec<LabeledInstance>>,
    /// Every draw's outcome, tracked or not.
    pub histogram: MinSymHistogram,
    pub attempts: u64,
}

impl LabeledDataset {
    pub fn empty(config: SamplerConfig) -> Self {
        let buckets = config.tracked_buckets.iter().map(|&k| (k, Vec::new())).collect();
        Self { config, buckets, histogram: MinSymHistogram::default(), attempts: 0 }
    }

    pub fn is_complete(&self) -> bool {
        self.config
            .tracked_buckets
            .iter()
            .all(|k| self.buckets.get(k).map_or(0, Vec::len) >= self.config.per_bucket_target)
    }

    pub fn bucket(&self, k: usize) -> &[LabeledInstance] {
        self.buckets.get(&k).map_or(&[], Vec::as_slice)
    }

    /// All stored instances in (bucket, draw) order.
    pub fn instances(&self) -> impl Iterator<Item = &LabeledInstance> + '_ {
        self.buckets.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.buckets.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Sampling stopped at `max_attempts` with some tracked bucket short.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleError {
    Config(Error),
    Exhausted(alloc::boxed::Box<LabeledDataset>),
}

impl fmt::Display for SampleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleError::Config(e) => e.fmt(f),
            SampleError::Exhausted(partial) => {
                write!(f, "gave up after {} attempts; filled", partial.attempts)?;
                for (k, b) in &partial.buckets {
                    write!(f, " {k}:{}/{}", b.len(), partial.config.per_bucket_target)?;
                }
                write!(f, "; observed {}", partial.histogram)
            }
        }
    }
}

impl core::error::Error for SampleError {}

/// Accepts draws in order and fills the tracked buckets.
pub struct Collector {
    dataset: LabeledDataset,
}

impl Collector {
    pub fn new(config: SamplerConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { dataset: LabeledDataset::empty(config) })
    }

    /// Index of the next draw the collector expects.
    pub fn next_draw(&self) -> u64 {
        self.dataset.attempts
    }

    pub fn is_done(&self) -> bool {
        self.dataset.is_complete()
    }

    pub fn is_exhausted(&self) -> bool {
        self.dataset.attempts >= self.dataset.config.max_attempts
    }

    /// Records draw `next_draw()` with its solved outcome.
    pub fn offer(&mut self, instance: GameInstance, outcome: Option<usize>) {
        let id = self.dataset.attempts;
        self.dataset.attempts += 1;
        self.dataset.histogram.record(outcome);
        let Some(k) = outcome else { return };
        let target = self.dataset.config.per_bucket_target;
        if let Some(bucket) = self.dataset.buckets.get_mut(&k) {
            if bucket.len() < target {
                bucket.push(LabeledInstance { id, min_symbols: k, instance });
            }
        }
    }

    pub fn finish(self) -> core::result::Result<LabeledDataset, SampleError> {
        if self.dataset.is_complete() {
            Ok(self.dataset)
        } else {
            Err(SampleError::Exhausted(alloc::boxed::Box::new(self.dataset)))
        }
    }
}

/// Draws and solves instance number `draw` of a run.
pub fn draw_and_solve(config: &SamplerConfig, draw: u64) -> (GameInstance, Option<usize>) {
    let instance = draw_instance(&config.space, config.num_distractors, config.seed, draw);
    let outcome = solve_min_sym(&instance).min_symbols();
    (instance, outcome)
}

/// Rejection sampling until every tracked bucket holds
/// `per_bucket_target` instances.
pub fn controlled_sample(config: &SamplerConfig) -> core::result::Result<LabeledDataset, SampleError> {
    let mut collector = Collector::new(config.clone()).map_err(SampleError::Config)?;
    while !collector.is_done() && !collector.is_exhausted() {
        let (instance, outcome) = draw_and_solve(config, collector.next_draw());
        collector.offer(instance, outcome);
    }
    collector.finish()
}

/// Outcome of histogram trial `trial`.
pub fn histogram_trial(space: &AttributeSpace, num_distractors: usize, seed: u64, trial: u64) -> Option<usize> {
    solve_min_sym(&draw_instance(space, num_distractors, seed, trial)).min_symbols()
}

/// Distribution of `min(|M|)` over `trials` uniform instances.
pub fn min_m_histogram(
    space: &AttributeSpace,
    num_distractors: usize,
    trials: u64,
    seed: u64,
) -> Result<MinSymHistogram> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1"));
    }
    if num_distractors == 0 {
        return Err(Error::InvalidArgument("need at least one distractor"));
    }
    let mut hist = MinSymHistogram::default();
    for t in 0..trials {
        hist.record(histogram_trial(space, num_distractors, seed, t));
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sms::solve_min_sym_enum;

    fn space(a: usize, v: usize) -> AttributeSpace {
        AttributeSpace::new(a, v).unwrap()
    }

    #[test]
    fn sampling_is_deterministic() {
        let s = space(20, 4);
        let a = draw_instance(&s, 63, 11, 5);
        assert_eq!(a, draw_instance(&s, 63, 11, 5));
        assert_ne!(a, draw_instance(&s, 63, 11, 6));
        assert_eq!(a.objects().len(), 64);
    }

    #[test]
    fn marginals_are_uniform() {
        // Chi-square over the pooled value counts, 3 degrees of freedom.
        let s = space(20, 4);
        let mut counts = [0u64; 4];
        for d in 0..200 {
            for o in draw_instance(&s, 63, 3, d).objects() {
                for &v in o.values() {
                    counts[v as usize] += 1;
                }
            }
        }
        let total: u64 = counts.iter().sum();
        let expected = total as f64 / 4.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 0.999 quantile of chi-square(3).
        assert!(chi2 < 16.27, "chi2 = {chi2}, counts = {counts:?}");
    }

    #[test]
    fn tiny_space_histogram() {
        // Exact: target and distractor agree with probability 1/2.
        let s = space(1, 2);
        let mut exact = MinSymHistogram::default();
        for (t, d) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            exact.record((t != d).then_some(1));
        }
        assert_eq!(exact.frequency(Some(1)), 0.5);
        assert_eq!(exact.frequency(None), 0.5);

        let trials = 20_000;
        let h = min_m_histogram(&s, 1, trials, 2).unwrap();
        let se = (0.25f64 / trials as f64).sqrt();
        assert!((h.frequency(Some(1)) - 0.5).abs() < 4.0 * se, "{h}");
        assert_eq!(h.total(), trials);

        let one = min_m_histogram(&space(4, 3), 5, 1, 2).unwrap();
        assert_eq!(one.total(), 1);
        assert!(one.solved.len() + (one.unsolvable > 0) as usize == 1);
        assert!(min_m_histogram(&s, 1, 0, 2).is_err());
    }

    #[test]
    fn fills_single_bucket() {
        let config = SamplerConfig::new(space(2, 4), 1, 10, [1], 4).unwrap();
        let ds = controlled_sample(&config).unwrap();
        assert_eq!(ds.bucket(1).len(), 10);
        for li in ds.instances() {
            assert_eq!(solve_min_sym_enum(&li.instance).min_symbols(), Some(1));
        }
        assert_eq!(ds.histogram.total(), ds.attempts);
        assert_eq!(controlled_sample(&config).unwrap(), ds);
    }

    #[test]
    fn unreachable_bucket_is_reported() {
        let config = SamplerConfig::new(space(20, 4), 63, 2, [20], 1).unwrap().with_max_attempts(50).unwrap();
        match controlled_sample(&config) {
            Err(SampleError::Exhausted(partial)) => {
                assert_eq!(partial.attempts, 50);
                assert!(partial.bucket(20).is_empty());
                assert_eq!(partial.histogram.total(), 50);
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let s = space(3, 2);
        assert!(SamplerConfig::new(s, 0, 1, [1], 0).is_err());
        assert!(SamplerConfig::new(s, 1, 0, [1], 0).is_err());
        assert!(SamplerConfig::new(s, 1, 1, [], 0).is_err());
        assert!(SamplerConfig::new(s, 1, 1, [0], 0).is_err());
        assert!(SamplerConfig::new(s, 1, 5, [1], 0).unwrap().with_max_attempts(4).is_err());
        assert_eq!(SamplerConfig::new(s, 1, 5, [1, 2], 0).unwrap().max_attempts, 100_000);
    }

    #[test]
    fn unsolvable_draws_never_stored() {
        // Two values, one attribute, many distractors: mostly unsolvable.
        let config = SamplerConfig::new(space(1, 2), 3, 5, [1], 8).unwrap();
        let ds = controlled_sample(&config).unwrap();
        assert!(ds.histogram.unsolvable > 0);
        assert!(ds.instances().all(|li| solve_min_sym_enum(&li.instance).is_solvable()));
    }

    #[test]
    fn adjacent_pair() {
        let mut h = MinSymHistogram::default();
        for k in [1, 2, 2, 3, 3, 3, 5] {
            h.record(Some(k));
        }
        h.record(None);
        let ((a, b), mass) = h.top_adjacent_pair().unwrap();
        assert_eq!((a, b), (2, 3));
        assert!((mass - 5.0 / 8.0).abs() < 1e-15);
    }
}
