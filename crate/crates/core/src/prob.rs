//! Probability that sampled candidates share a class.
//!
//! With `n` candidates drawn with replacement from `C` equiprobable
//! classes, [`p_class_at_least`] is the binomial tail for one fixed class
//! and [`p_exists_class_at_least`] lifts it to "some class" by treating the
//! classes as independent. That lift is an approximation; the Monte Carlo
//! estimator [`monte_carlo_exists`] measures the exact event.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Trials per random stream in [`monte_carlo_exists`].
pub const TRIALS_PER_BLOCK: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CollisionQuery {
    /// Number of sampled candidates (target plus distractors).
    pub n: u64,
    /// Occurrence threshold.
    pub m: u64,
    pub num_classes: u64,
}

impl CollisionQuery {
    pub fn new(n: u64, m: u64, num_classes: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1"));
        }
        if num_classes == 0 {
            return Err(Error::InvalidArgument("num_classes must be at least 1"));
        }
        Ok(Self { n, m, num_classes })
    }
}

/// Probability that one given class occurs at least `m` times among `n`
/// draws, `sum_{k=m}^{n} C(n,k) p^k (1-p)^(n-k)` with `p = 1/C`.
pub fn p_class_at_least(q: &CollisionQuery) -> f64 {
    let (n, m) = (q.n, q.m);
    if m == 0 {
        return 1.0;
    }
    if m > n {
        return 0.0;
    }
    if q.num_classes == 1 {
        return 1.0;
    }
    let p = 1.0 / q.num_classes as f64;
    let ln_p = libm::log(p);
    let ln_q = libm::log1p(-p);
    let log_term = |k: u64| ln_choose(n, k) + k as f64 * ln_p + (n - k) as f64 * ln_q;
    let mode = libm::floor((n + 1) as f64 * p) as u64;

    if m > mode {
        // Terms decrease from k = m upwards.
        let step = |k: u64| libm::log((n - k) as f64 / (k + 1) as f64) + ln_p - ln_q;
        let sum = decreasing_sum(log_term(m), m, |k| (k < n).then(|| (k + 1, step(k))));
        sum.clamp(0.0, 1.0)
    } else {
        // Terms decrease from k = m - 1 downwards; take the complement.
        let step = |k: u64| libm::log(k as f64 / (n - k + 1) as f64) + ln_q - ln_p;
        let lower = decreasing_sum(log_term(m - 1), m - 1, |k| (k > 0).then(|| (k - 1, step(k))));
        (1.0 - lower).clamp(0.0, 1.0)
    }
}

/// Sums binomial terms starting at `k` with log value `lt`, walking with
/// `next(k) -> (k', ln(t_k' / t_k))` while terms keep shrinking. Stops once
/// the geometric bound on the remainder is negligible.
fn decreasing_sum(mut lt: f64, mut k: u64, next: impl Fn(u64) -> Option<(u64, f64)>) -> f64 {
    let anchor = lt;
    let mut sum = Neumaier::default();
    loop {
        let term = libm::exp(lt - anchor);
        sum.add(term);
        let Some((k_next, step)) = next(k) else { break };
        if step < 0.0 {
            let bound = term * libm::exp(step) / -libm::expm1(step);
            if bound < 1e-18 * sum.total() {
                break;
            }
        }
        lt += step;
        k = k_next;
    }
    libm::exp(anchor) * sum.total()
}

/// `1 - (1 - P(X >= m))^C`, the independence approximation for "at least
/// one class occurs `m` or more times".
pub fn p_exists_class_at_least(q: &CollisionQuery) -> f64 {
    let one = p_class_at_least(q);
    if one >= 1.0 {
        return 1.0;
    }
    (-libm::expm1(q.num_classes as f64 * libm::log1p(-one))).clamp(0.0, 1.0)
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub hits: u64,
    pub trials: u64,
}

impl Estimate {
    pub fn from_counts(hits: u64, trials: u64) -> Self {
        let value = hits as f64 / trials as f64;
        let std_error = libm::sqrt(value * (1.0 - value) / trials as f64);
        Self { value, std_error, hits, trials }
    }
}

/// Estimates the exact probability that some class occurs at least `m`
/// times among `n` uniform draws.
pub fn monte_carlo_exists(q: &CollisionQuery, trials: u64, seed: u64) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1"));
    }
    let hits = (0..num_blocks(trials)).map(|b| monte_carlo_block(q, trials, seed, b)).sum();
    Ok(Estimate::from_counts(hits, trials))
}

pub fn num_blocks(trials: u64) -> u64 {
    trials.div_ceil(TRIALS_PER_BLOCK)
}

/// Hits in block `block` of a `trials`-trial run. Blocks are independent
/// streams, so any partition of blocks over workers sums to the same count.
pub fn monte_carlo_block(q: &CollisionQuery, trials: u64, seed: u64, block: u64) -> u64 {
    let start = block * TRIALS_PER_BLOCK;
    let len = TRIALS_PER_BLOCK.min(trials.saturating_sub(start));
    if q.m == 0 {
        return len;
    }
    if q.m > q.n {
        return 0;
    }
    let mut rng = stream_rng(seed, block);
    let mut labels: Vec<u64> = Vec::with_capacity(q.n as usize);
    let mut hits = 0;
    for _ in 0..len {
        labels.clear();
        labels.extend((0..q.n).map(|_| rng.gen_range(0..q.num_classes)));
        labels.sort_unstable();
        if longest_run(&labels) >= q.m {
            hits += 1;
        }
    }
    hits
}

fn longest_run(sorted: &[u64]) -> u64 {
    sorted.chunk_by(|a, b| a == b).map(|c| c.len() as u64).max().unwrap_or(0)
}

/// `ln C(n, k)`. Exact products for small `k`, log-gamma otherwise.
fn ln_choose(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    if k <= 256 {
        (0..k).map(|i| libm::log((n - i) as f64 / (i + 1) as f64)).sum()
    } else {
        libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
    }
}

/// Compensated (Neumaier) summation.
#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}
