//! Effective-symbol diagnostics over accuracy-vs-max-length curves and
//! message logs.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::game::EpisodeRecord;

/// Tolerance below which an accuracy gain does not count.
pub const DEFAULT_EPSILON: f64 = 0.02;

/// Accuracy at each max message length.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyCurve {
    /// Where the curve came from, e.g. `oracle` or `trained`.
    pub source: String,
    points: BTreeMap<usize, f64>,
}

impl AccuracyCurve {
    pub fn new(source: impl Into<String>, points: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (l, acc) in points {
            if l == 0 {
                return Err(Error::InvalidArgument("max length must be at least 1"));
            }
            if !(0.0..=1.0).contains(&acc) {
                return Err(Error::InvalidArgument("accuracy outside [0, 1]"));
            }
            if map.insert(l, acc).is_some() {
                return Err(Error::InvalidArgument("duplicate max length in curve"));
            }
        }
        Ok(Self { source: source.into(), points: map })
    }

    pub fn points(&self) -> &BTreeMap<usize, f64> {
        &self.points
    }

    pub fn get(&self, max_length: usize) -> Option<f64> {
        self.points.get(&max_length).copied()
    }

    pub fn max_accuracy(&self) -> Option<f64> {
        self.points.values().copied().reduce(f64::max)
    }
}

/// Smallest max length whose accuracy is within `epsilon` of the best.
pub fn effective_symbols(curve: &AccuracyCurve, epsilon: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument("epsilon must lie in [0, 1)"));
    }
    let best = curve.max_accuracy().ok_or(Error::InvalidArgument("empty curve"))?;
    Ok(curve.points.iter().find(|&(_, &acc)| acc >= best - epsilon).map(|(&l, _)| l).expect("the best point qualifies"))
}

/// Best accuracy minus the accuracy at `at_length`.
pub fn accuracy_gap(curve: &AccuracyCurve, at_length: usize) -> Result<f64> {
    let acc = curve.get(at_length).ok_or(Error::InvalidArgument("max length not in curve"))?;
    let best = curve.max_accuracy().expect("curve holds at_length");
    Ok(best - acc)
}

/// Per-epoch accuracies for each max length, as written by training runs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EpochCurves {
    pub source: String,
    pub rows: BTreeMap<usize, BTreeMap<u32, f64>>,
}

impl EpochCurves {
    pub fn insert(&mut self, max_length: usize, epoch: u32, accuracy: f64) -> Result<()> {
        let by_epoch = self.rows.entry(max_length).or_default();
        if by_epoch.contains_key(&epoch) {
            return Err(Error::InvalidArgument("duplicate (max length, epoch) row"));
        }
        by_epoch.insert(epoch, accuracy);
        Ok(())
    }

    /// Curve at each length's last recorded epoch.
    pub fn final_curve(&self) -> Result<AccuracyCurve> {
        AccuracyCurve::new(
            self.source.clone(),
            self.rows.iter().filter_map(|(&l, by_epoch)| by_epoch.values().next_back().map(|&a| (l, a))),
        )
    }

    /// Curve at one epoch; lengths without that epoch are skipped.
    pub fn at_epoch(&self, epoch: u32) -> Result<AccuracyCurve> {
        AccuracyCurve::new(
            self.source.clone(),
            self.rows.iter().filter_map(|(&l, by_epoch)| by_epoch.get(&epoch).map(|&a| (l, a))),
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LengthStats {
    /// Episodes per used message length.
    pub lengths: BTreeMap<usize, u64>,
    /// Occurrences per vocabulary code.
    pub symbols: BTreeMap<u32, u64>,
    pub total: u64,
}

impl LengthStats {
    /// Most frequent length, shortest on ties.
    pub fn modal_length(&self) -> Option<usize> {
        self.lengths
            .iter()
            .fold(None, |best: Option<(usize, u64)>, (&l, &c)| match best {
                Some(b) if b.1 >= c => Some(b),
                _ => Some((l, c)),
            })
            .map(|(l, _)| l)
    }

    pub fn mean_length(&self) -> Option<f64> {
        (self.total > 0)
            .then(|| self.lengths.iter().map(|(&l, &c)| l as f64 * c as f64).sum::<f64>() / self.total as f64)
    }
}

pub fn message_length_stats(log: &[EpisodeRecord]) -> LengthStats {
    let mut stats = LengthStats::default();
    for rec in log {
        *stats.lengths.entry(rec.symbols.len()).or_default() += 1;
        for &s in &rec.symbols {
            *stats.symbols.entry(s).or_default() += 1;
        }
        stats.total += 1;
    }
    stats
}

/// `(max length, accuracy, gap)` rows in ascending length order.
pub fn gap_table(curve: &AccuracyCurve) -> Vec<(usize, f64, f64)> {
    let best = curve.max_accuracy().unwrap_or(0.0);
    curve.points.iter().map(|(&l, &a)| (l, a, best - a)).collect()
}
