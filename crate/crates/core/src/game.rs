//! The signaling game: a sender sees the target and emits at most `L`
//! symbols, a receiver picks one of the candidates.
//!
//! [`OracleSender`] sends a minimal witness (greedily truncated to `L`
//! symbols when it does not fit). [`OracleReceiver`] keeps the candidates
//! consistent with every received (attribute, value) pair and guesses
//! uniformly among them, so its expected accuracy on an instance is exactly
//! `1 / survivors`.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{stream_rng, StreamRng};
use crate::sampler::LabeledInstance;
use crate::sms::first_witness;
use crate::space::{GameInstance, Symbol, SymbolSet};

/// Up to `L` vocabulary symbols. An empty message is allowed and carries
/// no information.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Message {
    symbols: Vec<Symbol>,
}

impl Message {
    pub fn new(symbols: Vec<Symbol>, max_length: usize) -> Result<Self> {
        if max_length == 0 {
            return Err(Error::InvalidArgument("max message length must be at least 1"));
        }
        if symbols.len() > max_length {
            return Err(Error::InvalidArgument("message longer than max length"));
        }
        Ok(Self { symbols })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpisodeResult {
    /// `None` when no candidate is consistent with the message.
    pub chosen_index: Option<usize>,
    pub success: bool,
    pub message: Message,
    pub survivors: usize,
}

pub trait Sender {
    fn send(&self, instance: &GameInstance, max_length: usize) -> Result<Message>;
}

pub trait Receiver {
    fn receive(&self, instance: &GameInstance, message: &Message, rng: &mut StreamRng) -> Result<EpisodeResult>;

    /// Exact probability of success on this instance, when the policy
    /// admits a closed form.
    fn expected_accuracy(&self, _instance: &GameInstance, _message: &Message) -> Result<Option<f64>> {
        Ok(None)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OracleSender;

#[derive(Debug, Clone, Copy, Default)]
pub struct OracleReceiver;

/// Sends nothing; the receiver is left to guess.
#[derive(Debug, Clone, Copy, Default)]
pub struct SilentSender;

impl Sender for OracleSender {
    fn send(&self, instance: &GameInstance, max_length: usize) -> Result<Message> {
        oracle_sender(instance, max_length)
    }
}

impl Sender for SilentSender {
    fn send(&self, _instance: &GameInstance, max_length: usize) -> Result<Message> {
        Message::new(Vec::new(), max_length)
    }
}

impl Receiver for OracleReceiver {
    fn receive(&self, instance: &GameInstance, message: &Message, rng: &mut StreamRng) -> Result<EpisodeResult> {
        oracle_receiver(instance, message, rng)
    }

    fn expected_accuracy(&self, instance: &GameInstance, message: &Message) -> Result<Option<f64>> {
        let survivors = survivors(instance, message)?;
        if survivors.contains(&instance.target_index()) {
            Ok(Some(1.0 / survivors.len() as f64))
        } else {
            Ok(Some(0.0))
        }
    }
}

/// Encodes the first minimal witness when it fits in `max_length`;
/// otherwise keeps the `max_length` witness pairs chosen greedily by how many
/// remaining distractors each rules out (lowest attribute on ties).
/// Symbols are emitted in ascending attribute order.
pub fn oracle_sender(instance: &GameInstance, max_length: usize) -> Result<Message> {
    if max_length == 0 {
        return Err(Error::InvalidArgument("max message length must be at least 1"));
    }
    let witness = first_witness(instance).into_witness().ok_or(Error::Unsolvable)?;
    let chosen = if witness.len() <= max_length { witness } else { truncate_greedy(instance, &witness, max_length) };
    Message::new(chosen.to_symbols(instance.space())?, max_length)
}

fn truncate_greedy(instance: &GameInstance, witness: &SymbolSet, keep: usize) -> SymbolSet {
    let masks = instance.difference_masks();
    let mut remaining: Vec<usize> = witness.iter().map(|(a, _)| a).collect();
    let mut alive = alloc::vec![true; masks.len()];
    let mut picked = Vec::with_capacity(keep);
    for _ in 0..keep {
        let (pos, _) = remaining
            .iter()
            .enumerate()
            .map(|(pos, &a)| {
                let gain = masks.iter().zip(&alive).filter(|&(m, &live)| live && m >> a & 1 == 1).count();
                (pos, gain)
            })
            // Highest gain; `remaining` is ascending so the first wins ties.
            .fold(None, |best: Option<(usize, usize)>, cur| match best {
                Some(b) if b.1 >= cur.1 => Some(b),
                _ => Some(cur),
            })
            .expect("witness longer than keep");
        let a = remaining.remove(pos);
        for (m, live) in masks.iter().zip(alive.iter_mut()) {
            if m >> a & 1 == 1 {
                *live = false;
            }
        }
        picked.push(a);
    }
    instance.symbols_from_target(picked).expect("witness attributes are in range")
}

/// Candidate indices consistent with every pair in `message`.
pub fn survivors(instance: &GameInstance, message: &Message) -> Result<Vec<usize>> {
    let space = instance.space();
    let pairs = message.symbols().iter().map(|&s| space.decode(s)).collect::<Result<Vec<_>>>()?;
    Ok(instance
        .objects()
        .iter()
        .enumerate()
        .filter(|(_, o)| pairs.iter().all(|&(a, v)| o.value(a) == v))
        .map(|(i, _)| i)
        .collect())
}

/// Filters candidates by the message and picks uniformly among the rest.
pub fn oracle_receiver(instance: &GameInstance, message: &Message, rng: &mut StreamRng) -> Result<EpisodeResult> {
    let survivors = survivors(instance, message)?;
    let chosen_index = match survivors.len() {
        0 => None,
        1 => Some(survivors[0]),
        n => Some(survivors[rng.gen_range(0..n)]),
    };
    Ok(EpisodeResult {
        chosen_index,
        success: chosen_index == Some(instance.target_index()),
        message: message.clone(),
        survivors: survivors.len(),
    })
}

/// One line of a message log.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EpisodeRecord {
    pub instance_id: u64,
    pub max_length: usize,
    pub symbols: Vec<u32>,
    pub chosen: Option<usize>,
    pub success: bool,
}

/// Episodes of one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceOutcome {
    pub records: Vec<EpisodeRecord>,
    pub expected_accuracy: Option<f64>,
}

/// Plays `episodes` rounds on one instance. The random stream is derived
/// from `(seed, instance id)`.
pub fn play_instance<S: Sender + ?Sized, R: Receiver + ?Sized>(
    item: &LabeledInstance,
    sender: &S,
    receiver: &R,
    max_length: usize,
    episodes: usize,
    seed: u64,
) -> Result<InstanceOutcome> {
    let instance = &item.instance;
    let message = sender.send(instance, max_length)?;
    if message.len() > max_length {
        return Err(Error::InvalidArgument("sender exceeded max length"));
    }
    let expected_accuracy = receiver.expected_accuracy(instance, &message)?;
    let mut rng = stream_rng(seed, item.id);
    let symbols: Vec<u32> = message.symbols().iter().map(|s| s.code()).collect();
    let mut records = Vec::with_capacity(episodes);
    for _ in 0..episodes {
        let res = receiver.receive(instance, &message, &mut rng)?;
        records.push(EpisodeRecord {
            instance_id: item.id,
            max_length,
            symbols: symbols.clone(),
            chosen: res.chosen_index,
            success: res.success,
        });
    }
    Ok(InstanceOutcome { records, expected_accuracy })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub max_length: usize,
    pub episodes: u64,
    pub successes: u64,
    pub accuracy: f64,
    pub std_error: f64,
    /// Mean exact per-instance success probability, when the receiver
    /// provides one for every instance.
    pub expected_accuracy: Option<f64>,
    pub records: Vec<EpisodeRecord>,
}

impl EvalReport {
    /// Combines per-instance outcomes, in instance order.
    pub fn from_outcomes(max_length: usize, outcomes: Vec<InstanceOutcome>) -> Self {
        let n = outcomes.len();
        let expected_accuracy =
            outcomes.iter().map(|o| o.expected_accuracy).sum::<Option<f64>>().map(|s| s / n.max(1) as f64);
        let records: Vec<EpisodeRecord> = outcomes.into_iter().flat_map(|o| o.records).collect();
        let episodes = records.len() as u64;
        let successes = records.iter().filter(|r| r.success).count() as u64;
        let accuracy = successes as f64 / episodes.max(1) as f64;
        let std_error = libm::sqrt(accuracy * (1.0 - accuracy) / episodes.max(1) as f64);
        Self { max_length, episodes, successes, accuracy, std_error, expected_accuracy, records }
    }
}

/// Plays every instance `episodes_per_instance` times with the given
/// policies and message budget.
pub fn evaluate<S: Sender + ?Sized, R: Receiver + ?Sized>(
    instances: &[LabeledInstance],
    sender: &S,
    receiver: &R,
    max_length: usize,
    episodes_per_instance: usize,
    seed: u64,
) -> Result<EvalReport> {
    if instances.is_empty() {
        return Err(Error::InvalidArgument("nothing to evaluate"));
    }
    if episodes_per_instance == 0 {
        return Err(Error::InvalidArgument("episodes per instance must be at least 1"));
    }
    let outcomes = instances
        .iter()
        .map(|li| play_instance(li, sender, receiver, max_length, episodes_per_instance, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalReport::from_outcomes(max_length, outcomes))
}
