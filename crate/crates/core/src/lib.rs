//! Minimum-symbol analysis for attribute-value Lewis signaling games.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the
//! algorithmic pieces: object and vocabulary types, two exact solvers for
//! the minimum message length of a game instance, the collision
//! probability model, the controlled sampler, oracle agents and the
//! effective-symbol diagnostics. File formats, threading and the command
//! line live in the `minsym` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
mod error;
pub mod game;
pub mod prob;
pub mod rng;
pub mod sampler;
pub mod sms;
pub mod space;
pub mod split;

pub use split::{split_indices, DEFAULT_TRAIN_RATIO};

pub use analysis::{accuracy_gap, effective_symbols, message_length_stats, AccuracyCurve, LengthStats};
pub use error::{Error, Result};
pub use game::{
    evaluate, oracle_receiver, oracle_sender, EpisodeRecord, EpisodeResult, EvalReport, Message, OracleReceiver,
    OracleSender, Receiver, Sender, SilentSender,
};
pub use prob::{monte_carlo_exists, p_class_at_least, p_exists_class_at_least, CollisionQuery, Estimate};
pub use sampler::{
    controlled_sample, min_m_histogram, sample_instance, Collector, LabeledDataset, LabeledInstance, MinSymHistogram,
    SamplerConfig,
};
pub use sms::{first_witness, solve_min_sym, solve_min_sym_enum, solve_min_sym_hitting, verify_witness, SmsResult};
pub use space::{difference_set, encode_pair, AttributeSpace, GameInstance, ObjectVector, Symbol, SymbolSet};
