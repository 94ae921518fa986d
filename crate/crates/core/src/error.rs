use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Domain errors raised by the core types and algorithms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An attribute-value space with fewer than one attribute or two values,
    /// or more attributes than the solvers can index.
    InvalidSpace {
        num_attributes: usize,
        num_values: usize,
    },
    AttributeOutOfRange {
        attribute: usize,
        num_attributes: usize,
    },
    ValueOutOfRange {
        value: usize,
        num_values: usize,
    },
    SymbolOutOfRange {
        code: u32,
        vocabulary_size: usize,
    },
    /// Object length does not match the space it is used in.
    LengthMismatch {
        expected: usize,
        actual: usize,
    },
    /// Two objects, or an object and a space, disagree on their space.
    SpaceMismatch,
    /// A game needs a target and at least one distractor.
    TooFewObjects {
        count: usize,
    },
    TargetOutOfRange {
        target_index: usize,
        num_objects: usize,
    },
    DuplicateAttribute {
        attribute: usize,
    },
    /// A symbol set pair does not carry the target's value.
    NotFromTarget {
        attribute: usize,
        value: usize,
        target_value: usize,
    },
    /// No symbol set can single out the target.
    Unsolvable,
    InvalidConfig(&'static str),
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSpace { num_attributes, num_values } => write!(
                f,
                "invalid attribute space: {num_attributes} attributes x {num_values} values \
                 (need 1..=64 attributes and 2..=65536 values)"
            ),
            Error::AttributeOutOfRange { attribute, num_attributes } => {
                write!(f, "attribute {attribute} out of range (space has {num_attributes})")
            }
            Error::ValueOutOfRange { value, num_values } => {
                write!(f, "value {value} out of range (space has {num_values})")
            }
            Error::SymbolOutOfRange { code, vocabulary_size } => {
                write!(f, "symbol {code} out of range (vocabulary size {vocabulary_size})")
            }
            Error::LengthMismatch { expected, actual } => {
                write!(f, "object has {actual} attributes, expected {expected}")
            }
            Error::SpaceMismatch => f.write_str("objects belong to different attribute spaces"),
            Error::TooFewObjects { count } => {
                write!(f, "a game instance needs at least 2 objects, got {count}")
            }
            Error::TargetOutOfRange { target_index, num_objects } => {
                write!(f, "target index {target_index} out of range for {num_objects} objects")
            }
            Error::DuplicateAttribute { attribute } => {
                write!(f, "attribute {attribute} appears more than once in a symbol set")
            }
            Error::NotFromTarget { attribute, value, target_value } => {
                write!(f, "pair (attribute {attribute}, value {value}) does not match the target value {target_value}")
            }
            Error::Unsolvable => f.write_str("instance is unsolvable: a distractor duplicates the target"),
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
