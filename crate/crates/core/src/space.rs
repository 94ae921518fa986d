//! Attribute-value objects, game instances and the message vocabulary.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest supported attribute count. Attribute subsets are handled as
/// 64-bit masks by the solvers.
pub const MAX_ATTRIBUTES: usize = 64;
/// Largest supported value count; values are stored as `u16`.
pub const MAX_VALUES: usize = 1 << 16;

/// The `|A| x |V|` configuration every object is drawn from. All
/// attributes take the same number of values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AttributeSpace {
    num_attributes: usize,
    num_values: usize,
}

impl AttributeSpace {
    pub fn new(num_attributes: usize, num_values: usize) -> Result<Self> {
        if num_attributes == 0 || num_attributes > MAX_ATTRIBUTES || !(2..=MAX_VALUES).contains(&num_values) {
            return Err(Error::InvalidSpace { num_attributes, num_values });
        }
        Ok(Self { num_attributes, num_values })
    }

    pub fn num_attributes(&self) -> usize {
        self.num_attributes
    }

    pub fn num_values(&self) -> usize {
        self.num_values
    }

    /// Number of distinct message symbols, one per (attribute, value) pair.
    pub fn vocabulary_size(&self) -> usize {
        self.num_attributes * self.num_values
    }

    /// Width of a concatenated one-hot object row.
    pub fn one_hot_width(&self) -> usize {
        self.vocabulary_size()
    }

    pub fn encode(&self, attribute: usize, value: usize) -> Result<Symbol> {
        self.check_attribute(attribute)?;
        self.check_value(value)?;
        Ok(Symbol((attribute * self.num_values + value) as u32))
    }

    pub fn decode(&self, symbol: Symbol) -> Result<(usize, usize)> {
        let code = symbol.0 as usize;
        if code >= self.vocabulary_size() {
            return Err(Error::SymbolOutOfRange { code: symbol.0, vocabulary_size: self.vocabulary_size() });
        }
        Ok((code / self.num_values, code % self.num_values))
    }

    pub(crate) fn check_attribute(&self, attribute: usize) -> Result<()> {
        if attribute >= self.num_attributes {
            return Err(Error::AttributeOutOfRange { attribute, num_attributes: self.num_attributes });
        }
        Ok(())
    }

    pub(crate) fn check_value(&self, value: usize) -> Result<()> {
        if value >= self.num_values {
            return Err(Error::ValueOutOfRange { value, num_values: self.num_values });
        }
        Ok(())
    }
}

impl fmt::Display for AttributeSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.num_attributes, self.num_values)
    }
}

/// Maps an (attribute, value) pair to its vocabulary code
/// `attribute * |V| + value`.
pub fn encode_pair(space: &AttributeSpace, attribute: usize, value: usize) -> Result<Symbol> {
    space.encode(attribute, value)
}

/// A vocabulary code in `[0, |A| * |V|)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(transparent))]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn code(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One object: a value index per attribute.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(transparent))]
pub struct ObjectVector {
    values: Vec<u16>,
}

impl ObjectVector {
    pub fn new(space: &AttributeSpace, values: Vec<u16>) -> Result<Self> {
        if values.len() != space.num_attributes() {
            return Err(Error::LengthMismatch { expected: space.num_attributes(), actual: values.len() });
        }
        for &v in &values {
            space.check_value(v as usize)?;
        }
        Ok(Self { values })
    }

    /// Builds an object from any integer slice, checking ranges.
    pub fn from_indices(space: &AttributeSpace, values: &[usize]) -> Result<Self> {
        let mut out = Vec::with_capacity(values.len());
        for &v in values {
            space.check_value(v)?;
            out.push(v as u16);
        }
        Self::new(space, out)
    }

    pub(crate) fn from_raw(values: Vec<u16>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[u16] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, attribute: usize) -> usize {
        self.values[attribute] as usize
    }

    /// Concatenated one-hot blocks, one block of width `|V|` per attribute.
    pub fn one_hot(&self, space: &AttributeSpace) -> Vec<u8> {
        let mut row = alloc::vec![0u8; space.one_hot_width()];
        for (a, &v) in self.values.iter().enumerate() {
            row[a * space.num_values() + v as usize] = 1;
        }
        row
    }

    /// Inverse of [`one_hot`](Self::one_hot). Every block must hold exactly
    /// one `1` and only zeros otherwise.
    pub fn from_one_hot(space: &AttributeSpace, row: &[u8]) -> Result<Self> {
        if row.len() != space.one_hot_width() {
            return Err(Error::LengthMismatch { expected: space.one_hot_width(), actual: row.len() });
        }
        let mut values = Vec::with_capacity(space.num_attributes());
        for block in row.chunks(space.num_values()) {
            let mut hot = None;
            for (i, &bit) in block.iter().enumerate() {
                match (bit, hot) {
                    (0, _) => {}
                    (1, None) => hot = Some(i),
                    _ => return Err(Error::InvalidArgument("one-hot block is not a single 1")),
                }
            }
            let hot = hot.ok_or(Error::InvalidArgument("one-hot block has no 1"))?;
            values.push(hot as u16);
        }
        Ok(Self { values })
    }

    /// Bit `a` is set iff the objects disagree on attribute `a`.
    pub fn difference_mask(&self, other: &ObjectVector) -> Result<u64> {
        if self.values.len() != other.values.len() {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.difference_mask_unchecked(other))
    }

    pub(crate) fn difference_mask_unchecked(&self, other: &ObjectVector) -> u64 {
        self.values
            .iter()
            .zip(&other.values)
            .enumerate()
            .fold(0u64, |m, (a, (x, y))| if x != y { m | (1 << a) } else { m })
    }

    /// True iff this object carries every pair of `symbols`.
    pub fn matches(&self, symbols: &SymbolSet) -> bool {
        symbols.iter().all(|(a, v)| self.values.get(a).map(|&x| x as usize) == Some(v))
    }
}

/// Attributes on which `target` and `other` disagree, ascending.
pub fn difference_set(target: &ObjectVector, other: &ObjectVector) -> Result<Vec<usize>> {
    if target.len() != other.len() {
        return Err(Error::SpaceMismatch);
    }
    Ok(target.values.iter().zip(&other.values).enumerate().filter(|(_, (x, y))| x != y).map(|(a, _)| a).collect())
}

/// A target plus `K >= 1` distractors, all from one space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GameInstance {
    space: AttributeSpace,
    objects: Vec<ObjectVector>,
    target_index: usize,
}

impl GameInstance {
    pub fn new(space: AttributeSpace, objects: Vec<ObjectVector>, target_index: usize) -> Result<Self> {
        if objects.len() < 2 {
            return Err(Error::TooFewObjects { count: objects.len() });
        }
        if target_index >= objects.len() {
            return Err(Error::TargetOutOfRange { target_index, num_objects: objects.len() });
        }
        for o in &objects {
            if o.len() != space.num_attributes() {
                return Err(Error::LengthMismatch { expected: space.num_attributes(), actual: o.len() });
            }
            for &v in o.values() {
                space.check_value(v as usize)?;
            }
        }
        Ok(Self { space, objects, target_index })
    }

    pub fn space(&self) -> &AttributeSpace {
        &self.space
    }

    pub fn objects(&self) -> &[ObjectVector] {
        &self.objects
    }

    pub fn target_index(&self) -> usize {
        self.target_index
    }

    pub fn target(&self) -> &ObjectVector {
        &self.objects[self.target_index]
    }

    /// K, the number of distractors.
    pub fn num_distractors(&self) -> usize {
        self.objects.len() - 1
    }

    /// Every candidate except the one at the target index. Copies of the
    /// target at other positions are still distractors.
    pub fn distractors(&self) -> impl Iterator<Item = &ObjectVector> + '_ {
        let t = self.target_index;
        self.objects.iter().enumerate().filter(move |&(i, _)| i != t).map(|(_, o)| o)
    }

    /// Difference masks of all distractors against the target.
    pub fn difference_masks(&self) -> Vec<u64> {
        let target = self.target();
        self.distractors().map(|d| target.difference_mask_unchecked(d)).collect()
    }

    /// Builds the symbol set that takes the target's value at each listed
    /// attribute.
    pub fn symbols_from_target(&self, attributes: impl IntoIterator<Item = usize>) -> Result<SymbolSet> {
        let target = self.target();
        let mut pairs = Vec::new();
        for a in attributes {
            self.space.check_attribute(a)?;
            pairs.push((a, target.value(a)));
        }
        SymbolSet::new(pairs)
    }
}

/// A set of (attribute, value) pairs with at most one pair per attribute,
/// kept sorted by attribute.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SymbolSet {
    pairs: Vec<(usize, usize)>,
}

impl SymbolSet {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateAttribute { attribute: w[0].0 });
            }
        }
        Ok(Self { pairs })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn attribute_mask(&self) -> u64 {
        self.pairs.iter().fold(0, |m, &(a, _)| m | (1u64 << a))
    }

    /// Vocabulary codes in ascending attribute order.
    pub fn to_symbols(&self, space: &AttributeSpace) -> Result<Vec<Symbol>> {
        self.pairs.iter().map(|&(a, v)| space.encode(a, v)).collect()
    }
}

impl fmt::Display for SymbolSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "a{a}={v}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn obj(space: &AttributeSpace, v: &[usize]) -> ObjectVector {
        ObjectVector::from_indices(space, v).unwrap()
    }

    #[test]
    fn encode_examples() {
        let s = AttributeSpace::new(20, 4).unwrap();
        assert_eq!(s.vocabulary_size(), 80);
        assert_eq!(encode_pair(&s, 0, 0).unwrap(), Symbol(0));
        assert_eq!(encode_pair(&s, 19, 3).unwrap(), Symbol(79));
        assert!(encode_pair(&s, 20, 0).is_err());
        assert!(encode_pair(&s, 0, 4).is_err());
    }

    #[test]
    fn encode_small_space_is_bijective() {
        let s = AttributeSpace::new(2, 3).unwrap();
        assert_eq!(s.encode(1, 2).unwrap(), Symbol(5));
        let mut codes: Vec<u32> =
            (0..2).flat_map(|a| (0..3).map(move |v| (a, v))).map(|(a, v)| s.encode(a, v).unwrap().0).collect();
        codes.sort_unstable();
        assert_eq!(codes, vec![0, 1, 2, 3, 4, 5]);
        assert!(s.decode(Symbol(6)).is_err());
    }

    #[test]
    fn invalid_spaces() {
        assert!(AttributeSpace::new(0, 4).is_err());
        assert!(AttributeSpace::new(3, 1).is_err());
        assert!(AttributeSpace::new(65, 2).is_err());
        assert!(AttributeSpace::new(64, 2).is_ok());
    }

    #[test]
    fn difference_set_examples() {
        let s2 = AttributeSpace::new(2, 4).unwrap();
        assert!(difference_set(&obj(&s2, &[0, 0]), &obj(&s2, &[0, 0])).unwrap().is_empty());
        // (red, triangle) vs (red, circle): they differ only in shape.
        assert_eq!(difference_set(&obj(&s2, &[0, 0]), &obj(&s2, &[0, 1])).unwrap(), vec![1]);
        let s4 = AttributeSpace::new(4, 4).unwrap();
        assert_eq!(difference_set(&obj(&s4, &[0, 1, 2, 3]), &obj(&s4, &[3, 1, 0, 3])).unwrap(), vec![0, 2]);
        assert_eq!(difference_set(&obj(&s2, &[0, 0]), &obj(&s4, &[0, 0, 0, 0])), Err(Error::SpaceMismatch));
    }

    #[test]
    fn object_validation() {
        let s = AttributeSpace::new(2, 3).unwrap();
        assert!(ObjectVector::from_indices(&s, &[0, 3]).is_err());
        assert!(ObjectVector::from_indices(&s, &[0]).is_err());
        assert_eq!(
            obj(&AttributeSpace::new(2, 2).unwrap(), &[1, 0]).one_hot(&AttributeSpace::new(2, 2).unwrap()),
            vec![0, 1, 1, 0]
        );
    }

    #[test]
    fn instance_validation() {
        let s = AttributeSpace::new(2, 3).unwrap();
        let a = obj(&s, &[0, 1]);
        assert_eq!(GameInstance::new(s, vec![a.clone()], 0), Err(Error::TooFewObjects { count: 1 }));
        assert!(GameInstance::new(s, vec![a.clone(), a.clone()], 2).is_err());
        let other = AttributeSpace::new(3, 3).unwrap();
        assert!(GameInstance::new(other, vec![a.clone(), a], 0).is_err());
    }

    #[test]
    fn symbol_set_rejects_duplicate_attribute() {
        assert_eq!(SymbolSet::new(vec![(1, 0), (1, 2)]), Err(Error::DuplicateAttribute { attribute: 1 }));
        let s = SymbolSet::new(vec![(3, 1), (0, 2)]).unwrap();
        assert_eq!(s.pairs(), &[(0, 2), (3, 1)]);
    }

    fn space_and_pair() -> impl Strategy<Value = (AttributeSpace, Vec<usize>, Vec<usize>)> {
        (1usize..=8, 2usize..=5).prop_flat_map(|(na, nv)| {
            let s = AttributeSpace::new(na, nv).unwrap();
            (Just(s), prop::collection::vec(0..nv, na), prop::collection::vec(0..nv, na))
        })
    }

    proptest! {
        #[test]
        fn one_hot_round_trip((s, x, _y) in space_and_pair()) {
            let o = obj(&s, &x);
            let row = o.one_hot(&s);
            prop_assert_eq!(row.len(), s.num_attributes() * s.num_values());
            prop_assert_eq!(row.iter().map(|&b| b as usize).sum::<usize>(), s.num_attributes());
            prop_assert_eq!(ObjectVector::from_one_hot(&s, &row).unwrap(), o);
        }

        #[test]
        fn difference_set_symmetric((s, x, y) in space_and_pair()) {
            let (a, b) = (obj(&s, &x), obj(&s, &y));
            prop_assert!(difference_set(&a, &a).unwrap().is_empty());
            prop_assert_eq!(difference_set(&a, &b).unwrap(), difference_set(&b, &a).unwrap());
            let mask = a.difference_mask(&b).unwrap();
            let listed: u64 = difference_set(&a, &b).unwrap().iter().fold(0, |m, &i| m | 1 << i);
            prop_assert_eq!(mask, listed);
        }

        #[test]
        fn decode_inverts_encode(na in 1usize..=20, nv in 2usize..=8) {
            let s = AttributeSpace::new(na, nv).unwrap();
            for code in 0..s.vocabulary_size() as u32 {
                let (a, v) = s.decode(Symbol(code)).unwrap();
                prop_assert_eq!(s.encode(a, v).unwrap(), Symbol(code));
            }
        }
    }
}
