//! Minimum number of symbols, `min(|M|)`, needed to single out the target.
//!
//! Two exact solvers are provided. [`solve_min_sym_enum`] walks every
//! symbol set drawn from the target in (size, lexicographic) order and is
//! the reference. [`solve_min_sym_hitting`] uses the fact that a symbol set
//! rules out a distractor iff it touches the distractor's difference set,
//! so `min(|M|)` is the size of a minimum hitting set of those sets; it is
//! solved by branch and bound and is the fast path used by the sampler.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::space::{GameInstance, SymbolSet};

/// Outcome of a solver. Both fields are `None` iff some distractor is
/// identical to the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmsResult {
    min_symbols: Option<usize>,
    witness: Option<SymbolSet>,
}

impl SmsResult {
    pub fn solved(witness: SymbolSet) -> Self {
        Self { min_symbols: Some(witness.len()), witness: Some(witness) }
    }

    pub fn unsolvable() -> Self {
        Self { min_symbols: None, witness: None }
    }

    pub fn min_symbols(&self) -> Option<usize> {
        self.min_symbols
    }

    pub fn witness(&self) -> Option<&SymbolSet> {
        self.witness.as_ref()
    }

    pub fn into_witness(self) -> Option<SymbolSet> {
        self.witness
    }

    pub fn is_solvable(&self) -> bool {
        self.min_symbols.is_some()
    }
}

/// `min(|M|)` by the solver the rest of the crate relies on.
pub fn solve_min_sym(instance: &GameInstance) -> SmsResult {
    solve_min_sym_hitting(instance)
}

/// Reference solver: try every non-empty symbol set of the target, smallest
/// first and lexicographic by attribute within a size, and return the first
/// one that no distractor matches.
pub fn solve_min_sym_enum(instance: &GameInstance) -> SmsResult {
    let target = instance.target();
    let distractors: Vec<_> = instance.distractors().collect();
    let n = instance.space().num_attributes();

    let is_unique = |combo: &[usize]| !distractors.iter().any(|d| combo.iter().all(|&a| d.value(a) == target.value(a)));

    let mut combo: Vec<usize> = Vec::with_capacity(n);
    for r in 1..=n {
        combo.clear();
        combo.extend(0..r);
        loop {
            if is_unique(&combo) {
                let witness =
                    instance.symbols_from_target(combo.iter().copied()).expect("combination indices are in range");
                return SmsResult::solved(witness);
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    SmsResult::unsolvable()
}

/// Advances `combo` to the next r-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let r = combo.len();
    let mut i = r;
    while i > 0 {
        i -= 1;
        if combo[i] < n - r + i {
            combo[i] += 1;
            for j in i + 1..r {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Minimum hitting set over the distractors' difference sets.
pub fn solve_min_sym_hitting(instance: &GameInstance) -> SmsResult {
    let masks = instance.difference_masks();
    if masks.contains(&0) {
        return SmsResult::unsolvable();
    }
    let sets = reduce(masks);
    if sets.is_empty() {
        // Unreachable for valid instances (K >= 1), kept for completeness.
        return SmsResult::solved(SymbolSet::empty());
    }
    let best = greedy_cover(&sets);
    let mut search = Search { sets: &sets, best_size: best.count_ones() as usize, best };
    search.branch(0, 0, 0);
    let witness = instance.symbols_from_target(bits(search.best)).expect("hitting set attributes are in range");
    SmsResult::solved(witness)
}

/// The first minimal witness in (size, lexicographic) order, the same set
/// [`solve_min_sym_enum`] returns. The size comes from the hitting-set
/// solver, so only sets of that size are scanned.
pub fn first_witness(instance: &GameInstance) -> SmsResult {
    let Some(k) = solve_min_sym_hitting(instance).min_symbols() else {
        return SmsResult::unsolvable();
    };
    let masks = reduce(instance.difference_masks());
    let n = instance.space().num_attributes();
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        let chosen = combo.iter().fold(0u64, |m, &a| m | 1 << a);
        if masks.iter().all(|&s| s & chosen != 0) {
            let witness =
                instance.symbols_from_target(combo.iter().copied()).expect("combination indices are in range");
            return SmsResult::solved(witness);
        }
        if !next_combination(&mut combo, n) {
            unreachable!("a hitting set of size {k} exists");
        }
    }
}

/// Drops duplicate masks and masks that contain another mask: hitting the
/// smaller one hits the larger one too. Result is sorted by size.
fn reduce(mut masks: Vec<u64>) -> Vec<u64> {
    masks.sort_unstable_by_key(|m| (m.count_ones(), *m));
    masks.dedup();
    let mut kept: Vec<u64> = Vec::with_capacity(masks.len());
    for m in masks {
        if kept.iter().all(|&k| k & m != k) {
            kept.push(m);
        }
    }
    kept
}

/// Upper bound: repeatedly take the attribute hitting the most unhit sets,
/// lowest index on ties.
fn greedy_cover(sets: &[u64]) -> u64 {
    let mut chosen = 0u64;
    loop {
        let unhit: Vec<u64> = sets.iter().copied().filter(|&s| s & chosen == 0).collect();
        if unhit.is_empty() {
            return chosen;
        }
        let union = unhit.iter().fold(0, |u, &s| u | s);
        let pick = bits(union)
            .max_by_key(|&a| (unhit.iter().filter(|&&s| s >> a & 1 == 1).count(), core::cmp::Reverse(a)))
            .expect("unhit sets are non-empty");
        chosen |= 1 << pick;
    }
}

struct Search<'a> {
    sets: &'a [u64],
    best_size: usize,
    best: u64,
}

impl Search<'_> {
    /// Looks for a hitting set strictly smaller than the incumbent that
    /// contains `chosen` and avoids `excluded`.
    fn branch(&mut self, mut chosen: u64, mut size: usize, excluded: u64) {
        // Propagate forced choices: a set with one allowed attribute left.
        let mut open: Vec<u64> = Vec::new();
        loop {
            open.clear();
            let mut forced = 0u64;
            for &s in self.sets {
                if s & chosen != 0 {
                    continue;
                }
                let allowed = s & !excluded;
                match allowed.count_ones() {
                    0 => return,
                    1 => forced |= allowed,
                    _ => open.push(allowed),
                }
            }
            if forced == 0 {
                break;
            }
            chosen |= forced;
            size += forced.count_ones() as usize;
        }
        if size >= self.best_size {
            return;
        }
        if open.is_empty() {
            self.best = chosen;
            self.best_size = size;
            return;
        }
        if size + disjoint_packing(&open) >= self.best_size {
            return;
        }
        let pivot = *open.iter().min_by_key(|s| s.count_ones()).expect("open is non-empty");
        let mut excluded = excluded;
        for a in bits(pivot) {
            self.branch(chosen | 1 << a, size + 1, excluded);
            excluded |= 1 << a;
        }
    }
}

/// Number of pairwise-disjoint sets found greedily; each needs its own
/// attribute, so this is a lower bound on any hitting set.
fn disjoint_packing(sets: &[u64]) -> usize {
    let mut used = 0u64;
    let mut count = 0;
    for &s in sets {
        if s & used == 0 {
            used |= s;
            count += 1;
        }
    }
    count
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let a = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(a)
        }
    })
}

/// True iff no distractor agrees with the target on every pair of
/// `witness`. Every pair must carry the target's own value.
pub fn verify_witness(instance: &GameInstance, witness: &SymbolSet) -> Result<bool> {
    let target = instance.target();
    for (a, v) in witness.iter() {
        instance.space().check_attribute(a)?;
        if target.value(a) != v {
            return Err(Error::NotFromTarget { attribute: a, value: v, target_value: target.value(a) });
        }
    }
    Ok(!instance.distractors().any(|d| d.matches(witness)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{AttributeSpace, ObjectVector};
    use alloc::vec;
    use proptest::prelude::*;

    // Colors: red=0, blue=1, green=2. Shapes: triangle=0, circle=1, square=2.
    const RED: usize = 0;
    const BLUE: usize = 1;
    const GREEN: usize = 2;
    const TRIANGLE: usize = 0;
    const CIRCLE: usize = 1;
    const SQUARE: usize = 2;

    fn instance(num_values: usize, objects: &[&[usize]], target: usize) -> GameInstance {
        let space = AttributeSpace::new(objects[0].len(), num_values).unwrap();
        let objects = objects.iter().map(|o| ObjectVector::from_indices(&space, o).unwrap()).collect();
        GameInstance::new(space, objects, target).unwrap()
    }

    fn top_row() -> GameInstance {
        instance(3, &[&[RED, TRIANGLE], &[BLUE, CIRCLE], &[GREEN, SQUARE], &[BLUE, SQUARE]], 0)
    }

    fn bottom_row() -> GameInstance {
        instance(3, &[&[RED, TRIANGLE], &[BLUE, TRIANGLE], &[RED, CIRCLE]], 0)
    }

    #[test]
    fn color_shape_rows() {
        for solve in [solve_min_sym_enum, solve_min_sym_hitting] {
            assert_eq!(solve(&top_row()).min_symbols(), Some(1));
            assert_eq!(solve(&bottom_row()).min_symbols(), Some(2));
        }
        assert_eq!(solve_min_sym_enum(&top_row()).witness().unwrap().pairs(), &[(0, RED)]);
        assert_eq!(solve_min_sym_enum(&bottom_row()).witness().unwrap().pairs(), &[(0, RED), (1, TRIANGLE)]);
    }

    #[test]
    fn duplicate_target_is_unsolvable() {
        let inst = instance(2, &[&[0, 0], &[0, 0]], 0);
        assert_eq!(solve_min_sym_enum(&inst), SmsResult::unsolvable());
        assert_eq!(solve_min_sym_hitting(&inst), SmsResult::unsolvable());
        let inst = instance(3, &[&[0, 1], &[2, 2], &[0, 1]], 2);
        assert!(!solve_min_sym_hitting(&inst).is_solvable());
    }

    #[test]
    fn needs_every_attribute() {
        let inst = instance(2, &[&[0, 0, 0], &[0, 0, 1], &[0, 1, 0], &[1, 0, 0]], 0);
        assert_eq!(solve_min_sym_enum(&inst).min_symbols(), Some(3));
        assert_eq!(solve_min_sym_hitting(&inst).min_symbols(), Some(3));
    }

    #[test]
    fn two_disjoint_difference_sets() {
        // Difference sets {0,1} and {2,3}.
        let inst = instance(2, &[&[0, 0, 0, 0], &[1, 1, 0, 0], &[0, 0, 1, 1]], 0);
        let res = solve_min_sym_hitting(&inst);
        assert_eq!(res.min_symbols(), Some(2));
        assert!(verify_witness(&inst, res.witness().unwrap()).unwrap());
        assert_eq!(solve_min_sym_enum(&inst).witness().unwrap().pairs(), &[(0, 0), (2, 0)]);
    }

    #[test]
    fn verify_witness_examples() {
        let inst = bottom_row();
        let red_triangle = SymbolSet::new(vec![(0, RED), (1, TRIANGLE)]).unwrap();
        assert_eq!(verify_witness(&inst, &red_triangle), Ok(true));
        let red = SymbolSet::new(vec![(0, RED)]).unwrap();
        assert_eq!(verify_witness(&inst, &red), Ok(false));
        assert_eq!(verify_witness(&inst, &SymbolSet::empty()), Ok(false));
        let blue = SymbolSet::new(vec![(0, BLUE)]).unwrap();
        assert_eq!(
            verify_witness(&inst, &blue),
            Err(Error::NotFromTarget { attribute: 0, value: BLUE, target_value: RED })
        );
        let beyond = SymbolSet::new(vec![(5, 0)]).unwrap();
        assert!(verify_witness(&inst, &beyond).is_err());
    }

    #[test]
    fn reduce_drops_supersets() {
        assert_eq!(reduce(vec![0b111, 0b011, 0b011, 0b100]), vec![0b100, 0b011]);
    }

    #[test]
    fn combinations_in_lexicographic_order() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    /// Smallest hitting set size by scanning all 2^|A| masks.
    fn brute_force(inst: &GameInstance) -> Option<usize> {
        let masks = inst.difference_masks();
        let n = inst.space().num_attributes();
        (0u64..1 << n).filter(|s| masks.iter().all(|m| m & s != 0)).map(|s| s.count_ones() as usize).min()
    }

    fn instances() -> impl Strategy<Value = GameInstance> {
        (1usize..=6, 2usize..=4, 1usize..=8).prop_flat_map(|(na, nv, k)| {
            prop::collection::vec(prop::collection::vec(0..nv, na), k + 1).prop_flat_map(move |objs| {
                let space = AttributeSpace::new(na, nv).unwrap();
                let objs: Vec<_> = objs.iter().map(|o| ObjectVector::from_indices(&space, o).unwrap()).collect();
                (0..objs.len()).prop_map(move |t| GameInstance::new(space, objs.clone(), t).unwrap())
            })
        })
    }

    proptest! {
        #[test]
        fn solvers_agree_with_brute_force(inst in instances()) {
            let e = solve_min_sym_enum(&inst);
            let h = solve_min_sym_hitting(&inst);
            prop_assert_eq!(e.min_symbols(), brute_force(&inst));
            prop_assert_eq!(h.min_symbols(), e.min_symbols());
            for w in [e.witness(), h.witness()].into_iter().flatten() {
                prop_assert!(verify_witness(&inst, w).unwrap());
            }
        }

        #[test]
        fn first_witness_matches_enumeration(inst in instances()) {
            prop_assert_eq!(first_witness(&inst), solve_min_sym_enum(&inst));
        }

        #[test]
        fn adding_a_distractor_never_lowers(inst in instances(), extra_seed in any::<u64>()) {
            let space = *inst.space();
            let values: Vec<usize> = (0..space.num_attributes())
                .map(|a| ((extra_seed >> (a * 3)) as usize) % space.num_values())
                .collect();
            let mut objects = inst.objects().to_vec();
            objects.push(ObjectVector::from_indices(&space, &values).unwrap());
            let bigger = GameInstance::new(space, objects, inst.target_index()).unwrap();
            let before = solve_min_sym_hitting(&inst).min_symbols();
            let after = solve_min_sym_hitting(&bigger).min_symbols();
            // None (unsolvable) ranks above every count.
            let rank = |x: Option<usize>| x.unwrap_or(usize::MAX);
            prop_assert!(rank(after) >= rank(before));
        }

        #[test]
        fn unique_value_means_one_symbol(inst in instances()) {
            let t = inst.target();
            let has_unique = (0..inst.space().num_attributes())
                .any(|a| inst.distractors().all(|d| d.value(a) != t.value(a)));
            if has_unique {
                prop_assert_eq!(solve_min_sym_hitting(&inst).min_symbols(), Some(1));
            }
            if let Some(k) = solve_min_sym_enum(&inst).min_symbols() {
                prop_assert!(k <= inst.space().num_attributes());
            }
        }
    }
}
