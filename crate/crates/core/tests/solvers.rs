use minsym_core::rng::stream_rng;
use minsym_core::sampler::draw_instance;
use minsym_core::{
    first_witness, solve_min_sym_enum, solve_min_sym_hitting, verify_witness, AttributeSpace, GameInstance,
    ObjectVector,
};
use proptest::prelude::*;
use rand::Rng;

fn random_instance(seed: u64, i: u64) -> GameInstance {
    let mut rng = stream_rng(seed, i);
    let na = rng.gen_range(1..=8);
    let nv = rng.gen_range(2..=4);
    let k = rng.gen_range(1..=10);
    let space = AttributeSpace::new(na, nv).unwrap();
    let objects = (0..=k)
        .map(|_| {
            let v: Vec<usize> = (0..na).map(|_| rng.gen_range(0..nv)).collect();
            ObjectVector::from_indices(&space, &v).unwrap()
        })
        .collect();
    GameInstance::new(space, objects, rng.gen_range(0..=k)).unwrap()
}

#[test]
fn solvers_agree_on_seeded_instances() {
    for i in 0..1500 {
        let inst = random_instance(42, i);
        let e = solve_min_sym_enum(&inst);
        let h = solve_min_sym_hitting(&inst);
        assert_eq!(e.min_symbols(), h.min_symbols(), "instance {i}: {inst:?}");
        if let (Some(we), Some(wh)) = (e.witness(), h.witness()) {
            assert!(verify_witness(&inst, we).unwrap());
            assert!(verify_witness(&inst, wh).unwrap());
        }
    }
}

#[test]
fn full_scale_instances() {
    let space = AttributeSpace::new(20, 4).unwrap();
    for d in 0..200 {
        let inst = draw_instance(&space, 63, 5, d);
        let h = solve_min_sym_hitting(&inst);
        let w = first_witness(&inst);
        assert_eq!(h.min_symbols(), w.min_symbols());
        assert!(verify_witness(&inst, w.witness().unwrap()).unwrap());
    }
    // The enumerator is exponential; spot-check a handful.
    for d in 0..10 {
        let inst = draw_instance(&space, 63, 5, d);
        assert_eq!(solve_min_sym_enum(&inst), first_witness(&inst));
    }
}

proptest! {
    #[test]
    fn removing_a_distractor_never_raises(seed in any::<u64>(), drop in any::<prop::sample::Index>()) {
        let inst = random_instance(seed, 0);
        prop_assume!(inst.objects().len() > 2);
        let t = inst.target_index();
        let others: Vec<usize> = (0..inst.objects().len()).filter(|&i| i != t).collect();
        let removed = others[drop.index(others.len())];
        let objects: Vec<_> =
            inst.objects().iter().enumerate().filter(|&(i, _)| i != removed).map(|(_, o)| o.clone()).collect();
        let new_target = if removed < t { t - 1 } else { t };
        let smaller = GameInstance::new(*inst.space(), objects, new_target).unwrap();
        let rank = |x: Option<usize>| x.unwrap_or(usize::MAX);
        prop_assert!(
            rank(solve_min_sym_hitting(&smaller).min_symbols()) <= rank(solve_min_sym_hitting(&inst).min_symbols())
        );
    }
}
