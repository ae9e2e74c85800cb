mod common;

use hanoi_core::contraction::{check_star, check_star_maximal, prenucleus};
use hanoi_core::hanoi::{symmetry_closure, Symmetry};
use hanoi_core::{GeneratorSet, HanoiGenerator, Permutation, TreeAutomorphism, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_element(rng: &mut ChaCha8Rng, k: usize, max_len: usize) -> TreeAutomorphism {
    let len = rng.gen_range(0..=max_len);
    let factors: Vec<TreeAutomorphism> = (0..len)
        .map(|_| common::random_generator(rng, k).to_automorphism())
        .collect();
    common::product(k, &factors)
}

fn random_word(rng: &mut ChaCha8Rng, k: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::new((0..len).map(|_| rng.gen_range(0..k) as u8).collect())
}

fn random_perm(rng: &mut ChaCha8Rng, k: usize) -> Permutation {
    use rand::seq::SliceRandom;
    let mut images: Vec<u8> = (0..k as u8).collect();
    images.shuffle(rng);
    Permutation::from_images(images).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn action_is_a_homomorphism(seed in any::<u64>(), k in 3usize..=5) {
        let mut r = rng(seed);
        let g = random_element(&mut r, k, 4);
        let h = random_element(&mut r, k, 4);
        let w = random_word(&mut r, k, 6);
        let gh = g.compose(&h).unwrap();
        prop_assert_eq!(gh.act(&w).unwrap(), g.act(&h.act(&w).unwrap()).unwrap());
    }

    #[test]
    fn inverse_and_powers(seed in any::<u64>(), k in 3usize..=5) {
        let mut r = rng(seed);
        let g = random_element(&mut r, k, 5);
        prop_assert!(g.compose(&g.inverse()).unwrap().is_identity());
        prop_assert_eq!(g.pow(3), common::product(k, &[g.clone(), g.clone(), g.clone()]));
        prop_assert_eq!(g.pow(-2), g.inverse().pow(2));
        prop_assert!(g.pow(0).is_identity());
    }

    #[test]
    fn associativity(seed in any::<u64>(), k in 3usize..=5) {
        let mut r = rng(seed);
        let (a, b, c) = (random_element(&mut r, k, 3), random_element(&mut r, k, 3), random_element(&mut r, k, 3));
        prop_assert_eq!(
            a.compose(&b).unwrap().compose(&c).unwrap(),
            a.compose(&b.compose(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn minimal_machines_are_canonical(seed in any::<u64>(), k in 3usize..=5) {
        let mut r = rng(seed);
        let g = random_element(&mut r, k, 5);
        let again = TreeAutomorphism::from_record(&g.to_record()).unwrap();
        prop_assert_eq!(&again, &g);
        prop_assert_eq!(again.num_states(), g.num_states());
        // a padded product minimizes to the same machine
        let padded = common::product(k, &[g.clone(), TreeAutomorphism::identity(k)]);
        prop_assert_eq!(padded.states(), g.states());
        prop_assert!(g.equals(&padded).unwrap());
    }

    #[test]
    fn equality_agrees_with_action(seed in any::<u64>(), k in 3usize..=4) {
        let mut r = rng(seed);
        let g = random_element(&mut r, k, 3);
        let h = random_element(&mut r, k, 3);
        let same_on_level = Word::all(k, 4).all(|w| g.act(&w).unwrap() == h.act(&w).unwrap());
        // automata with few states are determined well before level 4
        if g.num_states() + h.num_states() <= 4 {
            prop_assert_eq!(g == h, same_on_level);
        } else if g == h {
            prop_assert!(same_on_level);
        }
    }

    #[test]
    fn symmetric_action(seed in any::<u64>(), k in 3usize..=6) {
        let mut r = rng(seed);
        let g = common::random_generator(&mut r, k);
        let (phi, psi) = (random_perm(&mut r, k), random_perm(&mut r, k));
        let both = g.sym_action(&phi.after(&psi)).unwrap();
        prop_assert_eq!(&both, &g.sym_action(&psi).unwrap().sym_action(&phi).unwrap());
        prop_assert_eq!(g.sym_action(&Permutation::identity(k)).unwrap(), g.clone());
        // letterwise conjugation of the action
        let moved = both.to_automorphism();
        let base = g.to_automorphism();
        let map = phi.after(&psi);
        let w = random_word(&mut r, k, 5);
        let mapped = |w: &Word| Word::new(w.letters().iter().map(|&x| map.apply(x)).collect());
        prop_assert_eq!(moved.act(&mapped(&w)).unwrap(), mapped(&base.act(&w).unwrap()));
    }

    #[test]
    fn exact_orbit_check_refines_maximal(seed in any::<u64>(), k in 3usize..=6, count in 1usize..=4) {
        let mut r = rng(seed);
        let gens: Vec<HanoiGenerator> = (0..count).map(|_| common::random_generator(&mut r, k)).collect();
        let set = GeneratorSet::from_generators(k, gens).unwrap();
        if check_star_maximal(&set).is_some() {
            prop_assert!(check_star(&set).is_some());
        }
        if let Some(v) = check_star(&set) {
            // the reported orbit meets every inactive set of the subset
            for &i in &v.indices {
                let q = set.generators()[i].generator.inactive_set();
                prop_assert!(v.orbit.iter().any(|&x| q >> x & 1 == 1));
            }
        }
    }
}

#[test]
fn section_product_trajectory() {
    let mut r = rng(7);
    for _ in 0..200 {
        let k = r.gen_range(3..=6);
        let gens: Vec<TreeAutomorphism> = (0..r.gen_range(1..=6))
            .map(|_| common::random_generator(&mut r, k).to_automorphism())
            .collect();
        let j = r.gen_range(0..k);
        let (factors, trajectory) = TreeAutomorphism::section_product(&gens, j).unwrap();
        assert_eq!(trajectory[0] as usize, j);
        for (t, g) in trajectory.iter().zip(gens.iter().rev()) {
            let _ = g.root_perm().apply(*t);
        }
        assert_eq!(factors.len(), gens.len());
        assert_eq!(
            common::product(k, &factors),
            common::product(k, &gens).section(j).unwrap()
        );
    }
}

#[test]
fn orbit_check_matches_nucleus_finiteness() {
    // the prenucleus is finite exactly when the orbit condition holds
    let mut r = rng(11);
    let (mut finite, mut infinite) = (0, 0);
    for _ in 0..60 {
        let k = r.gen_range(3..=5);
        let count = r.gen_range(1..=3);
        let gens: Vec<HanoiGenerator> = (0..count)
            .map(|_| common::random_generator_with(&mut r, k, k - 2))
            .collect();
        let set = GeneratorSet::from_generators(k, gens).unwrap();
        let star = check_star(&set).is_none();
        let bounded = prenucleus(&set, 2000).is_ok();
        assert_eq!(star, bounded, "{:?}", set.to_json());
        if star {
            finite += 1;
        } else {
            infinite += 1;
        }
    }
    assert!(
        finite > 0 && infinite > 0,
        "{finite} finite, {infinite} infinite"
    );
}

#[test]
fn closures_are_idempotent_and_invariant() {
    let mut r = rng(3);
    for symmetry in [Symmetry::Full, Symmetry::Rotational, Symmetry::Dihedral] {
        for _ in 0..10 {
            let k = r.gen_range(3..=5);
            let set = GeneratorSet::from_generators(k, vec![common::random_generator(&mut r, k)])
                .unwrap();
            let once = symmetry_closure(&set, symmetry);
            let twice = symmetry_closure(&once, symmetry);
            assert_eq!(once.generator_set(), twice.generator_set());
            for phi in symmetry.generators(k) {
                for g in once.generators() {
                    assert!(once.contains(&g.generator.sym_action(&phi).unwrap()));
                }
            }
        }
    }
}
