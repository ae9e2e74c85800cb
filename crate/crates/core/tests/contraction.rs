mod common;

use std::collections::BTreeSet;

use hanoi_core::contraction::{
    check_contraction, check_star, distinct_generator_depth, equivalence_patterns, moore_diagram,
    prenucleus, word_length_ball, Nucleus, DEFAULT_CAP,
};
use hanoi_core::hanoi::{family_by_name, hanoi_c, hanoi_towers, HanoiGenerator};
use hanoi_core::schreier::{root_transitivity, schreier, DEFAULT_VERTEX_BOUND};
use hanoi_core::{GeneratorSet, Permutation, TreeAutomorphism, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn deep_sections_fall_in_the_nucleus() {
    for set in [hanoi_towers(3).unwrap(), hanoi_c(4).unwrap()] {
        let nucleus = prenucleus(&set, DEFAULT_CAP).unwrap().automorphisms();
        let ball = word_length_ball(&set, 3, 100_000).unwrap();
        let k = set.k();
        for g in ball.keys() {
            for w in Word::all(k, 3) {
                let s = g.section_at_word(&w).unwrap();
                assert!(
                    nucleus.contains(&s),
                    "section of length-{} element escapes",
                    ball[g]
                );
            }
        }
    }
}

#[test]
fn nucleus_is_closed_under_sections() {
    for name in ["Hanoi(3)", "Hc(3)", "Hc(4)", "Runder(5,2)", "Rover(5,2)"] {
        let set = family_by_name(name).unwrap();
        let nucleus = prenucleus(&set, DEFAULT_CAP).unwrap();
        assert!(nucleus.is_state_closed(), "{name}");
    }
}

#[test]
fn adjacent_window_families_contract() {
    for (k, n) in [(5, 2), (6, 2), (7, 3)] {
        for name in [format!("Runder({k},{n})"), format!("Rover({k},{n})")] {
            let set = family_by_name(&name).unwrap();
            assert!(check_star(&set).is_none(), "{name}");
        }
    }
}

#[test]
fn sections_lower_distinct_generator_depth() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tested = 0;
    while tested < 12 {
        let k = rng.gen_range(3..=4);
        let gens: Vec<HanoiGenerator> = (0..rng.gen_range(2..=3))
            .map(|_| common::random_generator(&mut rng, k))
            .collect();
        let set = GeneratorSet::from_generators(k, gens).unwrap();
        if check_star(&set).is_some() {
            continue;
        }
        tested += 1;
        let depth = distinct_generator_depth(&set, DEFAULT_CAP).unwrap();
        for (g, &d) in &depth {
            for j in 0..k {
                let s = g.section(j).unwrap();
                if &s != g {
                    assert!(depth[&s] < d.max(1), "section depth {} vs {d}", depth[&s]);
                }
            }
        }
    }
}

#[test]
fn witness_powers_are_distinct_fixed_sections() {
    for k in [4, 5] {
        let set = hanoi_towers(k).unwrap();
        let report = check_contraction(&set, 2);
        let w = report.witness.unwrap();
        let mut seen = BTreeSet::new();
        for l in 1..=12 {
            let p = w.g.pow(l);
            assert_eq!(p.section(w.i as usize).unwrap(), p);
            assert!(seen.insert(p), "power {l} repeats");
        }
    }
}

#[test]
fn hanoi_three_moore_diagram() {
    let set = hanoi_towers(3).unwrap();
    let nucleus = prenucleus(&set, DEFAULT_CAP).unwrap();
    let moore = moore_diagram(&nucleus).unwrap();
    assert_eq!(moore.node_count(), 4);
    assert_eq!(moore.edge_count(), 12);
    let (patterns, truncated) = equivalence_patterns(&nucleus, 1000).unwrap();
    assert!(!truncated);
    assert_eq!(patterns.iter().filter(|p| p.is_nontrivial()).count(), 6);
}

#[test]
fn nucleus_file_round_trip() {
    let set = hanoi_c(4).unwrap();
    let nucleus = prenucleus(&set, DEFAULT_CAP).unwrap();
    let parsed = Nucleus::parse_json(&nucleus.to_json()).unwrap();
    let parsed: BTreeSet<TreeAutomorphism> = parsed.into_iter().collect();
    assert_eq!(parsed, nucleus.automorphisms());
    let again = GeneratorSet::from_json(&set.to_json()).unwrap();
    assert_eq!(again.generator_set(), set.generator_set());
}

#[test]
fn connectivity_needs_inactive_pegs() {
    // the 3-cycle with no inactive peg and a01 are transitive on letters,
    // but level 2 splits off the words ending in 2
    let rotation =
        HanoiGenerator::new(3, &[], Permutation::from_cycles(3, &[[0, 1, 2]]).unwrap()).unwrap();
    let a01 =
        HanoiGenerator::new(3, &[2], Permutation::from_cycles(3, &[[0, 1]]).unwrap()).unwrap();
    let set = GeneratorSet::from_generators(3, vec![rotation, a01]).unwrap();
    assert!(root_transitivity(&set).0);
    let g = schreier(&set, 2, DEFAULT_VERTEX_BOUND).unwrap();
    assert!(!g.is_connected());
    assert_eq!(g.graph.components().len(), 2);
}
