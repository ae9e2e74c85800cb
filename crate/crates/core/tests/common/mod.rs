#![allow(dead_code)]

use hanoi_core::hanoi::HanoiGenerator;
use hanoi_core::{GeneratorSet, Letter, Permutation, TreeAutomorphism};
use rand::seq::SliceRandom;
use rand::Rng;

/// A non-identity Hanoi generator with `q` inactive pegs.
pub fn random_generator_with(rng: &mut impl Rng, k: usize, q: usize) -> HanoiGenerator {
    assert!(q + 2 <= k);
    let mut letters: Vec<Letter> = (0..k as Letter).collect();
    letters.shuffle(rng);
    let (inactive, active) = letters.split_at(q);
    loop {
        let mut images: Vec<Letter> = (0..k as Letter).collect();
        let mut shuffled = active.to_vec();
        shuffled.shuffle(rng);
        for (&from, &to) in active.iter().zip(&shuffled) {
            images[from as usize] = to;
        }
        let perm = Permutation::from_images(images).unwrap();
        if !perm.is_identity() {
            return HanoiGenerator::new(k, inactive, perm).unwrap();
        }
    }
}

/// A Hanoi generator with a random, possibly empty, inactive set.
pub fn random_generator(rng: &mut impl Rng, k: usize) -> HanoiGenerator {
    let q = rng.gen_range(0..=k - 2);
    random_generator_with(rng, k, q)
}

pub fn inverse(g: &HanoiGenerator) -> HanoiGenerator {
    HanoiGenerator::new(g.k(), &g.inactive(), g.perm().inverse()).unwrap()
}

/// Factors listed leftmost first.
pub fn product(k: usize, factors: &[TreeAutomorphism]) -> TreeAutomorphism {
    factors
        .iter()
        .fold(TreeAutomorphism::identity(k), |acc, f| {
            acc.compose(f).unwrap()
        })
}

/// A random set of generators from the families with nonempty inactive sets.
pub fn random_set_nonempty_inactive(rng: &mut impl Rng, k: usize, count: usize) -> GeneratorSet {
    let gens = (0..count)
        .map(|_| {
            let q = rng.gen_range(1..=k - 2);
            random_generator_with(rng, k, q)
        })
        .collect();
    GeneratorSet::from_generators(k, gens).unwrap()
}
