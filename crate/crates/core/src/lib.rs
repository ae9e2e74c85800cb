//! Hanoi automorphisms of rooted trees, contraction and nucleus
//! computation for Hanoi groups, Schreier graphs, analysis on the limit
//! spaces, and Hanoi networks.

pub mod automaton;
pub mod contraction;
pub mod error;
pub mod fractal;
pub mod graph;
pub mod hanoi;
pub mod networks;
pub mod notation;
pub mod perm;
pub mod schreier;

pub use automaton::{AutomatonRecord, Order, State, TreeAutomorphism};
pub use contraction::{Nucleus, StarViolation, Witness};
pub use error::{Error, Result};
pub use fractal::{AffineIfs, AffineMap, HarmonicStructure, LevelGraph, SimplexGeometry};
pub use graph::WeightedGraph;
pub use hanoi::{GeneratorSet, HanoiGenerator, NamedGenerator, Side, Symmetry};
pub use networks::{AutomatonNetwork, DiskSequence, HanoiNetwork, MinorNetwork};
pub use perm::{Alphabet, Letter, Permutation, Word};
