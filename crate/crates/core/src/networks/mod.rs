//! The disk sequence, the networks HN3 and HN4, the 3-peg state networks
//! `H_n` and the correspondence between HN3 and collapsed state networks.

pub mod hn;
pub mod iso;
pub mod minor;
pub mod sequence;
pub mod states;

pub use hn::{build_hn3, build_hn4, HanoiNetwork, Variant};
pub use minor::{build_minor, check_minor, distortion_report, verify_isomorphism, MinorNetwork};
pub use sequence::{disk_sequence, DiskSequence};
pub use states::{build_automaton_network, AutomatonNetwork};
