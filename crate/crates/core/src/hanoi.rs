//! Hanoi automorphisms, named generator families and symmetry closures.
//!
//! A Hanoi automorphism `a` is given by a set `Q_a` of inactive pegs and a
//! root permutation `σ_a` fixing `Q_a` pointwise. Its section at an
//! inactive peg is `a` itself and its section at an active peg is the
//! identity.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automaton::{State, TreeAutomorphism};
use crate::error::{Error, Result};
use crate::perm::{Letter, Permutation, MAX_K};

/// Bit set of letters; bit `x` is letter `x`.
pub type LetterSet = u64;

pub fn letters_of(set: LetterSet) -> Vec<Letter> {
    (0..64u8).filter(|&x| set >> x & 1 == 1).collect()
}

pub fn set_of(letters: impl IntoIterator<Item = Letter>) -> LetterSet {
    letters.into_iter().fold(0, |acc, x| acc | 1 << x)
}

pub fn full_set(k: usize) -> LetterSet {
    if k == 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// A Hanoi automorphism. The identity is normalized to an empty root
/// permutation with every peg inactive, so derived equality is equality of
/// automorphisms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HanoiGenerator {
    k: usize,
    inactive: LetterSet,
    perm: Permutation,
}

impl HanoiGenerator {
    pub fn new(k: usize, inactive: &[Letter], perm: Permutation) -> Result<Self> {
        if !(2..=MAX_K).contains(&k) {
            return Err(Error::InvalidAlphabet(k));
        }
        if perm.k() != k {
            return Err(Error::AlphabetMismatch {
                left: k,
                right: perm.k(),
            });
        }
        if let Some(&x) = inactive.iter().find(|&&x| x as usize >= k) {
            return Err(Error::LetterOutOfRange {
                letter: x as usize,
                k,
            });
        }
        if let Some(&x) = inactive.iter().find(|&&x| !perm.fixes(x)) {
            return Err(Error::InvalidGenerator(format!(
                "{perm} moves inactive peg {x}"
            )));
        }
        if perm.is_identity() {
            return Ok(HanoiGenerator::identity(k));
        }
        Ok(HanoiGenerator {
            k,
            inactive: set_of(inactive.iter().copied()),
            perm,
        })
    }

    pub fn identity(k: usize) -> Self {
        HanoiGenerator {
            k,
            inactive: full_set(k),
            perm: Permutation::identity(k),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    /// `Q_a` as a bit set.
    pub fn inactive_set(&self) -> LetterSet {
        self.inactive
    }

    pub fn inactive(&self) -> Vec<Letter> {
        letters_of(self.inactive)
    }

    /// `P_a`, the active pegs.
    pub fn active(&self) -> Vec<Letter> {
        letters_of(full_set(self.k) & !self.inactive)
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity()
    }

    pub fn is_inactive(&self, x: Letter) -> bool {
        self.inactive >> x & 1 == 1
    }

    pub fn to_automorphism(&self) -> TreeAutomorphism {
        if self.is_identity() {
            return TreeAutomorphism::identity(self.k);
        }
        let next = (0..self.k as Letter)
            .map(|x| if self.is_inactive(x) { 0 } else { 1 })
            .collect();
        let states = vec![
            State {
                perm: self.perm.clone(),
                next,
            },
            State {
                perm: Permutation::identity(self.k),
                next: vec![1; self.k],
            },
        ];
        TreeAutomorphism::from_states(self.k, states, 0).expect("well-formed generator machine")
    }

    /// Recognizes a Hanoi automorphism from its machine.
    pub fn from_automorphism(g: &TreeAutomorphism) -> Option<Self> {
        if g.is_identity() {
            return Some(HanoiGenerator::identity(g.k()));
        }
        let root = &g.states()[0];
        let mut inactive = Vec::new();
        for (x, &t) in root.next.iter().enumerate() {
            if t == 0 {
                inactive.push(x as Letter);
            } else if !g.states()[t].perm.is_identity()
                || g.states()[t].next.iter().any(|&u| u != t)
            {
                return None;
            }
        }
        HanoiGenerator::new(g.k(), &inactive, root.perm.clone()).ok()
    }

    /// The relabeled generator `φ · a` with inactive pegs `φ(Q_a)` and root
    /// permutation `φ σ_a φ⁻¹`.
    pub fn sym_action(&self, phi: &Permutation) -> Result<Self> {
        if phi.k() != self.k {
            return Err(Error::AlphabetMismatch {
                left: self.k,
                right: phi.k(),
            });
        }
        if self.is_identity() {
            return Ok(self.clone());
        }
        Ok(HanoiGenerator {
            k: self.k,
            inactive: set_of(self.inactive().into_iter().map(|x| phi.apply(x))),
            perm: self.perm.conjugate_by(phi),
        })
    }

    /// Canonical display name, e.g. `(0 1 2)[3 4]`.
    pub fn canonical_name(&self) -> String {
        if self.is_identity() {
            return "1".into();
        }
        let q: Vec<String> = self.inactive().iter().map(|x| x.to_string()).collect();
        format!("{}[{}]", self.perm, q.join(" "))
    }
}

impl fmt::Display for HanoiGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_name())
    }
}

impl fmt::Debug for HanoiGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HanoiGenerator[k={}] {}", self.k, self.canonical_name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGenerator {
    pub name: String,
    pub generator: HanoiGenerator,
    pub automorphism: TreeAutomorphism,
}

/// A finite generating set of Hanoi automorphisms. The identity is always a
/// member and is kept implicit; `generators()` lists the others in a fixed
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    k: usize,
    gens: Vec<NamedGenerator>,
}

impl GeneratorSet {
    /// Builds a set from named generators. Identity entries are dropped and
    /// repeated generators keep their first name.
    pub fn new(k: usize, named: Vec<(String, HanoiGenerator)>) -> Result<Self> {
        if !(2..=MAX_K).contains(&k) {
            return Err(Error::InvalidAlphabet(k));
        }
        let mut names = HashSet::new();
        let mut seen = HashSet::new();
        let mut gens = Vec::new();
        for (name, g) in named {
            if g.k() != k {
                return Err(Error::AlphabetMismatch {
                    left: k,
                    right: g.k(),
                });
            }
            if name.is_empty() || name == "1" || !names.insert(name.clone()) {
                return Err(Error::InvalidGenerator(format!(
                    "duplicate or reserved generator name {name:?}"
                )));
            }
            if g.is_identity() || !seen.insert(g.clone()) {
                continue;
            }
            let automorphism = g.to_automorphism();
            gens.push(NamedGenerator {
                name,
                generator: g,
                automorphism,
            });
        }
        Ok(GeneratorSet { k, gens })
    }

    /// A set whose generators are named canonically.
    pub fn from_generators(k: usize, gens: Vec<HanoiGenerator>) -> Result<Self> {
        let named = gens
            .into_iter()
            .filter(|g| !g.is_identity())
            .collect::<BTreeSet<_>>();
        let mut order: Vec<HanoiGenerator> = Vec::new();
        for g in named {
            order.push(g);
        }
        GeneratorSet::new(
            k,
            order.into_iter().map(|g| (g.canonical_name(), g)).collect(),
        )
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Non-identity generators in their fixed order.
    pub fn generators(&self) -> &[NamedGenerator] {
        &self.gens
    }

    /// Number of elements, counting the identity.
    pub fn size(&self) -> usize {
        self.gens.len() + 1
    }

    pub fn contains(&self, g: &HanoiGenerator) -> bool {
        g.is_identity() || self.gens.iter().any(|n| &n.generator == g)
    }

    pub fn get(&self, name: &str) -> Option<&NamedGenerator> {
        self.gens.iter().find(|n| n.name == name)
    }

    /// Generators as a set, ignoring names. Includes the identity.
    pub fn generator_set(&self) -> BTreeSet<HanoiGenerator> {
        let mut s: BTreeSet<_> = self.gens.iter().map(|n| n.generator.clone()).collect();
        s.insert(HanoiGenerator::identity(self.k));
        s
    }

    /// Subset containing the named generators, in this set's order.
    pub fn subset(&self, keep: &[usize]) -> GeneratorSet {
        GeneratorSet {
            k: self.k,
            gens: keep.iter().map(|&i| self.gens[i].clone()).collect(),
        }
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            k: self.k,
            generators: self
                .gens
                .iter()
                .map(|n| GeneratorRecord {
                    name: n.name.clone(),
                    cycles: n
                        .generator
                        .perm()
                        .cycles()
                        .into_iter()
                        .map(|c| c.into_iter().map(usize::from).collect())
                        .collect(),
                    inactive: n
                        .generator
                        .inactive()
                        .into_iter()
                        .map(usize::from)
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_file(file: &GroupFile) -> Result<Self> {
        let named = file
            .generators
            .iter()
            .map(|r| {
                let perm = Permutation::from_cycles(file.k, &r.cycles)?;
                let inactive = r
                    .inactive
                    .iter()
                    .map(|&x| {
                        if x < file.k {
                            Ok(x as Letter)
                        } else {
                            Err(Error::LetterOutOfRange {
                                letter: x,
                                k: file.k,
                            })
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((
                    r.name.clone(),
                    HanoiGenerator::new(file.k, &inactive, perm)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        GeneratorSet::new(file.k, named)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GroupFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("group file: {e}")))?;
        GeneratorSet::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }
}

/// Structured group definition file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub k: usize,
    pub generators: Vec<GeneratorRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub name: String,
    pub cycles: Vec<Vec<usize>>,
    #[serde(default)]
    pub inactive: Vec<usize>,
}

/// All permutations of `{0..k-1}` that fix every letter outside `movable`,
/// in lexicographic order of image tables.
fn perms_moving(k: usize, movable: &[Letter]) -> Vec<Permutation> {
    Permutation::all(movable.len())
        .into_iter()
        .map(|p| {
            let mut images: Vec<Letter> = (0..k as Letter).collect();
            for (i, &x) in movable.iter().enumerate() {
                images[x as usize] = movable[p.apply(i as Letter) as usize];
            }
            Permutation::from_images(images).expect("bijection")
        })
        .collect()
}

/// Subsets of `{0..k-1}` of size `q` in lexicographic order.
fn combinations(k: usize, q: usize) -> Vec<Vec<Letter>> {
    fn rec(start: usize, k: usize, q: usize, cur: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for x in start..k {
            if k - x < q - cur.len() {
                break;
            }
            cur.push(x as Letter);
            rec(x + 1, k, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, q, &mut Vec::new(), &mut out);
    out
}

/// Every Hanoi generator with exactly `inactive` as its inactive set.
fn generators_with_inactive(k: usize, inactive: &[Letter]) -> Vec<HanoiGenerator> {
    let q = set_of(inactive.iter().copied());
    let active = letters_of(full_set(k) & !q);
    perms_moving(k, &active)
        .into_iter()
        .filter(|p| !p.is_identity())
        .map(|p| HanoiGenerator {
            k,
            inactive: q,
            perm: p,
        })
        .collect()
}

/// `S_{k,q}`: every Hanoi generator with exactly `q` inactive pegs.
pub fn family_s(k: usize, q: usize) -> Result<GeneratorSet> {
    if !(2..=MAX_K).contains(&k) {
        return Err(Error::InvalidAlphabet(k));
    }
    if q > k {
        return Err(Error::Precondition(format!("q = {q} exceeds k = {k}")));
    }
    let gens = combinations(k, q)
        .iter()
        .flat_map(|c| generators_with_inactive(k, c))
        .map(|g| (g.canonical_name(), g))
        .collect();
    GeneratorSet::new(k, gens)
}

/// The Hanoi Towers generators `a_ij = (i j)` with every other peg inactive.
pub fn hanoi_towers(k: usize) -> Result<GeneratorSet> {
    if !(3..=MAX_K).contains(&k) {
        return Err(Error::Precondition(format!(
            "Hanoi Towers groups need k >= 3, got {k}"
        )));
    }
    let mut gens = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let perm = Permutation::from_cycles(k, &[[i, j]])?;
            let inactive: Vec<Letter> = (0..k as Letter)
                .filter(|&x| x as usize != i && x as usize != j)
                .collect();
            let name = if k > 10 {
                format!("a{i}_{j}")
            } else {
                format!("a{i}{j}")
            };
            gens.push((name, HanoiGenerator::new(k, &inactive, perm)?));
        }
    }
    GeneratorSet::new(k, gens)
}

/// `S_{k,1}`, the generators of the group with one inactive peg per move.
pub fn hanoi_c(k: usize) -> Result<GeneratorSet> {
    if k < 3 {
        return Err(Error::Precondition(format!("need k >= 3, got {k}")));
    }
    family_s(k, 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// σ fixes the `n−1` pegs below each inactive peg.
    Decreasing,
    /// σ fixes the `n−1` pegs above each inactive peg.
    Increasing,
}

/// Whether `g` satisfies both window conditions with the given side.
pub fn in_family_r(g: &HanoiGenerator, n: usize, side: Side) -> bool {
    if g.is_identity() {
        return true;
    }
    let k = g.k();
    let q = g.inactive();
    let window = (0..k).any(|m| {
        q.iter()
            .all(|&x| (1..=n).any(|t| (m + t) % k == x as usize))
    });
    let fixed = q.iter().all(|&i| {
        (1..n).all(|t| {
            let y = match side {
                Side::Decreasing => (i as usize + k - t % k) % k,
                Side::Increasing => (i as usize + t) % k,
            };
            g.perm().fixes(y as Letter)
        })
    });
    window && fixed
}

/// The rotational families: every Hanoi generator whose inactive pegs lie
/// among `n` cyclically adjacent pegs and whose root permutation fixes the
/// `n−1` neighbors of each inactive peg on the chosen side.
pub fn family_r(k: usize, n: usize, side: Side) -> Result<GeneratorSet> {
    if !(2..=MAX_K).contains(&k) {
        return Err(Error::InvalidAlphabet(k));
    }
    if 2 * n + 1 > k {
        return Err(Error::Precondition(format!(
            "need 2n + 1 <= k, got n = {n}, k = {k}"
        )));
    }
    let mut gens = Vec::new();
    for q in 0..=n {
        for inactive in combinations(k, q) {
            let q_set = set_of(inactive.iter().copied());
            let mut forced = q_set;
            for &i in &inactive {
                for t in 1..n {
                    let y = match side {
                        Side::Decreasing => (i as usize + k - t) % k,
                        Side::Increasing => (i as usize + t) % k,
                    };
                    forced |= 1 << y;
                }
            }
            let movable = letters_of(full_set(k) & !forced);
            for perm in perms_moving(k, &movable) {
                if perm.is_identity() {
                    continue;
                }
                let g = HanoiGenerator {
                    k,
                    inactive: q_set,
                    perm,
                };
                if in_family_r(&g, n, side) {
                    gens.push((g.canonical_name(), g));
                }
            }
        }
    }
    GeneratorSet::new(k, gens)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// All of `Sym(X_k)`.
    Full,
    /// Rotations `x -> x + 1 mod k` of the regular k-gon.
    Rotational,
    /// Rotations and the reflection `x -> -x mod k`.
    Dihedral,
}

impl Symmetry {
    /// Generators of the symmetry group acting on `{0..k-1}`.
    pub fn generators(self, k: usize) -> Vec<Permutation> {
        let rotation = Permutation::from_images((0..k).map(|x| ((x + 1) % k) as Letter).collect())
            .expect("rotation");
        match self {
            Symmetry::Full => (0..k - 1)
                .map(|i| Permutation::from_cycles(k, &[[i, i + 1]]).expect("transposition"))
                .collect(),
            Symmetry::Rotational => vec![rotation],
            Symmetry::Dihedral => {
                let reflection =
                    Permutation::from_images((0..k).map(|x| ((k - x) % k) as Letter).collect())
                        .expect("reflection");
                vec![rotation, reflection]
            }
        }
    }
}

/// Smallest superset of `set` closed under the symmetry group. Generators
/// already present keep their names; added ones are named canonically.
pub fn symmetry_closure(set: &GeneratorSet, symmetry: Symmetry) -> GeneratorSet {
    let k = set.k();
    let phis = symmetry.generators(k);
    let mut seen: HashSet<HanoiGenerator> = set
        .generators()
        .iter()
        .map(|n| n.generator.clone())
        .collect();
    let mut named: Vec<(String, HanoiGenerator)> = set
        .generators()
        .iter()
        .map(|n| (n.name.clone(), n.generator.clone()))
        .collect();
    let mut cursor = 0;
    while cursor < named.len() {
        let g = named[cursor].1.clone();
        cursor += 1;
        for phi in &phis {
            let h = g.sym_action(phi).expect("same alphabet");
            if seen.insert(h.clone()) {
                let mut name = h.canonical_name();
                while named.iter().any(|(n, _)| *n == name) {
                    name.push('\'');
                }
                named.push((name, h));
            }
        }
    }
    GeneratorSet::new(k, named).expect("closure of a valid set")
}

/// Resolves a family name such as `Hanoi(4)`, `S(4,1)`, `Hc(5)`,
/// `Runder(5,2)` or `Rover(5,2)`.
pub fn family_by_name(name: &str) -> Result<GeneratorSet> {
    let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let (head, args) = compact
        .strip_suffix(')')
        .and_then(|s| s.split_once('('))
        .ok_or_else(|| Error::Parse(format!("unknown group family {name:?}")))?;
    let args = args
        .split(',')
        .map(|a| {
            a.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad argument {a:?} in {name:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    match (head, args.as_slice()) {
        ("S", &[k, q]) => family_s(k, q),
        ("Hanoi", &[k]) => hanoi_towers(k),
        ("Hc", &[k]) => hanoi_c(k),
        ("Runder", &[k, n]) => family_r(k, n, Side::Decreasing),
        ("Rover", &[k, n]) => family_r(k, n, Side::Increasing),
        _ => Err(Error::Parse(format!("unknown group family {name:?}"))),
    }
}

/// The 5-peg rotationally symmetric example set `a = (0 1)(1, 1, 1, a, a)`
/// and its rotations.
pub fn five_peg_rotational() -> GeneratorSet {
    let k = 5;
    let gens = ["a", "b", "c", "d", "e"]
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let perm = Permutation::from_cycles(k, &[[i, (i + 1) % k]]).expect("transposition");
            let q = [((i + 3) % k) as Letter, ((i + 4) % k) as Letter];
            (
                name.to_string(),
                HanoiGenerator::new(k, &q, perm).expect("valid"),
            )
        })
        .collect();
    GeneratorSet::new(k, gens).expect("valid set")
}

/// The 6-peg dihedrally symmetric example set `a = (0 1)(1, 1, 1, a, a, 1)`
/// and its rotations.
pub fn six_peg_dihedral() -> GeneratorSet {
    let k = 6;
    let gens = ["a", "b", "c", "d", "e", "f"]
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let perm = Permutation::from_cycles(k, &[[i, (i + 1) % k]]).expect("transposition");
            let q = [((i + 3) % k) as Letter, ((i + 4) % k) as Letter];
            (
                name.to_string(),
                HanoiGenerator::new(k, &q, perm).expect("valid"),
            )
        })
        .collect();
    GeneratorSet::new(k, gens).expect("valid set")
}
