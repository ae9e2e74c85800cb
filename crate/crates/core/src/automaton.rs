//! Finite-state automorphisms of the rooted tree `X_k^*`.
//!
//! An automorphism is stored as the automaton of its sections: every state
//! carries a root permutation and one successor per letter, and state `0` is
//! the automorphism itself. Machines are always kept minimized with states
//! numbered in breadth-first order from the initial state, so two machines
//! define the same automorphism exactly when they are structurally equal.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Letter, Permutation, Word, MAX_K};

/// One state of a tree automorphism: its root permutation and its sections.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub perm: Permutation,
    pub next: Vec<usize>,
}

/// A finite-state automorphism of `X_k^*` in canonical form. The initial
/// state is always state `0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeAutomorphism {
    k: usize,
    states: Vec<State>,
}

/// Result of a bounded order search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    /// No power up to the bound was the identity.
    Unknown {
        bound: u64,
    },
}

impl TreeAutomorphism {
    pub fn identity(k: usize) -> Self {
        TreeAutomorphism {
            k,
            states: vec![State {
                perm: Permutation::identity(k),
                next: vec![0; k],
            }],
        }
    }

    /// Builds a machine from raw states and canonicalizes it.
    pub fn from_states(k: usize, states: Vec<State>, initial: usize) -> Result<Self> {
        if !(2..=MAX_K).contains(&k) {
            return Err(Error::InvalidAlphabet(k));
        }
        if initial >= states.len() {
            return Err(Error::InvalidAutomaton(format!(
                "initial state {initial} out of range"
            )));
        }
        for (i, s) in states.iter().enumerate() {
            if s.perm.k() != k || s.next.len() != k {
                return Err(Error::InvalidAutomaton(format!(
                    "state {i} does not match alphabet size {k}"
                )));
            }
            if let Some(&bad) = s.next.iter().find(|&&t| t >= states.len()) {
                return Err(Error::InvalidAutomaton(format!(
                    "state {i} points to missing state {bad}"
                )));
            }
        }
        Ok(canonicalize(k, &states, initial))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn root_perm(&self) -> &Permutation {
        &self.states[0].perm
    }

    pub fn is_identity(&self) -> bool {
        self.states.len() == 1 && self.states[0].perm.is_identity()
    }

    fn check_letter(&self, x: usize) -> Result<Letter> {
        if x < self.k {
            Ok(x as Letter)
        } else {
            Err(Error::LetterOutOfRange {
                letter: x,
                k: self.k,
            })
        }
    }

    fn check_same_alphabet(&self, other: &Self) -> Result<()> {
        if self.k != other.k {
            return Err(Error::AlphabetMismatch {
                left: self.k,
                right: other.k,
            });
        }
        Ok(())
    }

    /// The machine rooted at `state`.
    fn rooted_at(&self, state: usize) -> Self {
        if state == 0 {
            return self.clone();
        }
        canonicalize(self.k, &self.states, state)
    }

    /// The section `g|_x`.
    pub fn section(&self, x: usize) -> Result<Self> {
        let x = self.check_letter(x)?;
        Ok(self.rooted_at(self.states[0].next[x as usize]))
    }

    /// The section at a word, `g|_{x_n .. x_1}`, taken leftmost letter first.
    pub fn section_at_word(&self, w: &Word) -> Result<Self> {
        w.check(self.k)?;
        let mut state = 0;
        for &x in w.letters() {
            state = self.states[state].next[x as usize];
        }
        Ok(self.rooted_at(state))
    }

    /// Image of a word: `g(xw) = σ_g(x) g|_x(w)`.
    pub fn act(&self, w: &Word) -> Result<Word> {
        w.check(self.k)?;
        let mut state = 0;
        let mut out = Vec::with_capacity(w.len());
        for &x in w.letters() {
            let s = &self.states[state];
            out.push(s.perm.apply(x));
            state = s.next[x as usize];
        }
        Ok(Word(out))
    }

    /// The product `gh`, acting as `h` first and then `g`.
    pub fn compose(&self, h: &Self) -> Result<Self> {
        self.check_same_alphabet(h)?;
        if h.is_identity() {
            return Ok(self.clone());
        }
        if self.is_identity() {
            return Ok(h.clone());
        }
        let k = self.k;
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(0usize, 0usize)];
        index.insert((0, 0), 0);
        let mut states: Vec<State> = Vec::new();
        let mut cursor = 0;
        while cursor < pairs.len() {
            let (gs, hs) = pairs[cursor];
            cursor += 1;
            let g_state = &self.states[gs];
            let h_state = &h.states[hs];
            let perm = g_state.perm.after(&h_state.perm);
            let mut next = Vec::with_capacity(k);
            for x in 0..k {
                // (gh)|_x = g|_{σ_h(x)} h|_x
                let pair = (
                    g_state.next[h_state.perm.apply(x as Letter) as usize],
                    h_state.next[x],
                );
                let id = *index.entry(pair).or_insert_with(|| {
                    pairs.push(pair);
                    pairs.len() - 1
                });
                next.push(id);
            }
            states.push(State { perm, next });
        }
        Ok(canonicalize(k, &states, 0))
    }

    /// Product of a sequence `a_m .. a_1` (rightmost acts first). The empty
    /// product is the identity.
    pub fn product(k: usize, factors: &[&TreeAutomorphism]) -> Result<Self> {
        let mut acc = TreeAutomorphism::identity(k);
        for f in factors {
            acc = acc.compose(f)?;
        }
        Ok(acc)
    }

    pub fn inverse(&self) -> Self {
        // g^{-1} = σ^{-1} (.., (g|_{σ^{-1}(y)})^{-1}, ..)
        let states = self
            .states
            .iter()
            .map(|s| {
                let inv = s.perm.inverse();
                let next = (0..self.k)
                    .map(|y| s.next[inv.apply(y as Letter) as usize])
                    .collect();
                State { perm: inv, next }
            })
            .collect::<Vec<_>>();
        canonicalize(self.k, &states, 0)
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut result = TreeAutomorphism::identity(self.k);
        let mut square = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&square).expect("same alphabet");
            }
            e >>= 1;
            if e > 0 {
                square = square.compose(&square).expect("same alphabet");
            }
        }
        result
    }

    /// Semantic equality decided by bisimulation over the reachable pair
    /// closure. Independent of canonical numbering.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.check_same_alphabet(other)?;
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        seen.insert((0, 0));
        while let Some((a, b)) = queue.pop_front() {
            let sa = &self.states[a];
            let sb = &other.states[b];
            if sa.perm != sb.perm {
                return Ok(false);
            }
            for x in 0..self.k {
                let pair = (sa.next[x], sb.next[x]);
                if seen.insert(pair) {
                    queue.push_back(pair);
                }
            }
        }
        Ok(true)
    }

    /// Smallest `n >= 1` with `g^n = 1`, searched up to `bound`.
    pub fn order(&self, bound: u64) -> Order {
        let mut power = self.clone();
        for n in 1..=bound {
            if power.is_identity() {
                return Order::Finite(n);
            }
            power = power.compose(self).expect("same alphabet");
        }
        Order::Unknown { bound }
    }

    /// Order search with the default bound `10 * k!`.
    pub fn order_default(&self) -> Order {
        self.order(default_order_bound(self.k))
    }

    /// Section of a product, `(a_m .. a_1)|_j = a_m|_{j_m} .. a_1|_{j_1}`.
    /// `gens` is listed leftmost first (`a_m` first); the trajectory is
    /// returned in the order `j_1, .., j_m`, matching the factors reversed.
    ///
    /// Returns the section factors leftmost first (`a_m|_{j_m}` first).
    pub fn section_product(
        gens: &[TreeAutomorphism],
        j: usize,
    ) -> Result<(Vec<TreeAutomorphism>, Vec<Letter>)> {
        let first = gens
            .first()
            .ok_or_else(|| Error::Precondition("empty product".into()))?;
        let k = first.k;
        for g in gens {
            first.check_same_alphabet(g)?;
        }
        let mut letter = first.check_letter(j)?;
        let mut trajectory = Vec::with_capacity(gens.len());
        let mut factors = Vec::with_capacity(gens.len());
        for g in gens.iter().rev() {
            trajectory.push(letter);
            factors.push(g.section(letter as usize)?);
            letter = g.root_perm().apply(letter);
        }
        factors.reverse();
        debug_assert!(factors.iter().all(|f| f.k == k));
        Ok((factors, trajectory))
    }

    pub fn to_record(&self) -> AutomatonRecord {
        AutomatonRecord {
            k: self.k,
            states: self
                .states
                .iter()
                .map(|s| StateRecord {
                    perm: s
                        .perm
                        .cycles()
                        .into_iter()
                        .map(|c| c.into_iter().map(usize::from).collect())
                        .collect(),
                    next: s.next.clone(),
                })
                .collect(),
            initial: 0,
        }
    }

    pub fn from_record(record: &AutomatonRecord) -> Result<Self> {
        let states = record
            .states
            .iter()
            .map(|s| {
                Ok(State {
                    perm: Permutation::from_cycles(record.k, &s.perm)?,
                    next: s.next.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        TreeAutomorphism::from_states(record.k, states, record.initial)
    }

    /// Wreath-recursion rendering of every state, e.g.
    /// `g0 = (0 1)(1, 1, g0)`. The identity state is written `1`.
    pub fn to_wreath_string(&self) -> String {
        let name = |i: usize| -> String {
            let s = &self.states[i];
            if s.perm.is_identity() && s.next.iter().all(|&t| t == i) {
                "1".to_string()
            } else {
                format!("g{i}")
            }
        };
        let mut lines = Vec::new();
        for (i, s) in self.states.iter().enumerate() {
            let this = name(i);
            if this == "1" {
                continue;
            }
            let sections: Vec<String> = s.next.iter().map(|&t| name(t)).collect();
            lines.push(format!("{this} = {}({})", s.perm, sections.join(", ")));
        }
        if lines.is_empty() {
            "1".to_string()
        } else {
            lines.join("\n")
        }
    }
}

impl fmt::Debug for TreeAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TreeAutomorphism[k={}] {{ ", self.k)?;
        for (i, s) in self.states.iter().enumerate() {
            write!(f, "{i}: {} -> {:?}; ", s.perm, s.next)?;
        }
        f.write_str("}")
    }
}

pub fn default_order_bound(k: usize) -> u64 {
    let fact: u64 = (1..=k as u64).product();
    10 * fact
}

/// Restricts to states reachable from `initial`, merges bisimilar states by
/// iterated partition refinement and renumbers in breadth-first order.
fn canonicalize(k: usize, states: &[State], initial: usize) -> TreeAutomorphism {
    // reachable states, in BFS order
    let mut order = vec![initial];
    let mut local = HashMap::from([(initial, 0usize)]);
    let mut cursor = 0;
    while cursor < order.len() {
        let s = order[cursor];
        cursor += 1;
        for &t in &states[s].next {
            if let std::collections::hash_map::Entry::Vacant(e) = local.entry(t) {
                e.insert(order.len());
                order.push(t);
            }
        }
    }
    let n = order.len();
    let next: Vec<Vec<usize>> = order
        .iter()
        .map(|&s| states[s].next.iter().map(|t| local[t]).collect())
        .collect();
    let perms: Vec<&Permutation> = order.iter().map(|&s| &states[s].perm).collect();

    // initial partition by root permutation
    let mut class = vec![0usize; n];
    {
        let mut ids: HashMap<&Permutation, usize> = HashMap::new();
        for i in 0..n {
            let len = ids.len();
            class[i] = *ids.entry(perms[i]).or_insert(len);
        }
    }
    let mut count = class.iter().max().map_or(0, |m| m + 1);
    loop {
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut refined = vec![0usize; n];
        for i in 0..n {
            let sig = (class[i], next[i].iter().map(|&t| class[t]).collect());
            let len = ids.len();
            refined[i] = *ids.entry(sig).or_insert(len);
        }
        let new_count = ids.len();
        class = refined;
        if new_count == count {
            break;
        }
        count = new_count;
    }

    // renumber classes by BFS from the initial class
    let mut new_id = vec![usize::MAX; count];
    let mut rep = Vec::with_capacity(count);
    new_id[class[0]] = 0;
    rep.push(0usize);
    let mut cursor = 0;
    while cursor < rep.len() {
        let i = rep[cursor];
        cursor += 1;
        for &t in &next[i] {
            if new_id[class[t]] == usize::MAX {
                new_id[class[t]] = rep.len();
                rep.push(t);
            }
        }
    }
    let states = rep
        .iter()
        .map(|&i| State {
            perm: perms[i].clone(),
            next: next[i].iter().map(|&t| new_id[class[t]]).collect(),
        })
        .collect();
    debug_assert!(k >= 2);
    TreeAutomorphism { k, states }
}

/// Structured text form of an automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonRecord {
    pub k: usize,
    pub states: Vec<StateRecord>,
    pub initial: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateRecord {
    /// Root permutation as a list of cycles.
    pub perm: Vec<Vec<usize>>,
    pub next: Vec<usize>,
}
