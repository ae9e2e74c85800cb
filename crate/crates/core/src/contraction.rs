//! Contraction test, nucleus enumeration, non-contraction witnesses, Moore
//! diagrams and asymptotic-equivalence patterns for Hanoi groups.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::{AutomatonRecord, TreeAutomorphism};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::hanoi::{full_set, letters_of, GeneratorSet, LetterSet};
use crate::perm::{Letter, Permutation};

/// Default cap on the number of canonical elements in an enumeration.
pub const DEFAULT_CAP: usize = 10_000;

/// Essential set, fixed letters and orbits of a subset of generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetAnalysis {
    pub indices: Vec<usize>,
    pub names: Vec<String>,
    /// Intersection of the inactive sets.
    pub essential: Vec<Letter>,
    /// Letters fixed by every root permutation.
    pub fixed: Vec<Letter>,
    /// Orbits of the group generated by the root permutations, by least
    /// element.
    pub orbits: Vec<Vec<Letter>>,
}

impl SubsetAnalysis {
    pub fn orbit_of(&self, j: Letter) -> &[Letter] {
        self.orbits
            .iter()
            .find(|o| o.contains(&j))
            .expect("orbits partition the alphabet")
    }
}

/// Orbits of `{0..k-1}` under the group generated by `perms`, restricted
/// to the letters of `within`.
fn orbits_within<'a>(
    k: usize,
    perms: impl Iterator<Item = &'a Permutation> + Clone,
    within: LetterSet,
) -> Vec<LetterSet> {
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = x;
        while parent[c] != r {
            let n = parent[c];
            parent[c] = r;
            c = n;
        }
        r
    }
    for p in perms {
        for x in letters_of(within) {
            let (a, b) = (
                find(&mut parent, x as usize),
                find(&mut parent, p.apply(x) as usize),
            );
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut by_root: BTreeMap<usize, LetterSet> = BTreeMap::new();
    for x in letters_of(within) {
        let r = find(&mut parent, x as usize);
        *by_root.entry(r).or_default() |= 1 << x;
    }
    let mut out: Vec<LetterSet> = by_root.into_values().collect();
    out.sort_by_key(|o| o.trailing_zeros());
    out
}

pub fn analyze_subset(set: &GeneratorSet, indices: &[usize]) -> SubsetAnalysis {
    let k = set.k();
    let gens = set.generators();
    let essential = indices.iter().fold(full_set(k), |acc, &i| {
        acc & gens[i].generator.inactive_set()
    });
    let perms = indices.iter().map(|&i| gens[i].generator.perm());
    let fixed: Vec<Letter> = (0..k as Letter)
        .filter(|&x| perms.clone().all(|p| p.fixes(x)))
        .collect();
    let orbits = orbits_within(k, perms, full_set(k))
        .into_iter()
        .map(letters_of)
        .collect();
    SubsetAnalysis {
        indices: indices.to_vec(),
        names: indices.iter().map(|&i| gens[i].name.clone()).collect(),
        essential: letters_of(essential),
        fixed,
        orbits,
    }
}

/// Generators with `q` inactive, for each letter `q`, with duplicates and
/// non-maximal sets removed. Every subset with nonempty essential set lies
/// inside one of these.
pub fn maximal_essential_subsets(set: &GeneratorSet) -> Vec<Vec<usize>> {
    let gens = set.generators();
    let mut candidates: BTreeSet<Vec<usize>> = BTreeSet::new();
    for q in 0..set.k() as Letter {
        let t: Vec<usize> = (0..gens.len())
            .filter(|&i| gens[i].generator.is_inactive(q))
            .collect();
        if !t.is_empty() {
            candidates.insert(t);
        }
    }
    let all: Vec<Vec<usize>> = candidates.into_iter().collect();
    all.iter()
        .filter(|t| {
            !all.iter()
                .any(|u| u.len() > t.len() && t.iter().all(|x| u.contains(x)))
        })
        .cloned()
        .collect()
}

/// A subset `T` with nonempty essential set and a letter `j` moved by `T`
/// whose orbit meets the inactive set of every member of `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarViolation {
    pub indices: Vec<usize>,
    pub names: Vec<String>,
    pub j: Letter,
    pub orbit: Vec<Letter>,
    pub essential: Vec<Letter>,
}

impl fmt::Display for StarViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T = {{{}}}, j = {}, orbit = {:?}, essential set = {:?}",
            self.names.join(", "),
            self.j,
            self.orbit,
            self.essential
        )
    }
}

/// Decides the orbit condition: for every subset `T` with nonempty
/// essential set and every `j` moved by `T`, some member of `T` has no
/// inactive peg in the orbit of `j`. Returns the first violation found, or
/// `None` when the condition holds.
///
/// The search is exact. A violation is a letter `q` and a set `O` of at
/// least two letters on which `{s : q ∈ Q_s, Q_s ∩ O ≠ ∅, σ_s(O) = O}` acts
/// transitively; such sets are found by repeatedly discarding generators
/// that miss the current orbit and splitting into finer orbits.
pub fn check_star(set: &GeneratorSet) -> Option<StarViolation> {
    let k = set.k();
    let gens = set.generators();
    for q in 0..k as Letter {
        let t: Vec<usize> = (0..gens.len())
            .filter(|&i| gens[i].generator.is_inactive(q))
            .collect();
        if t.is_empty() {
            continue;
        }
        let perms = t.iter().map(|&i| gens[i].generator.perm());
        for orbit in orbits_within(k, perms, full_set(k)) {
            if orbit.count_ones() >= 2 {
                if let Some((t, o)) = refine_violation(set, &t, orbit) {
                    return Some(violation(set, t, o));
                }
            }
        }
    }
    None
}

fn refine_violation(
    set: &GeneratorSet,
    t: &[usize],
    orbit: LetterSet,
) -> Option<(Vec<usize>, LetterSet)> {
    let gens = set.generators();
    let meeting: Vec<usize> = t
        .iter()
        .copied()
        .filter(|&i| gens[i].generator.inactive_set() & orbit != 0)
        .collect();
    if meeting.is_empty() {
        return None;
    }
    let parts = orbits_within(
        set.k(),
        meeting.iter().map(|&i| gens[i].generator.perm()),
        orbit,
    );
    if parts.len() == 1 {
        return Some((meeting, orbit));
    }
    parts
        .into_iter()
        .filter(|p| p.count_ones() >= 2)
        .find_map(|p| refine_violation(set, &meeting, p))
}

fn violation(set: &GeneratorSet, indices: Vec<usize>, orbit: LetterSet) -> StarViolation {
    let a = analyze_subset(set, &indices);
    StarViolation {
        names: a.names,
        j: orbit.trailing_zeros() as Letter,
        orbit: letters_of(orbit),
        essential: a.essential,
        indices,
    }
}

/// The orbit condition evaluated only on the maximal subsets `T_q`. This
/// is weaker than [`check_star`]: a violation can hide inside a proper
/// subset of a maximal one.
pub fn check_star_maximal(set: &GeneratorSet) -> Option<StarViolation> {
    let gens = set.generators();
    for t in maximal_essential_subsets(set) {
        let a = analyze_subset(set, &t);
        for j in 0..set.k() as Letter {
            if a.fixed.contains(&j) {
                continue;
            }
            let orbit = a.orbit_of(j);
            let escapes = t
                .iter()
                .any(|&i| orbit.iter().all(|&x| !gens[i].generator.is_inactive(x)));
            if !escapes {
                return Some(StarViolation {
                    names: a.names.clone(),
                    j,
                    orbit: orbit.to_vec(),
                    essential: a.essential.clone(),
                    indices: t,
                });
            }
        }
    }
    None
}

/// An element of an enumerated closure together with a shortest word in the
/// generators (indices into the generating set) that represents it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NucleusElement {
    pub automorphism: TreeAutomorphism,
    pub word: Vec<usize>,
}

/// A finite, state-closed set of automorphisms computed from a generating
/// set, sorted by canonical machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nucleus {
    k: usize,
    generator_names: Vec<String>,
    elements: Vec<NucleusElement>,
}

impl Nucleus {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[NucleusElement] {
        &self.elements
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn automorphisms(&self) -> BTreeSet<TreeAutomorphism> {
        self.elements
            .iter()
            .map(|e| e.automorphism.clone())
            .collect()
    }

    pub fn index_of(&self, g: &TreeAutomorphism) -> Option<usize> {
        self.elements
            .binary_search_by(|e| e.automorphism.cmp(g))
            .ok()
    }

    pub fn contains(&self, g: &TreeAutomorphism) -> bool {
        self.index_of(g).is_some()
    }

    /// Display name of an element: its word joined by `*`, or `1`.
    pub fn name(&self, index: usize) -> String {
        word_name(&self.generator_names, &self.elements[index].word)
    }

    pub fn is_state_closed(&self) -> bool {
        self.elements.iter().all(|e| {
            (0..self.k).all(|x| self.contains(&e.automorphism.section(x).expect("letter in range")))
        })
    }

    pub fn to_file(&self) -> NucleusFile {
        NucleusFile {
            k: self.k,
            generators: self.generator_names.clone(),
            elements: self
                .elements
                .iter()
                .enumerate()
                .map(|(i, e)| NucleusRecord {
                    name: self.name(i),
                    automaton: e.automorphism.to_record(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    /// Machines read back from a nucleus file, in file order.
    pub fn parse_json(text: &str) -> Result<Vec<TreeAutomorphism>> {
        let file: NucleusFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("nucleus file: {e}")))?;
        file.elements
            .iter()
            .map(|r| TreeAutomorphism::from_record(&r.automaton))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NucleusFile {
    pub k: usize,
    pub generators: Vec<String>,
    pub elements: Vec<NucleusRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NucleusRecord {
    pub name: String,
    pub automaton: AutomatonRecord,
}

pub fn word_name(names: &[String], word: &[usize]) -> String {
    if word.is_empty() {
        "1".into()
    } else {
        word.iter()
            .map(|&i| names[i].as_str())
            .collect::<Vec<_>>()
            .join("*")
    }
}

fn shortlex(a: &[usize], b: &[usize]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Breadth-first closure of the subgroup generated by `indices` under right
/// multiplication by generators. Generators have finite order, so positive
/// words reach every element. Each element keeps its shortlex-least word.
pub fn closure(set: &GeneratorSet, indices: &[usize], cap: usize) -> Result<Vec<NucleusElement>> {
    let gens = set.generators();
    let identity = TreeAutomorphism::identity(set.k());
    let mut seen: HashMap<TreeAutomorphism, usize> = HashMap::from([(identity.clone(), 0)]);
    let mut out = vec![NucleusElement {
        automorphism: identity,
        word: Vec::new(),
    }];
    let mut cursor = 0;
    while cursor < out.len() {
        let (g, word) = (out[cursor].automorphism.clone(), out[cursor].word.clone());
        cursor += 1;
        for &i in indices {
            let h = g.compose(&gens[i].automorphism)?;
            if seen.contains_key(&h) {
                continue;
            }
            if out.len() >= cap {
                return Err(Error::Overflow { cap });
            }
            seen.insert(h.clone(), out.len());
            let mut w = word.clone();
            w.push(i);
            out.push(NucleusElement {
                automorphism: h,
                word: w,
            });
        }
    }
    Ok(out)
}

/// The prenucleus: every element with a representation whose essential set
/// is nonempty, computed as the union of the subgroups generated by the
/// maximal subsets `T_q`. For a contracting group this is the nucleus;
/// otherwise the enumeration overflows `cap`.
pub fn prenucleus(set: &GeneratorSet, cap: usize) -> Result<Nucleus> {
    let subsets = maximal_essential_subsets(set);
    let parts: Vec<Result<Vec<NucleusElement>>> =
        subsets.par_iter().map(|t| closure(set, t, cap)).collect();
    let mut merged: BTreeMap<TreeAutomorphism, Vec<usize>> = BTreeMap::new();
    merged.insert(TreeAutomorphism::identity(set.k()), Vec::new());
    for part in parts {
        for e in part? {
            match merged.get_mut(&e.automorphism) {
                Some(w) => {
                    if shortlex(&e.word, w).is_lt() {
                        *w = e.word;
                    }
                }
                None => {
                    merged.insert(e.automorphism, e.word);
                }
            }
            if merged.len() > cap {
                return Err(Error::Overflow { cap });
            }
        }
    }
    Ok(Nucleus {
        k: set.k(),
        generator_names: set.generators().iter().map(|g| g.name.clone()).collect(),
        elements: merged
            .into_iter()
            .map(|(automorphism, word)| NucleusElement { automorphism, word })
            .collect(),
    })
}

/// For every prenucleus element, the least number of distinct generators in
/// a representation with nonempty essential set (0 for the identity).
/// Exponential in the size of the maximal subsets; meant for small sets.
pub fn distinct_generator_depth(
    set: &GeneratorSet,
    cap: usize,
) -> Result<BTreeMap<TreeAutomorphism, usize>> {
    let mut depth: BTreeMap<TreeAutomorphism, usize> = BTreeMap::new();
    for t in maximal_essential_subsets(set) {
        if t.len() > 20 {
            return Err(Error::SizeBound {
                needed: t.len(),
                bound: 20,
            });
        }
        for mask in 1u32..(1 << t.len()) {
            let sub: Vec<usize> = (0..t.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| t[b])
                .collect();
            let size = sub.len();
            for e in closure(set, &sub, cap)? {
                let d = if e.automorphism.is_identity() {
                    0
                } else {
                    size
                };
                depth
                    .entry(e.automorphism)
                    .and_modify(|v| *v = (*v).min(d))
                    .or_insert(d);
            }
        }
    }
    Ok(depth)
}

/// Word lengths over `S ∪ S⁻¹` of every element within `radius`.
pub fn word_length_ball(
    set: &GeneratorSet,
    radius: usize,
    cap: usize,
) -> Result<HashMap<TreeAutomorphism, usize>> {
    let mut steps: Vec<TreeAutomorphism> = Vec::new();
    for g in set.generators() {
        for h in [g.automorphism.clone(), g.automorphism.inverse()] {
            if !steps.contains(&h) {
                steps.push(h);
            }
        }
    }
    let identity = TreeAutomorphism::identity(set.k());
    let mut dist = HashMap::from([(identity.clone(), 0usize)]);
    let mut frontier = vec![identity];
    for r in 1..=radius {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &steps {
                let h = g.compose(s)?;
                if !dist.contains_key(&h) {
                    if dist.len() >= cap {
                        return Err(Error::Overflow { cap });
                    }
                    dist.insert(h.clone(), r);
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    Ok(dist)
}

/// Essential set of a representation given by generator indices.
pub fn essential_set(set: &GeneratorSet, word: &[usize]) -> LetterSet {
    word.iter().fold(full_set(set.k()), |acc, &i| {
        acc & set.generators()[i].generator.inactive_set()
    })
}

/// An element `g` with `σ_g` of order `n > 1`, a letter `i` fixed by `σ_g`
/// with `g|_i = g`, and a letter `j` with `gⁿ|_j = g^m`, `0 < |m| < n`.
/// Such an element forces every power of `g` into the nucleus, so the group
/// is not contracting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub g: TreeAutomorphism,
    pub word: Vec<String>,
    pub i: Letter,
    pub j: Letter,
    pub n: u64,
    pub m: i64,
}

impl Witness {
    pub fn verify(&self) -> bool {
        verify_witness(&self.g, self.i, self.j, self.m)
    }

    pub fn name(&self) -> String {
        self.word.join("*")
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "g = {}, i = {}, j = {}, n = {}, m = {}",
            self.name(),
            self.i,
            self.j,
            self.n,
            self.m
        )
    }
}

/// Checks the three witness conditions directly.
pub fn verify_witness(g: &TreeAutomorphism, i: Letter, j: Letter, m: i64) -> bool {
    let sigma = g.root_perm();
    let n = sigma.order();
    if n <= 1 || (i as usize) >= g.k() || (j as usize) >= g.k() {
        return false;
    }
    if m == 0 || m.unsigned_abs() >= n {
        return false;
    }
    if !sigma.fixes(i) || g.section(i as usize).ok().as_ref() != Some(g) {
        return false;
    }
    let gn = g.pow(n as i64);
    gn.section(j as usize).ok() == Some(g.pow(m))
}

/// First `(i, j, m)` making `g` a witness: `i` and `j` ascending, then
/// `m = 1, −1, 2, −2, ..`.
pub fn witness_indices(g: &TreeAutomorphism) -> Option<(Letter, Letter, u64, i64)> {
    let sigma = g.root_perm();
    let n = sigma.order();
    if n <= 1 {
        return None;
    }
    let k = g.k() as Letter;
    let has_i =
        (0..k).find(|&i| sigma.fixes(i) && g.section(i as usize).ok().as_ref() == Some(g))?;
    let gn = g.pow(n as i64);
    let powers: Vec<(i64, TreeAutomorphism)> = (1..n as i64)
        .flat_map(|m| [m, -m])
        .map(|m| (m, g.pow(m)))
        .collect();
    for j in 0..k {
        let s = gn.section(j as usize).expect("letter in range");
        if let Some((m, _)) = powers.iter().find(|(_, p)| *p == s) {
            return Some((has_i, j, n, *m));
        }
    }
    None
}

/// Searches products of non-identity generators of length `1..=depth`,
/// by increasing length and lexicographically in generator order, and
/// returns the first machine-verified witness.
pub fn find_witness(set: &GeneratorSet, depth: usize) -> Option<Witness> {
    let mut word = Vec::new();
    for len in 1..=depth {
        let identity = TreeAutomorphism::identity(set.k());
        if let Some(w) = search_words(set, &identity, &mut word, len) {
            return Some(w);
        }
    }
    None
}

fn search_words(
    set: &GeneratorSet,
    prefix: &TreeAutomorphism,
    word: &mut Vec<usize>,
    len: usize,
) -> Option<Witness> {
    let gens = set.generators();
    if word.len() == len {
        let (i, j, n, m) = witness_indices(prefix)?;
        let w = Witness {
            g: prefix.clone(),
            word: word.iter().map(|&x| gens[x].name.clone()).collect(),
            i,
            j,
            n,
            m,
        };
        return w.verify().then_some(w);
    }
    for (x, gen) in gens.iter().enumerate() {
        let g = prefix.compose(&gen.automorphism).expect("same alphabet");
        word.push(x);
        let found = search_words(set, &g, word, len);
        word.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Outcome of the contraction test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionReport {
    pub contracting: bool,
    pub violation: Option<StarViolation>,
    pub witness: Option<Witness>,
}

/// Decides contraction with the orbit condition and, for non-contracting
/// sets, searches for a witness up to `witness_depth`.
pub fn check_contraction(set: &GeneratorSet, witness_depth: usize) -> ContractionReport {
    match check_star(set) {
        None => ContractionReport {
            contracting: true,
            violation: None,
            witness: None,
        },
        Some(v) => ContractionReport {
            contracting: false,
            violation: Some(v),
            witness: find_witness(set, witness_depth),
        },
    }
}

/// Moore diagram: an edge `g → g|_x` labeled `x|σ_g(x)` for every element
/// and letter. Identity loops have kind `identity-loop`.
pub fn moore_diagram(nucleus: &Nucleus) -> Result<WeightedGraph> {
    let labels = (0..nucleus.len()).map(|i| nucleus.name(i)).collect();
    let mut graph = WeightedGraph::with_nodes(true, labels);
    for (u, x, y, v) in transitions(nucleus)? {
        let kind = if nucleus.elements[u].automorphism.is_identity() {
            "identity-loop"
        } else {
            "transition"
        };
        graph.add_edge(u, v, 1.0, format!("{x}|{y}"), kind);
    }
    Ok(graph)
}

fn transitions(nucleus: &Nucleus) -> Result<Vec<(usize, Letter, Letter, usize)>> {
    let mut out = Vec::new();
    for (u, e) in nucleus.elements.iter().enumerate() {
        for x in 0..nucleus.k as Letter {
            let s = e.automorphism.section(x as usize)?;
            let v = nucleus
                .index_of(&s)
                .ok_or_else(|| Error::Precondition("element set is not state-closed".into()))?;
            out.push((u, x, e.automorphism.root_perm().apply(x), v));
        }
    }
    Ok(out)
}

/// An eventually periodic pair of left-infinite sequences read off a path
/// in the Moore diagram: the cycle labels repeat forever on the left and
/// are followed by the suffix labels, which end at the identity (after
/// which any common word may follow).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EquivalencePattern {
    pub cycle: Vec<(Letter, Letter)>,
    pub suffix: Vec<(Letter, Letter)>,
}

impl EquivalencePattern {
    /// Whether the two sequences differ.
    pub fn is_nontrivial(&self) -> bool {
        self.cycle.iter().chain(&self.suffix).any(|(x, y)| x != y)
    }

    pub fn left(&self) -> (Vec<Letter>, Vec<Letter>) {
        (
            self.cycle.iter().map(|p| p.0).collect(),
            self.suffix.iter().map(|p| p.0).collect(),
        )
    }

    pub fn right(&self) -> (Vec<Letter>, Vec<Letter>) {
        (
            self.cycle.iter().map(|p| p.1).collect(),
            self.suffix.iter().map(|p| p.1).collect(),
        )
    }
}

impl fmt::Display for EquivalencePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |v: &[Letter]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let (lc, ls) = self.left();
        let (rc, rs) = self.right();
        write!(
            f,
            "(...[{}] {}, ...[{}] {})",
            word(&lc),
            word(&ls),
            word(&rc),
            word(&rs)
        )
    }
}

/// Eventually periodic representatives of the asymptotic equivalence
/// relation: every simple cycle of the Moore diagram followed by every
/// simple path from a cycle vertex to the identity. At most `cap` patterns
/// are produced; the flag reports truncation.
pub fn equivalence_patterns(
    nucleus: &Nucleus,
    cap: usize,
) -> Result<(BTreeSet<EquivalencePattern>, bool)> {
    let edges = transitions(nucleus)?;
    let n = nucleus.len();
    let mut out_edges: Vec<Vec<(Letter, Letter, usize)>> = vec![Vec::new(); n];
    for &(u, x, y, v) in &edges {
        out_edges[u].push((x, y, v));
    }
    let identity = nucleus
        .index_of(&TreeAutomorphism::identity(nucleus.k))
        .ok_or_else(|| Error::Precondition("identity missing".into()))?;

    // simple cycles as (vertices, labels), each rooted at its least vertex
    let mut cycles: Vec<Cycle> = Vec::new();
    let mut truncated = false;
    for s in 0..n {
        let mut verts = vec![s];
        let mut labels = Vec::new();
        let mut on_path = vec![false; n];
        on_path[s] = true;
        cycle_dfs(
            &out_edges,
            s,
            s,
            &mut verts,
            &mut labels,
            &mut on_path,
            &mut cycles,
            cap,
            &mut truncated,
        );
    }

    let mut patterns = BTreeSet::new();
    'outer: for (verts, labels) in &cycles {
        let len = verts.len();
        for r in 0..len {
            // rotate so the last cycle edge enters verts[r]
            let exit = verts[r];
            let cycle: Vec<(Letter, Letter)> = (0..len).map(|t| labels[(r + t) % len]).collect();
            let mut suffixes = Vec::new();
            let mut on_path = vec![false; n];
            on_path[exit] = true;
            suffix_dfs(
                &out_edges,
                exit,
                identity,
                &mut Vec::new(),
                &mut on_path,
                &mut suffixes,
                cap,
            );
            for suffix in suffixes {
                if patterns.len() >= cap {
                    truncated = true;
                    break 'outer;
                }
                patterns.insert(EquivalencePattern {
                    cycle: cycle.clone(),
                    suffix,
                });
            }
        }
    }
    Ok((patterns, truncated))
}

/// A simple cycle as (vertices, edge labels).
type Cycle = (Vec<usize>, Vec<(Letter, Letter)>);

#[allow(clippy::too_many_arguments)]
fn cycle_dfs(
    out: &[Vec<(Letter, Letter, usize)>],
    start: usize,
    u: usize,
    verts: &mut Vec<usize>,
    labels: &mut Vec<(Letter, Letter)>,
    on_path: &mut [bool],
    cycles: &mut Vec<Cycle>,
    cap: usize,
    truncated: &mut bool,
) {
    for &(x, y, v) in &out[u] {
        if cycles.len() >= cap {
            *truncated = true;
            return;
        }
        if v == start {
            // labels[t] is the edge leaving verts[t]
            let mut l = labels.clone();
            l.push((x, y));
            cycles.push((verts.clone(), l));
        } else if v > start && !on_path[v] {
            on_path[v] = true;
            verts.push(v);
            labels.push((x, y));
            cycle_dfs(
                out, start, v, verts, labels, on_path, cycles, cap, truncated,
            );
            labels.pop();
            verts.pop();
            on_path[v] = false;
        }
    }
}

fn suffix_dfs(
    out: &[Vec<(Letter, Letter, usize)>],
    u: usize,
    target: usize,
    labels: &mut Vec<(Letter, Letter)>,
    on_path: &mut [bool],
    found: &mut Vec<Vec<(Letter, Letter)>>,
    cap: usize,
) {
    if u == target {
        found.push(labels.clone());
        return;
    }
    for &(x, y, v) in &out[u] {
        if found.len() >= cap {
            return;
        }
        if !on_path[v] {
            on_path[v] = true;
            labels.push((x, y));
            suffix_dfs(out, v, target, labels, on_path, found, cap);
            labels.pop();
            on_path[v] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hanoi::{
        family_s, five_peg_rotational, hanoi_c, hanoi_towers, six_peg_dihedral, HanoiGenerator,
    };

    fn gen(k: usize, q: &[Letter], cycles: &str) -> HanoiGenerator {
        HanoiGenerator::new(k, q, Permutation::parse(k, cycles).unwrap()).unwrap()
    }

    fn set(k: usize, gens: &[(&str, &[Letter], &str)]) -> GeneratorSet {
        GeneratorSet::new(
            k,
            gens.iter()
                .map(|(n, q, c)| (n.to_string(), gen(k, q, c)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn subset_analysis() {
        let s = hanoi_towers(4).unwrap();
        // a01 and a12
        let a = analyze_subset(&s, &[0, 3]);
        assert_eq!(a.names, vec!["a01", "a12"]);
        assert_eq!(a.essential, vec![3]);
        assert_eq!(a.fixed, vec![3]);
        assert_eq!(a.orbits, vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn star_on_basic_sets() {
        assert!(check_star(&hanoi_towers(3).unwrap()).is_none());
        for k in 3..=6 {
            assert!(check_star(&hanoi_c(k).unwrap()).is_none(), "k={k}");
        }
        let s = set(4, &[("a", &[2, 3], "(0 1)"), ("b", &[0, 3], "(1 2)")]);
        let v = check_star(&s).unwrap();
        assert_eq!(v.names, vec!["a", "b"]);
        assert_eq!(v.j, 0);
        assert!(check_star(&five_peg_rotational()).is_none());
        assert!(check_star(&six_peg_dihedral()).is_none());
    }

    #[test]
    fn maximal_subsets_can_hide_violations() {
        let s = set(
            7,
            &[
                ("a", &[2, 3], "(0 1)"),
                ("b", &[0, 3], "(1 2)"),
                ("c", &[3, 6], "(4 5)"),
            ],
        );
        assert!(check_star_maximal(&s).is_none());
        let v = check_star(&s).unwrap();
        assert_eq!(v.names, vec!["a", "b"]);
        assert!(find_witness(&s, 2).is_some());
    }

    #[test]
    fn hanoi_three_nucleus() {
        let s = hanoi_towers(3).unwrap();
        let n = prenucleus(&s, DEFAULT_CAP).unwrap();
        assert_eq!(n.len(), 4);
        assert!(n.is_state_closed());
        let expected: BTreeSet<_> = s
            .generators()
            .iter()
            .map(|g| g.automorphism.clone())
            .chain([TreeAutomorphism::identity(3)])
            .collect();
        assert_eq!(n.automorphisms(), expected);
    }

    #[test]
    fn overflow_for_non_contracting() {
        let s = hanoi_towers(4).unwrap();
        assert_eq!(prenucleus(&s, 200), Err(Error::Overflow { cap: 200 }));
    }

    #[test]
    fn identity_only_group() {
        let s = GeneratorSet::new(3, vec![]).unwrap();
        let n = prenucleus(&s, DEFAULT_CAP).unwrap();
        assert_eq!(n.len(), 1);
        let m = moore_diagram(&n).unwrap();
        assert_eq!(m.node_count(), 1);
        assert_eq!(m.edge_count(), 3);
        assert!(m
            .edges()
            .iter()
            .all(|e| e.is_loop() && e.kind == "identity-loop"));
        let (p, truncated) = equivalence_patterns(&n, 100).unwrap();
        assert!(!truncated);
        assert_eq!(p.len(), 3);
        assert!(p.iter().all(|p| !p.is_nontrivial()));
    }

    #[test]
    fn hanoi_three_moore_and_patterns() {
        let n = prenucleus(&hanoi_towers(3).unwrap(), DEFAULT_CAP).unwrap();
        let m = moore_diagram(&n).unwrap();
        assert_eq!(m.node_count(), 4);
        assert_eq!(m.edge_count(), 12);
        let (patterns, _) = equivalence_patterns(&n, 1000).unwrap();
        let nontrivial: Vec<_> = patterns.iter().filter(|p| p.is_nontrivial()).collect();
        assert_eq!(nontrivial.len(), 6);
        for p in nontrivial {
            assert_eq!(p.cycle.len(), 1);
            assert_eq!(p.suffix.len(), 1);
            let (l, _) = p.cycle[0];
            let (i, j) = p.suffix[0];
            assert_eq!(p.cycle[0], (l, l));
            assert!(i != j && i != l && j != l);
        }
    }

    #[test]
    fn witness_for_hanoi_four() {
        let s = hanoi_towers(4).unwrap();
        let w = find_witness(&s, 2).unwrap();
        assert!(w.verify());
        assert_eq!(w.n, 3);
        let ab = s
            .get("a01")
            .unwrap()
            .automorphism
            .compose(&s.get("a12").unwrap().automorphism)
            .unwrap();
        assert!(verify_witness(&ab, 3, 0, 1));
        assert!(!verify_witness(&ab, 3, 0, 2));
        assert!(!verify_witness(&ab, 0, 0, 1));
    }

    #[test]
    fn no_witness_for_hanoi_three() {
        assert!(find_witness(&hanoi_towers(3).unwrap(), 4).is_none());
    }

    #[test]
    fn contraction_report() {
        let r = check_contraction(&hanoi_towers(3).unwrap(), 3);
        assert!(r.contracting && r.violation.is_none());
        let r = check_contraction(&hanoi_towers(4).unwrap(), 2);
        assert!(!r.contracting);
        assert!(r.witness.unwrap().verify());
    }

    #[test]
    fn hanoi_c_four_nucleus() {
        let s = hanoi_c(4).unwrap();
        let n = prenucleus(&s, DEFAULT_CAP).unwrap();
        assert_eq!(n.len(), 21);
        assert_eq!(
            n.automorphisms(),
            family_s(4, 1)
                .unwrap()
                .generator_set()
                .iter()
                .map(HanoiGenerator::to_automorphism)
                .collect()
        );
        let m = moore_diagram(&n).unwrap();
        assert!(m.degrees().iter().all(|&d| d == 4));
    }

    #[test]
    fn nucleus_json_round_trip() {
        let n = prenucleus(&hanoi_towers(3).unwrap(), DEFAULT_CAP).unwrap();
        let back = Nucleus::parse_json(&n.to_json()).unwrap();
        assert_eq!(back.into_iter().collect::<BTreeSet<_>>(), n.automorphisms());
    }
}
