//! The collapsed network `H'_n`, its realization as a minor of `H_n`, the
//! node correspondence with the initial segment of HN3, and the metric
//! distortion of that correspondence.
//!
//! `H'_n` has `2^{n+1} − 1` nodes: `H'_1 = H_1` and `H'_n` is two copies of
//! `H'_{n−1}` (largest disk on peg 0 or 1) plus one node standing for every
//! state with the largest disk on peg 2. A node label reads like a state
//! word with `*` for positions that were collapsed, e.g. `*20`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::networks::hn::{build_hn3, HanoiNetwork};
use crate::networks::iso::{adjacency_from_pairs, find_isomorphism, is_isomorphism, Adjacency};
use crate::networks::states::{
    build_automaton_network_bounded, state_index, AutomatonNetwork, DEFAULT_DISK_BOUND,
};
use crate::perm::Letter;

#[derive(Debug, Clone)]
pub struct MinorNetwork {
    pub n: usize,
    pub graph: WeightedGraph,
    /// Disk number of the HN3 node each vertex corresponds to.
    pub disks: Vec<u32>,
}

impl MinorNetwork {
    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.graph.labels().iter().position(|l| l == label)
    }

    /// The states of `H_n` collapsed into node `v`, as state indices.
    pub fn blob(&self, v: usize) -> Vec<usize> {
        blob_of_label(self.graph.label(v))
    }

    /// The state standing for node `v`: collapsed positions filled with 2.
    pub fn representative(&self, v: usize) -> usize {
        let word: Vec<Letter> = self
            .graph
            .label(v)
            .bytes()
            .map(|c| if c == b'*' { 2 } else { c - b'0' })
            .collect();
        state_index(&word)
    }
}

/// Node of `H'_n` containing a state: scanning from the largest disk, the
/// first disk on peg 2 collapses every smaller position.
pub fn collapse_label(word: &[Letter]) -> String {
    let mut out: Vec<u8> = word.iter().map(|&x| b'0' + x).collect();
    if let Some(j) = word.iter().rposition(|&x| x == 2) {
        for c in &mut out[..j] {
            *c = b'*';
        }
    }
    String::from_utf8(out).expect("ascii")
}

fn blob_of_label(label: &str) -> Vec<usize> {
    let free = label.bytes().filter(|&c| c == b'*').count();
    let fixed: Vec<u8> = label.bytes().collect();
    (0..3usize.pow(free as u32))
        .map(|mut i| {
            let word: Vec<Letter> = fixed
                .iter()
                .map(|&c| {
                    if c == b'*' {
                        let x = (i % 3) as Letter;
                        i /= 3;
                        x
                    } else {
                        c - b'0'
                    }
                })
                .collect();
            state_index(&word)
        })
        .collect()
}

fn disk_of_label(label: &str) -> u32 {
    match label.find('2') {
        Some(j) => j as u32 + 2,
        None => 1,
    }
}

/// `H'_n` by the two-copies-plus-one-node recursion.
pub fn build_minor(n: usize) -> Result<MinorNetwork> {
    if n == 0 {
        return Err(Error::Precondition("need at least one disk".into()));
    }
    let mut labels: Vec<String> = vec!["0".into(), "1".into(), "2".into()];
    let mut edges: Vec<(usize, usize, &'static str)> =
        vec![(0, 2, "backbone"), (2, 1, "backbone"), (0, 1, "jump")];
    for level in 2..=n {
        let half = labels.len();
        let top_prev = format!("{}2", "*".repeat(level - 2));
        let mut next: Vec<String> = labels.iter().map(|l| format!("{l}0")).collect();
        next.extend(labels.iter().map(|l| format!("{l}1")));
        next.push(format!("{}2", "*".repeat(level - 1)));
        let mut next_edges: Vec<_> = edges.clone();
        next_edges.extend(edges.iter().map(|&(u, v, k)| (u + half, v + half, k)));
        let find = |s: &str| next.iter().position(|l| l == s).expect("label present");
        let top = 2 * half;
        next_edges.push((
            find(&format!("{}0", "1".repeat(level - 1))),
            top,
            "backbone",
        ));
        next_edges.push((
            top,
            find(&format!("{}1", "0".repeat(level - 1))),
            "backbone",
        ));
        next_edges.push((
            find(&format!("{top_prev}0")),
            find(&format!("{top_prev}1")),
            "jump",
        ));
        labels = next;
        edges = next_edges;
    }
    let length = 1.0 / ((1u64 << n) - 1) as f64;
    let disks = labels.iter().map(|l| disk_of_label(l)).collect();
    let mut graph = WeightedGraph::with_nodes(false, labels);
    for (u, v, kind) in edges {
        graph.add_edge(u, v, length, "", kind);
    }
    Ok(MinorNetwork { n, graph, disks })
}

/// Planar coordinates of the representatives.
pub fn minor_coordinates(minor: &MinorNetwork, h: &AutomatonNetwork) -> Vec<[f64; 2]> {
    (0..minor.node_count())
        .map(|v| h.coords[minor.representative(v)])
        .collect()
}

#[derive(Debug, Clone)]
pub struct MinorCheck {
    pub n: usize,
    /// Blobs are disjoint and cover every state of `H_n`.
    pub partition: bool,
    /// Each blob induces a connected subgraph of `H_n`.
    pub connected: bool,
    /// Blob of a disk-number-`d` node has `3^{d−2}` states when `d > 1`.
    pub sizes: bool,
    /// Edges of `H'_n` with no `H_n` edge between their blobs.
    pub missing: Vec<(usize, usize)>,
    /// Blob pairs joined in `H_n` that are not edges of `H'_n`; these are
    /// the deleted edges.
    pub deleted: Vec<(usize, usize)>,
}

impl MinorCheck {
    pub fn is_minor(&self) -> bool {
        self.partition && self.connected && self.missing.is_empty()
    }
}

/// Contracts the blobs of `H_n` and compares the quotient with `H'_n`.
pub fn check_minor(n: usize) -> Result<MinorCheck> {
    let h = build_automaton_network_bounded(n, DEFAULT_DISK_BOUND)?;
    let minor = build_minor(n)?;
    let total = h.state_count();
    let mut owner = vec![usize::MAX; total];
    let mut partition = true;
    let mut sizes = true;
    for v in 0..minor.node_count() {
        let blob = minor.blob(v);
        let d = minor.disks[v];
        if d > 1 && blob.len() != 3usize.pow(d - 2) {
            sizes = false;
        }
        for s in blob {
            if owner[s] != usize::MAX {
                partition = false;
            }
            owner[s] = v;
        }
    }
    if owner.contains(&usize::MAX) {
        partition = false;
    }
    for (s, &o) in owner.iter().enumerate() {
        let label = collapse_label(&h.word(s));
        if o == usize::MAX || minor.graph.label(o) != label {
            partition = false;
        }
    }
    let adj = h.graph.adjacency();
    let mut connected = true;
    for v in 0..minor.node_count() {
        let blob = minor.blob(v);
        let inside: BTreeSet<usize> = blob.iter().copied().collect();
        let mut seen = BTreeSet::from([blob[0]]);
        let mut queue = VecDeque::from([blob[0]]);
        while let Some(u) = queue.pop_front() {
            for &(w, _) in &adj[u] {
                if inside.contains(&w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        connected &= seen.len() == inside.len();
    }
    let quotient: BTreeSet<(usize, usize)> = h
        .graph
        .edges()
        .iter()
        .filter_map(|e| {
            let (a, b) = (owner.get(e.u).copied()?, owner.get(e.v).copied()?);
            (a != b && a != usize::MAX && b != usize::MAX).then(|| (a.min(b), a.max(b)))
        })
        .collect();
    let target = minor.graph.edge_set();
    Ok(MinorCheck {
        n,
        partition,
        connected,
        sizes,
        missing: target.difference(&quotient).copied().collect(),
        deleted: quotient.difference(&target).copied().collect(),
    })
}

/// `HN3_n`: the first `2^{n+1} − 1` nodes of HN3, whose middle node has
/// disk number `n + 1`.
pub fn hn3_segment(n: usize) -> Result<HanoiNetwork> {
    if n == 0 || n > 40 {
        return Err(Error::Precondition(format!("level {n} out of range")));
    }
    build_hn3((1usize << (n + 1)) - 1)
}

/// Image in `H'_n` of HN3 node `m` (1-based): the left half goes to the
/// peg-0 copy, the middle node to the collapsed node and the right half to
/// the peg-1 copy, anchored so the ends map to `0ⁿ` and `1ⁿ`.
pub fn correspondence_label(n: usize, m: u64) -> String {
    if n == 1 {
        return match m {
            1 => "0".into(),
            2 => "2".into(),
            _ => "1".into(),
        };
    }
    let middle = 1u64 << n;
    if m < middle {
        format!("{}0", correspondence_label(n - 1, m))
    } else if m == middle {
        format!("{}2", "*".repeat(n - 1))
    } else {
        format!("{}1", correspondence_label(n - 1, m - middle))
    }
}

fn simple(g: &WeightedGraph) -> Adjacency {
    adjacency_from_pairs(g.node_count(), g.edge_set())
}

#[derive(Debug, Clone)]
pub struct IsomorphismReport {
    pub n: usize,
    pub nodes: usize,
    /// HN3 node index (0-based) to `H'_n` node index.
    pub mapping: Vec<usize>,
    pub constructive: bool,
    pub oracle: bool,
    pub degree_sequences_equal: bool,
    /// Disk numbers agree along the constructive mapping.
    pub disks_preserved: bool,
}

impl IsomorphismReport {
    pub fn holds(&self) -> bool {
        self.constructive && self.oracle && self.degree_sequences_equal
    }
}

pub fn verify_isomorphism(n: usize) -> Result<IsomorphismReport> {
    let hn3 = hn3_segment(n)?;
    let minor = build_minor(n)?;
    let index: BTreeMap<&str, usize> = minor
        .graph
        .labels()
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let mapping: Vec<usize> = hn3
        .nodes
        .iter()
        .map(|&m| {
            let label = correspondence_label(n, m as u64);
            index.get(label.as_str()).copied().unwrap_or(usize::MAX)
        })
        .collect();
    let a = simple(&hn3.graph);
    let b = simple(&minor.graph);
    let constructive = is_isomorphism(&a, &b, &mapping);
    let oracle = find_isomorphism(&a, &b).is_some_and(|m| is_isomorphism(&a, &b, &m));
    let mut da: Vec<usize> = a.iter().map(BTreeSet::len).collect();
    let mut db: Vec<usize> = b.iter().map(BTreeSet::len).collect();
    da.sort_unstable();
    db.sort_unstable();
    let disks_preserved = mapping
        .iter()
        .enumerate()
        .all(|(i, &j)| j != usize::MAX && hn3.disks[i] == minor.disks[j]);
    Ok(IsomorphismReport {
        n,
        nodes: hn3.nodes.len(),
        mapping,
        constructive,
        oracle,
        degree_sequences_equal: da == db,
        disks_preserved,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionRow {
    pub u: i64,
    pub v: i64,
    pub kind: String,
    pub hn3_length: f64,
    /// Larger disk number of the two endpoints.
    pub disk: u32,
    /// Fewest `H_n` edges between the two blobs.
    pub blob_edges: usize,
    /// `H_n` edges between the two representatives.
    pub representative_edges: usize,
    /// `representative_edges · edge_length / hn3_length`.
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct DistortionReport {
    pub n: usize,
    pub edge_length: f64,
    pub rows: Vec<DistortionRow>,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

impl DistortionReport {
    /// `2^{−n+1}`.
    pub fn bound(&self) -> f64 {
        2f64.powi(1 - self.n as i32)
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("u,v,kind,hn3_length,disk,blob_edges,representative_edges,ratio\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{:.15}\n",
                r.u,
                r.v,
                r.kind,
                r.hn3_length,
                r.disk,
                r.blob_edges,
                r.representative_edges,
                r.ratio
            ));
        }
        out
    }
}

fn bfs(adj: &[Vec<(usize, f64)>], sources: &[usize]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        for &(w, _) in &adj[u] {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Compares each HN3_n edge length with the `H_n` distance between the
/// corresponding nodes.
pub fn distortion_report(n: usize) -> Result<DistortionReport> {
    let iso = verify_isomorphism(n)?;
    if !iso.constructive {
        return Err(Error::Numerical(
            "constructive correspondence failed".into(),
        ));
    }
    let hn3 = hn3_segment(n)?;
    let minor = build_minor(n)?;
    let h = build_automaton_network_bounded(n, DEFAULT_DISK_BOUND)?;
    let adj = h.graph.adjacency();
    let mut rows = Vec::new();
    for e in hn3.graph.edges() {
        let (a, b) = (iso.mapping[e.u], iso.mapping[e.v]);
        let from_blob = bfs(&adj, &minor.blob(a));
        let blob_edges = minor
            .blob(b)
            .iter()
            .map(|&s| from_blob[s])
            .min()
            .unwrap_or(usize::MAX);
        let from_rep = bfs(&adj, &[minor.representative(a)]);
        let representative_edges = from_rep[minor.representative(b)];
        rows.push(DistortionRow {
            u: hn3.nodes[e.u],
            v: hn3.nodes[e.v],
            kind: e.kind.clone(),
            hn3_length: e.length,
            disk: hn3.disks[e.u].max(hn3.disks[e.v]),
            blob_edges,
            representative_edges,
            ratio: representative_edges as f64 * h.edge_length / e.length,
        });
    }
    let min_ratio = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(DistortionReport {
        n,
        edge_length: h.edge_length,
        rows,
        min_ratio,
        max_ratio,
    })
}
