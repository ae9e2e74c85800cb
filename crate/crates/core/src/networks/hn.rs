//! The networks HN3 (on the positive integers) and HN4 (on all integers).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::networks::sequence::disk_number;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Hn3,
    Hn4,
}

/// A truncated HN3 or HN4 network. Graph node `i` is the integer
/// `nodes[i]`; edge lengths are backbone distances.
#[derive(Debug, Clone)]
pub struct HanoiNetwork {
    pub variant: Variant,
    pub nodes: Vec<i64>,
    /// Disk number per node; 0 for the center of HN4.
    pub disks: Vec<u32>,
    pub graph: WeightedGraph,
}

impl HanoiNetwork {
    pub fn index_of(&self, n: i64) -> Option<usize> {
        let first = *self.nodes.first()?;
        let i = usize::try_from(n - first).ok()?;
        (i < self.nodes.len()).then_some(i)
    }

    /// Non-loop edges as sorted integer pairs.
    pub fn edge_pairs(&self) -> BTreeSet<(i64, i64)> {
        self.graph
            .edge_set()
            .into_iter()
            .map(|(u, v)| {
                let (a, b) = (self.nodes[u], self.nodes[v]);
                (a.min(b), a.max(b))
            })
            .collect()
    }

    pub fn edges_of_kind(&self, kind: &str) -> BTreeSet<(i64, i64)> {
        self.graph
            .edges()
            .iter()
            .filter(|e| e.kind == kind)
            .map(|e| {
                let (a, b) = (self.nodes[e.u], self.nodes[e.v]);
                (a.min(b), a.max(b))
            })
            .collect()
    }
}

/// Jump partners by the closed form `2^{i−1}(4j+1) ↔ 2^{i−1}(4j+3)`.
pub fn jump_partner(n: u64) -> u64 {
    let i = n.trailing_zeros();
    let odd = n >> i;
    if odd % 4 == 1 {
        n + (1 << (i + 1))
    } else {
        n - (1 << (i + 1))
    }
}

/// Jumps among `1..=len` from the defining condition: equal disk number
/// `i`, a node labeled `i+1` in between and none labeled `≥ i+2`.
pub fn jumps_by_definition(len: u64) -> BTreeSet<(u64, u64)> {
    let mut out = BTreeSet::new();
    for a in 1..=len {
        let i = disk_number(a);
        let mut max_between = 0;
        for b in a + 1..=len {
            let d = disk_number(b);
            if d == i && max_between == i + 1 {
                out.insert((a, b));
            }
            max_between = max_between.max(d);
            if max_between >= i + 2 {
                break;
            }
        }
    }
    out
}

fn push_jumps(g: &mut WeightedGraph, len: u64, index: impl Fn(i64) -> usize, sign: i64) {
    for a in 1..=len {
        let b = jump_partner(a);
        if a < b && b <= len {
            let l = (b - a) as f64;
            g.add_edge(
                index(sign * a as i64),
                index(sign * b as i64),
                l,
                format!("d{}", disk_number(a)),
                "jump",
            );
        }
    }
}

/// HN3 on `1..=len` with the jumps whose endpoints both lie in range.
pub fn build_hn3(len: usize) -> Result<HanoiNetwork> {
    if len == 0 {
        return Err(Error::Precondition("HN3 needs at least one node".into()));
    }
    let nodes: Vec<i64> = (1..=len as i64).collect();
    let disks = nodes.iter().map(|&n| disk_number(n as u64)).collect();
    let mut g = WeightedGraph::with_nodes(false, nodes.iter().map(i64::to_string).collect());
    for i in 1..len {
        g.add_edge(i - 1, i, 1.0, "", "backbone");
    }
    push_jumps(&mut g, len as u64, |n| n as usize - 1, 1);
    Ok(HanoiNetwork {
        variant: Variant::Hn3,
        nodes,
        disks,
        graph: g,
    })
}

/// HN4 on `−len..=len`: HN3 on both halves, an edge from each node to the
/// nearest same-label node on each side, and a loop at 0.
pub fn build_hn4(len: usize) -> Result<HanoiNetwork> {
    if len == 0 {
        return Err(Error::Precondition(
            "HN4 needs at least one node per side".into(),
        ));
    }
    let n = len as i64;
    let nodes: Vec<i64> = (-n..=n).collect();
    let disks = nodes
        .iter()
        .map(|&v| {
            if v == 0 {
                0
            } else {
                disk_number(v.unsigned_abs())
            }
        })
        .collect();
    let index = |v: i64| (v + n) as usize;
    let mut g = WeightedGraph::with_nodes(false, nodes.iter().map(i64::to_string).collect());
    for v in -n..n {
        g.add_edge(index(v), index(v + 1), 1.0, "", "backbone");
    }
    g.add_edge(index(0), index(0), 1.0, "", "loop");
    push_jumps(&mut g, len as u64, index, 1);
    push_jumps(&mut g, len as u64, index, -1);
    let mut present: BTreeSet<(i64, i64)> = BTreeSet::new();
    for e in g.edges() {
        if e.kind == "jump" {
            let (a, b) = (nodes[e.u], nodes[e.v]);
            present.insert((a.min(b), a.max(b)));
        }
    }
    // the nearest same-label node to the right is 2^i further on, except
    // across 0 where −2^{i−1} pairs with 2^{i−1}
    for v in -n..=n {
        if v == 0 {
            continue;
        }
        let step = 1i64 << disk_number(v.unsigned_abs());
        let w = if v == -(step / 2) { step / 2 } else { v + step };
        if w <= n && !present.contains(&(v, w)) {
            g.add_edge(
                index(v),
                index(w),
                (w - v) as f64,
                format!("d{}", disk_number(v.unsigned_abs())),
                "nearest",
            );
        }
    }
    Ok(HanoiNetwork {
        variant: Variant::Hn4,
        nodes,
        disks,
        graph: g,
    })
}

/// Nodes with `|n| ≤ radius` whose degree in a large enough HN4 is not 4,
/// loops counted twice.
pub fn hn4_regularity_defects(radius: usize) -> Result<Vec<i64>> {
    let net = build_hn4(radius.max(1) * 4)?;
    let r = radius as i64;
    Ok(net
        .nodes
        .iter()
        .zip(net.graph.degrees())
        .filter(|&(&v, d)| v.abs() <= r && d != 4)
        .map(|(&v, _)| v)
        .collect())
}
