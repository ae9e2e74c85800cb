//! Labeled graphs with positive edge lengths and their text exports.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
    pub label: String,
    pub kind: String,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// A graph on nodes `0..n` with string node labels. Parallel edges and
/// loops are allowed; loops never contribute to connectivity or distances.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    directed: bool,
    labels: Vec<String>,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    pub fn new(directed: bool) -> Self {
        WeightedGraph {
            directed,
            labels: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn with_nodes(directed: bool, labels: Vec<String>) -> Self {
        WeightedGraph {
            directed,
            labels,
            edges: Vec::new(),
        }
    }

    pub fn add_node(&mut self, label: impl Into<String>) -> usize {
        self.labels.push(label.into());
        self.labels.len() - 1
    }

    pub fn add_edge(
        &mut self,
        u: usize,
        v: usize,
        length: f64,
        label: impl Into<String>,
        kind: impl Into<String>,
    ) {
        assert!(
            u < self.labels.len() && v < self.labels.len(),
            "edge endpoint out of range"
        );
        self.edges.push(Edge {
            u,
            v,
            length,
            label: label.into(),
            kind: kind.into(),
        });
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Degree counting each loop twice (undirected) or out-degree (directed).
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| {
                if self.directed {
                    usize::from(e.u == v)
                } else {
                    usize::from(e.u == v) + usize::from(e.v == v)
                }
            })
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.node_count()];
        for e in &self.edges {
            d[e.u] += 1;
            if !self.directed {
                d[e.v] += 1;
            }
        }
        d
    }

    /// Neighbor lists with edge lengths, excluding loops. Undirected edges
    /// appear in both lists.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for e in self.edges.iter().filter(|e| !e.is_loop()) {
            adj[e.u].push((e.v, e.length));
            if !self.directed {
                adj[e.v].push((e.u, e.length));
            }
        }
        adj
    }

    /// Hop distances from `source`; `None` for unreachable nodes.
    pub fn hop_distances(&self, source: usize) -> Vec<Option<usize>> {
        let adj = self.adjacency();
        let mut dist = vec![None; self.node_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("visited");
            for &(v, _) in &adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Weighted shortest-path lengths from `source` (Dijkstra).
    pub fn distances(&self, source: usize) -> Vec<f64> {
        let adj = self.adjacency();
        let mut dist = vec![f64::INFINITY; self.node_count()];
        dist[source] = 0.0;
        let mut heap = BinaryHeap::from([Candidate(0.0, source)]);
        while let Some(Candidate(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &adj[u] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Candidate(nd, v));
                }
            }
        }
        dist
    }

    /// Connectivity of the underlying undirected graph, loops ignored.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Connected components of the underlying undirected graph, each sorted,
    /// listed by smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut adj = vec![Vec::new(); n];
        for e in self.edges.iter().filter(|e| !e.is_loop()) {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            let mut members = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        members.push(v);
                        stack.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Simple graph view: set of unordered (or ordered, if directed)
    /// non-loop node pairs.
    pub fn edge_set(&self) -> std::collections::BTreeSet<(usize, usize)> {
        self.edges
            .iter()
            .filter(|e| !e.is_loop())
            .map(|e| {
                if self.directed || e.u < e.v {
                    (e.u, e.v)
                } else {
                    (e.v, e.u)
                }
            })
            .collect()
    }

    pub fn to_dot(&self, name: &str) -> String {
        let (keyword, arrow) = if self.directed {
            ("digraph", "->")
        } else {
            ("graph", "--")
        };
        let mut out = format!("{keyword} {} {{\n", dot_id(name));
        for (i, l) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label={}];", dot_id(l));
        }
        for e in &self.edges {
            let mut attrs = vec![format!("label={}", dot_id(&e.label))];
            if !e.kind.is_empty() {
                attrs.push(format!("kind={}", dot_id(&e.kind)));
            }
            attrs.push(format!("len={}", e.length));
            if e.is_loop() {
                attrs.push("style=dashed".into());
            }
            let _ = writeln!(out, "  n{} {arrow} n{} [{}];", e.u, e.v, attrs.join(", "));
        }
        out.push_str("}\n");
        out
    }

    /// Edge list with header `u,v,length,label,kind`; nodes by label.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,v,length,label,kind\n");
        for e in &self.edges {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                csv_field(&self.labels[e.u]),
                csv_field(&self.labels[e.v]),
                e.length,
                csv_field(&e.label),
                csv_field(&e.kind)
            );
        }
        out
    }
}

#[derive(PartialEq)]
struct Candidate(f64, usize);

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // reversed so the max-heap pops the nearest node first
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

pub fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
