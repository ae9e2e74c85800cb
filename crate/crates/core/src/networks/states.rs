//! The state network `H_n` of the 3-peg game with `n` disks and its planar
//! embedding by reflected copies.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::perm::Letter;

/// Largest `n` accepted by [`build_automaton_network`] unless a bound is
/// given explicitly.
pub const DEFAULT_DISK_BOUND: usize = 12;

/// `H_n`. State index `Σ x_t 3^{t−1}`, where `x_1` is the peg of the
/// smallest disk.
#[derive(Debug, Clone)]
pub struct AutomatonNetwork {
    pub n: usize,
    pub graph: WeightedGraph,
    pub coords: Vec<[f64; 2]>,
    pub edge_length: f64,
}

impl AutomatonNetwork {
    pub fn state_count(&self) -> usize {
        self.coords.len()
    }

    pub fn word(&self, index: usize) -> Vec<Letter> {
        state_word(self.n, index)
    }

    pub fn index_of(&self, word: &[Letter]) -> usize {
        state_index(word)
    }

    /// Index of `iⁿ`.
    pub fn corner(&self, i: Letter) -> usize {
        state_index(&vec![i; self.n])
    }

    /// `label,x,y` rows.
    pub fn coordinates_csv(&self) -> String {
        coordinates_csv(self.graph.labels(), &self.coords)
    }
}

pub fn coordinates_csv(labels: &[String], coords: &[[f64; 2]]) -> String {
    let mut out = String::from("label,x,y\n");
    for (l, c) in labels.iter().zip(coords) {
        out.push_str(&format!("{l},{:.15},{:.15}\n", c[0], c[1]));
    }
    out
}

pub fn state_word(n: usize, mut index: usize) -> Vec<Letter> {
    let mut w = Vec::with_capacity(n);
    for _ in 0..n {
        w.push((index % 3) as Letter);
        index /= 3;
    }
    w
}

pub fn state_index(word: &[Letter]) -> usize {
    word.iter().rev().fold(0, |acc, &x| acc * 3 + x as usize)
}

pub fn word_label(word: &[Letter]) -> String {
    word.iter().map(|x| char::from(b'0' + x)).collect()
}

/// Legal moves as pairs `(u, v, disk)` with `u < v`, disks numbered from 1.
pub fn legal_moves(n: usize) -> Vec<(usize, usize, usize)> {
    let total = 3usize.pow(n as u32);
    let mut out = Vec::new();
    for u in 0..total {
        let w = state_word(n, u);
        let mut top = [usize::MAX; 3];
        for (t, &x) in w.iter().enumerate().rev() {
            top[x as usize] = t;
        }
        for a in 0..3 {
            for b in 0..3 {
                if a != b && top[a] < top[b] {
                    let mut moved = w.clone();
                    moved[top[a]] = b as Letter;
                    let v = state_index(&moved);
                    if u < v {
                        out.push((u, v, top[a] + 1));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Coordinates with unit edges: `H_0` is a point and copy `i` of
/// `H_{n−1}` is reflected across the line through its corner `i` and then
/// translated to the outer corner `i`.
fn unit_coordinates(n: usize) -> Vec<[f64; 2]> {
    let h = 3f64.sqrt() / 2.0;
    let mut pos = vec![[0.0, 0.0]];
    for level in 1..=n {
        let s = ((1usize << (level - 1)) - 1) as f64;
        let corners = [[0.0, 0.0], [s, 0.0], [s / 2.0, s * h]];
        let shift = [[0.0, 0.0], [s + 1.0, 0.0], [(s + 1.0) / 2.0, (s + 1.0) * h]];
        let mut next = Vec::with_capacity(pos.len() * 3);
        for i in 0..3 {
            let c = corners[i];
            let mid = [
                (corners[(i + 1) % 3][0] + corners[(i + 2) % 3][0]) / 2.0,
                (corners[(i + 1) % 3][1] + corners[(i + 2) % 3][1]) / 2.0,
            ];
            let (dx, dy) = (mid[0] - c[0], mid[1] - c[1]);
            let norm = (dx * dx + dy * dy).sqrt();
            for p in &pos {
                let q = if norm == 0.0 {
                    *p
                } else {
                    let (ux, uy) = (dx / norm, dy / norm);
                    let (rx, ry) = (p[0] - c[0], p[1] - c[1]);
                    let dot = rx * ux + ry * uy;
                    [c[0] + 2.0 * dot * ux - rx, c[1] + 2.0 * dot * uy - ry]
                };
                next.push([q[0] + shift[i][0], q[1] + shift[i][1]]);
            }
        }
        pos = next;
    }
    pos
}

pub fn build_automaton_network(n: usize) -> Result<AutomatonNetwork> {
    build_automaton_network_bounded(n, DEFAULT_DISK_BOUND)
}

pub fn build_automaton_network_bounded(n: usize, bound: usize) -> Result<AutomatonNetwork> {
    if n == 0 {
        return Err(Error::Precondition("need at least one disk".into()));
    }
    if n > bound {
        return Err(Error::SizeBound { needed: n, bound });
    }
    let total = 3usize.pow(n as u32);
    let edge_length = 1.0 / ((1u64 << n) - 1) as f64;
    let labels = (0..total).map(|i| word_label(&state_word(n, i))).collect();
    let mut graph = WeightedGraph::with_nodes(false, labels);
    for (u, v, disk) in legal_moves(n) {
        let kind = if disk == n { "connector" } else { "move" };
        graph.add_edge(u, v, edge_length, format!("d{disk}"), kind);
    }
    let coords = unit_coordinates(n)
        .into_iter()
        .map(|[x, y]| [x * edge_length, y * edge_length])
        .collect();
    Ok(AutomatonNetwork {
        n,
        graph,
        coords,
        edge_length,
    })
}
