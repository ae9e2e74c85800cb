//! Level-n Schreier graphs of Hanoi groups and related game statistics.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{csv_field, WeightedGraph};
use crate::hanoi::{full_set, letters_of, GeneratorSet};
use crate::perm::{Letter, Word};

/// Default bound on the number of vertices `kⁿ`.
pub const DEFAULT_VERTEX_BOUND: usize = 1 << 22;

/// The graph on `Xⁿ` joining `w` and `s(w)` for every generator `s`.
/// Parallel edges are merged into one edge whose label lists every
/// generator; fixed points `s(w) = w` become loops of kind `loop`.
#[derive(Debug, Clone)]
pub struct SchreierGraph {
    pub k: usize,
    pub n: usize,
    pub graph: WeightedGraph,
    /// Generator names per edge, parallel to `graph.edges()`.
    pub edge_generators: Vec<Vec<String>>,
}

pub fn schreier(set: &GeneratorSet, n: usize, bound: usize) -> Result<SchreierGraph> {
    let k = set.k();
    if n == 0 {
        return Err(Error::Precondition("level must be at least 1".into()));
    }
    let count = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > bound as u128 {
        return Err(Error::SizeBound {
            needed: usize::try_from(count).unwrap_or(usize::MAX),
            bound,
        });
    }
    let count = count as usize;
    let gens = set.generators();
    // images[w][s] = s(w) as an index
    let images: Vec<Vec<usize>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let w = Word::from_index(k, n, i);
            gens.iter()
                .map(|g| g.automorphism.act(&w).expect("valid word").index(k))
                .collect()
        })
        .collect();
    let mut pairs: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
    for (w, row) in images.iter().enumerate() {
        for (s, &v) in row.iter().enumerate() {
            let key = (w.min(v), w.max(v));
            let names = pairs.entry(key).or_default();
            if !names.contains(&gens[s].name) {
                names.push(gens[s].name.clone());
            }
        }
    }
    let labels = (0..count)
        .map(|i| Word::from_index(k, n, i).to_string())
        .collect();
    let mut graph = WeightedGraph::with_nodes(false, labels);
    let mut edge_generators = Vec::with_capacity(pairs.len());
    for ((u, v), names) in pairs {
        let kind = if u == v { "loop" } else { "move" };
        graph.add_edge(u, v, 1.0, names.join(" "), kind);
        edge_generators.push(names);
    }
    Ok(SchreierGraph {
        k,
        n,
        graph,
        edge_generators,
    })
}

impl SchreierGraph {
    pub fn vertex_count(&self) -> usize {
        self.graph.node_count()
    }

    /// Edges between distinct vertices.
    pub fn move_count(&self) -> usize {
        self.graph.edges().iter().filter(|e| !e.is_loop()).count()
    }

    pub fn loop_count(&self) -> usize {
        self.graph.edges().iter().filter(|e| e.is_loop()).count()
    }

    pub fn is_connected(&self) -> bool {
        self.graph.is_connected()
    }

    /// Largest hop distance, or `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for s in 0..self.vertex_count() {
            for d in self.graph.hop_distances(s) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// Edge list with header `level,w,v,generator`, one row per generator.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,w,v,generator\n");
        for (e, names) in self.graph.edges().iter().zip(&self.edge_generators) {
            for name in names {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    self.n,
                    self.graph.label(e.u),
                    self.graph.label(e.v),
                    csv_field(name)
                );
            }
        }
        out
    }
}

pub fn is_connected(set: &GeneratorSet, n: usize, bound: usize) -> Result<bool> {
    Ok(schreier(set, n, bound)?.is_connected())
}

/// Whether the root permutations generate a transitive group on the
/// alphabet, with the orbit partition listed by least letter.
pub fn root_transitivity(set: &GeneratorSet) -> (bool, Vec<Vec<Letter>>) {
    let k = set.k();
    let mut orbit_id: Vec<usize> = (0..k).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for g in set.generators() {
            for x in 0..k as Letter {
                let y = g.generator.perm().apply(x) as usize;
                let (a, b) = (orbit_id[x as usize], orbit_id[y]);
                if a != b {
                    let m = a.min(b);
                    orbit_id[x as usize] = m;
                    orbit_id[y] = m;
                    changed = true;
                }
            }
        }
    }
    let mut orbits: BTreeMap<usize, u64> = BTreeMap::new();
    for (x, &id) in orbit_id.iter().enumerate() {
        *orbits.entry(id).or_default() |= 1 << x;
    }
    let orbits: Vec<Vec<Letter>> = orbits.into_values().map(letters_of).collect();
    debug_assert_eq!(
        orbits.iter().map(Vec::len).sum::<usize>(),
        full_set(k).count_ones() as usize
    );
    (orbits.len() == 1, orbits)
}

/// Length of an optimal solution from `h_n = 2h_{n−1} + 1`, `h_0 = 0`.
pub fn optimal_move_count(n: u32) -> Result<u128> {
    let mut h: u128 = 0;
    for _ in 0..n {
        h = h
            .checked_mul(2)
            .and_then(|x| x.checked_add(1))
            .ok_or_else(|| Error::Precondition(format!("move count for {n} disks overflows")))?;
    }
    Ok(h)
}
