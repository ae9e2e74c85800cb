//! Backtracking isomorphism search for simple undirected graphs, with
//! color refinement to restrict candidates.

use std::collections::{BTreeMap, BTreeSet};

/// Simple undirected graph on `0..n` as sorted neighbor sets.
pub type Adjacency = Vec<BTreeSet<usize>>;

pub fn adjacency_from_pairs(
    n: usize,
    pairs: impl IntoIterator<Item = (usize, usize)>,
) -> Adjacency {
    let mut adj = vec![BTreeSet::new(); n];
    for (u, v) in pairs {
        if u != v {
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    adj
}

/// Stable colors of both graphs from iterated degree refinement, using a
/// shared palette so colors are comparable across graphs.
fn refine(a: &Adjacency, b: &Adjacency) -> (Vec<usize>, Vec<usize>) {
    let mut ca: Vec<usize> = a.iter().map(BTreeSet::len).collect();
    let mut cb: Vec<usize> = b.iter().map(BTreeSet::len).collect();
    loop {
        let mut palette: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let signature = |adj: &Adjacency, c: &[usize], v: usize| {
            let mut around: Vec<usize> = adj[v].iter().map(|&w| c[w]).collect();
            around.sort_unstable();
            (c[v], around)
        };
        let sa: Vec<_> = (0..a.len()).map(|v| signature(a, &ca, v)).collect();
        let sb: Vec<_> = (0..b.len()).map(|v| signature(b, &cb, v)).collect();
        for s in sa.iter().chain(&sb) {
            let next = palette.len();
            palette.entry(s.clone()).or_insert(next);
        }
        let na: Vec<usize> = sa.iter().map(|s| palette[s]).collect();
        let nb: Vec<usize> = sb.iter().map(|s| palette[s]).collect();
        let classes = |c: &[usize]| c.iter().collect::<BTreeSet<_>>().len();
        let stable = classes(&na) == classes(&ca) && classes(&nb) == classes(&cb);
        ca = na;
        cb = nb;
        if stable {
            return (ca, cb);
        }
    }
}

/// An isomorphism `a → b` as a vector of images, if one exists.
pub fn find_isomorphism(a: &Adjacency, b: &Adjacency) -> Option<Vec<usize>> {
    let n = a.len();
    if n != b.len() {
        return None;
    }
    let edges = |g: &Adjacency| g.iter().map(BTreeSet::len).sum::<usize>();
    if edges(a) != edges(b) {
        return None;
    }
    let (ca, cb) = refine(a, b);
    let mut hist_a = ca.clone();
    let mut hist_b = cb.clone();
    hist_a.sort_unstable();
    hist_b.sort_unstable();
    if hist_a != hist_b {
        return None;
    }
    // match vertices in BFS order so each new vertex has a mapped neighbor
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut head = order.len();
        order.push(s);
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &w in &a[u] {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(a, b, &ca, &cb, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &Adjacency,
    b: &Adjacency,
    ca: &[usize],
    cb: &[usize],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    let anchor = a[v].iter().find(|&&w| map[w] != usize::MAX).copied();
    let candidates: Vec<usize> = match anchor {
        Some(w) => b[map[w]].iter().copied().collect(),
        None => (0..b.len()).collect(),
    };
    for c in candidates {
        if used[c] || cb[c] != ca[v] {
            continue;
        }
        let consistent = a[v]
            .iter()
            .filter(|&&w| map[w] != usize::MAX)
            .all(|&w| b[c].contains(&map[w]))
            && b[c].iter().filter(|&&x| used[x]).count()
                == a[v].iter().filter(|&&w| map[w] != usize::MAX).count();
        if !consistent {
            continue;
        }
        map[v] = c;
        used[c] = true;
        if extend(a, b, ca, cb, order, depth + 1, map, used) {
            return true;
        }
        map[v] = usize::MAX;
        used[c] = false;
    }
    false
}

/// Whether `map` sends edges to edges and non-edges to non-edges.
pub fn is_isomorphism(a: &Adjacency, b: &Adjacency, map: &[usize]) -> bool {
    if a.len() != b.len() || map.len() != a.len() {
        return false;
    }
    let mut hit = vec![false; b.len()];
    for &m in map {
        if m >= b.len() || std::mem::replace(&mut hit[m], true) {
            return false;
        }
    }
    (0..a.len())
        .all(|u| a[u].len() == b[map[u]].len() && a[u].iter().all(|&v| b[map[u]].contains(&map[v])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Adjacency {
        adjacency_from_pairs(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    #[test]
    fn cycles() {
        let a = cycle(7);
        let b = adjacency_from_pairs(7, [(0, 3), (3, 6), (6, 2), (2, 5), (5, 1), (1, 4), (4, 0)]);
        let m = find_isomorphism(&a, &b).unwrap();
        assert!(is_isomorphism(&a, &b, &m));
    }

    #[test]
    fn rejects() {
        // two triangles vs a hexagon: same degrees, refinement alone cannot tell
        let two = adjacency_from_pairs(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert!(find_isomorphism(&two, &cycle(6)).is_none());
        assert!(find_isomorphism(&cycle(5), &cycle(6)).is_none());
        let path = adjacency_from_pairs(4, [(0, 1), (1, 2), (2, 3)]);
        let star = adjacency_from_pairs(4, [(0, 1), (0, 2), (0, 3)]);
        assert!(find_isomorphism(&path, &star).is_none());
        assert!(!is_isomorphism(&path, &star, &[0, 1, 2, 3]));
    }

    #[test]
    fn petersen_relabeled() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let p = adjacency_from_pairs(10, outer.chain(spokes).chain(inner));
        let perm = [3, 7, 1, 9, 0, 5, 2, 8, 6, 4];
        let q = adjacency_from_pairs(
            10,
            p.iter()
                .enumerate()
                .flat_map(|(u, s)| s.iter().map(move |&v| (perm[u], perm[v]))),
        );
        let m = find_isomorphism(&p, &q).unwrap();
        assert!(is_isomorphism(&p, &q, &m));
    }
}
