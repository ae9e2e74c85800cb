use hanoi_core::hanoi::hanoi_towers;
use hanoi_core::networks::hn::{build_hn3, build_hn4, hn4_regularity_defects};
use hanoi_core::networks::iso::{adjacency_from_pairs, find_isomorphism, is_isomorphism};
use hanoi_core::networks::minor::{build_minor, hn3_segment, verify_isomorphism};
use hanoi_core::networks::sequence::{disk_sequence, optimal_sequence};
use hanoi_core::networks::states::build_automaton_network;
use hanoi_core::schreier::{optimal_move_count, schreier, DEFAULT_VERTEX_BOUND};

#[test]
fn sequence_lengths() {
    for n in 1..=12u32 {
        assert_eq!(
            optimal_sequence(n).len() as u128,
            optimal_move_count(n).unwrap()
        );
    }
    let s = disk_sequence(4095).unwrap();
    assert_eq!(s.values(), optimal_sequence(12).as_slice());
}

#[test]
fn state_network_copies() {
    // states with the largest disk on peg i span a copy of H_{n−1}
    for n in 2..=6 {
        let big = build_automaton_network(n).unwrap();
        let small = build_automaton_network(n - 1).unwrap();
        let block = small.state_count();
        let b = adjacency_from_pairs(block, small.graph.edge_set());
        for i in 0..3 {
            let pairs = big.graph.edge_set().into_iter().filter_map(|(u, v)| {
                let inside = |x: usize| x / block == i;
                (inside(u) && inside(v)).then(|| (u - i * block, v - i * block))
            });
            let a = adjacency_from_pairs(block, pairs);
            let identity: Vec<usize> = (0..block).collect();
            assert!(is_isomorphism(&a, &b, &identity), "n={n}, peg {i}");
        }
    }
}

#[test]
fn state_network_is_the_schreier_graph() {
    // H_n and the level-n Schreier graph of the 3-peg group share edges
    let set = hanoi_towers(3).unwrap();
    for n in 1..=5 {
        let h = build_automaton_network(n).unwrap();
        let g = schreier(&set, n, DEFAULT_VERTEX_BOUND).unwrap();
        let label_pairs = |graph: &hanoi_core::WeightedGraph| {
            graph
                .edge_set()
                .into_iter()
                .map(|(u, v)| {
                    let (a, b) = (graph.label(u).to_string(), graph.label(v).to_string());
                    if a < b {
                        (a, b)
                    } else {
                        (b, a)
                    }
                })
                .collect::<std::collections::BTreeSet<_>>()
        };
        assert_eq!(label_pairs(&h.graph), label_pairs(&g.graph), "n={n}");
    }
}

#[test]
fn degree_sequences_agree() {
    for n in 1..=10 {
        let report = verify_isomorphism(n).unwrap();
        assert!(report.degree_sequences_equal, "n={n}");
        assert!(report.constructive, "n={n}");
        assert!(report.disks_preserved, "n={n}");
    }
}

#[test]
fn oracle_finds_a_mapping() {
    for n in 1..=6 {
        let hn3 = hn3_segment(n).unwrap();
        let minor = build_minor(n).unwrap();
        let a = adjacency_from_pairs(hn3.graph.node_count(), hn3.graph.edge_set());
        let b = adjacency_from_pairs(minor.node_count(), minor.graph.edge_set());
        let m = find_isomorphism(&a, &b).unwrap();
        assert!(is_isomorphism(&a, &b, &m));
    }
}

#[test]
fn segment_middle_and_ends() {
    for n in 1..=6 {
        let hn3 = hn3_segment(n).unwrap();
        let len = hn3.nodes.len();
        assert_eq!(len, (1 << (n + 1)) - 1);
        assert_eq!(hn3.disks[len / 2], n as u32 + 1);
        let r = verify_isomorphism(n).unwrap();
        let minor = build_minor(n).unwrap();
        assert_eq!(minor.graph.label(r.mapping[0]), "0".repeat(n));
        assert_eq!(minor.graph.label(r.mapping[len - 1]), "1".repeat(n));
        assert_eq!(
            minor.graph.label(r.mapping[len / 2]),
            format!("{}2", "*".repeat(n - 1))
        );
    }
}

#[test]
fn truncations_are_consistent() {
    let big = build_hn3(200).unwrap();
    let small = build_hn3(60).unwrap();
    let inside: std::collections::BTreeSet<_> = big
        .edge_pairs()
        .into_iter()
        .filter(|&(_, b)| b <= 60)
        .collect();
    assert_eq!(inside, small.edge_pairs());
    assert!(hn4_regularity_defects(500).unwrap().is_empty());
    let hn4 = build_hn4(7).unwrap();
    assert_eq!(hn4.nodes.len(), 15);
}
