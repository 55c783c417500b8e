use std::collections::VecDeque;

use proper_chordal::graph::{generate, parse_edge_list, write_edge_list, GraphKind};
use proper_chordal::oracle::random::random_connected_graph;
use proper_chordal::patterns::{builtin_pattern_set, exists_pattern_free_layout};
use proper_chordal::{Graph, VertexSet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn well_formed(g: &Graph) -> bool {
    g.vertices().all(|v| !g.has_edge(v, v) && g.adjacent(v).iter().all(|&u| g.has_edge(u, v)))
}

#[test]
fn generator_sizes() {
    let cases: Vec<(GraphKind, usize, usize)> = vec![
        (GraphKind::KSun(3), 6, 9),
        (GraphKind::KSun(5), 10, 20),
        (GraphKind::KFan(4), 6, 9),
        (GraphKind::KFan(5), 7, 11),
        (GraphKind::Cevenol, 8, 13),
        (GraphKind::Path(6), 6, 5),
        (GraphKind::Clique(5), 5, 10),
        (GraphKind::Star(6), 6, 5),
        (GraphKind::Fig8, 7, 10),
        (GraphKind::Fig9G, 8, 17),
        (GraphKind::Fig9GPrime, 8, 15),
    ];
    for (kind, n, m) in cases {
        let g = generate(kind).unwrap();
        assert_eq!((g.n(), g.edge_count()), (n, m), "{kind}");
        assert!(well_formed(&g));
    }
}

#[test]
fn random_families_are_well_formed() {
    for seed in 0..30 {
        for n in [1, 4, 9] {
            for kind in [GraphKind::TriviallyPerfect { seed, n }, GraphKind::ProperInterval { seed, n }] {
                let g = generate(kind).unwrap();
                assert_eq!(g.n(), n);
                assert!(well_formed(&g));
                assert_eq!(generate(kind).unwrap(), g);
            }
        }
    }
}

#[test]
fn proper_interval_graphs_have_proper_layouts() {
    let proper = builtin_pattern_set("proper").unwrap();
    for seed in 0..60 {
        for n in 1..=8 {
            let g = generate(GraphKind::ProperInterval { seed, n }).unwrap();
            assert!(exists_pattern_free_layout(&g, &proper).unwrap().is_some(), "seed {seed} n {n}");
        }
    }
}

fn reaches_all(g: &Graph) -> bool {
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &w in g.adjacent(u) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen.iter().all(|&s| s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn components_agree_with_traversal(edges in proptest::collection::vec((0usize..9, 0usize..9), 0..14)) {
        let mut g = Graph::empty(9);
        for (u, v) in edges {
            if u != v && !g.has_edge(u, v) {
                g.add_edge(u, v).unwrap();
            }
        }
        let comps = g.connected_components(&VertexSet::new());
        prop_assert_eq!(comps.len() == 1, reaches_all(&g));
        prop_assert_eq!(comps.iter().map(VertexSet::len).sum::<usize>(), 9);
        prop_assert!(comps.windows(2).all(|w| w[0].first() < w[1].first()));
    }

    #[test]
    fn edge_list_round_trip(seed in any::<u64>(), n in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_connected_graph(&mut rng, n, 0.4);
        let back = parse_edge_list(&write_edge_list(&g)).unwrap();
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }
}
