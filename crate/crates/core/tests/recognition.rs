use proper_chordal::graph::{generate, GraphKind};
use proper_chordal::oracle::catalog::{connected_graphs, free_trees};
use proper_chordal::oracle::random::{random_connected_graph, random_proper_chordal};
use proper_chordal::oracle::{brute_recognize, is_chordal_by_cycles, SearchBudget};
use proper_chordal::recognition::{recognize, recognize_with, Verdict};
use proper_chordal::{Graph, Strategy, VertexSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn accepted(g: &Graph) -> bool {
    recognize_with(g, Strategy::default(), true).unwrap().verdict == Verdict::ProperChordal
}

#[test]
fn catalog_matches_brute_force() {
    for n in 1..=7 {
        for g in connected_graphs(n) {
            let expected = brute_recognize(&g, SearchBudget::default()).unwrap();
            assert_eq!(accepted(&g), expected, "{:?}", g.edges().collect::<Vec<_>>());
        }
    }
}

#[test]
fn random_graphs_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..400 {
        let n = rng.gen_range(2..=8);
        let p = rng.gen_range(0.2..0.8);
        let g = random_connected_graph(&mut rng, n, p);
        assert_eq!(accepted(&g), brute_recognize(&g, SearchBudget::default()).unwrap());
    }
}

#[test]
fn verdict_independent_of_strategy() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let g = random_connected_graph(&mut rng, 7, 0.5);
        let seq = recognize_with(&g, Strategy::Sequential, false).unwrap();
        let par = recognize_with(&g, Strategy::Parallel, false).unwrap();
        assert_eq!(seq, par);
    }
}

#[test]
fn trees_are_accepted() {
    for n in 1..=10 {
        for t in free_trees(n) {
            assert!(accepted(&t));
        }
    }
}

#[test]
fn proper_interval_graphs_are_accepted() {
    for seed in 0..40 {
        for n in [3, 6, 9, 12] {
            let g = generate(GraphKind::ProperInterval { seed, n }).unwrap();
            if g.is_connected() {
                assert!(accepted(&g), "seed {seed} n {n}");
            }
        }
    }
}

#[test]
fn accepted_graphs_are_chordal() {
    for n in 1..=7 {
        for g in connected_graphs(n) {
            if accepted(&g) {
                assert!(is_chordal_by_cycles(&g));
            }
        }
    }
}

#[test]
fn witnesses_are_rooted_where_claimed() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let (g, t) = random_proper_chordal(&mut rng, 9);
        let r = recognize(&g).unwrap();
        assert!(r.feasible_roots().contains(t.root()));
        for w in &r.witnesses {
            assert_eq!(w.layout.root(), w.root);
        }
        let all: VertexSet = g.vertices().collect();
        let rejected: VertexSet = r.rejected_roots.iter().map(|p| p.0).collect();
        assert_eq!(r.feasible_roots().union(&rejected), all);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn accepted_class_is_hereditary(seed in any::<u64>(), n in 2usize..10, mask in any::<u32>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, _) = random_proper_chordal(&mut rng, n);
        let keep: VertexSet = g.vertices().filter(|&v| mask >> v & 1 == 1).collect();
        for comp in g.components_within(&keep) {
            let h = g.induced_subgraph(&comp);
            prop_assert!(accepted(&h));
        }
    }
}
