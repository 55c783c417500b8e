use proper_chordal::graph::{generate, GraphKind};
use proper_chordal::oracle::catalog::connected_graphs;
use proper_chordal::oracle::random::random_connected_graph;
use proper_chordal::oracle::{
    all_tree_layouts, brute_recognize, indifference_tree_layouts, pattern_free_tree_layouts, rooted_labeled_trees,
    SearchBudget,
};
use proper_chordal::treelayout::is_tree_layout;
use proper_chordal::PatternSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn rooted_labeled_tree_counts() {
    for n in 1..=7usize {
        let trees = rooted_labeled_trees(n, SearchBudget::default()).unwrap();
        assert_eq!(trees.len(), n.pow(n as u32 - 1));
        assert!(trees.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn filtering_only_removes() {
    let none = PatternSet { name: "none".into(), patterns: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..30 {
        let g = random_connected_graph(&mut rng, 6, 0.5);
        let all = all_tree_layouts(&g, None, SearchBudget::default()).unwrap();
        assert!(all.len() <= 6usize.pow(5));
        assert!(all.iter().all(|t| is_tree_layout(&g, t)));
        assert_eq!(pattern_free_tree_layouts(&g, None, &none, SearchBudget::default()).unwrap(), all);
        let ind = indifference_tree_layouts(&g, None, SearchBudget::default()).unwrap();
        assert!(ind.iter().all(|t| all.contains(t)));
    }
}

#[test]
fn figure_layouts_are_found() {
    let g = generate(GraphKind::Fig8).unwrap();
    let one = g.vertex_by_name("1").unwrap();
    let layouts = indifference_tree_layouts(&g, Some(one), SearchBudget::default()).unwrap();
    assert!(layouts.len() >= 2);
    assert!(layouts.iter().all(|t| t.root() == one));
}

#[test]
fn trees_and_separations() {
    for n in 1..=7 {
        for g in connected_graphs(n).into_iter().filter(|g| g.edge_count() + 1 == g.n()) {
            assert!(brute_recognize(&g, SearchBudget::default()).unwrap());
        }
    }
    assert!(!brute_recognize(&generate(GraphKind::KSun(3)).unwrap(), SearchBudget::default()).unwrap());
    assert!(brute_recognize(&generate(GraphKind::KFan(4)).unwrap(), SearchBudget::default()).unwrap());
    assert!(!brute_recognize(&generate(GraphKind::KFan(5)).unwrap(), SearchBudget::default()).unwrap());
}
