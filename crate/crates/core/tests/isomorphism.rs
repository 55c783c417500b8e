use proper_chordal::fpq::{FpqTree, NodeKind, Token};
use proper_chordal::graph::{generate, GraphKind};
use proper_chordal::hierarchy::{canonical_hierarchy, decorate, FpqHierarchy, SkeletonEdge};
use proper_chordal::isomorphism::{code_of, isomorphic, isomorphic_with, parse_code, IsoCode, IsoError};
use proper_chordal::oracle::catalog::connected_graphs;
use proper_chordal::oracle::random::{random_permutation, random_proper_chordal};
use proper_chordal::oracle::{brute_isomorphic, SearchBudget};
use proper_chordal::recognition::{recognize_with, Verdict};
use proper_chordal::{Graph, Strategy};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn proper_chordal_catalog(n: usize) -> Vec<Graph> {
    connected_graphs(n)
        .into_iter()
        .filter(|g| recognize_with(g, Strategy::Sequential, true).unwrap().verdict == Verdict::ProperChordal)
        .collect()
}

fn check_against_brute(g1: &Graph, g2: &Graph) {
    let fast = isomorphic(g1, g2).unwrap();
    let brute = brute_isomorphic(g1, g2, SearchBudget::default()).unwrap();
    assert_eq!(fast.is_some(), brute.is_some());
    if let Some(f) = fast {
        assert!(g1.is_isomorphism(g2, &f));
    }
}

#[test]
fn catalog_pairs_agree_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for n in 1..=6 {
        let graphs = proper_chordal_catalog(n);
        for g1 in &graphs {
            for g2 in &graphs {
                let shuffled = g2.relabel(&random_permutation(&mut rng, n));
                check_against_brute(g1, &shuffled);
            }
        }
    }
}

#[test]
fn random_pairs_agree_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let mut positives = 0;
    for i in 0..500 {
        let n = rng.gen_range(1..=7);
        let (g1, _) = random_proper_chordal(&mut rng, n);
        let g2 = if i % 2 == 0 {
            g1.relabel(&random_permutation(&mut rng, n))
        } else {
            random_proper_chordal(&mut rng, n).0
        };
        positives += usize::from(isomorphic(&g1, &g2).unwrap().is_some());
        check_against_brute(&g1, &g2);
    }
    assert!(positives >= 250);
}

#[test]
fn strategies_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..40 {
        let (g1, _) = random_proper_chordal(&mut rng, 10);
        let g2 = g1.relabel(&random_permutation(&mut rng, 10));
        assert_eq!(isomorphic_with(&g1, &g2, Strategy::Sequential), isomorphic_with(&g1, &g2, Strategy::Parallel));
    }
}

#[test]
fn figure_pair_is_not_isomorphic() {
    let g = generate(GraphKind::Fig9G).unwrap();
    let h = generate(GraphKind::Fig9GPrime).unwrap();
    assert_eq!(isomorphic(&g, &h).unwrap(), None);
    assert_eq!(brute_isomorphic(&g, &h, SearchBudget::default()).unwrap(), None);
}

#[test]
fn rejects_bad_inputs() {
    let sun = generate(GraphKind::KSun(3)).unwrap();
    let path = generate(GraphKind::Path(6)).unwrap();
    assert_eq!(isomorphic(&sun, &path), Err(IsoError::NotProperChordal(1)));
    assert_eq!(isomorphic(&path, &sun), Err(IsoError::NotProperChordal(2)));
    assert_eq!(isomorphic(&Graph::empty(2), &path), Err(IsoError::NotConnected(1)));
}

/// Node of `new` with the same leaves and subtree size as `id` in `old`.
fn matching_node(old: &FpqTree, new: &FpqTree, id: usize) -> usize {
    (0..new.len())
        .find(|&m| new.leaf_set(m) == old.leaf_set(id) && new.subtree_len(m) == old.subtree_len(id))
        .expect("reordering keeps every node")
}

/// Reorders one P- or Q-node of one tree and moves skeleton labels along.
fn rewrite(h: &FpqHierarchy, rng: &mut ChaCha8Rng) -> FpqHierarchy {
    let mut trees = h.trees().to_vec();
    let mut skeleton = h.skeleton().to_vec();
    let candidates: Vec<(usize, usize)> = (0..trees.len())
        .flat_map(|i| (0..trees[i].len()).map(move |id| (i, id)))
        .filter(|&(i, id)| matches!(trees[i].kind(id), NodeKind::P | NodeKind::Q) && trees[i].children(id).len() > 1)
        .collect();
    let Some(&(i, id)) = candidates.choose(rng) else {
        return h.clone();
    };
    let k = trees[i].children(id).len();
    let order: Vec<usize> = if trees[i].kind(id) == NodeKind::Q {
        (0..k).rev().collect()
    } else {
        let mut o: Vec<usize> = (0..k).collect();
        o.shuffle(rng);
        o
    };
    let old = trees[i].clone();
    trees[i] = old.reordered(id, &order).unwrap();
    for e in skeleton.iter_mut().filter(|e| e.host_tree == i) {
        if e.host_node == id && old.kind(id) == NodeKind::Q {
            (e.a, e.b) = (k + 1 - e.b, k + 1 - e.a);
        }
        e.host_node = matching_node(&old, &trees[i], e.host_node);
    }
    FpqHierarchy::new(trees, skeleton).unwrap()
}

fn render(c: &[Token]) -> Vec<(u8, u64)> {
    c.iter()
        .map(|t| match t {
            Token::Leaf => (0, 0),
            Token::F => (1, 0),
            Token::P => (2, 0),
            Token::Q => (3, 0),
            Token::Num(k) => (4, *k),
            Token::Open => (5, 0),
            Token::Close => (6, 0),
            Token::Elem(e) => (7, *e as u64),
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn codes_survive_rewrites(seed in any::<u64>(), n in 1usize..11, steps in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, t) = random_proper_chordal(&mut rng, n);
        let h = decorate(&g, &t, &canonical_hierarchy(&g, &t).unwrap()).unwrap();
        let code = code_of(&h).unwrap();
        let mut cur = h.clone();
        for _ in 0..steps {
            cur = rewrite(&cur, &mut rng);
            prop_assert_eq!(code_of(&cur).unwrap(), code.clone());
        }
        let back = parse_code(&code).unwrap();
        prop_assert_eq!(code_of(&back).unwrap(), code.clone());
        prop_assert_eq!(code.to_string().parse::<IsoCode>().unwrap(), code);
    }

    #[test]
    fn token_order_matches_rendered_order(seeds in proptest::collection::vec(any::<u64>(), 2..8)) {
        let mut codes: Vec<IsoCode> = seeds
            .iter()
            .map(|&s| {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let n = rng.gen_range(1..7);
                let (g, t) = random_proper_chordal(&mut rng, n);
                code_of(&decorate(&g, &t, &canonical_hierarchy(&g, &t).unwrap()).unwrap()).unwrap()
            })
            .collect();
        let mut by_render = codes.clone();
        by_render.sort_by_key(|c| render(c.tokens()));
        codes.sort();
        prop_assert_eq!(codes, by_render);
    }
}

#[test]
fn edge_code_of_a_single_edge() {
    let e = SkeletonEdge { tree: 1, host_tree: 0, host_node: 1, a: 1, b: 1, a_hat: Some(1) };
    let h = FpqHierarchy::new(vec![FpqTree::leaf(0), FpqTree::leaf(1)], vec![e]).unwrap();
    assert_eq!(code_of(&h).unwrap().to_string(), "4 Q 3 L < 1 1 1 > 2 Q 1 L");
    let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
    let t = proper_chordal::TreeLayout::path(&[0, 1]).unwrap();
    assert_eq!(code_of(&decorate(&k2, &t, &canonical_hierarchy(&k2, &t).unwrap()).unwrap()).unwrap(), code_of(&h).unwrap());
}
