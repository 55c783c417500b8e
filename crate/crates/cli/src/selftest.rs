//! Oracle-equivalence suites at a scale that finishes in seconds.

use std::time::Instant;

use proper_chordal::fpq::{convex_pq, frontier_set, nested_convex_fpq, FpqTree, NestedCollection};
use proper_chordal::hierarchy::enumerate_realizations;
use proper_chordal::isomorphism::isomorphic;
use proper_chordal::oracle::catalog::connected_graphs;
use proper_chordal::oracle::random::{random_connected_graph, random_graph_with_layout, random_permutation, random_proper_chordal};
use proper_chordal::oracle::{brute_isomorphic, brute_permutation_sets, brute_recognize, indifference_tree_layouts, SearchBudget};
use proper_chordal::recognition::{recognize, recognize_rooted, Verdict};
use proper_chordal::treelayout::{is_indifference, INDIFFERENCE_METHODS};
use proper_chordal::{TreeLayout, VertexSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Report {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    pub seconds: f64,
}

type Suite = fn(&mut ChaCha8Rng, SearchBudget, &mut Vec<String>) -> usize;

const SUITES: [(&str, Suite); 5] = [
    ("recognition", recognition),
    ("hierarchy", hierarchy),
    ("isomorphism", isomorphism),
    ("pq", pq),
    ("indifference", indifference),
];

pub fn run(seed: u64, budget: SearchBudget) -> Vec<Report> {
    SUITES
        .iter()
        .map(|&(name, suite)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut failures = Vec::new();
            let start = Instant::now();
            let cases = suite(&mut rng, budget, &mut failures);
            Report { name, cases, failures, seconds: start.elapsed().as_secs_f64() }
        })
        .collect()
}

fn recognition(rng: &mut ChaCha8Rng, b: SearchBudget, fail: &mut Vec<String>) -> usize {
    let mut graphs: Vec<_> = (1..=6).flat_map(connected_graphs).collect();
    for _ in 0..1000 {
        let n = rng.gen_range(1..=7);
        let p = rng.gen_range(0.2..0.9);
        graphs.push(random_connected_graph(rng, n, p));
    }
    for g in &graphs {
        let fast = recognize(g).map(|r| r.verdict == Verdict::ProperChordal);
        match (fast, brute_recognize(g, b)) {
            (Ok(a), Ok(e)) if a == e => {}
            (a, e) => fail.push(format!("{:?}: recognize {a:?}, oracle {e:?}", g.edges().collect::<Vec<_>>())),
        }
    }
    graphs.len()
}

fn parent_arrays(v: &[TreeLayout]) -> Vec<Vec<Option<usize>>> {
    let mut p: Vec<_> = v.iter().map(|t| t.parents().to_vec()).collect();
    p.sort();
    p
}

fn hierarchy(_: &mut ChaCha8Rng, b: SearchBudget, fail: &mut Vec<String>) -> usize {
    let mut cases = 0;
    for g in (1..=5).flat_map(connected_graphs) {
        for x in g.vertices() {
            cases += 1;
            let oracle = match indifference_tree_layouts(&g, Some(x), b) {
                Ok(o) => o,
                Err(e) => {
                    fail.push(format!("oracle: {e}"));
                    continue;
                }
            };
            let got = match recognize_rooted(&g, x) {
                Ok(Some((_, h))) => enumerate_realizations(&h, 1 << 20).map(|v| parent_arrays(&v)).map_err(|e| e.to_string()),
                Ok(None) => Ok(Vec::new()),
                Err(e) => Err(e.to_string()),
            };
            if got.as_ref() != Ok(&parent_arrays(&oracle)) {
                fail.push(format!("{:?} at root {x}: realizations differ from the oracle", g.edges().collect::<Vec<_>>()));
            }
        }
    }
    cases
}

fn isomorphism(rng: &mut ChaCha8Rng, b: SearchBudget, fail: &mut Vec<String>) -> usize {
    let pairs = 500;
    for i in 0..pairs {
        let n = rng.gen_range(1..=6);
        let (g1, _) = random_proper_chordal(rng, n);
        let g2 = if i % 2 == 0 { g1.relabel(&random_permutation(rng, n)) } else { random_proper_chordal(rng, n).0 };
        let expected = brute_isomorphic(&g1, &g2, b).map(|f| f.is_some());
        match (isomorphic(&g1, &g2), expected) {
            (Ok(Some(f)), Ok(true)) if g1.is_isomorphism(&g2, &f) => {}
            (Ok(None), Ok(false)) => {}
            (a, e) => fail.push(format!("pair {i}: isomorphic {a:?}, oracle {e:?}")),
        }
    }
    pairs
}

fn random_subset(rng: &mut ChaCha8Rng, k: usize) -> VertexSet {
    loop {
        let s: VertexSet = (0..k).filter(|_| rng.gen_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// Chains either arbitrary or cut from one hidden order so that some solution exists.
fn random_collection(rng: &mut ChaCha8Rng, k: usize) -> NestedCollection {
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(rng);
    let planted = rng.gen_bool(0.5);
    let families = (0..rng.gen_range(0..=k))
        .map(|_| {
            let len = rng.gen_range(1..=3);
            if planted {
                let end = rng.gen_range(0..k);
                let mut starts: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=end)).collect();
                starts.sort_unstable();
                starts.into_iter().map(|s| order[s..=end].iter().copied().collect()).collect()
            } else {
                let mut chain = vec![random_subset(rng, k)];
                for _ in 1..len {
                    let grown = chain.last().expect("non-empty").union(&random_subset(rng, k));
                    chain.push(grown);
                }
                chain
            }
        })
        .collect();
    NestedCollection::new((0..k).collect(), families).expect("chains over the ground set")
}

fn frontiers(t: Option<FpqTree>) -> Vec<Vec<usize>> {
    t.map(|t| frontier_set(&t, 1 << 16).expect("small ground set")).unwrap_or_default()
}

fn pq(rng: &mut ChaCha8Rng, _: SearchBudget, fail: &mut Vec<String>) -> usize {
    let cases = 300;
    for i in 0..cases {
        let k = rng.gen_range(1..=5);
        let c = random_collection(rng, k);
        let (convex, nested) = match brute_permutation_sets(c.ground(), &c) {
            Ok(r) => r,
            Err(e) => {
                fail.push(format!("oracle: {e}"));
                continue;
            }
        };
        if frontiers(convex_pq(c.ground(), &c.all_sets())) != convex {
            fail.push(format!("case {i}: convex {:?}", c.families()));
        }
        if frontiers(nested_convex_fpq(&c)) != nested {
            fail.push(format!("case {i}: nested {:?}", c.families()));
        }
    }
    cases
}

fn indifference(rng: &mut ChaCha8Rng, _: SearchBudget, fail: &mut Vec<String>) -> usize {
    let cases = 300;
    for i in 0..cases {
        let n = rng.gen_range(1..=8);
        let (g, t) = random_graph_with_layout(rng, n);
        let verdicts: Vec<bool> = INDIFFERENCE_METHODS.iter().map(|&m| is_indifference(&g, &t, m)).collect();
        if verdicts.iter().any(|&v| v != verdicts[0]) {
            fail.push(format!("pair {i}: methods disagree {verdicts:?}"));
        }
    }
    cases
}
