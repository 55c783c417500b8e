//! Seeded random instances: connected graphs, proper chordal graphs with a witness
//! layout, and arbitrary graph/tree-layout pairs.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, Vertex};
use crate::treelayout::TreeLayout;

pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Vertex> {
    let mut p: Vec<Vertex> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// The layout with vertex `v` renamed to `perm[v]`.
pub fn relabel_layout(t: &TreeLayout, perm: &[Vertex]) -> TreeLayout {
    let mut parent = vec![None; t.n()];
    for v in 0..t.n() {
        parent[perm[v]] = t.parent(v).map(|p| perm[p]);
    }
    TreeLayout::from_parents(parent).expect("relabelling keeps a tree")
}

/// G(n, p) conditioned on connectivity by rejection.
pub fn random_connected_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Graph {
    assert!(n >= 1);
    let p = p.clamp(0.05, 1.0);
    loop {
        let mut g = Graph::empty(n);
        for v in 1..n {
            for u in 0..v {
                if rng.gen_bool(p) {
                    g.add_edge(u, v).expect("in range");
                }
            }
        }
        if g.is_connected() {
            return g;
        }
    }
}

/// Random recursive tree on `0..n` rooted at 0: `parent[v] < v`.
fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Option<Vertex>> {
    (0..n).map(|v| (v > 0).then(|| rng.gen_range(0..v))).collect()
}

fn depths(parent: &[Option<Vertex>]) -> Vec<usize> {
    let mut d = vec![0; parent.len()];
    for v in 0..parent.len() {
        if let Some(p) = parent[v] {
            d[v] = d[p] + 1;
        }
    }
    d
}

/// A connected proper chordal graph with one of its indifference tree-layouts: every
/// vertex is adjacent to a run of its nearest ancestors, and runs never reach above the
/// parent's run. Vertices are shuffled.
pub fn random_proper_chordal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (Graph, TreeLayout) {
    assert!(n >= 1);
    let parent = random_tree(rng, n);
    let depth = depths(&parent);
    let mut top = vec![0usize; n];
    let mut g = Graph::empty(n);
    for (v, p) in parent.iter().enumerate().skip(1) {
        let p = p.expect("non-root");
        top[v] = rng.gen_range(top[p]..depth[v]);
        let mut a = Some(p);
        while let Some(u) = a.filter(|&u| depth[u] >= top[v]) {
            g.add_edge(u, v).expect("in range");
            a = parent[u];
        }
    }
    let t = TreeLayout::from_parents(parent).expect("parents precede children");
    let perm = random_permutation(rng, n);
    (g.relabel(&perm), relabel_layout(&t, &perm))
}

/// A connected graph together with one of its tree-layouts. Half are proper chordal
/// witnesses with one ancestor pair toggled, half have each non-parent ancestor pair
/// adjacent with probability one half.
pub fn random_graph_with_layout<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (Graph, TreeLayout) {
    assert!(n >= 1);
    if rng.gen_bool(0.5) {
        let (g, t) = random_proper_chordal(rng, n);
        let mut pairs: Vec<(Vertex, Vertex)> = Vec::new();
        for v in 0..n {
            pairs.extend(t.ancestors(v).into_iter().filter(|&a| Some(a) != t.parent(v)).map(|a| (a, v)));
        }
        let Some(&(a, v)) = pairs.choose(rng) else {
            return (g, t);
        };
        let mut h = Graph::empty(n);
        for (x, y) in g.edges().filter(|&e| e != (a.min(v), a.max(v))) {
            h.add_edge(x, y).expect("in range");
        }
        if !g.has_edge(a, v) {
            h.add_edge(a, v).expect("in range");
        }
        return (h, t);
    }
    let parent = random_tree(rng, n);
    let t = TreeLayout::from_parents(parent.clone()).expect("parents precede children");
    let mut g = Graph::empty(n);
    for (v, p) in parent.iter().enumerate().skip(1) {
        let p = p.expect("non-root");
        g.add_edge(p, v).expect("in range");
        for a in t.ancestors(v) {
            if a != p && rng.gen_bool(0.5) {
                g.add_edge(a, v).expect("in range");
            }
        }
    }
    let perm = random_permutation(rng, n);
    (g.relabel(&perm), relabel_layout(&t, &perm))
}
