//! Exhaustive catalogs of small unlabeled graphs and free trees.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{Graph, Vertex};

/// Largest order for which the graph catalog is supported.
pub const MAX_CATALOG_ORDER: usize = 8;
pub const MAX_TREE_ORDER: usize = 12;

/// Upper-triangle adjacency bits of `g` under the vertex order `order`.
fn bits(g: &Graph, order: &[Vertex]) -> u64 {
    let mut out = 0u64;
    for j in 1..order.len() {
        for i in 0..j {
            out = (out << 1) | u64::from(g.has_edge(order[i], order[j]));
        }
    }
    out
}

/// A certificate equal for two graphs exactly when they are isomorphic: the largest
/// adjacency word over all vertex orders that sort by an invariant key.
pub fn certificate(g: &Graph) -> (usize, u64) {
    let n = g.n();
    assert!(n <= MAX_CATALOG_ORDER + 3, "catalog graphs are small");
    let key = |v: Vertex| {
        let mut nd: Vec<usize> = g.adjacent(v).iter().map(|&u| g.degree(u)).collect();
        nd.sort_unstable();
        (g.degree(v), nd)
    };
    let mut classes: BTreeMap<_, Vec<Vertex>> = BTreeMap::new();
    for v in g.vertices() {
        classes.entry(key(v)).or_default().push(v);
    }
    let classes: Vec<Vec<Vertex>> = classes.into_values().collect();

    fn orderings(items: &[Vertex]) -> Vec<Vec<Vertex>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.to_vec();
            let v = rest.remove(i);
            for mut tail in orderings(&rest) {
                tail.insert(0, v);
                out.push(tail);
            }
        }
        out
    }
    fn visit_orders(g: &Graph, classes: &[Vec<Vertex>], prefix: &mut Vec<Vertex>, best: &mut u64) {
        let Some((head, tail)) = classes.split_first() else {
            *best = (*best).max(bits(g, prefix));
            return;
        };
        for o in orderings(head) {
            let len = prefix.len();
            prefix.extend(o);
            visit_orders(g, tail, prefix, best);
            prefix.truncate(len);
        }
    }
    let mut best = 0u64;
    visit_orders(g, &classes, &mut Vec::with_capacity(n), &mut best);
    (n, best)
}

/// One representative of every isomorphism class of graphs on `n` vertices, built by
/// adding a vertex with every neighbourhood to each class on `n - 1` vertices.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= MAX_CATALOG_ORDER, "catalog limited to {MAX_CATALOG_ORDER} vertices");
    let mut level: Vec<Graph> = vec![Graph::empty(0)];
    for k in 1..=n {
        let mut seen: BTreeMap<(usize, u64), Graph> = BTreeMap::new();
        for g in &level {
            for mask in 0u32..(1 << (k - 1)) {
                let mut h = Graph::empty(k);
                for (u, v) in g.edges() {
                    h.add_edge(u, v).expect("in range");
                }
                for u in 0..k - 1 {
                    if mask >> u & 1 == 1 {
                        h.add_edge(u, k - 1).expect("in range");
                    }
                }
                seen.entry(certificate(&h)).or_insert(h);
            }
        }
        level = seen.into_values().collect();
    }
    level
}

pub fn connected_graphs(n: usize) -> Vec<Graph> {
    all_graphs(n).into_iter().filter(Graph::is_connected).collect()
}

/// Canonical string of the tree rooted at `v` (AHU encoding).
fn rooted_code(adj: &[Vec<usize>], v: usize, from: Option<usize>) -> String {
    let mut parts: Vec<String> = adj[v].iter().filter(|&&w| Some(w) != from).map(|&w| rooted_code(adj, w, Some(v))).collect();
    parts.sort();
    format!("({})", parts.concat())
}

fn tree_code(g: &Graph) -> String {
    let adj: Vec<Vec<usize>> = g.vertices().map(|v| g.adjacent(v).to_vec()).collect();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut alive: BTreeSet<usize> = g.vertices().collect();
    while alive.len() > 2 {
        let leaves: Vec<usize> = alive.iter().copied().filter(|&v| degree[v] <= 1).collect();
        for v in leaves {
            alive.remove(&v);
            for &w in &adj[v] {
                degree[w] = degree[w].saturating_sub(1);
            }
        }
    }
    alive.iter().map(|&c| rooted_code(&adj, c, None)).min().expect("a centre exists")
}

/// One representative of every free tree on `n` vertices.
pub fn free_trees(n: usize) -> Vec<Graph> {
    assert!((1..=MAX_TREE_ORDER).contains(&n), "tree catalog covers 1..={MAX_TREE_ORDER}");
    let mut level = vec![Graph::empty(1)];
    for k in 2..=n {
        let mut seen: BTreeMap<String, Graph> = BTreeMap::new();
        for t in &level {
            for v in t.vertices() {
                let mut h = Graph::empty(k);
                for (a, b) in t.edges() {
                    h.add_edge(a, b).expect("in range");
                }
                h.add_edge(v, k - 1).expect("in range");
                seen.entry(tree_code(&h)).or_insert(h);
            }
        }
        level = seen.into_values().collect();
    }
    level
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_counts() {
        let total: Vec<usize> = (1..=6).map(|n| all_graphs(n).len()).collect();
        assert_eq!(total, vec![1, 2, 4, 11, 34, 156]);
        let connected: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(connected, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn tree_counts() {
        let counts: Vec<usize> = (1..=10).map(|n| free_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23, 47, 106]);
    }

    #[test]
    fn certificate_is_invariant() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap();
        assert_eq!(certificate(&g), certificate(&g.relabel(&[4, 2, 0, 1, 3])));
        let h = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_ne!(certificate(&g), certificate(&h));
    }
}
