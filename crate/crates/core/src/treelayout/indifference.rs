use std::fmt;
use std::str::FromStr;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::patterns::{builtin_pattern_set, treelayout_excludes};

use super::{is_tree_layout, TreeLayout};

/// Four equivalent tests for an indifference tree-layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndifferenceMethod {
    /// No ancestor chain realises a proper pattern.
    Patterns,
    /// Every closed neighbourhood is a connected node set.
    ClosedNbhd,
    /// Every maximal clique occupies consecutive nodes of a root path.
    Cliques,
    /// Neighbourhoods of comparable vertices nest towards each other.
    Nested,
}

pub const INDIFFERENCE_METHODS: [IndifferenceMethod; 4] = [
    IndifferenceMethod::Patterns,
    IndifferenceMethod::ClosedNbhd,
    IndifferenceMethod::Cliques,
    IndifferenceMethod::Nested,
];

impl FromStr for IndifferenceMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "patterns" => Ok(IndifferenceMethod::Patterns),
            "closed_nbhd" => Ok(IndifferenceMethod::ClosedNbhd),
            "cliques" => Ok(IndifferenceMethod::Cliques),
            "nested" => Ok(IndifferenceMethod::Nested),
            other => Err(format!("unknown indifference method `{other}`")),
        }
    }
}

impl fmt::Display for IndifferenceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndifferenceMethod::Patterns => "patterns",
            IndifferenceMethod::ClosedNbhd => "closed_nbhd",
            IndifferenceMethod::Cliques => "cliques",
            IndifferenceMethod::Nested => "nested",
        })
    }
}

/// False whenever `t` is not a tree-layout of `g`.
pub fn is_indifference(g: &Graph, t: &TreeLayout, method: IndifferenceMethod) -> bool {
    if !is_tree_layout(g, t) {
        return false;
    }
    match method {
        IndifferenceMethod::Patterns => {
            treelayout_excludes(g, t, &builtin_pattern_set("proper").expect("builtin set"))
        }
        IndifferenceMethod::ClosedNbhd => closed_neighbourhoods_connected(g, t),
        IndifferenceMethod::Cliques => cliques_consecutive(g, t),
        IndifferenceMethod::Nested => neighbourhoods_nested(g, t),
    }
}

fn closed_neighbourhoods_connected(g: &Graph, t: &TreeLayout) -> bool {
    g.vertices().all(|x| {
        let mut closed = g.adjacent(x).to_vec();
        closed.push(x);
        let set = VertexSet::from(closed);
        // A node set is connected iff exactly one member has its parent outside.
        set.iter().filter(|&v| t.parent(v).is_none_or(|p| !set.contains(p))).count() == 1
    })
}

fn cliques_consecutive(g: &Graph, t: &TreeLayout) -> bool {
    maximal_cliques(g).into_iter().all(|mut k| {
        k.sort_by_key(|&v| t.depth(v));
        k.windows(2).all(|w| t.parent(w[1]) == Some(w[0]))
    })
}

fn neighbourhoods_nested(g: &Graph, t: &TreeLayout) -> bool {
    g.vertices().all(|y| {
        let anc = t.ancestors(y);
        let desc_y = t.descendant_set(y);
        anc.iter().enumerate().all(|(i, &x)| {
            // Ancestors of x are the tail of y's ancestor list.
            let up_ok = anc[i + 1..].iter().all(|&a| !g.has_edge(y, a) || g.has_edge(x, a));
            let down_ok = desc_y.iter().all(|d| !g.has_edge(x, d) || g.has_edge(y, d));
            up_ok && down_ok
        })
    })
}

/// Bron-Kerbosch with pivoting; each clique sorted ascending.
pub(crate) fn maximal_cliques(g: &Graph) -> Vec<Vec<Vertex>> {
    fn expand(g: &Graph, r: &mut Vec<Vertex>, p: VertexSet, mut x: VertexSet, out: &mut Vec<Vec<Vertex>>) {
        if p.is_empty() {
            if x.is_empty() {
                let mut k = r.clone();
                k.sort_unstable();
                out.push(k);
            }
            return;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| g.adjacent(u).iter().filter(|&&w| p.contains(w)).count())
            .expect("p is non-empty");
        let candidates: Vec<Vertex> = p.iter().filter(|&v| !g.has_edge(pivot, v)).collect();
        let mut p = p;
        for v in candidates {
            let nv = VertexSet::from_sorted(g.adjacent(v).to_vec());
            r.push(v);
            expand(g, r, p.intersection(&nv), x.intersection(&nv), out);
            r.pop();
            p.remove(v);
            x.insert(v);
        }
    }
    let mut out = Vec::new();
    expand(g, &mut Vec::new(), g.vertices().collect(), VertexSet::new(), &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};

    fn all_agree(g: &Graph, t: &TreeLayout) -> Option<bool> {
        let v: Vec<bool> = INDIFFERENCE_METHODS.iter().map(|&m| is_indifference(g, t, m)).collect();
        v.iter().all(|&b| b == v[0]).then_some(v[0])
    }

    #[test]
    fn cevenol_figure_layout() {
        let g = generate(GraphKind::Cevenol).unwrap();
        let id = |s: &str| g.vertex_by_name(s).unwrap();
        let mut parent = vec![None; 8];
        for (c, p) in [("g", "h"), ("d", "g"), ("a", "d"), ("c", "a"), ("b", "c"), ("e", "a"), ("f", "e")] {
            parent[id(c)] = Some(id(p));
        }
        let t = TreeLayout::from_parents(parent).unwrap();
        assert_eq!(all_agree(&g, &t), Some(true));
    }

    #[test]
    fn four_fan_layouts() {
        let g = generate(GraphKind::KFan(4)).unwrap();
        // v3 -> v -> {v2 -> v1, v4 -> v5}
        let mut parent = vec![None; 6];
        parent[0] = Some(3);
        parent[2] = Some(0);
        parent[1] = Some(2);
        parent[4] = Some(0);
        parent[5] = Some(4);
        let t = TreeLayout::from_parents(parent).unwrap();
        assert_eq!(all_agree(&g, &t), Some(true));
        let path = TreeLayout::path(&[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(all_agree(&g, &path), Some(false));
    }

    #[test]
    fn clique_paths_are_indifferent() {
        let g = generate(GraphKind::Clique(5)).unwrap();
        let t = TreeLayout::path(&[3, 1, 4, 0, 2]).unwrap();
        assert_eq!(all_agree(&g, &t), Some(true));
    }

    #[test]
    fn cliques_of_small_graphs() {
        let sun = generate(GraphKind::KSun(3)).unwrap();
        let ks = maximal_cliques(&sun);
        assert_eq!(ks.len(), 4);
        assert!(ks.contains(&vec![0, 1, 2]));
        assert_eq!(maximal_cliques(&Graph::empty(2)), vec![vec![0], vec![1]]);
    }

    #[test]
    fn method_names() {
        for m in INDIFFERENCE_METHODS {
            assert_eq!(m.to_string().parse::<IndifferenceMethod>().unwrap(), m);
        }
        assert!("x".parse::<IndifferenceMethod>().is_err());
    }
}
