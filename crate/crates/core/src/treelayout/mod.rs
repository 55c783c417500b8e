//! Rooted tree-layouts and their indifference tests.

mod indifference;
mod model;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};

pub use indifference::{is_indifference, IndifferenceMethod, INDIFFERENCE_METHODS};
pub use model::{flatten_dfs, model_from_treelayout, treelayout_from_model, TreeIntersectionModel};

#[derive(Debug, Error)]
pub enum TreeLayoutError {
    #[error("malformed tree-layout: {0}")]
    Malformed(String),
    #[error("malformed tree-intersection model: {0}")]
    MalformedModel(String),
    #[error("tree-layout has {layout} nodes but the graph has {graph} vertices")]
    SizeMismatch { layout: usize, graph: usize },
    #[error("tree-layout contains the pattern {pattern} on {tuple:?}")]
    PatternOccurs { pattern: String, tuple: Vec<Vertex> },
    #[error("edge {0}-{1} is not vertical in the tree-layout")]
    HorizontalEdge(Vertex, Vertex),
    #[error("invalid tree-layout JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// A rooted tree whose nodes are the vertices of a graph.
///
/// Nodes are identified with vertices; the node numbering of external formats is
/// translated on input.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TreeLayout {
    root: Vertex,
    parent: Vec<Option<Vertex>>,
    children: Vec<Vec<Vertex>>,
    depth: Vec<usize>,
    pre: Vec<usize>,
    size: Vec<usize>,
    order: Vec<Vertex>,
}

#[derive(Serialize, Deserialize)]
struct LayoutJson {
    root: usize,
    parent: Vec<Option<usize>>,
    vertex_of: Vec<Vertex>,
}

impl TreeLayout {
    /// Builds a layout from per-vertex parents; exactly one entry must be `None`.
    pub fn from_parents(parent: Vec<Option<Vertex>>) -> Result<TreeLayout, TreeLayoutError> {
        let n = parent.len();
        if n == 0 {
            return Err(TreeLayoutError::Malformed("a tree-layout needs at least one node".into()));
        }
        let mut root = None;
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            match *p {
                None if root.is_some() => return Err(TreeLayoutError::Malformed("more than one root".into())),
                None => root = Some(v),
                Some(p) if p >= n || p == v => {
                    return Err(TreeLayoutError::Malformed(format!("bad parent {p} for node {v}")))
                }
                Some(p) => children[p].push(v),
            }
        }
        let root = root.ok_or_else(|| TreeLayoutError::Malformed("no root".into()))?;

        let mut depth = vec![0; n];
        let mut pre = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            pre[v] = order.len();
            order.push(v);
            for &c in children[v].iter().rev() {
                depth[c] = depth[v] + 1;
                stack.push(c);
            }
        }
        if order.len() != n {
            return Err(TreeLayoutError::Malformed("parent links contain a cycle".into()));
        }
        let mut size = vec![1; n];
        for &v in order.iter().rev() {
            if let Some(p) = parent[v] {
                size[p] += size[v];
            }
        }
        Ok(TreeLayout { root, parent, children, depth, pre, size, order })
    }

    /// General form: `parent` and `vertex_of` are indexed by node.
    pub fn new(root: usize, parent: Vec<Option<usize>>, vertex_of: Vec<Vertex>) -> Result<TreeLayout, TreeLayoutError> {
        let n = parent.len();
        if vertex_of.len() != n {
            return Err(TreeLayoutError::Malformed("parent and vertex_of lengths differ".into()));
        }
        let mut seen = vec![false; n];
        for &v in &vertex_of {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(TreeLayoutError::Malformed("vertex_of is not a bijection".into()));
            }
        }
        if root >= n || parent[root].is_some() {
            return Err(TreeLayoutError::Malformed(format!("node {root} is not a root")));
        }
        let mut vparent = vec![None; n];
        for (node, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(TreeLayoutError::Malformed(format!("parent {p} out of range")));
                }
                vparent[vertex_of[node]] = Some(vertex_of[p]);
            }
        }
        TreeLayout::from_parents(vparent)
    }

    /// The path `order[0] -> order[1] -> ...`.
    pub fn path(order: &[Vertex]) -> Result<TreeLayout, TreeLayoutError> {
        let mut parent = vec![None; order.len()];
        for w in order.windows(2) {
            if w[1] >= order.len() {
                return Err(TreeLayoutError::Malformed(format!("vertex {} out of range", w[1])));
            }
            parent[w[1]] = Some(w[0]);
        }
        TreeLayout::from_parents(parent)
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<Vertex>] {
        &self.parent
    }

    /// Children in ascending order.
    pub fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }

    pub fn depth(&self, v: Vertex) -> usize {
        self.depth[v]
    }

    /// Strict ancestor test.
    pub fn is_ancestor(&self, a: Vertex, d: Vertex) -> bool {
        a != d && self.pre[a] <= self.pre[d] && self.pre[d] < self.pre[a] + self.size[a]
    }

    pub fn comparable(&self, u: Vertex, v: Vertex) -> bool {
        self.is_ancestor(u, v) || self.is_ancestor(v, u)
    }

    /// Strict ancestors, nearest first.
    pub fn ancestors(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(self.depth[v]);
        let mut cur = self.parent[v];
        while let Some(a) = cur {
            out.push(a);
            cur = self.parent[a];
        }
        out
    }

    pub fn ancestor_set(&self, v: Vertex) -> VertexSet {
        self.ancestors(v).into_iter().collect()
    }

    /// Strict descendants.
    pub fn descendant_set(&self, v: Vertex) -> VertexSet {
        self.order[self.pre[v] + 1..self.pre[v] + self.size[v]].iter().copied().collect()
    }

    /// Nodes in preorder, children visited by ascending vertex.
    pub fn preorder(&self) -> Vec<Vertex> {
        self.order.clone()
    }

    pub fn subtree_size(&self, v: Vertex) -> usize {
        self.size[v]
    }

    pub fn lca(&self, mut u: Vertex, mut v: Vertex) -> Vertex {
        while self.depth[u] > self.depth[v] {
            u = self.parent[u].expect("deeper node has a parent");
        }
        while self.depth[v] > self.depth[u] {
            v = self.parent[v].expect("deeper node has a parent");
        }
        while u != v {
            u = self.parent[u].expect("non-root");
            v = self.parent[v].expect("non-root");
        }
        u
    }

    pub fn is_path(&self) -> bool {
        self.children.iter().all(|c| c.len() <= 1)
    }

    pub fn to_json(&self) -> String {
        let doc = LayoutJson { root: self.root, parent: self.parent.clone(), vertex_of: (0..self.n()).collect() };
        serde_json::to_string(&doc).expect("layout serialises")
    }

    pub fn from_json(text: &str) -> Result<TreeLayout, TreeLayoutError> {
        let doc: LayoutJson = serde_json::from_str(text)?;
        TreeLayout::new(doc.root, doc.parent, doc.vertex_of)
    }

    /// Tree edges solid, graph edges as curved red overlays.
    pub fn to_dot(&self, g: &Graph) -> String {
        let mut out = String::from("digraph T {\n  node [shape=circle];\n");
        for &v in &self.order {
            let _ = writeln!(out, "  {v} [label=\"{}\"];", crate::graph::dot_escape(&g.label(v)));
        }
        for &v in &self.order {
            if let Some(p) = self.parent[v] {
                let _ = writeln!(out, "  {p} -> {v} [arrowhead=none];");
            }
        }
        for (u, v) in g.edges() {
            if self.parent[u] != Some(v) && self.parent[v] != Some(u) {
                let _ = writeln!(out, "  {u} -> {v} [dir=none, color=red, constraint=false];");
            }
        }
        out.push_str("}\n");
        out
    }
}

impl std::fmt::Debug for TreeLayout {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TreeLayout(root={}, parent={:?})", self.root, self.parent)
    }
}

impl PartialOrd for TreeLayout {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by the parent array, which determines the layout.
impl Ord for TreeLayout {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.parent.cmp(&other.parent)
    }
}

/// Every edge joins an ancestor-descendant pair.
pub fn is_tree_layout(g: &Graph, t: &TreeLayout) -> bool {
    g.n() == t.n() && g.edges().all(|(u, v)| t.comparable(u, v))
}

pub fn check_tree_layout(g: &Graph, t: &TreeLayout) -> Result<(), TreeLayoutError> {
    if g.n() != t.n() {
        return Err(TreeLayoutError::SizeMismatch { layout: t.n(), graph: g.n() });
    }
    match g.edges().find(|&(u, v)| !t.comparable(u, v)) {
        Some((u, v)) => Err(TreeLayoutError::HorizontalEdge(u, v)),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TreeLayout {
        // 0 -> {1 -> 3, 2}
        TreeLayout::from_parents(vec![None, Some(0), Some(0), Some(1)]).unwrap()
    }

    #[test]
    fn structure_queries() {
        let t = sample();
        assert_eq!(t.root(), 0);
        assert_eq!(t.preorder(), vec![0, 1, 3, 2]);
        assert!(t.is_ancestor(0, 3) && t.is_ancestor(1, 3));
        assert!(!t.is_ancestor(2, 3) && !t.is_ancestor(3, 3));
        assert_eq!(t.ancestors(3), vec![1, 0]);
        assert_eq!(t.descendant_set(0).into_vec(), vec![1, 2, 3]);
        assert_eq!(t.lca(3, 2), 0);
        assert_eq!(t.depth(3), 2);
        assert!(!t.is_path());
        assert!(TreeLayout::path(&[2, 0, 1]).unwrap().is_path());
    }

    #[test]
    fn malformed_parents() {
        assert!(TreeLayout::from_parents(vec![]).is_err());
        assert!(TreeLayout::from_parents(vec![None, None]).is_err());
        assert!(TreeLayout::from_parents(vec![Some(1), Some(0)]).is_err());
        assert!(TreeLayout::from_parents(vec![None, Some(2), Some(1)]).is_err());
    }

    #[test]
    fn json_round_trip_and_node_translation() {
        let t = sample();
        assert_eq!(TreeLayout::from_json(&t.to_json()).unwrap(), t);
        // node 0 holds vertex 3 and is the root.
        let u = TreeLayout::new(0, vec![None, Some(0)], vec![1, 0]).unwrap();
        assert_eq!(u.root(), 1);
        assert_eq!(u.parent(0), Some(1));
        assert!(TreeLayout::from_json("{\"root\":0}").is_err());
    }

    #[test]
    fn cycle_is_not_tree_layout_under_star() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let star = TreeLayout::from_parents(vec![None, Some(0), Some(0), Some(0)]).unwrap();
        assert!(!is_tree_layout(&c4, &star));
        assert!(is_tree_layout(&c4, &TreeLayout::path(&[0, 1, 2, 3]).unwrap()));
        assert!(matches!(check_tree_layout(&c4, &star), Err(TreeLayoutError::HorizontalEdge(1, 2))));
    }
}
