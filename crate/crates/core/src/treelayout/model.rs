use std::collections::VecDeque;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::patterns::{builtin_pattern_set, treelayout_occurrences, Layout};

use super::{check_tree_layout, TreeLayout, TreeLayoutError};

/// Subtrees of a host tree, one per vertex; the graph is their intersection graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeIntersectionModel {
    pub host_nodes: usize,
    pub host_edges: Vec<(usize, usize)>,
    /// Host nodes of each vertex's subtree, ascending.
    pub subtrees: Vec<Vec<usize>>,
}

impl TreeIntersectionModel {
    pub fn new(host_nodes: usize, host_edges: Vec<(usize, usize)>, subtrees: Vec<Vec<usize>>) -> Result<Self, TreeLayoutError> {
        let subtrees = subtrees
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        let m = TreeIntersectionModel { host_nodes, host_edges, subtrees };
        m.validate()?;
        Ok(m)
    }

    fn host_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.host_nodes];
        for &(u, v) in &self.host_edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    fn validate(&self) -> Result<(), TreeLayoutError> {
        let bad = |m: String| Err(TreeLayoutError::MalformedModel(m));
        if self.host_nodes == 0 || self.host_edges.len() + 1 != self.host_nodes {
            return bad("host must be a tree".into());
        }
        if self.host_edges.iter().any(|&(u, v)| u >= self.host_nodes || v >= self.host_nodes || u == v) {
            return bad("host edge out of range".into());
        }
        let adj = self.host_adjacency();
        let all: Vec<usize> = (0..self.host_nodes).collect();
        if !connected_in(&adj, &all) {
            return bad("host must be connected".into());
        }
        for (x, s) in self.subtrees.iter().enumerate() {
            if s.is_empty() || s.iter().any(|&u| u >= self.host_nodes) {
                return bad(format!("subtree of vertex {x} is empty or out of range"));
            }
            if !connected_in(&adj, s) {
                return bad(format!("subtree of vertex {x} is not connected"));
            }
        }
        Ok(())
    }

    pub fn intersection_graph(&self) -> Graph {
        let n = self.subtrees.len();
        let mut g = Graph::empty(n);
        for x in 0..n {
            for y in x + 1..n {
                let (a, b) = (&self.subtrees[x], &self.subtrees[y]);
                if a.iter().any(|u| b.binary_search(u).is_ok()) {
                    g.add_edge(x, y).expect("distinct in-range pair");
                }
            }
        }
        g
    }
}

fn connected_in(adj: &[Vec<usize>], nodes: &[usize]) -> bool {
    let mut inside = vec![false; adj.len()];
    for &u in nodes {
        inside[u] = true;
    }
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![nodes[0]];
    seen[nodes[0]] = true;
    let mut count = 0;
    while let Some(u) = stack.pop() {
        count += 1;
        for &w in &adj[u] {
            if inside[w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    count == nodes.len()
}

/// Roots the host at a node of vertex 0's subtree, contracts the nodes that are not the
/// top of some subtree, and expands each remaining node into a path of the vertices whose
/// subtree starts there (ascending); child nodes hang below the last vertex of the path.
pub fn treelayout_from_model(m: &TreeIntersectionModel) -> Result<TreeLayout, TreeLayoutError> {
    m.validate()?;
    let n = m.subtrees.len();
    if n == 0 {
        return Err(TreeLayoutError::MalformedModel("model has no vertices".into()));
    }
    let adj = m.host_adjacency();
    let root = m.subtrees[0][0];
    let mut host_parent = vec![None; m.host_nodes];
    let mut depth = vec![0usize; m.host_nodes];
    let mut bfs = Vec::with_capacity(m.host_nodes);
    let mut seen = vec![false; m.host_nodes];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(u) = queue.pop_front() {
        bfs.push(u);
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                host_parent[w] = Some(u);
                depth[w] = depth[u] + 1;
                queue.push_back(w);
            }
        }
    }

    let mut starting_here: Vec<Vec<Vertex>> = vec![Vec::new(); m.host_nodes];
    for (x, s) in m.subtrees.iter().enumerate() {
        let top = *s.iter().min_by_key(|&&u| depth[u]).expect("non-empty subtree");
        starting_here[top].push(x);
    }

    // For every host node, the last vertex of the nearest kept node at or above it.
    let mut attach: Vec<Option<Vertex>> = vec![None; m.host_nodes];
    let mut parent = vec![None; n];
    for &u in &bfs {
        let above = host_parent[u].and_then(|p| attach[p]);
        if starting_here[u].is_empty() {
            attach[u] = above;
            continue;
        }
        let mut prev = above;
        for &x in &starting_here[u] {
            parent[x] = prev;
            prev = Some(x);
        }
        attach[u] = prev;
    }
    TreeLayout::from_parents(parent)
}

/// Each vertex gets the smallest subtree of the layout tree containing it and its lowest
/// neighbours below it.
pub fn model_from_treelayout(g: &Graph, t: &TreeLayout) -> Result<TreeIntersectionModel, TreeLayoutError> {
    check_tree_layout(g, t)?;
    require_free(g, t, "int")?;
    let n = g.n();
    let host_edges: Vec<(usize, usize)> = (0..n).filter_map(|v| t.parent(v).map(|p| (p, v))).collect();
    let mut subtrees = Vec::with_capacity(n);
    for x in g.vertices() {
        let below: Vec<Vertex> = g.adjacent(x).iter().copied().filter(|&y| t.is_ancestor(x, y)).collect();
        let lowest = below.iter().copied().filter(|&y| !below.iter().any(|&z| t.is_ancestor(y, z)));
        let mut nodes = VertexSet::singleton(x);
        for y in lowest {
            let mut cur = y;
            while cur != x && nodes.insert(cur) {
                cur = t.parent(cur).expect("descendant of x has a parent");
            }
        }
        subtrees.push(nodes.into_vec());
    }
    TreeIntersectionModel::new(n, host_edges, subtrees)
}

/// Preorder of `t` with children by ascending vertex.
pub fn flatten_dfs(g: &Graph, t: &TreeLayout) -> Result<Layout, TreeLayoutError> {
    check_tree_layout(g, t)?;
    require_free(g, t, "chordal")?;
    Ok(Layout::new(t.preorder()).expect("preorder is a permutation"))
}

fn require_free(g: &Graph, t: &TreeLayout, set: &str) -> Result<(), TreeLayoutError> {
    for p in builtin_pattern_set(set).expect("builtin set").patterns {
        if let Some(tuple) = treelayout_occurrences(g, t, &p).into_iter().next() {
            return Err(TreeLayoutError::PatternOccurs { pattern: p.to_string(), tuple });
        }
    }
    Ok(())
}
