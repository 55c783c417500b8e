//! Simple undirected graphs on dense vertex identifiers.

mod dot;
mod generate;
mod io;

pub use generate::{generate, GraphKind};
pub use io::{parse_edge_list, write_edge_list};
pub(crate) use dot::escape as dot_escape;

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}

/// A set of vertices kept sorted by identifier.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn singleton(v: Vertex) -> Self {
        VertexSet(vec![v])
    }

    /// Builds a set from vertices that are already strictly increasing.
    pub fn from_sorted(vertices: Vec<Vertex>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        VertexSet(vertices)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(i) => {
                self.0.insert(i, v);
                true
            }
        }
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        match self.0.binary_search(&v) {
            Ok(i) => {
                self.0.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = Vertex> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn first(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Vertex> {
        self.0.last().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] < b[j] {
                out.push(a[i]);
                i += 1;
            } else if b[j] < a[i] {
                out.push(b[j]);
                j += 1;
            } else {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        VertexSet(out)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().all(|&v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| !other.contains(v))
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut v: Vec<Vertex> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl From<Vec<Vertex>> for VertexSet {
    fn from(v: Vec<Vertex>) -> Self {
        v.into_iter().collect()
    }
}

impl<const N: usize> From<[Vertex; N]> for VertexSet {
    fn from(v: [Vertex; N]) -> Self {
        v.into_iter().collect()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = Vertex;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, Vertex>>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// Undirected simple graph with vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    names: Option<Vec<String>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], names: None }
    }

    /// Builds a graph, rejecting loops, duplicate edges and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Err(GraphError::DuplicateEdge(u.min(v), u.max(v))),
            Err(i) => {
                self.adj[u].insert(i, v);
                let j = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(j, u);
                Ok(())
            }
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.n(), "one name per vertex");
        self.names = Some(names);
        self
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display label of a vertex: its name when present, otherwise its identifier.
    pub fn label(&self, v: Vertex) -> String {
        match &self.names {
            Some(names) => names[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<Vertex> {
        self.names.as_ref()?.iter().position(|s| s == name)
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    /// Sorted neighbor list of `v`; panics when `v` is out of range.
    pub fn adjacent(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn neighbors(&self, v: Vertex) -> Result<VertexSet, GraphError> {
        if v >= self.n() {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() });
        }
        Ok(VertexSet::from_sorted(self.adj[v].clone()))
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().copied().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// `s \ {x}` is contained in the neighbourhood of `x`.
    pub fn is_universal_to(&self, x: Vertex, s: &VertexSet) -> bool {
        s.iter().all(|y| y == x || self.has_edge(x, y))
    }

    /// Trace of the neighbourhood of `v` on `s`.
    pub fn neighbors_in(&self, v: Vertex, s: &VertexSet) -> VertexSet {
        VertexSet::from_sorted(self.adj[v].iter().copied().filter(|&u| s.contains(u)).collect())
    }

    /// Vertices outside `s` with a neighbour in `s`.
    pub fn open_neighborhood(&self, s: &VertexSet) -> VertexSet {
        s.iter()
            .flat_map(|v| self.adj[v].iter().copied())
            .filter(|&u| !s.contains(u))
            .collect()
    }

    /// Components of the graph minus `removed`, each sorted, ordered by minimum vertex.
    pub fn connected_components(&self, removed: &VertexSet) -> Vec<VertexSet> {
        let n = self.n();
        let mut seen = vec![false; n];
        for v in removed {
            if v < n {
                seen[v] = true;
            }
        }
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp.into_iter().collect());
        }
        out
    }

    /// Components of the subgraph induced by `within`.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut mark = vec![false; self.n()];
        for v in within {
            mark[v] = true;
        }
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for start in within {
            if !mark[start] {
                continue;
            }
            mark[start] = false;
            stack.push(start);
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &w in &self.adj[u] {
                    if mark[w] {
                        mark[w] = false;
                        stack.push(w);
                    }
                }
            }
            out.push(comp.into_iter().collect());
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.connected_components(&VertexSet::new()).len() == 1
    }

    pub fn induced_subgraph(&self, vertices: &VertexSet) -> Graph {
        let index: Vec<Option<usize>> = {
            let mut idx = vec![None; self.n()];
            for (i, v) in vertices.iter().enumerate() {
                idx[v] = Some(i);
            }
            idx
        };
        let mut g = Graph::empty(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            g.adj[i] = self.adj[v].iter().filter_map(|&u| index[u]).collect();
        }
        if let Some(names) = &self.names {
            g.names = Some(vertices.iter().map(|v| names[v].clone()).collect());
        }
        g
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n());
        let mut g = Graph::empty(self.n());
        for v in self.vertices() {
            let mut nb: Vec<Vertex> = self.adj[v].iter().map(|&u| perm[u]).collect();
            nb.sort_unstable();
            g.adj[perm[v]] = nb;
        }
        if let Some(names) = &self.names {
            let mut renamed = vec![String::new(); self.n()];
            for v in self.vertices() {
                renamed[perm[v]] = names[v].clone();
            }
            g.names = Some(renamed);
        }
        g
    }

    /// True when `f` maps every edge onto an edge and the edge counts agree.
    pub fn is_isomorphism(&self, other: &Graph, f: &[Vertex]) -> bool {
        if self.n() != other.n() || f.len() != self.n() || self.edge_count() != other.edge_count() {
            return false;
        }
        let mut hit = vec![false; other.n()];
        for &y in f {
            if y >= other.n() || hit[y] {
                return false;
            }
            hit[y] = true;
        }
        self.edges().all(|(u, v)| other.has_edge(f[u], f[v]))
    }

    pub fn to_dot(&self) -> String {
        dot::graph_to_dot(self)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n())?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}-{}", self.label(u), self.label(v))?;
        }
        write!(f, "])")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn neighbors_of_triangle_vertex() {
        let k3 = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(k3.neighbors(0).unwrap(), VertexSet::from([1, 2]));
        assert!(matches!(k3.neighbors(3), Err(GraphError::VertexOutOfRange { .. })));
        assert!(Graph::empty(4).neighbors(2).unwrap().is_empty());
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        assert_eq!(Graph::from_edges(2, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(Graph::from_edges(2, &[(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert!(Graph::from_edges(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn components_of_path_minus_middle() {
        let g = p3();
        let comps = g.connected_components(&VertexSet::from([1]));
        assert_eq!(comps, vec![VertexSet::from([0]), VertexSet::from([2])]);
        assert_eq!(g.connected_components(&VertexSet::new()), vec![VertexSet::from([0, 1, 2])]);
    }

    #[test]
    fn universality_excludes_self() {
        let g = p3();
        assert!(!g.is_universal_to(0, &VertexSet::from([1, 2])));
        assert!(g.is_universal_to(1, &VertexSet::from([0, 1, 2])));
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(k4.is_universal_to(0, &VertexSet::from([1, 2, 3])));
    }

    #[test]
    fn vertex_set_algebra() {
        let a = VertexSet::from([1, 3, 5]);
        let b = VertexSet::from([3, 4]);
        assert_eq!(a.union(&b), VertexSet::from([1, 3, 4, 5]));
        assert_eq!(a.intersection(&b), VertexSet::from([3]));
        assert_eq!(a.difference(&b), VertexSet::from([1, 5]));
        assert!(VertexSet::from([3]).is_subset(&a));
        assert!(!b.is_subset(&a));
    }

    #[test]
    fn relabel_preserves_isomorphism() {
        let g = p3();
        let h = g.relabel(&[2, 0, 1]);
        assert!(h.has_edge(2, 0) && h.has_edge(0, 1) && !h.has_edge(2, 1));
        assert!(g.is_isomorphism(&h, &[2, 0, 1]));
        assert!(!g.is_isomorphism(&h, &[0, 1, 2]));
    }
}
