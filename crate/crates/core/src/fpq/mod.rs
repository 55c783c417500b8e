//! FPQ-trees: ordered trees whose internal nodes are frozen (F), permutable (P) or
//! reversible (Q), each encoding a set of permutations of its leaves.

mod convex;
mod nested;
mod sexpr;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::VertexSet;

pub use convex::convex_pq;
pub use nested::{nested_convex_fpq, NestedCollection};

pub type Elem = usize;
pub type NodeId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FpqError {
    #[error("malformed FPQ-tree: {0}")]
    Malformed(String),
    #[error("{count} permutations exceed the limit of {limit}")]
    LimitExceeded { count: u128, limit: u128 },
    #[error("ground sets differ")]
    GroundMismatch,
    #[error("parse error at token {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("invalid nested collection: {0}")]
    InvalidCollection(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Leaf(Elem),
    F,
    P,
    Q,
}

impl NodeKind {
    pub fn is_leaf(self) -> bool {
        matches!(self, NodeKind::Leaf(_))
    }

    pub fn token(self) -> Token {
        match self {
            NodeKind::Leaf(_) => Token::Leaf,
            NodeKind::F => Token::F,
            NodeKind::P => Token::P,
            NodeKind::Q => Token::Q,
        }
    }
}

/// Code alphabet shared with hierarchy codes. Variant order is the comparison order:
/// node types, then integers, then delimiters, then element labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Leaf,
    F,
    P,
    Q,
    Num(u64),
    Open,
    Close,
    Elem(usize),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Leaf => f.write_str("L"),
            Token::F => f.write_str("F"),
            Token::P => f.write_str("P"),
            Token::Q => f.write_str("Q"),
            Token::Num(k) => write!(f, "{k}"),
            Token::Open => f.write_str("<"),
            Token::Close => f.write_str(">"),
            Token::Elem(e) => write!(f, "@{e}"),
        }
    }
}

/// Recursive description used to build trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Leaf(Elem),
    Node(NodeKind, Vec<Shape>),
}

impl Shape {
    pub fn node(kind: NodeKind, children: Vec<Shape>) -> Shape {
        Shape::Node(kind, children)
    }

    /// Collapses unary internal nodes and retypes binary P-nodes as Q.
    fn normalized(self) -> Shape {
        match self {
            Shape::Leaf(e) => Shape::Leaf(e),
            Shape::Node(kind, children) => {
                let mut children: Vec<Shape> = children.into_iter().map(Shape::normalized).collect();
                if children.len() == 1 {
                    return children.pop().expect("one child");
                }
                let kind = if kind == NodeKind::P && children.len() == 2 { NodeKind::Q } else { kind };
                Shape::Node(kind, children)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Node {
    kind: NodeKind,
    children: Vec<NodeId>,
}

/// Nodes are stored in preorder; node ids are preorder indices and the root is node 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpqTree {
    nodes: Vec<Node>,
    parent: Vec<Option<NodeId>>,
    depth: Vec<usize>,
    leaves: Vec<VertexSet>,
    leaf_of: BTreeMap<Elem, NodeId>,
}

impl FpqTree {
    /// Builds a tree in normal form from `shape`; a lone leaf becomes the degenerate
    /// Q-node over one leaf.
    pub fn from_shape(shape: Shape) -> Result<FpqTree, FpqError> {
        let shape = match shape.normalized() {
            Shape::Leaf(e) => Shape::Node(NodeKind::Q, vec![Shape::Leaf(e)]),
            other => other,
        };
        Self::from_shape_exact(shape)
    }

    /// Builds a tree exactly as described, checking only structural sanity.
    pub fn from_shape_exact(shape: Shape) -> Result<FpqTree, FpqError> {
        let mut nodes = Vec::new();
        let mut parent = Vec::new();
        let mut depth = Vec::new();
        // Iterative preorder: (shape, parent, depth, slot in parent's child list).
        let mut stack: Vec<(Shape, Option<NodeId>, usize)> = vec![(shape, None, 0)];
        while let Some((s, p, d)) = stack.pop() {
            let id = nodes.len();
            if let Some(p) = p {
                let node: &mut Node = &mut nodes[p];
                node.children.push(id);
            }
            parent.push(p);
            depth.push(d);
            match s {
                Shape::Leaf(e) => nodes.push(Node { kind: NodeKind::Leaf(e), children: Vec::new() }),
                Shape::Node(kind, children) => {
                    if kind.is_leaf() {
                        return Err(FpqError::Malformed("leaf kind used for an internal node".into()));
                    }
                    if children.is_empty() {
                        return Err(FpqError::Malformed("internal node without children".into()));
                    }
                    nodes.push(Node { kind, children: Vec::with_capacity(children.len()) });
                    for c in children.into_iter().rev() {
                        stack.push((c, Some(id), d + 1));
                    }
                }
            }
        }
        let mut leaves = vec![VertexSet::new(); nodes.len()];
        let mut leaf_of = BTreeMap::new();
        for id in (0..nodes.len()).rev() {
            if let NodeKind::Leaf(e) = nodes[id].kind {
                if leaf_of.insert(e, id).is_some() {
                    return Err(FpqError::Malformed(format!("element {e} appears twice")));
                }
                leaves[id] = VertexSet::singleton(e);
            } else {
                let mut acc = VertexSet::new();
                for &c in &nodes[id].children {
                    acc = acc.union(&leaves[c]);
                }
                leaves[id] = acc;
            }
        }
        Ok(FpqTree { nodes, parent, depth, leaves, leaf_of })
    }

    pub fn leaf(e: Elem) -> FpqTree {
        FpqTree::from_shape(Shape::Leaf(e)).expect("single leaf")
    }

    pub fn shape(&self) -> Shape {
        self.shape_at(0)
    }

    pub fn shape_at(&self, id: NodeId) -> Shape {
        match self.nodes[id].kind {
            NodeKind::Leaf(e) => Shape::Leaf(e),
            kind => Shape::Node(kind, self.nodes[id].children.iter().map(|&c| self.shape_at(c)).collect()),
        }
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn kind(&self, id: NodeId) -> NodeKind {
        self.nodes[id].kind
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].children
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.parent[id]
    }

    /// Elements below `id`.
    pub fn leaf_set(&self, id: NodeId) -> &VertexSet {
        &self.leaves[id]
    }

    pub fn ground(&self) -> &VertexSet {
        &self.leaves[0]
    }

    pub fn leaf_node(&self, e: Elem) -> Option<NodeId> {
        self.leaf_of.get(&e).copied()
    }

    pub fn internal_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).filter(|&id| !self.nodes[id].kind.is_leaf())
    }

    /// Leaves in stated order.
    pub fn frontier(&self) -> Vec<Elem> {
        self.frontier_at(0)
    }

    pub fn frontier_at(&self, id: NodeId) -> Vec<Elem> {
        // Preorder ids make the leaves of a subtree a contiguous id range in order.
        let end = id + self.subtree_len(id);
        (id..end).filter_map(|i| match self.nodes[i].kind {
            NodeKind::Leaf(e) => Some(e),
            _ => None,
        })
        .collect()
    }

    /// Number of nodes in the subtree of `id`.
    pub fn subtree_len(&self, id: NodeId) -> usize {
        let mut end = id + 1;
        while end < self.nodes.len() && self.depth[end] > self.depth[id] {
            end += 1;
        }
        end - id
    }

    /// Least common ancestor of the leaves of `elems`; `None` for an empty or foreign set.
    pub fn lca(&self, elems: &VertexSet) -> Option<NodeId> {
        let mut iter = elems.iter();
        let mut acc = self.leaf_node(iter.next()?)?;
        for e in iter {
            let mut other = self.leaf_node(e)?;
            while self.depth[acc] > self.depth[other] {
                acc = self.parent[acc]?;
            }
            while self.depth[other] > self.depth[acc] {
                other = self.parent[other]?;
            }
            while acc != other {
                acc = self.parent[acc]?;
                other = self.parent[other]?;
            }
        }
        Some(acc)
    }

    /// Child index range `(i, j)` (0-based, inclusive) of `id` whose leaves are exactly `set`.
    pub fn child_range(&self, id: NodeId, set: &VertexSet) -> Option<(usize, usize)> {
        let children = &self.nodes[id].children;
        let touched: Vec<usize> =
            (0..children.len()).filter(|&i| !self.leaves[children[i]].is_disjoint(set)).collect();
        let (&i, &j) = (touched.first()?, touched.last()?);
        let total: usize = (i..=j).map(|k| self.leaves[children[k]].len()).sum();
        let exact = touched.len() == j - i + 1
            && total == set.len()
            && (i..=j).all(|k| self.leaves[children[k]].is_subset(set));
        exact.then_some((i, j))
    }

    /// Number of orderings the node types allow, saturating at `u128::MAX`.
    pub fn choice_count(&self) -> u128 {
        self.internal_nodes().fold(1u128, |acc, id| acc.saturating_mul(node_choices(self.kind(id), self.children(id).len())))
    }

    /// Same tree with the stated child order of `id` replaced by `order` (indices into the
    /// current children).
    pub fn reordered(&self, id: NodeId, order: &[usize]) -> Result<FpqTree, FpqError> {
        let k = self.children(id).len();
        let mut seen = vec![false; k];
        if order.len() != k || order.iter().any(|&i| i >= k || std::mem::replace(&mut seen[i], true)) {
            return Err(FpqError::Malformed(format!("order {order:?} is not a permutation of {k} children")));
        }
        let mut shape_children = Vec::with_capacity(k);
        for &i in order {
            shape_children.push(self.shape_at(self.children(id)[i]));
        }
        self.replace_subtree(id, Shape::Node(self.kind(id), shape_children))
    }

    /// Same tree with the node `id` retyped.
    pub fn retyped(&self, id: NodeId, kind: NodeKind) -> Result<FpqTree, FpqError> {
        let children = self.children(id).iter().map(|&c| self.shape_at(c)).collect();
        self.replace_subtree(id, Shape::Node(kind, children))
    }

    fn replace_subtree(&self, id: NodeId, with: Shape) -> Result<FpqTree, FpqError> {
        fn rebuild(t: &FpqTree, at: NodeId, id: NodeId, with: &Shape) -> Shape {
            if at == id {
                return with.clone();
            }
            match t.kind(at) {
                NodeKind::Leaf(e) => Shape::Leaf(e),
                kind => Shape::Node(kind, t.children(at).iter().map(|&c| rebuild(t, c, id, with)).collect()),
            }
        }
        FpqTree::from_shape_exact(rebuild(self, 0, id, &with))
    }

    /// Labelled canonical code: F keeps its order, Q takes the smaller of both directions,
    /// P sorts its children.
    pub fn canonical_code(&self) -> Vec<Token> {
        self.canonical_code_at(0)
    }

    fn canonical_code_at(&self, id: NodeId) -> Vec<Token> {
        match self.kind(id) {
            NodeKind::Leaf(e) => vec![Token::Leaf, Token::Elem(e)],
            kind => {
                let mut codes: Vec<Vec<Token>> = self.children(id).iter().map(|&c| self.canonical_code_at(c)).collect();
                match kind {
                    NodeKind::P => codes.sort(),
                    NodeKind::Q => {
                        let mut rev = codes.clone();
                        rev.reverse();
                        if rev < codes {
                            codes = rev;
                        }
                    }
                    _ => {}
                }
                let mut out = vec![kind.token(), Token::Open];
                out.extend(codes.into_iter().flatten());
                out.push(Token::Close);
                out
            }
        }
    }

    pub fn to_sexpr(&self) -> String {
        self.to_sexpr_with(&|e| e.to_string())
    }

    pub fn to_sexpr_with(&self, label: &dyn Fn(Elem) -> String) -> String {
        sexpr::render(self, label)
    }

    pub fn parse_sexpr(text: &str) -> Result<FpqTree, FpqError> {
        Self::parse_sexpr_with(text, &|s| s.parse().ok())
    }

    pub fn parse_sexpr_with(text: &str, resolve: &dyn Fn(&str) -> Option<Elem>) -> Result<FpqTree, FpqError> {
        FpqTree::from_shape_exact(sexpr::parse(text, resolve)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.json_node(0)).expect("tree serialises")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<FpqTree, FpqError> {
        let node: JsonNode = serde_json::from_value(value.clone()).map_err(|e| FpqError::Malformed(e.to_string()))?;
        FpqTree::from_shape_exact(node.into_shape()?)
    }

    fn json_node(&self, id: NodeId) -> JsonNode {
        match self.kind(id) {
            NodeKind::Leaf(e) => JsonNode { kind: "L".into(), elem: Some(e), children: Vec::new() },
            kind => JsonNode {
                kind: kind.token().to_string(),
                elem: None,
                children: self.children(id).iter().map(|&c| self.json_node(c)).collect(),
            },
        }
    }
}

impl fmt::Display for FpqTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexpr())
    }
}

impl fmt::Debug for FpqTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexpr())
    }
}

#[derive(Serialize, Deserialize)]
struct JsonNode {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    elem: Option<Elem>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    children: Vec<JsonNode>,
}

impl JsonNode {
    fn into_shape(self) -> Result<Shape, FpqError> {
        let kind = match self.kind.as_str() {
            "L" => {
                let e = self.elem.ok_or_else(|| FpqError::Malformed("leaf without elem".into()))?;
                return Ok(Shape::Leaf(e));
            }
            "F" => NodeKind::F,
            "P" => NodeKind::P,
            "Q" => NodeKind::Q,
            other => return Err(FpqError::Malformed(format!("unknown node kind `{other}`"))),
        };
        let children = self.children.into_iter().map(JsonNode::into_shape).collect::<Result<_, _>>()?;
        Ok(Shape::Node(kind, children))
    }
}

pub(crate) fn node_choices(kind: NodeKind, children: usize) -> u128 {
    match kind {
        NodeKind::P => (2..=children as u128).fold(1u128, |a, k| a.saturating_mul(k)),
        NodeKind::Q if children >= 2 => 2,
        _ => 1,
    }
}

/// All permutations represented by `t`, sorted and deduplicated.
pub fn frontier_set(t: &FpqTree, limit: u128) -> Result<Vec<Vec<Elem>>, FpqError> {
    let count = t.choice_count();
    if count > limit {
        return Err(FpqError::LimitExceeded { count, limit });
    }
    fn orders(t: &FpqTree, id: NodeId) -> Vec<Vec<Elem>> {
        let kids = t.children(id);
        let child_orders: Vec<Vec<Vec<Elem>>> = kids.iter().map(|&c| orders(t, c)).collect();
        let arrangements: Vec<Vec<usize>> = match t.kind(id) {
            NodeKind::Leaf(e) => return vec![vec![e]],
            NodeKind::F => vec![(0..kids.len()).collect()],
            NodeKind::Q => {
                let fwd: Vec<usize> = (0..kids.len()).collect();
                let rev: Vec<usize> = fwd.iter().rev().copied().collect();
                if kids.len() > 1 {
                    vec![fwd, rev]
                } else {
                    vec![fwd]
                }
            }
            NodeKind::P => permutations(kids.len()),
        };
        let mut out = Vec::new();
        for arr in arrangements {
            let mut partial: Vec<Vec<Elem>> = vec![Vec::new()];
            for &i in &arr {
                let mut next = Vec::with_capacity(partial.len() * child_orders[i].len());
                for p in &partial {
                    for o in &child_orders[i] {
                        let mut q = p.clone();
                        q.extend_from_slice(o);
                        next.push(q);
                    }
                }
                partial = next;
            }
            out.extend(partial);
        }
        out
    }
    let mut all = orders(t, 0);
    all.sort();
    all.dedup();
    Ok(all)
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // Next lexicographic permutation.
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// Sets consecutive in every represented permutation, sorted by size then elements.
///
/// Besides node leaf sets and child ranges of Q- and F-nodes, runs of an F-node whose
/// frozen children are themselves expanded in place are factors, since nested frozen
/// nodes fix the relative order of everything below them.
pub fn factors(t: &FpqTree) -> Vec<VertexSet> {
    let mut out: HashSet<VertexSet> = HashSet::new();
    for e in t.ground() {
        out.insert(VertexSet::singleton(e));
    }
    for id in t.internal_nodes() {
        out.insert(t.leaf_set(id).clone());
        let items: Vec<&VertexSet> = match t.kind(id) {
            NodeKind::Q => t.children(id).iter().map(|&c| t.leaf_set(c)).collect(),
            NodeKind::F if t.parent(id).is_none_or(|p| t.kind(p) != NodeKind::F) => {
                frozen_items(t, id).into_iter().map(|c| t.leaf_set(c)).collect()
            }
            _ => continue,
        };
        for i in 0..items.len() {
            let mut acc = items[i].clone();
            for item in &items[i + 1..] {
                acc = acc.union(item);
                out.insert(acc.clone());
            }
        }
    }
    let mut v: Vec<VertexSet> = out.into_iter().collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v
}

/// Children of an F-node with nested F-children replaced by their own items.
fn frozen_items(t: &FpqTree, id: NodeId) -> Vec<NodeId> {
    let mut out = Vec::new();
    for &c in t.children(id) {
        if t.kind(c) == NodeKind::F {
            out.extend(frozen_items(t, c));
        } else {
            out.push(c);
        }
    }
    out
}

pub fn is_factor(t: &FpqTree, set: &VertexSet) -> bool {
    factors(t).contains(set)
}

/// Equality of the permute/reverse equivalence classes.
pub fn fpq_equivalent(t1: &FpqTree, t2: &FpqTree) -> Result<bool, FpqError> {
    if t1.ground() != t2.ground() {
        return Err(FpqError::GroundMismatch);
    }
    Ok(t1.canonical_code() == t2.canonical_code())
}
