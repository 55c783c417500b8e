//! FPQ-hierarchies: FPQ-trees linked by labelled skeleton edges, their realizations as
//! rooted trees, and the canonical hierarchy of all indifference tree-layouts at a root.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::{block_tree, nested_collection_of_block, BlockError, BlockTree};
use crate::exec::{self, Strategy};
use crate::fpq::{nested_convex_fpq, permutations, Elem, FpqError, FpqTree, NodeId, NodeKind};
use crate::graph::{dot_escape, Graph, Vertex, VertexSet};
use crate::treelayout::{is_indifference, IndifferenceMethod, TreeLayout};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("malformed hierarchy: {0}")]
    Malformed(String),
    #[error("the tree-layout is not an indifference tree-layout")]
    NotIndifference,
    #[error(transparent)]
    Block(#[from] BlockError),
    #[error(transparent)]
    Fpq(#[from] FpqError),
    #[error("block {0}: traces from below are not nested")]
    NotNested(usize),
    #[error("block {0}: no order satisfies its nested collection")]
    EmptyNestedConvex(usize),
    #[error("block {0}: its neighbourhood in the parent block is not a factor")]
    Unattachable(usize),
    #[error("choice does not fit the hierarchy: {0}")]
    InconsistentChoice(String),
    #[error("{count} realizations exceed the limit of {limit}")]
    LimitExceeded { count: u128, limit: u128 },
    #[error("hierarchy carries no ancestor counts")]
    Undecorated,
    #[error("ancestor counts are inconsistent: {0}")]
    Corrupt(String),
    #[error("json: {0}")]
    Json(String),
}

/// Link from the root of tree `tree` to node `host_node` of tree `host_tree`. The label
/// `(a, b)` is a 1-based range over the host node's stated children; a leaf host carries
/// `(1, 1)`. `a_hat` counts the ancestors outside the block adjacent to it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SkeletonEdge {
    pub tree: usize,
    pub host_tree: usize,
    pub host_node: NodeId,
    pub a: usize,
    pub b: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_hat: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpqHierarchy {
    trees: Vec<FpqTree>,
    skeleton: Vec<SkeletonEdge>,
    tree_of: Vec<usize>,
    edge_into: Vec<Option<usize>>,
}

#[derive(Serialize, Deserialize)]
struct HierarchyJson {
    trees: Vec<String>,
    skeleton: Vec<SkeletonEdge>,
}

impl FpqHierarchy {
    /// Validates that the trees partition `0..n`, the skeleton is a tree rooted at tree 0
    /// and every label fits its host node.
    pub fn new(trees: Vec<FpqTree>, mut skeleton: Vec<SkeletonEdge>) -> Result<FpqHierarchy, HierarchyError> {
        let bad = |m: String| Err(HierarchyError::Malformed(m));
        if trees.is_empty() {
            return bad("no trees".into());
        }
        let n: usize = trees.iter().map(|t| t.ground().len()).sum();
        let mut tree_of = vec![usize::MAX; n];
        for (i, t) in trees.iter().enumerate() {
            for e in t.ground() {
                if e >= n || tree_of[e] != usize::MAX {
                    return bad(format!("element {e} is repeated or outside 0..{n}"));
                }
                tree_of[e] = i;
            }
        }
        if skeleton.len() + 1 != trees.len() {
            return bad(format!("{} trees need {} skeleton edges", trees.len(), trees.len() - 1));
        }
        skeleton.sort_by_key(|e| e.tree);
        let mut edge_into = vec![None; trees.len()];
        for (k, e) in skeleton.iter().enumerate() {
            if e.tree == 0 || e.tree >= trees.len() || edge_into[e.tree].is_some() {
                return bad(format!("skeleton edge into tree {} is invalid or repeated", e.tree));
            }
            if e.host_tree >= trees.len() || e.host_tree == e.tree {
                return bad(format!("skeleton edge into tree {} has host tree {}", e.tree, e.host_tree));
            }
            let host = &trees[e.host_tree];
            if e.host_node >= host.len() {
                return bad(format!("host node {} out of range", e.host_node));
            }
            let c = match host.kind(e.host_node) {
                NodeKind::Leaf(_) => 1,
                _ => host.children(e.host_node).len(),
            };
            if e.a < 1 || e.a > e.b || e.b > c {
                return bad(format!("label [{},{}] does not fit a node with {c} children", e.a, e.b));
            }
            if host.kind(e.host_node) == NodeKind::P && (e.a, e.b) != (1, c) {
                return bad(format!("label into a P-node with {c} children must be [1,{c}]"));
            }
            edge_into[e.tree] = Some(k);
        }
        for start in 1..trees.len() {
            let mut cur = start;
            for _ in 0..trees.len() {
                match edge_into[cur] {
                    Some(k) => cur = skeleton[k].host_tree,
                    None => break,
                }
            }
            if cur != 0 {
                return bad(format!("tree {start} does not reach the root tree"));
            }
        }
        Ok(FpqHierarchy { trees, skeleton, tree_of, edge_into })
    }

    /// Number of elements across all trees.
    pub fn n(&self) -> usize {
        self.tree_of.len()
    }

    pub fn trees(&self) -> &[FpqTree] {
        &self.trees
    }

    pub fn tree(&self, i: usize) -> &FpqTree {
        &self.trees[i]
    }

    /// Skeleton edges sorted by target tree.
    pub fn skeleton(&self) -> &[SkeletonEdge] {
        &self.skeleton
    }

    pub fn tree_of(&self, e: Elem) -> usize {
        self.tree_of[e]
    }

    pub fn edge_into(&self, tree: usize) -> Option<&SkeletonEdge> {
        self.edge_into[tree].map(|k| &self.skeleton[k])
    }

    /// Skeleton edges leaving node `node` of tree `tree`.
    pub fn edges_at(&self, tree: usize, node: NodeId) -> impl Iterator<Item = &SkeletonEdge> + '_ {
        self.skeleton.iter().filter(move |e| e.host_tree == tree && e.host_node == node)
    }

    pub fn is_decorated(&self) -> bool {
        self.skeleton.iter().all(|e| e.a_hat.is_some())
    }

    pub fn without_decoration(&self) -> FpqHierarchy {
        let mut h = self.clone();
        for e in &mut h.skeleton {
            e.a_hat = None;
        }
        h
    }

    /// Number of choice vectors, saturating.
    pub fn choice_count(&self) -> u128 {
        self.trees.iter().fold(1u128, |acc, t| acc.saturating_mul(t.choice_count()))
    }

    pub fn to_json(&self) -> String {
        let doc = HierarchyJson { trees: self.trees.iter().map(FpqTree::to_sexpr).collect(), skeleton: self.skeleton.clone() };
        serde_json::to_string(&doc).expect("hierarchy serialises")
    }

    pub fn from_json(text: &str) -> Result<FpqHierarchy, HierarchyError> {
        let doc: HierarchyJson = serde_json::from_str(text).map_err(|e| HierarchyError::Json(e.to_string()))?;
        let trees = doc.trees.iter().map(|s| FpqTree::parse_sexpr(s)).collect::<Result<Vec<_>, _>>()?;
        FpqHierarchy::new(trees, doc.skeleton)
    }

    pub fn to_dot(&self) -> String {
        self.to_dot_with(&|e| e.to_string())
    }

    /// One cluster per tree; skeleton edges are dashed and labelled `[a,b]`, followed by
    /// `(a_hat)` when decorated.
    pub fn to_dot_with(&self, label: &dyn Fn(Elem) -> String) -> String {
        let mut out = String::from("digraph hierarchy {\n  node [shape=circle];\n");
        for (i, t) in self.trees.iter().enumerate() {
            let _ = writeln!(out, "  subgraph cluster_{i} {{\n    label=\"T{i}\";");
            for id in 0..t.len() {
                let text = match t.kind(id) {
                    NodeKind::Leaf(e) => label(e),
                    kind => kind.token().to_string(),
                };
                let _ = writeln!(out, "    t{i}_{id} [label=\"{}\"];", dot_escape(&text));
            }
            for id in t.internal_nodes() {
                for &c in t.children(id) {
                    let _ = writeln!(out, "    t{i}_{id} -> t{i}_{c};");
                }
            }
            out.push_str("  }\n");
        }
        for e in &self.skeleton {
            let mut text = format!("[{},{}]", e.a, e.b);
            if let Some(k) = e.a_hat {
                let _ = write!(text, " ({k})");
            }
            let _ = writeln!(out, "  t{}_0 -> t{}_{} [style=dashed, dir=none, label=\"{text}\"];", e.tree, e.host_tree, e.host_node);
        }
        out.push_str("}\n");
        out
    }
}

/// How one node is ordered in a realization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeChoice {
    /// Leaves and F-nodes.
    Keep,
    Reverse(bool),
    /// New order of a P-node's children as indices into the stated order.
    Permute(Vec<usize>),
}

/// One `NodeChoice` per node of every tree, indexed `[tree][node]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RealizationChoice {
    pub nodes: Vec<Vec<NodeChoice>>,
}

impl RealizationChoice {
    /// Stated orders everywhere.
    pub fn identity(h: &FpqHierarchy) -> RealizationChoice {
        RealizationChoice { nodes: h.trees.iter().map(identity_choices).collect() }
    }

    pub fn check(&self, h: &FpqHierarchy) -> Result<(), HierarchyError> {
        let bad = |m: String| Err(HierarchyError::InconsistentChoice(m));
        if self.nodes.len() != h.trees.len() {
            return bad(format!("{} trees, {} choice lists", h.trees.len(), self.nodes.len()));
        }
        for (i, (t, cs)) in h.trees.iter().zip(&self.nodes).enumerate() {
            if cs.len() != t.len() {
                return bad(format!("tree {i} has {} nodes, {} choices", t.len(), cs.len()));
            }
            for (id, c) in cs.iter().enumerate() {
                let ok = match (t.kind(id), c) {
                    (NodeKind::Leaf(_) | NodeKind::F, NodeChoice::Keep) => true,
                    (NodeKind::Q, NodeChoice::Reverse(_)) => true,
                    (NodeKind::P, NodeChoice::Permute(p)) => {
                        let k = t.children(id).len();
                        let mut sorted = p.clone();
                        sorted.sort_unstable();
                        sorted == (0..k).collect::<Vec<_>>()
                    }
                    _ => false,
                };
                if !ok {
                    return bad(format!("tree {i} node {id}: {c:?} does not fit {:?}", t.kind(id)));
                }
            }
        }
        Ok(())
    }
}

fn identity_choices(t: &FpqTree) -> Vec<NodeChoice> {
    (0..t.len())
        .map(|id| match t.kind(id) {
            NodeKind::Q => NodeChoice::Reverse(false),
            NodeKind::P => NodeChoice::Permute((0..t.children(id).len()).collect()),
            _ => NodeChoice::Keep,
        })
        .collect()
}

/// Every choice vector of one tree.
fn tree_choice_vectors(t: &FpqTree) -> Vec<Vec<NodeChoice>> {
    let mut out = vec![identity_choices(t)];
    for id in t.internal_nodes() {
        let options: Vec<NodeChoice> = match t.kind(id) {
            NodeKind::Q if t.children(id).len() > 1 => vec![NodeChoice::Reverse(false), NodeChoice::Reverse(true)],
            NodeKind::P => permutations(t.children(id).len()).into_iter().map(NodeChoice::Permute).collect(),
            _ => continue,
        };
        out = out
            .iter()
            .flat_map(|base| {
                options.iter().map(move |o| {
                    let mut v = base.clone();
                    v[id] = o.clone();
                    v
                })
            })
            .collect();
    }
    out
}

/// Positions of `id`'s stated children in realized order.
fn realized_order(t: &FpqTree, choice: &[NodeChoice], id: NodeId) -> Vec<usize> {
    let k = t.children(id).len();
    match &choice[id] {
        NodeChoice::Reverse(true) => (0..k).rev().collect(),
        NodeChoice::Permute(p) => p.clone(),
        _ => (0..k).collect(),
    }
}

fn realized_frontier(t: &FpqTree, choice: &[NodeChoice], id: NodeId, out: &mut Vec<Elem>) {
    if let NodeKind::Leaf(e) = t.kind(id) {
        out.push(e);
        return;
    }
    for pos in realized_order(t, choice, id) {
        realized_frontier(t, choice, t.children(id)[pos], out);
    }
}

/// Leaf below which a child tree hangs: among the labelled children of the host, the one
/// placed last, then its last leaf.
fn attachment_leaf(t: &FpqTree, choice: &[NodeChoice], e: &SkeletonEdge) -> Elem {
    if let NodeKind::Leaf(v) = t.kind(e.host_node) {
        return v;
    }
    let order = realized_order(t, choice, e.host_node);
    let pos = *order.iter().rev().find(|&&p| p + 1 >= e.a && p < e.b).expect("label within children");
    let mut leaves = Vec::new();
    realized_frontier(t, choice, t.children(e.host_node)[pos], &mut leaves);
    *leaves.last().expect("subtree has leaves")
}

/// The rooted tree obtained by laying each tree's leaves on a path and hanging child
/// trees below their attachment leaves.
pub fn realize(h: &FpqHierarchy, c: &RealizationChoice) -> Result<TreeLayout, HierarchyError> {
    c.check(h)?;
    let mut parent: Vec<Option<Vertex>> = vec![None; h.n()];
    for (i, t) in h.trees.iter().enumerate() {
        let mut path = Vec::with_capacity(t.ground().len());
        realized_frontier(t, &c.nodes[i], 0, &mut path);
        for w in path.windows(2) {
            parent[w[1]] = Some(w[0]);
        }
        if let Some(e) = h.edge_into(i) {
            parent[path[0]] = Some(attachment_leaf(&h.trees[e.host_tree], &c.nodes[e.host_tree], e));
        }
    }
    TreeLayout::from_parents(parent).map_err(|e| HierarchyError::Malformed(e.to_string()))
}

/// All distinct realizations, sorted.
pub fn enumerate_realizations(h: &FpqHierarchy, limit: u128) -> Result<Vec<TreeLayout>, HierarchyError> {
    enumerate_realizations_with(h, limit, Strategy::default())
}

pub fn enumerate_realizations_with(h: &FpqHierarchy, limit: u128, strategy: Strategy) -> Result<Vec<TreeLayout>, HierarchyError> {
    let count = h.choice_count();
    if count > limit {
        return Err(HierarchyError::LimitExceeded { count, limit });
    }
    let mut choices: Vec<Vec<Vec<NodeChoice>>> = vec![Vec::new()];
    for t in &h.trees {
        let per_tree = tree_choice_vectors(t);
        choices = choices
            .into_iter()
            .flat_map(|prefix| {
                per_tree.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.clone());
                    p
                })
            })
            .collect();
    }
    let mut out: Vec<TreeLayout> =
        exec::map(strategy, &choices, |nodes| realize(h, &RealizationChoice { nodes: nodes.clone() }).expect("generated choices fit"));
    out.sort();
    out.dedup();
    Ok(out)
}

/// Per block, the FPQ-tree of its nested collection; each child block hangs at the least
/// common ancestor of its neighbourhood in the parent block, labelled by the exact range
/// of children covering it.
pub fn assemble(g: &Graph, bt: &BlockTree) -> Result<FpqHierarchy, HierarchyError> {
    let mut trees = Vec::with_capacity(bt.len());
    for b in 0..bt.len() {
        let collection = match nested_collection_of_block(g, bt, b) {
            Ok(c) => c,
            Err(BlockError::NotNested(_)) => return Err(HierarchyError::NotNested(b)),
            Err(e) => return Err(e.into()),
        };
        trees.push(nested_convex_fpq(&collection).ok_or(HierarchyError::EmptyNestedConvex(b))?);
    }
    let mut skeleton = Vec::with_capacity(bt.len().saturating_sub(1));
    for b in 1..bt.len() {
        let p = bt.parent(b).expect("non-root block has a parent");
        let z = bt.block(b).first().expect("non-empty block");
        let touching = g.neighbors_in(z, bt.block(p));
        let host = &trees[p];
        let u = host.lca(&touching).ok_or(HierarchyError::Unattachable(b))?;
        let (a, last) = match host.kind(u) {
            NodeKind::Leaf(_) => (1, 1),
            _ => {
                let (i, j) = host.child_range(u, &touching).ok_or(HierarchyError::Unattachable(b))?;
                (i + 1, j + 1)
            }
        };
        skeleton.push(SkeletonEdge { tree: b, host_tree: p, host_node: u, a, b: last, a_hat: None });
    }
    FpqHierarchy::new(trees, skeleton)
}

/// The hierarchy whose realizations are the indifference tree-layouts rooted at the
/// root of `t`.
pub fn canonical_hierarchy(g: &Graph, t: &TreeLayout) -> Result<FpqHierarchy, HierarchyError> {
    if t.n() != g.n() || !is_indifference(g, t, IndifferenceMethod::Nested) {
        return Err(HierarchyError::NotIndifference);
    }
    let bt = block_tree(g, t.root())?.ok_or(HierarchyError::NotIndifference)?;
    assemble(g, &bt)
}

/// Fills every skeleton edge with the number of ancestors of its block in `t` that are
/// adjacent to the block.
pub fn decorate(g: &Graph, t: &TreeLayout, h: &FpqHierarchy) -> Result<FpqHierarchy, HierarchyError> {
    if t.n() != h.n() || g.n() != h.n() {
        return Err(HierarchyError::Malformed("graph, layout and hierarchy sizes differ".into()));
    }
    let mut out = h.clone();
    for e in &mut out.skeleton {
        let block = h.trees[e.tree].ground();
        let top = block.iter().min_by_key(|&v| t.depth(v)).expect("non-empty block");
        let above = t.ancestor_set(top);
        let seen = g.open_neighborhood(block).intersection(&above);
        e.a_hat = Some(seen.len());
    }
    Ok(out)
}

/// The graph for which `realize(h, c)` is an indifference tree-layout: every vertex is
/// adjacent to the vertices directly above it, as many as precede it in its block plus
/// the block's ancestor count.
pub fn reconstruct_graph(h: &FpqHierarchy, c: &RealizationChoice) -> Result<Graph, HierarchyError> {
    if !h.is_decorated() {
        return Err(HierarchyError::Undecorated);
    }
    let t = realize(h, c)?;
    let mut g = Graph::empty(h.n());
    for (i, tree) in h.trees.iter().enumerate() {
        let extra = h.edge_into(i).map_or(0, |e| e.a_hat.expect("decorated"));
        let mut path = Vec::new();
        realized_frontier(tree, &c.nodes[i], 0, &mut path);
        for (pos, &z) in path.iter().enumerate() {
            let reach = pos + extra;
            let above = t.ancestors(z);
            if reach > above.len() {
                return Err(HierarchyError::Corrupt(format!("vertex {z} needs {reach} ancestors, has {}", above.len())));
            }
            for &u in &above[..reach] {
                g.add_edge(z, u).map_err(|e| HierarchyError::Corrupt(e.to_string()))?;
            }
        }
    }
    if !g.is_connected() || !is_indifference(&g, &t, IndifferenceMethod::Nested) {
        return Err(HierarchyError::Corrupt("realization is not an indifference tree-layout of the result".into()));
    }
    Ok(g)
}

/// Elements of each tree, in tree order.
pub fn tree_grounds(h: &FpqHierarchy) -> Vec<VertexSet> {
    h.trees.iter().map(|t| t.ground().clone()).collect()
}
