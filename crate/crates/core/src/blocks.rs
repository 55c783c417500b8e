//! Blocks: maximal sets of vertices that behave alike towards an explored set, and the
//! block tree they form for a fixed root.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpq::NestedCollection;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::treelayout::TreeLayout;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(Vertex),
    #[error("{0:?} is not a connected component of the graph minus the given set")]
    NotAComponent(VertexSet),
    #[error("the blocks adjacent to {0:?} do not have a unique deepest member")]
    AmbiguousParent(VertexSet),
    #[error("component {0:?} contains no block")]
    NoBlock(VertexSet),
    #[error("neighbourhood traces on block {0:?} are not nested")]
    NotNested(VertexSet),
    #[error("block index {0} out of range")]
    BadIndex(usize),
    #[error("invalid block tree: {0}")]
    Invalid(String),
}

/// Blocks numbered breadth-first from the root block, children by smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockTree {
    blocks: Vec<VertexSet>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    block_of: Vec<usize>,
    attach_order: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct BlockTreeJson {
    blocks: Vec<Vec<Vertex>>,
    parent: Vec<Option<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    attach_order: Option<Vec<usize>>,
}

impl BlockTree {
    /// Renumbers `blocks` canonically. `attach` lists block indices (in the input
    /// numbering) in construction order.
    fn canonical(n: usize, blocks: Vec<VertexSet>, parent: Vec<Option<usize>>, attach: Vec<usize>) -> Result<BlockTree, BlockError> {
        let k = blocks.len();
        let roots: Vec<usize> = (0..k).filter(|&i| parent[i].is_none()).collect();
        if roots.len() != 1 {
            return Err(BlockError::Invalid("block tree needs exactly one root".into()));
        }
        let mut kids = vec![Vec::new(); k];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= k {
                    return Err(BlockError::Invalid(format!("parent {p} out of range")));
                }
                kids[p].push(i);
            }
        }
        for c in &mut kids {
            c.sort_by_key(|&i| blocks[i].first());
        }
        let mut order = Vec::with_capacity(k);
        let mut queue = VecDeque::from([roots[0]]);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            queue.extend(kids[i].iter().copied());
        }
        if order.len() != k {
            return Err(BlockError::Invalid("parent links contain a cycle".into()));
        }
        let mut new_index = vec![0; k];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let new_blocks: Vec<VertexSet> = order.iter().map(|&i| blocks[i].clone()).collect();
        let new_parent: Vec<Option<usize>> = order.iter().map(|&i| parent[i].map(|p| new_index[p])).collect();
        let mut children = vec![Vec::new(); k];
        let mut depth = vec![0; k];
        for i in 0..k {
            if let Some(p) = new_parent[i] {
                children[p].push(i);
                depth[i] = depth[p] + 1;
            }
        }
        let mut block_of = vec![usize::MAX; n];
        for (i, b) in new_blocks.iter().enumerate() {
            for v in b {
                if v >= n || block_of[v] != usize::MAX {
                    return Err(BlockError::Invalid("blocks do not partition the vertices".into()));
                }
                block_of[v] = i;
            }
        }
        if block_of.contains(&usize::MAX) {
            return Err(BlockError::Invalid("blocks do not cover the vertices".into()));
        }
        let mut seen = vec![false; k];
        if attach.len() != k || attach.iter().any(|&i| i >= k || std::mem::replace(&mut seen[i], true)) {
            return Err(BlockError::Invalid("attach order is not a permutation of the blocks".into()));
        }
        let attach_order = attach.into_iter().map(|i| new_index[i]).collect();
        Ok(BlockTree { blocks: new_blocks, parent: new_parent, children, depth, block_of, attach_order })
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &VertexSet {
        &self.blocks[i]
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn depth(&self, i: usize) -> usize {
        self.depth[i]
    }

    pub fn block_of(&self, v: Vertex) -> usize {
        self.block_of[v]
    }

    pub fn root_vertex(&self) -> Vertex {
        self.blocks[0].first().expect("root block is non-empty")
    }

    /// Block indices in the order the search attached them.
    pub fn attach_order(&self) -> &[usize] {
        &self.attach_order
    }

    /// Union of the strict ancestor blocks of block `i`.
    pub fn ancestor_vertices(&self, i: usize) -> VertexSet {
        let mut acc = VertexSet::new();
        let mut cur = self.parent[i];
        while let Some(p) = cur {
            acc = acc.union(&self.blocks[p]);
            cur = self.parent[p];
        }
        acc
    }

    /// Unlabelled rooted shape with block sizes, canonical under child reordering.
    pub fn shape_signature(&self) -> String {
        fn sig(bt: &BlockTree, i: usize) -> String {
            let mut kids: Vec<String> = bt.children[i].iter().map(|&c| sig(bt, c)).collect();
            kids.sort();
            format!("{}[{}]", bt.blocks[i].len(), kids.join(","))
        }
        sig(self, 0)
    }

    pub fn to_json(&self) -> String {
        let doc = BlockTreeJson { blocks: self.blocks.iter().map(|b| b.as_slice().to_vec()).collect(), parent: self.parent.clone(),
            attach_order: Some(self.attach_order.clone()),
        };
        serde_json::to_string(&doc).expect("block tree serialises")
    }

    pub fn from_json(n: usize, text: &str) -> Result<BlockTree, BlockError> {
        let doc: BlockTreeJson = serde_json::from_str(text).map_err(|e| BlockError::Invalid(e.to_string()))?;
        if doc.blocks.len() != doc.parent.len() {
            return Err(BlockError::Invalid("blocks and parent lengths differ".into()));
        }
        let blocks: Vec<VertexSet> = doc.blocks.into_iter().map(VertexSet::from).collect();
        let attach = doc.attach_order.unwrap_or_else(|| (0..blocks.len()).collect());
        BlockTree::canonical(n, blocks, doc.parent, attach)
    }
}

fn check_component(g: &Graph, s: &VertexSet, c: &VertexSet) -> Result<(), BlockError> {
    let is_component = !c.is_empty()
        && c.is_disjoint(s)
        && c.iter().all(|v| v < g.n())
        && g.components_within(c).len() == 1
        && g.open_neighborhood(c).is_subset(s);
    if is_component {
        Ok(())
    } else {
        Err(BlockError::NotAComponent(c.clone()))
    }
}

fn maximal_unchecked(g: &Graph, s: &VertexSet, c: &VertexSet) -> VertexSet {
    let traces: Vec<(Vertex, VertexSet)> = c.iter().map(|v| (v, g.neighbors_in(v, s))).collect();
    let Some(widest) = traces.iter().map(|(_, t)| t).max_by_key(|t| t.len()) else {
        return VertexSet::new();
    };
    if !traces.iter().all(|(_, t)| t.is_subset(widest)) {
        return VertexSet::new();
    }
    traces.iter().filter(|(_, t)| t == widest).map(|&(v, _)| v).collect()
}

fn block_unchecked(g: &Graph, s: &VertexSet, c: &VertexSet) -> Option<VertexSet> {
    let attached: VertexSet = c.iter().filter(|&v| g.adjacent(v).iter().any(|&u| s.contains(u))).collect();
    let block: VertexSet = maximal_unchecked(g, s, c).iter().filter(|&v| g.is_universal_to(v, &attached)).collect();
    (!block.is_empty()).then_some(block)
}

/// Vertices of `c` whose trace on `s` contains every other trace in `c`.
pub fn s_maximal_vertices(g: &Graph, s: &VertexSet, c: &VertexSet) -> Result<VertexSet, BlockError> {
    check_component(g, s, c)?;
    Ok(maximal_unchecked(g, s, c))
}

/// The `s`-maximal vertices of `c` adjacent to every vertex of `c` that sees `s`.
pub fn s_block(g: &Graph, s: &VertexSet, c: &VertexSet) -> Result<Option<VertexSet>, BlockError> {
    check_component(g, s, c)?;
    Ok(block_unchecked(g, s, c))
}

/// Grows blocks from `{x}`, always exploring the component with the smallest vertex.
/// `Ok(None)` when some component has no block.
pub fn block_tree(g: &Graph, x: Vertex) -> Result<Option<BlockTree>, BlockError> {
    if x >= g.n() {
        return Err(BlockError::VertexOutOfRange(x));
    }
    if !g.is_connected() {
        return Err(BlockError::Disconnected);
    }
    let n = g.n();
    let mut blocks = vec![VertexSet::singleton(x)];
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut depth = vec![0usize];
    let mut block_of = vec![usize::MAX; n];
    block_of[x] = 0;
    let mut explored = VertexSet::singleton(x);
    while let Some(c) = g.connected_components(&explored).into_iter().next() {
        let Some(b) = block_unchecked(g, &explored, &c) else {
            return Ok(None);
        };
        let mut adjacent: Vec<usize> =
            b.iter().flat_map(|v| g.adjacent(v).iter().map(|&u| block_of[u])).filter(|&i| i != usize::MAX).collect();
        adjacent.sort_unstable();
        adjacent.dedup();
        let deepest = *adjacent.iter().max_by_key(|&&i| depth[i]).expect("component touches explored set");
        let mut chain = Vec::new();
        let mut cur = Some(deepest);
        while let Some(i) = cur {
            chain.push(i);
            cur = parent[i];
        }
        if !adjacent.iter().all(|i| chain.contains(i)) {
            return Err(BlockError::AmbiguousParent(b));
        }
        let id = blocks.len();
        for v in &b {
            block_of[v] = id;
        }
        explored = explored.union(&b);
        depth.push(depth[deepest] + 1);
        parent.push(Some(deepest));
        blocks.push(b);
    }
    let attach = (0..blocks.len()).collect();
    BlockTree::canonical(n, blocks, parent, attach).map(Some)
}

/// Inclusion-maximal blocks of a tree-layout, arranged by the layout's ancestry.
pub fn blocks_of_layout(g: &Graph, t: &TreeLayout) -> Result<BlockTree, BlockError> {
    if !g.is_connected() {
        return Err(BlockError::Disconnected);
    }
    let n = g.n();
    let mut per_vertex: Vec<VertexSet> = Vec::with_capacity(n);
    for v in g.vertices() {
        if v == t.root() {
            per_vertex.push(VertexSet::singleton(v));
            continue;
        }
        let above = t.ancestor_set(v);
        let c = g
            .connected_components(&above)
            .into_iter()
            .find(|c| c.contains(v))
            .expect("v lies outside its ancestors");
        match block_unchecked(g, &above, &c) {
            Some(b) if b.contains(v) => per_vertex.push(b),
            _ => return Err(BlockError::NoBlock(c)),
        }
    }
    let mut maximal: Vec<VertexSet> = Vec::new();
    for b in &per_vertex {
        if !per_vertex.iter().any(|o| o != b && b.is_subset(o)) && !maximal.contains(b) {
            maximal.push(b.clone());
        }
    }
    let mut index = vec![usize::MAX; n];
    for (i, b) in maximal.iter().enumerate() {
        for v in b {
            if index[v] != usize::MAX {
                return Err(BlockError::Invalid("maximal blocks overlap".into()));
            }
            index[v] = i;
        }
    }
    if index.contains(&usize::MAX) {
        return Err(BlockError::Invalid("maximal blocks do not cover the vertices".into()));
    }
    let parent: Vec<Option<usize>> = maximal
        .iter()
        .map(|b| {
            let top = b.iter().min_by_key(|&v| t.depth(v)).expect("non-empty block");
            t.parent(top).map(|p| index[p])
        })
        .collect();
    let attach = (0..maximal.len()).collect();
    let mut bt = BlockTree::canonical(n, maximal, parent, attach)?;
    bt.attach_order = (0..bt.len()).collect();
    Ok(bt)
}

/// Traces on block `b` of the vertices below it, one family per component hanging
/// under the block; each family is a chain.
pub fn nested_collection_of_block(g: &Graph, bt: &BlockTree, b: usize) -> Result<NestedCollection, BlockError> {
    if b >= bt.len() {
        return Err(BlockError::BadIndex(b));
    }
    let block = bt.block(b);
    let above = bt.ancestor_vertices(b);
    let anchor = block.first().expect("non-empty block");
    let region = g
        .connected_components(&above)
        .into_iter()
        .find(|c| c.contains(anchor))
        .expect("block lies outside its ancestors");
    let below = region.difference(block);
    let mut families = Vec::new();
    for comp in g.components_within(&below) {
        let mut traces: Vec<VertexSet> =
            comp.iter().map(|y| g.neighbors_in(y, block)).filter(|t| !t.is_empty()).collect();
        traces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        traces.dedup();
        if traces.windows(2).any(|w| !w[0].is_subset(&w[1])) {
            return Err(BlockError::NotNested(block.clone()));
        }
        families.push(traces);
    }
    families.sort_by_key(|f| f.first().map(|s| s.first()));
    NestedCollection::new(block.clone(), families).map_err(|e| BlockError::Invalid(e.to_string()))
}
