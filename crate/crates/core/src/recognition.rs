//! Recognition of proper chordal graphs: per root, grow the block tree, solve each block's
//! nested collection and realize a witness tree-layout.

use std::fmt;

use thiserror::Error;

use crate::blocks::{block_tree, BlockError};
use crate::exec::{self, Strategy};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::hierarchy::{assemble, decorate, realize, FpqHierarchy, HierarchyError, RealizationChoice};
use crate::treelayout::{is_indifference, IndifferenceMethod, TreeLayout};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecognitionError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(Vertex),
    #[error("internal error at root {root}: {message}")]
    Internal { root: Vertex, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ProperChordal,
    NotProperChordal,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ProperChordal => "proper chordal",
            Verdict::NotProperChordal => "not proper chordal",
        })
    }
}

/// Where the attempt at a root stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RejectionStage {
    /// Some component has no block, or a new block has no unique deepest neighbour block.
    NoBlock,
    NotNested,
    EmptyNestedConvex,
}

impl fmt::Display for RejectionStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectionStage::NoBlock => "no_block",
            RejectionStage::NotNested => "not_nested",
            RejectionStage::EmptyNestedConvex => "empty_nested_convex",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub root: Vertex,
    pub layout: TreeLayout,
    /// Canonical hierarchy at `root`, decorated with ancestor counts.
    pub hierarchy: FpqHierarchy,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognitionResult {
    pub verdict: Verdict,
    /// Ascending by root.
    pub witnesses: Vec<Witness>,
    pub rejected_roots: Vec<(Vertex, RejectionStage)>,
}

impl RecognitionResult {
    pub fn feasible_roots(&self) -> VertexSet {
        self.witnesses.iter().map(|w| w.root).collect()
    }
}

fn check_input(g: &Graph) -> Result<(), RecognitionError> {
    if g.n() == 0 {
        return Err(RecognitionError::Empty);
    }
    if !g.is_connected() {
        return Err(RecognitionError::Disconnected);
    }
    Ok(())
}

/// Runs every stage at root `x`; the witness layout is the realization with stated orders,
/// re-checked against the pattern definition.
pub fn attempt_root(g: &Graph, x: Vertex) -> Result<Result<Witness, RejectionStage>, RecognitionError> {
    check_input(g)?;
    if x >= g.n() {
        return Err(RecognitionError::VertexOutOfRange(x));
    }
    let internal = |message: String| RecognitionError::Internal { root: x, message };
    let bt = match block_tree(g, x) {
        Ok(Some(bt)) => bt,
        Ok(None) | Err(BlockError::AmbiguousParent(_)) => return Ok(Err(RejectionStage::NoBlock)),
        Err(e) => return Err(internal(e.to_string())),
    };
    let h = match assemble(g, &bt) {
        Ok(h) => h,
        Err(HierarchyError::NotNested(_)) => return Ok(Err(RejectionStage::NotNested)),
        Err(HierarchyError::EmptyNestedConvex(_)) => return Ok(Err(RejectionStage::EmptyNestedConvex)),
        Err(e) => return Err(internal(e.to_string())),
    };
    let layout = realize(&h, &RealizationChoice::identity(&h)).map_err(|e| internal(e.to_string()))?;
    if layout.root() != x || !is_indifference(g, &layout, IndifferenceMethod::Patterns) {
        return Err(internal("realized witness is not an indifference tree-layout".into()));
    }
    let hierarchy = decorate(g, &layout, &h).map_err(|e| internal(e.to_string()))?;
    Ok(Ok(Witness { root: x, layout, hierarchy }))
}

/// An indifference tree-layout rooted at `x` with its decorated canonical hierarchy.
pub fn recognize_rooted(g: &Graph, x: Vertex) -> Result<Option<(TreeLayout, FpqHierarchy)>, RecognitionError> {
    Ok(attempt_root(g, x)?.ok().map(|w| (w.layout, w.hierarchy)))
}

pub fn recognize(g: &Graph) -> Result<RecognitionResult, RecognitionError> {
    recognize_with(g, Strategy::default(), false)
}

/// With `verdict_only`, stops at the first feasible root in ascending order; the result
/// then lists at most one witness and only the roots rejected before it.
pub fn recognize_with(g: &Graph, strategy: Strategy, verdict_only: bool) -> Result<RecognitionResult, RecognitionError> {
    check_input(g)?;
    let roots: Vec<Vertex> = g.vertices().collect();
    let attempts: Vec<Result<Result<Witness, RejectionStage>, RecognitionError>> = if verdict_only {
        let mut out = Vec::new();
        for &x in &roots {
            let a = attempt_root(g, x);
            let stop = matches!(a, Ok(Ok(_)) | Err(_));
            out.push(a);
            if stop {
                break;
            }
        }
        out
    } else {
        exec::map(strategy, &roots, |&x| attempt_root(g, x))
    };
    let mut witnesses = Vec::new();
    let mut rejected_roots = Vec::new();
    for (x, a) in roots.iter().zip(attempts) {
        match a? {
            Ok(w) => witnesses.push(w),
            Err(stage) => rejected_roots.push((*x, stage)),
        }
    }
    let verdict = if witnesses.is_empty() { Verdict::NotProperChordal } else { Verdict::ProperChordal };
    Ok(RecognitionResult { verdict, witnesses, rejected_roots })
}

pub fn feasible_roots(g: &Graph) -> Result<VertexSet, RecognitionError> {
    Ok(recognize(g)?.feasible_roots())
}
