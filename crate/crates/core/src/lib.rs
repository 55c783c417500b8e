//! Proper chordal graphs through pattern-excluding tree-layouts.
//!
//! The crate recognises graphs admitting an indifference tree-layout (a rooted tree on the
//! vertices in which every edge is vertical and no ancestor chain realises one of the
//! proper patterns), builds the canonical FPQ-hierarchy describing every such layout for
//! a chosen root, and uses decorated hierarchies as isomorphism certificates. Brute-force
//! references for all of it live in [`oracle`].

pub mod blocks;
pub mod exec;
pub mod fpq;
pub mod graph;
pub mod hierarchy;
pub mod isomorphism;
pub mod oracle;
pub mod patterns;
pub mod recognition;
pub mod treelayout;

pub use exec::Strategy;
pub use graph::{Graph, GraphError, GraphKind, Vertex, VertexSet};
pub use patterns::{Layout, Pattern, PatternSet};
pub use treelayout::TreeLayout;
