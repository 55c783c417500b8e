//! Canonical codes of FPQ-hierarchies and the isomorphism test for proper chordal graphs.
//!
//! A node's code is its size, its type, the codes of its block children in the best
//! order its type allows, then its skeleton children as `< a b a_hat >` followed by
//! their codes, sorted. Codes are token sequences, so sizes and counts compare as
//! integers.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::exec::{self, Strategy};
use crate::fpq::{Elem, FpqTree, NodeId, NodeKind, Shape, Token};
use crate::graph::{Graph, Vertex};
use crate::hierarchy::{FpqHierarchy, SkeletonEdge};
use crate::recognition::{attempt_root, recognize_with, RecognitionError, Verdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error("hierarchy is not decorated")]
    Undecorated,
    #[error("code parse error at token {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("graph {0} is not connected")]
    NotConnected(usize),
    #[error("graph {0} is not proper chordal")]
    NotProperChordal(usize),
    #[error(transparent)]
    Recognition(#[from] RecognitionError),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoCode(pub Vec<Token>);

impl IsoCode {
    pub fn tokens(&self) -> &[Token] {
        &self.0
    }
}

impl fmt::Display for IsoCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for IsoCode {
    type Err = IsoError;

    fn from_str(s: &str) -> Result<IsoCode, IsoError> {
        s.split_whitespace()
            .enumerate()
            .map(|(position, w)| {
                let err = || IsoError::Parse { position, message: format!("unknown token `{w}`") };
                Ok(match w {
                    "L" => Token::Leaf,
                    "F" => Token::F,
                    "P" => Token::P,
                    "Q" => Token::Q,
                    "<" => Token::Open,
                    ">" => Token::Close,
                    _ => match w.strip_prefix('@') {
                        Some(e) => Token::Elem(e.parse().map_err(|_| err())?),
                        None => Token::Num(w.parse().map_err(|_| err())?),
                    },
                })
            })
            .collect::<Result<_, _>>()
            .map(IsoCode)
    }
}

#[derive(Clone, Copy)]
struct Style {
    decorated: bool,
    labeled: bool,
}

/// Code of a sub-hierarchy with its leaves in emission order.
struct Coded {
    tokens: Vec<Token>,
    leaves: Vec<Elem>,
    size: u64,
}

fn skeleton_item(h: &FpqHierarchy, e: &SkeletonEdge, reversed_over: Option<usize>, style: Style) -> Coded {
    let (a, b) = match reversed_over {
        Some(k) => (k + 1 - e.b, k + 1 - e.a),
        None => (e.a, e.b),
    };
    let sub = code_node(h, e.tree, 0, style);
    let mut tokens = vec![Token::Open, Token::Num(a as u64), Token::Num(b as u64)];
    if style.decorated {
        tokens.push(Token::Num(e.a_hat.unwrap_or(0) as u64));
    }
    tokens.push(Token::Close);
    tokens.extend(sub.tokens);
    Coded { tokens, leaves: sub.leaves, size: sub.size }
}

fn code_node(h: &FpqHierarchy, tree: usize, node: NodeId, style: Style) -> Coded {
    let t = h.tree(tree);
    let kind = t.kind(node);
    let block: Vec<Coded> = t.children(node).iter().map(|&c| code_node(h, tree, c, style)).collect();
    let k = block.len();
    let edges: Vec<&SkeletonEdge> = h.edges_at(tree, node).collect();
    let size = 1 + block.iter().map(|c| c.size).sum::<u64>()
        + edges.iter().map(|e| subtree_size(h, e.tree, 0)).sum::<u64>();

    let mut orders: Vec<(Vec<usize>, bool)> = vec![((0..k).collect(), false)];
    match kind {
        NodeKind::P => {
            let mut order: Vec<usize> = (0..k).collect();
            order.sort_by(|&i, &j| block[i].tokens.cmp(&block[j].tokens));
            orders = vec![(order, false)];
        }
        NodeKind::Q if k > 1 => orders.push(((0..k).rev().collect(), true)),
        _ => {}
    }

    let mut best: Option<Coded> = None;
    for (order, reversed) in orders {
        let mut tokens = vec![Token::Num(size), kind.token()];
        let mut leaves = Vec::new();
        if let NodeKind::Leaf(e) = kind {
            if style.labeled {
                tokens.push(Token::Elem(e));
            }
            leaves.push(e);
        }
        for &i in &order {
            tokens.extend_from_slice(&block[i].tokens);
            leaves.extend_from_slice(&block[i].leaves);
        }
        let mut items: Vec<Coded> =
            edges.iter().map(|e| skeleton_item(h, e, reversed.then_some(k), style)).collect();
        items.sort_by(|x, y| x.tokens.cmp(&y.tokens));
        for item in items {
            tokens.extend(item.tokens);
            leaves.extend(item.leaves);
        }
        if best.as_ref().is_none_or(|b| tokens < b.tokens) {
            best = Some(Coded { tokens, leaves, size });
        }
    }
    best.expect("at least one eligible order")
}

fn subtree_size(h: &FpqHierarchy, tree: usize, node: NodeId) -> u64 {
    let t = h.tree(tree);
    1 + t.children(node).iter().map(|&c| subtree_size(h, tree, c)).sum::<u64>()
        + h.edges_at(tree, node).map(|e| subtree_size(h, e.tree, 0)).sum::<u64>()
}

/// Canonical code of a decorated hierarchy.
pub fn code_of(h: &FpqHierarchy) -> Result<IsoCode, IsoError> {
    if !h.is_decorated() {
        return Err(IsoError::Undecorated);
    }
    Ok(IsoCode(code_node(h, 0, 0, Style { decorated: true, labeled: false }).tokens))
}

/// Code ignoring ancestor counts; labels carry only the interval.
pub fn undecorated_code(h: &FpqHierarchy) -> IsoCode {
    IsoCode(code_node(h, 0, 0, Style { decorated: false, labeled: false }).tokens)
}

/// Code that also records which element sits at each leaf; equal exactly when the
/// hierarchies are equivalent with the same elements in corresponding places.
pub fn labeled_code(h: &FpqHierarchy) -> IsoCode {
    IsoCode(code_node(h, 0, 0, Style { decorated: h.is_decorated(), labeled: true }).tokens)
}

pub fn hierarchies_equivalent(h1: &FpqHierarchy, h2: &FpqHierarchy) -> Result<bool, IsoError> {
    Ok(code_of(h1)? == code_of(h2)?)
}

pub fn undecorated_equivalent(h1: &FpqHierarchy, h2: &FpqHierarchy) -> bool {
    undecorated_code(h1) == undecorated_code(h2)
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    shapes: Vec<Option<Shape>>,
    edges: Vec<SkeletonEdge>,
    next_elem: usize,
}

impl Parser<'_> {
    fn err<T>(&self, message: &str) -> Result<T, IsoError> {
        Err(IsoError::Parse { position: self.pos, message: message.to_owned() })
    }

    fn next(&mut self) -> Result<Token, IsoError> {
        match self.toks.get(self.pos) {
            Some(&t) => {
                self.pos += 1;
                Ok(t)
            }
            None => self.err("unexpected end of code"),
        }
    }

    fn num(&mut self) -> Result<u64, IsoError> {
        match self.next()? {
            Token::Num(k) => Ok(k),
            _ => {
                self.pos -= 1;
                self.err("expected a number")
            }
        }
    }

    /// Parses a tree rooted at the current position; returns its index and total size.
    fn tree(&mut self) -> Result<(usize, u64), IsoError> {
        let idx = self.shapes.len();
        self.shapes.push(None);
        let mut counter = 0;
        let (shape, size) = self.node(idx, &mut counter)?;
        self.shapes[idx] = Some(shape);
        Ok((idx, size))
    }

    fn node(&mut self, tree: usize, counter: &mut NodeId) -> Result<(Shape, u64), IsoError> {
        let size = self.num()?;
        let kind = match self.next()? {
            Token::Leaf => None,
            Token::F => Some(NodeKind::F),
            Token::P => Some(NodeKind::P),
            Token::Q => Some(NodeKind::Q),
            _ => {
                self.pos -= 1;
                return self.err("expected a node type");
            }
        };
        let id = *counter;
        *counter += 1;
        let mut consumed = 1u64;
        let shape = match kind {
            None => {
                let e = match self.toks.get(self.pos) {
                    Some(&Token::Elem(e)) => {
                        self.pos += 1;
                        e
                    }
                    _ => {
                        self.next_elem += 1;
                        self.next_elem - 1
                    }
                };
                Shape::Leaf(e)
            }
            Some(kind) => {
                let mut children = Vec::new();
                while consumed < size && matches!(self.toks.get(self.pos), Some(Token::Num(_))) {
                    let (child, s) = self.node(tree, counter)?;
                    children.push(child);
                    consumed += s;
                }
                if children.is_empty() {
                    return self.err("internal node without block children");
                }
                Shape::Node(kind, children)
            }
        };
        while consumed < size {
            if self.next()? != Token::Open {
                self.pos -= 1;
                return self.err("expected `<`");
            }
            let mut label = Vec::new();
            loop {
                match self.next()? {
                    Token::Num(k) => label.push(k as usize),
                    Token::Close => break,
                    _ => {
                        self.pos -= 1;
                        return self.err("expected a number or `>`");
                    }
                }
            }
            let (a, b, a_hat) = match label[..] {
                [a, b] => (a, b, None),
                [a, b, c] => (a, b, Some(c)),
                _ => return self.err("label needs two or three numbers"),
            };
            let (child, s) = self.tree()?;
            self.edges.push(SkeletonEdge { tree: child, host_tree: tree, host_node: id, a, b, a_hat });
            consumed += s;
        }
        if consumed != size {
            return self.err("children overrun the stated size");
        }
        Ok((shape, size))
    }
}

/// The representative hierarchy whose stated orders are those recorded in the code.
/// Leaves take the element labels of a labeled code, else `0, 1, ..` in code order.
pub fn parse_code(c: &IsoCode) -> Result<FpqHierarchy, IsoError> {
    let mut p = Parser { toks: &c.0, pos: 0, shapes: Vec::new(), edges: Vec::new(), next_elem: 0 };
    p.tree()?;
    if p.pos != c.0.len() {
        return p.err("trailing tokens");
    }
    let internal = |m: String| IsoError::Parse { position: c.0.len(), message: m };
    let trees = p
        .shapes
        .into_iter()
        .map(|s| FpqTree::from_shape_exact(s.expect("every tree parsed")).map_err(|e| internal(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    FpqHierarchy::new(trees, p.edges).map_err(|e| internal(e.to_string()))
}

/// A bijection `f` with `f[v]` the image of vertex `v` of `g1`, or `None` when the graphs
/// are not isomorphic. Both graphs must be connected and proper chordal.
pub fn isomorphic(g1: &Graph, g2: &Graph) -> Result<Option<Vec<Vertex>>, IsoError> {
    isomorphic_with(g1, g2, Strategy::default())
}

pub fn isomorphic_with(g1: &Graph, g2: &Graph, strategy: Strategy) -> Result<Option<Vec<Vertex>>, IsoError> {
    for (i, g) in [g1, g2].into_iter().enumerate() {
        if g.n() == 0 || !g.is_connected() {
            return Err(IsoError::NotConnected(i + 1));
        }
    }
    let r1 = recognize_with(g1, strategy, true)?;
    if r1.verdict == Verdict::NotProperChordal {
        return Err(IsoError::NotProperChordal(1));
    }
    let style = Style { decorated: true, labeled: false };
    let w1 = &r1.witnesses[0];
    let c1 = code_node(&w1.hierarchy, 0, 0, style);

    let roots: Vec<Vertex> = g2.vertices().collect();
    let attempts = exec::map(strategy, &roots, |&x| attempt_root(g2, x));
    let mut witnesses = Vec::new();
    for a in attempts {
        if let Ok(w) = a? {
            witnesses.push(w);
        }
    }
    if witnesses.is_empty() {
        return Err(IsoError::NotProperChordal(2));
    }
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    for w2 in &witnesses {
        let c2 = code_node(&w2.hierarchy, 0, 0, style);
        if c2.tokens != c1.tokens {
            continue;
        }
        let mut f = vec![0; g1.n()];
        for (&u, &v) in c1.leaves.iter().zip(&c2.leaves) {
            f[u] = v;
        }
        if !g1.is_isomorphism(g2, &f) {
            return Err(IsoError::Internal(format!("codes match at roots {} and {} but the aligned map is not an isomorphism", w1.root, w2.root)));
        }
        return Ok(Some(f));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};
    use crate::hierarchy::{canonical_hierarchy, decorate};
    use crate::recognition::recognize_rooted;
    use crate::treelayout::TreeLayout;

    #[test]
    fn single_leaf_code() {
        let h = FpqHierarchy::new(vec![FpqTree::leaf(0)], Vec::new()).unwrap();
        let c = code_of(&h).unwrap();
        assert_eq!(c.to_string(), "2 Q 1 L");
        assert_eq!(parse_code(&c).unwrap(), h);
        assert_eq!("2 Q 1 L".parse::<IsoCode>().unwrap(), c);
    }

    #[test]
    fn p3_code_round_trip() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let t = TreeLayout::path(&[0, 1, 2]).unwrap();
        let h = decorate(&g, &t, &canonical_hierarchy(&g, &t).unwrap()).unwrap();
        let c = code_of(&h).unwrap();
        assert_eq!(c.to_string(), "6 Q 5 L < 1 1 1 > 4 Q 3 L < 1 1 1 > 2 Q 1 L");
        let back = parse_code(&c).unwrap();
        assert_eq!(code_of(&back).unwrap(), c);
        assert!(hierarchies_equivalent(&h, &back).unwrap());
    }

    #[test]
    fn reversal_leaves_code_unchanged() {
        let g = generate(GraphKind::Fig10).unwrap();
        let x = g.vertex_by_name("x").unwrap();
        let (t, h) = recognize_rooted(&g, x).unwrap().unwrap();
        let c = code_of(&h).unwrap();
        assert_eq!(parse_code(&c).map(|r| code_of(&r).unwrap()), Ok(c.clone()));
        assert_eq!(labeled_code(&h), labeled_code(&parse_code(&labeled_code(&h)).unwrap()));
        assert_eq!(t.root(), x);
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "2 Q", "3 Q 1 L", "2 Q 1 L 1 L", "1 Q", "x"] {
            let parsed = bad.parse::<IsoCode>().and_then(|c| parse_code(&c));
            assert!(parsed.is_err(), "{bad}");
        }
    }

    #[test]
    fn relabelled_graph_is_isomorphic() {
        let g = generate(GraphKind::Cevenol).unwrap();
        let perm: Vec<usize> = (0..g.n()).rev().collect();
        let h = g.relabel(&perm);
        let f = isomorphic(&g, &h).unwrap().unwrap();
        assert!(g.is_isomorphism(&h, &f));
    }

    #[test]
    fn rejects_bad_inputs() {
        let sun = generate(GraphKind::KSun(3)).unwrap();
        assert_eq!(isomorphic(&sun, &sun), Err(IsoError::NotProperChordal(1)));
        assert_eq!(isomorphic(&Graph::empty(2), &sun), Err(IsoError::NotConnected(1)));
    }
}
