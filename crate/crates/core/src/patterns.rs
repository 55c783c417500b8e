//! Forbidden patterns on layouts and tree-layouts.
//!
//! A pattern is an ordered template on `k` vertices in which every pair is marked
//! either as a required edge or as a required non-edge. Literals use the bracket
//! syntax `<~12,13,23>`, where `~` marks a non-edge and indices are 1-based.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::treelayout::TreeLayout;

/// Exhaustive layout search is limited to this many vertices.
pub const MAX_LAYOUT_SEARCH: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("malformed pattern `{literal}`: {reason}")]
    Malformed { literal: String, reason: String },
    #[error("unknown pattern set `{0}`")]
    UnknownSet(String),
    #[error("exhaustive layout search is limited to {max} vertices, graph has {n}")]
    TooLarge { n: usize, max: usize },
    #[error("layout is not a permutation of the {0} vertices")]
    InvalidLayout(usize),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    k: usize,
    /// `adjacent[i][j]` for `i < j`, 0-based.
    adjacent: Vec<Vec<bool>>,
}

impl Pattern {
    /// `pairs` lists `(i, j, edge)` with 1-based `i < j`; every pair must appear once.
    pub fn new(k: usize, pairs: &[(usize, usize, bool)]) -> Result<Pattern, PatternError> {
        let literal = || format!("{pairs:?}");
        if !(2..=4).contains(&k) {
            return Err(PatternError::Malformed { literal: literal(), reason: format!("size {k} outside 2..=4") });
        }
        let mut adjacent = vec![vec![false; k]; k];
        let mut seen = vec![vec![false; k]; k];
        for &(i, j, edge) in pairs {
            if !(1 <= i && i < j && j <= k) {
                return Err(PatternError::Malformed { literal: literal(), reason: format!("bad pair {i}{j}") });
            }
            if seen[i - 1][j - 1] {
                return Err(PatternError::Malformed { literal: literal(), reason: format!("pair {i}{j} repeated") });
            }
            seen[i - 1][j - 1] = true;
            adjacent[i - 1][j - 1] = edge;
        }
        if pairs.len() != k * (k - 1) / 2 {
            return Err(PatternError::Malformed { literal: literal(), reason: "every pair must be constrained".into() });
        }
        Ok(Pattern { k, adjacent })
    }

    pub fn size(&self) -> usize {
        self.k
    }

    /// Required adjacency of positions `i < j` (0-based).
    pub fn requires_edge(&self, i: usize, j: usize) -> bool {
        self.adjacent[i][j]
    }

    /// Mirror image: position `i` becomes `k - 1 - i`.
    pub fn reversed(&self) -> Pattern {
        let k = self.k;
        let mut adjacent = vec![vec![false; k]; k];
        for i in 0..k {
            for j in i + 1..k {
                adjacent[k - 1 - j][k - 1 - i] = self.adjacent[i][j];
            }
        }
        Pattern { k, adjacent }
    }

    /// Whether `tuple` (in pattern order) realises the pattern in `g`.
    pub fn matches(&self, g: &Graph, tuple: &[Vertex]) -> bool {
        tuple.len() == self.k
            && (0..self.k).all(|i| (i + 1..self.k).all(|j| g.has_edge(tuple[i], tuple[j]) == self.adjacent[i][j]))
    }

    fn consistent_prefix(&self, g: &Graph, prefix: &[Vertex], next: Vertex) -> bool {
        let j = prefix.len();
        prefix.iter().enumerate().all(|(i, &u)| g.has_edge(u, next) == self.adjacent[i][j])
    }
}

impl FromStr for Pattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| PatternError::Malformed { literal: s.to_owned(), reason: reason.to_owned() };
        let body = s
            .trim()
            .strip_prefix('<')
            .and_then(|r| r.strip_suffix('>'))
            .ok_or_else(|| err("expected `<...>`"))?;
        let mut pairs = Vec::new();
        let mut k = 0;
        for item in body.split(',') {
            let item = item.trim();
            let (edge, digits) = match item.strip_prefix('~') {
                Some(rest) => (false, rest),
                None => (true, item),
            };
            let ds: Vec<usize> = digits.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>().ok_or_else(|| err("pair must be two digits"))?;
            if ds.len() != 2 {
                return Err(err("pair must be two digits"));
            }
            k = k.max(ds[1]);
            pairs.push((ds[0], ds[1], edge));
        }
        Pattern::new(k, &pairs).map_err(|e| match e {
            PatternError::Malformed { reason, .. } => err(&reason),
            other => other,
        })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        let mut first = true;
        for i in 0..self.k {
            for j in i + 1..self.k {
                if !first {
                    write!(f, ",")?;
                }
                first = false;
                let tilde = if self.adjacent[i][j] { "" } else { "~" };
                write!(f, "{tilde}{}{}", i + 1, j + 1)?;
            }
        }
        write!(f, ">")
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSet {
    pub name: String,
    pub patterns: Vec<Pattern>,
}

impl PatternSet {
    pub fn new(name: &str, literals: &[&str]) -> Result<PatternSet, PatternError> {
        let patterns = literals.iter().map(|l| l.parse()).collect::<Result<Vec<Pattern>, _>>()?;
        Ok(PatternSet { name: name.to_owned(), patterns })
    }
}

pub const PATTERN_SET_NAMES: &[&str] = &[
    "chordal", "int", "proper", "indifference", "cograph", "bip", "forest", "cocomp", "comp", "trivper", "clique",
];

pub fn builtin_pattern_set(name: &str) -> Result<PatternSet, PatternError> {
    let literals: &[&str] = match name {
        "chordal" => &["<~12,13,23>"],
        "int" | "interval" => &["<~12,13,23>", "<~12,13,~23>"],
        "proper" => &["<~12,13,23>", "<12,13,~23>"],
        "indifference" => &["<~12,13,23>", "<~12,13,~23>", "<12,13,~23>"],
        "cograph" => &["<12,~13,23>", "<~12,13,~23>", "<~12,13,~14,23,24,~34>", "<12,~13,14,~23,~24,34>"],
        "bip" => &["<12,13,23>", "<12,~13,23>"],
        "forest" => &["<12,13,23>", "<~12,13,23>"],
        "cocomp" => &["<~12,13,~23>"],
        "comp" => &["<12,~13,23>"],
        "trivper" => &["<~12,13,23>", "<12,~13,23>"],
        "clique" => &["<~12>"],
        other => return Err(PatternError::UnknownSet(other.to_owned())),
    };
    PatternSet::new(name, literals)
}

/// A total order of the vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Layout {
    order: Vec<Vertex>,
    position: Vec<usize>,
}

impl Layout {
    pub fn new(order: Vec<Vertex>) -> Result<Layout, PatternError> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(PatternError::InvalidLayout(n));
            }
            position[v] = i;
        }
        Ok(Layout { order, position })
    }

    pub fn identity(n: usize) -> Layout {
        Layout { order: (0..n).collect(), position: (0..n).collect() }
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn position(&self, v: Vertex) -> usize {
        self.position[v]
    }

    pub fn reversed(&self) -> Layout {
        let mut order = self.order.clone();
        order.reverse();
        Layout::new(order).expect("reversal of a permutation")
    }
}

/// Tuples increasing along `order`, where the candidates after `v` are `order[after(v)]`.
fn chain_occurrences(g: &Graph, p: &Pattern, order: &[Vertex], after: &dyn Fn(Vertex) -> Range<usize>) -> Vec<Vec<Vertex>> {
    fn extend(
        g: &Graph,
        p: &Pattern,
        order: &[Vertex],
        after: &dyn Fn(Vertex) -> Range<usize>,
        prefix: &mut Vec<Vertex>,
        out: &mut Vec<Vec<Vertex>>,
    ) {
        if prefix.len() == p.size() {
            out.push(prefix.clone());
            return;
        }
        let range = after(*prefix.last().expect("non-empty prefix"));
        for &v in &order[range] {
            if p.consistent_prefix(g, prefix, v) {
                prefix.push(v);
                extend(g, p, order, after, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(p.size());
    for &v in order {
        prefix.push(v);
        extend(g, p, order, after, &mut prefix, &mut out);
        prefix.pop();
    }
    out
}

/// All tuples increasing in `l` that realise `p`, in lexicographic order of positions.
pub fn layout_occurrences(g: &Graph, l: &Layout, p: &Pattern) -> Vec<Vec<Vertex>> {
    let n = l.order.len();
    chain_occurrences(g, p, &l.order, &|v| l.position[v] + 1..n)
}

/// All ancestor chains of `t` that realise `p`, ordered lexicographically by the
/// preorder positions of their members (children visited by ascending vertex).
pub fn treelayout_occurrences(g: &Graph, t: &TreeLayout, p: &Pattern) -> Vec<Vec<Vertex>> {
    let pre = t.preorder();
    let mut index = vec![0; pre.len()];
    for (i, &v) in pre.iter().enumerate() {
        index[v] = i;
    }
    chain_occurrences(g, p, &pre, &|v| index[v] + 1..index[v] + t.subtree_size(v))
}

pub fn layout_excludes(g: &Graph, l: &Layout, ps: &PatternSet) -> bool {
    ps.patterns.iter().all(|p| layout_occurrences(g, l, p).is_empty())
}

pub fn treelayout_excludes(g: &Graph, t: &TreeLayout, ps: &PatternSet) -> bool {
    ps.patterns.iter().all(|p| treelayout_occurrences(g, t, p).is_empty())
}

/// Backtracking search for a layout excluding every pattern of `ps`.
pub fn exists_pattern_free_layout(g: &Graph, ps: &PatternSet) -> Result<Option<Layout>, PatternError> {
    let n = g.n();
    if n > MAX_LAYOUT_SEARCH {
        return Err(PatternError::TooLarge { n, max: MAX_LAYOUT_SEARCH });
    }

    // Does appending `v` after `prefix` create an occurrence ending at `v`?
    fn closes_pattern(g: &Graph, p: &Pattern, prefix: &[Vertex], v: Vertex) -> bool {
        let k = p.size();
        let mut chosen = Vec::with_capacity(k);
        fn pick(g: &Graph, p: &Pattern, prefix: &[Vertex], from: usize, chosen: &mut Vec<Vertex>, v: Vertex) -> bool {
            if chosen.len() == p.size() - 1 {
                return p.consistent_prefix(g, chosen, v);
            }
            for i in from..prefix.len() {
                if p.consistent_prefix(g, chosen, prefix[i]) {
                    chosen.push(prefix[i]);
                    let hit = pick(g, p, prefix, i + 1, chosen, v);
                    chosen.pop();
                    if hit {
                        return true;
                    }
                }
            }
            false
        }
        k <= prefix.len() + 1 && pick(g, p, prefix, 0, &mut chosen, v)
    }

    fn search(g: &Graph, ps: &PatternSet, prefix: &mut Vec<Vertex>, used: &mut Vec<bool>) -> bool {
        if prefix.len() == g.n() {
            return true;
        }
        for v in 0..g.n() {
            if used[v] || ps.patterns.iter().any(|p| closes_pattern(g, p, prefix, v)) {
                continue;
            }
            used[v] = true;
            prefix.push(v);
            if search(g, ps, prefix, used) {
                return true;
            }
            prefix.pop();
            used[v] = false;
        }
        false
    }

    let mut prefix = Vec::with_capacity(n);
    let mut used = vec![false; n];
    Ok(search(g, ps, &mut prefix, &mut used).then(|| Layout::new(prefix).expect("search builds a permutation")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};

    fn p3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let p: Pattern = "<~12,13,23>".parse().unwrap();
        assert_eq!(p.size(), 3);
        assert!(!p.requires_edge(0, 1) && p.requires_edge(0, 2) && p.requires_edge(1, 2));
        assert_eq!(p.to_string(), "<~12,13,23>");
        assert_eq!("<~12>".parse::<Pattern>().unwrap().size(), 2);
        for bad in ["~12,13", "<12,13>", "<12,12,13,23>", "<1a>", "<~12,13,23,45>"] {
            assert!(bad.parse::<Pattern>().is_err(), "{bad}");
        }
    }

    #[test]
    fn builtin_sets() {
        let proper = builtin_pattern_set("proper").unwrap();
        let lits: Vec<String> = proper.patterns.iter().map(|p| p.to_string()).collect();
        assert_eq!(lits, ["<~12,13,23>", "<12,13,~23>"]);
        let sizes: Vec<usize> = builtin_pattern_set("cograph").unwrap().patterns.iter().map(Pattern::size).collect();
        assert_eq!(sizes, [3, 3, 4, 4]);
        for name in PATTERN_SET_NAMES {
            assert!(builtin_pattern_set(name).is_ok());
        }
        assert!(builtin_pattern_set("planar").is_err());
    }

    #[test]
    fn path_occurrences() {
        let g = p3();
        let chordal: Pattern = "<~12,13,23>".parse().unwrap();
        assert!(layout_occurrences(&g, &Layout::identity(3), &chordal).is_empty());
        let l = Layout::new(vec![0, 2, 1]).unwrap();
        assert_eq!(layout_occurrences(&g, &l, &chordal), vec![vec![0, 2, 1]]);
        let p: Pattern = "<12,~13,23>".parse().unwrap();
        assert!(layout_occurrences(&g, &l, &p).is_empty());
        assert_eq!(layout_occurrences(&g, &Layout::identity(3), &p), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn reversal_mirrors_indices() {
        let p: Pattern = "<12,13,~23>".parse().unwrap();
        assert_eq!(p.reversed().to_string(), "<~12,13,23>");
        assert_eq!(p.reversed().reversed(), p);
    }

    #[test]
    fn exhaustive_layout_existence() {
        let star = generate(GraphKind::Star(4)).unwrap();
        assert!(exists_pattern_free_layout(&star, &builtin_pattern_set("proper").unwrap()).unwrap().is_none());
        let p4 = generate(GraphKind::Path(4)).unwrap();
        assert!(exists_pattern_free_layout(&p4, &builtin_pattern_set("cograph").unwrap()).unwrap().is_none());
        let l = exists_pattern_free_layout(&p4, &builtin_pattern_set("proper").unwrap()).unwrap().unwrap();
        assert!(layout_excludes(&p4, &l, &builtin_pattern_set("proper").unwrap()));
        let big = generate(GraphKind::Path(11)).unwrap();
        assert!(matches!(
            exists_pattern_free_layout(&big, &builtin_pattern_set("proper").unwrap()),
            Err(PatternError::TooLarge { .. })
        ));
    }
}
