//! Brute-force references for small graphs.
//!
//! Everything here works from definitions: tree-layouts are enumerated outright (or by a
//! search that only prunes on pattern occurrences), permutation sets are filtered
//! literally, and isomorphism is decided by backtracking over bijections. Nothing in this
//! module calls the recognition, block, FPQ or hierarchy code it is used to check.

pub mod catalog;
pub mod random;

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::fpq::NestedCollection;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::patterns::{builtin_pattern_set, PatternSet};
use crate::treelayout::{is_indifference, is_tree_layout, IndifferenceMethod, TreeLayout};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{n} vertices exceed the oracle limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("search budget of {0} steps exhausted")]
    BudgetExceeded(u64),
    #[error("search time limit of {0:?} exceeded")]
    TimeLimit(Duration),
    #[error("invalid oracle input: {0}")]
    Invalid(String),
}

/// Limits for exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_vertices: usize,
    /// Search steps (trees generated, nodes placed or bijection extensions).
    pub max_enumerations: u64,
    pub time_limit: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_vertices: 8, max_enumerations: 50_000_000, time_limit: None }
    }
}

impl SearchBudget {
    pub fn new(max_vertices: usize, max_enumerations: u64, time_limit: Option<Duration>) -> Result<Self, OracleError> {
        if max_vertices == 0 || max_enumerations == 0 || time_limit.is_some_and(|d| d.is_zero()) {
            return Err(OracleError::Invalid("budget limits must be positive".into()));
        }
        Ok(SearchBudget { max_vertices, max_enumerations, time_limit })
    }

    fn admit(&self, n: usize) -> Result<Meter, OracleError> {
        if n > self.max_vertices {
            return Err(OracleError::TooLarge { n, max: self.max_vertices });
        }
        Ok(Meter { steps: 0, budget: *self, start: Instant::now() })
    }
}

struct Meter {
    steps: u64,
    budget: SearchBudget,
    start: Instant,
}

impl Meter {
    fn tick(&mut self) -> Result<(), OracleError> {
        self.steps += 1;
        if self.steps > self.budget.max_enumerations {
            return Err(OracleError::BudgetExceeded(self.budget.max_enumerations));
        }
        if let Some(limit) = self.budget.time_limit {
            if self.steps.is_multiple_of(4096) && self.start.elapsed() > limit {
                return Err(OracleError::TimeLimit(limit));
            }
        }
        Ok(())
    }
}

/// Decodes a Prüfer sequence over `0..n` into the edges of a labeled tree.
pub fn prufer_tree(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    assert!(n >= 2 && seq.len() == n - 2);
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf remains");
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

fn orient(n: usize, edges: &[(usize, usize)], root: usize) -> Vec<Option<Vertex>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(u);
                stack.push(w);
            }
        }
    }
    parent
}

/// Calls `visit` with the parent array of every rooted labeled tree on `n` nodes
/// (there are n^(n-1) of them); stops early when `visit` returns true.
fn for_each_rooted_tree(
    n: usize,
    meter: &mut Meter,
    visit: &mut dyn FnMut(Vec<Option<Vertex>>) -> bool,
) -> Result<(), OracleError> {
    if n == 1 {
        meter.tick()?;
        visit(vec![None]);
        return Ok(());
    }
    let mut seq = vec![0usize; n - 2];
    loop {
        let edges = prufer_tree(n, &seq);
        for root in 0..n {
            meter.tick()?;
            if visit(orient(n, &edges, root)) {
                return Ok(());
            }
        }
        // Next sequence in base-n counting order.
        let mut i = 0;
        loop {
            if i == seq.len() {
                return Ok(());
            }
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

/// Parent arrays of all rooted labeled trees on `n` nodes, sorted.
pub fn rooted_labeled_trees(n: usize, b: SearchBudget) -> Result<Vec<Vec<Option<Vertex>>>, OracleError> {
    if n == 0 {
        return Err(OracleError::Invalid("no nodes".into()));
    }
    let mut meter = b.admit(n)?;
    let mut out = Vec::new();
    for_each_rooted_tree(n, &mut meter, &mut |p| {
        out.push(p);
        false
    })?;
    out.sort();
    Ok(out)
}

fn sorted_layouts(mut parents: Vec<Vec<Option<Vertex>>>) -> Vec<TreeLayout> {
    parents.sort();
    parents.dedup();
    parents.into_iter().map(|p| TreeLayout::from_parents(p).expect("parent arrays of trees")).collect()
}

/// Every tree-layout of `g`, optionally restricted to a root, by filtering all rooted
/// labeled trees. Sorted by parent array.
pub fn all_tree_layouts(g: &Graph, root: Option<Vertex>, b: SearchBudget) -> Result<Vec<TreeLayout>, OracleError> {
    check_graph(g, root)?;
    let mut meter = b.admit(g.n())?;
    let mut keep = Vec::new();
    for_each_rooted_tree(g.n(), &mut meter, &mut |p| {
        if root.is_none_or(|r| p[r].is_none()) {
            let t = TreeLayout::from_parents(p.clone()).expect("parent arrays of trees");
            if is_tree_layout(g, &t) {
                keep.push(p);
            }
        }
        false
    })?;
    Ok(sorted_layouts(keep))
}

fn check_graph(g: &Graph, root: Option<Vertex>) -> Result<(), OracleError> {
    if g.n() == 0 {
        return Err(OracleError::Invalid("graph has no vertices".into()));
    }
    if let Some(r) = root.filter(|&r| r >= g.n()) {
        return Err(OracleError::Invalid(format!("root {r} out of range")));
    }
    Ok(())
}

struct Task {
    set: VertexSet,
    chain: Vec<Vertex>,
    forced_root: Option<Vertex>,
}

/// Depth-first construction of tree-layouts: pick the top vertex of a vertex set, split the
/// rest into connected components and distribute them over child subtrees in every way.
/// A vertex may only be placed when no pattern occurrence ends at it.
struct LayoutSearch<'a> {
    g: &'a Graph,
    patterns: &'a PatternSet,
    parent: Vec<Option<Vertex>>,
    meter: Meter,
}

impl LayoutSearch<'_> {
    fn closes_occurrence(&self, chain: &[Vertex], v: Vertex) -> bool {
        fn pick(g: &Graph, p: &crate::patterns::Pattern, chain: &[Vertex], from: usize, tuple: &mut Vec<Vertex>, v: Vertex) -> bool {
            if tuple.len() + 1 == p.size() {
                tuple.push(v);
                let hit = p.matches(g, tuple);
                tuple.pop();
                return hit;
            }
            for i in from..chain.len() {
                tuple.push(chain[i]);
                let hit = pick(g, p, chain, i + 1, tuple, v);
                tuple.pop();
                if hit {
                    return true;
                }
            }
            false
        }
        self.patterns.patterns.iter().any(|p| p.size() <= chain.len() + 1 && pick(self.g, p, chain, 0, &mut Vec::new(), v))
    }

    fn solve(&mut self, tasks: &mut Vec<Task>, emit: &mut dyn FnMut(&[Option<Vertex>]) -> bool) -> Result<bool, OracleError> {
        let Some(task) = tasks.pop() else {
            return Ok(emit(&self.parent));
        };
        let candidates: Vec<Vertex> = match task.forced_root {
            Some(r) => vec![r],
            None => task.set.iter().collect(),
        };
        let mut stop = false;
        for r in candidates {
            self.meter.tick()?;
            if self.closes_occurrence(&task.chain, r) {
                continue;
            }
            self.parent[r] = task.chain.last().copied();
            let mut rest = task.set.clone();
            rest.remove(r);
            let comps = self.g.components_within(&rest);
            let mut chain = task.chain.clone();
            chain.push(r);
            let mut groups = vec![0usize; comps.len()];
            stop = self.distribute(&comps, &mut groups, 0, 0, &chain, tasks, emit)?;
            self.parent[r] = None;
            if stop {
                break;
            }
        }
        tasks.push(task);
        Ok(stop)
    }

    /// Enumerates set partitions of `comps` as restricted growth strings.
    #[allow(clippy::too_many_arguments)]
    fn distribute(
        &mut self,
        comps: &[VertexSet],
        groups: &mut Vec<usize>,
        i: usize,
        used: usize,
        chain: &[Vertex],
        tasks: &mut Vec<Task>,
        emit: &mut dyn FnMut(&[Option<Vertex>]) -> bool,
    ) -> Result<bool, OracleError> {
        if i == comps.len() {
            let before = tasks.len();
            for gi in 0..used {
                let set = (0..comps.len()).filter(|&c| groups[c] == gi).fold(VertexSet::new(), |acc, c| acc.union(&comps[c]));
                tasks.push(Task { set, chain: chain.to_vec(), forced_root: None });
            }
            let stop = self.solve(tasks, emit)?;
            tasks.truncate(before);
            return Ok(stop);
        }
        for gi in 0..=used {
            groups[i] = gi;
            if self.distribute(comps, groups, i + 1, used.max(gi + 1), chain, tasks, emit)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn search_layouts(
    g: &Graph,
    root: Option<Vertex>,
    patterns: &PatternSet,
    b: SearchBudget,
    emit: &mut dyn FnMut(&[Option<Vertex>]) -> bool,
) -> Result<(), OracleError> {
    check_graph(g, root)?;
    let meter = b.admit(g.n())?;
    let mut search = LayoutSearch { g, patterns, parent: vec![None; g.n()], meter };
    let all: VertexSet = g.vertices().collect();
    let mut tasks = vec![Task { set: all, chain: Vec::new(), forced_root: root }];
    search.solve(&mut tasks, emit)?;
    Ok(())
}

/// Every tree-layout of `g` in which no ancestor chain realises a pattern of `ps`, sorted
/// by parent array.
pub fn pattern_free_tree_layouts(
    g: &Graph,
    root: Option<Vertex>,
    ps: &PatternSet,
    b: SearchBudget,
) -> Result<Vec<TreeLayout>, OracleError> {
    let mut found = Vec::new();
    search_layouts(g, root, ps, b, &mut |p| {
        found.push(p.to_vec());
        false
    })?;
    Ok(sorted_layouts(found))
}

/// Some tree-layout free of `ps`, if one exists.
pub fn find_pattern_free_tree_layout(
    g: &Graph,
    root: Option<Vertex>,
    ps: &PatternSet,
    b: SearchBudget,
) -> Result<Option<TreeLayout>, OracleError> {
    let mut found = None;
    search_layouts(g, root, ps, b, &mut |p| {
        found = Some(p.to_vec());
        true
    })?;
    Ok(found.map(|p| TreeLayout::from_parents(p).expect("parent arrays of trees")))
}

fn proper() -> PatternSet {
    builtin_pattern_set("proper").expect("built-in set")
}

/// All indifference tree-layouts of `g`, optionally with a fixed root.
pub fn indifference_tree_layouts(g: &Graph, root: Option<Vertex>, b: SearchBudget) -> Result<Vec<TreeLayout>, OracleError> {
    let mut out = pattern_free_tree_layouts(g, root, &proper(), b)?;
    out.retain(|t| is_indifference(g, t, IndifferenceMethod::Patterns));
    Ok(out)
}

/// True iff some tree-layout of `g` passes the indifference check.
pub fn brute_recognize(g: &Graph, b: SearchBudget) -> Result<bool, OracleError> {
    let mut accepted = false;
    search_layouts(g, None, &proper(), b, &mut |p| {
        let t = TreeLayout::from_parents(p.to_vec()).expect("parent arrays of trees");
        accepted = is_indifference(g, &t, IndifferenceMethod::Patterns);
        accepted
    })?;
    Ok(accepted)
}

/// A bijection `f` with `uv ∈ E(g1) ⇔ f(u)f(v) ∈ E(g2)`, by backtracking.
pub fn brute_isomorphic(g1: &Graph, g2: &Graph, b: SearchBudget) -> Result<Option<Vec<Vertex>>, OracleError> {
    let n = g1.n();
    let mut meter = b.admit(n.max(g2.n()))?;
    if n != g2.n() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let mut d1: Vec<usize> = g1.vertices().map(|v| g1.degree(v)).collect();
    let mut d2: Vec<usize> = g2.vertices().map(|v| g2.degree(v)).collect();
    let (s1, s2) = (d1.clone(), d2.clone());
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return Ok(None);
    }

    fn extend(
        g1: &Graph,
        g2: &Graph,
        deg: (&[usize], &[usize]),
        f: &mut Vec<Vertex>,
        used: &mut [bool],
        meter: &mut Meter,
    ) -> Result<bool, OracleError> {
        let v = f.len();
        if v == g1.n() {
            return Ok(true);
        }
        for y in g2.vertices() {
            if used[y] || deg.0[v] != deg.1[y] {
                continue;
            }
            meter.tick()?;
            if (0..v).any(|u| g1.has_edge(u, v) != g2.has_edge(f[u], y)) {
                continue;
            }
            f.push(y);
            used[y] = true;
            if extend(g1, g2, deg, f, used, meter)? {
                return Ok(true);
            }
            f.pop();
            used[y] = false;
        }
        Ok(false)
    }

    let mut f = Vec::with_capacity(n);
    let mut used = vec![false; n];
    Ok(extend(g1, g2, (&s1, &s2), &mut f, &mut used, &mut meter)?.then_some(f))
}

pub const MAX_PERMUTATION_GROUND: usize = 7;

/// All orderings of `ground` in lexicographic order.
pub fn all_orderings(ground: &VertexSet) -> Vec<Vec<Vertex>> {
    let mut cur: Vec<Vertex> = ground.iter().collect();
    let mut out = vec![cur.clone()];
    // Standard next-permutation step.
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).expect("a larger element follows");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

fn positions(order: &[Vertex]) -> std::collections::HashMap<Vertex, usize> {
    order.iter().enumerate().map(|(i, &v)| (v, i)).collect()
}

/// Whether `set` occupies consecutive positions of `order`.
pub fn is_consecutive(order: &[Vertex], set: &VertexSet) -> bool {
    let idx: Vec<usize> = order.iter().enumerate().filter(|(_, v)| set.contains(**v)).map(|(i, _)| i).collect();
    idx.len() == set.len() && idx.last().is_none_or(|&l| l + 1 - idx[0] == idx.len())
}

/// Orderings of `ground` in which every constraint is consecutive.
pub fn brute_convex(ground: &VertexSet, constraints: &[VertexSet]) -> Result<Vec<Vec<Vertex>>, OracleError> {
    if ground.len() > MAX_PERMUTATION_GROUND {
        return Err(OracleError::TooLarge { n: ground.len(), max: MAX_PERMUTATION_GROUND });
    }
    Ok(all_orderings(ground).into_iter().filter(|o| constraints.iter().all(|s| is_consecutive(o, s))).collect())
}

pub type Orderings = Vec<Vec<Vertex>>;

/// The convex orderings of all sets of `c`, and those among them in which, for any two
/// sets `Z ⊂ Y` of one family, every element of `Y \ Z` comes before every element of `Z`.
pub fn brute_permutation_sets(
    ground: &VertexSet,
    c: &NestedCollection,
) -> Result<(Orderings, Orderings), OracleError> {
    if c.ground() != ground {
        return Err(OracleError::Invalid("collection is over a different ground set".into()));
    }
    let convex = brute_convex(ground, &c.all_sets())?;
    let nested = convex
        .iter()
        .filter(|o| {
            let pos = positions(o);
            c.families().iter().all(|fam| {
                fam.iter().enumerate().all(|(i, z)| {
                    fam[i + 1..].iter().all(|y| {
                        let before = y.difference(z);
                        let ok = before.iter().all(|a| z.iter().all(|b| pos[&a] < pos[&b]));
                        ok
                    })
                })
            })
        })
        .cloned()
        .collect();
    Ok((convex, nested))
}

/// Searches for an induced cycle of length at least four.
pub fn is_chordal_by_cycles(g: &Graph) -> bool {
    fn grow(g: &Graph, path: &mut Vec<Vertex>, on_path: &mut [bool]) -> bool {
        let start = path[0];
        let last = *path.last().expect("non-empty path");
        for &w in g.adjacent(last) {
            if w <= start || on_path[w] {
                continue;
            }
            if path.iter().skip(1).take(path.len().saturating_sub(2)).any(|&u| g.has_edge(u, w)) {
                continue;
            }
            if path.len() >= 2 && g.has_edge(start, w) {
                if path.len() >= 3 {
                    return true;
                }
                continue;
            }
            path.push(w);
            on_path[w] = true;
            let found = grow(g, path, on_path);
            on_path[w] = false;
            path.pop();
            if found {
                return true;
            }
        }
        false
    }
    let mut on_path = vec![false; g.n()];
    !g.vertices().any(|s| {
        on_path[s] = true;
        let found = grow(g, &mut vec![s], &mut on_path);
        on_path[s] = false;
        found
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};

    fn b() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn rooted_tree_counts() {
        for n in 1..=6usize {
            assert_eq!(rooted_labeled_trees(n, b()).unwrap().len(), n.pow(n as u32 - 1));
        }
    }

    #[test]
    fn tiny_layout_counts() {
        assert_eq!(all_tree_layouts(&Graph::empty(1), None, b()).unwrap().len(), 1);
        let p2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(all_tree_layouts(&p2, None, b()).unwrap().len(), 2);
    }

    #[test]
    fn pruned_search_matches_filter() {
        let none = PatternSet { name: "none".into(), patterns: Vec::new() };
        for kind in [GraphKind::KFan(3), GraphKind::Path(5), GraphKind::KSun(3)] {
            let g = generate(kind).unwrap();
            let all = all_tree_layouts(&g, None, b()).unwrap();
            assert_eq!(pattern_free_tree_layouts(&g, None, &none, b()).unwrap(), all);
            let mut filtered = all.clone();
            filtered.retain(|t| is_indifference(&g, t, IndifferenceMethod::Patterns));
            assert_eq!(indifference_tree_layouts(&g, None, b()).unwrap(), filtered, "{kind}");
        }
    }

    #[test]
    fn separations() {
        assert!(!brute_recognize(&generate(GraphKind::KSun(3)).unwrap(), b()).unwrap());
        assert!(brute_recognize(&generate(GraphKind::KFan(4)).unwrap(), b()).unwrap());
        assert!(!brute_recognize(&generate(GraphKind::KFan(5)).unwrap(), b()).unwrap());
    }

    #[test]
    fn isomorphism_and_budget() {
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let p5 = generate(GraphKind::Path(5)).unwrap();
        assert_eq!(brute_isomorphic(&c5, &p5, b()).unwrap(), None);
        let perm = vec![3, 0, 4, 1, 2];
        let f = brute_isomorphic(&c5, &c5.relabel(&perm), b()).unwrap().unwrap();
        assert!(c5.is_isomorphism(&c5.relabel(&perm), &f));
        let tight = SearchBudget::new(8, 3, None).unwrap();
        assert!(matches!(all_tree_layouts(&c5, None, tight), Err(OracleError::BudgetExceeded(3))));
        assert!(matches!(brute_recognize(&Graph::empty(9), b()), Err(OracleError::TooLarge { n: 9, max: 8 })));
        assert!(SearchBudget::new(0, 1, None).is_err());
    }

    #[test]
    fn permutation_sets_literal() {
        let ground = VertexSet::from([0, 1, 2]);
        assert_eq!(brute_convex(&ground, &[]).unwrap().len(), 6);
        let c = NestedCollection::new(ground.clone(), vec![vec![VertexSet::from([1, 2]), ground.clone()]]).unwrap();
        let (convex, nested) = brute_permutation_sets(&ground, &c).unwrap();
        assert_eq!(convex.len(), 4);
        assert_eq!(nested, vec![vec![0, 1, 2], vec![0, 2, 1]]);
    }

    #[test]
    fn chordality() {
        assert!(is_chordal_by_cycles(&generate(GraphKind::KSun(4)).unwrap()));
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(!is_chordal_by_cycles(&c4));
        let mut c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert!(!is_chordal_by_cycles(&c6));
        c6.add_edge(0, 3).unwrap();
        assert!(!is_chordal_by_cycles(&c6));
        c6.add_edge(0, 2).unwrap();
        c6.add_edge(0, 4).unwrap();
        assert!(is_chordal_by_cycles(&c6));
    }
}
