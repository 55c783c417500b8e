//! PQ-trees for consecutivity constraints via overlap components.
//!
//! Two sets overlap when they intersect and neither contains the other. The union of an
//! overlap component is a factor; when it covers the whole ground set the component fixes
//! the order of its atoms up to reversal (a Q-node), otherwise the maximal component unions
//! are permutable blocks (a P-node).

use crate::graph::VertexSet;

use super::{FpqTree, NodeKind, Shape};

/// A PQ-tree representing exactly the permutations of `ground` in which every constraint is
/// consecutive, or `None` when there are none.
pub fn convex_pq(ground: &VertexSet, constraints: &[VertexSet]) -> Option<FpqTree> {
    if ground.is_empty() || constraints.iter().any(|s| !s.is_subset(ground)) {
        return None;
    }
    let shape = solve(ground, constraints.to_vec())?;
    Some(FpqTree::from_shape(shape).expect("solver builds valid shapes"))
}

fn overlaps(a: &VertexSet, b: &VertexSet) -> bool {
    !a.is_disjoint(b) && !a.is_subset(b) && !b.is_subset(a)
}

fn solve(x: &VertexSet, sets: Vec<VertexSet>) -> Option<Shape> {
    if x.len() == 1 {
        return Some(Shape::Leaf(x.first().expect("non-empty")));
    }
    let mut sets: Vec<VertexSet> = sets.into_iter().filter(|s| s.len() > 1 && s.len() < x.len()).collect();
    sets.sort();
    sets.dedup();
    if sets.is_empty() {
        return Some(Shape::Node(NodeKind::P, x.iter().map(Shape::Leaf).collect()));
    }

    let components = overlap_components(&sets);
    let unions: Vec<VertexSet> = components
        .iter()
        .map(|c| c.iter().fold(VertexSet::new(), |acc, &i| acc.union(&sets[i])))
        .collect();

    if let Some(ci) = unions.iter().position(|u| u == x) {
        let member: Vec<&VertexSet> = components[ci].iter().map(|&i| &sets[i]).collect();
        let atoms = order_atoms(&member)?;
        let mut children = Vec::with_capacity(atoms.len());
        for atom in &atoms {
            let inner: Vec<VertexSet> = sets.iter().filter(|s| s.is_subset(atom)).cloned().collect();
            children.push(solve(atom, inner)?);
        }
        return Some(Shape::Node(NodeKind::Q, children));
    }

    // Maximal component unions are disjoint blocks; remaining elements are singletons.
    let mut blocks: Vec<VertexSet> = Vec::new();
    for u in &unions {
        if !unions.iter().any(|w| w != u && u.is_subset(w)) && !blocks.contains(u) {
            blocks.push(u.clone());
        }
    }
    let covered = blocks.iter().fold(VertexSet::new(), |acc, b| acc.union(b));
    blocks.extend(x.difference(&covered).iter().map(VertexSet::singleton));
    blocks.sort_by_key(|b| b.first());
    let mut children = Vec::with_capacity(blocks.len());
    for b in &blocks {
        let inner: Vec<VertexSet> = sets.iter().filter(|s| s.is_subset(b)).cloned().collect();
        children.push(solve(b, inner)?);
    }
    Some(Shape::Node(NodeKind::P, children))
}

fn overlap_components(sets: &[VertexSet]) -> Vec<Vec<usize>> {
    let mut comp = vec![usize::MAX; sets.len()];
    let mut out = Vec::new();
    for start in 0..sets.len() {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[start] = id;
        let mut members = vec![start];
        let mut head = 0;
        while head < members.len() {
            let i = members[head];
            head += 1;
            for j in 0..sets.len() {
                if comp[j] == usize::MAX && overlaps(&sets[i], &sets[j]) {
                    comp[j] = id;
                    members.push(j);
                }
            }
        }
        out.push(members);
    }
    out
}

/// Orders the atoms of an overlap component whose members arrive in breadth-first overlap
/// order. Returns the atoms left to right, or `None` when no order keeps all members
/// consecutive.
fn order_atoms(members: &[&VertexSet]) -> Option<Vec<VertexSet>> {
    let mut parts: Vec<VertexSet> = vec![members[0].clone()];
    let mut covered = members[0].clone();
    for s in &members[1..] {
        let outside = s.difference(&covered);
        let touched: Vec<usize> = (0..parts.len()).filter(|&k| !parts[k].is_disjoint(s)).collect();
        let (i, j) = (*touched.first()?, *touched.last()?);
        if touched.len() != j - i + 1 || (i + 1..j).any(|k| !parts[k].is_subset(s)) {
            return None;
        }
        let last = parts.len() - 1;
        let full = |k: usize| parts[k].is_subset(s);
        let mut next: Vec<VertexSet> = Vec::with_capacity(parts.len() + 3);
        if outside.is_empty() {
            if i == j {
                return None;
            }
            next.extend(parts[..i].iter().cloned());
            push_split(&mut next, &parts[i], s, true);
            next.extend(parts[i + 1..j].iter().cloned());
            push_split(&mut next, &parts[j], s, false);
            next.extend(parts[j + 1..].iter().cloned());
        } else {
            let right = j == last && (i == j || full(j));
            let left = i == 0 && (i == j || full(i));
            if right {
                next.extend(parts[..i].iter().cloned());
                push_split(&mut next, &parts[i], s, true);
                if i < j {
                    next.extend(parts[i + 1..=j].iter().cloned());
                }
                next.push(outside.clone());
            } else if left {
                next.push(outside.clone());
                if i < j {
                    next.extend(parts[..j].iter().cloned());
                }
                push_split(&mut next, &parts[j], s, false);
                next.extend(parts[j + 1..].iter().cloned());
            } else {
                return None;
            }
        }
        parts = next;
        covered = covered.union(&outside);
    }
    Some(parts)
}

/// Pushes `part` split by `s`; the piece inside `s` goes last when `inside_last`.
fn push_split(out: &mut Vec<VertexSet>, part: &VertexSet, s: &VertexSet, inside_last: bool) {
    let inside = part.intersection(s);
    let rest = part.difference(s);
    let (first, second) = if inside_last { (rest, inside) } else { (inside, rest) };
    for piece in [first, second] {
        if !piece.is_empty() {
            out.push(piece);
        }
    }
}
