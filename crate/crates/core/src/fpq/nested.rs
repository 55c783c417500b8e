use crate::graph::VertexSet;

use super::{convex_pq, factors, FpqError, FpqTree, NodeKind, Shape};

/// Families of subsets of a ground set, each family a chain under inclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedCollection {
    ground: VertexSet,
    families: Vec<Vec<VertexSet>>,
}

impl NestedCollection {
    /// Deduplicates each family and sorts it by size; every family must be a chain of
    /// non-empty subsets of `ground`.
    pub fn new(ground: VertexSet, families: Vec<Vec<VertexSet>>) -> Result<NestedCollection, FpqError> {
        let mut out = Vec::with_capacity(families.len());
        for (i, mut fam) in families.into_iter().enumerate() {
            fam.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            fam.dedup();
            if fam.iter().any(|s| s.is_empty() || !s.is_subset(&ground)) {
                return Err(FpqError::InvalidCollection(format!("family {i} has an empty or foreign set")));
            }
            if fam.windows(2).any(|w| !w[0].is_subset(&w[1])) {
                return Err(FpqError::InvalidCollection(format!("family {i} is not a chain")));
            }
            out.push(fam);
        }
        Ok(NestedCollection { ground, families: out })
    }

    pub fn ground(&self) -> &VertexSet {
        &self.ground
    }

    /// Families, each sorted from smallest to largest set.
    pub fn families(&self) -> &[Vec<VertexSet>] {
        &self.families
    }

    /// Every set of every family, deduplicated.
    pub fn all_sets(&self) -> Vec<VertexSet> {
        let mut v: Vec<VertexSet> = self.families.iter().flatten().cloned().collect();
        v.sort();
        v.dedup();
        v
    }
}

/// An FPQ-tree for the permutations in which every set is consecutive and, inside each
/// chain, the larger set's surplus precedes the smaller set; `None` if there are none.
pub fn nested_convex_fpq(c: &NestedCollection) -> Option<FpqTree> {
    let mut constraints = c.all_sets();
    let chains: Vec<(&VertexSet, &VertexSet)> = c
        .families
        .iter()
        .filter(|f| f.len() >= 2)
        .map(|f| (&f[0], f.last().expect("non-empty family")))
        .collect();
    for &(min, max) in &chains {
        constraints.push(max.difference(min));
    }
    let mut tree = convex_pq(&c.ground, &constraints)?;

    for &(min, max) in &chains {
        let surplus = max.difference(min);
        let u = tree.lca(max)?;
        if tree.kind(u) == NodeKind::P {
            return None;
        }
        let (_, surplus_end) = tree.child_range(u, &surplus)?;
        let (min_start, _) = tree.child_range(u, min)?;
        if surplus_end >= min_start {
            if tree.kind(u) == NodeKind::F {
                return None;
            }
            let k = tree.children(u).len();
            let order: Vec<usize> = (0..k).rev().collect();
            tree = tree.reordered(u, &order).ok()?;
        }
        tree = tree.retyped(u, NodeKind::F).ok()?;
    }

    if !satisfies_all(&tree, c) {
        return None;
    }
    Some(FpqTree::from_shape_exact(absorb_frozen(tree.shape())).expect("absorbing keeps a valid tree"))
}

/// Splices F-children of F-nodes into their parent; both forms fix the same order, and
/// afterwards every factor is a child range of its least common ancestor.
fn absorb_frozen(shape: Shape) -> Shape {
    match shape {
        Shape::Leaf(e) => Shape::Leaf(e),
        Shape::Node(kind, children) => {
            let mut out = Vec::with_capacity(children.len());
            for c in children.into_iter().map(absorb_frozen) {
                match c {
                    Shape::Node(NodeKind::F, inner) if kind == NodeKind::F => out.extend(inner),
                    other => out.push(other),
                }
            }
            Shape::Node(kind, out)
        }
    }
}

/// Checks every set is a factor and every chain orientation holds in all permutations.
fn satisfies_all(t: &FpqTree, c: &NestedCollection) -> bool {
    let fs = factors(t);
    if !c.all_sets().iter().all(|s| fs.contains(s)) {
        return false;
    }
    c.families.iter().all(|fam| {
        fam.iter().enumerate().all(|(i, z)| {
            fam[i + 1..].iter().all(|y| {
                let before = y.difference(z);
                let ok = before.iter().all(|a| z.iter().all(|b| always_before(t, a, b)));
                ok
            })
        })
    })
}

/// `a` precedes `b` in every permutation: their lowest common ancestor is frozen and
/// orders the child containing `a` first.
fn always_before(t: &FpqTree, a: usize, b: usize) -> bool {
    let m = t.lca(&VertexSet::from([a, b])).expect("elements of the tree");
    if t.kind(m) != NodeKind::F {
        return false;
    }
    let side = |e: usize| t.children(m).iter().position(|&ch| t.leaf_set(ch).contains(e));
    matches!((side(a), side(b)), (Some(i), Some(j)) if i < j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpq::frontier_set;

    fn family(v: &[&[usize]]) -> Vec<VertexSet> {
        v.iter().map(|s| s.iter().copied().collect()).collect()
    }

    #[test]
    fn block_with_chain_and_pairs() {
        // a=0 .. e=4
        let c = NestedCollection::new(
            VertexSet::from([0, 1, 2, 3, 4]),
            vec![family(&[&[0, 1, 2, 3, 4], &[1, 2, 3, 4]]), family(&[&[1, 2]]), family(&[&[2, 3]]), family(&[&[3, 4]])],
        )
        .unwrap();
        let t = nested_convex_fpq(&c).unwrap();
        assert_eq!(t.to_sexpr(), "(F 0 (Q 1 2 3 4))");
        assert_eq!(frontier_set(&t, 10).unwrap(), vec![vec![0, 1, 2, 3, 4], vec![0, 4, 3, 2, 1]]);
    }

    #[test]
    fn frozen_children_are_spliced() {
        // Chains force 0 before 1..4 and 1 before 2, 3, 4 with 2 3 4 in a fixed run.
        let c = NestedCollection::new(
            VertexSet::from([0, 1, 2, 3, 4]),
            vec![family(&[&[1, 2, 3, 4], &[0, 1, 2, 3, 4]]), family(&[&[2, 3, 4], &[1, 2, 3, 4]]), family(&[&[2, 3]]), family(&[&[3, 4]])],
        )
        .unwrap();
        let t = nested_convex_fpq(&c).unwrap();
        assert!(t.children(0).iter().all(|&ch| t.kind(ch) != NodeKind::F), "{t}");
        assert_eq!(frontier_set(&t, 10).unwrap(), vec![vec![0, 1, 2, 3, 4], vec![0, 1, 4, 3, 2]]);
    }

    #[test]
    fn whole_ground_only() {
        let c = NestedCollection::new(VertexSet::from([0, 1, 2]), vec![family(&[&[0, 1, 2]])]).unwrap();
        assert_eq!(nested_convex_fpq(&c).unwrap().to_sexpr(), "(P 0 1 2)");
    }

    #[test]
    fn opposite_orientations_fail() {
        let c = NestedCollection::new(VertexSet::from([0, 1]), vec![family(&[&[0], &[0, 1]]), family(&[&[1], &[0, 1]])]).unwrap();
        assert!(nested_convex_fpq(&c).is_none());
    }

    #[test]
    fn orientation_reverses_q() {
        let c = NestedCollection::new(VertexSet::from([0, 1, 2]), vec![family(&[&[0], &[0, 1, 2]]), family(&[&[0, 1]])]).unwrap();
        let t = nested_convex_fpq(&c).unwrap();
        let fr = frontier_set(&t, 10).unwrap();
        assert!(fr.iter().all(|p| p.last() == Some(&0)));
    }

    #[test]
    fn invalid_collections() {
        assert!(NestedCollection::new(VertexSet::from([0, 1, 2]), vec![family(&[&[0], &[1]])]).is_err());
        assert!(NestedCollection::new(VertexSet::from([0, 1]), vec![family(&[&[5]])]).is_err());
        assert!(NestedCollection::new(VertexSet::from([0, 1]), vec![vec![VertexSet::new()]]).is_err());
    }
}
