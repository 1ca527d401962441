//! Subgroups, cosets, and the subgroup lattice.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Elem, FiniteGroup, GroupError};

/// A verified subgroup, stored as a sorted element set.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: Vec<Elem>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.same_set(other)
    }
}

impl Eq for Subgroup {}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup{:?} of {}", self.elements, self.parent.label())
    }
}

/// A left coset gS, stored sorted; the representative is the minimum element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    elements: Vec<Elem>,
}

impl Coset {
    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn representative(&self) -> Elem {
        self.elements[0]
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

impl Subgroup {
    /// Validates that `elements` is a subgroup of `parent`.
    pub fn new(parent: Arc<FiniteGroup>, mut elements: Vec<Elem>) -> Result<Self, GroupError> {
        elements.sort_unstable();
        elements.dedup();
        if let Some(&e) = elements.iter().find(|&&e| e >= parent.order()) {
            return Err(GroupError::ElementOutOfRange(e, parent.order()));
        }
        if elements.binary_search(&parent.identity()).is_err() {
            return Err(GroupError::NotSubgroup("missing identity".into()));
        }
        for &a in &elements {
            if elements.binary_search(&parent.inv(a)).is_err() {
                return Err(GroupError::NotSubgroup(format!("missing inverse of {a}")));
            }
            for &b in &elements {
                if elements.binary_search(&parent.op(a, b)).is_err() {
                    return Err(GroupError::NotSubgroup(format!("not closed at ({a},{b})")));
                }
            }
        }
        Ok(Subgroup { parent, elements })
    }

    /// The trivial subgroup {identity}.
    pub fn trivial(parent: Arc<FiniteGroup>) -> Self {
        let e = parent.identity();
        Subgroup {
            parent,
            elements: vec![e],
        }
    }

    /// The whole group as a subgroup of itself.
    pub fn whole(parent: Arc<FiniteGroup>) -> Self {
        let elements = parent.elements().collect();
        Subgroup { parent, elements }
    }

    /// Smallest subgroup containing `gens`, by fixed-point closure under
    /// products and inverses. The empty set generates {identity}.
    pub fn closure(parent: &Arc<FiniteGroup>, gens: &[Elem]) -> Result<Self, GroupError> {
        if let Some(&g) = gens.iter().find(|&&g| g >= parent.order()) {
            return Err(GroupError::ElementOutOfRange(g, parent.order()));
        }
        let mut set = BTreeSet::new();
        set.insert(parent.identity());
        let mut frontier: Vec<Elem> = gens.to_vec();
        while let Some(g) = frontier.pop() {
            if set.insert(g) {
                frontier.push(parent.inv(g));
                let known: Vec<Elem> = set.iter().copied().collect();
                for &h in &known {
                    frontier.push(parent.op(g, h));
                    frontier.push(parent.op(h, g));
                }
            }
        }
        Ok(Subgroup {
            parent: parent.clone(),
            elements: set.into_iter().collect(),
        })
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    pub fn is_whole(&self) -> bool {
        self.size() == self.parent.order()
    }

    /// Same element set in the same parent group (parents compared by table).
    pub fn same_set(&self, other: &Subgroup) -> bool {
        self.parent.same_table(other.parent()) && self.elements == other.elements
    }

    /// The left coset g·S, sorted.
    pub fn left_coset(&self, g: Elem) -> Coset {
        let mut elements: Vec<Elem> = self
            .elements
            .iter()
            .map(|&h| self.parent.op(g, h))
            .collect();
        elements.sort_unstable();
        Coset { elements }
    }

    /// All left cosets, ordered by representative; a partition of the parent.
    pub fn left_cosets(&self) -> Vec<Coset> {
        let n = self.parent.order();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n / self.size());
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let coset = self.left_coset(g);
            for &e in coset.elements() {
                seen[e] = true;
            }
            out.push(coset);
        }
        out
    }

    /// Representative (minimum element) of the left coset of `g`.
    pub fn coset_representative(&self, g: Elem) -> Elem {
        self.elements
            .iter()
            .map(|&h| self.parent.op(g, h))
            .min()
            .unwrap()
    }

    /// None if normal; otherwise the first g with gN != Ng.
    pub fn normality_witness(&self) -> Option<Elem> {
        for g in self.parent.elements() {
            let left = self.left_coset(g);
            let mut right: Vec<Elem> = self
                .elements
                .iter()
                .map(|&h| self.parent.op(h, g))
                .collect();
            right.sort_unstable();
            if left.elements() != right.as_slice() {
                return Some(g);
            }
        }
        None
    }

    /// Reindexes the subgroup as a standalone group. Returns the group and
    /// the map from new indices to parent elements.
    pub fn as_group(&self, label: impl Into<String>) -> (FiniteGroup, Vec<Elem>) {
        let n = self.size();
        let index_of = |e: Elem| self.elements.binary_search(&e).unwrap();
        let mut table = vec![0; n * n];
        for (i, &a) in self.elements.iter().enumerate() {
            for (j, &b) in self.elements.iter().enumerate() {
                table[i * n + j] = index_of(self.parent.op(a, b));
            }
        }
        let identity = index_of(self.parent.identity());
        (
            FiniteGroup::trusted(label.into(), n, table, identity),
            self.elements.clone(),
        )
    }
}

/// Intersection of subgroups of a common parent; the empty list yields the
/// whole group.
pub fn intersect_subgroups(parent: &Arc<FiniteGroup>, subs: &[Subgroup]) -> Subgroup {
    let mut elements: Vec<Elem> = parent.elements().collect();
    for s in subs {
        elements.retain(|&e| s.contains(e));
    }
    Subgroup {
        parent: parent.clone(),
        elements,
    }
}

/// Every subgroup of `parent`, ordered by (size, element list). Intended for
/// orders <= 64; the lattice is explored by closing each subgroup with one
/// extra element at a time.
pub fn all_subgroups(parent: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let mut seen: BTreeSet<Vec<Elem>> = BTreeSet::new();
    let trivial = Subgroup::trivial(parent.clone());
    let mut queue = vec![trivial.elements.clone()];
    seen.insert(queue[0].clone());
    while let Some(current) = queue.pop() {
        for g in parent.elements() {
            if current.binary_search(&g).is_ok() {
                continue;
            }
            let mut gens = current.clone();
            gens.push(g);
            let bigger = Subgroup::closure(parent, &gens)
                .expect("elements in range")
                .elements;
            if seen.insert(bigger.clone()) {
                queue.push(bigger);
            }
        }
    }
    let mut out: Vec<Subgroup> = seen
        .into_iter()
        .map(|elements| Subgroup {
            parent: parent.clone(),
            elements,
        })
        .collect();
    out.sort_by(|a, b| (a.size(), a.elements()).cmp(&(b.size(), b.elements())));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> Arc<FiniteGroup> {
        FiniteGroup::cyclic(4).unwrap().into_arc()
    }

    fn klein() -> Arc<FiniteGroup> {
        FiniteGroup::cyclic_product(&[2, 2]).unwrap().into_arc()
    }

    #[test]
    fn closure_examples() {
        let g = z4();
        assert_eq!(Subgroup::closure(&g, &[2]).unwrap().elements(), &[0, 2]);
        assert_eq!(Subgroup::closure(&g, &[]).unwrap().elements(), &[0]);
        // S3: a transposition generates a subgroup of order 2, by closing
        // under composition
        let s3 = FiniteGroup::symmetric(3).unwrap().into_arc();
        let transposition = s3.elements().find(|&x| x != 0 && s3.op(x, x) == 0).unwrap();
        let sub = Subgroup::closure(&s3, &[transposition]).unwrap();
        assert_eq!(sub.size(), 2);
    }

    #[test]
    fn cosets_partition_z4() {
        let g = z4();
        let s = Subgroup::new(g, vec![0, 2]).unwrap();
        let cosets = s.left_cosets();
        assert_eq!(cosets.len(), 2);
        assert_eq!(cosets[0].elements(), &[0, 2]);
        assert_eq!(cosets[1].elements(), &[1, 3]);
    }

    #[test]
    fn cosets_of_diagonal_in_klein() {
        let g = klein();
        // {(0,0),(1,1)} = indices {0,3}
        let s = Subgroup::new(g.clone(), vec![0, 3]).unwrap();
        let cosets = s.left_cosets();
        assert_eq!(cosets.len(), 2);
        assert!(cosets.iter().all(|c| c.len() == 2));
        // oracle: enumerate g+S for all g
        for e in g.elements() {
            assert!(cosets.iter().any(|c| c.contains(e)));
        }
    }

    #[test]
    fn whole_subgroup_single_coset() {
        let g = z4();
        let s = Subgroup::whole(g.clone());
        let cosets = s.left_cosets();
        assert_eq!(cosets.len(), 1);
        assert_eq!(cosets[0].len(), g.order());
    }

    #[test]
    fn intersection_examples() {
        let g = z4();
        let a = Subgroup::new(g.clone(), vec![0, 2]).unwrap();
        let b = Subgroup::whole(g.clone());
        assert_eq!(intersect_subgroups(&g, &[a, b]).elements(), &[0, 2]);

        let k = klein();
        let a = Subgroup::new(k.clone(), vec![0, 1]).unwrap();
        let b = Subgroup::new(k.clone(), vec![0, 2]).unwrap();
        assert_eq!(intersect_subgroups(&k, &[a, b]).elements(), &[0]);

        assert!(intersect_subgroups(&g, &[]).is_whole());
    }

    #[test]
    fn subgroup_rejects_non_closed_set() {
        let g = z4();
        assert!(matches!(
            Subgroup::new(g.clone(), vec![0, 1]),
            Err(GroupError::NotSubgroup(_))
        ));
        assert!(matches!(
            Subgroup::new(g, vec![1, 2]),
            Err(GroupError::NotSubgroup(_))
        ));
    }

    #[test]
    fn lattice_of_klein_four() {
        let k = klein();
        let subs = all_subgroups(&k);
        // {e}, three of order 2, whole
        assert_eq!(subs.len(), 5);
        assert_eq!(subs.iter().filter(|s| s.size() == 2).count(), 3);
    }

    #[test]
    fn lagrange_holds_across_lattice() {
        for g in [z4(), klein(), FiniteGroup::symmetric(3).unwrap().into_arc()] {
            for s in all_subgroups(&g) {
                assert_eq!(g.order() % s.size(), 0);
                let cosets = s.left_cosets();
                assert_eq!(cosets.len(), g.order() / s.size());
                assert!(cosets.iter().all(|c| c.len() == s.size()));
            }
        }
    }
}
