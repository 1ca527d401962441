//! Finite groups as explicit operation tables, with subgroups, cosets,
//! quotients, homomorphisms, and homomorphism extension.
//!
//! Elements are 0-based indices into the operation table. Groups built from
//! files are normalized so the identity is index 0; internally constructed
//! groups (quotients, products) place the identity wherever the canonical
//! ordering puts it.

mod extend;
mod hom;
mod parse;
mod quotient;
mod subgroup;

pub use extend::{
    enumerate_homomorphisms_abelian, extend_given_complement, extend_homomorphism,
    extend_via_complement, find_complement, ComplementWitness, PartialHom,
};
pub use hom::{analyze_homomorphism, find_isomorphism, HomAnalysis, Homomorphism};
pub use parse::{parse_group_file, GroupFile};
pub use quotient::{quotient_group, Quotient};
pub use subgroup::{all_subgroups, intersect_subgroups, Coset, Subgroup};

use std::sync::Arc;
use thiserror::Error;

/// Index of a group element in its operation table.
pub type Elem = usize;

/// Default cap on group order for exhaustive operations.
pub const DEFAULT_MAX_ORDER: usize = 512;

/// Order cap, overridable through `GNC_MAX_GROUP_ORDER`.
pub fn max_group_order() -> usize {
    std::env::var("GNC_MAX_GROUP_ORDER")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_ORDER)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("operation table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("table not closed: entry at ({x},{y}) is {value}, outside 0..{order}")]
    NotClosed {
        x: Elem,
        y: Elem,
        value: usize,
        order: usize,
    },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(Elem),
    #[error("associativity fails at ({x},{y},{z})")]
    NotAssociative { x: Elem, y: Elem, z: Elem },
    #[error("group order {order} exceeds cap {cap} (set GNC_MAX_GROUP_ORDER to raise)")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("element {0} out of range for group of order {1}")]
    ElementOutOfRange(Elem, usize),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("subgroup is not normal: g={0} has gN != Ng")]
    NotNormal(Elem),
    #[error("map is not a homomorphism: fails at ({0},{1})")]
    NotHomomorphism(Elem, Elem),
    #[error("map has {len} entries, domain has order {expected}")]
    MapLengthMismatch { len: usize, expected: usize },
    #[error("group {0} is not Abelian")]
    NotAbelian(String),
    #[error("no homomorphism extension exists; obstructing subgroup {obstruction:?}")]
    NoExtension { obstruction: Vec<Elem> },
    #[error("symmetric group S{0} not supported (max S4)")]
    SymmetricTooLarge(usize),
    #[error("cyclic factor must be positive")]
    ZeroCyclicFactor,
}

/// A finite group given by its full operation table.
#[derive(Clone)]
pub struct FiniteGroup {
    label: String,
    order: usize,
    table: Vec<Elem>,
    identity: Elem,
    inverse: Vec<Elem>,
    abelian: bool,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.label, self.order)
    }
}

impl FiniteGroup {
    /// Validates a candidate operation table against the group axioms.
    ///
    /// Returns the first violation in a deterministic scan order: squareness,
    /// closure (row-major), identity, inverses (ascending), associativity
    /// (lexicographic triples).
    pub fn from_table(label: impl Into<String>, rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let order = rows.len();
        let cap = max_group_order();
        if order > cap {
            return Err(GroupError::OrderCapExceeded { order, cap });
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != order {
                return Err(GroupError::NotSquare {
                    row,
                    len: r.len(),
                    expected: order,
                });
            }
        }
        let mut table = Vec::with_capacity(order * order);
        for (x, r) in rows.iter().enumerate() {
            for (y, &value) in r.iter().enumerate() {
                if value >= order {
                    return Err(GroupError::NotClosed { x, y, value, order });
                }
                table.push(value);
            }
        }
        Self::from_flat_table(label, order, table)
    }

    fn from_flat_table(
        label: impl Into<String>,
        order: usize,
        table: Vec<Elem>,
    ) -> Result<Self, GroupError> {
        let op = |a: Elem, b: Elem| table[a * order + b];
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| op(e, x) == x && op(x, e) == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = vec![0; order];
        for (x, slot) in inverse.iter_mut().enumerate() {
            *slot = (0..order)
                .find(|&y| op(x, y) == identity && op(y, x) == identity)
                .ok_or(GroupError::NoInverse(x))?;
        }
        for x in 0..order {
            for y in 0..order {
                for z in 0..order {
                    if op(op(x, y), z) != op(x, op(y, z)) {
                        return Err(GroupError::NotAssociative { x, y, z });
                    }
                }
            }
        }
        let abelian = (0..order).all(|a| (a..order).all(|b| op(a, b) == op(b, a)));
        Ok(FiniteGroup {
            label: label.into(),
            order,
            table,
            identity,
            inverse,
            abelian,
        })
    }

    /// Builds a group from parts known to satisfy the axioms (quotients,
    /// products). Checks nothing beyond recomputing inverses and the
    /// Abelian flag.
    fn trusted(label: String, order: usize, table: Vec<Elem>, identity: Elem) -> Self {
        let op = |a: Elem, b: Elem| table[a * order + b];
        let mut inverse = vec![0; order];
        for (x, slot) in inverse.iter_mut().enumerate() {
            *slot = (0..order)
                .find(|&y| op(x, y) == identity)
                .expect("trusted table has inverses");
        }
        let abelian = (0..order).all(|a| (a..order).all(|b| op(a, b) == op(b, a)));
        FiniteGroup {
            label,
            order,
            table,
            identity,
            inverse,
            abelian,
        }
    }

    /// The cyclic group Z_n with addition mod n.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        Self::cyclic_product(&[n])
    }

    /// Z_{n1} x ... x Z_{nk} with elements in mixed-radix order (first factor
    /// most significant, identity = all zeros = index 0).
    pub fn cyclic_product(factors: &[usize]) -> Result<Self, GroupError> {
        if factors.contains(&0) {
            return Err(GroupError::ZeroCyclicFactor);
        }
        let order: usize = factors.iter().product();
        let cap = max_group_order();
        if order > cap {
            return Err(GroupError::OrderCapExceeded { order, cap });
        }
        let label = factors
            .iter()
            .map(|n| format!("Z{n}"))
            .collect::<Vec<_>>()
            .join("x");
        // componentwise addition in mixed radix, least significant factor last
        let mut table = vec![0; order * order];
        for a in 0..order {
            for b in 0..order {
                let (mut ra, mut rb) = (a, b);
                let mut digits = Vec::with_capacity(factors.len());
                for &n in factors.iter().rev() {
                    digits.push(((ra % n) + (rb % n)) % n);
                    ra /= n;
                    rb /= n;
                }
                let mut idx = 0;
                for (&n, &d) in factors.iter().zip(digits.iter().rev()) {
                    idx = idx * n + d;
                }
                table[a * order + b] = idx;
            }
        }
        Ok(Self::trusted(label, order, table, 0))
    }

    /// External direct product; element (g,h) is indexed as g*|H|+h.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self, GroupError> {
        let order = g.order * h.order;
        let cap = max_group_order();
        if order > cap {
            return Err(GroupError::OrderCapExceeded { order, cap });
        }
        let mut table = vec![0; order * order];
        for a1 in 0..g.order {
            for a2 in 0..h.order {
                let a = a1 * h.order + a2;
                for b1 in 0..g.order {
                    for b2 in 0..h.order {
                        let b = b1 * h.order + b2;
                        table[a * order + b] = g.op(a1, b1) * h.order + h.op(a2, b2);
                    }
                }
            }
        }
        let identity = g.identity * h.order + h.identity;
        let label = format!("{}x{}", g.label, h.label);
        Ok(Self::trusted(label, order, table, identity))
    }

    /// The symmetric group S_n, n <= 4, with elements in lexicographic
    /// one-line-notation order; op(a,b) applies b first, then a.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n == 0 || n > 4 {
            return Err(GroupError::SymmetricTooLarge(n));
        }
        let perms = permutations_lex(n);
        let index: std::collections::HashMap<Vec<usize>, usize> = perms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let order = perms.len();
        let mut table = vec![0; order * order];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                let composed: Vec<usize> = (0..n).map(|x| pa[pb[x]]).collect();
                table[a * order + b] = index[&composed];
            }
        }
        Ok(Self::trusted(format!("S{n}"), order, table, 0))
    }

    pub fn op(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a]
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    /// a^k for k >= 0.
    pub fn pow(&self, a: Elem, k: usize) -> Elem {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.op(acc, a);
        }
        acc
    }

    /// Multiplicative order of an element.
    pub fn element_order(&self, a: Elem) -> usize {
        let mut acc = a;
        let mut k = 1;
        while acc != self.identity {
            acc = self.op(acc, a);
            k += 1;
        }
        k
    }

    /// Structural equality: same order and identical operation table.
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        self.order == other.order && self.table == other.table
    }

    pub fn into_arc(self) -> Arc<FiniteGroup> {
        Arc::new(self)
    }
}

/// All permutations of 0..n in lexicographic one-line order.
fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next_permutation
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_table_is_valid() {
        let g = FiniteGroup::from_table("Z2", &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.identity(), 0);
        assert_eq!(g.order(), 2);
        assert!(g.is_abelian());
    }

    #[test]
    fn missing_inverse_detected() {
        let err = FiniteGroup::from_table("bad", &[vec![0, 1], vec![1, 1]]).unwrap_err();
        assert_eq!(err, GroupError::NoInverse(1));
    }

    #[test]
    fn s3_from_permutation_composition_is_valid_and_non_abelian() {
        // brute-force oracle: compose all 36 permutation pairs
        let perms = permutations_lex(3);
        let index: std::collections::HashMap<_, _> = perms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let rows: Vec<Vec<usize>> = perms
            .iter()
            .map(|pa| {
                perms
                    .iter()
                    .map(|pb| index[&(0..3).map(|x| pa[pb[x]]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        let g = FiniteGroup::from_table("S3", &rows).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert!(g.same_table(&FiniteGroup::symmetric(3).unwrap()));
    }

    #[test]
    fn z2_x_z3_is_cyclic_of_order_6() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let p = FiniteGroup::direct_product(&z2, &z3).unwrap();
        assert_eq!(p.order(), 6);
        // gcd(2,3)=1 so the product is cyclic: some element has order 6
        assert!(p.elements().any(|x| p.element_order(x) == 6));
    }

    #[test]
    fn klein_four_group_has_exponent_2() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let v = FiniteGroup::direct_product(&z2, &z2).unwrap();
        assert_eq!(v.order(), 4);
        for x in v.elements() {
            assert_eq!(v.op(x, x), v.identity());
        }
    }

    #[test]
    fn s3_x_z2_is_non_abelian_of_order_12() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let p = FiniteGroup::direct_product(&s3, &z2).unwrap();
        assert_eq!(p.order(), 12);
        // exhaustive commutativity check
        let commutes = p
            .elements()
            .all(|a| p.elements().all(|b| p.op(a, b) == p.op(b, a)));
        assert!(!commutes);
        assert!(!p.is_abelian());
    }

    #[test]
    fn cyclic_product_matches_folded_direct_product() {
        let a = FiniteGroup::cyclic_product(&[2, 3, 2]).unwrap();
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let b = FiniteGroup::direct_product(&FiniteGroup::direct_product(&z2, &z3).unwrap(), &z2)
            .unwrap();
        assert!(a.same_table(&b));
    }

    #[test]
    fn order_cap_enforced() {
        let err = FiniteGroup::cyclic(DEFAULT_MAX_ORDER + 1).unwrap_err();
        assert!(matches!(err, GroupError::OrderCapExceeded { .. }));
    }
}
