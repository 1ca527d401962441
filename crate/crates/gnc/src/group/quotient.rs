//! Factor groups of normal subgroups.

use std::sync::Arc;

use super::{Coset, Elem, FiniteGroup, GroupError, Homomorphism, Subgroup};

/// A factor group G/N together with its coset list (ordered by
/// representative) and the projection g -> gN.
#[derive(Debug)]
pub struct Quotient {
    pub group: Arc<FiniteGroup>,
    pub cosets: Vec<Coset>,
    pub projection: Homomorphism,
}

impl Quotient {
    /// Quotient element index of a parent element.
    pub fn project(&self, g: Elem) -> Elem {
        self.projection.apply(g)
    }

    /// Canonical representative of quotient element `q`.
    pub fn representative(&self, q: Elem) -> Elem {
        self.cosets[q].representative()
    }
}

/// Builds G/N on coset representatives with (aN)(bN) = abN.
///
/// Fails with `NotNormal` carrying the first g for which gN != Ng.
pub fn quotient_group(n: &Subgroup) -> Result<Quotient, GroupError> {
    if let Some(g) = n.normality_witness() {
        return Err(GroupError::NotNormal(g));
    }
    let parent = n.parent().clone();
    let cosets = n.left_cosets();
    let order = cosets.len();
    let mut coset_index = vec![0; parent.order()];
    for (i, c) in cosets.iter().enumerate() {
        for &e in c.elements() {
            coset_index[e] = i;
        }
    }
    let mut table = vec![0; order * order];
    for (i, ci) in cosets.iter().enumerate() {
        for (j, cj) in cosets.iter().enumerate() {
            table[i * order + j] = coset_index[parent.op(ci.representative(), cj.representative())];
        }
    }
    let identity = coset_index[parent.identity()];
    let label = format!("{}/N{}", parent.label(), n.size());
    let group = FiniteGroup::trusted(label, order, table, identity).into_arc();
    let projection = Homomorphism::new(parent, group.clone(), coset_index)?;
    Ok(Quotient {
        group,
        cosets,
        projection,
    })
}
