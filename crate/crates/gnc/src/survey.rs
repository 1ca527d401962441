//! Empirical probe of the homomorphism-extension lemma: enumerate Abelian
//! groups up to a given order, every subgroup, and every homomorphism from
//! each subgroup into a list of cyclic targets, and record whether the
//! extension to the whole group exists.

use std::sync::Arc;

use rayon::prelude::*;

use crate::group::{
    all_subgroups, enumerate_homomorphisms_abelian, extend_given_complement, find_complement, Elem,
    FiniteGroup, GroupError, PartialHom,
};

/// Hard cap on the survey's group order.
pub const SURVEY_MAX_ORDER: usize = 64;

/// One extension attempt: the triple plus the outcome.
#[derive(Clone, Debug)]
pub struct SurveyRow {
    pub group: String,
    pub subgroup: Vec<Elem>,
    pub target: String,
    /// The partial map, as (subgroup element, image) pairs.
    pub phi: Vec<(Elem, Elem)>,
    pub via_complement: bool,
    pub success: bool,
    pub obstruction: Option<Vec<Elem>>,
}

impl SurveyRow {
    pub fn describe(&self) -> String {
        let phi: Vec<String> = self.phi.iter().map(|(x, y)| format!("{x}->{y}")).collect();
        format!(
            "{} subgroup {:?} target {} phi {{{}}}",
            self.group,
            self.subgroup,
            self.target,
            phi.join(", ")
        )
    }
}

#[derive(Clone, Debug)]
pub struct SurveySummary {
    pub max_order: usize,
    pub targets: Vec<usize>,
    pub groups: usize,
    pub triples: usize,
    pub successes: usize,
    pub via_complement: usize,
    pub via_fallback: usize,
    pub failures: Vec<SurveyRow>,
}

/// Invariant-factor sequences (n1, n2, ...) with n_{i+1} | n_i and product
/// <= max_order: one representative per isomorphism class of Abelian groups
/// of order 2..=max_order.
pub fn abelian_invariant_factors(max_order: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    fn recurse(
        prefix: &mut Vec<usize>,
        product: usize,
        max_order: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        let limit = prefix.last().copied().unwrap_or(max_order);
        for n in 2..=limit {
            if product * n > max_order {
                continue;
            }
            if let Some(&last) = prefix.last() {
                if last % n != 0 {
                    continue;
                }
            }
            prefix.push(n);
            out.push(prefix.clone());
            recurse(prefix, product * n, max_order, out);
            prefix.pop();
        }
    }
    recurse(&mut prefix, 1, max_order, &mut out);
    out.sort_by_key(|f| (f.iter().product::<usize>(), f.clone()));
    out
}

fn survey_group(factors: &[usize], targets: &[Arc<FiniteGroup>]) -> Vec<SurveyRow> {
    let g = FiniteGroup::cyclic_product(factors)
        .expect("survey orders are capped")
        .into_arc();
    let mut rows = Vec::new();
    for sub in all_subgroups(&g) {
        let complement = find_complement(&sub).expect("survey groups are Abelian");
        let (sub_as_group, elem_map) = sub.as_group(format!("{}-sub", g.label()));
        let sub_as_group = sub_as_group.into_arc();
        for target in targets {
            for map in enumerate_homomorphisms_abelian(&sub_as_group, target) {
                let phi_map: std::collections::BTreeMap<Elem, Elem> =
                    elem_map.iter().copied().zip(map.iter().copied()).collect();
                let phi = PartialHom::new(sub.clone(), target.clone(), phi_map.clone())
                    .expect("enumerated maps are homomorphisms");
                let outcome = extend_given_complement(&phi, complement.as_ref());
                rows.push(SurveyRow {
                    group: g.label().to_string(),
                    subgroup: sub.elements().to_vec(),
                    target: target.label().to_string(),
                    phi: phi_map.into_iter().collect(),
                    via_complement: complement.is_some(),
                    success: outcome.is_ok(),
                    obstruction: match outcome {
                        Err(GroupError::NoExtension { obstruction }) => Some(obstruction),
                        _ => None,
                    },
                });
            }
        }
    }
    rows
}

/// Runs the survey. `parallel` distributes groups across threads; the row
/// order (and therefore the failure list) is identical either way.
pub fn lemma2_survey(
    max_order: usize,
    target_orders: &[usize],
    parallel: bool,
) -> Result<SurveySummary, GroupError> {
    if max_order > SURVEY_MAX_ORDER {
        return Err(GroupError::OrderCapExceeded {
            order: max_order,
            cap: SURVEY_MAX_ORDER,
        });
    }
    let targets: Vec<Arc<FiniteGroup>> = target_orders
        .iter()
        .map(|&n| FiniteGroup::cyclic(n).map(FiniteGroup::into_arc))
        .collect::<Result<_, _>>()?;
    let factor_lists = abelian_invariant_factors(max_order);
    let rows: Vec<SurveyRow> = if parallel {
        factor_lists
            .par_iter()
            .map(|factors| survey_group(factors, &targets))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    } else {
        factor_lists
            .iter()
            .flat_map(|factors| survey_group(factors, &targets))
            .collect()
    };
    let successes = rows.iter().filter(|r| r.success).count();
    let via_complement = rows
        .iter()
        .filter(|r| r.success && r.via_complement)
        .count();
    Ok(SurveySummary {
        max_order,
        targets: target_orders.to_vec(),
        groups: factor_lists.len(),
        triples: rows.len(),
        successes,
        via_complement,
        via_fallback: successes - via_complement,
        failures: rows.into_iter().filter(|r| !r.success).collect(),
    })
}

/// Default targets: all cyclic groups of order at most 8.
pub fn default_targets() -> Vec<usize> {
    (2..=8).collect()
}
