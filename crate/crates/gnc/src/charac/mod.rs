//! Group-characterizable random variables: induced distributions, the
//! entropy formula, representability of functions, consistency of families,
//! and matching characterizations against network codes.

mod parse;

pub use parse::{parse_characterization, parse_characterization_with};

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::dist::ExactDistribution;
use crate::group::{intersect_subgroups, Elem, FiniteGroup, Subgroup};
use crate::net::{NetError, NetworkCode, NetworkInstance};
use crate::parse_util::ParseError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("functions use different ambient groups: {0} vs {1}")]
    DifferentAmbientGroup(String, String),
    #[error("family assigns different subgroups to variable {0}")]
    InconsistentFamily(String),
    #[error("family covers no function for edge {0}")]
    IncompleteCover(String),
    #[error("variable {0} is not assigned a subgroup")]
    MissingVariable(String),
    #[error("subgroup for {var} is not a subgroup of the ambient group: {detail}")]
    BadAssignment { var: String, detail: String },
    #[error("function for edge {edge} malformed: {detail}")]
    MalformedFunction { edge: String, detail: String },
}

/// An ambient group with one subgroup per variable index.
#[derive(Clone, Debug)]
pub struct GroupCharacterization {
    group: Arc<FiniteGroup>,
    assignment: BTreeMap<String, Subgroup>,
}

impl GroupCharacterization {
    pub fn new(
        group: Arc<FiniteGroup>,
        assignment: BTreeMap<String, Subgroup>,
    ) -> Result<Self, CharError> {
        for (var, sub) in &assignment {
            if !sub.parent().same_table(&group) {
                return Err(CharError::BadAssignment {
                    var: var.clone(),
                    detail: "subgroup lives in a different group".into(),
                });
            }
        }
        Ok(GroupCharacterization { group, assignment })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn assignment(&self) -> &BTreeMap<String, Subgroup> {
        &self.assignment
    }

    pub fn subgroup(&self, var: &str) -> Result<&Subgroup, CharError> {
        self.assignment
            .get(var)
            .ok_or_else(|| CharError::MissingVariable(var.to_string()))
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.assignment.keys().map(|s| s.as_str())
    }

    /// Restriction to a subset of variables.
    pub fn restricted(&self, vars: &[String]) -> Result<GroupCharacterization, CharError> {
        let mut assignment = BTreeMap::new();
        for v in vars {
            assignment.insert(v.clone(), self.subgroup(v)?.clone());
        }
        Ok(GroupCharacterization {
            group: self.group.clone(),
            assignment,
        })
    }
}

/// For each group element, the canonical representative (minimum element) of
/// its left coset of `sub`.
fn rep_table(sub: &Subgroup) -> Vec<Elem> {
    sub.parent()
        .elements()
        .map(|g| sub.coset_representative(g))
        .collect()
}

/// Distribution of (gG_a : a in vars) for g uniform in G, with support
/// tuples labeled by canonical coset representatives; denominator |G|.
pub fn induced_joint_distribution(
    char: &GroupCharacterization,
    vars: &[String],
) -> Result<ExactDistribution, CharError> {
    let tables: Vec<Vec<Elem>> = vars
        .iter()
        .map(|v| char.subgroup(v).map(rep_table))
        .collect::<Result<_, _>>()?;
    let mut counter: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for g in char.group.elements() {
        let key: Vec<usize> = tables.iter().map(|t| t[g]).collect();
        *counter.entry(key).or_insert(0) += 1;
    }
    Ok(ExactDistribution::from_counts(
        counter,
        char.group.order() as u64,
    ))
}

/// H(X_vars) = log2(|G| / |intersection of the G_a|), in bits.
pub fn characterization_entropy(
    char: &GroupCharacterization,
    vars: &[String],
) -> Result<f64, CharError> {
    let subs: Vec<Subgroup> = vars
        .iter()
        .map(|v| char.subgroup(v).cloned())
        .collect::<Result<_, _>>()?;
    let meet = intersect_subgroups(&char.group, &subs);
    Ok(((char.group.order() as f64) / (meet.size() as f64)).log2())
}

/// Two routes to "X_inputs determines X_output": the subgroup inclusion test
/// and the determinism of the induced distribution. They must agree.
#[derive(Clone, Debug)]
pub struct ReprCheck {
    pub representable: bool,
    pub subgroup_test: bool,
    pub determinism_test: bool,
    /// Two group elements equal on every input coset but differing on the
    /// output coset, when not representable.
    pub witness: Option<(Elem, Elem)>,
}

pub fn function_representable(
    char: &GroupCharacterization,
    inputs: &[String],
    output: &str,
) -> Result<ReprCheck, CharError> {
    let in_subs: Vec<Subgroup> = inputs
        .iter()
        .map(|v| char.subgroup(v).cloned())
        .collect::<Result<_, _>>()?;
    let out_sub = char.subgroup(output)?;
    let meet = intersect_subgroups(&char.group, &in_subs);
    let subgroup_test = meet.elements().iter().all(|&e| out_sub.contains(e));

    let in_tables: Vec<Vec<Elem>> = in_subs.iter().map(rep_table).collect();
    let out_table = rep_table(out_sub);
    let mut seen: BTreeMap<Vec<Elem>, Elem> = BTreeMap::new();
    let mut witness = None;
    for g in char.group.elements() {
        let key: Vec<Elem> = in_tables.iter().map(|t| t[g]).collect();
        match seen.get(&key) {
            Some(&g0) if out_table[g0] != out_table[g] => {
                witness = Some((g0, g));
                break;
            }
            Some(_) => {}
            None => {
                seen.insert(key, g);
            }
        }
    }
    let determinism_test = witness.is_none();
    debug_assert_eq!(subgroup_test, determinism_test);
    Ok(ReprCheck {
        representable: subgroup_test,
        subgroup_test,
        determinism_test,
        witness,
    })
}

/// A group-characterizable function: inputs, output, and a characterization
/// covering all of them.
#[derive(Clone, Debug)]
pub struct CharacterizedFunction {
    pub inputs: Vec<String>,
    pub output: String,
    pub char: GroupCharacterization,
}

impl CharacterizedFunction {
    pub fn new(
        inputs: Vec<String>,
        output: String,
        char: GroupCharacterization,
    ) -> Result<Self, CharError> {
        for v in inputs.iter().chain(std::iter::once(&output)) {
            char.subgroup(v)?;
        }
        Ok(CharacterizedFunction {
            inputs,
            output,
            char,
        })
    }
}

/// Result of the family consistency check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyConsistency {
    pub consistent: bool,
    /// First variable assigned different subgroups by two functions.
    pub conflict: Option<String>,
}

/// True iff all functions share one ambient group and assign identical
/// subgroups to shared variables. A different ambient group is an error, a
/// conflicting subgroup is an inconsistency.
pub fn check_consistent_family(
    functions: &[CharacterizedFunction],
) -> Result<FamilyConsistency, CharError> {
    let Some(first) = functions.first() else {
        return Ok(FamilyConsistency {
            consistent: true,
            conflict: None,
        });
    };
    let g = first.char.group();
    let mut seen: BTreeMap<&str, &Subgroup> = BTreeMap::new();
    for f in functions {
        if !f.char.group().same_table(g) {
            return Err(CharError::DifferentAmbientGroup(
                g.label().to_string(),
                f.char.group().label().to_string(),
            ));
        }
        for (var, sub) in f.char.assignment() {
            match seen.get(var.as_str()) {
                Some(existing) if !existing.same_set(sub) => {
                    return Ok(FamilyConsistency {
                        consistent: false,
                        conflict: Some(var.clone()),
                    });
                }
                Some(_) => {}
                None => {
                    seen.insert(var, sub);
                }
            }
        }
    }
    Ok(FamilyConsistency {
        consistent: true,
        conflict: None,
    })
}

/// Whether a family characterizes local functions (inputs = In(u), or the
/// source for source edges) or global functions (inputs = all sources).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyForm {
    Local,
    Global,
}

/// Glues a consistent per-edge family into one characterization over all
/// sources and edges.
pub fn assemble_network_characterization(
    instance: &NetworkInstance,
    functions: &[CharacterizedFunction],
    form: FamilyForm,
) -> Result<GroupCharacterization, CharError> {
    let consistency = check_consistent_family(functions)?;
    if let Some(var) = consistency.conflict {
        return Err(CharError::InconsistentFamily(var));
    }
    let sources: Vec<String> = instance
        .source_labels()
        .iter()
        .map(|s| s.to_string())
        .collect();
    for f in functions {
        let edge = instance
            .edge(&f.output)
            .ok_or_else(|| CharError::MalformedFunction {
                edge: f.output.clone(),
                detail: "output is not an edge of the instance".into(),
            })?;
        let expected: Vec<String> = match form {
            FamilyForm::Global => sources.clone(),
            FamilyForm::Local => {
                if instance.is_source(edge.tail) {
                    vec![instance.node_label(edge.tail).to_string()]
                } else {
                    instance
                        .in_edge_ids(edge.tail)
                        .iter()
                        .map(|s| s.to_string())
                        .collect()
                }
            }
        };
        let mut got = f.inputs.clone();
        got.sort();
        if got != expected {
            return Err(CharError::MalformedFunction {
                edge: f.output.clone(),
                detail: format!("inputs {got:?}, expected {expected:?}"),
            });
        }
    }
    for e in instance.edges() {
        if !functions.iter().any(|f| f.output == e.id) {
            return Err(CharError::IncompleteCover(e.id.clone()));
        }
    }
    let group = functions[0].char.group().clone();
    let mut assignment: BTreeMap<String, Subgroup> = BTreeMap::new();
    for f in functions {
        for (var, sub) in f.char.assignment() {
            assignment.entry(var.clone()).or_insert_with(|| sub.clone());
        }
    }
    GroupCharacterization::new(group, assignment)
}

/// Which variable subsets `characterization_matches_code` probes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeDepth {
    /// Singletons, pairs, and the full variable set (the default; the
    /// full-set joint determines a quasi-uniform joint anyway).
    Standard,
    /// Every nonempty subset.
    Powerset,
}

/// Outcome of matching a characterization against a code.
#[derive(Clone, Debug)]
pub struct MatchReport {
    pub matches: bool,
    /// Probed subset and reason for the first mismatch.
    pub mismatch: Option<(Vec<String>, String)>,
    /// Per-variable bijection from coset representatives to code symbols.
    pub bijections: BTreeMap<String, BTreeMap<usize, usize>>,
}

/// Group-network-code matching: the induced joint distributions equal the
/// code's on every
/// probed subset, up to one per-variable bijection chosen greedily from the
/// sorted marginal supports and then verified.
pub fn characterization_matches_code(
    char: &GroupCharacterization,
    instance: &NetworkInstance,
    code: &NetworkCode,
    probe: ProbeDepth,
) -> Result<MatchReport, CharError> {
    let vars = instance.variable_ids();
    let mut bijections: BTreeMap<String, BTreeMap<usize, usize>> = BTreeMap::new();
    for v in &vars {
        let induced = induced_joint_distribution(char, std::slice::from_ref(v))?;
        let observed = crate::net::joint_distribution(instance, code, std::slice::from_ref(v))?;
        if induced.len() != observed.len() {
            return Ok(MatchReport {
                matches: false,
                mismatch: Some((
                    vec![v.clone()],
                    format!(
                        "marginal support sizes differ: {} cosets vs {} symbols",
                        induced.len(),
                        observed.len()
                    ),
                )),
                bijections,
            });
        }
        let map: BTreeMap<usize, usize> = induced
            .support()
            .iter()
            .map(|t| t[0])
            .zip(observed.support().iter().map(|t| t[0]))
            .collect();
        bijections.insert(v.clone(), map);
    }
    characterization_matches_code_with(char, instance, code, probe, bijections)
}

/// Matching with explicitly supplied per-variable bijections (coset
/// representative -> code symbol), for callers that know the relabeling
/// (the round trip derives it from the psi isomorphisms).
pub fn characterization_matches_code_with(
    char: &GroupCharacterization,
    instance: &NetworkInstance,
    code: &NetworkCode,
    probe: ProbeDepth,
    bijections: BTreeMap<String, BTreeMap<usize, usize>>,
) -> Result<MatchReport, CharError> {
    let vars = instance.variable_ids();
    for v in &vars {
        if !bijections.contains_key(v) {
            return Err(CharError::MissingVariable(v.clone()));
        }
    }
    let subsets = probed_subsets(&vars, probe);
    for subset in subsets {
        let induced = induced_joint_distribution(char, &subset)?;
        let maps: Vec<&BTreeMap<usize, usize>> = subset.iter().map(|v| &bijections[v]).collect();
        let relabeled = induced.relabel(&maps).reduced();
        let observed = crate::net::joint_distribution(instance, code, &subset)?.reduced();
        if relabeled != observed {
            return Ok(MatchReport {
                matches: false,
                mismatch: Some((subset, "joint distributions differ".into())),
                bijections,
            });
        }
    }
    Ok(MatchReport {
        matches: true,
        mismatch: None,
        bijections,
    })
}

fn probed_subsets(vars: &[String], probe: ProbeDepth) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = Vec::new();
    match probe {
        ProbeDepth::Standard => {
            for v in vars {
                out.push(vec![v.clone()]);
            }
            for i in 0..vars.len() {
                for j in i + 1..vars.len() {
                    out.push(vec![vars[i].clone(), vars[j].clone()]);
                }
            }
            if vars.len() > 2 {
                out.push(vars.to_vec());
            }
        }
        ProbeDepth::Powerset => {
            let n = vars.len();
            for mask in 1usize..(1 << n) {
                let subset: Vec<String> = (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| vars[i].clone())
                    .collect();
                out.push(subset);
            }
            out.sort_by_key(|s| (s.len(), s.clone()));
        }
    }
    out
}

/// The butterfly characterization over Z2xZ2 used across the tests: sources
/// and direct edges pinned to the coordinate subgroups, bottleneck edges to
/// the diagonal.
pub fn butterfly_characterization() -> (GroupCharacterization, Arc<FiniteGroup>) {
    let g = FiniteGroup::cyclic_product(&[2, 2])
        .expect("order 4")
        .into_arc();
    let fix_first = Subgroup::new(g.clone(), vec![0, 1]).unwrap(); // {(0,0),(0,1)}
    let fix_second = Subgroup::new(g.clone(), vec![0, 2]).unwrap(); // {(0,0),(1,0)}
    let diagonal = Subgroup::new(g.clone(), vec![0, 3]).unwrap(); // {(0,0),(1,1)}
    let mut assignment = BTreeMap::new();
    for v in ["s1", "e1", "e3", "e6"] {
        assignment.insert(v.to_string(), fix_first.clone());
    }
    for v in ["s2", "e2", "e4", "e7"] {
        assignment.insert(v.to_string(), fix_second.clone());
    }
    for v in ["e5", "e8", "e9"] {
        assignment.insert(v.to_string(), diagonal.clone());
    }
    (
        GroupCharacterization::new(g.clone(), assignment).unwrap(),
        g,
    )
}

/// Splits a full characterization into its per-edge family (local or global
/// form), the route Thms 2-3 start from.
pub fn per_edge_family(
    char: &GroupCharacterization,
    instance: &NetworkInstance,
    form: FamilyForm,
) -> Result<Vec<CharacterizedFunction>, CharError> {
    let sources: Vec<String> = instance
        .source_labels()
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut out = Vec::new();
    for e in instance.edges() {
        let inputs: Vec<String> = match form {
            FamilyForm::Global => sources.clone(),
            FamilyForm::Local => {
                if instance.is_source(e.tail) {
                    vec![instance.node_label(e.tail).to_string()]
                } else {
                    instance
                        .in_edge_ids(e.tail)
                        .iter()
                        .map(|s| s.to_string())
                        .collect()
                }
            }
        };
        let mut vars: BTreeSet<String> = inputs.iter().cloned().collect();
        vars.insert(e.id.clone());
        let vars: Vec<String> = vars.into_iter().collect();
        let restricted = char.restricted(&vars)?;
        out.push(CharacterizedFunction::new(
            inputs,
            e.id.clone(),
            restricted,
        )?);
    }
    Ok(out)
}
