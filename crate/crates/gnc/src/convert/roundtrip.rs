//! The full Abelian round trip: characterization -> per-edge CWL globals ->
//! CWL locals -> recomposed globals -> assembled characterization, with
//! distribution matching in both directions and a decodability check.

use std::collections::BTreeMap;

use super::group_cwl::{abelian_char_to_cwl, cwl_to_characterization, CwlToChar};
use super::localglobal::{global_cwl_to_local_cwl, local_cwl_to_global_cwl};
use super::ConvertError;
use crate::charac::{
    assemble_network_characterization, characterization_matches_code, CharacterizedFunction,
    FamilyForm, GroupCharacterization, MatchReport, ProbeDepth,
};
use crate::cwl::CwlFunction;
use crate::dist::ExactDistribution;
use crate::net::{derive_globals, synthesize_decoders, NetError, NetworkCode, NetworkInstance};
use crate::radix;

/// Everything the round trip produced, for reporting.
#[derive(Debug)]
pub struct RoundTrip {
    pub global_cwl: Vec<CwlFunction>,
    pub local_cwl: Vec<CwlFunction>,
    pub recomposed: Vec<CwlFunction>,
    pub assembled: GroupCharacterization,
    /// The table code realized by the recovered locals, globals derived.
    pub code: NetworkCode,
    /// Input characterization vs the realized code.
    pub match_input: MatchReport,
    /// Assembled characterization vs the realized code.
    pub match_assembled: MatchReport,
    /// Per-edge kernel-construction soundness: induced joint mapped through
    /// psi equals the
    /// code's joint exactly.
    pub psi_exact: bool,
    /// Decoder synthesis outcome for the realized code.
    pub decode: Result<(), NetError>,
}

impl RoundTrip {
    pub fn passed(&self) -> bool {
        self.match_input.matches
            && self.match_assembled.matches
            && self.psi_exact
            && self.decode.is_ok()
    }
}

/// Realizes a local CWL family as a table code; alphabets are the carrier
/// group orders.
pub(crate) fn code_from_local_cwl(
    instance: &NetworkInstance,
    locals: &[CwlFunction],
) -> Result<NetworkCode, ConvertError> {
    let mut source_alphabets: BTreeMap<String, usize> = BTreeMap::new();
    let mut edge_alphabets: BTreeMap<String, usize> = BTreeMap::new();
    let mut tables: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for f in locals {
        edge_alphabets.insert(f.name.clone(), f.output().1.order());
        tables.insert(f.name.clone(), f.table().to_vec());
        for (var, g) in f.inputs() {
            if instance.edge(var).is_none() {
                source_alphabets.insert(var.clone(), g.order());
            }
        }
    }
    Ok(NetworkCode::with_edge_alphabets(
        instance,
        source_alphabets,
        edge_alphabets,
        tables,
        BTreeMap::new(),
    )?)
}

/// Exact kernel-construction soundness: the joint distribution induced by
/// the constructed
/// characterization, relabeled through the psi isomorphisms, equals the
/// code's joint over (inputs, output).
pub fn thm5_joint_matches(f: &CwlFunction, out: &CwlToChar) -> Result<bool, ConvertError> {
    let mut vars: Vec<String> = f.inputs().iter().map(|(v, _)| v.clone()).collect();
    vars.push(f.output().0.clone());
    let induced = crate::charac::induced_joint_distribution(&out.char, &vars)?;

    let mut maps: Vec<BTreeMap<usize, usize>> = Vec::new();
    for (var, _) in f.inputs() {
        let q = &out.quotients[var];
        let psi = &out.psi_inputs[var];
        let mut m = BTreeMap::new();
        for h in psi.domain().elements() {
            m.insert(q.representative(psi.apply(h)), h);
        }
        maps.push(m);
    }
    {
        let q = &out.quotients[&f.output().0];
        let mut m = BTreeMap::new();
        for (ci, c) in q.cosets.iter().enumerate() {
            m.insert(c.representative(), out.psi_output.apply(ci));
        }
        maps.push(m);
    }
    let mapped = induced.relabel(&maps.iter().collect::<Vec<_>>());

    let radices = f.input_radices();
    let mut counter: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for idx in 0..radix::domain_size(&radices) {
        let mut key = radix::unpack(idx, &radices);
        key.push(f.table()[idx]);
        *counter.entry(key).or_insert(0) += 1;
    }
    let code_dist = ExactDistribution::from_counts(counter, radix::domain_size(&radices) as u64);
    Ok(mapped == code_dist)
}

/// Runs the round trip on an Abelian characterization of a full code over
/// the instance's sources and edges. Per-stage errors carry a stage tag.
pub fn abelian_roundtrip(
    instance: &NetworkInstance,
    char: &GroupCharacterization,
) -> Result<RoundTrip, ConvertError> {
    let sources: Vec<String> = instance
        .source_labels()
        .iter()
        .map(|s| s.to_string())
        .collect();
    for v in instance.variable_ids() {
        char.subgroup(&v)
            .map_err(|e| ConvertError::from(e).at_stage("thm3-family"))?;
    }

    // per edge: characterized globals become CWL functions over the
    // quotient groups
    let mut global_cwl = Vec::new();
    for e in instance.edges() {
        let converted =
            abelian_char_to_cwl(char, &sources, &e.id).map_err(|err| err.at_stage("thm4"))?;
        global_cwl.push(converted.function);
    }

    // restrict each global to the incoming image and extend to a local
    let local_cwl =
        global_cwl_to_local_cwl(instance, &global_cwl).map_err(|err| err.at_stage("thm7"))?;

    // recompose (also re-checked inside the local conversion)
    let recomposed =
        local_cwl_to_global_cwl(instance, &local_cwl).map_err(|err| err.at_stage("thm6"))?;

    // characterize each recomposed global, then assemble. The psi
    // isomorphisms also give the exact per-variable relabeling between the
    // assembled characterization's cosets and the code's symbols.
    let mut family = Vec::new();
    let mut psi_exact = true;
    let mut assembled_bijections: BTreeMap<String, BTreeMap<usize, usize>> = BTreeMap::new();
    for f in &recomposed {
        let out = cwl_to_characterization(f).map_err(|err| err.at_stage("thm5"))?;
        psi_exact &= thm5_joint_matches(f, &out).map_err(|err| err.at_stage("thm5"))?;
        for (var, psi) in &out.psi_inputs {
            assembled_bijections.entry(var.clone()).or_insert_with(|| {
                let q = &out.quotients[var];
                psi.domain()
                    .elements()
                    .map(|h| (q.representative(psi.apply(h)), h))
                    .collect()
            });
        }
        let q = &out.quotients[&f.name];
        assembled_bijections.insert(
            f.name.clone(),
            q.cosets
                .iter()
                .enumerate()
                .map(|(ci, c)| (c.representative(), out.psi_output.apply(ci)))
                .collect(),
        );
        family.push(
            CharacterizedFunction::new(sources.clone(), f.name.clone(), out.char.clone())
                .map_err(|e| ConvertError::from(e).at_stage("thm5"))?,
        );
    }
    let assembled = assemble_network_characterization(instance, &family, FamilyForm::Global)
        .map_err(|e| ConvertError::from(e).at_stage("thm5"))?;

    // realize the locals as a table code
    let code = code_from_local_cwl(instance, &local_cwl).map_err(|err| err.at_stage("realize"))?;
    let code =
        derive_globals(instance, &code).map_err(|e| ConvertError::from(e).at_stage("realize"))?;

    let match_input = characterization_matches_code(char, instance, &code, ProbeDepth::Standard)
        .map_err(|e| ConvertError::from(e).at_stage("match"))?;
    let match_assembled = crate::charac::characterization_matches_code_with(
        &assembled,
        instance,
        &code,
        ProbeDepth::Standard,
        assembled_bijections,
    )
    .map_err(|e| ConvertError::from(e).at_stage("match"))?;
    let decode = synthesize_decoders(instance, &code).map(|_| ());

    Ok(RoundTrip {
        global_cwl,
        local_cwl,
        recomposed,
        assembled,
        code,
        match_input,
        match_assembled,
        psi_exact,
        decode,
    })
}
