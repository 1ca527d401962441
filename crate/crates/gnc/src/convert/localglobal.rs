//! Local CWL functions composed into global ones along the topological
//! order, and the reverse: restricting globals to the image subgroup at each
//! node and extending the restriction to a total local homomorphism.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::ConvertError;
use crate::cwl::{check_consistent_cwl_family, verify_cwl, CwlFunction};
use crate::group::{extend_homomorphism, FiniteGroup, PartialHom, Subgroup};
use crate::net::NetworkInstance;
use crate::radix;

fn family_groups(
    functions: &[CwlFunction],
) -> Result<BTreeMap<String, Arc<FiniteGroup>>, ConvertError> {
    let check = check_consistent_cwl_family(functions);
    if !check.consistent {
        let reason = match (&check.conflict, &check.failing) {
            (Some(var), _) => format!("variable {var} bound to different groups"),
            (_, Some((name, c))) => format!(
                "function {name} fails the CWL check (hom: {}, surjective: {})",
                c.is_hom, c.surjective
            ),
            _ => "inconsistent".to_string(),
        };
        return Err(ConvertError::InconsistentFamily(reason));
    }
    let mut groups = BTreeMap::new();
    for f in functions {
        for (var, g) in f.inputs().iter().chain(std::iter::once(f.output())) {
            groups.entry(var.clone()).or_insert_with(|| g.clone());
        }
    }
    Ok(groups)
}

/// Expected local input variables of an edge: the tail's sorted incoming
/// edge ids, or the source itself for source edges.
fn local_inputs(instance: &NetworkInstance, edge_id: &str) -> Vec<String> {
    let edge = instance.edge(edge_id).expect("edge exists");
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

fn find_function<'a>(
    functions: &'a [CwlFunction],
    edge_id: &str,
    expected_inputs: &[String],
) -> Result<&'a CwlFunction, ConvertError> {
    let f = functions
        .iter()
        .find(|f| f.name == edge_id)
        .ok_or_else(|| ConvertError::IncompleteCover(edge_id.to_string()))?;
    let got: Vec<&str> = f.inputs().iter().map(|(v, _)| v.as_str()).collect();
    if got
        != expected_inputs
            .iter()
            .map(|s| s.as_str())
            .collect::<Vec<_>>()
    {
        return Err(ConvertError::MalformedFamily {
            edge: edge_id.to_string(),
            detail: format!("inputs {got:?}, expected {expected_inputs:?}"),
        });
    }
    Ok(f)
}

/// Composes a consistent local CWL family into the global CWL family, edge
/// by edge in topological order. Source-adjacent locals pass through (up to
/// the projection onto their source); every composed global is re-verified
/// exhaustively.
pub fn local_cwl_to_global_cwl(
    instance: &NetworkInstance,
    functions: &[CwlFunction],
) -> Result<Vec<CwlFunction>, ConvertError> {
    let groups = family_groups(functions)?;
    let sources: Vec<String> = instance
        .source_labels()
        .iter()
        .map(|s| s.to_string())
        .collect();
    let source_groups: Vec<Arc<FiniteGroup>> = sources
        .iter()
        .map(|s| {
            groups
                .get(s)
                .cloned()
                .ok_or_else(|| ConvertError::MalformedFamily {
                    edge: s.clone(),
                    detail: "source has no group in the family".into(),
                })
        })
        .collect::<Result<_, _>>()?;
    let source_radices: Vec<usize> = source_groups.iter().map(|g| g.order()).collect();
    let domain = radix::domain_size(&source_radices);

    let mut global_tables: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut out = Vec::new();
    for ei in instance.edges_in_topological_order() {
        let edge = &instance.edges()[ei];
        let expected = local_inputs(instance, &edge.id);
        let local = find_function(functions, &edge.id, &expected)?;
        let table: Vec<usize> = if instance.is_source(edge.tail) {
            let s = instance.node_label(edge.tail);
            let pos = sources.iter().position(|l| l == s).unwrap();
            (0..domain)
                .map(|idx| local.table()[radix::unpack(idx, &source_radices)[pos]])
                .collect()
        } else {
            let in_radices = local.input_radices();
            (0..domain)
                .map(|idx| {
                    let in_tuple: Vec<usize> =
                        expected.iter().map(|id| global_tables[id][idx]).collect();
                    local.table()[radix::pack(&in_tuple, &in_radices)]
                })
                .collect()
        };
        global_tables.insert(edge.id.clone(), table.clone());
        let inputs: Vec<(String, Arc<FiniteGroup>)> = sources
            .iter()
            .cloned()
            .zip(source_groups.iter().cloned())
            .collect();
        let global = CwlFunction::new(
            &edge.id,
            inputs,
            (edge.id.clone(), local.output().1.clone()),
            table,
        )?;
        if !verify_cwl(&global).is_hom {
            return Err(ConvertError::ComposedNotCwl {
                edge: edge.id.clone(),
            });
        }
        out.push(global);
    }
    Ok(out)
}

/// Rebuilds local CWL functions from a consistent family of Abelian global
/// ones. At each edge the incoming-message tuples that actually occur form
/// the image subgroup; the global pins the local map there, and the
/// homomorphism extension makes it total.
pub fn global_cwl_to_local_cwl(
    instance: &NetworkInstance,
    functions: &[CwlFunction],
) -> Result<Vec<CwlFunction>, ConvertError> {
    let groups = family_groups(functions)?;
    for (var, g) in &groups {
        if !g.is_abelian() {
            let _ = var;
            return Err(ConvertError::NotAbelian(g.label().to_string()));
        }
    }
    let sources: Vec<String> = instance
        .source_labels()
        .iter()
        .map(|s| s.to_string())
        .collect();
    let source_radices: Vec<usize> = sources
        .iter()
        .map(|s| {
            groups
                .get(s)
                .map(|g| g.order())
                .ok_or_else(|| ConvertError::MalformedFamily {
                    edge: s.clone(),
                    detail: "source has no group in the family".into(),
                })
        })
        .collect::<Result<_, _>>()?;
    let domain = radix::domain_size(&source_radices);

    let mut locals = Vec::new();
    for edge in instance.edges() {
        let global = find_function(functions, &edge.id, &sources)?;
        let out_group = global.output().1.clone();
        let in_vars = local_inputs(instance, &edge.id);
        let in_groups: Vec<Arc<FiniteGroup>> = in_vars
            .iter()
            .map(|v| {
                groups
                    .get(v)
                    .cloned()
                    .ok_or_else(|| ConvertError::MalformedFamily {
                        edge: edge.id.clone(),
                        detail: format!("variable {v} has no group in the family"),
                    })
            })
            .collect::<Result<_, _>>()?;

        // the product group of the incoming carriers; its element indices
        // are exactly the packed in-tuples
        let mut product: Option<FiniteGroup> = None;
        for g in &in_groups {
            product = Some(match product {
                None => (**g).clone(),
                Some(acc) => FiniteGroup::direct_product(&acc, g)?,
            });
        }
        let product = product.expect("edges have at least one input").into_arc();

        // restrict: phi_bar(phi_In(x_S)) = phi_ge(x_S), checking
        // well-definedness over all source tuples
        let in_globals: Vec<&CwlFunction> = if instance.is_source(edge.tail) {
            Vec::new()
        } else {
            in_vars
                .iter()
                .map(|id| find_function(functions, id, &sources))
                .collect::<Result<_, _>>()?
        };
        let source_pos = instance
            .edge(&edge.id)
            .filter(|e| instance.is_source(e.tail))
            .map(|e| {
                sources
                    .iter()
                    .position(|l| l == instance.node_label(e.tail))
                    .unwrap()
            });
        let mut restriction: BTreeMap<usize, (usize, Vec<usize>)> = BTreeMap::new();
        for idx in 0..domain {
            let x_s = radix::unpack(idx, &source_radices);
            let in_elem = match source_pos {
                Some(pos) => x_s[pos],
                None => {
                    let tuple: Vec<usize> = in_globals.iter().map(|g| g.table()[idx]).collect();
                    radix::pack(&tuple, &global_inputs_radices(&in_groups))
                }
            };
            let value = global.table()[idx];
            match restriction.get(&in_elem) {
                Some((existing, first)) if *existing != value => {
                    return Err(ConvertError::IllDefinedRestriction {
                        edge: edge.id.clone(),
                        tuple_a: first.clone(),
                        tuple_b: x_s,
                    });
                }
                Some(_) => {}
                None => {
                    restriction.insert(in_elem, (value, x_s));
                }
            }
        }

        let image_elements: Vec<usize> = restriction.keys().copied().collect();
        let image = Subgroup::new(product.clone(), image_elements).map_err(|e| {
            ConvertError::MalformedFamily {
                edge: edge.id.clone(),
                detail: format!("incoming image is not a subgroup: {e}"),
            }
        })?;
        let partial_map: BTreeMap<usize, usize> =
            restriction.into_iter().map(|(k, (v, _))| (k, v)).collect();
        let partial = PartialHom::new(image, out_group.clone(), partial_map).map_err(|e| {
            ConvertError::MalformedFamily {
                edge: edge.id.clone(),
                detail: format!("restriction is not a homomorphism: {e}"),
            }
        })?;
        let total = extend_homomorphism(&partial).map_err(|e| match e {
            crate::group::GroupError::NoExtension { obstruction } => {
                ConvertError::ExtensionNotFound {
                    edge: edge.id.clone(),
                    obstruction,
                }
            }
            other => ConvertError::Group(other),
        })?;

        let inputs: Vec<(String, Arc<FiniteGroup>)> =
            in_vars.into_iter().zip(in_groups.iter().cloned()).collect();
        let local = CwlFunction::new(
            &edge.id,
            inputs,
            (edge.id.clone(), out_group.clone()),
            total.map().to_vec(),
        )?;
        locals.push(local);
    }

    // the recomposed globals must reproduce the input globals exactly
    let recomposed = local_cwl_to_global_cwl(instance, &locals)?;
    for edge in instance.edges() {
        let original = find_function(functions, &edge.id, &sources)?;
        let again = recomposed.iter().find(|f| f.name == edge.id).unwrap();
        if original.table() != again.table() {
            return Err(ConvertError::RecompositionMismatch {
                edge: edge.id.clone(),
            });
        }
    }
    Ok(locals)
}

fn global_inputs_radices(in_groups: &[Arc<FiniteGroup>]) -> Vec<usize> {
    in_groups.iter().map(|g| g.order()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn butterfly_locals_compose_to_xor_global() {
        let instance = corpus::butterfly_instance();
        let locals = corpus::butterfly_cwl_locals();
        let globals = local_cwl_to_global_cwl(&instance, &locals).unwrap();
        let bottleneck = globals.iter().find(|f| f.name == "e5").unwrap();
        assert_eq!(bottleneck.table(), &[0, 1, 1, 0]);
        for g in &globals {
            assert!(verify_cwl(g).is_cwl(), "global {} not cwl", g.name);
        }
    }

    #[test]
    fn chain_of_identities_composes_to_identity() {
        let instance = crate::net::NetworkInstance::new(
            vec!["a".into()],
            vec![
                ("e1".into(), "s".into(), "a".into(), 1.0),
                ("e2".into(), "a".into(), "t".into(), 1.0),
            ],
            vec!["s".into()],
            vec!["t".into()],
            vec![],
        )
        .unwrap();
        let z4 = FiniteGroup::cyclic(4).unwrap().into_arc();
        let id = |name: &str, input: &str| {
            CwlFunction::new(
                name,
                vec![(input.to_string(), z4.clone())],
                (name.to_string(), z4.clone()),
                vec![0, 1, 2, 3],
            )
            .unwrap()
        };
        let locals = vec![id("e1", "s"), id("e2", "e1")];
        let globals = local_cwl_to_global_cwl(&instance, &locals).unwrap();
        for g in &globals {
            assert_eq!(g.table(), &[0, 1, 2, 3]);
        }
    }

    #[test]
    fn s3_projection_family_composes_to_cwl_globals() {
        // non-Abelian family over S3: forwards by conjugation, projection at
        // the merge node
        let (instance, locals) = corpus::s3_cwl_family();
        let globals = local_cwl_to_global_cwl(&instance, &locals).unwrap();
        for g in &globals {
            let check = verify_cwl(g);
            assert!(check.is_hom, "global {} not a homomorphism", g.name);
            assert!(check.surjective);
            assert!(!check.abelian);
        }
    }

    #[test]
    fn butterfly_globals_restrict_back_to_locals() {
        let instance = corpus::butterfly_instance();
        let locals = corpus::butterfly_cwl_locals();
        let globals = local_cwl_to_global_cwl(&instance, &locals).unwrap();
        let recovered = global_cwl_to_local_cwl(&instance, &globals).unwrap();
        // the bottleneck local is xor again
        let bneck = recovered.iter().find(|f| f.name == "e5").unwrap();
        assert_eq!(bneck.table(), &[0, 1, 1, 0]);
        // forwarding edges come back as identity on the image (here: all of Z2)
        let fwd = recovered.iter().find(|f| f.name == "e8").unwrap();
        assert_eq!(fwd.table(), &[0, 1]);
    }

    #[test]
    fn diagonal_image_extends_via_complement() {
        // gadget: node u receives two copies of the same bit; the image in
        // Z2 x Z2 is the diagonal and the local map extends it
        let instance = crate::net::NetworkInstance::new(
            vec!["u".into()],
            vec![
                ("e1".into(), "s".into(), "u".into(), 1.0),
                ("e2".into(), "s".into(), "u".into(), 1.0),
                ("e3".into(), "u".into(), "t".into(), 1.0),
            ],
            vec!["s".into()],
            vec!["t".into()],
            vec![],
        )
        .unwrap();
        let z2 = FiniteGroup::cyclic(2).unwrap().into_arc();
        let mk = |name: &str, table: Vec<usize>| {
            CwlFunction::new(
                name,
                vec![("s".to_string(), z2.clone())],
                (name.to_string(), z2.clone()),
                table,
            )
            .unwrap()
        };
        let globals = vec![
            mk("e1", vec![0, 1]),
            mk("e2", vec![0, 1]),
            mk("e3", vec![0, 1]),
        ];
        let locals = global_cwl_to_local_cwl(&instance, &globals).unwrap();
        let e3 = locals.iter().find(|f| f.name == "e3").unwrap();
        // on the diagonal {(0,0),(1,1)} the map returns the bit; off the
        // diagonal the extension filled in homomorphically
        assert_eq!(e3.table()[0], 0);
        assert_eq!(e3.table()[3], 1);
        assert_eq!(e3.inputs().len(), 2);
        assert!(verify_cwl(e3).is_hom);
    }

    #[test]
    fn ill_defined_globals_rejected() {
        // u forwards nothing that distinguishes the sources, yet the edge
        // global depends on them: no local function can exist
        let instance = crate::net::NetworkInstance::new(
            vec!["u".into()],
            vec![
                ("e1".into(), "s".into(), "u".into(), 1.0),
                ("e2".into(), "u".into(), "t".into(), 1.0),
            ],
            vec!["s".into()],
            vec!["t".into()],
            vec![],
        )
        .unwrap();
        let z2 = FiniteGroup::cyclic(2).unwrap().into_arc();
        let constant = CwlFunction::new(
            "e1",
            vec![("s".to_string(), z2.clone())],
            ("e1".to_string(), FiniteGroup::cyclic(1).unwrap().into_arc()),
            vec![0, 0],
        )
        .unwrap();
        let passthrough = CwlFunction::new(
            "e2",
            vec![("s".to_string(), z2.clone())],
            ("e2".to_string(), z2.clone()),
            vec![0, 1],
        )
        .unwrap();
        let err = global_cwl_to_local_cwl(&instance, &[constant, passthrough]).unwrap_err();
        assert!(matches!(err, ConvertError::IllDefinedRestriction { .. }));
    }
}
