//! Conversions between Abelian group characterizations and CWL functions:
//! the quotient-group construction (characterization to CWL) and the
//! kernel/product construction with its isomorphisms (CWL back to a
//! characterization).

use std::collections::BTreeMap;
use std::sync::Arc;

use super::ConvertError;
use crate::charac::GroupCharacterization;
use crate::cwl::{verify_cwl, CwlFunction};
use crate::group::{
    intersect_subgroups, quotient_group, FiniteGroup, Homomorphism, Quotient, Subgroup,
};
use crate::radix;

/// Result of converting a characterized global function to CWL form: the
/// function over the quotient groups, plus the quotients themselves (their
/// coset lists fix the labeling between coset alphabets and indices).
#[derive(Debug)]
pub struct CharToCwl {
    pub function: CwlFunction,
    pub quotients: BTreeMap<String, Quotient>,
}

/// Builds the CWL form of an Abelian characterized global function: the
/// coordinate groups are G/G_i, the output group G/G_e, and the map sends a
/// coset tuple to the G_e-coset of the unique element in its intersection.
///
/// Preconditions checked: G Abelian; the source-independence equation
/// |G|/|G_S| = prod |G|/|G_i|; trivial source intersection.
pub fn abelian_char_to_cwl(
    char: &GroupCharacterization,
    sources: &[String],
    edge: &str,
) -> Result<CharToCwl, ConvertError> {
    let g = char.group();
    if !g.is_abelian() {
        return Err(ConvertError::NotAbelian(g.label().to_string()));
    }
    let subs: Vec<Subgroup> = sources
        .iter()
        .map(|s| char.subgroup(s).cloned())
        .collect::<Result<_, _>>()?;
    let meet = intersect_subgroups(g, &subs);
    let lhs = g.order() / meet.size();
    let rhs: usize = subs.iter().map(|s| g.order() / s.size()).product();
    if lhs != rhs {
        return Err(ConvertError::EquationOneViolated { lhs, rhs });
    }
    if meet.size() != 1 {
        return Err(ConvertError::NontrivialSourceIntersection(meet.size()));
    }

    let mut quotients = BTreeMap::new();
    for (var, sub) in sources.iter().zip(&subs) {
        quotients.insert(var.clone(), quotient_group(sub)?);
    }
    let edge_sub = char.subgroup(edge)?;
    quotients.insert(edge.to_string(), quotient_group(edge_sub)?);

    let radices: Vec<usize> = sources.iter().map(|s| quotients[s].group.order()).collect();
    let domain = radix::domain_size(&radices);
    let mut table: Vec<Option<usize>> = vec![None; domain];
    for x in g.elements() {
        let tuple: Vec<usize> = sources.iter().map(|s| quotients[s].project(x)).collect();
        table[radix::pack(&tuple, &radices)] = Some(quotients[edge].project(x));
    }
    let table: Vec<usize> = match table.into_iter().collect::<Option<_>>() {
        Some(t) => t,
        None => {
            // cannot happen once the counting equation holds; kept as a
            // runtime check because the equation is the counting form of it
            let missing = (0..domain).next().unwrap();
            return Err(ConvertError::EmptyCosetIntersection(radix::unpack(
                missing, &radices,
            )));
        }
    };

    let inputs: Vec<(String, Arc<FiniteGroup>)> = sources
        .iter()
        .map(|s| (s.clone(), quotients[s].group.clone()))
        .collect();
    let output = (edge.to_string(), quotients[edge].group.clone());
    let function = CwlFunction::new(edge, inputs, output, table)?;
    debug_assert!(verify_cwl(&function).is_cwl());
    Ok(CharToCwl {
        function,
        quotients,
    })
}

/// Result of characterizing a CWL global function: the ambient group is the
/// product of the input groups, the edge subgroup is the kernel, and the
/// psi maps are the verified isomorphisms H_i = G/G_i and G/G_e = H_e.
#[derive(Debug)]
pub struct CwlToChar {
    pub char: GroupCharacterization,
    pub psi_inputs: BTreeMap<String, Homomorphism>,
    pub psi_output: Homomorphism,
    pub quotients: BTreeMap<String, Quotient>,
}

/// The product/kernel construction: G = H_1 x ... x H_k, G_i pins the i-th
/// coordinate to its identity, G_e = ker(phi).
pub fn cwl_to_characterization(f: &CwlFunction) -> Result<CwlToChar, ConvertError> {
    let check = verify_cwl(f);
    if !check.is_hom {
        return Err(ConvertError::NotAHomomorphism {
            name: f.name.clone(),
            witness: check.witness,
        });
    }
    if !check.surjective {
        return Err(ConvertError::NotSurjective(f.name.clone()));
    }

    let mut ambient: Option<FiniteGroup> = None;
    for (_, h) in f.inputs() {
        ambient = Some(match ambient {
            None => (**h).clone(),
            Some(acc) => FiniteGroup::direct_product(&acc, h)?,
        });
    }
    let ambient = ambient
        .expect("cwl function has at least one input")
        .into_arc();
    // product indexing is the function's own domain indexing
    debug_assert_eq!(ambient.order(), f.table().len());

    let radices = f.input_radices();
    let out_group = &f.output().1;
    let identity_out = out_group.identity();

    let mut assignment: BTreeMap<String, Subgroup> = BTreeMap::new();
    for (i, (var, h)) in f.inputs().iter().enumerate() {
        let elements: Vec<usize> = ambient
            .elements()
            .filter(|&x| radix::unpack(x, &radices)[i] == h.identity())
            .collect();
        assignment.insert(var.clone(), Subgroup::new(ambient.clone(), elements)?);
    }
    let kernel: Vec<usize> = ambient
        .elements()
        .filter(|&x| f.table()[x] == identity_out)
        .collect();
    let edge_var = f.output().0.clone();
    assignment.insert(edge_var.clone(), Subgroup::new(ambient.clone(), kernel)?);

    let mut quotients = BTreeMap::new();
    for (var, sub) in &assignment {
        quotients.insert(var.clone(), quotient_group(sub)?);
    }

    let mut psi_inputs = BTreeMap::new();
    for (i, (var, h)) in f.inputs().iter().enumerate() {
        let q = &quotients[var];
        let map: Vec<usize> = h
            .elements()
            .map(|hv| {
                let mut digits: Vec<usize> = f.inputs().iter().map(|(_, g)| g.identity()).collect();
                digits[i] = hv;
                q.project(radix::pack(&digits, &radices))
            })
            .collect();
        let psi = Homomorphism::new(h.clone(), q.group.clone(), map)?;
        if !psi.is_bijective() {
            return Err(ConvertError::MalformedFamily {
                edge: f.name.clone(),
                detail: format!("psi for input {var} is not bijective"),
            });
        }
        psi_inputs.insert(var.clone(), psi);
    }
    let edge_quotient = &quotients[&edge_var];
    let map: Vec<usize> = edge_quotient
        .cosets
        .iter()
        .map(|c| f.table()[c.representative()])
        .collect();
    let psi_output = Homomorphism::new(edge_quotient.group.clone(), out_group.clone(), map)?;
    if !psi_output.is_bijective() {
        return Err(ConvertError::MalformedFamily {
            edge: f.name.clone(),
            detail: "psi for the output is not bijective".into(),
        });
    }

    let char = GroupCharacterization::new(ambient, assignment)?;
    Ok(CwlToChar {
        char,
        psi_inputs,
        psi_output,
        quotients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charac::{butterfly_characterization, induced_joint_distribution};
    use crate::dist::ExactDistribution;

    fn z2() -> Arc<FiniteGroup> {
        FiniteGroup::cyclic(2).unwrap().into_arc()
    }

    #[test]
    fn butterfly_bottleneck_becomes_xor() {
        let (char, _) = butterfly_characterization();
        let sources = vec!["s1".to_string(), "s2".to_string()];
        let out = abelian_char_to_cwl(&char, &sources, "e5").unwrap();
        let f = &out.function;
        assert!(verify_cwl(f).is_cwl());
        // under the quotient labeling the map is xor up to relabeling: it is
        // a surjective hom from Z2 x Z2 onto Z2 with kernel of size 2 and
        // f(a,b) determined by a+b
        assert_eq!(f.table().len(), 4);
        assert_eq!(f.table()[0], f.output().1.identity());
        assert_eq!(f.table()[1], f.table()[2]);
        assert_ne!(f.table()[0], f.table()[1]);
        assert_eq!(f.table()[3], f.table()[0]);
        // reproduces the characterized global function on every group element
        let g = char.group();
        for x in g.elements() {
            let tuple: Vec<usize> = ["s1", "s2"]
                .iter()
                .map(|s| out.quotients[*s].project(x))
                .collect();
            assert_eq!(f.eval(&tuple), out.quotients["e5"].project(x));
        }
    }

    #[test]
    fn single_source_mod2_reduction() {
        let g = FiniteGroup::cyclic(4).unwrap().into_arc();
        let mut assignment = BTreeMap::new();
        assignment.insert("s".to_string(), Subgroup::trivial(g.clone()));
        assignment.insert(
            "e".to_string(),
            Subgroup::new(g.clone(), vec![0, 2]).unwrap(),
        );
        let char = GroupCharacterization::new(g, assignment).unwrap();
        let out = abelian_char_to_cwl(&char, &["s".to_string()], "e").unwrap();
        // G/{0} = Z4 in, G/{0,2} = Z2 out; the map is reduction mod 2 under
        // coset labeling: cosets of {0,2} are {0,2} and {1,3}
        assert_eq!(out.function.input_radices(), vec![4]);
        assert_eq!(out.function.table(), &[0, 1, 0, 1]);
    }

    #[test]
    fn whole_group_edge_gives_constant_map() {
        let (char, g) = butterfly_characterization();
        let mut assignment = char.assignment().clone();
        assignment.insert("e5".to_string(), Subgroup::whole(g.clone()));
        let char = GroupCharacterization::new(g, assignment).unwrap();
        let out = abelian_char_to_cwl(&char, &["s1".to_string(), "s2".to_string()], "e5").unwrap();
        assert!(out.function.table().iter().all(|&v| v == 0));
        assert!(verify_cwl(&out.function).is_hom);
    }

    #[test]
    fn equation_one_violation_detected() {
        // G_1 = G_2 = {0,2} in Z4: |G|/|G_S| = 2 but the product is 4
        let g = FiniteGroup::cyclic(4).unwrap().into_arc();
        let sub = Subgroup::new(g.clone(), vec![0, 2]).unwrap();
        let mut assignment = BTreeMap::new();
        assignment.insert("s1".to_string(), sub.clone());
        assignment.insert("s2".to_string(), sub.clone());
        assignment.insert("e".to_string(), Subgroup::whole(g.clone()));
        let char = GroupCharacterization::new(g, assignment).unwrap();
        let err =
            abelian_char_to_cwl(&char, &["s1".to_string(), "s2".to_string()], "e").unwrap_err();
        assert_eq!(err, ConvertError::EquationOneViolated { lhs: 2, rhs: 4 });
    }

    #[test]
    fn nontrivial_intersection_detected() {
        let g = FiniteGroup::cyclic(4).unwrap().into_arc();
        let mut assignment = BTreeMap::new();
        assignment.insert(
            "s".to_string(),
            Subgroup::new(g.clone(), vec![0, 2]).unwrap(),
        );
        assignment.insert("e".to_string(), Subgroup::whole(g.clone()));
        let char = GroupCharacterization::new(g, assignment).unwrap();
        let err = abelian_char_to_cwl(&char, &["s".to_string()], "e").unwrap_err();
        assert_eq!(err, ConvertError::NontrivialSourceIntersection(2));
    }

    #[test]
    fn non_abelian_rejected() {
        let s3 = FiniteGroup::symmetric(3).unwrap().into_arc();
        let mut assignment = BTreeMap::new();
        assignment.insert("s".to_string(), Subgroup::trivial(s3.clone()));
        assignment.insert("e".to_string(), Subgroup::trivial(s3.clone()));
        let char = GroupCharacterization::new(s3, assignment).unwrap();
        let err = abelian_char_to_cwl(&char, &["s".to_string()], "e").unwrap_err();
        assert!(matches!(err, ConvertError::NotAbelian(_)));
    }

    fn xor_fn() -> CwlFunction {
        CwlFunction::new(
            "e",
            vec![("s1".into(), z2()), ("s2".into(), z2())],
            ("e".into(), z2()),
            vec![0, 1, 1, 0],
        )
        .unwrap()
    }

    #[test]
    fn xor_characterization_via_kernel() {
        let out = cwl_to_characterization(&xor_fn()).unwrap();
        let char = &out.char;
        assert_eq!(char.group().order(), 4);
        assert_eq!(char.subgroup("e").unwrap().elements(), &[0, 3]);
        assert_eq!(char.subgroup("s1").unwrap().elements(), &[0, 1]);
        assert_eq!(char.subgroup("s2").unwrap().elements(), &[0, 2]);
        for psi in out.psi_inputs.values() {
            assert!(psi.is_bijective());
        }
        assert!(out.psi_output.is_bijective());
    }

    #[test]
    fn identity_single_source() {
        let f = CwlFunction::new(
            "e",
            vec![("s".into(), z2())],
            ("e".into(), z2()),
            vec![0, 1],
        )
        .unwrap();
        let out = cwl_to_characterization(&f).unwrap();
        assert_eq!(out.char.group().order(), 2);
        assert_eq!(out.char.subgroup("s").unwrap().elements(), &[0]);
        assert_eq!(out.char.subgroup("e").unwrap().elements(), &[0]);
    }

    #[test]
    fn mod2_sum_of_two_z4_inputs() {
        let z4 = FiniteGroup::cyclic(4).unwrap().into_arc();
        let mut table = Vec::new();
        for a in 0..4usize {
            for b in 0..4usize {
                table.push((a + b) % 2);
            }
        }
        let f = CwlFunction::new(
            "e",
            vec![("s1".into(), z4.clone()), ("s2".into(), z4)],
            ("e".into(), z2()),
            table,
        )
        .unwrap();
        let out = cwl_to_characterization(&f).unwrap();
        assert_eq!(out.char.group().order(), 16);
        assert_eq!(out.char.subgroup("e").unwrap().size(), 8);
    }

    #[test]
    fn induced_distribution_equals_code_distribution_via_psi() {
        // kernel-construction soundness on xor: map induced coset labels to
        // code symbols
        // through the psi isomorphisms and compare distributions exactly
        let f = xor_fn();
        let out = cwl_to_characterization(&f).unwrap();
        let vars = vec!["e".to_string(), "s1".to_string(), "s2".to_string()];
        let induced = induced_joint_distribution(&out.char, &vars).unwrap();

        // bijections: coset representative -> code symbol
        let mut maps: Vec<BTreeMap<usize, usize>> = Vec::new();
        for v in &vars {
            let q = &out.quotients[v];
            let mut m = BTreeMap::new();
            if v == "e" {
                for (ci, c) in q.cosets.iter().enumerate() {
                    m.insert(c.representative(), out.psi_output.apply(ci));
                }
            } else {
                let psi = &out.psi_inputs[v];
                for h in psi.domain().elements() {
                    let coset = psi.apply(h);
                    m.insert(q.representative(coset), h);
                }
            }
            maps.push(m);
        }
        let mapped = induced.relabel(&maps.iter().collect::<Vec<_>>());

        // the code's joint: uniform over H1 x H2, e = xor
        let mut counter = BTreeMap::new();
        for a in 0..2usize {
            for b in 0..2usize {
                counter.insert(vec![a ^ b, a, b], 1u64);
            }
        }
        let code_dist = ExactDistribution::from_counts(counter, 4);
        assert_eq!(mapped, code_dist);
    }
}
