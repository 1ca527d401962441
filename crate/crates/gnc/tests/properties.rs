//! Property tests for the algebraic invariants: coset partitions, the first
//! isomorphism theorem, extension existence, and distribution laws.

use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use gnc::charac::induced_joint_distribution;
use gnc::corpus;
use gnc::group::{
    analyze_homomorphism, enumerate_homomorphisms_abelian, extend_homomorphism, FiniteGroup,
    GroupError, PartialHom, Subgroup,
};
use gnc::net::{derive_globals, joint_distribution, NetworkCode};

fn pool() -> Vec<Arc<FiniteGroup>> {
    vec![
        FiniteGroup::cyclic(2).unwrap().into_arc(),
        FiniteGroup::cyclic(4).unwrap().into_arc(),
        FiniteGroup::cyclic(6).unwrap().into_arc(),
        FiniteGroup::cyclic_product(&[2, 2]).unwrap().into_arc(),
        FiniteGroup::cyclic_product(&[2, 4]).unwrap().into_arc(),
        FiniteGroup::cyclic_product(&[3, 3]).unwrap().into_arc(),
        FiniteGroup::symmetric(3).unwrap().into_arc(),
        FiniteGroup::cyclic(8).unwrap().into_arc(),
    ]
}

fn abelian_pool() -> Vec<Arc<FiniteGroup>> {
    pool().into_iter().filter(|g| g.is_abelian()).collect()
}

proptest! {
    #[test]
    fn cosets_partition_the_group(gi in 0usize..8, raw_gens in proptest::collection::vec(0usize..48, 0..3)) {
        let g = pool()[gi].clone();
        let gens: Vec<usize> = raw_gens.iter().map(|&x| x % g.order()).collect();
        let sub = Subgroup::closure(&g, &gens).unwrap();
        let cosets = sub.left_cosets();
        prop_assert_eq!(cosets.len(), g.order() / sub.size());
        let mut seen = vec![false; g.order()];
        for c in &cosets {
            prop_assert_eq!(c.len(), sub.size());
            for &e in c.elements() {
                prop_assert!(!seen[e], "element {} in two cosets", e);
                seen[e] = true;
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn closure_is_a_verified_subgroup(gi in 0usize..8, raw_gens in proptest::collection::vec(0usize..48, 0..4)) {
        let g = pool()[gi].clone();
        let gens: Vec<usize> = raw_gens.iter().map(|&x| x % g.order()).collect();
        let sub = Subgroup::closure(&g, &gens).unwrap();
        // re-validating the element set must succeed
        prop_assert!(Subgroup::new(g.clone(), sub.elements().to_vec()).is_ok());
        prop_assert_eq!(g.order() % sub.size(), 0);
    }

    #[test]
    fn first_isomorphism_theorem_per_instance(
        gi in 0usize..8,
        hi in 0usize..8,
        seed in proptest::collection::vec(0usize..64, 48),
    ) {
        let g = pool()[gi].clone();
        let h = pool()[hi].clone();
        let map: Vec<usize> = (0..g.order()).map(|x| seed[x % seed.len()] % h.order()).collect();
        let analysis = analyze_homomorphism(&map, &g, &h);
        if analysis.is_hom {
            let kernel = analysis.kernel.unwrap();
            let image = analysis.image.unwrap();
            prop_assert!(kernel.normality_witness().is_none());
            prop_assert_eq!(image.size(), g.order() / kernel.size());
        } else {
            let (x, y) = analysis.violation.unwrap();
            prop_assert_ne!(map[g.op(x, y)], h.op(map[x], map[y]));
        }
    }

    #[test]
    fn extension_exists_iff_some_total_hom_restricts(
        gi in 0usize..6,
        raw_gens in proptest::collection::vec(0usize..48, 0..3),
        target_order in 2usize..=8,
        hom_pick in 0usize..64,
    ) {
        let g = abelian_pool()[gi % abelian_pool().len()].clone();
        let target = FiniteGroup::cyclic(target_order).unwrap().into_arc();
        let gens: Vec<usize> = raw_gens.iter().map(|&x| x % g.order()).collect();
        let sub = Subgroup::closure(&g, &gens).unwrap();
        let (sub_group, elem_map) = sub.as_group("S");
        let homs = enumerate_homomorphisms_abelian(&sub_group.into_arc(), &target);
        prop_assert!(!homs.is_empty());
        let chosen = &homs[hom_pick % homs.len()];
        let phi_map: BTreeMap<usize, usize> = elem_map.iter().copied().zip(chosen.iter().copied()).collect();
        let phi = PartialHom::new(sub.clone(), target.clone(), phi_map.clone()).unwrap();

        // oracle: enumerate every total homomorphism and look for one that
        // restricts to phi
        let totals = enumerate_homomorphisms_abelian(&g, &target);
        let restricting = totals
            .iter()
            .any(|m| phi_map.iter().all(|(&x, &y)| m[x] == y));

        match extend_homomorphism(&phi) {
            Ok(hom) => {
                prop_assert!(restricting, "extension found but the oracle sees none");
                prop_assert!(phi.agrees_with(&hom));
            }
            Err(GroupError::NoExtension { .. }) => {
                prop_assert!(!restricting, "oracle finds an extension the search missed");
            }
            Err(other) => prop_assert!(false, "unexpected error {}", other),
        }
    }

    #[test]
    fn induced_joints_are_quasi_uniform_and_entropy_is_monotone(
        entry_idx in 0usize..23,
        mask in 1usize..16,
    ) {
        let corpus = corpus::characterizations();
        let entry = &corpus[entry_idx % corpus.len()];
        let vars: Vec<String> = entry.char.variables().map(|s| s.to_string()).collect();
        let subset: Vec<String> = vars
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> (i % 4) & 1 == 1 || mask >> i & 1 == 1)
            .map(|(_, v)| v.clone())
            .collect();
        prop_assume!(!subset.is_empty());
        let dist = induced_joint_distribution(&entry.char, &subset).unwrap();
        prop_assert!(dist.is_quasi_uniform());
        // adding a variable never lowers entropy
        let h = dist.entropy_bits();
        let full = induced_joint_distribution(&entry.char, &vars).unwrap().entropy_bits();
        prop_assert!(h <= full + 1e-9);
    }

    #[test]
    fn butterfly_edges_stay_determined_under_random_bottlenecks(table in proptest::collection::vec(0usize..2, 4)) {
        let (instance, code) = corpus::butterfly();
        let mut locals: BTreeMap<String, Vec<usize>> = instance
            .edges()
            .iter()
            .map(|e| (e.id.clone(), code.local(&e.id).unwrap().to_vec()))
            .collect();
        locals.insert("e5".into(), table);
        let source_alphabets: BTreeMap<String, usize> =
            [("s1".to_string(), 2), ("s2".to_string(), 2)].into();
        // pin every edge alphabet to 2 so constant bottleneck tables keep
        // the downstream domains intact
        let edge_alphabets: BTreeMap<String, usize> =
            instance.edges().iter().map(|e| (e.id.clone(), 2)).collect();
        let code = NetworkCode::with_edge_alphabets(
            &instance,
            source_alphabets,
            edge_alphabets,
            locals,
            BTreeMap::new(),
        )
        .unwrap();
        let once = derive_globals(&instance, &code).unwrap();
        let twice = derive_globals(&instance, &once).unwrap();
        for e in instance.edges() {
            prop_assert_eq!(once.global(&e.id), twice.global(&e.id));
            if instance.is_source(e.tail) {
                continue;
            }
            // H(X_e | X_In(u)) = 0: the incoming tuple determines the edge
            let mut vars: Vec<String> =
                instance.in_edge_ids(e.tail).iter().map(|s| s.to_string()).collect();
            let h_in = joint_distribution(&instance, &once, &vars).unwrap().entropy_bits();
            vars.push(e.id.clone());
            let h_joint = joint_distribution(&instance, &once, &vars).unwrap().entropy_bits();
            prop_assert!((h_joint - h_in).abs() < 1e-9);
        }
    }
}
