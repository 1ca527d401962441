//! Built-in instances used by the demo, the tests, and the acceptance
//! suite: the butterfly network and its codes, a characterization corpus at
//! desk scale, linear codes, and CWL families.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::charac::GroupCharacterization;
use crate::convert::{GfMatrix, LinearCode};
use crate::cwl::CwlFunction;
use crate::group::{Elem, FiniteGroup, Subgroup};
use crate::net::{NetworkCode, NetworkInstance};

fn identity2() -> Vec<usize> {
    vec![0, 1]
}

/// The two-source butterfly: sources s1, s2; relays a, b, c, d; terminals
/// t1, t2, both demanding both sources. Direct edges cross (a feeds t2, b
/// feeds t1); c->d is the bottleneck, coded with XOR.
pub fn butterfly() -> (NetworkInstance, NetworkCode) {
    let instance = butterfly_instance();
    let mut locals: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for id in ["e1", "e2", "e3", "e4", "e6", "e7", "e8", "e9"] {
        locals.insert(id.into(), identity2());
    }
    locals.insert("e5".into(), vec![0, 1, 1, 0]); // xor of (e3, e4)
    let decoders: BTreeMap<String, Vec<Vec<usize>>> = [
        // t1 sees (x2, x1^x2) on (e7, e8): s1 = xor, s2 = direct
        (
            "t1".to_string(),
            vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]],
        ),
        // t2 sees (x1, x1^x2) on (e6, e9): s1 = direct, s2 = xor
        (
            "t2".to_string(),
            vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 0]],
        ),
    ]
    .into();
    let code = NetworkCode::new(&instance, source_bits(), locals, decoders)
        .expect("butterfly code is valid");
    (instance, code)
}

/// The butterfly with the bottleneck forwarding x1 instead of coding.
/// Terminal t1 can still decode (it sees x2 and x1); t2 sees x1 twice and
/// cannot recover x2.
pub fn butterfly_forwarding_x1() -> (NetworkInstance, NetworkCode) {
    let instance = butterfly_instance();
    let mut locals: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for id in ["e1", "e2", "e3", "e4", "e6", "e7", "e8", "e9"] {
        locals.insert(id.into(), identity2());
    }
    locals.insert("e5".into(), vec![0, 0, 1, 1]); // first input = x1
    let decoders: BTreeMap<String, Vec<Vec<usize>>> = [
        // t1 sees (x2, x1): decode (s1, s2) = (second, first)
        (
            "t1".to_string(),
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]],
        ),
        // t2 sees (x1, x1): the best it can do
        (
            "t2".to_string(),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
        ),
    ]
    .into();
    let code =
        NetworkCode::new(&instance, source_bits(), locals, decoders).expect("tables are total");
    (instance, code)
}

pub fn butterfly_instance() -> NetworkInstance {
    NetworkInstance::new(
        ["a", "b", "c", "d", "t1", "t2"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        vec![
            ("e1".into(), "s1".into(), "a".into(), 1.0),
            ("e2".into(), "s2".into(), "b".into(), 1.0),
            ("e3".into(), "a".into(), "c".into(), 1.0),
            ("e4".into(), "b".into(), "c".into(), 1.0),
            ("e5".into(), "c".into(), "d".into(), 1.0),
            ("e6".into(), "a".into(), "t2".into(), 1.0),
            ("e7".into(), "b".into(), "t1".into(), 1.0),
            ("e8".into(), "d".into(), "t1".into(), 1.0),
            ("e9".into(), "d".into(), "t2".into(), 1.0),
        ],
        vec!["s1".into(), "s2".into()],
        vec!["t1".into(), "t2".into()],
        vec![
            ("t1".into(), vec!["s1".into(), "s2".into()]),
            ("t2".into(), vec!["s1".into(), "s2".into()]),
        ],
    )
    .expect("butterfly instance is valid")
}

fn source_bits() -> BTreeMap<String, usize> {
    [("s1".to_string(), 2), ("s2".to_string(), 2)].into()
}

fn z2() -> Arc<FiniteGroup> {
    FiniteGroup::cyclic(2).expect("small order").into_arc()
}

/// The butterfly's local CWL family over Z2: identities everywhere, xor at
/// the bottleneck.
pub fn butterfly_cwl_locals() -> Vec<CwlFunction> {
    let g = z2();
    let id = |name: &str, input: &str| {
        CwlFunction::new(
            name,
            vec![(input.to_string(), g.clone())],
            (name.to_string(), g.clone()),
            vec![0, 1],
        )
        .expect("identity table")
    };
    vec![
        id("e1", "s1"),
        id("e2", "s2"),
        id("e3", "e1"),
        id("e4", "e2"),
        CwlFunction::new(
            "e5",
            vec![("e3".to_string(), g.clone()), ("e4".to_string(), g.clone())],
            ("e5".to_string(), g.clone()),
            vec![0, 1, 1, 0],
        )
        .expect("xor table"),
        id("e6", "e1"),
        id("e7", "e2"),
        id("e8", "e5"),
        id("e9", "e5"),
    ]
}

/// Lexicographic rank of a permutation in one-line notation.
fn sym_elem(perm: &[usize]) -> Elem {
    let n = perm.len();
    let mut rank = 0;
    let mut factorial = 1;
    for k in 2..=n {
        factorial *= k;
    }
    let mut remaining: Vec<usize> = (0..n).collect();
    for (i, &p) in perm.iter().enumerate() {
        factorial /= n - i;
        let pos = remaining.iter().position(|&r| r == p).unwrap();
        rank += pos * factorial;
        remaining.remove(pos);
    }
    rank
}

/// A two-source merge network, all variables S3: locals forward through
/// conjugation and project at the merge node. Non-Abelian but CWL.
pub fn s3_cwl_family() -> (NetworkInstance, Vec<CwlFunction>) {
    let instance = NetworkInstance::new(
        vec!["u".into()],
        vec![
            ("f1".into(), "sA".into(), "u".into(), 3.0),
            ("f2".into(), "sB".into(), "u".into(), 3.0),
            ("f3".into(), "u".into(), "t".into(), 3.0),
        ],
        vec!["sA".into(), "sB".into()],
        vec!["t".into()],
        vec![("t".into(), vec!["sA".into()])],
    )
    .expect("merge instance is valid");
    let s3 = FiniteGroup::symmetric(3).expect("S3").into_arc();
    let conjugate = |h: Elem| -> Vec<usize> {
        s3.elements()
            .map(|x| s3.op(s3.op(h, x), s3.inv(h)))
            .collect()
    };
    let swap01 = sym_elem(&[1, 0, 2]);
    let cycle = sym_elem(&[1, 2, 0]);
    let f1 = CwlFunction::new(
        "f1",
        vec![("sA".to_string(), s3.clone())],
        ("f1".to_string(), s3.clone()),
        (0..6).collect(),
    )
    .expect("identity");
    let f2 = CwlFunction::new(
        "f2",
        vec![("sB".to_string(), s3.clone())],
        ("f2".to_string(), s3.clone()),
        conjugate(swap01),
    )
    .expect("conjugation is an automorphism");
    // merge node: project onto the first input, then conjugate
    let conj_cycle = conjugate(cycle);
    let mut table = Vec::with_capacity(36);
    for &image in &conj_cycle {
        table.extend(std::iter::repeat_n(image, 6));
    }
    let f3 = CwlFunction::new(
        "f3",
        vec![
            ("f1".to_string(), s3.clone()),
            ("f2".to_string(), s3.clone()),
        ],
        ("f3".to_string(), s3.clone()),
        table,
    )
    .expect("projection composed with an automorphism");
    (instance, vec![f1, f2, f3])
}

/// A corpus characterization with a designated source/edge split, so the
/// same entry feeds the entropy checks and the conversion theorems.
pub struct CorpusChar {
    pub name: &'static str,
    pub char: GroupCharacterization,
    pub sources: Vec<String>,
    pub edge: String,
}

fn sub(g: &Arc<FiniteGroup>, gens: &[Elem]) -> Subgroup {
    Subgroup::closure(g, gens).expect("generators in range")
}

fn entry(
    name: &'static str,
    g: Arc<FiniteGroup>,
    vars: Vec<(&str, Subgroup)>,
    sources: &[&str],
    edge: &str,
) -> CorpusChar {
    let assignment: BTreeMap<String, Subgroup> =
        vars.into_iter().map(|(v, s)| (v.to_string(), s)).collect();
    let char = GroupCharacterization::new(g, assignment).expect("corpus subgroups are valid");
    CorpusChar {
        name,
        char,
        sources: sources.iter().map(|s| s.to_string()).collect(),
        edge: edge.to_string(),
    }
}

/// Characterizations over groups of order <= 64: cyclic, products,
/// symmetric, and mixed. Entries whose sources satisfy the independence
/// equation with trivial intersection convert cleanly; the others exercise
/// the error paths of the conversions.
pub fn characterizations() -> Vec<CorpusChar> {
    let mut out = Vec::new();

    let v4 = FiniteGroup::cyclic_product(&[2, 2]).unwrap().into_arc();
    out.push(entry(
        "v4-xor",
        v4.clone(),
        vec![
            ("s1", sub(&v4, &[1])),
            ("s2", sub(&v4, &[2])),
            ("e", sub(&v4, &[3])),
        ],
        &["s1", "s2"],
        "e",
    ));

    let z4 = FiniteGroup::cyclic(4).unwrap().into_arc();
    out.push(entry(
        "z4-mod2",
        z4.clone(),
        vec![
            ("s1", Subgroup::trivial(z4.clone())),
            ("e", sub(&z4, &[2])),
            ("w", Subgroup::whole(z4.clone())),
        ],
        &["s1"],
        "e",
    ));

    let z6 = FiniteGroup::cyclic(6).unwrap().into_arc();
    out.push(entry(
        "z6-crt",
        z6.clone(),
        vec![
            ("s1", sub(&z6, &[2])),
            ("s2", sub(&z6, &[3])),
            ("e", Subgroup::trivial(z6.clone())),
        ],
        &["s1", "s2"],
        "e",
    ));

    let z8 = FiniteGroup::cyclic(8).unwrap().into_arc();
    out.push(entry(
        "z8-chain",
        z8.clone(),
        vec![
            ("s1", Subgroup::trivial(z8.clone())),
            ("e", sub(&z8, &[4])),
            ("f", sub(&z8, &[2])),
        ],
        &["s1"],
        "e",
    ));

    let z2z4 = FiniteGroup::cyclic_product(&[2, 4]).unwrap().into_arc();
    out.push(entry(
        "z2z4-split",
        z2z4.clone(),
        vec![
            ("s1", sub(&z2z4, &[4])),
            ("s2", sub(&z2z4, &[1])),
            ("e", sub(&z2z4, &[6])),
        ],
        &["s1", "s2"],
        "e",
    ));

    let z3z3 = FiniteGroup::cyclic_product(&[3, 3]).unwrap().into_arc();
    out.push(entry(
        "z3z3-sum",
        z3z3.clone(),
        vec![
            ("s1", sub(&z3z3, &[1])),
            ("s2", sub(&z3z3, &[3])),
            ("e", sub(&z3z3, &[4])),
        ],
        &["s1", "s2"],
        "e",
    ));

    let z12 = FiniteGroup::cyclic(12).unwrap().into_arc();
    out.push(entry(
        "z12-lattice",
        z12.clone(),
        vec![
            ("s1", sub(&z12, &[4])),
            ("s2", sub(&z12, &[3])),
            ("e", Subgroup::trivial(z12.clone())),
        ],
        &["s1", "s2"],
        "e",
    ));

    let z2cube = FiniteGroup::cyclic_product(&[2, 2, 2]).unwrap().into_arc();
    out.push(entry(
        "z2cube-parity",
        z2cube.clone(),
        vec![
            ("s1", sub(&z2cube, &[2, 1])), // fixes first coordinate
            ("s2", sub(&z2cube, &[4, 1])), // fixes second
            ("s3", sub(&z2cube, &[4, 2])), // fixes third
            ("e", sub(&z2cube, &[3, 5])),  // parity kernel
        ],
        &["s1", "s2", "s3"],
        "e",
    ));

    let s3 = FiniteGroup::symmetric(3).unwrap().into_arc();
    out.push(entry(
        "s3-cosets",
        s3.clone(),
        vec![
            ("s1", sub(&s3, &[sym_elem(&[1, 0, 2])])),
            ("s2", sub(&s3, &[sym_elem(&[1, 2, 0])])),
            ("e", Subgroup::trivial(s3.clone())),
        ],
        &["s1", "s2"],
        "e",
    ));

    let s3z2 = FiniteGroup::direct_product(
        &FiniteGroup::symmetric(3).unwrap(),
        &FiniteGroup::cyclic(2).unwrap(),
    )
    .unwrap()
    .into_arc();
    out.push(entry(
        "s3z2-mixed",
        s3z2.clone(),
        vec![
            ("s1", sub(&s3z2, &[2 * 2])), // a transposition paired with 0
            ("s2", sub(&s3z2, &[1])),     // the Z2 factor
            ("e", Subgroup::trivial(s3z2.clone())),
        ],
        &["s1", "s2"],
        "e",
    ));

    let z5 = FiniteGroup::cyclic(5).unwrap().into_arc();
    out.push(entry(
        "z5-prime",
        z5.clone(),
        vec![
            ("s1", Subgroup::trivial(z5.clone())),
            ("e", Subgroup::whole(z5.clone())),
        ],
        &["s1"],
        "e",
    ));

    let z16 = FiniteGroup::cyclic(16).unwrap().into_arc();
    out.push(entry(
        "z16-tower",
        z16.clone(),
        vec![
            ("s1", Subgroup::trivial(z16.clone())),
            ("e", sub(&z16, &[8])),
            ("f", sub(&z16, &[4])),
        ],
        &["s1"],
        "e",
    ));

    let z4z4 = FiniteGroup::cyclic_product(&[4, 4]).unwrap().into_arc();
    out.push(entry(
        "z4z4-grid",
        z4z4.clone(),
        vec![
            ("s1", sub(&z4z4, &[1])),
            ("s2", sub(&z4z4, &[4])),
            ("e", sub(&z4z4, &[5])),
        ],
        &["s1", "s2"],
        "e",
    ));

    let z2z8 = FiniteGroup::cyclic_product(&[2, 8]).unwrap().into_arc();
    out.push(entry(
        "z2z8-uneven",
        z2z8.clone(),
        vec![
            ("s1", sub(&z2z8, &[1])),
            ("s2", sub(&z2z8, &[8])),
            ("e", sub(&z2z8, &[9])),
        ],
        &["s1", "s2"],
        "e",
    ));

    let z6z6 = FiniteGroup::cyclic_product(&[6, 6]).unwrap().into_arc();
    out.push(entry(
        "z6z6-large",
        z6z6.clone(),
        vec![
            ("s1", sub(&z6z6, &[1])),
            ("s2", sub(&z6z6, &[6])),
            ("e", sub(&z6z6, &[7])),
        ],
        &["s1", "s2"],
        "e",
    ));

    let z2four = FiniteGroup::cyclic_product(&[2, 2, 2, 2])
        .unwrap()
        .into_arc();
    out.push(entry(
        "z2four-pairs",
        z2four.clone(),
        vec![
            ("s1", sub(&z2four, &[2, 1])), // fixes coordinates 1,2
            ("s2", sub(&z2four, &[8, 4])), // fixes coordinates 3,4
            ("e", sub(&z2four, &[10, 5])), // componentwise xor kernel
        ],
        &["s1", "s2"],
        "e",
    ));

    let s4 = FiniteGroup::symmetric(4).unwrap().into_arc();
    out.push(entry(
        "s4-klein",
        s4.clone(),
        vec![
            (
                "s1",
                sub(&s4, &[sym_elem(&[1, 0, 3, 2]), sym_elem(&[2, 3, 0, 1])]),
            ),
            ("s2", sub(&s4, &[sym_elem(&[1, 2, 3, 0])])),
            ("e", Subgroup::trivial(s4.clone())),
        ],
        &["s1", "s2"],
        "e",
    ));

    let z64 = FiniteGroup::cyclic(64).unwrap().into_arc();
    out.push(entry(
        "z64-top",
        z64.clone(),
        vec![
            ("s1", Subgroup::trivial(z64.clone())),
            ("e", sub(&z64, &[32])),
            ("f", sub(&z64, &[16])),
        ],
        &["s1"],
        "e",
    ));

    let z223 = FiniteGroup::cyclic_product(&[2, 2, 3]).unwrap().into_arc();
    out.push(entry(
        "z223-mixed",
        z223.clone(),
        vec![
            ("s1", sub(&z223, &[6, 1])),
            ("s2", sub(&z223, &[3])),
            ("e", sub(&z223, &[1])),
        ],
        &["s1", "s2"],
        "e",
    ));

    let z3z9 = FiniteGroup::cyclic_product(&[3, 9]).unwrap().into_arc();
    out.push(entry(
        "z3z9-power",
        z3z9.clone(),
        vec![
            ("s1", sub(&z3z9, &[1])),
            ("s2", sub(&z3z9, &[9])),
            ("e", sub(&z3z9, &[10])),
        ],
        &["s1", "s2"],
        "e",
    ));

    let z7 = FiniteGroup::cyclic(7).unwrap().into_arc();
    out.push(entry(
        "z7-prime",
        z7.clone(),
        vec![
            ("s1", Subgroup::trivial(z7.clone())),
            ("e", Subgroup::trivial(z7.clone())),
        ],
        &["s1"],
        "e",
    ));

    let z2z32 = FiniteGroup::cyclic_product(&[2, 32]).unwrap().into_arc();
    out.push(entry(
        "z2z32-wide",
        z2z32.clone(),
        vec![
            ("s1", sub(&z2z32, &[1])),
            ("s2", sub(&z2z32, &[32])),
            ("e", sub(&z2z32, &[33])),
        ],
        &["s1", "s2"],
        "e",
    ));

    let s3s3 = FiniteGroup::direct_product(
        &FiniteGroup::symmetric(3).unwrap(),
        &FiniteGroup::symmetric(3).unwrap(),
    )
    .unwrap()
    .into_arc();
    out.push(entry(
        "s3s3-product",
        s3s3.clone(),
        vec![
            ("s1", sub(&s3s3, &[sym_elem(&[1, 0, 2]) * 6])),
            ("s2", sub(&s3s3, &[sym_elem(&[1, 2, 0])])),
            ("e", Subgroup::trivial(s3s3.clone())),
        ],
        &["s1", "s2"],
        "e",
    ));

    out
}

/// The Z4 characterization whose sources share the subgroup {0,2}: the
/// independence equation fails, so the CWL conversion must error.
pub fn planted_eq1_violation() -> CorpusChar {
    let z4 = FiniteGroup::cyclic(4).unwrap().into_arc();
    entry(
        "planted-eq1-violation",
        z4.clone(),
        vec![
            ("s1", sub(&z4, &[2])),
            ("s2", sub(&z4, &[2])),
            ("e", Subgroup::whole(z4.clone())),
        ],
        &["s1", "s2"],
        "e",
    )
}

/// A linear corpus code: instance plus a GF(2) code with globals present.
pub struct CorpusLinear {
    pub name: &'static str,
    pub instance: NetworkInstance,
    pub code: LinearCode,
}

fn gf2(rows: usize, cols: usize, data: &[u64]) -> GfMatrix {
    GfMatrix::new(2, rows, cols, data.to_vec()).expect("2 is prime")
}

/// GF(2) linear codes with globals derived, for the rank/entropy checks.
pub fn linear_codes() -> Vec<CorpusLinear> {
    let mut out = Vec::new();

    // butterfly with scalar edges
    {
        let instance = butterfly_instance();
        let one = gf2(1, 1, &[1]);
        let single = |input: &str| -> BTreeMap<String, GfMatrix> {
            [(input.to_string(), one.clone())].into()
        };
        let mut locals: BTreeMap<String, BTreeMap<String, GfMatrix>> = BTreeMap::new();
        locals.insert("e1".into(), single("s1"));
        locals.insert("e2".into(), single("s2"));
        locals.insert("e3".into(), single("e1"));
        locals.insert("e4".into(), single("e2"));
        locals.insert(
            "e5".into(),
            [
                ("e3".to_string(), one.clone()),
                ("e4".to_string(), one.clone()),
            ]
            .into(),
        );
        locals.insert("e6".into(), single("e1"));
        locals.insert("e7".into(), single("e2"));
        locals.insert("e8".into(), single("e5"));
        locals.insert("e9".into(), single("e5"));
        let code = LinearCode {
            q: 2,
            source_dims: [("s1".to_string(), 1), ("s2".to_string(), 1)].into(),
            globals: BTreeMap::new(),
            locals,
        };
        let code =
            crate::convert::linear_local_to_global(&instance, &code).expect("butterfly is wired");
        out.push(CorpusLinear {
            name: "butterfly-gf2",
            instance,
            code,
        });
    }

    // chain with 2-dimensional messages and a rank-1 second hop
    {
        let instance = NetworkInstance::new(
            vec!["u".into()],
            vec![
                ("e1".into(), "s".into(), "u".into(), 2.0),
                ("e2".into(), "u".into(), "t".into(), 2.0),
            ],
            vec!["s".into()],
            vec!["t".into()],
            vec![],
        )
        .expect("chain instance");
        let code = LinearCode {
            q: 2,
            source_dims: [("s".to_string(), 2)].into(),
            globals: BTreeMap::new(),
            locals: [
                (
                    "e1".to_string(),
                    [("s".to_string(), gf2(2, 2, &[1, 0, 0, 1]))].into(),
                ),
                (
                    "e2".to_string(),
                    [("e1".to_string(), gf2(2, 1, &[1, 1]))].into(),
                ),
            ]
            .into(),
        };
        let code =
            crate::convert::linear_local_to_global(&instance, &code).expect("chain is wired");
        out.push(CorpusLinear {
            name: "chain-rank-drop",
            instance,
            code,
        });
    }

    // two-in-edge gadget with a dead (zero) branch
    {
        let instance = NetworkInstance::new(
            vec!["u".into(), "v".into()],
            vec![
                ("e1".into(), "s1".into(), "u".into(), 2.0),
                ("e2".into(), "s2".into(), "u".into(), 1.0),
                ("e3".into(), "u".into(), "v".into(), 2.0),
                ("e4".into(), "v".into(), "t".into(), 2.0),
            ],
            vec!["s1".into(), "s2".into()],
            vec!["t".into()],
            vec![],
        )
        .expect("gadget instance");
        let code = LinearCode {
            q: 2,
            source_dims: [("s1".to_string(), 2), ("s2".to_string(), 1)].into(),
            globals: BTreeMap::new(),
            locals: [
                (
                    "e1".to_string(),
                    [("s1".to_string(), gf2(2, 2, &[1, 0, 0, 1]))].into(),
                ),
                (
                    "e2".to_string(),
                    [("s2".to_string(), gf2(1, 1, &[1]))].into(),
                ),
                (
                    "e3".to_string(),
                    [
                        ("e1".to_string(), gf2(2, 2, &[1, 1, 0, 1])),
                        ("e2".to_string(), gf2(1, 2, &[0, 1])),
                    ]
                    .into(),
                ),
                (
                    "e4".to_string(),
                    [("e3".to_string(), gf2(2, 2, &[0, 0, 0, 0]))].into(),
                ),
            ]
            .into(),
        };
        let code =
            crate::convert::linear_local_to_global(&instance, &code).expect("gadget is wired");
        out.push(CorpusLinear {
            name: "gadget-zero-branch",
            instance,
            code,
        });
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cwl::check_consistent_cwl_family;

    #[test]
    fn corpus_groups_pass_the_exhaustive_axiom_check() {
        for entry in characterizations() {
            let g = entry.char.group();
            assert!(g.order() <= 64, "{}", entry.name);
            let rows: Vec<Vec<usize>> = g
                .elements()
                .map(|a| g.elements().map(|b| g.op(a, b)).collect())
                .collect();
            let revalidated = FiniteGroup::from_table(g.label(), &rows)
                .unwrap_or_else(|e| panic!("{}: {e}", entry.name));
            assert!(revalidated.same_table(g));
        }
    }

    #[test]
    fn corpus_is_large_enough_and_roles_are_assigned() {
        let corpus = characterizations();
        assert!(corpus.len() >= 20);
        for entry in &corpus {
            assert!(entry.char.subgroup(&entry.edge).is_ok(), "{}", entry.name);
            for s in &entry.sources {
                assert!(entry.char.subgroup(s).is_ok(), "{}", entry.name);
            }
        }
    }

    #[test]
    fn corpus_cwl_families_are_consistent() {
        for (name, _, locals) in cwl_local_families() {
            let check = check_consistent_cwl_family(&locals);
            assert!(
                check.consistent,
                "{name}: {:?} {:?}",
                check.conflict, check.failing
            );
        }
    }
}

/// Consistent local CWL families with their instances; the last one is the
/// non-Abelian all-S3 family.
pub fn cwl_local_families() -> Vec<(&'static str, NetworkInstance, Vec<CwlFunction>)> {
    let mut out = Vec::new();

    out.push(("butterfly-z2", butterfly_instance(), butterfly_cwl_locals()));

    // chain over Z4 that shrinks to Z2 on the second hop
    {
        let instance = NetworkInstance::new(
            vec!["a".into()],
            vec![
                ("e1".into(), "s".into(), "a".into(), 2.0),
                ("e2".into(), "a".into(), "t".into(), 1.0),
            ],
            vec!["s".into()],
            vec!["t".into()],
            vec![],
        )
        .expect("chain instance");
        let z4 = FiniteGroup::cyclic(4).unwrap().into_arc();
        let locals = vec![
            CwlFunction::new(
                "e1",
                vec![("s".to_string(), z4.clone())],
                ("e1".to_string(), z4.clone()),
                vec![0, 1, 2, 3],
            )
            .unwrap(),
            CwlFunction::new(
                "e2",
                vec![("e1".to_string(), z4.clone())],
                ("e2".to_string(), z2()),
                vec![0, 1, 0, 1],
            )
            .unwrap(),
        ];
        out.push(("chain-z4-to-z2", instance, locals));
    }

    // butterfly over Z3 with a mod-3 sum at the bottleneck
    {
        let instance = butterfly_instance();
        let z3 = FiniteGroup::cyclic(3).unwrap().into_arc();
        let id3 = |name: &str, input: &str| {
            CwlFunction::new(
                name,
                vec![(input.to_string(), z3.clone())],
                (name.to_string(), z3.clone()),
                vec![0, 1, 2],
            )
            .unwrap()
        };
        let mut sum = Vec::new();
        for a in 0..3usize {
            for b in 0..3usize {
                sum.push((a + b) % 3);
            }
        }
        let locals = vec![
            id3("e1", "s1"),
            id3("e2", "s2"),
            id3("e3", "e1"),
            id3("e4", "e2"),
            CwlFunction::new(
                "e5",
                vec![
                    ("e3".to_string(), z3.clone()),
                    ("e4".to_string(), z3.clone()),
                ],
                ("e5".to_string(), z3.clone()),
                sum,
            )
            .unwrap(),
            id3("e6", "e1"),
            id3("e7", "e2"),
            id3("e8", "e5"),
            id3("e9", "e5"),
        ];
        out.push(("butterfly-z3", instance, locals));
    }

    {
        let (instance, locals) = s3_cwl_family();
        out.push(("merge-s3", instance, locals));
    }

    out
}
