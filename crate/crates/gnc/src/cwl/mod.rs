//! Coordinate-wise-linear functions: per-coordinate groups, exhaustive
//! homomorphism verification, and family consistency.

mod parse;

pub use parse::parse_cwl_file;

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::group::{Elem, FiniteGroup};
use crate::parse_util::ParseError;
use crate::radix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CwlError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("cwl function {name}: {detail}")]
    BadTable { name: String, detail: String },
}

/// A total map from a product of carrier groups to an output group, claimed
/// to be a homomorphism. Alphabets are identified with group element indices.
#[derive(Clone, Debug)]
pub struct CwlFunction {
    pub name: String,
    inputs: Vec<(String, Arc<FiniteGroup>)>,
    output: (String, Arc<FiniteGroup>),
    table: Vec<Elem>,
}

impl CwlFunction {
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<(String, Arc<FiniteGroup>)>,
        output: (String, Arc<FiniteGroup>),
        table: Vec<Elem>,
    ) -> Result<Self, CwlError> {
        let name = name.into();
        let expected =
            radix::domain_size(&inputs.iter().map(|(_, g)| g.order()).collect::<Vec<_>>());
        if table.len() != expected {
            return Err(CwlError::BadTable {
                name,
                detail: format!("{} entries, domain has {}", table.len(), expected),
            });
        }
        if let Some(&v) = table.iter().find(|&&v| v >= output.1.order()) {
            return Err(CwlError::BadTable {
                name,
                detail: format!("output {v} outside group of order {}", output.1.order()),
            });
        }
        Ok(CwlFunction {
            name,
            inputs,
            output,
            table,
        })
    }

    pub fn inputs(&self) -> &[(String, Arc<FiniteGroup>)] {
        &self.inputs
    }

    pub fn output(&self) -> &(String, Arc<FiniteGroup>) {
        &self.output
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn input_radices(&self) -> Vec<usize> {
        self.inputs.iter().map(|(_, g)| g.order()).collect()
    }

    pub fn eval(&self, tuple: &[Elem]) -> Elem {
        self.table[radix::pack(tuple, &self.input_radices())]
    }

    /// Componentwise product of two input tuples.
    fn tuple_op(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        self.inputs
            .iter()
            .zip(a)
            .zip(b)
            .map(|(((_, g), &x), &y)| g.op(x, y))
            .collect()
    }
}

/// Verdict of the exhaustive coordinate-wise-linearity check.
#[derive(Clone, Debug)]
pub struct CwlCheck {
    pub is_hom: bool,
    /// First pair of input tuples violating the homomorphism law.
    pub witness: Option<(Vec<Elem>, Vec<Elem>)>,
    pub surjective: bool,
    /// All coordinate groups and the output group are Abelian.
    pub abelian: bool,
}

impl CwlCheck {
    /// CWL proper: a surjective homomorphism.
    pub fn is_cwl(&self) -> bool {
        self.is_hom && self.surjective
    }
}

/// Checks the homomorphism law over all pairs of input tuples, plus
/// surjectivity and the Abelian flag.
pub fn verify_cwl(f: &CwlFunction) -> CwlCheck {
    let radices = f.input_radices();
    let n = radix::domain_size(&radices);
    let out = &f.output.1;
    let mut is_hom = true;
    let mut witness = None;
    'outer: for i in 0..n {
        let a = radix::unpack(i, &radices);
        for j in 0..n {
            let b = radix::unpack(j, &radices);
            let ab = f.tuple_op(&a, &b);
            if f.eval(&ab) != out.op(f.table[i], f.table[j]) {
                is_hom = false;
                witness = Some((a, b));
                break 'outer;
            }
        }
    }
    let mut hit = vec![false; out.order()];
    for &v in &f.table {
        hit[v] = true;
    }
    let surjective = hit.iter().all(|&h| h);
    let abelian = f.inputs.iter().all(|(_, g)| g.is_abelian()) && out.is_abelian();
    CwlCheck {
        is_hom,
        witness,
        surjective,
        abelian,
    }
}

/// A shared group assignment with the functions defined over it.
#[derive(Clone, Debug)]
pub struct CwlFamily {
    pub functions: Vec<CwlFunction>,
}

/// Verdict of the family consistency check.
#[derive(Clone, Debug)]
pub struct CwlFamilyCheck {
    pub consistent: bool,
    /// Variable bound to two different groups, if any.
    pub conflict: Option<String>,
    /// Function failing verify_cwl, with its check, if any.
    pub failing: Option<(String, CwlCheck)>,
}

impl CwlFamilyCheck {
    fn ok() -> Self {
        CwlFamilyCheck {
            consistent: true,
            conflict: None,
            failing: None,
        }
    }
}

/// True iff every variable is assigned the identical group by all member
/// functions and every member passes the exhaustive CWL check. An empty
/// family is vacuously consistent.
pub fn check_consistent_cwl_family(functions: &[CwlFunction]) -> CwlFamilyCheck {
    let mut groups: BTreeMap<&str, &Arc<FiniteGroup>> = BTreeMap::new();
    for f in functions {
        for (var, g) in f.inputs.iter().chain(std::iter::once(&f.output)) {
            match groups.get(var.as_str()) {
                Some(existing) if !existing.same_table(g) => {
                    return CwlFamilyCheck {
                        consistent: false,
                        conflict: Some(var.clone()),
                        failing: None,
                    };
                }
                Some(_) => {}
                None => {
                    groups.insert(var, g);
                }
            }
        }
    }
    for f in functions {
        let check = verify_cwl(f);
        if !check.is_cwl() {
            return CwlFamilyCheck {
                consistent: false,
                conflict: None,
                failing: Some((f.name.clone(), check)),
            };
        }
    }
    CwlFamilyCheck::ok()
}

impl CwlFamily {
    /// The shared variable -> group assignment, when consistent.
    pub fn shared_groups(&self) -> BTreeMap<String, Arc<FiniteGroup>> {
        let mut out = BTreeMap::new();
        for f in &self.functions {
            for (var, g) in f.inputs.iter().chain(std::iter::once(&f.output)) {
                out.entry(var.clone()).or_insert_with(|| g.clone());
            }
        }
        out
    }

    pub fn function(&self, name: &str) -> Option<&CwlFunction> {
        self.functions.iter().find(|f| f.name == name)
    }
}
