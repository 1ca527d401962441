//! Writers for the group, characterization, and CWL file formats. Output
//! parses back through the corresponding parser; groups are dumped as
//! explicit tables.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::sync::Arc;

use crate::charac::GroupCharacterization;
use crate::cwl::CwlFunction;
use crate::group::{FiniteGroup, Subgroup};

fn write_group_block(out: &mut String, label: &str, g: &FiniteGroup) {
    writeln!(out, "group {label}").unwrap();
    writeln!(out, "kind table {}", g.order()).unwrap();
    for a in g.elements() {
        let row: Vec<String> = g.elements().map(|b| g.op(a, b).to_string()).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
}

pub fn render_group_file(g: &FiniteGroup, subgroups: &[(String, Subgroup)]) -> String {
    let mut out = String::new();
    write_group_block(&mut out, g.label(), g);
    for (label, sub) in subgroups {
        let elems: Vec<String> = sub.elements().iter().map(|e| e.to_string()).collect();
        writeln!(out, "subgroup {label} {}", elems.join(" ")).unwrap();
    }
    out
}

pub fn render_characterization(c: &GroupCharacterization) -> String {
    let mut out = String::new();
    write_group_block(&mut out, "G", c.group());
    for (var, sub) in c.assignment() {
        let elems: Vec<String> = sub.elements().iter().map(|e| e.to_string()).collect();
        writeln!(out, "var {var} subgroup {}", elems.join(" ")).unwrap();
    }
    out
}

/// Renders CWL functions, deduplicating structurally identical groups into
/// shared inline blocks labeled g0, g1, ...
pub fn render_cwl_file(functions: &[CwlFunction]) -> String {
    let mut out = String::new();
    let mut labels: Vec<(Arc<FiniteGroup>, String)> = Vec::new();
    let mut label_of = |g: &Arc<FiniteGroup>, out: &mut String| -> String {
        for (known, label) in &labels {
            if known.same_table(g) {
                return label.clone();
            }
        }
        let label = format!("g{}", labels.len());
        write_group_block(out, &label, g);
        labels.push((g.clone(), label.clone()));
        label
    };
    let mut blocks = String::new();
    for f in functions {
        let mut block = String::new();
        writeln!(block, "cwl {}", f.name).unwrap();
        for (var, g) in f.inputs() {
            let label = label_of(g, &mut out);
            writeln!(block, "input {var} {label}").unwrap();
        }
        let (var, g) = f.output();
        let label = label_of(g, &mut out);
        writeln!(block, "output {var} {label}").unwrap();
        let radices = f.input_radices();
        for (idx, &val) in f.table().iter().enumerate() {
            let tuple = crate::radix::unpack(idx, &radices);
            let tuple: Vec<String> = tuple.iter().map(|v| v.to_string()).collect();
            writeln!(block, "map {} -> {val}", tuple.join(" ")).unwrap();
        }
        blocks.push_str(&block);
    }
    out.push_str(&blocks);
    out
}

/// Renders a linear code back to its file format.
pub fn render_linear_file(code: &crate::convert::LinearCode) -> String {
    let mut out = String::new();
    writeln!(out, "linear code").unwrap();
    writeln!(out, "field {}", code.q).unwrap();
    for (s, dim) in &code.source_dims {
        writeln!(out, "source {s} {dim}").unwrap();
    }
    let fmt_matrix = |m: &crate::convert::GfMatrix| -> String {
        let entries: Vec<String> = (0..m.rows())
            .flat_map(|r| (0..m.cols()).map(move |c| m.get(r, c).to_string()))
            .collect();
        format!("{}x{} {}", m.rows(), m.cols(), entries.join(" "))
    };
    for (edge, m) in &code.globals {
        writeln!(out, "global {edge} {}", fmt_matrix(m)).unwrap();
    }
    let locals: BTreeMap<_, _> = code.locals.iter().collect();
    for (edge, per_input) in locals {
        for (input, m) in per_input {
            writeln!(out, "local {edge} {input} {}", fmt_matrix(m)).unwrap();
        }
    }
    out
}
