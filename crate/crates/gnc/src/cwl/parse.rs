//! CWL file format: group declarations, then one block per function.
//!
//! ```text
//! group <label>              # inline groups, as in group files
//! kind cyclic 2
//! cwl <name>
//! input <var-id> <group-ref>
//! output <var-id> <group-ref>
//! map <in-tuple> -> <out>
//! ```
//!
//! A group-ref is an inline group label, `cyclic:<n1>x<n2>...`, or
//! `sym:<n>`. Map lines must cover the full domain; in-tuple components
//! follow the order of the `input` lines.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{CwlError, CwlFunction};
use crate::group::{FiniteGroup, GroupError};
use crate::parse_util::{parse_usize, tokenized_lines, ParseError};
use crate::radix;

fn resolve_ref(
    named: &BTreeMap<String, Arc<FiniteGroup>>,
    token: &str,
    line: usize,
) -> Result<Arc<FiniteGroup>, ParseError> {
    if let Some(g) = named.get(token) {
        return Ok(g.clone());
    }
    let builtin = |err: GroupError| ParseError::new(line, err.to_string());
    if let Some(spec) = token.strip_prefix("cyclic:") {
        let factors: Vec<usize> = spec
            .split('x')
            .map(|t| parse_usize(t, line, "cyclic factor"))
            .collect::<Result<_, _>>()?;
        return Ok(FiniteGroup::cyclic_product(&factors)
            .map_err(builtin)?
            .into_arc());
    }
    if let Some(spec) = token.strip_prefix("sym:") {
        let n = parse_usize(spec, line, "symmetric degree")?;
        return Ok(FiniteGroup::symmetric(n).map_err(builtin)?.into_arc());
    }
    Err(ParseError::new(
        line,
        format!("unknown group reference '{token}'"),
    ))
}

struct Block {
    line: usize,
    name: String,
    inputs: Vec<(String, Arc<FiniteGroup>)>,
    output: Option<(String, Arc<FiniteGroup>)>,
    entries: Vec<(usize, Vec<usize>, usize)>,
}

/// Parses every `cwl` block in the file, in order.
pub fn parse_cwl_file(text: &str) -> Result<Vec<CwlFunction>, CwlError> {
    let lines = tokenized_lines(text);
    let mut named: BTreeMap<String, Arc<FiniteGroup>> = BTreeMap::new();
    let mut blocks: Vec<Block> = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let (line, tokens) = &lines[i];
        match tokens[0] {
            "group" => {
                // inline group block: group + kind (+ rows for kind table)
                if tokens.len() != 2 {
                    return Err(ParseError::new(*line, "expected 'group <label>'").into());
                }
                let mut end = i + 1;
                if end < lines.len() && lines[end].1[0] == "kind" {
                    if lines[end].1.get(1) == Some(&"table") {
                        let n = parse_usize(lines[end].1[2], lines[end].0, "table size")?;
                        end += 1 + n;
                    } else {
                        end += 1;
                    }
                }
                let block: String = lines[i..end.min(lines.len())]
                    .iter()
                    .map(|(_, t)| format!("{}\n", t.join(" ")))
                    .collect();
                let parsed = crate::group::parse_group_file(&block).map_err(CwlError::Syntax)?;
                named.insert(tokens[1].to_string(), parsed.group);
                i = end;
            }
            "cwl" => {
                if tokens.len() != 2 {
                    return Err(ParseError::new(*line, "expected 'cwl <name>'").into());
                }
                blocks.push(Block {
                    line: *line,
                    name: tokens[1].to_string(),
                    inputs: Vec::new(),
                    output: None,
                    entries: Vec::new(),
                });
                i += 1;
            }
            "input" | "output" | "map" => {
                let block = blocks
                    .last_mut()
                    .ok_or_else(|| ParseError::new(*line, "directive outside a 'cwl' block"))?;
                match tokens[0] {
                    "input" => {
                        if tokens.len() != 3 {
                            return Err(ParseError::new(
                                *line,
                                "expected 'input <var> <group-ref>'",
                            )
                            .into());
                        }
                        let g = resolve_ref(&named, tokens[2], *line)?;
                        block.inputs.push((tokens[1].to_string(), g));
                    }
                    "output" => {
                        if tokens.len() != 3 {
                            return Err(ParseError::new(
                                *line,
                                "expected 'output <var> <group-ref>'",
                            )
                            .into());
                        }
                        let g = resolve_ref(&named, tokens[2], *line)?;
                        block.output = Some((tokens[1].to_string(), g));
                    }
                    _ => {
                        let arrow = tokens
                            .iter()
                            .position(|&t| t == "->")
                            .ok_or_else(|| ParseError::new(*line, "map line needs '->'"))?;
                        if arrow + 2 != tokens.len() {
                            return Err(ParseError::new(
                                *line,
                                "map output must be a single symbol",
                            )
                            .into());
                        }
                        let input: Vec<usize> = tokens[1..arrow]
                            .iter()
                            .map(|t| parse_usize(t, *line, "input symbol"))
                            .collect::<Result<_, _>>()?;
                        let out = parse_usize(tokens[arrow + 1], *line, "output symbol")?;
                        block.entries.push((*line, input, out));
                    }
                }
                i += 1;
            }
            other => {
                return Err(ParseError::new(*line, format!("unknown directive '{other}'")).into())
            }
        }
    }

    blocks.into_iter().map(build_function).collect()
}

fn build_function(block: Block) -> Result<CwlFunction, CwlError> {
    let output = block
        .output
        .ok_or_else(|| ParseError::new(block.line, format!("cwl {} has no output", block.name)))?;
    let radices: Vec<usize> = block.inputs.iter().map(|(_, g)| g.order()).collect();
    let domain = radix::domain_size(&radices);
    let mut table = vec![None; domain];
    for (line, tuple, out) in block.entries {
        if tuple.len() != radices.len() || tuple.iter().zip(&radices).any(|(&v, &r)| v >= r) {
            return Err(
                ParseError::new(line, format!("tuple {tuple:?} does not fit the inputs")).into(),
            );
        }
        let idx = radix::pack(&tuple, &radices);
        if table[idx].replace(out).is_some() {
            return Err(ParseError::new(line, "duplicate map entry").into());
        }
    }
    let table: Vec<usize> = table.into_iter().collect::<Option<_>>().ok_or_else(|| {
        ParseError::new(block.line, format!("cwl {} map is not total", block.name))
    })?;
    CwlFunction::new(block.name, block.inputs, output, table)
}
