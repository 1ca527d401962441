//! Network instance file format.
//!
//! ```text
//! node <label>
//! edge <id> <tail> <head> <capacity>
//! source <label> <alphabet-size>
//! terminal <label>
//! demand <terminal> <source> [<source> ...]
//! local <edge-id>            # followed by map lines
//! map <in-tuple> -> <out>
//! decoder <terminal>         # followed by map lines, tuple outputs
//! map <in-tuple> -> <out-tuple>
//! ```
//!
//! In-tuple components are ordered by sorted incoming edge ids (or the
//! source id for source edges); decoder outputs by sorted demanded sources.

use std::collections::BTreeMap;

use super::{NetError, NetworkCode, NetworkInstance};
use crate::parse_util::{parse_f64, parse_usize, tokenized_lines, ParseError};

/// Raw map lines of one block: (line number, in-tuple, out-tuple).
type RawEntries = Vec<(usize, Vec<usize>, Vec<usize>)>;

/// A parsed instance file: the validated instance plus whatever encoding
/// tables the file carried (possibly none).
#[derive(Clone, Debug)]
pub struct NetworkFile {
    pub instance: NetworkInstance,
    pub code: NetworkCode,
}

enum OpenBlock {
    None,
    Local(String),
    Decoder(String),
}

pub fn parse_network_file(text: &str) -> Result<NetworkFile, NetError> {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut sources = Vec::new();
    let mut source_alphabets: BTreeMap<String, usize> = BTreeMap::new();
    let mut terminals = Vec::new();
    let mut demands: Vec<(String, Vec<String>)> = Vec::new();
    let mut locals: BTreeMap<String, RawEntries> = BTreeMap::new();
    let mut decoders: BTreeMap<String, RawEntries> = BTreeMap::new();
    let mut open = OpenBlock::None;

    for (line, tokens) in tokenized_lines(text) {
        match tokens[0] {
            "node" => {
                expect_len(&tokens, 2, line, "node <label>")?;
                nodes.push(tokens[1].to_string());
                open = OpenBlock::None;
            }
            "edge" => {
                expect_len(&tokens, 5, line, "edge <id> <tail> <head> <capacity>")?;
                let capacity = parse_f64(tokens[4], line, "capacity")?;
                edges.push((
                    tokens[1].to_string(),
                    tokens[2].to_string(),
                    tokens[3].to_string(),
                    capacity,
                ));
                open = OpenBlock::None;
            }
            "source" => {
                expect_len(&tokens, 3, line, "source <label> <alphabet-size>")?;
                let size = parse_usize(tokens[2], line, "alphabet size")?;
                if source_alphabets
                    .insert(tokens[1].to_string(), size)
                    .is_some()
                {
                    return Err(NetError::DuplicateDeclaration(tokens[1].to_string()));
                }
                sources.push(tokens[1].to_string());
                open = OpenBlock::None;
            }
            "terminal" => {
                expect_len(&tokens, 2, line, "terminal <label>")?;
                terminals.push(tokens[1].to_string());
                open = OpenBlock::None;
            }
            "demand" => {
                if tokens.len() < 3 {
                    return Err(
                        ParseError::new(line, "expected 'demand <terminal> <source> ...'").into(),
                    );
                }
                demands.push((
                    tokens[1].to_string(),
                    tokens[2..].iter().map(|s| s.to_string()).collect(),
                ));
                open = OpenBlock::None;
            }
            "local" => {
                expect_len(&tokens, 2, line, "local <edge-id>")?;
                let id = tokens[1].to_string();
                locals.entry(id.clone()).or_default();
                open = OpenBlock::Local(id);
            }
            "decoder" => {
                expect_len(&tokens, 2, line, "decoder <terminal>")?;
                let id = tokens[1].to_string();
                decoders.entry(id.clone()).or_default();
                open = OpenBlock::Decoder(id);
            }
            "map" => {
                let arrow = tokens
                    .iter()
                    .position(|&t| t == "->")
                    .ok_or_else(|| ParseError::new(line, "map line needs '->'"))?;
                let input: Vec<usize> = tokens[1..arrow]
                    .iter()
                    .map(|t| parse_usize(t, line, "input symbol"))
                    .collect::<Result<_, _>>()?;
                let output: Vec<usize> = tokens[arrow + 1..]
                    .iter()
                    .map(|t| parse_usize(t, line, "output symbol"))
                    .collect::<Result<_, _>>()?;
                if input.is_empty() || output.is_empty() {
                    return Err(ParseError::new(line, "map needs input and output symbols").into());
                }
                match &open {
                    OpenBlock::Local(id) => locals.get_mut(id).unwrap().push((line, input, output)),
                    OpenBlock::Decoder(id) => {
                        decoders.get_mut(id).unwrap().push((line, input, output))
                    }
                    OpenBlock::None => {
                        return Err(ParseError::new(line, "map outside local/decoder block").into())
                    }
                }
            }
            other => {
                return Err(ParseError::new(line, format!("unknown directive '{other}'")).into())
            }
        }
    }

    let instance = NetworkInstance::new(nodes, edges, sources, terminals, demands)?;

    let mut sparse_locals: BTreeMap<String, BTreeMap<Vec<usize>, usize>> = BTreeMap::new();
    for (id, entries) in locals {
        let mut table = BTreeMap::new();
        for (line, input, output) in entries {
            if output.len() != 1 {
                return Err(
                    ParseError::new(line, "local map output must be a single symbol").into(),
                );
            }
            if table.insert(input, output[0]).is_some() {
                return Err(ParseError::new(line, "duplicate map entry").into());
            }
        }
        sparse_locals.insert(id, table);
    }
    let mut sparse_decoders: BTreeMap<String, BTreeMap<Vec<usize>, Vec<usize>>> = BTreeMap::new();
    for (id, entries) in decoders {
        let mut table = BTreeMap::new();
        for (line, input, output) in entries {
            if table.insert(input, output).is_some() {
                return Err(ParseError::new(line, "duplicate map entry").into());
            }
        }
        sparse_decoders.insert(id, table);
    }

    let source_radix: BTreeMap<String, usize> = source_alphabets;
    let code = NetworkCode::from_sparse(&instance, source_radix, sparse_locals, sparse_decoders)?;
    Ok(NetworkFile { instance, code })
}

/// Parses and validates the instance part of a file, ignoring any tables.
pub fn parse_instance(text: &str) -> Result<NetworkInstance, NetError> {
    parse_network_file(text).map(|f| f.instance)
}

fn expect_len(tokens: &[&str], len: usize, line: usize, usage: &str) -> Result<(), NetError> {
    if tokens.len() != len {
        return Err(ParseError::new(line, format!("expected '{usage}'")).into());
    }
    Ok(())
}
