//! Acyclic network instances and network codes as explicit encoding tables:
//! deriving global functions from local ones, decodability, and exact joint
//! distributions of the edge/source variables.

mod parse;

pub use parse::{parse_instance, parse_network_file, NetworkFile};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::dist::ExactDistribution;
use crate::parse_util::ParseError;
use crate::radix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("graph has a directed cycle")]
    CyclicGraph,
    #[error("source {src} has incoming edge {edge}")]
    SourceHasInEdge { src: String, edge: String },
    #[error("terminal {terminal} has outgoing edge {edge}")]
    TerminalHasOutEdge { terminal: String, edge: String },
    #[error("{0} is declared both source and terminal")]
    SourceIsTerminal(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("unknown variable {0} (not a source or edge)")]
    UnknownVariable(String),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(String),
    #[error("duplicate declaration of {0}")]
    DuplicateDeclaration(String),
    #[error("edge {0} has non-positive capacity")]
    NonPositiveCapacity(String),
    #[error("demanded source {src} cannot reach terminal {terminal}")]
    DemandUnreachable { terminal: String, src: String },
    #[error("source {0} has no alphabet size")]
    MissingSourceAlphabet(String),
    #[error("missing local encoding table for edge {0}")]
    MissingLocal(String),
    #[error("missing decoder for terminal {0}")]
    MissingDecoder(String),
    #[error("local table for edge {edge} has {got} entries, expected {expected}")]
    BadLocalTable {
        edge: String,
        expected: usize,
        got: usize,
    },
    #[error("decoder table for terminal {terminal} is malformed: {detail}")]
    BadDecoderTable { terminal: String, detail: String },
    #[error("map entry for {block}: {detail}")]
    BadMapEntry { block: String, detail: String },
    #[error("global encoding tables not derived")]
    GlobalsNotDerived,
    #[error(
        "terminal {terminal} cannot decode: source tuples {tuple_a:?} and {tuple_b:?} collide"
    )]
    Undecodable {
        terminal: String,
        tuple_a: Vec<usize>,
        tuple_b: Vec<usize>,
    },
}

/// A directed edge with an id and a capacity (metadata only).
#[derive(Clone, Debug)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub capacity: f64,
}

/// An acyclic network: nodes, edges, sources, terminals, and a demand map.
#[derive(Clone, Debug)]
pub struct NetworkInstance {
    nodes: Vec<String>,
    edges: Vec<Edge>,
    sources: Vec<usize>,
    terminals: Vec<usize>,
    demands: BTreeMap<String, Vec<String>>,
    in_edges: Vec<Vec<usize>>,
    out_edges: Vec<Vec<usize>>,
}

impl NetworkInstance {
    /// Validates and indexes an instance. `nodes` may omit sources and
    /// terminals; the vertex set is the union of all three.
    pub fn new(
        nodes: Vec<String>,
        edges: Vec<(String, String, String, f64)>,
        sources: Vec<String>,
        terminals: Vec<String>,
        demands: Vec<(String, Vec<String>)>,
    ) -> Result<Self, NetError> {
        let mut all: BTreeSet<String> = nodes.into_iter().collect();
        for s in &sources {
            if terminals.contains(s) {
                return Err(NetError::SourceIsTerminal(s.clone()));
            }
            all.insert(s.clone());
        }
        all.extend(terminals.iter().cloned());
        let node_list: Vec<String> = all.into_iter().collect();
        let index_of = |label: &str| -> Result<usize, NetError> {
            node_list
                .binary_search_by(|n| n.as_str().cmp(label))
                .map_err(|_| NetError::UnknownNode(label.to_string()))
        };

        let mut seen_ids = BTreeSet::new();
        let mut edge_list = Vec::with_capacity(edges.len());
        for (id, tail, head, capacity) in edges {
            if !seen_ids.insert(id.clone()) {
                return Err(NetError::DuplicateEdge(id));
            }
            if capacity <= 0.0 {
                return Err(NetError::NonPositiveCapacity(id));
            }
            edge_list.push(Edge {
                id,
                tail: index_of(&tail)?,
                head: index_of(&head)?,
                capacity,
            });
        }
        edge_list.sort_by(|a, b| a.id.cmp(&b.id));

        let mut source_idx: Vec<usize> = sources
            .iter()
            .map(|s| index_of(s))
            .collect::<Result<_, _>>()?;
        source_idx.sort_unstable();
        let mut terminal_idx: Vec<usize> = terminals
            .iter()
            .map(|t| index_of(t))
            .collect::<Result<_, _>>()?;
        terminal_idx.sort_unstable();

        let mut in_edges = vec![Vec::new(); node_list.len()];
        let mut out_edges = vec![Vec::new(); node_list.len()];
        for (i, e) in edge_list.iter().enumerate() {
            out_edges[e.tail].push(i);
            in_edges[e.head].push(i);
        }

        for &s in &source_idx {
            if let Some(&e) = in_edges[s].first() {
                return Err(NetError::SourceHasInEdge {
                    src: node_list[s].clone(),
                    edge: edge_list[e].id.clone(),
                });
            }
        }
        for &t in &terminal_idx {
            if let Some(&e) = out_edges[t].first() {
                return Err(NetError::TerminalHasOutEdge {
                    terminal: node_list[t].clone(),
                    edge: edge_list[e].id.clone(),
                });
            }
        }

        let mut demand_map: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (t, srcs) in demands {
            let ti = index_of(&t)?;
            if terminal_idx.binary_search(&ti).is_err() {
                return Err(NetError::UnknownNode(t));
            }
            let entry = demand_map.entry(t).or_default();
            for s in srcs {
                let si = index_of(&s)?;
                if source_idx.binary_search(&si).is_err() {
                    return Err(NetError::UnknownVariable(s));
                }
                if !entry.contains(&s) {
                    entry.push(s);
                }
            }
            entry.sort();
        }

        let instance = NetworkInstance {
            nodes: node_list,
            edges: edge_list,
            sources: source_idx,
            terminals: terminal_idx,
            demands: demand_map,
            in_edges,
            out_edges,
        };

        if instance.topological_order_checked().is_none() {
            return Err(NetError::CyclicGraph);
        }
        for (t, srcs) in &instance.demands {
            let ti = instance.node_index(t).unwrap();
            for s in srcs {
                let si = instance.node_index(s).unwrap();
                if !instance.reachable(si).contains(&ti) {
                    return Err(NetError::DemandUnreachable {
                        terminal: t.clone(),
                        src: s.clone(),
                    });
                }
            }
        }
        Ok(instance)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_label(&self, idx: usize) -> &str {
        &self.nodes[idx]
    }

    pub fn node_index(&self, label: &str) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.as_str().cmp(label)).ok()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges
            .binary_search_by(|e| e.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.edges[i])
    }

    /// Source labels in sorted order.
    pub fn source_labels(&self) -> Vec<&str> {
        self.sources
            .iter()
            .map(|&i| self.nodes[i].as_str())
            .collect()
    }

    pub fn terminal_labels(&self) -> Vec<&str> {
        self.terminals
            .iter()
            .map(|&i| self.nodes[i].as_str())
            .collect()
    }

    pub fn is_source(&self, idx: usize) -> bool {
        self.sources.binary_search(&idx).is_ok()
    }

    pub fn demands(&self) -> &BTreeMap<String, Vec<String>> {
        &self.demands
    }

    /// Incoming edge ids of a node, sorted.
    pub fn in_edge_ids(&self, node: usize) -> Vec<&str> {
        let mut ids: Vec<&str> = self.in_edges[node]
            .iter()
            .map(|&i| self.edges[i].id.as_str())
            .collect();
        ids.sort_unstable();
        ids
    }

    /// All source/edge variable ids, sorted: sources then edges is not
    /// guaranteed; plain lexicographic order over all ids.
    pub fn variable_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.source_labels().iter().map(|s| s.to_string()).collect();
        ids.extend(self.edges.iter().map(|e| e.id.clone()));
        ids.sort();
        ids
    }

    fn topological_order_checked(&self) -> Option<Vec<usize>> {
        let n = self.nodes.len();
        let mut indegree: Vec<usize> = (0..n).map(|v| self.in_edges[v].len()).collect();
        // nodes are stored sorted by label, so a min-heap on the index is the
        // lexicographic tie-break
        let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
            .filter(|&v| indegree[v] == 0)
            .map(std::cmp::Reverse)
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(std::cmp::Reverse(v)) = ready.pop() {
            order.push(v);
            for &e in &self.out_edges[v] {
                let h = self.edges[e].head;
                indegree[h] -= 1;
                if indegree[h] == 0 {
                    ready.push(std::cmp::Reverse(h));
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Topological order of node indices; every edge goes forward, ties
    /// broken by node label.
    pub fn topological_order(&self) -> Vec<usize> {
        self.topological_order_checked()
            .expect("instance validated acyclic")
    }

    /// Edge indices ordered so every edge appears after the edges feeding
    /// its tail (tail topological position, then edge id).
    pub fn edges_in_topological_order(&self) -> Vec<usize> {
        let order = self.topological_order();
        let mut position = vec![0; self.nodes.len()];
        for (pos, &v) in order.iter().enumerate() {
            position[v] = pos;
        }
        let mut idx: Vec<usize> = (0..self.edges.len()).collect();
        idx.sort_by_key(|&i| (position[self.edges[i].tail], self.edges[i].id.clone()));
        idx
    }

    fn reachable(&self, from: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                for &e in &self.out_edges[v] {
                    stack.push(self.edges[e].head);
                }
            }
        }
        seen
    }
}

/// Encoding tables for a network instance: per-variable alphabet sizes,
/// local tables per edge, decoder tables per terminal, and (once derived)
/// global tables per edge.
///
/// Local tables are indexed mixed-radix over the tail's sorted incoming edge
/// ids (or the source id, for source edges), first id most significant.
/// Global and decoder indexing works the same way over sorted source labels
/// and sorted incoming edge ids respectively.
#[derive(Clone, Debug)]
pub struct NetworkCode {
    alphabets: BTreeMap<String, usize>,
    locals: BTreeMap<String, Vec<usize>>,
    decoders: BTreeMap<String, Vec<Vec<usize>>>,
    globals: Option<BTreeMap<String, Vec<usize>>>,
}

impl NetworkCode {
    /// Validates tables against the instance. Edge alphabets are inferred
    /// topologically as (max output + 1) of the edge's local table.
    pub fn new(
        instance: &NetworkInstance,
        source_alphabets: BTreeMap<String, usize>,
        locals: BTreeMap<String, Vec<usize>>,
        decoders: BTreeMap<String, Vec<Vec<usize>>>,
    ) -> Result<Self, NetError> {
        Self::with_edge_alphabets(
            instance,
            source_alphabets,
            BTreeMap::new(),
            locals,
            decoders,
        )
    }

    /// Like `new`, but edge alphabet sizes in `edge_alphabets` override the
    /// max-output inference (needed when a table does not hit its whole
    /// alphabet).
    pub fn with_edge_alphabets(
        instance: &NetworkInstance,
        source_alphabets: BTreeMap<String, usize>,
        edge_alphabets: BTreeMap<String, usize>,
        locals: BTreeMap<String, Vec<usize>>,
        decoders: BTreeMap<String, Vec<Vec<usize>>>,
    ) -> Result<Self, NetError> {
        let mut alphabets = BTreeMap::new();
        for s in instance.source_labels() {
            match source_alphabets.get(s) {
                Some(&k) if k >= 1 => {
                    alphabets.insert(s.to_string(), k);
                }
                _ => return Err(NetError::MissingSourceAlphabet(s.to_string())),
            }
        }
        for id in locals.keys() {
            if instance.edge(id).is_none() {
                return Err(NetError::UnknownEdge(id.clone()));
            }
        }
        for e in instance.edges_in_topological_order() {
            let edge = &instance.edges()[e];
            let Some(table) = locals.get(&edge.id) else {
                continue;
            };
            let radices = local_radices(instance, &alphabets, edge)?;
            let expected = radix::domain_size(&radices);
            if table.len() != expected {
                return Err(NetError::BadLocalTable {
                    edge: edge.id.clone(),
                    expected,
                    got: table.len(),
                });
            }
            let inferred = table.iter().max().copied().unwrap_or(0) + 1;
            let size = edge_alphabets.get(&edge.id).copied().unwrap_or(inferred);
            if inferred > size {
                return Err(NetError::BadLocalTable {
                    edge: edge.id.clone(),
                    expected: size,
                    got: inferred,
                });
            }
            alphabets.insert(edge.id.clone(), size);
        }
        for (t, table) in &decoders {
            let ti = instance
                .node_index(t)
                .filter(|&i| instance.terminals.binary_search(&i).is_ok())
                .ok_or_else(|| NetError::UnknownNode(t.clone()))?;
            let radices: Vec<usize> = instance
                .in_edge_ids(ti)
                .iter()
                .map(|id| {
                    alphabets
                        .get(*id)
                        .copied()
                        .ok_or_else(|| NetError::MissingLocal(id.to_string()))
                })
                .collect::<Result<_, _>>()?;
            let expected = radix::domain_size(&radices);
            if table.len() != expected {
                return Err(NetError::BadDecoderTable {
                    terminal: t.clone(),
                    detail: format!("{} rows, expected {}", table.len(), expected),
                });
            }
            let demanded = instance.demands.get(t).cloned().unwrap_or_default();
            for row in table {
                if row.len() != demanded.len() {
                    return Err(NetError::BadDecoderTable {
                        terminal: t.clone(),
                        detail: format!("output arity {} != {} demands", row.len(), demanded.len()),
                    });
                }
                for (v, s) in row.iter().zip(&demanded) {
                    if *v >= alphabets[s] {
                        return Err(NetError::BadDecoderTable {
                            terminal: t.clone(),
                            detail: format!("output {v} out of range for source {s}"),
                        });
                    }
                }
            }
        }
        Ok(NetworkCode {
            alphabets,
            locals,
            decoders,
            globals: None,
        })
    }

    /// Builds dense tables from tuple-keyed maps, checking totality against
    /// the topologically inferred alphabets.
    pub fn from_sparse(
        instance: &NetworkInstance,
        source_alphabets: BTreeMap<String, usize>,
        sparse_locals: BTreeMap<String, BTreeMap<Vec<usize>, usize>>,
        sparse_decoders: BTreeMap<String, BTreeMap<Vec<usize>, Vec<usize>>>,
    ) -> Result<Self, NetError> {
        let mut alphabets = BTreeMap::new();
        for s in instance.source_labels() {
            match source_alphabets.get(s) {
                Some(&k) if k >= 1 => {
                    alphabets.insert(s.to_string(), k);
                }
                _ => return Err(NetError::MissingSourceAlphabet(s.to_string())),
            }
        }
        let mut dense_locals: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for id in sparse_locals.keys() {
            if instance.edge(id).is_none() {
                return Err(NetError::UnknownEdge(id.clone()));
            }
        }
        for ei in instance.edges_in_topological_order() {
            let edge = &instance.edges()[ei];
            let Some(sparse) = sparse_locals.get(&edge.id) else {
                continue;
            };
            let radices = local_radices(instance, &alphabets, edge)?;
            let expected = radix::domain_size(&radices);
            if sparse.len() != expected {
                return Err(NetError::BadLocalTable {
                    edge: edge.id.clone(),
                    expected,
                    got: sparse.len(),
                });
            }
            let mut table = vec![0; expected];
            for (tuple, &out) in sparse {
                check_tuple(&edge.id, tuple, &radices)?;
                table[radix::pack(tuple, &radices)] = out;
            }
            let size = table.iter().max().copied().unwrap_or(0) + 1;
            alphabets.insert(edge.id.clone(), size);
            dense_locals.insert(edge.id.clone(), table);
        }
        let mut dense_decoders: BTreeMap<String, Vec<Vec<usize>>> = BTreeMap::new();
        for (t, sparse) in sparse_decoders {
            let ti = instance
                .node_index(&t)
                .filter(|&i| instance.terminals.binary_search(&i).is_ok())
                .ok_or_else(|| NetError::UnknownNode(t.clone()))?;
            let radices: Vec<usize> = instance
                .in_edge_ids(ti)
                .iter()
                .map(|id| {
                    alphabets
                        .get(*id)
                        .copied()
                        .ok_or_else(|| NetError::MissingLocal(id.to_string()))
                })
                .collect::<Result<_, _>>()?;
            let expected = radix::domain_size(&radices);
            if sparse.len() != expected {
                return Err(NetError::BadDecoderTable {
                    terminal: t.clone(),
                    detail: format!("{} rows, expected {}", sparse.len(), expected),
                });
            }
            let mut table = vec![Vec::new(); expected];
            for (tuple, out) in sparse {
                check_tuple(&t, &tuple, &radices)?;
                table[radix::pack(&tuple, &radices)] = out;
            }
            dense_decoders.insert(t, table);
        }
        Self::new(instance, source_alphabets, dense_locals, dense_decoders)
    }

    pub fn alphabet(&self, var: &str) -> Option<usize> {
        self.alphabets.get(var).copied()
    }

    pub fn alphabets(&self) -> &BTreeMap<String, usize> {
        &self.alphabets
    }

    pub fn local(&self, edge: &str) -> Option<&[usize]> {
        self.locals.get(edge).map(|t| t.as_slice())
    }

    pub fn global(&self, edge: &str) -> Option<&[usize]> {
        self.globals.as_ref()?.get(edge).map(|t| t.as_slice())
    }

    pub fn globals_derived(&self) -> bool {
        self.globals.is_some()
    }

    pub fn decoder(&self, terminal: &str) -> Option<&[Vec<usize>]> {
        self.decoders.get(terminal).map(|t| t.as_slice())
    }

    /// Alphabet sizes of the sorted sources: the radices of a source tuple.
    pub fn source_radices(&self, instance: &NetworkInstance) -> Vec<usize> {
        instance
            .source_labels()
            .iter()
            .map(|s| self.alphabets[*s])
            .collect()
    }
}

fn check_tuple(block: &str, tuple: &[usize], radices: &[usize]) -> Result<(), NetError> {
    if tuple.len() != radices.len() {
        return Err(NetError::BadMapEntry {
            block: block.to_string(),
            detail: format!(
                "tuple {tuple:?} has {} components, expected {}",
                tuple.len(),
                radices.len()
            ),
        });
    }
    for (&v, &r) in tuple.iter().zip(radices) {
        if v >= r {
            return Err(NetError::BadMapEntry {
                block: block.to_string(),
                detail: format!("tuple {tuple:?} component {v} out of range (alphabet {r})"),
            });
        }
    }
    Ok(())
}

fn local_radices(
    instance: &NetworkInstance,
    alphabets: &BTreeMap<String, usize>,
    edge: &Edge,
) -> Result<Vec<usize>, NetError> {
    if instance.is_source(edge.tail) {
        let s = instance.node_label(edge.tail);
        Ok(vec![alphabets[s]])
    } else {
        instance
            .in_edge_ids(edge.tail)
            .iter()
            .map(|id| {
                alphabets
                    .get(*id)
                    .copied()
                    .ok_or_else(|| NetError::MissingLocal(id.to_string()))
            })
            .collect()
    }
}

/// Evaluates every local in topological order to obtain the global table of
/// each edge over the source tuple space (exhaustively).
pub fn derive_globals(
    instance: &NetworkInstance,
    code: &NetworkCode,
) -> Result<NetworkCode, NetError> {
    for e in instance.edges() {
        if !code.locals.contains_key(&e.id) {
            return Err(NetError::MissingLocal(e.id.clone()));
        }
    }
    let source_labels = instance.source_labels();
    let source_radices = code.source_radices(instance);
    let n_tuples = radix::domain_size(&source_radices);
    let mut globals: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for ei in instance.edges_in_topological_order() {
        let edge = &instance.edges()[ei];
        let local = &code.locals[&edge.id];
        let mut table = Vec::with_capacity(n_tuples);
        if instance.is_source(edge.tail) {
            let s = instance.node_label(edge.tail);
            let pos = source_labels.iter().position(|l| *l == s).unwrap();
            for idx in 0..n_tuples {
                let tuple = radix::unpack(idx, &source_radices);
                table.push(local[tuple[pos]]);
            }
        } else {
            let in_ids = instance.in_edge_ids(edge.tail);
            let in_radices: Vec<usize> = in_ids.iter().map(|id| code.alphabets[*id]).collect();
            let upstream: Vec<&[usize]> = in_ids.iter().map(|id| globals[*id].as_slice()).collect();
            for idx in 0..n_tuples {
                let in_tuple: Vec<usize> = upstream.iter().map(|t| t[idx]).collect();
                table.push(local[radix::pack(&in_tuple, &in_radices)]);
            }
        }
        globals.insert(edge.id.clone(), table);
    }
    let mut out = code.clone();
    out.globals = Some(globals);
    Ok(out)
}

/// Outcome of decoding verification: the first failing terminal and source
/// tuple, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodingOutcome {
    Pass,
    Fail {
        terminal: String,
        source_tuple: Vec<usize>,
    },
}

/// Checks that every terminal reproduces its demanded sources on every
/// source tuple, using the explicit decoder tables.
pub fn verify_decoding(
    instance: &NetworkInstance,
    code: &NetworkCode,
) -> Result<DecodingOutcome, NetError> {
    if !code.globals_derived() {
        return Err(NetError::GlobalsNotDerived);
    }
    let source_labels = instance.source_labels();
    let source_radices = code.source_radices(instance);
    for idx in 0..radix::domain_size(&source_radices) {
        let tuple = radix::unpack(idx, &source_radices);
        for (t, demanded) in instance.demands() {
            if demanded.is_empty() {
                continue;
            }
            let decoder = code
                .decoder(t)
                .ok_or_else(|| NetError::MissingDecoder(t.clone()))?;
            let ti = instance.node_index(t).unwrap();
            let in_ids = instance.in_edge_ids(ti);
            let in_radices: Vec<usize> = in_ids.iter().map(|id| code.alphabets[*id]).collect();
            let in_tuple: Vec<usize> = in_ids
                .iter()
                .map(|id| code.global(id).unwrap()[idx])
                .collect();
            let decoded = &decoder[radix::pack(&in_tuple, &in_radices)];
            let expected: Vec<usize> = demanded
                .iter()
                .map(|s| tuple[source_labels.iter().position(|l| l == s).unwrap()])
                .collect();
            if decoded != &expected {
                return Ok(DecodingOutcome::Fail {
                    terminal: t.clone(),
                    source_tuple: tuple,
                });
            }
        }
    }
    Ok(DecodingOutcome::Pass)
}

/// Builds decoder tables from the globals when the incoming messages of each
/// terminal determine its demanded sources; errors with the first colliding
/// pair of source tuples otherwise.
pub fn synthesize_decoders(
    instance: &NetworkInstance,
    code: &NetworkCode,
) -> Result<BTreeMap<String, Vec<Vec<usize>>>, NetError> {
    if !code.globals_derived() {
        return Err(NetError::GlobalsNotDerived);
    }
    let source_labels = instance.source_labels();
    let source_radices = code.source_radices(instance);
    let mut out = BTreeMap::new();
    for (t, demanded) in instance.demands() {
        if demanded.is_empty() {
            continue;
        }
        let ti = instance.node_index(t).unwrap();
        let in_ids = instance.in_edge_ids(ti);
        let in_radices: Vec<usize> = in_ids.iter().map(|id| code.alphabets[*id]).collect();
        let positions: Vec<usize> = demanded
            .iter()
            .map(|s| source_labels.iter().position(|l| l == s).unwrap())
            .collect();
        let mut table: Vec<Option<(Vec<usize>, Vec<usize>)>> =
            vec![None; radix::domain_size(&in_radices)];
        for idx in 0..radix::domain_size(&source_radices) {
            let tuple = radix::unpack(idx, &source_radices);
            let in_tuple: Vec<usize> = in_ids
                .iter()
                .map(|id| code.global(id).unwrap()[idx])
                .collect();
            let key = radix::pack(&in_tuple, &in_radices);
            let wanted: Vec<usize> = positions.iter().map(|&p| tuple[p]).collect();
            match &table[key] {
                None => table[key] = Some((wanted, tuple)),
                Some((existing, first_tuple)) if *existing != wanted => {
                    return Err(NetError::Undecodable {
                        terminal: t.clone(),
                        tuple_a: first_tuple.clone(),
                        tuple_b: tuple,
                    });
                }
                Some(_) => {}
            }
        }
        // unreached input tuples decode arbitrarily to all-zeros
        let rows: Vec<Vec<usize>> = table
            .into_iter()
            .map(|slot| {
                slot.map(|(w, _)| w)
                    .unwrap_or_else(|| vec![0; demanded.len()])
            })
            .collect();
        out.insert(t.clone(), rows);
    }
    Ok(out)
}

/// Joint distribution of the listed variables under uniform independent
/// sources; the denominator is the number of source tuples.
pub fn joint_distribution(
    instance: &NetworkInstance,
    code: &NetworkCode,
    vars: &[String],
) -> Result<ExactDistribution, NetError> {
    let source_labels = instance.source_labels();
    let source_radices = code.source_radices(instance);
    type Getter = Box<dyn Fn(usize, &[usize]) -> usize>;
    let mut getters: Vec<Getter> = Vec::new();
    for v in vars {
        if let Some(pos) = source_labels.iter().position(|l| l == v) {
            getters.push(Box::new(move |_, tuple| tuple[pos]));
        } else if instance.edge(v).is_some() {
            let table = code.global(v).ok_or(NetError::GlobalsNotDerived)?.to_vec();
            getters.push(Box::new(move |idx, _| table[idx]));
        } else {
            return Err(NetError::UnknownVariable(v.clone()));
        }
    }
    let n = radix::domain_size(&source_radices);
    let mut counter: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for idx in 0..n {
        let tuple = radix::unpack(idx, &source_radices);
        let key: Vec<usize> = getters.iter().map(|g| g(idx, &tuple)).collect();
        *counter.entry(key).or_insert(0) += 1;
    }
    Ok(ExactDistribution::from_counts(counter, n as u64))
}

/// Edges whose inferred alphabet exceeds 2^capacity, as human-readable
/// warnings; capacity is metadata, not a hard constraint.
pub fn capacity_warnings(instance: &NetworkInstance, code: &NetworkCode) -> Vec<String> {
    let mut out = Vec::new();
    for e in instance.edges() {
        if let Some(size) = code.alphabet(&e.id) {
            if (size as f64) > 2f64.powf(e.capacity) + 1e-9 {
                out.push(format!(
                    "edge {}: alphabet size {} exceeds 2^{} allowed by capacity",
                    e.id, size, e.capacity
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn chain_with_identity_locals() {
        let instance = NetworkInstance::new(
            vec!["a".into()],
            vec![
                ("e1".into(), "s".into(), "a".into(), 1.0),
                ("e2".into(), "a".into(), "t".into(), 1.0),
            ],
            vec!["s".into()],
            vec!["t".into()],
            vec![("t".into(), vec!["s".into()])],
        )
        .unwrap();
        let order = instance.topological_order();
        let labels: Vec<&str> = order.iter().map(|&i| instance.node_label(i)).collect();
        assert_eq!(labels, vec!["s", "a", "t"]);

        let code = NetworkCode::new(
            &instance,
            [("s".to_string(), 2)].into(),
            [
                ("e1".to_string(), vec![0, 1]),
                ("e2".to_string(), vec![0, 1]),
            ]
            .into(),
            [("t".to_string(), vec![vec![0], vec![1]])].into(),
        )
        .unwrap();
        let code = derive_globals(&instance, &code).unwrap();
        assert_eq!(code.global("e2").unwrap(), &[0, 1]);
        assert_eq!(
            verify_decoding(&instance, &code).unwrap(),
            DecodingOutcome::Pass
        );
    }

    #[test]
    fn butterfly_bottleneck_is_xor() {
        let (instance, code) = corpus::butterfly();
        let code = derive_globals(&instance, &code).unwrap();
        // bottleneck carries x1 xor x2 over the 4 source tuples
        assert_eq!(code.global("e5").unwrap(), &[0, 1, 1, 0]);
        assert_eq!(
            verify_decoding(&instance, &code).unwrap(),
            DecodingOutcome::Pass
        );
    }

    #[test]
    fn butterfly_without_coding_fails_at_a_specific_tuple() {
        let (instance, code) = corpus::butterfly_forwarding_x1();
        let code = derive_globals(&instance, &code).unwrap();
        let outcome = verify_decoding(&instance, &code).unwrap();
        match outcome {
            DecodingOutcome::Fail {
                terminal,
                source_tuple,
            } => {
                assert_eq!(terminal, "t2");
                // fails on a tuple where x2 cannot be recovered
                assert_eq!(source_tuple, vec![0, 1]);
            }
            DecodingOutcome::Pass => panic!("forwarding-only butterfly must not decode"),
        }
    }

    #[test]
    fn no_demands_trivially_pass() {
        let instance = NetworkInstance::new(
            vec![],
            vec![("e".into(), "s".into(), "t".into(), 1.0)],
            vec!["s".into()],
            vec!["t".into()],
            vec![],
        )
        .unwrap();
        let code = NetworkCode::new(
            &instance,
            [("s".to_string(), 2)].into(),
            [("e".to_string(), vec![0, 1])].into(),
            BTreeMap::new(),
        )
        .unwrap();
        let code = derive_globals(&instance, &code).unwrap();
        assert_eq!(
            verify_decoding(&instance, &code).unwrap(),
            DecodingOutcome::Pass
        );
    }

    #[test]
    fn derive_globals_is_idempotent_and_order_independent() {
        let (instance, code) = corpus::butterfly();
        let once = derive_globals(&instance, &code).unwrap();
        let twice = derive_globals(&instance, &once).unwrap();
        for e in instance.edges() {
            assert_eq!(once.global(&e.id), twice.global(&e.id));
        }

        // oracle: fold the locals along a different valid topological order
        // (reverse tie-break) and compare tables
        let mut order: Vec<usize> = instance.topological_order();
        let mut position = vec![0; instance.node_count()];
        // a valid alternative: stable-sort nodes by position, flipping ties
        // in label order inside each indegree level is hard to do directly,
        // so recompute with a max-heap Kahn pass
        {
            let n = instance.node_count();
            let mut indegree: Vec<usize> = (0..n).map(|v| instance.in_edges[v].len()).collect();
            let mut ready: std::collections::BinaryHeap<usize> =
                (0..n).filter(|&v| indegree[v] == 0).collect();
            order.clear();
            while let Some(v) = ready.pop() {
                order.push(v);
                for &e in &instance.out_edges[v] {
                    let h = instance.edges[e].head;
                    indegree[h] -= 1;
                    if indegree[h] == 0 {
                        ready.push(h);
                    }
                }
            }
        }
        for (pos, &v) in order.iter().enumerate() {
            position[v] = pos;
        }
        let mut edge_order: Vec<usize> = (0..instance.edges().len()).collect();
        edge_order.sort_by_key(|&i| {
            (
                position[instance.edges()[i].tail],
                std::cmp::Reverse(instance.edges()[i].id.clone()),
            )
        });
        let source_labels = instance.source_labels();
        let source_radices = once.source_radices(&instance);
        let mut oracle: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for ei in edge_order {
            let edge = &instance.edges()[ei];
            let local = once.local(&edge.id).unwrap();
            let mut table = Vec::new();
            for idx in 0..radix::domain_size(&source_radices) {
                let tuple = radix::unpack(idx, &source_radices);
                let value = if instance.is_source(edge.tail) {
                    let s = instance.node_label(edge.tail);
                    let pos = source_labels.iter().position(|l| *l == s).unwrap();
                    local[tuple[pos]]
                } else {
                    let in_ids = instance.in_edge_ids(edge.tail);
                    let in_radices: Vec<usize> =
                        in_ids.iter().map(|id| once.alphabet(id).unwrap()).collect();
                    let in_tuple: Vec<usize> = in_ids.iter().map(|id| oracle[*id][idx]).collect();
                    local[radix::pack(&in_tuple, &in_radices)]
                };
                table.push(value);
            }
            oracle.insert(edge.id.clone(), table);
        }
        for e in instance.edges() {
            assert_eq!(
                once.global(&e.id).unwrap(),
                oracle[&e.id].as_slice(),
                "edge {}",
                e.id
            );
        }
    }

    #[test]
    fn source_edge_global_projects_onto_its_source() {
        let (instance, code) = corpus::butterfly();
        let code = derive_globals(&instance, &code).unwrap();
        // sorted sources (s1, s2): s1 is the most significant digit
        assert_eq!(code.global("e1").unwrap(), &[0, 0, 1, 1]);
        assert_eq!(code.global("e2").unwrap(), &[0, 1, 0, 1]);
    }

    #[test]
    fn joint_distribution_examples() {
        let (instance, code) = corpus::butterfly();
        let code = derive_globals(&instance, &code).unwrap();
        let bneck = joint_distribution(&instance, &code, &["e5".into()]).unwrap();
        assert_eq!(bneck.counts(), &[2, 2]);
        assert!((bneck.entropy_bits() - 1.0).abs() < 1e-12);

        let s1 = joint_distribution(&instance, &code, &["s1".into()]).unwrap();
        assert!(s1.is_quasi_uniform());
        assert_eq!(s1.len(), 2);

        // x1 and x1 xor x2 are independent: uniform on 4 pairs
        let pair = joint_distribution(&instance, &code, &["s1".into(), "e5".into()]).unwrap();
        assert_eq!(pair.len(), 4);
        assert!(pair.is_quasi_uniform());
    }

    #[test]
    fn edge_determined_by_incoming_messages() {
        // H(X_e | X_In(u)) = 0 for every edge of the butterfly
        let (instance, code) = corpus::butterfly();
        let code = derive_globals(&instance, &code).unwrap();
        for e in instance.edges() {
            if instance.is_source(e.tail) {
                continue;
            }
            let mut vars: Vec<String> = instance
                .in_edge_ids(e.tail)
                .iter()
                .map(|s| s.to_string())
                .collect();
            let h_in = joint_distribution(&instance, &code, &vars)
                .unwrap()
                .entropy_bits();
            vars.push(e.id.clone());
            let h_joint = joint_distribution(&instance, &code, &vars)
                .unwrap()
                .entropy_bits();
            assert!(
                (h_joint - h_in).abs() < 1e-9,
                "edge {} not determined",
                e.id
            );
        }
    }

    #[test]
    fn source_with_in_edge_rejected() {
        let err = NetworkInstance::new(
            vec!["a".into()],
            vec![("e1".into(), "a".into(), "s".into(), 1.0)],
            vec!["s".into()],
            vec![],
            vec![],
        )
        .unwrap_err();
        assert_eq!(
            err,
            NetError::SourceHasInEdge {
                src: "s".into(),
                edge: "e1".into()
            }
        );
    }

    #[test]
    fn cycle_rejected() {
        let err = NetworkInstance::new(
            vec!["a".into(), "b".into()],
            vec![
                ("e1".into(), "a".into(), "b".into(), 1.0),
                ("e2".into(), "b".into(), "a".into(), 1.0),
            ],
            vec![],
            vec![],
            vec![],
        )
        .unwrap_err();
        assert_eq!(err, NetError::CyclicGraph);
    }

    #[test]
    fn parallel_paths_tie_break_lexicographic() {
        let instance = NetworkInstance::new(
            vec!["b".into(), "a".into()],
            vec![
                ("e1".into(), "s".into(), "a".into(), 1.0),
                ("e2".into(), "s".into(), "b".into(), 1.0),
                ("e3".into(), "a".into(), "t".into(), 1.0),
                ("e4".into(), "b".into(), "t".into(), 1.0),
            ],
            vec!["s".into()],
            vec!["t".into()],
            vec![],
        )
        .unwrap();
        let order = instance.topological_order();
        let labels: Vec<&str> = order.iter().map(|&i| instance.node_label(i)).collect();
        assert_eq!(labels, vec!["s", "a", "b", "t"]);
        // order respects all edges
        let pos: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        for e in instance.edges() {
            assert!(pos[instance.node_label(e.tail)] < pos[instance.node_label(e.head)]);
        }
    }
}
