//! Linear network codes over prime fields: rank, the local<->global
//! conversions of the matrix route, and the induced distributions.
//!
//! Globals are matrices N_e with x_e = x_S N_e for the concatenated source
//! row vector x_S (sources in sorted label order); locals are matrices
//! M_(e',e) with x_e = sum over e' in In(u) of x_e' M_(e',e). Source edges
//! take the source block itself as their single input.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::dist::ExactDistribution;
use crate::net::{NetError, NetworkCode, NetworkInstance};
use crate::parse_util::{parse_usize, tokenized_lines, ParseError};
use crate::radix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("dimension mismatch at edge {edge}: {detail}")]
    DimensionMismatch { edge: String, detail: String },
    #[error("edge {edge}: rank condition violated (rank N_In = {rank_in}, rank [N_In N_e] = {rank_aug})")]
    RankConditionViolated {
        edge: String,
        rank_in: usize,
        rank_aug: usize,
    },
    #[error("missing global matrix for edge {0}")]
    MissingGlobal(String),
    #[error("missing local matrix for edge {edge} input {input}")]
    MissingLocalMatrix { edge: String, input: String },
    #[error("source {0} has no dimension")]
    MissingSourceDim(String),
}

fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A dense matrix over GF(q), q prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfMatrix {
    q: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl GfMatrix {
    pub fn new(q: u64, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self, LinError> {
        if !is_prime(q) {
            return Err(LinError::NonPrimeModulus(q));
        }
        assert_eq!(data.len(), rows * cols, "matrix data must fill rows x cols");
        let data = data.into_iter().map(|v| v % q).collect();
        Ok(GfMatrix {
            q,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(q: u64, rows: usize, cols: usize) -> Result<Self, LinError> {
        Self::new(q, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(q: u64, n: usize) -> Result<Self, LinError> {
        let mut m = Self::zeros(q, n, n)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.q;
    }

    pub fn matmul(&self, other: &GfMatrix) -> GfMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        assert_eq!(self.q, other.q);
        let mut out = GfMatrix {
            q: self.q,
            rows: self.rows,
            cols: other.cols,
            data: vec![0; self.rows * other.cols],
        };
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = (out.get(i, j) + a * other.get(k, j)) % self.q;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &GfMatrix) -> GfMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a + b) % self.q)
            .collect();
        GfMatrix {
            q: self.q,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &GfMatrix) -> GfMatrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.q, other.q);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(&self.data[r * self.cols..(r + 1) * self.cols]);
            data.extend_from_slice(&other.data[r * other.cols..(r + 1) * other.cols]);
        }
        GfMatrix {
            q: self.q,
            rows: self.rows,
            cols,
            data,
        }
    }

    /// Row slice of consecutive rows.
    pub fn row_block(&self, start: usize, count: usize) -> GfMatrix {
        let data = self.data[start * self.cols..(start + count) * self.cols].to_vec();
        GfMatrix {
            q: self.q,
            rows: count,
            cols: self.cols,
            data,
        }
    }

    /// x * self for a row vector x.
    pub fn apply_row(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![0u64; self.cols];
        for (r, &xv) in x.iter().enumerate() {
            if xv == 0 {
                continue;
            }
            for (c, slot) in out.iter_mut().enumerate() {
                *slot = (*slot + xv * self.get(r, c)) % self.q;
            }
        }
        out
    }

    fn inv_scalar(&self, a: u64) -> u64 {
        // Fermat: a^(q-2) mod q
        let mut result = 1u64;
        let mut base = a % self.q;
        let mut e = self.q - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % self.q;
            }
            base = base * base % self.q;
            e >>= 1;
        }
        result
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pivot_row) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pivot_row != row {
                for c in 0..self.cols {
                    let tmp = self.get(row, c);
                    self.set(row, c, self.get(pivot_row, c));
                    self.set(pivot_row, c, tmp);
                }
            }
            let inv = self.inv_scalar(self.get(row, col));
            for c in 0..self.cols {
                self.set(row, c, self.get(row, c) * inv % self.q);
            }
            for r in 0..self.rows {
                if r != row && self.get(r, col) != 0 {
                    let factor = self.get(r, col);
                    for c in 0..self.cols {
                        let v = (self.get(r, c) + (self.q - factor) * self.get(row, c)) % self.q;
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut copy = self.clone();
        copy.rref().len()
    }
}

/// Rank over GF(q) by row reduction.
pub fn matrix_rank(m: &GfMatrix) -> usize {
    m.rank()
}

/// Solves A X = B for X; on failure returns (rank A, rank [A|B]).
pub fn solve_right(a: &GfMatrix, b: &GfMatrix) -> Result<GfMatrix, (usize, usize)> {
    assert_eq!(a.rows, b.rows);
    let mut aug = a.hstack(b);
    let pivots = aug.rref();
    let rank_a = pivots.iter().filter(|&&c| c < a.cols).count();
    let rank_aug = pivots.len();
    if rank_aug > rank_a {
        return Err((rank_a, rank_aug));
    }
    let mut x = GfMatrix {
        q: a.q,
        rows: a.cols,
        cols: b.cols,
        data: vec![0; a.cols * b.cols],
    };
    for (row, &col) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x.set(col, j, aug.get(row, a.cols + j));
        }
    }
    Ok(x)
}

/// A linear network code: global matrices per edge, local matrices per
/// (edge, incoming variable) pair, all over one prime field.
#[derive(Clone, Debug)]
pub struct LinearCode {
    pub q: u64,
    /// Row dimension contributed by each source, sorted by label elsewhere.
    pub source_dims: BTreeMap<String, usize>,
    pub globals: BTreeMap<String, GfMatrix>,
    pub locals: BTreeMap<String, BTreeMap<String, GfMatrix>>,
}

impl LinearCode {
    pub fn total_source_dim(&self, instance: &NetworkInstance) -> Result<usize, LinError> {
        let mut total = 0;
        for s in instance.source_labels() {
            total += self
                .source_dims
                .get(s)
                .ok_or_else(|| LinError::MissingSourceDim(s.to_string()))?;
        }
        Ok(total)
    }

    /// Byte offset of a source's block in the concatenated row vector.
    pub fn source_offset(
        &self,
        instance: &NetworkInstance,
        source: &str,
    ) -> Result<usize, LinError> {
        let mut offset = 0;
        for s in instance.source_labels() {
            if s == source {
                return Ok(offset);
            }
            offset += self
                .source_dims
                .get(s)
                .ok_or_else(|| LinError::MissingSourceDim(s.to_string()))?;
        }
        Err(LinError::MissingSourceDim(source.to_string()))
    }

    /// The n x dim_s selection matrix E_s with x_S E_s = x_s.
    pub fn source_selector(
        &self,
        instance: &NetworkInstance,
        source: &str,
    ) -> Result<GfMatrix, LinError> {
        let n = self.total_source_dim(instance)?;
        let offset = self.source_offset(instance, source)?;
        let dim = self.source_dims[source];
        let mut m = GfMatrix::zeros(self.q, n, dim)?;
        for i in 0..dim {
            m.set(offset + i, i, 1);
        }
        Ok(m)
    }

    /// The stacked matrix [N_v1 ... N_vk] for a list of variables; source
    /// variables contribute their selection matrices.
    pub fn stacked(
        &self,
        instance: &NetworkInstance,
        vars: &[String],
    ) -> Result<GfMatrix, LinError> {
        let n = self.total_source_dim(instance)?;
        let mut acc = GfMatrix::zeros(self.q, n, 0)?;
        for v in vars {
            let m = if self.source_dims.contains_key(v) {
                self.source_selector(instance, v)?
            } else {
                self.globals
                    .get(v)
                    .ok_or_else(|| LinError::MissingGlobal(v.clone()))?
                    .clone()
            };
            acc = acc.hstack(&m);
        }
        Ok(acc)
    }
}

/// Builds global matrices from local ones along a topological order
/// (N_e = sum of N_e' M_e').
pub fn linear_local_to_global(
    instance: &NetworkInstance,
    code: &LinearCode,
) -> Result<LinearCode, LinError> {
    let n = code.total_source_dim(instance)?;
    let mut globals: BTreeMap<String, GfMatrix> = BTreeMap::new();
    for ei in instance.edges_in_topological_order() {
        let edge = &instance.edges()[ei];
        let locals = code
            .locals
            .get(&edge.id)
            .ok_or_else(|| LinError::MissingLocalMatrix {
                edge: edge.id.clone(),
                input: "*".into(),
            })?;
        let inputs: Vec<String> = if instance.is_source(edge.tail) {
            vec![instance.node_label(edge.tail).to_string()]
        } else {
            instance
                .in_edge_ids(edge.tail)
                .iter()
                .map(|s| s.to_string())
                .collect()
        };
        let mut acc: Option<GfMatrix> = None;
        for input in &inputs {
            let m = locals
                .get(input)
                .ok_or_else(|| LinError::MissingLocalMatrix {
                    edge: edge.id.clone(),
                    input: input.clone(),
                })?;
            let upstream = if instance.is_source(edge.tail) {
                code.source_selector(instance, input)?
            } else {
                globals[input].clone()
            };
            if upstream.cols() != m.rows() {
                return Err(LinError::DimensionMismatch {
                    edge: edge.id.clone(),
                    detail: format!(
                        "input {input}: {} columns feed {} rows",
                        upstream.cols(),
                        m.rows()
                    ),
                });
            }
            let term = upstream.matmul(m);
            acc = Some(match acc {
                None => term,
                Some(prev) => {
                    if prev.cols() != term.cols() {
                        return Err(LinError::DimensionMismatch {
                            edge: edge.id.clone(),
                            detail: "local matrices disagree on the edge dimension".into(),
                        });
                    }
                    prev.add(&term)
                }
            });
        }
        let acc = acc.ok_or_else(|| LinError::DimensionMismatch {
            edge: edge.id.clone(),
            detail: "no inputs".into(),
        })?;
        debug_assert_eq!(acc.rows(), n);
        globals.insert(edge.id.clone(), acc);
    }
    Ok(LinearCode {
        q: code.q,
        source_dims: code.source_dims.clone(),
        globals,
        locals: code.locals.clone(),
    })
}

/// Solves N_In(u) M = N_e at every edge. Succeeds exactly when the
/// rank condition rank(N_In(u), N_e) = rank(N_In(u)) holds; the recovered
/// locals reproduce the globals.
pub fn linear_global_to_local(
    instance: &NetworkInstance,
    code: &LinearCode,
) -> Result<LinearCode, LinError> {
    let mut locals: BTreeMap<String, BTreeMap<String, GfMatrix>> = BTreeMap::new();
    for edge in instance.edges() {
        let n_e = code
            .globals
            .get(&edge.id)
            .ok_or_else(|| LinError::MissingGlobal(edge.id.clone()))?;
        let inputs: Vec<String> = if instance.is_source(edge.tail) {
            vec![instance.node_label(edge.tail).to_string()]
        } else {
            instance
                .in_edge_ids(edge.tail)
                .iter()
                .map(|s| s.to_string())
                .collect()
        };
        let n_in = code.stacked(instance, &inputs)?;
        let solution = solve_right(&n_in, n_e).map_err(|(rank_in, rank_aug)| {
            LinError::RankConditionViolated {
                edge: edge.id.clone(),
                rank_in,
                rank_aug,
            }
        })?;
        let mut per_input = BTreeMap::new();
        let mut row = 0;
        for input in &inputs {
            let dim = if let Some(&d) = code.source_dims.get(input) {
                d
            } else {
                code.globals[input].cols()
            };
            per_input.insert(input.clone(), solution.row_block(row, dim));
            row += dim;
        }
        locals.insert(edge.id.clone(), per_input);
    }
    Ok(LinearCode {
        q: code.q,
        source_dims: code.source_dims.clone(),
        globals: code.globals.clone(),
        locals,
    })
}

fn vector_to_symbol(v: &[u64], q: u64) -> usize {
    v.iter()
        .fold(0usize, |acc, &d| acc * q as usize + d as usize)
}

fn symbol_to_vector(mut s: usize, q: u64, dim: usize) -> Vec<u64> {
    let mut out = vec![0u64; dim];
    for slot in out.iter_mut().rev() {
        *slot = (s % q as usize) as u64;
        s /= q as usize;
    }
    out
}

/// Realizes the linear locals as explicit lookup tables; symbols are
/// radix-q encodings of the row vectors, alphabets q^dim.
pub fn to_table_code(
    instance: &NetworkInstance,
    code: &LinearCode,
) -> Result<NetworkCode, LinError> {
    let q = code.q;
    let mut source_alphabets = BTreeMap::new();
    for s in instance.source_labels() {
        let dim = code
            .source_dims
            .get(s)
            .ok_or_else(|| LinError::MissingSourceDim(s.to_string()))?;
        source_alphabets.insert(s.to_string(), (q as usize).pow(*dim as u32));
    }
    let mut edge_alphabets = BTreeMap::new();
    let mut edge_dims: BTreeMap<String, usize> = BTreeMap::new();
    for ei in instance.edges_in_topological_order() {
        let edge = &instance.edges()[ei];
        let locals = code
            .locals
            .get(&edge.id)
            .ok_or_else(|| LinError::MissingLocalMatrix {
                edge: edge.id.clone(),
                input: "*".into(),
            })?;
        let dim = locals.values().next().map(|m| m.cols()).unwrap_or(0);
        edge_dims.insert(edge.id.clone(), dim);
        edge_alphabets.insert(edge.id.clone(), (q as usize).pow(dim as u32));
    }
    let mut locals: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for edge in instance.edges() {
        let matrices = &code.locals[&edge.id];
        let inputs: Vec<(String, usize)> = if instance.is_source(edge.tail) {
            let s = instance.node_label(edge.tail).to_string();
            let dim = code.source_dims[&s];
            vec![(s, dim)]
        } else {
            instance
                .in_edge_ids(edge.tail)
                .iter()
                .map(|id| (id.to_string(), edge_dims[*id]))
                .collect()
        };
        let radices: Vec<usize> = inputs
            .iter()
            .map(|(_, d)| (q as usize).pow(*d as u32))
            .collect();
        let mut table = Vec::with_capacity(radix::domain_size(&radices));
        for idx in 0..radix::domain_size(&radices) {
            let symbols = radix::unpack(idx, &radices);
            let mut acc = vec![0u64; edge_dims[&edge.id]];
            for ((input, dim), symbol) in inputs.iter().zip(symbols) {
                let m = matrices
                    .get(input)
                    .ok_or_else(|| LinError::MissingLocalMatrix {
                        edge: edge.id.clone(),
                        input: input.clone(),
                    })?;
                let v = symbol_to_vector(symbol, q, *dim);
                let term = m.apply_row(&v);
                for (a, t) in acc.iter_mut().zip(term) {
                    *a = (*a + t) % q;
                }
            }
            table.push(vector_to_symbol(&acc, q));
        }
        locals.insert(edge.id.clone(), table);
    }
    Ok(NetworkCode::with_edge_alphabets(
        instance,
        source_alphabets,
        edge_alphabets,
        locals,
        BTreeMap::new(),
    )?)
}

/// Joint distribution of the listed variables under uniform sources,
/// straight from the global matrices; denominator q^n.
pub fn linear_joint_distribution(
    instance: &NetworkInstance,
    code: &LinearCode,
    vars: &[String],
) -> Result<ExactDistribution, LinError> {
    let n = code.total_source_dim(instance)?;
    let q = code.q;
    let mut matrices = Vec::new();
    for v in vars {
        let m = if code.source_dims.contains_key(v) {
            code.source_selector(instance, v)?
        } else {
            code.globals
                .get(v)
                .ok_or_else(|| LinError::MissingGlobal(v.clone()))?
                .clone()
        };
        matrices.push(m);
    }
    let total = (q as usize).pow(n as u32);
    let mut counter: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for idx in 0..total {
        let x = symbol_to_vector(idx, q, n);
        let key: Vec<usize> = matrices
            .iter()
            .map(|m| vector_to_symbol(&m.apply_row(&x), q))
            .collect();
        *counter.entry(key).or_insert(0) += 1;
    }
    Ok(ExactDistribution::from_counts(counter, total as u64))
}

/// Linear code file format:
///
/// ```text
/// linear <name>
/// field <q>
/// source <label> <dim>
/// global <edge> <rows>x<cols> <entries row-major>
/// local <edge> <in-var> <rows>x<cols> <entries row-major>
/// ```
pub fn parse_linear_file(text: &str) -> Result<LinearCode, LinError> {
    let mut q: Option<u64> = None;
    let mut source_dims = BTreeMap::new();
    let mut globals = BTreeMap::new();
    let mut locals: BTreeMap<String, BTreeMap<String, GfMatrix>> = BTreeMap::new();
    let parse_matrix = |tokens: &[&str], line: usize, q: u64| -> Result<GfMatrix, LinError> {
        let (dims, entries) = tokens
            .split_first()
            .ok_or_else(|| ParseError::new(line, "missing dimensions"))?;
        let (r, c) = dims
            .split_once('x')
            .ok_or_else(|| ParseError::new(line, "dimensions must look like 2x3"))?;
        let rows = parse_usize(r, line, "row count")?;
        let cols = parse_usize(c, line, "column count")?;
        if entries.len() != rows * cols {
            return Err(ParseError::new(
                line,
                format!("expected {} entries, got {}", rows * cols, entries.len()),
            )
            .into());
        }
        let data: Vec<u64> = entries
            .iter()
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| ParseError::new(line, format!("bad entry '{t}'")))
            })
            .collect::<Result<_, _>>()?;
        GfMatrix::new(q, rows, cols, data)
    };
    for (line, tokens) in tokenized_lines(text) {
        match tokens[0] {
            "linear" => {}
            "field" => {
                if tokens.len() != 2 {
                    return Err(ParseError::new(line, "expected 'field <q>'").into());
                }
                let modulus = tokens[1]
                    .parse::<u64>()
                    .map_err(|_| ParseError::new(line, "field modulus must be an integer"))?;
                if !is_prime(modulus) {
                    return Err(LinError::NonPrimeModulus(modulus));
                }
                q = Some(modulus);
            }
            "source" => {
                if tokens.len() != 3 {
                    return Err(ParseError::new(line, "expected 'source <label> <dim>'").into());
                }
                source_dims.insert(
                    tokens[1].to_string(),
                    parse_usize(tokens[2], line, "dimension")?,
                );
            }
            "global" => {
                let q = q.ok_or_else(|| ParseError::new(line, "'field' must come first"))?;
                if tokens.len() < 3 {
                    return Err(ParseError::new(
                        line,
                        "expected 'global <edge> <rows>x<cols> ...'",
                    )
                    .into());
                }
                globals.insert(tokens[1].to_string(), parse_matrix(&tokens[2..], line, q)?);
            }
            "local" => {
                let q = q.ok_or_else(|| ParseError::new(line, "'field' must come first"))?;
                if tokens.len() < 4 {
                    return Err(ParseError::new(
                        line,
                        "expected 'local <edge> <in-var> <rows>x<cols> ...'",
                    )
                    .into());
                }
                locals
                    .entry(tokens[1].to_string())
                    .or_default()
                    .insert(tokens[2].to_string(), parse_matrix(&tokens[3..], line, q)?);
            }
            other => {
                return Err(ParseError::new(line, format!("unknown directive '{other}'")).into())
            }
        }
    }
    let q = q.ok_or_else(|| ParseError::new(1, "missing 'field' line"))?;
    Ok(LinearCode {
        q,
        source_dims,
        globals,
        locals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::net;

    fn m(q: u64, rows: usize, cols: usize, data: &[u64]) -> GfMatrix {
        GfMatrix::new(q, rows, cols, data.to_vec()).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(matrix_rank(&GfMatrix::zeros(2, 2, 2).unwrap()), 0);
        assert_eq!(matrix_rank(&GfMatrix::identity(2, 2).unwrap()), 2);
        assert_eq!(matrix_rank(&m(2, 2, 2, &[1, 1, 1, 1])), 1);
        // mod 5: [[1,2],[2,4]] has rank 1
        assert_eq!(matrix_rank(&m(5, 2, 2, &[1, 2, 2, 4])), 1);
    }

    #[test]
    fn non_prime_modulus_rejected() {
        assert_eq!(
            GfMatrix::new(4, 1, 1, vec![1]).unwrap_err(),
            LinError::NonPrimeModulus(4)
        );
    }

    #[test]
    fn solve_right_consistency() {
        let a = m(2, 2, 1, &[1, 0]);
        let b = m(2, 2, 1, &[1, 0]);
        let x = solve_right(&a, &b).unwrap();
        assert_eq!(a.matmul(&x), b);

        // N_In = [1;0], N_e = [0;1]: the edge column lies outside the
        // column space of the incoming stack
        let a = m(2, 2, 1, &[1, 0]);
        let b = m(2, 2, 1, &[0, 1]);
        let (rank_in, rank_aug) = solve_right(&a, &b).unwrap_err();
        assert_eq!((rank_in, rank_aug), (1, 2));
    }

    fn butterfly_linear() -> (NetworkInstance, LinearCode) {
        let instance = corpus::butterfly_instance();
        let one = m(2, 1, 1, &[1]);
        let mut locals: BTreeMap<String, BTreeMap<String, GfMatrix>> = BTreeMap::new();
        let single = |input: &str| -> BTreeMap<String, GfMatrix> {
            [(input.to_string(), one.clone())].into()
        };
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
        (instance, code)
    }

    #[test]
    fn butterfly_locals_to_globals() {
        let (instance, code) = butterfly_linear();
        let with_globals = linear_local_to_global(&instance, &code).unwrap();
        // bottleneck N_e5 = [1;1]: x1 + x2
        assert_eq!(with_globals.globals["e5"], m(2, 2, 1, &[1, 1]));
        assert_eq!(with_globals.globals["e6"], m(2, 2, 1, &[1, 0]));

        // the table realization agrees with derive_globals
        let table_code = to_table_code(&instance, &with_globals).unwrap();
        let derived = net::derive_globals(&instance, &table_code).unwrap();
        for e in instance.edges() {
            let n_e = &with_globals.globals[&e.id];
            let expected: Vec<usize> = (0..4)
                .map(|idx| {
                    let x = symbol_to_vector(idx, 2, 2);
                    vector_to_symbol(&n_e.apply_row(&x), 2)
                })
                .collect();
            assert_eq!(
                derived.global(&e.id).unwrap(),
                expected.as_slice(),
                "edge {}",
                e.id
            );
        }
    }

    #[test]
    fn butterfly_globals_back_to_locals() {
        let (instance, code) = butterfly_linear();
        let with_globals = linear_local_to_global(&instance, &code).unwrap();
        let stripped = LinearCode {
            q: 2,
            source_dims: with_globals.source_dims.clone(),
            globals: with_globals.globals.clone(),
            locals: BTreeMap::new(),
        };
        let recovered = linear_global_to_local(&instance, &stripped).unwrap();
        // bottleneck locals are all [1]
        assert_eq!(recovered.locals["e5"]["e3"], m(2, 1, 1, &[1]));
        assert_eq!(recovered.locals["e5"]["e4"], m(2, 1, 1, &[1]));
        // recomposing reproduces the globals exactly
        let recomposed = linear_local_to_global(&instance, &recovered).unwrap();
        for e in instance.edges() {
            assert_eq!(recomposed.globals[&e.id], with_globals.globals[&e.id]);
        }
    }

    #[test]
    fn zero_global_yields_zero_locals() {
        let instance = NetworkInstance::new(
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
        let code = LinearCode {
            q: 2,
            source_dims: [("s".to_string(), 1)].into(),
            globals: [
                ("e1".to_string(), m(2, 1, 1, &[1])),
                ("e2".to_string(), m(2, 1, 1, &[0])),
            ]
            .into(),
            locals: BTreeMap::new(),
        };
        let recovered = linear_global_to_local(&instance, &code).unwrap();
        assert_eq!(recovered.locals["e2"]["e1"], m(2, 1, 1, &[0]));
    }

    #[test]
    fn rank_violation_on_artificial_gadget() {
        // single internal node with one in-edge whose global is [1 0] and an
        // out-edge demanding [0 1]
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
        .unwrap();
        let code = LinearCode {
            q: 2,
            source_dims: [("s".to_string(), 2)].into(),
            globals: [
                ("e1".to_string(), m(2, 2, 1, &[1, 0])),
                ("e2".to_string(), m(2, 2, 1, &[0, 1])),
            ]
            .into(),
            locals: BTreeMap::new(),
        };
        let err = linear_global_to_local(&instance, &code).unwrap_err();
        assert_eq!(
            err,
            LinError::RankConditionViolated {
                edge: "e2".into(),
                rank_in: 1,
                rank_aug: 2
            }
        );
    }

    #[test]
    fn entropy_equals_rank_times_log_q() {
        let (instance, code) = butterfly_linear();
        let code = linear_local_to_global(&instance, &code).unwrap();
        for vars in [
            vec!["s1".to_string()],
            vec!["e5".to_string()],
            vec!["s1".to_string(), "e5".to_string()],
            vec!["e3".to_string(), "e4".to_string(), "e5".to_string()],
        ] {
            let h = linear_joint_distribution(&instance, &code, &vars)
                .unwrap()
                .entropy_bits();
            let rank = matrix_rank(&code.stacked(&instance, &vars).unwrap());
            assert!((h - rank as f64).abs() < 1e-9, "vars {vars:?}");
        }
    }

    #[test]
    fn gf3_entropy_scales_by_log2_3() {
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
        .unwrap();
        let code = LinearCode {
            q: 3,
            source_dims: [("s".to_string(), 2)].into(),
            globals: [
                ("e1".to_string(), m(3, 2, 2, &[1, 0, 0, 1])),
                ("e2".to_string(), m(3, 2, 1, &[1, 2])),
            ]
            .into(),
            locals: BTreeMap::new(),
        };
        let h = linear_joint_distribution(&instance, &code, &["e2".to_string()])
            .unwrap()
            .entropy_bits();
        assert!((h - 3f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn parse_linear_roundtrip() {
        let text = "linear demo\nfield 2\nsource s1 1\nsource s2 1\nglobal e5 2x1 1 1\nlocal e5 e3 1x1 1\nlocal e5 e4 1x1 1\n";
        let code = parse_linear_file(text).unwrap();
        assert_eq!(code.q, 2);
        assert_eq!(code.globals["e5"], m(2, 2, 1, &[1, 1]));
        assert_eq!(code.locals["e5"]["e4"], m(2, 1, 1, &[1]));
    }
}
