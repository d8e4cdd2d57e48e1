//! Vertex-weighted undirected graphs and the DIMACS `.clq` reader/writer.
//!
//! Vertices are `0..n` internally and `1..=n` in every file format and in
//! user-facing output.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};

use thiserror::Error;

/// Vertex weights and clique-weight accumulators.
pub type Weight = i64;

/// Internal vertex id.
pub type Vertex = u32;

/// Bit-matrix is used when `n` is at most this many vertices...
const DENSE_MAX_VERTICES: usize = 20_000;
/// ...and the edge density exceeds this fraction.
const DENSE_MIN_DENSITY: f64 = 0.01;

/// Modular weighting rule for unweighted benchmark graphs, `(i mod 200) + 1`
/// for the 1-based vertex index `i`.
pub fn default_weight(one_based: usize) -> Weight {
    (one_based % 200) as Weight + 1
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed header")]
    MalformedHeader,
    #[error("duplicate header")]
    DuplicateHeader,
    #[error("missing header")]
    MissingHeader,
    #[error("edge line before header")]
    EdgeBeforeHeader,
    #[error("weight line before header")]
    WeightBeforeHeader,
    #[error("malformed edge line")]
    MalformedEdge,
    #[error("malformed weight line")]
    MalformedWeight,
    #[error("vertex id out of range")]
    VertexOutOfRange,
    #[error("non-positive weight")]
    NonPositiveWeight,
    #[error("unknown line type")]
    UnknownLine,
    #[error("total vertex weight overflows 64 bits")]
    WeightOverflow,
    #[error("i/o error: {0}")]
    Io(String),
}

/// A parse failure with the 1-based line it occurred on (0 when the error is
/// not tied to a single line, e.g. a missing header).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind}, line {line}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
}

impl ParseError {
    fn at(kind: ParseErrorKind, line: usize) -> Self {
        ParseError { kind, line }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} out of range for a graph with {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("weight of vertex {0} must be at least 1, got {1}")]
    NonPositiveWeight(usize, Weight),
    #[error("weight vector has length {0}, expected {1}")]
    WeightLength(usize, usize),
    #[error("total vertex weight overflows 64 bits")]
    WeightOverflow,
}

#[derive(Debug, Clone)]
enum Adjacency {
    /// Row-major bit matrix, `words_per_row` u64 words per vertex.
    Dense {
        words_per_row: usize,
        bits: Vec<u64>,
    },
    Sparse(Vec<HashSet<Vertex>>),
}

/// Immutable undirected graph with positive integer vertex weights.
#[derive(Debug, Clone)]
pub struct VertexWeightedGraph {
    n: usize,
    m: usize,
    neighbors: Vec<Vec<Vertex>>,
    adjacency: Adjacency,
    weights: Vec<Weight>,
    explicit: Vec<bool>,
}

impl PartialEq for VertexWeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.m == other.m && self.neighbors == other.neighbors && self.weights == other.weights
    }
}

impl Eq for VertexWeightedGraph {}

impl VertexWeightedGraph {
    /// Builds a graph from 0-based edges. Self-loops and duplicates are
    /// dropped. `weights`, when given, are explicit for every vertex;
    /// otherwise the modular default applies.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], weights: Option<Vec<Weight>>) -> Result<Self, GraphError> {
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange(x, n));
                }
            }
        }
        let (weights, explicit) = match weights {
            Some(w) => {
                if w.len() != n {
                    return Err(GraphError::WeightLength(w.len(), n));
                }
                if let Some((i, &bad)) = w.iter().enumerate().find(|(_, &x)| x < 1) {
                    return Err(GraphError::NonPositiveWeight(i, bad));
                }
                (w, vec![true; n])
            }
            None => ((1..=n).map(default_weight).collect(), vec![false; n]),
        };
        Self::assemble(n, edges.iter().copied(), weights, explicit)
    }

    fn assemble(
        n: usize,
        edges: impl Iterator<Item = (usize, usize)>,
        weights: Vec<Weight>,
        explicit: Vec<bool>,
    ) -> Result<Self, GraphError> {
        weights.iter().try_fold(0 as Weight, |acc, &w| acc.checked_add(w)).ok_or(GraphError::WeightOverflow)?;

        let mut neighbors: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                continue;
            }
            neighbors[u].push(v as Vertex);
            neighbors[v].push(u as Vertex);
        }
        for row in &mut neighbors {
            row.sort_unstable();
            row.dedup();
        }
        let m = neighbors.iter().map(Vec::len).sum::<usize>() / 2;

        let pairs = if n > 1 { n as f64 * (n as f64 - 1.0) / 2.0 } else { 1.0 };
        let density = m as f64 / pairs;
        let adjacency = if n <= DENSE_MAX_VERTICES && density > DENSE_MIN_DENSITY {
            let words_per_row = n.div_ceil(64);
            let mut bits = vec![0u64; words_per_row * n];
            for (u, row) in neighbors.iter().enumerate() {
                for &v in row {
                    let v = v as usize;
                    bits[u * words_per_row + v / 64] |= 1u64 << (v % 64);
                }
            }
            Adjacency::Dense { words_per_row, bits }
        } else {
            Adjacency::Sparse(neighbors.iter().map(|row| row.iter().copied().collect()).collect())
        };

        Ok(VertexWeightedGraph { n, m, neighbors, adjacency, weights, explicit })
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.neighbors[v as usize]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors[v as usize].len()
    }

    #[inline]
    pub fn weight(&self, v: Vertex) -> Weight {
        self.weights[v as usize]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    /// Whether vertex `v` carries a weight from a `v` line (or an explicit
    /// weight vector) rather than the modular default.
    pub fn has_explicit_weight(&self, v: Vertex) -> bool {
        self.explicit[v as usize]
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.adjacency, Adjacency::Dense { .. })
    }

    /// O(1) edge test.
    #[inline]
    pub fn is_edge(&self, u: Vertex, v: Vertex) -> bool {
        match &self.adjacency {
            Adjacency::Dense { words_per_row, bits } => {
                let (u, v) = (u as usize, v as usize);
                bits[u * words_per_row + v / 64] >> (v % 64) & 1 == 1
            }
            Adjacency::Sparse(sets) => sets[u as usize].contains(&v),
        }
    }

    /// Calls `f` for every vertex `u != v` that is not adjacent to `v`.
    pub fn for_each_non_neighbor(&self, v: Vertex, mut f: impl FnMut(Vertex)) {
        match &self.adjacency {
            Adjacency::Dense { words_per_row, bits } => {
                let row = &bits[v as usize * words_per_row..][..*words_per_row];
                for (wi, &word) in row.iter().enumerate() {
                    let mut missing = !word;
                    if wi == words_per_row - 1 && !self.n.is_multiple_of(64) {
                        missing &= (1u64 << (self.n % 64)) - 1;
                    }
                    while missing != 0 {
                        let bit = missing.trailing_zeros() as usize;
                        missing &= missing - 1;
                        let u = (wi * 64 + bit) as Vertex;
                        if u != v {
                            f(u);
                        }
                    }
                }
            }
            Adjacency::Sparse(sets) => {
                let set = &sets[v as usize];
                for u in 0..self.n as Vertex {
                    if u != v && !set.contains(&u) {
                        f(u);
                    }
                }
            }
        }
    }

    /// Whether `vertices` is pairwise adjacent (with no repeats).
    pub fn is_clique(&self, vertices: &[Vertex]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| (u as usize) < self.n && vertices[i + 1..].iter().all(|&v| u != v && self.is_edge(u, v)))
    }

    /// Sum of vertex weights, `None` on overflow (unreachable for graphs
    /// built through this module, whose total weight fits in 64 bits).
    pub fn weight_of(&self, vertices: &[Vertex]) -> Option<Weight> {
        vertices.iter().try_fold(0 as Weight, |acc, &v| acc.checked_add(self.weight(v)))
    }

    /// Assigns the modular default weight to every vertex lacking an
    /// explicit one. Idempotent.
    pub fn apply_default_weights(mut self) -> Self {
        for (i, w) in self.weights.iter_mut().enumerate() {
            if !self.explicit[i] {
                *w = default_weight(i + 1);
            }
        }
        self
    }

    /// Discards explicit weights and applies the modular rule everywhere.
    pub fn with_modular_weights(mut self) -> Self {
        self.explicit.iter_mut().for_each(|e| *e = false);
        self.apply_default_weights()
    }

    /// Edges as 0-based `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().filter(move |&&v| v as usize > u).map(move |&v| (u as Vertex, v)))
    }

    /// DIMACS text with `v` lines for every weight that differs from the
    /// modular default.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::with_capacity(16 * (self.m + self.n / 8 + 1));
        let _ = writeln!(out, "p edge {} {}", self.n, self.m);
        for (i, &w) in self.weights.iter().enumerate() {
            if w != default_weight(i + 1) {
                let _ = writeln!(out, "v {} {}", i + 1, w);
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "e {} {}", u + 1, v + 1);
        }
        out
    }
}

/// Parses DIMACS ASCII `.clq` text: `c` comments, one `p edge n m` (or
/// `p col n m`) header, `e u v` edges and optional `v u w` weights.
pub fn parse_dimacs<R: Read>(reader: R) -> Result<VertexWeightedGraph, ParseError> {
    let mut n: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut weights: Vec<Option<Weight>> = Vec::new();
    let mut last_line = 0;

    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = line.map_err(|e| ParseError::at(ParseErrorKind::Io(e.to_string()), line_no))?;
        let mut tokens = line.split_whitespace();
        let Some(tag) = tokens.next() else { continue };
        match tag {
            "c" => {}
            "p" => {
                if n.is_some() {
                    return Err(ParseError::at(ParseErrorKind::DuplicateHeader, line_no));
                }
                let format = tokens.next();
                let count = tokens.next().and_then(|t| t.parse::<usize>().ok());
                let declared_m = tokens.next().and_then(|t| t.parse::<usize>().ok());
                match (format, count, declared_m, tokens.next()) {
                    (Some("edge" | "col"), Some(count), Some(_), None) => {
                        n = Some(count);
                        weights = vec![None; count];
                        edges.reserve(declared_m.unwrap_or(0).min(1 << 24));
                    }
                    _ => return Err(ParseError::at(ParseErrorKind::MalformedHeader, line_no)),
                }
            }
            "e" => {
                let n = n.ok_or(ParseError::at(ParseErrorKind::EdgeBeforeHeader, line_no))?;
                let (u, v) = match (tokens.next(), tokens.next(), tokens.next()) {
                    (Some(a), Some(b), None) => match (a.parse::<usize>(), b.parse::<usize>()) {
                        (Ok(u), Ok(v)) => (u, v),
                        _ => return Err(ParseError::at(ParseErrorKind::MalformedEdge, line_no)),
                    },
                    _ => return Err(ParseError::at(ParseErrorKind::MalformedEdge, line_no)),
                };
                if u < 1 || u > n || v < 1 || v > n {
                    return Err(ParseError::at(ParseErrorKind::VertexOutOfRange, line_no));
                }
                edges.push((u - 1, v - 1));
            }
            "v" | "n" => {
                let n = n.ok_or(ParseError::at(ParseErrorKind::WeightBeforeHeader, line_no))?;
                let (u, w) = match (tokens.next(), tokens.next(), tokens.next()) {
                    (Some(a), Some(b), None) => match (a.parse::<usize>(), b.parse::<Weight>()) {
                        (Ok(u), Ok(w)) => (u, w),
                        _ => return Err(ParseError::at(ParseErrorKind::MalformedWeight, line_no)),
                    },
                    _ => return Err(ParseError::at(ParseErrorKind::MalformedWeight, line_no)),
                };
                if u < 1 || u > n {
                    return Err(ParseError::at(ParseErrorKind::VertexOutOfRange, line_no));
                }
                if w < 1 {
                    return Err(ParseError::at(ParseErrorKind::NonPositiveWeight, line_no));
                }
                weights[u - 1] = Some(w);
            }
            _ => return Err(ParseError::at(ParseErrorKind::UnknownLine, line_no)),
        }
    }

    let n = n.ok_or(ParseError::at(ParseErrorKind::MissingHeader, last_line))?;
    let explicit: Vec<bool> = weights.iter().map(Option::is_some).collect();
    let weights: Vec<Weight> =
        weights.iter().enumerate().map(|(i, w)| w.unwrap_or_else(|| default_weight(i + 1))).collect();
    VertexWeightedGraph::assemble(n, edges.into_iter(), weights, explicit)
        .map_err(|_| ParseError::at(ParseErrorKind::WeightOverflow, last_line))
}

/// Convenience wrapper over [`parse_dimacs`] for in-memory text.
pub fn parse_dimacs_str(text: &str) -> Result<VertexWeightedGraph, ParseError> {
    parse_dimacs(text.as_bytes())
}
