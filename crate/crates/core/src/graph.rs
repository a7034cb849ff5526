//! Constraint graphs: which tuple coordinates must be coprime.
//!
//! Vertices are numbered `1..=v` everywhere in the public surface. An edge
//! `{r, s}` asks for `gcd(a_r, a_s) = 1`. Isolated vertices are allowed and
//! leave their coordinate unconstrained.

use std::fmt;

use thiserror::Error;

/// Hard limit on vertices and edges, so that vertex and edge subsets fit a `u64` mask.
pub const MAX_VERTICES: usize = 64;
pub const MAX_EDGES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph file has no vertex count line")]
    MissingVertexCount,
    #[error("line {line}: malformed line {text:?}")]
    Malformed { line: usize, text: String },
    #[error("vertex count must be at least 1")]
    NoVertices,
    #[error("{0} vertices exceeds the limit of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("{0} edges exceeds the limit of {MAX_EDGES}")]
    TooManyEdges(usize),
    #[error("line {line}: vertex {vertex} is outside 1..={v}")]
    VertexOutOfRange {
        line: usize,
        vertex: usize,
        v: usize,
    },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {{{r}, {s}}}")]
    DuplicateEdge { line: usize, r: usize, s: usize },
}

/// An undirected edge with `r < s`, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub r: usize,
    pub s: usize,
}

impl Edge {
    fn canonical(a: usize, b: usize) -> Self {
        Edge {
            r: a.min(b),
            s: a.max(b),
        }
    }

    /// Bitmask with bits `r-1` and `s-1` set.
    pub fn mask(&self) -> u64 {
        (1u64 << (self.r - 1)) | (1u64 << (self.s - 1))
    }
}

/// Immutable simple graph on vertices `1..=v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    v: usize,
    edges: Vec<Edge>,
    degrees: Vec<usize>,
}

impl Graph {
    /// Builds a graph from 1-based vertex pairs. Pair order and orientation do not matter.
    pub fn new(v: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut builder = Builder::new(v)?;
        for (i, &(r, s)) in pairs.iter().enumerate() {
            builder.add(i + 1, r, s)?;
        }
        builder.finish()
    }

    pub fn edgeless(v: usize) -> Result<Self, GraphError> {
        Self::new(v, &[])
    }

    pub fn complete(v: usize) -> Result<Self, GraphError> {
        let pairs: Vec<_> = (1..=v)
            .flat_map(|r| (r + 1..=v).map(move |s| (r, s)))
            .collect();
        Self::new(v, &pairs)
    }

    /// Path `1 - 2 - ... - v`.
    pub fn path(v: usize) -> Result<Self, GraphError> {
        let pairs: Vec<_> = (1..v).map(|r| (r, r + 1)).collect();
        Self::new(v, &pairs)
    }

    /// Star with centre 1 and leaves `2..=v`.
    pub fn star(v: usize) -> Result<Self, GraphError> {
        let pairs: Vec<_> = (2..=v).map(|s| (1, s)).collect();
        Self::new(v, &pairs)
    }

    /// Subgraph of `K_v` keeping the edges whose index (in canonical order) is set in `mask`.
    pub fn complete_subgraph(v: usize, mask: u64) -> Result<Self, GraphError> {
        let all = Self::complete(v)?;
        let pairs: Vec<_> = all
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| (e.r, e.s))
            .collect();
        Self::new(v, &pairs)
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.v`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Self, GraphError> {
        let shift = self.v;
        let pairs: Vec<_> = self
            .edges
            .iter()
            .map(|e| (e.r, e.s))
            .chain(other.edges.iter().map(|e| (e.r + shift, e.s + shift)))
            .collect();
        Self::new(self.v + other.v, &pairs)
    }

    pub fn vertex_count(&self) -> usize {
        self.v
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical (sorted) order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Degree of vertex `r` (1-based).
    pub fn degree(&self, r: usize) -> usize {
        self.degrees[r - 1]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Neighbour mask of vertex `r`, bit `s-1` set for each neighbour `s`.
    pub fn neighbour_mask(&self, r: usize) -> u64 {
        self.edges.iter().fold(0, |acc, e| {
            if e.r == r {
                acc | 1 << (e.s - 1)
            } else if e.s == r {
                acc | 1 << (e.r - 1)
            } else {
                acc
            }
        })
    }

    /// Canonical text form, accepted back by [`parse_graph`].
    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.v)?;
        for e in &self.edges {
            writeln!(f, "{} {}", e.r, e.s)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Graph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_graph(s)
    }
}

struct Builder {
    v: usize,
    edges: Vec<Edge>,
}

impl Builder {
    fn new(v: usize) -> Result<Self, GraphError> {
        if v == 0 {
            return Err(GraphError::NoVertices);
        }
        if v > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(v));
        }
        Ok(Builder {
            v,
            edges: Vec::new(),
        })
    }

    fn add(&mut self, line: usize, r: usize, s: usize) -> Result<(), GraphError> {
        for vertex in [r, s] {
            if vertex == 0 || vertex > self.v {
                return Err(GraphError::VertexOutOfRange {
                    line,
                    vertex,
                    v: self.v,
                });
            }
        }
        if r == s {
            return Err(GraphError::SelfLoop { line, vertex: r });
        }
        let edge = Edge::canonical(r, s);
        if self.edges.contains(&edge) {
            return Err(GraphError::DuplicateEdge {
                line,
                r: edge.r,
                s: edge.s,
            });
        }
        self.edges.push(edge);
        Ok(())
    }

    fn finish(mut self) -> Result<Graph, GraphError> {
        if self.edges.len() > MAX_EDGES {
            return Err(GraphError::TooManyEdges(self.edges.len()));
        }
        self.edges.sort_unstable();
        let mut degrees = vec![0; self.v];
        for e in &self.edges {
            degrees[e.r - 1] += 1;
            degrees[e.s - 1] += 1;
        }
        Ok(Graph {
            v: self.v,
            edges: self.edges,
            degrees,
        })
    }
}

/// Parses the text graph format: a vertex count line, then one `r s` line per edge.
/// Blank lines and `#` comment lines are skipped; line numbers in errors are 1-based.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, first) = lines.next().ok_or(GraphError::MissingVertexCount)?;
    let v: usize = first.parse().map_err(|_| GraphError::Malformed {
        line,
        text: first.to_string(),
    })?;
    let mut builder = Builder::new(v)?;

    for (line, text) in lines {
        let malformed = || GraphError::Malformed {
            line,
            text: text.to_string(),
        };
        let fields: Vec<&str> = text.split_whitespace().collect();
        let [r, s] = fields[..] else {
            return Err(malformed());
        };
        let r: usize = r.parse().map_err(|_| malformed())?;
        let s: usize = s.parse().map_err(|_| malformed())?;
        builder.add(line, r, s)?;
    }
    builder.finish()
}

/// Maximum vertex degree; 0 for an edgeless graph.
pub fn max_degree(g: &Graph) -> usize {
    g.max_degree()
}
