//! Simple undirected graphs, the two text formats, and the generators used
//! for test and benchmark corpora.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// A set of vertices drawn from `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet(FixedBitSet);

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet(FixedBitSet::with_capacity(n))
    }

    pub fn from_vertices(n: usize, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(n);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    /// Size of the underlying vertex range.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, v: usize) {
        self.0.insert(v);
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(v)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.0.union_with(&other.0);
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
}

/// A simple undirected graph on vertices `0..n`.
///
/// Immutable after construction. Adjacency lists are sorted and free of
/// duplicates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list. Repeated edges (in either
    /// orientation) collapse to one.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut m = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        Ok(Graph {
            adjacency,
            m: m / 2,
        })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// `N[v] = {v} ∪ N(v)`.
    pub fn closed_neighborhood(&self, v: usize) -> Result<VertexSet, GraphError> {
        if v >= self.n() {
            return Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            });
        }
        let mut set = VertexSet::from_vertices(self.n(), self.adjacency[v].iter().copied());
        set.insert(v);
        Ok(set)
    }

    /// Relabels vertex `v` as `perm[v]`.
    ///
    /// # Panics
    ///
    /// If `perm` is not a permutation of `0..n`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n(), "permutation length");
        let mut seen = vec![false; self.n()];
        for &p in perm {
            assert!(p < self.n() && !seen[p], "not a permutation");
            seen[p] = true;
        }
        Graph::from_edges(self.n(), self.edges().map(|(u, v)| (perm[u], perm[v])))
            .expect("relabeling preserves simplicity")
    }

    /// Closed neighborhoods as `u64` masks. Only meaningful for `n <= 64`.
    pub(crate) fn closed_masks(&self) -> Vec<u64> {
        debug_assert!(self.n() <= 64);
        (0..self.n())
            .map(|v| {
                self.adjacency[v]
                    .iter()
                    .fold(1u64 << v, |acc, &u| acc | 1 << u)
            })
            .collect()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=", self.n())?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

/// Text formats understood by [`parse_graph`] and [`render_graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// `n m` header, then `m` lines of 0-indexed `u v`; `#` starts a comment line.
    EdgeList,
    /// `c` comments, one `p edge n m` line, then `e u v` lines, 1-indexed.
    Dimacs,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edgelist" => Ok(Format::EdgeList),
            "dimacs" => Ok(Format::Dimacs),
            other => Err(format!("unknown graph format `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    VertexOutOfRange { vertex: usize, n: usize },
    SelfLoop { vertex: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {}", describe(.kind))]
pub struct ParseError {
    /// 1-based line number; 0 when the problem is the input as a whole.
    pub line: usize,
    pub kind: ParseErrorKind,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::Syntax(msg) => msg.clone(),
        ParseErrorKind::VertexOutOfRange { vertex, n } => {
            format!("vertex {vertex} out of range (n = {n})")
        }
        ParseErrorKind::SelfLoop { vertex } => format!("self-loop at vertex {vertex}"),
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        kind: ParseErrorKind::Syntax(msg.into()),
    }
}

fn parse_pair(line: usize, fields: &[&str]) -> Result<(usize, usize), ParseError> {
    if fields.len() != 2 {
        return Err(syntax(
            line,
            format!("expected two integers, found {} fields", fields.len()),
        ));
    }
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| syntax(line, format!("`{s}` is not a nonnegative integer")))
    };
    Ok((num(fields[0])?, num(fields[1])?))
}

/// Parses a graph from `text`. Vertices are reported 0-indexed for the edge
/// list format and 1-indexed (as written) for DIMACS.
pub fn parse_graph(text: &str, format: Format) -> Result<Graph, ParseError> {
    match format {
        Format::EdgeList => parse_edgelist(text),
        Format::Dimacs => parse_dimacs(text),
    }
}

fn parse_edgelist(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let (a, b) = parse_pair(line, &fields)?;
        match header {
            None => header = Some((a, b)),
            Some((n, _)) => {
                if a == b {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::SelfLoop { vertex: a },
                    });
                }
                for x in [a, b] {
                    if x >= n {
                        return Err(ParseError {
                            line,
                            kind: ParseErrorKind::VertexOutOfRange { vertex: x, n },
                        });
                    }
                }
                edges.push((line, a, b));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| syntax(0, "missing `n m` header line"))?;
    if edges.len() != m {
        let line = edges.last().map_or(0, |e| e.0);
        return Err(syntax(
            line,
            format!(
                "header declares {m} edges but {} edge lines follow",
                edges.len()
            ),
        ));
    }
    Ok(
        Graph::from_edges(n, edges.into_iter().map(|(_, u, v)| (u, v)))
            .expect("edges validated while parsing"),
    )
}

fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let tag = fields.next().unwrap_or_default();
        let rest: Vec<&str> = fields.collect();
        match tag {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(syntax(line, "duplicate problem line"));
                }
                if rest.first() != Some(&"edge") {
                    return Err(syntax(line, "expected `p edge n m`"));
                }
                header = Some(parse_pair(line, &rest[1..])?);
            }
            "e" => {
                let (a, b) = parse_pair(line, &rest)?;
                if a == b {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::SelfLoop { vertex: a },
                    });
                }
                let Some((n, _)) = header else {
                    return Err(syntax(line, "edge line before the `p edge` line"));
                };
                for x in [a, b] {
                    if x == 0 || x > n {
                        return Err(ParseError {
                            line,
                            kind: ParseErrorKind::VertexOutOfRange { vertex: x, n },
                        });
                    }
                }
                edges.push((line, a - 1, b - 1));
            }
            other => return Err(syntax(line, format!("unknown line type `{other}`"))),
        }
    }
    let (n, m) = header.ok_or_else(|| syntax(0, "missing `p edge n m` line"))?;
    if edges.len() != m {
        let line = edges.last().map_or(0, |e| e.0);
        return Err(syntax(
            line,
            format!(
                "problem line declares {m} edges but {} edge lines follow",
                edges.len()
            ),
        ));
    }
    Ok(
        Graph::from_edges(n, edges.into_iter().map(|(_, u, v)| (u, v)))
            .expect("edges validated while parsing"),
    )
}

/// Writes `g` in the given format; [`parse_graph`] reads it back unchanged.
pub fn render_graph(g: &Graph, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::EdgeList => {
            out.push_str(&format!("{} {}\n", g.n(), g.m()));
            for (u, v) in g.edges() {
                out.push_str(&format!("{u} {v}\n"));
            }
        }
        Format::Dimacs => {
            out.push_str(&format!("p edge {} {}\n", g.n(), g.m()));
            for (u, v) in g.edges() {
                out.push_str(&format!("e {} {}\n", u + 1, v + 1));
            }
        }
    }
    out
}

/// Graph families for [`generate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Path,
    Cycle,
    Complete,
    /// Erdős–Rényi G(n, p).
    Gnp,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::Gnp => "gnp",
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "path" => Ok(Family::Path),
            "cycle" => Ok(Family::Cycle),
            "complete" => Ok(Family::Complete),
            "gnp" => Ok(Family::Gnp),
            other => Err(format!("unknown graph family `{other}`")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenerateError {
    #[error("{family} needs at least {min} vertices, got {n}")]
    TooFewVertices {
        family: &'static str,
        min: usize,
        n: usize,
    },
    #[error("edge probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("gnp generation requires a seed")]
    MissingSeed,
}

/// SplitMix64 (Steele, Lea and Flood, 2014).
///
/// Each step adds `0x9E3779B97F4A7C15` to the state and returns the state
/// passed through `z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB; z ^ (z >> 31)`, all arithmetic
/// wrapping mod 2^64. Corpora generated from the same seed are identical
/// across implementations.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`, from the top 53 bits of the next output.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Deterministic graph generator.
///
/// For `Gnp`, pairs `(u, v)` with `u < v` are visited in lexicographic order
/// and each consumes one [`SplitMix64::next_f64`] draw; the edge is kept iff
/// the draw is `< p`. `p` and `seed` are ignored by the other families.
pub fn generate(
    family: Family,
    n: usize,
    p: f64,
    seed: Option<u64>,
) -> Result<Graph, GenerateError> {
    let too_few = |min| GenerateError::TooFewVertices {
        family: family.as_str(),
        min,
        n,
    };
    let edges: Vec<(usize, usize)> = match family {
        Family::Path => {
            if n < 1 {
                return Err(too_few(1));
            }
            (1..n).map(|v| (v - 1, v)).collect()
        }
        Family::Cycle => {
            if n < 3 {
                return Err(too_few(3));
            }
            (0..n).map(|v| (v, (v + 1) % n)).collect()
        }
        Family::Complete => {
            if n < 1 {
                return Err(too_few(1));
            }
            (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect()
        }
        Family::Gnp => {
            if !(0.0..=1.0).contains(&p) {
                return Err(GenerateError::BadProbability(p));
            }
            let mut rng = SplitMix64::new(seed.ok_or(GenerateError::MissingSeed)?);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.next_f64() < p {
                        edges.push((u, v));
                    }
                }
            }
            edges
        }
    };
    Ok(Graph::from_edges(n, edges).expect("generated edges are simple"))
}
