//! Coxeter defining graphs.
//!
//! A vertex is a generator of order two. An edge labelled `m` between `s_i`
//! and `s_j` imposes `(s_i s_j)^m = 1`. A pair with no edge imposes no
//! relation at all, so `s_i s_j` has infinite order. This is the opposite of
//! the Coxeter–Dynkin convention, where a missing edge means `m = 2`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest accepted edge label.
pub const MAX_LABEL: u32 = i32::MAX as u32;

/// Errors raised while reading or validating a graph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("graph has no vertices")]
    NoVertices,
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("invalid vertex name `{0}` (names must be non-empty and contain no whitespace or `#`)")]
    InvalidName(String),
    #[error("edge references unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("label {label} on edge {u}-{v} is below 2")]
    LabelTooSmall { u: String, v: String, label: u64 },
    #[error("label {label} on edge {u}-{v} exceeds {MAX_LABEL}")]
    LabelTooLarge { u: String, v: String, label: u64 },
    #[error("edge on self-pair `{0}`")]
    SelfPair(String),
    #[error("edge {u}-{v} given conflicting labels {first} and {second}")]
    ConflictingEdge {
        u: String,
        v: String,
        first: u32,
        second: u32,
    },
    #[error("letter {0} is not a vertex index")]
    InvalidLetter(usize),
    #[error("word token `{0}` is not a vertex name")]
    UnknownLetter(String),
}

impl GraphError {
    /// Syntax problems are parse errors; everything else is an invalid graph.
    pub fn is_syntax(&self) -> bool {
        matches!(self, GraphError::Syntax { .. })
    }
}

/// Input file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Text,
    Json,
}

impl GraphFormat {
    /// Guess the format from the first non-blank character.
    pub fn sniff(text: &str) -> GraphFormat {
        match text.trim_start().chars().next() {
            Some('{') => GraphFormat::Json,
            _ => GraphFormat::Text,
        }
    }
}

/// A validated Coxeter defining graph.
///
/// Vertex order is fixed by the input and determines generator indices
/// everywhere else (matrices, words, witnesses).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoxeterGraph {
    names: Vec<String>,
    // Row-major n×n, `None` on the diagonal and on absent pairs.
    labels: Vec<Option<u32>>,
}

impl CoxeterGraph {
    /// Build a graph from names and `(u, v, m)` edges given by index.
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        edges: &[(usize, usize, u32)],
    ) -> Result<Self, GraphError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut graph = Self::with_vertices(names)?;
        for &(u, v, m) in edges {
            if u >= graph.len() {
                return Err(GraphError::InvalidLetter(u));
            }
            if v >= graph.len() {
                return Err(GraphError::InvalidLetter(v));
            }
            graph.insert_edge(u, v, m as u64)?;
        }
        Ok(graph)
    }

    /// Graph on vertices named `s1, s2, ...`.
    pub fn numbered(n: usize, edges: &[(usize, usize, u32)]) -> Result<Self, GraphError> {
        Self::new((1..=n).map(|i| format!("s{i}")), edges)
    }

    /// Complete graph on three vertices `a, b, c` with `a-b = l`, `b-c = m`,
    /// `a-c = n`.
    pub fn triangle(l: u32, m: u32, n: u32) -> Result<Self, GraphError> {
        Self::new(["a", "b", "c"], &[(0, 1, l), (1, 2, m), (0, 2, n)])
    }

    fn with_vertices(names: Vec<String>) -> Result<Self, GraphError> {
        if names.is_empty() {
            return Err(GraphError::NoVertices);
        }
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '#') {
                return Err(GraphError::InvalidName(name.clone()));
            }
            if seen.insert(name.as_str(), i).is_some() {
                return Err(GraphError::DuplicateVertex(name.clone()));
            }
        }
        let n = names.len();
        Ok(CoxeterGraph {
            names,
            labels: vec![None; n * n],
        })
    }

    fn insert_edge(&mut self, u: usize, v: usize, m: u64) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfPair(self.names[u].clone()));
        }
        if m < 2 {
            return Err(GraphError::LabelTooSmall {
                u: self.names[u].clone(),
                v: self.names[v].clone(),
                label: m,
            });
        }
        if m > MAX_LABEL as u64 {
            return Err(GraphError::LabelTooLarge {
                u: self.names[u].clone(),
                v: self.names[v].clone(),
                label: m,
            });
        }
        let m = m as u32;
        match self.label(u, v) {
            Some(prev) if prev != m => Err(GraphError::ConflictingEdge {
                u: self.names[u].clone(),
                v: self.names[v].clone(),
                first: prev,
                second: m,
            }),
            _ => {
                let n = self.len();
                self.labels[u * n + v] = Some(m);
                self.labels[v * n + u] = Some(m);
                Ok(())
            }
        }
    }

    /// Number of vertices (generators).
    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Always false for a validated graph; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Finite label on the pair, or `None` for an absent pair (order ∞) or
    /// the diagonal.
    pub fn label(&self, i: usize, j: usize) -> Option<u32> {
        self.labels[i * self.len() + j]
    }

    /// All present edges as `(i, j, m)` with `i < j`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| {
            (i + 1..n).filter_map(move |j| self.label(i, j).map(|m| (i, j, m)))
        })
    }

    /// Every unordered pair carries a finite label.
    pub fn is_complete(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (i + 1..n).all(|j| self.label(i, j).is_some()))
    }

    /// Every present label equals 2.
    pub fn is_right_angled(&self) -> bool {
        self.edges().all(|(_, _, m)| m == 2)
    }

    /// Components under reachability over present edges.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        self.components_by(|_| true)
    }

    /// Components under reachability over edges with odd label. The number of
    /// parts is the rank of the abelianization, which is an elementary
    /// abelian 2-group.
    pub fn odd_components(&self) -> Vec<Vec<usize>> {
        self.components_by(|m| m % 2 == 1)
    }

    /// Partition of the vertices into components of the subgraph of edges
    /// whose label satisfies `keep`. Parts are sorted by their smallest
    /// vertex and each part is sorted.
    fn components_by(&self, keep: impl Fn(u32) -> bool) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut parts = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = parts.len();
            let mut part = vec![start];
            comp[start] = id;
            let mut head = 0;
            while head < part.len() {
                let u = part[head];
                head += 1;
                for v in 0..n {
                    if comp[v] == usize::MAX && self.label(u, v).is_some_and(&keep) {
                        comp[v] = id;
                        part.push(v);
                    }
                }
            }
            part.sort_unstable();
            parts.push(part);
        }
        parts
    }

    /// Same graph with vertices reordered: vertex `perm[i]` of `self` becomes
    /// vertex `i` of the result.
    pub fn permuted(&self, perm: &[usize]) -> CoxeterGraph {
        assert_eq!(perm.len(), self.len());
        let n = self.len();
        let names = perm.iter().map(|&p| self.names[p].clone()).collect();
        let mut labels = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                labels[i * n + j] = self.label(perm[i], perm[j]);
            }
        }
        CoxeterGraph { names, labels }
    }

    /// Parse either input format.
    pub fn parse(text: &str, format: GraphFormat) -> Result<Self, GraphError> {
        match format {
            GraphFormat::Text => parse_text(text),
            GraphFormat::Json => parse_json(text),
        }
    }

    /// Render in the line-oriented TEXT format.
    pub fn to_text(&self) -> String {
        let mut out = format!("vertices: {}\n", self.names.join(" "));
        for (i, j, m) in self.edges() {
            out.push_str(&format!("edge {} {} {}\n", self.names[i], self.names[j], m));
        }
        out
    }

    /// Render in the JSON format.
    pub fn to_json(&self) -> String {
        let doc = JsonGraph {
            vertices: self.names.clone(),
            edges: self
                .edges()
                .map(|(i, j, m)| JsonEdge {
                    u: self.names[i].clone(),
                    v: self.names[j].clone(),
                    m: m as u64,
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("graph serialization cannot fail")
    }

    /// Parse a word given as vertex names separated by whitespace or commas.
    /// A single token that is not a vertex name is split into characters when
    /// every character names a vertex, so `abc` works for one-letter names.
    pub fn parse_word(&self, text: &str) -> Result<Word, GraphError> {
        let tokens: Vec<&str> = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        let mut letters = Vec::new();
        for tok in tokens {
            if let Some(i) = self.index_of(tok) {
                letters.push(i);
                continue;
            }
            let chars: Option<Vec<usize>> = tok
                .chars()
                .map(|c| self.index_of(c.encode_utf8(&mut [0; 4])))
                .collect();
            match chars {
                Some(mut idx) => letters.append(&mut idx),
                None => return Err(GraphError::UnknownLetter(tok.to_string())),
            }
        }
        Ok(Word(letters))
    }

    /// Render a word as space-separated vertex names.
    pub fn word_names(&self, word: &Word) -> Vec<String> {
        word.letters().iter().map(|&i| self.names[i].clone()).collect()
    }
}

impl fmt::Display for CoxeterGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A word in the generators. Generators are involutions, so no inverse
/// letters are needed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    /// Build a word, checking each letter against the graph.
    pub fn new(graph: &CoxeterGraph, letters: Vec<usize>) -> Result<Self, GraphError> {
        if let Some(&bad) = letters.iter().find(|&&i| i >= graph.len()) {
            return Err(GraphError::InvalidLetter(bad));
        }
        Ok(Word(letters))
    }

    /// Build a word without a graph at hand. Letters are checked at use.
    pub fn from_letters(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check(&self, graph: &CoxeterGraph) -> Result<(), GraphError> {
        match self.0.iter().find(|&&i| i >= graph.len()) {
            Some(&bad) => Err(GraphError::InvalidLetter(bad)),
            None => Ok(()),
        }
    }
}

/// All words of the given length over `n` generators, lexicographic by
/// generator index.
pub fn words_of_length(n: usize, len: usize) -> impl Iterator<Item = Word> {
    let total = n.checked_pow(len as u32).unwrap_or(0);
    (0..total).map(move |mut code| {
        let mut letters = vec![0; len];
        for slot in letters.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        Word(letters)
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGraph {
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<JsonEdge>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonEdge {
    u: String,
    v: String,
    m: u64,
}

fn parse_json(text: &str) -> Result<CoxeterGraph, GraphError> {
    let doc: JsonGraph = serde_json::from_str(text).map_err(|e| GraphError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut graph = CoxeterGraph::with_vertices(doc.vertices)?;
    for edge in doc.edges {
        let u = graph
            .index_of(&edge.u)
            .ok_or_else(|| GraphError::UnknownVertex(edge.u.clone()))?;
        let v = graph
            .index_of(&edge.v)
            .ok_or_else(|| GraphError::UnknownVertex(edge.v.clone()))?;
        graph.insert_edge(u, v, edge.m)?;
    }
    Ok(graph)
}

fn parse_text(text: &str) -> Result<CoxeterGraph, GraphError> {
    let syntax = |line: usize, column: usize, message: &str| GraphError::Syntax {
        line,
        column,
        message: message.to_string(),
    };

    let mut vertices: Option<Vec<String>> = None;
    let mut edges: Vec<(String, String, u64)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("");
        let indent = line.len() - line.trim_start().len();
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vertices:") {
            if vertices.is_some() {
                return Err(syntax(lineno, indent + 1, "second `vertices:` line"));
            }
            vertices = Some(rest.split_whitespace().map(str::to_string).collect());
            continue;
        }
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("edge") => {
                let parts: Vec<&str> = fields.collect();
                if parts.len() != 3 {
                    return Err(syntax(
                        lineno,
                        indent + 1,
                        "expected `edge <u> <v> <m>`",
                    ));
                }
                let column = raw.find(parts[2]).map_or(indent + 1, |c| c + 1);
                if parts[2].starts_with('-') {
                    return Err(syntax(lineno, column, "label must be a positive integer"));
                }
                let m: u64 = parts[2].parse().map_err(|_| {
                    if parts[2].chars().all(|c| c.is_ascii_digit()) {
                        // Digits only but overflowed u64.
                        syntax(lineno, column, "label out of range")
                    } else {
                        syntax(
                            lineno,
                            column,
                            "label must be an integer (omit the edge for an infinite label)",
                        )
                    }
                })?;
                edges.push((parts[0].to_string(), parts[1].to_string(), m));
            }
            Some(word) => {
                return Err(syntax(
                    lineno,
                    indent + 1,
                    &format!("unknown directive `{word}`"),
                ))
            }
            None => unreachable!("blank lines are skipped"),
        }
    }

    let vertices = vertices.ok_or_else(|| syntax(1, 1, "missing `vertices:` line"))?;
    let mut graph = CoxeterGraph::with_vertices(vertices)?;
    for (u, v, m) in edges {
        let ui = graph.index_of(&u).ok_or(GraphError::UnknownVertex(u))?;
        let vi = graph.index_of(&v).ok_or(GraphError::UnknownVertex(v))?;
        graph.insert_edge(ui, vi, m)?;
    }
    Ok(graph)
}
