//! Finite metric graphs: Cayley balls of small Coxeter groups, Gromov
//! products, thin-triangle δ and quasi-isometric embedding checks.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_rational::Ratio;
use ordered_float::OrderedFloat;
use thiserror::Error;

use crate::coxgraph::{CoxeterGraph, Word};
use crate::georep::Reflections;

pub const MAX_BALL_RADIUS: usize = 12;
pub const MAX_CAYLEY_GENERATORS: usize = 4;
pub const MAX_CAYLEY_NODES: usize = 4096;
pub const MAX_EXHAUSTIVE_NODES: usize = 200;
pub const MAX_SAMPLED_NODES: usize = 256;

/// Matrices closer than this are the same group element.
pub const SAME_ELEMENT: f64 = 1e-9;
/// Matrices farther apart than this are distinct elements.
pub const DISTINCT_ELEMENT: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("{what} supports at most {limit}, got {got}")]
    Capacity {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("matrices at distance {distance:e} are neither equal nor distinct")]
    Ambiguity { distance: f64 },
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("{0}")]
    Precondition(String),
}

/// A connected graph with its path metric.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricGraph {
    labels: Vec<String>,
    edges: Vec<(usize, usize, String)>,
    adjacency: Vec<Vec<usize>>,
    dist: Vec<u16>,
}

impl FiniteMetricGraph {
    /// Build from unlabelled edges on nodes `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, MetricError> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let edges = edges.iter().map(|&(u, v)| (u, v, String::new())).collect();
        Self::build(labels, edges)
    }

    fn build(labels: Vec<String>, edges: Vec<(usize, usize, String)>) -> Result<Self, MetricError> {
        let n = labels.len();
        if n == 0 {
            return Err(MetricError::Precondition("graph has no nodes".into()));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v, _) in &edges {
            if u >= n {
                return Err(MetricError::UnknownNode(u));
            }
            if v >= n {
                return Err(MetricError::UnknownNode(v));
            }
            if u != v && !adjacency[u].contains(&v) {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        let mut dist = vec![u16::MAX; n * n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in &adjacency[u] {
                    if row[v] == u16::MAX {
                        row[v] = row[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if row.contains(&u16::MAX) {
                return Err(MetricError::Disconnected);
            }
        }

        let graph = FiniteMetricGraph {
            labels,
            edges,
            adjacency,
            dist,
        };
        if let Some(problem) = graph.metric_violation() {
            panic!("path distances are not a metric: {problem}");
        }
        Ok(graph)
    }

    /// First failure of the metric axioms, if any. The triangle inequality
    /// is checked on all triples up to 300 nodes and edgewise beyond.
    pub fn metric_violation(&self) -> Option<String> {
        let n = self.len();
        for x in 0..n {
            if self.d(x, x) != 0 {
                return Some(format!("d({x},{x}) != 0"));
            }
            for y in 0..n {
                if self.d(x, y) != self.d(y, x) {
                    return Some(format!("d({x},{y}) != d({y},{x})"));
                }
                if x != y && self.d(x, y) == 0 {
                    return Some(format!("d({x},{y}) = 0"));
                }
            }
        }
        if n <= 300 {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if self.d(x, z) > self.d(x, y) + self.d(y, z) {
                            return Some(format!("triangle inequality fails at ({x},{y},{z})"));
                        }
                    }
                }
            }
        } else {
            for (u, list) in self.adjacency.iter().enumerate() {
                for &v in list {
                    for x in 0..n {
                        if self.d(u, x).abs_diff(self.d(v, x)) > 1 {
                            return Some(format!("edge ({u},{v}) stretches distance to {x}"));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    pub fn edges(&self) -> &[(usize, usize, String)] {
        &self.edges
    }

    pub fn neighbours(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    fn d(&self, x: usize, y: usize) -> u16 {
        self.dist[x * self.len() + y]
    }

    pub fn distance(&self, x: usize, y: usize) -> Result<u32, MetricError> {
        self.check_node(x)?;
        self.check_node(y)?;
        Ok(self.d(x, y) as u32)
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0) as u32
    }

    fn check_node(&self, x: usize) -> Result<(), MetricError> {
        if x < self.len() {
            Ok(())
        } else {
            Err(MetricError::UnknownNode(x))
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph cayley {\n");
        for (i, label) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  {i} [label=\"{label}\"];");
        }
        for (u, v, label) in &self.edges {
            if label.is_empty() {
                let _ = writeln!(out, "  {u} -- {v};");
            } else {
                let _ = writeln!(out, "  {u} -- {v} [label=\"{label}\"];");
            }
        }
        out.push_str("}\n");
        out
    }

    /// Nodes on some geodesic from `x` to `y`, as a mask.
    fn interval(&self, x: usize, y: usize) -> Vec<bool> {
        let dxy = self.d(x, y);
        (0..self.len())
            .map(|q| self.d(x, q) + self.d(q, y) == dxy)
            .collect()
    }

    /// Next steps from `q` towards `y` along geodesics.
    fn steps_towards(&self, q: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        let here = self.d(q, y);
        self.adjacency[q]
            .iter()
            .copied()
            .filter(move |&v| self.d(v, y) + 1 == here)
    }
}

// ---------------------------------------------------------------------------
// Cayley graphs
// ---------------------------------------------------------------------------

/// Elements found so far, keyed by a fixed linear projection of the matrix
/// so that nearby matrices can be found by a range query.
struct ElementIndex {
    weights: Vec<f64>,
    reach: f64,
    by_key: BTreeMap<OrderedFloat<f64>, Vec<usize>>,
}

impl ElementIndex {
    fn new(entries: usize) -> Self {
        // Fixed irrational-ish weights in [1, 2).
        let weights: Vec<f64> = (0..entries)
            .map(|k| 1.0 + ((k as f64 + 1.0) * 0.618_033_988_749_895).fract())
            .collect();
        let reach = weights.iter().sum::<f64>() * DISTINCT_ELEMENT * 2.0;
        ElementIndex {
            weights,
            reach,
            by_key: BTreeMap::new(),
        }
    }

    fn key(&self, m: &DMatrix<f64>) -> f64 {
        m.iter().zip(&self.weights).map(|(a, w)| a * w).sum()
    }

    /// Index of an element equal to `m`, or `None` if `m` is new.
    fn find(&self, m: &DMatrix<f64>, elements: &[DMatrix<f64>]) -> Result<Option<usize>, MetricError> {
        let key = self.key(m);
        let range = OrderedFloat(key - self.reach)..=OrderedFloat(key + self.reach);
        for ids in self.by_key.range(range).map(|(_, ids)| ids) {
            for &id in ids {
                let distance = (m - &elements[id]).amax();
                if distance < SAME_ELEMENT {
                    return Ok(Some(id));
                }
                if distance <= DISTINCT_ELEMENT {
                    return Err(MetricError::Ambiguity { distance });
                }
            }
        }
        Ok(None)
    }

    fn insert(&mut self, m: &DMatrix<f64>, id: usize) {
        self.by_key.entry(OrderedFloat(self.key(m))).or_default().push(id);
    }
}

fn check_generators(graph: &CoxeterGraph) -> Result<(), MetricError> {
    if graph.len() > MAX_CAYLEY_GENERATORS {
        return Err(MetricError::Capacity {
            what: "Cayley graph generators",
            limit: MAX_CAYLEY_GENERATORS,
            got: graph.len(),
        });
    }
    Ok(())
}

/// Breadth-first enumeration of elements of length ≤ `radius` (or of the
/// whole group when `radius` is `None`).
fn enumerate(graph: &CoxeterGraph, radius: Option<usize>) -> Result<FiniteMetricGraph, MetricError> {
    let refl = Reflections::new(graph);
    let n = graph.len();
    let dim = refl.rank();

    let mut elements: Vec<DMatrix<f64>> = vec![DMatrix::identity(dim, dim)];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut depth = vec![0usize];
    let mut index = ElementIndex::new(dim * dim);
    index.insert(&elements[0], 0);
    let mut edges = Vec::new();

    let mut head = 0;
    while head < elements.len() {
        let u = head;
        head += 1;
        for i in 0..n {
            let next = &elements[u] * refl.generator(i);
            let v = match index.find(&next, &elements)? {
                Some(v) => v,
                None => {
                    if radius.is_some_and(|r| depth[u] >= r) {
                        continue;
                    }
                    if elements.len() >= MAX_CAYLEY_NODES {
                        return Err(MetricError::Capacity {
                            what: "Cayley graph nodes",
                            limit: MAX_CAYLEY_NODES,
                            got: elements.len() + 1,
                        });
                    }
                    let v = elements.len();
                    index.insert(&next, v);
                    elements.push(next);
                    let mut w = words[u].clone();
                    w.push(i);
                    words.push(w);
                    depth.push(depth[u] + 1);
                    v
                }
            };
            if u < v {
                edges.push((u, v, graph.name(i).to_string()));
            }
        }
    }

    let single_letters = graph.names().iter().all(|s| s.chars().count() == 1);
    let labels = words
        .into_iter()
        .map(|w| {
            if w.is_empty() {
                "e".to_string()
            } else {
                graph
                    .word_names(&Word::from_letters(w))
                    .join(if single_letters { "" } else { " " })
            }
        })
        .collect();
    FiniteMetricGraph::build(labels, edges)
}

/// The ball of the given radius around the identity in the Cayley graph.
pub fn cayley_ball(graph: &CoxeterGraph, radius: usize) -> Result<FiniteMetricGraph, MetricError> {
    if radius > MAX_BALL_RADIUS {
        return Err(MetricError::Capacity {
            what: "Cayley ball radius",
            limit: MAX_BALL_RADIUS,
            got: radius,
        });
    }
    check_generators(graph)?;
    enumerate(graph, Some(radius))
}

/// The whole Cayley graph of a finite group, found by running the BFS until
/// it closes up. Capacity error if the group has more than
/// [`MAX_CAYLEY_NODES`] elements.
pub fn cayley_closure(graph: &CoxeterGraph) -> Result<FiniteMetricGraph, MetricError> {
    check_generators(graph)?;
    enumerate(graph, None)
}

// ---------------------------------------------------------------------------
// Gromov product and δ
// ---------------------------------------------------------------------------

/// `(x|y)_z = (d(x,z) + d(y,z) - d(x,y)) / 2`.
pub fn gromov_product(
    m: &FiniteMetricGraph,
    x: usize,
    y: usize,
    z: usize,
) -> Result<Ratio<i64>, MetricError> {
    let xz = m.distance(x, z)? as i64;
    let yz = m.distance(y, z)? as i64;
    let xy = m.distance(x, y)? as i64;
    Ok(Ratio::new(xz + yz - xy, 2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaMode {
    Exhaustive,
    Sampled(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaEstimate {
    pub delta: f64,
    pub mode: DeltaMode,
    /// True when only some geodesics were examined.
    pub lower_bound: bool,
}

/// Thin-triangle constant: the largest distance from a point of one side of
/// a geodesic triangle to the union of the other two sides, over all
/// triangles whose sides are examined geodesics.
pub fn delta_estimate(m: &FiniteMetricGraph, mode: DeltaMode) -> Result<DeltaEstimate, MetricError> {
    let n = m.len();
    let (delta, lower_bound) = match mode {
        DeltaMode::Exhaustive => {
            if n > MAX_EXHAUSTIVE_NODES {
                return Err(MetricError::Capacity {
                    what: "exhaustive δ nodes",
                    limit: MAX_EXHAUSTIVE_NODES,
                    got: n,
                });
            }
            (delta_exhaustive(m), false)
        }
        DeltaMode::Sampled(k) => {
            if n > MAX_SAMPLED_NODES {
                return Err(MetricError::Capacity {
                    what: "sampled δ nodes",
                    limit: MAX_SAMPLED_NODES,
                    got: n,
                });
            }
            if k == 0 {
                return Err(MetricError::Precondition("sample size must be positive".into()));
            }
            delta_sampled(m, k)
        }
    };
    Ok(DeltaEstimate {
        delta: delta as f64,
        mode,
        lower_bound,
    })
}

/// `far[(x*n + y)*n + p]` is the largest, over geodesics γ from x to y, of
/// the distance from p to γ.
///
/// A point p of side [x,z] is checked against [x,y] and [y,z], which are
/// chosen independently, so the worst triangle through p uses the geodesic
/// farthest from p on each of those sides. Every point of the interval
/// I(x,z) lies on some geodesic from x to z.
fn delta_exhaustive(m: &FiniteMetricGraph) -> u16 {
    let n = m.len();
    let mut far = vec![0u16; n * n * n];
    let mut best = vec![0u16; n];
    for x in 0..n {
        for y in 0..n {
            let inside = m.interval(x, y);
            // Interval nodes ordered by distance from y, nearest first.
            let mut order: Vec<usize> = (0..n).filter(|&q| inside[q]).collect();
            order.sort_by_key(|&q| m.d(q, y));
            for p in 0..n {
                for &q in &order {
                    let tail = m
                        .steps_towards(q, y)
                        .filter(|&v| inside[v])
                        .map(|v| best[v])
                        .max();
                    best[q] = match tail {
                        Some(t) => m.d(p, q).min(t),
                        None => m.d(p, q),
                    };
                }
                far[(x * n + y) * n + p] = best[x];
            }
        }
    }

    let mut delta = 0;
    for x in 0..n {
        for z in 0..n {
            let inside = m.interval(x, z);
            for p in (0..n).filter(|&p| inside[p]) {
                for y in 0..n {
                    let a = far[(x * n + y) * n + p];
                    let b = far[(y * n + z) * n + p];
                    delta = delta.max(a.min(b));
                }
            }
        }
    }
    delta
}

/// Up to `k` geodesics from x to y, taking lower-numbered neighbours first.
fn first_geodesics(m: &FiniteMetricGraph, x: usize, y: usize, k: usize) -> (Vec<Vec<usize>>, bool) {
    let mut found = Vec::new();
    let mut path = vec![x];
    let mut truncated = false;
    fn walk(
        m: &FiniteMetricGraph,
        y: usize,
        k: usize,
        path: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
        truncated: &mut bool,
    ) {
        let q = *path.last().unwrap();
        if q == y {
            if found.len() < k {
                found.push(path.clone());
            } else {
                *truncated = true;
            }
            return;
        }
        let next: Vec<usize> = m.steps_towards(q, y).collect();
        for v in next {
            if *truncated {
                return;
            }
            path.push(v);
            walk(m, y, k, path, found, truncated);
            path.pop();
        }
    }
    walk(m, y, k, &mut path, &mut found, &mut truncated);
    (found, truncated)
}

fn delta_sampled(m: &FiniteMetricGraph, k: usize) -> (u16, bool) {
    let n = m.len();
    let mut geodesics = Vec::with_capacity(n * n);
    let mut incomplete = false;
    for x in 0..n {
        for y in 0..n {
            let (list, truncated) = first_geodesics(m, x, y, k);
            incomplete |= truncated;
            geodesics.push(list);
        }
    }
    // far[(x*n + y)*n + p]: largest distance from p to a sampled geodesic.
    let mut far = vec![0u16; n * n * n];
    for x in 0..n {
        for y in 0..n {
            for p in 0..n {
                far[(x * n + y) * n + p] = geodesics[x * n + y]
                    .iter()
                    .map(|g| g.iter().map(|&q| m.d(p, q)).min().unwrap())
                    .max()
                    .unwrap();
            }
        }
    }
    let mut delta = 0;
    for x in 0..n {
        for z in 0..n {
            let mut on_side = vec![false; n];
            for g in &geodesics[x * n + z] {
                for &p in g {
                    on_side[p] = true;
                }
            }
            for p in (0..n).filter(|&p| on_side[p]) {
                for y in 0..n {
                    let a = far[(x * n + y) * n + p];
                    let b = far[(y * n + z) * n + p];
                    delta = delta.max(a.min(b));
                }
            }
        }
    }
    (delta, incomplete)
}

// ---------------------------------------------------------------------------
// Quasi-isometric embeddings
// ---------------------------------------------------------------------------

/// Whether `i ↦ image_i` satisfies `-C + |i-j|/C ≤ d ≤ C|i-j| + C` on every
/// pair of the given points.
pub fn qi_embedding_check(
    points: &[(i64, usize)],
    m: &FiniteMetricGraph,
    c: f64,
) -> Result<bool, MetricError> {
    if c.is_nan() || c < 1.0 {
        return Err(MetricError::Precondition(format!("constant {c} is below 1")));
    }
    for &(_, node) in points {
        m.check_node(node)?;
    }
    for (a, &(i, x)) in points.iter().enumerate() {
        for &(j, y) in &points[a + 1..] {
            let gap = i.abs_diff(j) as f64;
            let d = m.d(x, y) as f64;
            if d < gap / c - c || d > c * gap + c {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
