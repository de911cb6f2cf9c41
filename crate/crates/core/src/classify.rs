//! Property (NL) verdicts for Coxeter groups.
//!
//! `classify_nl` runs a fixed list of rules, R1 through R7, and stops at the
//! first one that decides. Every NOT_NL verdict carries a witness that is
//! re-checked before it is returned: either a surjection onto D∞ (whose
//! translation pulls back to a loxodromic) or a word acting with spectral
//! radius above one on the hyperbolic plane.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::coxgraph::CoxeterGraph;
use crate::dinfty::{generator_image, DInftyElement};
use crate::georep::{self, GeoRepError, LoxodromicCertificate, Tolerances};

/// Search and recognition procedures are exact up to this many vertices.
pub const MAX_SEARCH_VERTICES: usize = 20;

/// Longest word tried when certifying a hyperbolic triangle group.
pub const MAX_CERTIFICATE_WORD: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("{what} supports at most {limit} vertices, graph has {got}")]
    Capacity {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("triangle label {0} is below 2")]
    LabelTooSmall(u32),
    #[error(transparent)]
    Numeric(#[from] GeoRepError),
}

fn check_capacity(graph: &CoxeterGraph, what: &'static str) -> Result<(), ClassifyError> {
    if graph.len() > MAX_SEARCH_VERTICES {
        return Err(ClassifyError::Capacity {
            what,
            limit: MAX_SEARCH_VERTICES,
            got: graph.len(),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Triangle groups
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Geometry {
    Spherical,
    Euclidean,
    Hyperbolic,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Geometry::Spherical => "spherical",
            Geometry::Euclidean => "euclidean",
            Geometry::Hyperbolic => "hyperbolic",
        })
    }
}

/// Labels sorted ascending together with the exact angle sum
/// `1/l + 1/m + 1/n` (in units of π).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleClass {
    pub l: u32,
    pub m: u32,
    pub n: u32,
    pub geometry: Geometry,
    pub angle_sum: Ratio<i128>,
}

pub fn classify_triangle(l: u32, m: u32, n: u32) -> Result<TriangleClass, ClassifyError> {
    let mut labels = [l, m, n];
    labels.sort_unstable();
    if labels[0] < 2 {
        return Err(ClassifyError::LabelTooSmall(labels[0]));
    }
    let [l, m, n] = labels;
    let angle_sum = Ratio::new(1, l as i128) + Ratio::new(1, m as i128) + Ratio::new(1, n as i128);
    let geometry = match angle_sum.cmp(&Ratio::from_integer(1)) {
        Ordering::Greater => Geometry::Spherical,
        Ordering::Equal => Geometry::Euclidean,
        Ordering::Less => Geometry::Hyperbolic,
    };
    Ok(TriangleClass {
        l,
        m,
        n,
        geometry,
        angle_sum,
    })
}

// ---------------------------------------------------------------------------
// Epimorphisms onto D∞
// ---------------------------------------------------------------------------

/// Vertex partition `(A, B, K)` encoding the map `A → r`, `B → s`, `K → 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EpimorphismWitness {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub k: Vec<usize>,
}

impl EpimorphismWitness {
    pub fn new(mut a: Vec<usize>, mut b: Vec<usize>, mut k: Vec<usize>) -> Self {
        a.sort_unstable();
        b.sort_unstable();
        k.sort_unstable();
        EpimorphismWitness { a, b, k }
    }

    /// Whether `(A, B, K)` is a partition of the graph's vertices.
    pub fn is_partition_of(&self, graph: &CoxeterGraph) -> bool {
        let mut seen = vec![false; graph.len()];
        for &v in self.a.iter().chain(&self.b).chain(&self.k) {
            match seen.get_mut(v) {
                Some(slot) if !*slot => *slot = true,
                _ => return false,
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The combinatorial conditions: nonempty `A` and `B`, no finite edge
    /// from `A` to `B`, and only even labels between `K` and `A ∪ B`.
    pub fn satisfies_conditions(&self, graph: &CoxeterGraph) -> bool {
        if !self.is_partition_of(graph) || self.a.is_empty() || self.b.is_empty() {
            return false;
        }
        let ab_free = self
            .a
            .iter()
            .all(|&u| self.b.iter().all(|&v| graph.label(u, v).is_none()));
        let k_even = self.k.iter().all(|&u| {
            self.a
                .iter()
                .chain(&self.b)
                .all(|&v| graph.label(u, v).is_none_or(|m| m % 2 == 0))
        });
        ab_free && k_even
    }

    fn names(&self, graph: &CoxeterGraph, part: &[usize]) -> Vec<String> {
        part.iter().map(|&i| graph.name(i).to_string()).collect()
    }
}

/// Check the map `A → r`, `B → s`, `K → 1` against every relator of the
/// presentation by evaluating it in D∞, and check that the image contains two
/// distinct involutions. Independent of the combinatorial conditions.
pub fn verify_epimorphism(graph: &CoxeterGraph, witness: &EpimorphismWitness) -> bool {
    if !witness.is_partition_of(graph) {
        return false;
    }
    let n = graph.len();
    let image: Vec<DInftyElement> = (0..n).map(|v| generator_image(witness, v)).collect();

    if !image.iter().all(|&x| (x * x).is_identity()) {
        return false;
    }
    for (i, j, m) in graph.edges() {
        if !(image[i] * image[j]).pow(m as i64).is_identity() {
            return false;
        }
    }
    let mut involutions: Vec<DInftyElement> = image.iter().copied().filter(|x| x.q).collect();
    involutions.sort_by_key(|x| x.p);
    involutions.dedup();
    involutions.len() >= 2
}

/// Find a partition `(A, B, K)` encoding a surjection onto D∞.
///
/// A disconnected graph gets `A` = first component, `B` = second, `K` = the
/// rest. Otherwise the result is the lexicographically first valid colouring
/// (vertex order, `A < B < K`).
///
/// Vertices joined by an odd edge must share a colour, and edges between
/// different odd components are even, so the only live constraint is "no
/// finite edge between A and B". A partial colouring can therefore be tested
/// for extendability directly, and the colouring is built greedily one odd
/// component at a time.
pub fn find_dinfty_epimorphism(
    graph: &CoxeterGraph,
) -> Result<Option<EpimorphismWitness>, ClassifyError> {
    check_capacity(graph, "D∞ epimorphism search")?;

    let components = graph.connected_components();
    if components.len() >= 2 {
        let k = components[2..].concat();
        return Ok(Some(EpimorphismWitness::new(
            components[0].clone(),
            components[1].clone(),
            k,
        )));
    }

    let parts = graph.odd_components();
    let c = parts.len();
    // adjacent[x][y]: some finite edge joins odd components x and y.
    let mut adjacent = vec![vec![false; c]; c];
    let mut part_of = vec![0; graph.len()];
    for (x, part) in parts.iter().enumerate() {
        for &v in part {
            part_of[v] = x;
        }
    }
    for (u, v, _) in graph.edges() {
        let (x, y) = (part_of[u], part_of[v]);
        adjacent[x][y] = true;
        adjacent[y][x] = true;
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Colour {
        A,
        B,
        K,
    }

    let extendable = |assigned: &[Colour]| -> bool {
        let has = |col| assigned.contains(&col);
        let free = assigned.len()..c;
        match (has(Colour::A), has(Colour::B)) {
            (true, true) => true,
            (true, false) => free.clone().any(|y| {
                (0..assigned.len()).all(|x| assigned[x] != Colour::A || !adjacent[x][y])
            }),
            (false, true) => unreachable!("B is never used before A"),
            (false, false) => {
                free.clone().any(|x| free.clone().any(|y| x != y && !adjacent[x][y]))
            }
        }
    };

    let mut colouring: Vec<Colour> = Vec::with_capacity(c);
    for x in 0..c {
        let mut placed = false;
        for col in [Colour::A, Colour::B, Colour::K] {
            if col == Colour::B && !colouring.contains(&Colour::A) {
                continue;
            }
            let clash = col != Colour::K
                && (0..x).any(|y| {
                    colouring[y] != Colour::K && colouring[y] != col && adjacent[x][y]
                });
            if clash {
                continue;
            }
            colouring.push(col);
            if extendable(&colouring) {
                placed = true;
                break;
            }
            colouring.pop();
        }
        if !placed {
            // Only possible at the first component when nothing is
            // extendable at all.
            debug_assert_eq!(x, 0);
            return Ok(None);
        }
    }

    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut k = Vec::new();
    for (x, col) in colouring.iter().enumerate() {
        let target = match col {
            Colour::A => &mut a,
            Colour::B => &mut b,
            Colour::K => &mut k,
        };
        target.extend_from_slice(&parts[x]);
    }
    let witness = EpimorphismWitness::new(a, b, k);
    debug_assert!(witness.satisfies_conditions(graph));
    Ok(Some(witness))
}

// ---------------------------------------------------------------------------
// Abelianization
// ---------------------------------------------------------------------------

/// Evidence that `W_Γ` does not surject onto ℤ: its abelianization is
/// `(ℤ/2)^rank`, so every homomorphism to ℤ kills the generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AbelianizationEvidence {
    pub surjects_onto_z: bool,
    pub z2_rank: usize,
}

pub fn surjects_onto_z(graph: &CoxeterGraph) -> AbelianizationEvidence {
    AbelianizationEvidence {
        surjects_onto_z: false,
        z2_rank: graph.odd_components().len(),
    }
}

// ---------------------------------------------------------------------------
// Finite type recognition
// ---------------------------------------------------------------------------

/// Irreducible finite Coxeter types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiniteType {
    A(usize),
    B(usize),
    D(usize),
    E6,
    E7,
    E8,
    F4,
    H3,
    H4,
    I2(u32),
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteType::A(n) => write!(f, "A{n}"),
            FiniteType::B(n) => write!(f, "B{n}"),
            FiniteType::D(n) => write!(f, "D{n}"),
            FiniteType::E6 => f.write_str("E6"),
            FiniteType::E7 => f.write_str("E7"),
            FiniteType::E8 => f.write_str("E8"),
            FiniteType::F4 => f.write_str("F4"),
            FiniteType::H3 => f.write_str("H3"),
            FiniteType::H4 => f.write_str("H4"),
            FiniteType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

/// Decompose into irreducible finite types, or `None` if the group is
/// infinite.
///
/// Two generators interact unless they commute (label 2), so the
/// irreducible pieces are the components of the graph whose edges are the
/// pairs with label ≥ 3 or no label. Any unlabelled pair makes its piece
/// infinite. Each piece must then be one of the classical tree diagrams.
pub fn finite_type_decomposition(
    graph: &CoxeterGraph,
) -> Result<Option<Vec<FiniteType>>, ClassifyError> {
    check_capacity(graph, "finite type recognition")?;
    if !graph.is_complete() {
        return Ok(None);
    }
    let n = graph.len();
    let bond = |i: usize, j: usize| graph.label(i, j).filter(|&m| m >= 3);

    let mut seen = vec![false; n];
    let mut types = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut piece = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < piece.len() {
            let u = piece[head];
            head += 1;
            for v in 0..n {
                if !seen[v] && bond(u, v).is_some() {
                    seen[v] = true;
                    piece.push(v);
                }
            }
        }
        match recognize_piece(&piece, &bond) {
            Some(t) => types.push(t),
            None => return Ok(None),
        }
    }
    Ok(Some(types))
}

fn recognize_piece(piece: &[usize], bond: &dyn Fn(usize, usize) -> Option<u32>) -> Option<FiniteType> {
    let size = piece.len();
    let mut edges = Vec::new();
    for (x, &u) in piece.iter().enumerate() {
        for &v in &piece[x + 1..] {
            if let Some(m) = bond(u, v) {
                edges.push((u, v, m));
            }
        }
    }
    // Connected by construction, so a tree iff it has size - 1 edges.
    if edges.len() + 1 != size {
        return None;
    }
    match size {
        1 => return Some(FiniteType::A(1)),
        2 => {
            let m = edges[0].2;
            return Some(match m {
                3 => FiniteType::A(2),
                4 => FiniteType::B(2),
                _ => FiniteType::I2(m),
            });
        }
        _ => {}
    }

    let degree = |v: usize| edges.iter().filter(|&&(a, b, _)| a == v || b == v).count();
    let neighbours = |v: usize| -> Vec<(usize, u32)> {
        edges
            .iter()
            .filter_map(|&(a, b, m)| match () {
                _ if a == v => Some((b, m)),
                _ if b == v => Some((a, m)),
                _ => None,
            })
            .collect()
    };
    let max_degree = piece.iter().map(|&v| degree(v)).max().unwrap_or(0);

    if max_degree <= 2 {
        // Path: read labels from one end.
        let end = *piece.iter().find(|&&v| degree(v) == 1)?;
        let mut labels = Vec::with_capacity(size - 1);
        let (mut prev, mut cur) = (usize::MAX, end);
        loop {
            let next = neighbours(cur).into_iter().find(|&(w, _)| w != prev);
            match next {
                Some((w, m)) => {
                    labels.push(m);
                    prev = cur;
                    cur = w;
                }
                None => break,
            }
        }
        return recognize_path(&labels);
    }

    if max_degree == 3 && edges.iter().all(|e| e.2 == 3) {
        let branch: Vec<usize> = piece.iter().copied().filter(|&v| degree(v) == 3).collect();
        if branch.len() != 1 {
            return None;
        }
        let centre = branch[0];
        let mut arms: Vec<usize> = neighbours(centre)
            .into_iter()
            .map(|(first, _)| {
                let (mut prev, mut cur, mut len) = (centre, first, 1);
                while let Some((w, _)) = neighbours(cur).into_iter().find(|&(w, _)| w != prev) {
                    prev = cur;
                    cur = w;
                    len += 1;
                }
                len
            })
            .collect();
        arms.sort_unstable();
        return match arms.as_slice() {
            [1, 1, k] => Some(FiniteType::D(k + 3)),
            [1, 2, 2] => Some(FiniteType::E6),
            [1, 2, 3] => Some(FiniteType::E7),
            [1, 2, 4] => Some(FiniteType::E8),
            _ => None,
        };
    }
    None
}

fn recognize_path(labels: &[u32]) -> Option<FiniteType> {
    let n = labels.len() + 1;
    let non3: Vec<(usize, u32)> = labels
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, m)| m != 3)
        .collect();
    let last = labels.len() - 1;
    match non3.as_slice() {
        [] => Some(FiniteType::A(n)),
        [(pos, 4)] if *pos == 0 || *pos == last => Some(FiniteType::B(n)),
        [(1, 4)] if n == 4 => Some(FiniteType::F4),
        [(pos, 5)] if (*pos == 0 || *pos == last) && (n == 3 || n == 4) => {
            Some(if n == 3 { FiniteType::H3 } else { FiniteType::H4 })
        }
        _ => None,
    }
}

/// Whether `W_Γ` is finite. The diagram lookup decides; the Gram form must
/// agree (positive definite exactly for finite groups) unless its smallest
/// eigenvalue sits inside the zero band, which happens for huge dihedral
/// labels.
pub fn is_finite_coxeter(graph: &CoxeterGraph, tol: f64) -> Result<bool, ClassifyError> {
    let finite = finite_type_decomposition(graph)?.is_some();
    let min_eig = georep::gram_matrix(graph).min_eigenvalue();
    let disagree = (finite && min_eig < -tol) || (!finite && min_eig > tol);
    if disagree {
        return Err(GeoRepError::Ambiguity(format!(
            "diagram lookup says finite = {finite} but smallest Gram eigenvalue is {min_eig:e}"
        ))
        .into());
    }
    Ok(finite)
}

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    #[serde(rename = "NL")]
    Nl,
    #[serde(rename = "NOT_NL")]
    NotNl,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Nl => "NL",
            Status::NotNl => "NOT_NL",
            Status::Unknown => "UNKNOWN",
        })
    }
}

/// One evaluated rule. Decisive firings carry a suffixed id such as
/// `R5-euclidean`; rules that did not apply carry the bare id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleFiring {
    pub rule: String,
    pub cite: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Epimorphism(EpimorphismWitness),
    Loxodromic(LoxodromicCertificate),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    status: Status,
    trace: Vec<RuleFiring>,
    witness: Option<Witness>,
}

impl Verdict {
    pub fn status(&self) -> Status {
        self.status
    }

    pub fn trace(&self) -> &[RuleFiring] {
        &self.trace
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }

    /// Id of the deciding rule, if any.
    pub fn decisive_rule(&self) -> Option<&str> {
        match self.status {
            Status::Unknown => None,
            _ => self.trace.last().map(|f| f.rule.as_str()),
        }
    }

    /// Serializable view with vertex names in place of indices.
    pub fn report<'a>(&'a self, graph: &'a CoxeterGraph) -> VerdictReport<'a> {
        let witness = self.witness.as_ref().map(|w| match w {
            Witness::Epimorphism(e) => WitnessReport::Epimorphism {
                a: e.names(graph, &e.a),
                b: e.names(graph, &e.b),
                k: e.names(graph, &e.k),
            },
            Witness::Loxodromic(c) => WitnessReport::Loxodromic {
                word: graph.word_names(&c.word),
                dim: c.matrix.dim(),
                matrix: c.matrix.row_major(),
                spectral_radius: c.spectral_radius,
                translation_length: c.translation_length,
            },
        });
        VerdictReport {
            status: self.status,
            trace: &self.trace,
            witness,
        }
    }

    pub fn to_json(&self, graph: &CoxeterGraph) -> String {
        serde_json::to_string(&self.report(graph)).expect("verdict serialization cannot fail")
    }

    pub fn to_text(&self, graph: &CoxeterGraph) -> String {
        let mut out = format!("status: {}\n", self.status);
        for firing in &self.trace {
            out.push_str(&format!(
                "  [{}] {} -- {}\n",
                firing.rule, firing.cite, firing.reason
            ));
        }
        match self.report(graph).witness {
            None => out.push_str("witness: none\n"),
            Some(WitnessReport::Epimorphism { a, b, k }) => out.push_str(&format!(
                "witness: epimorphism onto D∞  A={{{}}} -> r  B={{{}}} -> s  K={{{}}} -> 1\n",
                a.join(","),
                b.join(","),
                k.join(",")
            )),
            Some(WitnessReport::Loxodromic {
                word,
                spectral_radius,
                translation_length,
                ..
            }) => out.push_str(&format!(
                "witness: loxodromic word {}  spectral radius {spectral_radius:.12}  translation length {translation_length:.12}\n",
                word.join(" ")
            )),
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct VerdictReport<'a> {
    pub status: Status,
    pub trace: &'a [RuleFiring],
    pub witness: Option<WitnessReport>,
}

#[derive(Debug, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum WitnessReport {
    Epimorphism {
        #[serde(rename = "A")]
        a: Vec<String>,
        #[serde(rename = "B")]
        b: Vec<String>,
        #[serde(rename = "K")]
        k: Vec<String>,
    },
    Loxodromic {
        word: Vec<String>,
        dim: usize,
        matrix: Vec<f64>,
        spectral_radius: f64,
        translation_length: f64,
    },
}

const CITE_R1: &str = "disconnected defining graph: quotient onto D∞";
const CITE_R2: &str = "right-angled: NL iff the defining graph is complete";
const CITE_R3: &str = "one generator: finite group";
const CITE_R4: &str = "two generators: NL iff the defining graph is complete";
const CITE_R5: &str = "triangle groups: NL iff not hyperbolic";
const CITE_R6: &str = "finite groups have no loxodromic elements";
const CITE_R7: &str = "loxodromics of a quotient lift to the group";

struct Trace(Vec<RuleFiring>);

impl Trace {
    fn push(&mut self, rule: impl Into<String>, cite: &str, reason: impl Into<String>) {
        self.0.push(RuleFiring {
            rule: rule.into(),
            cite: cite.to_string(),
            reason: reason.into(),
        });
    }

    fn nl(self) -> Verdict {
        Verdict {
            status: Status::Nl,
            trace: self.0,
            witness: None,
        }
    }

    fn unknown(self) -> Verdict {
        Verdict {
            status: Status::Unknown,
            trace: self.0,
            witness: None,
        }
    }

    /// NOT_NL is only ever produced here, after the witness is re-checked.
    fn not_nl(
        self,
        graph: &CoxeterGraph,
        witness: Witness,
        tol: &Tolerances,
    ) -> Result<Verdict, ClassifyError> {
        let sound = match &witness {
            Witness::Epimorphism(e) => verify_epimorphism(graph, e),
            Witness::Loxodromic(c) => georep::loxodromic_certificate(graph, &c.word, tol)?
                .is_some_and(|again| again.spectral_radius > 1.0 + tol.loxodromic_margin),
        };
        assert!(sound, "refusing to emit NOT_NL with an unverified witness");
        Ok(Verdict {
            status: Status::NotNl,
            trace: self.0,
            witness: Some(witness),
        })
    }
}

fn name_list(graph: &CoxeterGraph, part: &[usize]) -> String {
    let names: Vec<&str> = part.iter().map(|&i| graph.name(i)).collect();
    format!("{{{}}}", names.join(","))
}

/// Decide Property (NL) for `W_Γ` where the paper's results cover it.
pub fn classify_nl(graph: &CoxeterGraph, tol: &Tolerances) -> Result<Verdict, ClassifyError> {
    let mut trace = Trace(Vec::new());
    let n = graph.len();

    // R1
    let components = graph.connected_components();
    if components.len() >= 2 {
        let k = components[2..].concat();
        let witness = EpimorphismWitness::new(components[0].clone(), components[1].clone(), k);
        trace.push(
            "R1-disconnected",
            CITE_R1,
            format!(
                "{} components; first component -> r, second -> s, rest -> 1",
                components.len()
            ),
        );
        return trace.not_nl(graph, Witness::Epimorphism(witness), tol);
    }
    trace.push("R1", CITE_R1, "graph is connected");

    // R2
    if graph.is_right_angled() {
        if graph.is_complete() {
            trace.push(
                "R2-complete",
                CITE_R2,
                format!("complete right-angled graph: group is (Z/2)^{n}"),
            );
            return Ok(trace.nl());
        }
        let (i, j) = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| graph.label(i, j).is_none())
            .expect("incomplete graph has a missing pair");
        let k = (0..n).filter(|&v| v != i && v != j).collect();
        trace.push(
            "R2-incomplete",
            CITE_R2,
            format!(
                "{} and {} have no edge; they map to r and s, all else to 1",
                graph.name(i),
                graph.name(j)
            ),
        );
        return trace.not_nl(
            graph,
            Witness::Epimorphism(EpimorphismWitness::new(vec![i], vec![j], k)),
            tol,
        );
    }
    trace.push("R2", CITE_R2, "graph is not right-angled");

    // R3. A single vertex is always right-angled, so R2 has already decided.
    if n == 1 {
        trace.push("R3-single", CITE_R3, "group is Z/2");
        return Ok(trace.nl());
    }
    trace.push("R3", CITE_R3, format!("{n} generators"));

    // R4. Two vertices with no edge are disconnected and stop at R1.
    if n == 2 {
        let m = graph.label(0, 1).expect("connected 2-vertex graph has its edge");
        trace.push(
            "R4-complete",
            CITE_R4,
            format!("dihedral group of order {}", 2 * m as u64),
        );
        return Ok(trace.nl());
    }
    trace.push("R4", CITE_R4, format!("{n} generators"));

    // R5
    if let Some((l, m, k)) = georep::triangle_labels(graph) {
        let class = classify_triangle(l, m, k)?;
        let labels = format!("({},{},{})", class.l, class.m, class.n);
        let sum = class.angle_sum;
        match class.geometry {
            Geometry::Spherical => {
                trace.push(
                    "R5-spherical",
                    CITE_R5,
                    format!("{labels}: angle sum {sum}π > π, finite group"),
                );
                return Ok(trace.nl());
            }
            Geometry::Euclidean => {
                trace.push(
                    "R5-euclidean",
                    CITE_R5,
                    format!("{labels}: angle sum π, virtually Z^2 with no surjection onto Z or D∞"),
                );
                return Ok(trace.nl());
            }
            Geometry::Hyperbolic => {
                if let Some(cert) = georep::find_loxodromic(graph, MAX_CERTIFICATE_WORD, tol)? {
                    trace.push(
                        "R5-hyperbolic",
                        CITE_R5,
                        format!(
                            "{labels}: angle sum {sum}π < π; word {} has spectral radius {:.9} on the hyperbolic plane",
                            graph.word_names(&cert.word).join(""),
                            cert.spectral_radius
                        ),
                    );
                    return trace.not_nl(graph, Witness::Loxodromic(cert), tol);
                }
                trace.push(
                    "R5",
                    CITE_R5,
                    format!("{labels}: hyperbolic, but no certified word of length ≤ {MAX_CERTIFICATE_WORD}"),
                );
            }
        }
    } else {
        trace.push("R5", CITE_R5, "not a complete 3-vertex graph");
    }

    // R6
    check_capacity(graph, "finite type recognition")?;
    if is_finite_coxeter(graph, tol.eigen)? {
        let types = finite_type_decomposition(graph)?.unwrap_or_default();
        let names: Vec<String> = types.iter().map(ToString::to_string).collect();
        trace.push("R6-finite", CITE_R6, format!("finite type {}", names.join(" x ")));
        return Ok(trace.nl());
    }
    trace.push("R6", CITE_R6, "not of finite type");

    // R7
    if let Some(witness) = find_dinfty_epimorphism(graph)? {
        trace.push(
            "R7-epimorphism",
            CITE_R7,
            format!(
                "A={} -> r, B={} -> s, K={} -> 1 respects every relator",
                name_list(graph, &witness.a),
                name_list(graph, &witness.b),
                name_list(graph, &witness.k)
            ),
        );
        return trace.not_nl(graph, Witness::Epimorphism(witness), tol);
    }
    trace.push("R7", CITE_R7, "epimorphism onto D∞: none found");

    Ok(trace.unknown())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dinfty::push_forward;
    use crate::coxgraph::Word;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn triangle_trichotomy_examples() {
        let c = classify_triangle(5, 3, 2).unwrap();
        assert_eq!((c.l, c.m, c.n), (2, 3, 5));
        assert_eq!(c.geometry, Geometry::Spherical);
        assert_eq!(c.angle_sum, Ratio::new(31, 30));
        let c = classify_triangle(2, 4, 4).unwrap();
        assert_eq!(c.geometry, Geometry::Euclidean);
        assert_eq!(c.angle_sum, Ratio::from_integer(1));
        let c = classify_triangle(2, 3, 7).unwrap();
        assert_eq!(c.geometry, Geometry::Hyperbolic);
        assert_eq!(c.angle_sum, Ratio::new(41, 42));
        assert_eq!(classify_triangle(1, 3, 3), Err(ClassifyError::LabelTooSmall(1)));
        // Huge labels stay exact.
        let big = crate::coxgraph::MAX_LABEL;
        assert_eq!(classify_triangle(big, big, big).unwrap().geometry, Geometry::Hyperbolic);
    }

    #[test]
    fn verdict_examples() {
        let k4 = CoxeterGraph::numbered(
            4,
            &[(0, 1, 2), (0, 2, 2), (0, 3, 2), (1, 2, 2), (1, 3, 2), (2, 3, 2)],
        )
        .unwrap();
        let v = classify_nl(&k4, &tol()).unwrap();
        assert_eq!(v.status(), Status::Nl);
        assert_eq!(v.decisive_rule(), Some("R2-complete"));

        let dinf = CoxeterGraph::numbered(2, &[]).unwrap();
        let v = classify_nl(&dinf, &tol()).unwrap();
        assert_eq!(v.status(), Status::NotNl);
        assert_eq!(
            v.witness(),
            Some(&Witness::Epimorphism(EpimorphismWitness::new(vec![0], vec![1], vec![])))
        );

        let t237 = CoxeterGraph::triangle(2, 3, 7).unwrap();
        let v = classify_nl(&t237, &tol()).unwrap();
        assert_eq!(v.status(), Status::NotNl);
        assert_eq!(v.decisive_rule(), Some("R5-hyperbolic"));
        assert!(matches!(v.witness(), Some(Witness::Loxodromic(_))));

        let t236 = CoxeterGraph::triangle(2, 3, 6).unwrap();
        let v = classify_nl(&t236, &tol()).unwrap();
        assert_eq!(v.status(), Status::Nl);
        assert_eq!(v.decisive_rule(), Some("R5-euclidean"));

        let path44 = CoxeterGraph::new(["a", "b", "c"], &[(0, 1, 4), (1, 2, 4)]).unwrap();
        let v = classify_nl(&path44, &tol()).unwrap();
        assert_eq!(v.status(), Status::NotNl);
        assert_eq!(v.decisive_rule(), Some("R7-epimorphism"));
        assert_eq!(
            v.witness(),
            Some(&Witness::Epimorphism(EpimorphismWitness::new(vec![0], vec![2], vec![1])))
        );

        let path34 = CoxeterGraph::new(["a", "b", "c"], &[(0, 1, 3), (1, 2, 4)]).unwrap();
        let v = classify_nl(&path34, &tol()).unwrap();
        assert_eq!(v.status(), Status::Unknown);
        assert_eq!(v.trace().len(), 7);
        assert!(v.witness().is_none());
    }

    #[test]
    fn single_vertex_decided_by_right_angled_rule() {
        let g = CoxeterGraph::numbered(1, &[]).unwrap();
        let v = classify_nl(&g, &tol()).unwrap();
        assert_eq!(v.status(), Status::Nl);
        assert_eq!(v.decisive_rule(), Some("R2-complete"));
    }

    #[test]
    fn finite_types_decide_larger_graphs() {
        // H4 path 5-3-3 plus commuting pairs, all present.
        let g = CoxeterGraph::numbered(
            4,
            &[(0, 1, 5), (1, 2, 3), (2, 3, 3), (0, 2, 2), (0, 3, 2), (1, 3, 2)],
        )
        .unwrap();
        assert_eq!(
            finite_type_decomposition(&g).unwrap(),
            Some(vec![FiniteType::H4])
        );
        let v = classify_nl(&g, &tol()).unwrap();
        assert_eq!(v.decisive_rule(), Some("R6-finite"));

        // D4: centre 0 joined to 1, 2, 3.
        let d4 = CoxeterGraph::numbered(
            4,
            &[(0, 1, 3), (0, 2, 3), (0, 3, 3), (1, 2, 2), (1, 3, 2), (2, 3, 2)],
        )
        .unwrap();
        assert_eq!(finite_type_decomposition(&d4).unwrap(), Some(vec![FiniteType::D(4)]));

        // Affine Ã3: a 4-cycle of 3s.
        let cyc = CoxeterGraph::numbered(
            4,
            &[(0, 1, 3), (1, 2, 3), (2, 3, 3), (0, 3, 3), (0, 2, 2), (1, 3, 2)],
        )
        .unwrap();
        assert_eq!(finite_type_decomposition(&cyc).unwrap(), None);
        assert!(!is_finite_coxeter(&cyc, 1e-9).unwrap());
        assert_eq!(classify_nl(&cyc, &tol()).unwrap().status(), Status::Unknown);
    }

    #[test]
    fn finite_examples() {
        let racg = CoxeterGraph::numbered(3, &[(0, 1, 2), (1, 2, 2), (0, 2, 2)]).unwrap();
        assert!(is_finite_coxeter(&racg, 1e-9).unwrap());
        assert!(is_finite_coxeter(&CoxeterGraph::triangle(2, 3, 3).unwrap(), 1e-9).unwrap());
        assert_eq!(
            finite_type_decomposition(&CoxeterGraph::triangle(2, 3, 3).unwrap()).unwrap(),
            Some(vec![FiniteType::A(3)])
        );
        assert!(!is_finite_coxeter(&CoxeterGraph::triangle(2, 3, 6).unwrap(), 1e-9).unwrap());
        // Huge dihedral label: Gram smallest eigenvalue is inside the band.
        let big = CoxeterGraph::numbered(2, &[(0, 1, crate::coxgraph::MAX_LABEL)]).unwrap();
        assert!(is_finite_coxeter(&big, 1e-9).unwrap());
    }

    #[test]
    fn capacity_limits() {
        let g = CoxeterGraph::numbered(21, &[(0, 1, 3)]).unwrap();
        assert!(matches!(
            find_dinfty_epimorphism(&g),
            Err(ClassifyError::Capacity { .. })
        ));
        assert!(matches!(
            is_finite_coxeter(&g, 1e-9),
            Err(ClassifyError::Capacity { .. })
        ));
        // R1 still decides without any search.
        assert_eq!(classify_nl(&g, &tol()).unwrap().status(), Status::NotNl);
    }

    #[test]
    fn epimorphism_search_examples() {
        // Three components.
        let g = CoxeterGraph::numbered(5, &[(0, 3, 3), (1, 4, 5)]).unwrap();
        let w = find_dinfty_epimorphism(&g).unwrap().unwrap();
        assert_eq!(w, EpimorphismWitness::new(vec![0, 3], vec![1, 4], vec![2]));
        assert!(verify_epimorphism(&g, &w));

        let complete = CoxeterGraph::triangle(3, 5, 7).unwrap();
        assert_eq!(find_dinfty_epimorphism(&complete).unwrap(), None);

        let path = CoxeterGraph::new(["a", "b", "c"], &[(0, 1, 4), (1, 2, 4)]).unwrap();
        let w = find_dinfty_epimorphism(&path).unwrap().unwrap();
        assert_eq!(w, EpimorphismWitness::new(vec![0], vec![2], vec![1]));
        assert!(w.satisfies_conditions(&path));
    }

    #[test]
    fn verification_examples() {
        let dinf = CoxeterGraph::numbered(2, &[]).unwrap();
        assert!(verify_epimorphism(&dinf, &EpimorphismWitness::new(vec![0], vec![1], vec![])));

        let t = CoxeterGraph::triangle(3, 3, 3).unwrap();
        let bad = EpimorphismWitness::new(vec![0], vec![1], vec![2]);
        assert!(!verify_epimorphism(&t, &bad));
        let ab = push_forward(&t, &bad, &Word::from_letters(vec![0, 1])).unwrap();
        assert!(!ab.pow(3).is_identity());

        assert!(!verify_epimorphism(&t, &EpimorphismWitness::new(vec![], vec![], vec![0, 1, 2])));
        // Not a partition.
        assert!(!verify_epimorphism(&dinf, &EpimorphismWitness::new(vec![0], vec![0], vec![1])));
        assert!(!verify_epimorphism(&dinf, &EpimorphismWitness::new(vec![0], vec![], vec![])));
    }

    #[test]
    fn abelianization_examples() {
        let t = CoxeterGraph::triangle(3, 3, 3).unwrap();
        assert_eq!(
            surjects_onto_z(&t),
            AbelianizationEvidence {
                surjects_onto_z: false,
                z2_rank: 1
            }
        );
        let k3 = CoxeterGraph::numbered(3, &[(0, 1, 2), (1, 2, 2), (0, 2, 2)]).unwrap();
        assert_eq!(surjects_onto_z(&k3).z2_rank, 3);
        assert_eq!(surjects_onto_z(&CoxeterGraph::numbered(2, &[]).unwrap()).z2_rank, 2);
    }

    #[test]
    fn json_shape() {
        let g = CoxeterGraph::new(["a", "b"], &[]).unwrap();
        let v = classify_nl(&g, &tol()).unwrap();
        let json: serde_json::Value = serde_json::from_str(&v.to_json(&g)).unwrap();
        assert_eq!(json["status"], "NOT_NL");
        assert_eq!(json["trace"][0]["rule"], "R1-disconnected");
        assert_eq!(json["witness"]["type"], "epimorphism");
        assert_eq!(json["witness"]["A"][0], "a");
        assert_eq!(json["witness"]["B"][0], "b");

        let t = CoxeterGraph::triangle(2, 3, 7).unwrap();
        let v = classify_nl(&t, &tol()).unwrap();
        let json: serde_json::Value = serde_json::from_str(&v.to_json(&t)).unwrap();
        assert_eq!(json["witness"]["type"], "loxodromic");
        assert_eq!(json["witness"]["matrix"].as_array().unwrap().len(), 9);
        assert!(json["witness"]["spectral_radius"].as_f64().unwrap() > 1.0);

        let u = CoxeterGraph::new(["a", "b", "c"], &[(0, 1, 3), (1, 2, 4)]).unwrap();
        let v = classify_nl(&u, &tol()).unwrap();
        let json: serde_json::Value = serde_json::from_str(&v.to_json(&u)).unwrap();
        assert_eq!(json["status"], "UNKNOWN");
        assert!(json["witness"].is_null());
        assert!(v.to_text(&u).contains("none found"));
    }
}
