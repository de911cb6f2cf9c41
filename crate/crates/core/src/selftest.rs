//! The acceptance suite, runnable from the library (`coxnl selftest`) and
//! from the `acceptance` integration test.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_rational::Ratio;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::classify::{
    classify_nl, classify_triangle, find_dinfty_epimorphism, surjects_onto_z, verify_epimorphism,
    Geometry, Status, Verdict, Witness,
};
use crate::cli::{classify_source, OutputFormat};
use crate::coxgraph::{words_of_length, CoxeterGraph};
use crate::dinfty::{word_to_element, DInftyElement, IsometryType, Rational};
use crate::georep::{
    self, find_loxodromic, gram_matrix, loxodromic_certificate, signature, spectral_radius,
    Reflections, Signature, Tolerances,
};
use crate::metricspace::{
    cayley_ball, cayley_closure, delta_estimate, DeltaMode, FiniteMetricGraph,
};

/// Example graph files shipped with the crate, by file name.
pub const EXAMPLE_GRAPHS: &[(&str, &str)] = &[
    ("d_infinity.graph", include_str!("../../../graphs/d_infinity.graph")),
    ("path_3_4.graph", include_str!("../../../graphs/path_3_4.graph")),
    ("path_4_4.graph", include_str!("../../../graphs/path_4_4.graph")),
    ("s3.graph", include_str!("../../../graphs/s3.graph")),
    ("square_right_angled.json", include_str!("../../../graphs/square_right_angled.json")),
    ("triangle_2_3_5.graph", include_str!("../../../graphs/triangle_2_3_5.graph")),
    ("triangle_2_3_6.graph", include_str!("../../../graphs/triangle_2_3_6.graph")),
    ("triangle_2_3_7.graph", include_str!("../../../graphs/triangle_2_3_7.graph")),
    ("triangle_2_4_4.graph", include_str!("../../../graphs/triangle_2_4_4.graph")),
    ("triangle_3_3_3.graph", include_str!("../../../graphs/triangle_3_3_3.graph")),
    ("z2_free_z2_x_z2.graph", include_str!("../../../graphs/z2_free_z2_x_z2.graph")),
    ("z2_x_z2.graph", include_str!("../../../graphs/z2_x_z2.graph")),
];

const SEED: u64 = 0x5EED_C0FE;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(serialize_with = "seconds")]
    pub elapsed: Duration,
}

fn seconds<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64((d.as_secs_f64() * 1e3).round() / 1e3)
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<34} {:>8.3}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Every verdict produced while running the suite.
#[derive(Default)]
pub struct VerdictLog {
    entries: Vec<(CoxeterGraph, Verdict)>,
}

impl VerdictLog {
    fn classify(&mut self, graph: &CoxeterGraph) -> Result<Status, String> {
        let verdict = classify_nl(graph, &Tolerances::default())
            .map_err(|e| format!("classify failed on\n{graph}: {e}"))?;
        let status = verdict.status();
        self.entries.push((graph.clone(), verdict));
        Ok(status)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub const CRITERIA: &[(u8, &str, Option<u64>)] = &[
    (1, "RACG exhaustive sweep", Some(5)),
    (2, "triangle sweep", Some(5)),
    (3, "disconnected rule", Some(10)),
    (4, "witness soundness", None),
    (5, "D∞ algebra", None),
    (6, "no D∞ quotient of complete graphs", None),
    (7, "geometric representation", None),
    (8, "hyperbolic witness", Some(30)),
    (9, "metric toolkit", Some(60)),
    (10, "determinism", None),
];

/// Run all criteria. Soundness (4) is checked last so that it covers every
/// verdict the other criteria produced; results come back ordered by id.
pub fn run_all() -> Vec<CriterionResult> {
    let mut log = VerdictLog::default();
    let mut results: Vec<CriterionResult> = [1, 2, 3, 5, 6, 7, 8, 9, 10, 4]
        .into_iter()
        .map(|id| run_criterion(id, &mut log))
        .collect();
    results.sort_by_key(|r| r.id);
    results
}

pub fn run_criterion(id: u8, log: &mut VerdictLog) -> CriterionResult {
    let &(_, name, limit) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .unwrap_or_else(|| panic!("no criterion {id}"));
    let start = Instant::now();
    let outcome = match id {
        1 => racg_sweep(log),
        2 => triangle_sweep(log),
        3 => disconnected_rule(log),
        4 => witness_soundness(log),
        5 => dinfty_algebra(),
        6 => complete_graphs_have_no_quotient(log),
        7 => geometric_representation(),
        8 => hyperbolic_witness(),
        9 => metric_toolkit(),
        10 => determinism(),
        _ => unreachable!(),
    };
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(detail) => (true, detail),
        Err(detail) => (false, detail),
    };
    if let Some(limit) = limit {
        if elapsed > Duration::from_secs(limit) {
            passed = false;
            detail = format!("{detail}; over the {limit}s limit");
        }
    }
    CriterionResult {
        id,
        name,
        passed,
        detail,
        elapsed,
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn racg_sweep(log: &mut VerdictLog) -> Outcome {
    let mut count = 0;
    for n in 1..=5 {
        let all = pairs(n);
        for mask in 0u32..(1 << all.len()) {
            let edges: Vec<_> = all
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &(i, j))| (i, j, 2))
                .collect();
            let g = CoxeterGraph::numbered(n, &edges).map_err(|e| e.to_string())?;
            let status = log.classify(&g)?;
            let complete = edges.len() == all.len();
            ensure((status == Status::Nl) == complete, || {
                format!("{status} for right-angled graph\n{g}")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} right-angled graphs, NL exactly when complete"))
}

fn triangle_sweep(log: &mut VerdictLog) -> Outcome {
    let mut euclidean = Vec::new();
    let mut spherical = Vec::new();
    let mut count = 0;
    for l in 2..=12u32 {
        for m in l..=12 {
            for n in m..=12 {
                let class = classify_triangle(l, m, n).map_err(|e| e.to_string())?;
                let g = CoxeterGraph::triangle(l, m, n).map_err(|e| e.to_string())?;
                let status = log.classify(&g)?;
                let hyperbolic = class.geometry == Geometry::Hyperbolic;
                ensure((status == Status::Nl) == !hyperbolic, || {
                    format!("({l},{m},{n}) is {} but classified {status}", class.geometry)
                })?;
                match class.geometry {
                    Geometry::Euclidean => euclidean.push((l, m, n)),
                    Geometry::Spherical => spherical.push((l, m, n)),
                    Geometry::Hyperbolic => {}
                }
                count += 1;
            }
        }
    }
    let expected_euclidean = vec![(2, 3, 6), (2, 4, 4), (3, 3, 3)];
    ensure(euclidean == expected_euclidean, || format!("euclidean set {euclidean:?}"))?;
    let mut expected_spherical: Vec<_> = (2..=12).map(|k| (2, 2, k)).collect();
    expected_spherical.extend([(2, 3, 3), (2, 3, 4), (2, 3, 5)]);
    ensure(spherical == expected_spherical, || format!("spherical set {spherical:?}"))?;
    Ok(format!(
        "{count} triangles; {} spherical, 3 euclidean, {} hyperbolic",
        spherical.len(),
        count - spherical.len() - 3
    ))
}

/// Random graph on `n` vertices split into two sides with no edges across.
pub fn random_disconnected_graph(rng: &mut StdRng) -> CoxeterGraph {
    let n = rng.gen_range(2..=8);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let cut = rng.gen_range(1..n);
    let mut side = vec![false; n];
    for &v in &order[cut..] {
        side[v] = true;
    }
    let mut edges = Vec::new();
    for (i, j) in pairs(n) {
        if side[i] != side[j] {
            continue;
        }
        // 8 stands for a missing edge.
        let m = rng.gen_range(2..=8u32);
        if m <= 7 {
            edges.push((i, j, m));
        }
    }
    CoxeterGraph::numbered(n, &edges).expect("valid random graph")
}

fn disconnected_rule(log: &mut VerdictLog) -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED);
    for _ in 0..200 {
        let g = random_disconnected_graph(&mut rng);
        ensure(g.connected_components().len() >= 2, || format!("connected sample\n{g}"))?;
        let status = log.classify(&g)?;
        ensure(status == Status::NotNl, || format!("{status} for disconnected\n{g}"))?;
        let (_, verdict) = log.entries.last().unwrap();
        match verdict.witness() {
            Some(Witness::Epimorphism(w)) if verify_epimorphism(&g, w) => {}
            other => return Err(format!("bad witness {other:?} for\n{g}")),
        }
    }
    Ok("200 random disconnected graphs, all NOT_NL with verified witness".into())
}

fn witness_soundness(log: &mut VerdictLog) -> Outcome {
    // Own sweep: every graph on up to 4 vertices with labels {2,3,4,∞}.
    for n in 1..=4 {
        let all = pairs(n);
        let choices = 4usize.pow(all.len() as u32);
        for code in 0..choices {
            let mut edges = Vec::new();
            let mut c = code;
            for &(i, j) in &all {
                let m = [2, 3, 4, 0][c % 4];
                c /= 4;
                if m != 0 {
                    edges.push((i, j, m));
                }
            }
            let g = CoxeterGraph::numbered(n, &edges).map_err(|e| e.to_string())?;
            log.classify(&g)?;
        }
    }
    let tol = Tolerances::default();
    let mut not_nl = 0;
    let mut loxodromic = 0;
    for (g, v) in &log.entries {
        match (v.status(), v.witness()) {
            (Status::NotNl, Some(Witness::Epimorphism(w))) => {
                ensure(verify_epimorphism(g, w), || format!("epimorphism fails on\n{g}"))?;
            }
            (Status::NotNl, Some(Witness::Loxodromic(cert))) => {
                let again = loxodromic_certificate(g, &cert.word, &tol)
                    .map_err(|e| e.to_string())?
                    .ok_or_else(|| format!("certificate not reproduced on\n{g}"))?;
                ensure(again.spectral_radius > 1.0 + 1e-6, || {
                    format!("spectral radius {} on\n{g}", again.spectral_radius)
                })?;
                loxodromic += 1;
            }
            (Status::NotNl, None) => return Err(format!("NOT_NL without witness on\n{g}")),
            (_, Some(_)) => return Err(format!("witness on a non-NOT_NL verdict for\n{g}")),
            (_, None) => continue,
        }
        not_nl += 1;
    }
    Ok(format!(
        "{not_nl} NOT_NL verdicts out of {} ({loxodromic} loxodromic), all witnesses verified",
        log.len()
    ))
}

fn dinfty_algebra() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED ^ 5);
    let element = |rng: &mut StdRng| DInftyElement::new(rng.gen_range(-1000..=1000), rng.gen());
    let point = |rng: &mut StdRng| Rational::new(rng.gen_range(-10_000..=10_000), rng.gen_range(1..=97));
    for _ in 0..10_000 {
        let (a, b, c) = (element(&mut rng), element(&mut rng), element(&mut rng));
        let x = point(&mut rng);
        ensure((a * b) * c == a * (b * c), || format!("associativity fails on {a} {b} {c}"))?;
        ensure(a * DInftyElement::IDENTITY == a && DInftyElement::IDENTITY * a == a, || {
            format!("identity fails on {a}")
        })?;
        ensure((a * a.inverse()).is_identity() && (a.inverse() * a).is_identity(), || {
            format!("inverse fails on {a}")
        })?;
        ensure((a * b).act(x) == a.act(b.act(x)), || format!("action fails on {a} {b} at {x}"))?;
        ensure(word_to_element(&a.normal_form()) == Ok(a), || {
            format!("normal form of {a} does not evaluate back")
        })?;
    }
    let sr = word_to_element("sr").map_err(|e| e.to_string())?;
    ensure(sr == DInftyElement::T, || format!("sr evaluates to {sr}"))?;
    for x in [-7, 0, 3] {
        let x = Ratio::from_integer(x);
        ensure(sr.act(x) == x + 2, || format!("sr moves {x} to {}", sr.act(x)))?;
    }
    ensure(
        matches!(
            sr.isometry_type(),
            IsometryType::LoxodromicTranslation { translation_length: 2, .. }
        ),
        || "sr is not a translation by 2".into(),
    )?;
    Ok("10000 random cases; sr is translation by +2".into())
}

/// Smith normal form diagonal of an integer matrix.
pub fn smith_diagonal(mut rows: Vec<Vec<i128>>, cols: usize) -> Vec<i128> {
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.len().min(cols) {
        // Smallest nonzero pivot in the remaining block.
        let pivot = (t..rows.len())
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| rows[i][j] != 0)
            .min_by_key(|&(i, j)| rows[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        rows.swap(t, pi);
        for row in rows.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = rows[t][t];
            let mut dirty = false;
            for i in t + 1..rows.len() {
                let q = rows[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        rows[i][j] -= q * rows[t][j];
                    }
                }
                dirty |= rows[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = rows[t][j] / p;
                if q != 0 {
                    for row in rows.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                dirty |= rows[t][j] != 0;
            }
            if !dirty {
                // Pivot must divide the rest of the block.
                let bad = (t + 1..rows.len())
                    .find(|&i| (t + 1..cols).any(|j| rows[i][j] % p != 0));
                match bad {
                    Some(i) => {
                        for j in t..cols {
                            let v = rows[i][j];
                            rows[t][j] += v;
                        }
                        continue;
                    }
                    None => break,
                }
            }
            // Move the smallest nonzero entry of row/column t to the pivot.
            let (mut bi, mut bj) = (t, t);
            for i in t..rows.len() {
                if rows[i][t] != 0 && rows[i][t].abs() < rows[bi][bj].abs() {
                    (bi, bj) = (i, t);
                }
            }
            for j in t..cols {
                if rows[t][j] != 0 && rows[t][j].abs() < rows[bi][bj].abs() {
                    (bi, bj) = (t, j);
                }
            }
            rows.swap(t, bi);
            for row in rows.iter_mut() {
                row.swap(t, bj);
            }
        }
        diag.push(rows[t][t].abs());
        t += 1;
    }
    diag
}

/// Abelianization of `W_Γ` as (free rank, invariant factors > 1).
pub fn abelianization(graph: &CoxeterGraph) -> (usize, Vec<i128>) {
    let n = graph.len();
    let mut rows = Vec::new();
    for i in 0..n {
        let mut r = vec![0; n];
        r[i] = 2;
        rows.push(r);
    }
    for (i, j, m) in graph.edges() {
        let mut r = vec![0; n];
        r[i] = m as i128;
        r[j] = m as i128;
        rows.push(r);
    }
    let diag = smith_diagonal(rows, n);
    let free = n - diag.len();
    (free, diag.into_iter().filter(|&d| d > 1).collect())
}

fn complete_graphs_have_no_quotient(log: &mut VerdictLog) -> Outcome {
    let mut checked = 0u64;
    for n in 1..=6 {
        let all = pairs(n);
        // Up to 4 vertices every label in 2..=7; beyond that every pattern
        // of odd and even labels, with representatives cycling through
        // {2,4,6} and {3,5,7}.
        let literal = n <= 4;
        let base = if literal { 6usize } else { 2 };
        let total = base.pow(all.len() as u32);
        for code in 0..total {
            let mut c = code;
            let edges: Vec<_> = all
                .iter()
                .enumerate()
                .map(|(e, &(i, j))| {
                    let digit = c % base;
                    c /= base;
                    let m = if literal {
                        2 + digit as u32
                    } else {
                        let reps = if digit == 0 { [2, 4, 6] } else { [3, 5, 7] };
                        reps[(code + e) % 3]
                    };
                    (i, j, m)
                })
                .collect();
            let g = CoxeterGraph::numbered(n, &edges).map_err(|e| e.to_string())?;
            let found = find_dinfty_epimorphism(&g).map_err(|e| e.to_string())?;
            ensure(found.is_none(), || format!("epimorphism {found:?} for complete\n{g}"))?;
            checked += 1;
        }
    }

    for (g, _) in &log.entries {
        let evidence = surjects_onto_z(g);
        let (free, torsion) = abelianization(g);
        ensure(!evidence.surjects_onto_z && free == 0, || format!("free abelianization for\n{g}"))?;
        ensure(
            torsion.iter().all(|&d| d == 2) && torsion.len() == evidence.z2_rank,
            || format!("abelianization {torsion:?} vs rank {} for\n{g}", evidence.z2_rank),
        )?;
    }
    Ok(format!(
        "{checked} complete graphs without D∞ quotient; abelianization (Z/2)^k for {} graphs",
        log.len()
    ))
}

fn geometric_representation() -> Outcome {
    for m in 2..=12u32 {
        let g = CoxeterGraph::numbered(2, &[(0, 1, m)]).map_err(|e| e.to_string())?;
        let refl = Reflections::new(&g);
        let id = DMatrix::<f64>::identity(2, 2);
        for i in 0..2 {
            let s = refl.generator(i);
            let err = (s * s - &id).amax();
            ensure(err <= 1e-12, || format!("σ{i}² off by {err:e} for m = {m}"))?;
        }
        let st = refl.generator(0) * refl.generator(1);
        let mut power = id.clone();
        for k in 1..=m {
            power = &power * &st;
            let err = (&power - &id).amax();
            if k < m {
                ensure(err > 1e-8, || format!("(σ0σ1)^{k} = I but m = {m}"))?;
            } else {
                ensure(err <= 1e-8, || format!("(σ0σ1)^{m} off by {err:e}"))?;
            }
        }
    }
    let mut count = 0;
    for l in 2..=12u32 {
        for m in l..=12 {
            for n in m..=12 {
                let g = CoxeterGraph::triangle(l, m, n).map_err(|e| e.to_string())?;
                let sig = signature(&gram_matrix(&g), 1e-9);
                let expected = match classify_triangle(l, m, n).map_err(|e| e.to_string())?.geometry {
                    Geometry::Spherical => Signature::new(3, 0, 0),
                    Geometry::Euclidean => Signature::new(2, 1, 0),
                    Geometry::Hyperbolic => Signature::new(2, 0, 1),
                };
                ensure(sig == expected, || format!("({l},{m},{n}) signature {sig:?}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("labels 2..=12 realized; {count} triangle signatures match"))
}

fn hyperbolic_witness() -> Outcome {
    let tol = Tolerances::default();
    let t = CoxeterGraph::triangle(2, 3, 7).map_err(|e| e.to_string())?;
    let cert = find_loxodromic(&t, 6, &tol)
        .map_err(|e| e.to_string())?
        .ok_or("no loxodromic word of length ≤ 6 in (2,3,7)")?;
    ensure(cert.spectral_radius > 1.0 + 1e-6, || format!("ρ = {}", cert.spectral_radius))?;
    let word = t.word_names(&cert.word).join("");

    let mut words = 0;
    let mut worst: f64 = 0.0;
    for (l, m, n) in [(3, 3, 3), (2, 4, 4), (2, 3, 6)] {
        let g = CoxeterGraph::triangle(l, m, n).map_err(|e| e.to_string())?;
        let refl = Reflections::new(&g);
        for len in 1..=8 {
            for w in words_of_length(3, len) {
                let rho = spectral_radius(&refl.word(&w).map_err(|e| e.to_string())?.entries)
                    .map_err(|e| e.to_string())?;
                worst = worst.max((rho - 1.0).abs());
                ensure((rho - 1.0).abs() <= 1e-4, || {
                    format!("({l},{m},{n}) word {:?} has ρ = {rho}", g.word_names(&w))
                })?;
                words += 1;
            }
        }
    }
    Ok(format!(
        "(2,3,7): {word} has ρ = {:.9}; {words} euclidean words within {worst:.1e} of 1",
        cert.spectral_radius
    ))
}

fn metric_toolkit() -> Outcome {
    let err = |e: crate::metricspace::MetricError| e.to_string();
    let exhaustive = |m: &FiniteMetricGraph| delta_estimate(m, DeltaMode::Exhaustive).map(|d| d.delta);

    let dinf = CoxeterGraph::new(["s", "r"], &[]).map_err(|e| e.to_string())?;
    let mut previous = 0.0;
    for radius in 0..=10 {
        let ball = cayley_ball(&dinf, radius).map_err(err)?;
        ensure(ball.len() == 2 * radius + 1, || format!("D∞ ball of radius {radius} has {} nodes", ball.len()))?;
        let delta = exhaustive(&ball).map_err(err)?;
        ensure(delta == 0.0 && delta >= previous, || format!("δ = {delta} at radius {radius}"))?;
        previous = delta;
    }

    let mut rng = StdRng::seed_from_u64(SEED ^ 9);
    for size in 1..=40 {
        let edges: Vec<_> = (1..size).map(|v| (rng.gen_range(0..v), v)).collect();
        let tree = FiniteMetricGraph::from_edges(size, &edges).map_err(err)?;
        let delta = exhaustive(&tree).map_err(err)?;
        ensure(delta == 0.0, || format!("tree {edges:?} has δ = {delta}"))?;
    }

    let k3 = CoxeterGraph::numbered(3, &[(0, 1, 2), (1, 2, 2), (0, 2, 2)]).map_err(|e| e.to_string())?;
    let cube = cayley_ball(&k3, 3).map_err(err)?;
    ensure(cube.len() == 8, || format!("cube has {} nodes", cube.len()))?;
    let delta = exhaustive(&cube).map_err(err)?;
    ensure(delta == 1.0, || format!("cube δ = {delta}"))?;

    let a3 = CoxeterGraph::triangle(2, 3, 3).map_err(|e| e.to_string())?;
    let ball = cayley_ball(&a3, 12).map_err(err)?.len();
    ensure(ball == 24, || format!("Δ(2,3,3) ball has {ball} elements"))?;
    let mut orders = Vec::new();
    for ((l, m, n), expected) in [((2, 3, 3), 24), ((2, 3, 4), 48), ((2, 3, 5), 120)] {
        let g = CoxeterGraph::triangle(l, m, n).map_err(|e| e.to_string())?;
        let full = cayley_closure(&g).map_err(err)?;
        ensure(full.len() == expected, || format!("|Δ({l},{m},{n})| = {}", full.len()))?;
        ensure((0..full.len()).all(|v| full.degree(v) == 3), || {
            format!("Δ({l},{m},{n}) Cayley graph is not 3-regular")
        })?;
        orders.push(full.len().to_string());
    }
    Ok(format!(
        "δ = 0 on D∞ balls and 40 trees, δ = 1 on the cube; orders {}",
        orders.join(", ")
    ))
}

fn determinism() -> Outcome {
    for (name, source) in EXAMPLE_GRAPHS {
        let first = classify_source(source, OutputFormat::Json, &Tolerances::default())
            .map_err(|e| format!("{name}: {e}"))?;
        let second = classify_source(source, OutputFormat::Json, &Tolerances::default())
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(first == second, || format!("{name}: outputs differ"))?;
    }
    Ok(format!("{} example files, identical JSON on repeat", EXAMPLE_GRAPHS.len()))
}

/// Verdict status for each example file, for the README table and tests.
pub fn example_statuses() -> Vec<(&'static str, Status)> {
    EXAMPLE_GRAPHS
        .iter()
        .map(|(name, source)| {
            let g = CoxeterGraph::parse(source, crate::coxgraph::GraphFormat::sniff(source))
                .expect("example graphs parse");
            let v = classify_nl(&g, &georep::Tolerances::default()).expect("examples classify");
            (*name, v.status())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_normal_form_examples() {
        assert_eq!(smith_diagonal(vec![vec![2, 4], vec![6, 8]], 2), vec![2, 4]);
        assert_eq!(smith_diagonal(vec![vec![4, 0], vec![0, 6]], 2), vec![2, 12]);
        assert_eq!(smith_diagonal(vec![vec![0, 0]], 2), Vec::<i128>::new());
    }

    #[test]
    fn abelianization_examples() {
        // S3: one odd edge merges the generators.
        let s3 = CoxeterGraph::numbered(2, &[(0, 1, 3)]).unwrap();
        assert_eq!(abelianization(&s3), (0, vec![2]));
        let dinf = CoxeterGraph::numbered(2, &[]).unwrap();
        assert_eq!(abelianization(&dinf), (0, vec![2, 2]));
        let path = CoxeterGraph::numbered(3, &[(0, 1, 4), (1, 2, 3)]).unwrap();
        assert_eq!(abelianization(&path), (0, vec![2, 2]));
    }

    #[test]
    fn examples_have_expected_statuses() {
        let statuses = example_statuses();
        let get = |n: &str| statuses.iter().find(|(name, _)| *name == n).unwrap().1;
        assert_eq!(get("d_infinity.graph"), Status::NotNl);
        assert_eq!(get("z2_x_z2.graph"), Status::Nl);
        assert_eq!(get("z2_free_z2_x_z2.graph"), Status::NotNl);
        assert_eq!(get("s3.graph"), Status::Nl);
        assert_eq!(get("triangle_2_3_6.graph"), Status::Nl);
        assert_eq!(get("triangle_2_3_7.graph"), Status::NotNl);
        assert_eq!(get("path_3_4.graph"), Status::Unknown);
        assert_eq!(get("square_right_angled.json"), Status::NotNl);
    }

    #[test]
    fn random_graphs_are_disconnected() {
        let mut rng = StdRng::seed_from_u64(1);
        for _ in 0..50 {
            assert!(random_disconnected_graph(&mut rng).connected_components().len() >= 2);
        }
    }
}
