//! Geometric (reflection) representation of a Coxeter group.
//!
//! Generator `i` acts on `R^n` with basis `α_1..α_n` by
//! `x ↦ x - 2 B(x, α_i) α_i`, where `B` is the Gram form with
//! `B_ii = 1`, `B_ij = -cos(π/m_ij)`, and `B_ij = -1` for absent pairs. The
//! signature of `B` tells spherical, Euclidean and hyperbolic triangle groups
//! apart, and a word whose matrix has spectral radius above one acts
//! loxodromically on the hyperbolic plane.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;
use thiserror::Error;

use crate::classify::{classify_triangle, Geometry};
use crate::coxgraph::{words_of_length, CoxeterGraph, GraphError, Word};

/// Numeric tolerances used across the representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `σ_i² = I` check.
    pub involution: f64,
    /// Form preservation residual, relative to `max(1, |M|_max)²`.
    pub form: f64,
    /// Zero band for Gram eigenvalues.
    pub eigen: f64,
    /// Margin above 1 a spectral radius must clear to certify a loxodromic.
    pub loxodromic_margin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            involution: 1e-12,
            form: 1e-9,
            eigen: 1e-9,
            loxodromic_margin: 1e-6,
        }
    }
}

/// Iteration cap for eigenvalue and norm iterations.
pub const MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeoRepError {
    #[error("generator index {index} out of range for a graph with {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("loxodromic certification needs a complete 3-vertex graph with hyperbolic labels")]
    NotHyperbolicTriangle,
    #[error("eigenvalue iteration did not converge after {MAX_ITERATIONS} iterations")]
    NonConvergence,
    #[error("numeric ambiguity: {0}")]
    Ambiguity(String),
}

/// Symmetric Gram form of a Coxeter graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(DMatrix<f64>);

impl GramMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.0.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

pub fn gram_matrix(graph: &CoxeterGraph) -> GramMatrix {
    let n = graph.len();
    GramMatrix(DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0
        } else {
            match graph.label(i, j) {
                Some(m) => -(PI / m as f64).cos(),
                None => -1.0,
            }
        }
    }))
}

/// Counts of positive, zero and negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub plus: usize,
    pub zero: usize,
    pub minus: usize,
}

impl Signature {
    pub const fn new(plus: usize, zero: usize, minus: usize) -> Self {
        Signature { plus, zero, minus }
    }
}

/// Eigenvalues above `tol`, within `[-tol, tol]`, and below `-tol`.
pub fn signature(gram: &GramMatrix, tol: f64) -> Signature {
    signature_of(&gram.eigenvalues(), tol)
}

fn signature_of(eigenvalues: &[f64], tol: f64) -> Signature {
    let plus = eigenvalues.iter().filter(|&&l| l > tol).count();
    let minus = eigenvalues.iter().filter(|&&l| l < -tol).count();
    Signature::new(plus, eigenvalues.len() - plus - minus, minus)
}

/// Signature with a guard against eigenvalues sitting just outside the zero
/// band. Such a value is re-examined with a band ten times wider; if it is
/// still borderline, a complete triangle is settled by the exact angle-sum
/// test and anything else is reported as ambiguous.
pub fn robust_signature(graph: &CoxeterGraph, tol: f64) -> Result<Signature, GeoRepError> {
    let ev = gram_matrix(graph).eigenvalues();
    let borderline = |t: f64| ev.iter().any(|l| l.abs() > t && l.abs() <= 10.0 * t);
    if !borderline(tol) {
        return Ok(signature_of(&ev, tol));
    }
    if !borderline(10.0 * tol) {
        return Ok(signature_of(&ev, 10.0 * tol));
    }
    if let Some((l, m, n)) = triangle_labels(graph) {
        let class = classify_triangle(l, m, n).map_err(|e| GeoRepError::Ambiguity(e.to_string()))?;
        return Ok(match class.geometry {
            Geometry::Spherical => Signature::new(3, 0, 0),
            Geometry::Euclidean => Signature::new(2, 1, 0),
            Geometry::Hyperbolic => Signature::new(2, 0, 1),
        });
    }
    Err(GeoRepError::Ambiguity(format!(
        "Gram eigenvalues {ev:?} straddle the zero band {tol:e}"
    )))
}

/// Labels of a complete 3-vertex graph.
pub fn triangle_labels(graph: &CoxeterGraph) -> Option<(u32, u32, u32)> {
    if graph.len() != 3 {
        return None;
    }
    Some((graph.label(0, 1)?, graph.label(1, 2)?, graph.label(0, 2)?))
}

/// A group element in the geometric representation.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoRepMatrix {
    pub entries: DMatrix<f64>,
    pub word: Word,
}

impl GeoRepMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Row-major entries.
    pub fn row_major(&self) -> Vec<f64> {
        self.entries.transpose().iter().copied().collect()
    }

    /// `max |MᵀBM - B|` scaled by `max(1, |M|_max)²`. Plain absolute
    /// residuals grow with the entries of long words in infinite groups, so
    /// the scaled value is the one compared against tolerances.
    pub fn form_residual(&self, gram: &GramMatrix) -> f64 {
        let m = &self.entries;
        let diff = m.transpose() * gram.matrix() * m - gram.matrix();
        let scale = m.amax().max(1.0);
        diff.amax() / (scale * scale)
    }

    /// Largest absolute entry of `M - I`.
    pub fn distance_to_identity(&self) -> f64 {
        let n = self.dim();
        (&self.entries - DMatrix::<f64>::identity(n, n)).amax()
    }
}

/// Matrix of the simple reflection `σ_i`: identity except row `i`, whose
/// entry `(i, j)` is `δ_ij - 2 B_ij`.
pub fn simple_reflection(graph: &CoxeterGraph, i: usize) -> Result<GeoRepMatrix, GeoRepError> {
    let n = graph.len();
    if i >= n {
        return Err(GeoRepError::IndexOutOfRange { index: i, len: n });
    }
    let gram = gram_matrix(graph);
    Ok(GeoRepMatrix {
        entries: reflection_from_gram(&gram, i),
        word: Word::from_letters(vec![i]),
    })
}

fn reflection_from_gram(gram: &GramMatrix, i: usize) -> DMatrix<f64> {
    let n = gram.dim();
    let mut m = DMatrix::<f64>::identity(n, n);
    for j in 0..n {
        m[(i, j)] -= 2.0 * gram.matrix()[(i, j)];
    }
    m
}

/// Precomputed simple reflections for repeated word evaluation.
#[derive(Debug, Clone)]
pub struct Reflections {
    gram: GramMatrix,
    sigma: Vec<DMatrix<f64>>,
}

impl Reflections {
    pub fn new(graph: &CoxeterGraph) -> Self {
        let gram = gram_matrix(graph);
        let sigma = (0..graph.len()).map(|i| reflection_from_gram(&gram, i)).collect();
        Reflections { gram, sigma }
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn generator(&self, i: usize) -> &DMatrix<f64> {
        &self.sigma[i]
    }

    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    /// Product of simple reflections, left letter applied last.
    pub fn word(&self, word: &Word) -> Result<GeoRepMatrix, GeoRepError> {
        let n = self.rank();
        let mut m = DMatrix::<f64>::identity(n, n);
        for &i in word.letters() {
            let s = self
                .sigma
                .get(i)
                .ok_or(GeoRepError::IndexOutOfRange { index: i, len: n })?;
            m *= s;
        }
        Ok(GeoRepMatrix {
            entries: m,
            word: word.clone(),
        })
    }
}

pub fn word_to_matrix(graph: &CoxeterGraph, word: &Word) -> Result<GeoRepMatrix, GeoRepError> {
    word.check(graph)?;
    Reflections::new(graph).word(word)
}

/// Largest absolute eigenvalue.
///
/// Eigenvalues come from a real Schur decomposition. For 3×3 matrices the
/// result is cross-checked against the roots of the characteristic cubic;
/// the check is relative 1e-6 when the radius is well above 1 and absolute
/// 1e-4 otherwise, since near-unipotent matrices have eigenvalue clusters
/// whose roots are only accurate to about the cube root of machine epsilon.
pub fn spectral_radius(m: &DMatrix<f64>) -> Result<f64, GeoRepError> {
    assert!(m.is_square(), "spectral radius of a non-square matrix");
    if m.nrows() == 0 {
        return Ok(0.0);
    }
    // Near-identity products can stall the QR sweep at the tightest
    // deflation threshold, so it is relaxed in steps.
    let schur = [f64::EPSILON, 16.0 * f64::EPSILON, 1e-12]
        .into_iter()
        .find_map(|eps| nalgebra::Schur::try_new(m.clone(), eps, MAX_ITERATIONS))
        .ok_or(GeoRepError::NonConvergence)?;
    let rho = schur
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if m.nrows() == 3 {
        let cubic = cubic_spectral_radius(m);
        let ok = if rho > 1.0 + 1e-3 {
            (rho - cubic).abs() <= 1e-6 * rho
        } else {
            (rho - cubic).abs() <= 1e-4
        };
        if !ok {
            return Err(GeoRepError::Ambiguity(format!(
                "spectral radius {rho} disagrees with characteristic-cubic root {cubic}"
            )));
        }
    }
    Ok(rho)
}

/// Spectral radius of a 3×3 matrix from the closed-form roots of its
/// characteristic polynomial `λ³ - tλ² + cλ - d`.
pub fn cubic_spectral_radius(m: &DMatrix<f64>) -> f64 {
    assert_eq!((m.nrows(), m.ncols()), (3, 3));
    let t = m.trace();
    let c = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)] + m[(0, 0)] * m[(2, 2)]
        - m[(0, 2)] * m[(2, 0)]
        + m[(1, 1)] * m[(2, 2)]
        - m[(1, 2)] * m[(2, 1)];
    let d = m.determinant();

    // λ = y + t/3 gives y³ + py + q = 0.
    let p = c - t * t / 3.0;
    let q = -2.0 * t * t * t / 27.0 + t * c / 3.0 - d;
    let shift = t / 3.0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);

    let real_root = if disc > 0.0 {
        let sq = disc.sqrt();
        (-q / 2.0 + sq).cbrt() + (-q / 2.0 - sq).cbrt() + shift
    } else {
        // Three real roots.
        let r = (-p / 3.0).max(0.0).sqrt();
        if r == 0.0 {
            return shift.abs();
        }
        let cos_arg = (-q / (2.0 * r * r * r)).clamp(-1.0, 1.0);
        let theta = cos_arg.acos() / 3.0;
        return (0..3)
            .map(|k| (2.0 * r * (theta - 2.0 * PI * k as f64 / 3.0).cos() + shift).abs())
            .fold(0.0, f64::max);
    };

    // Deflate: λ² + (r - t)λ + (c + r(r - t)) for the remaining pair.
    let b = real_root - t;
    let e = c + real_root * b;
    let qd = b * b - 4.0 * e;
    let pair = if qd >= 0.0 {
        let s = qd.sqrt();
        ((-b + s) / 2.0).abs().max(((-b - s) / 2.0).abs())
    } else {
        e.abs().sqrt()
    };
    real_root.abs().max(pair)
}

/// Operator 2-norm by power iteration on `AᵀA`.
pub fn operator_norm(a: &DMatrix<f64>) -> Result<f64, GeoRepError> {
    let ata = a.transpose() * a;
    let n = ata.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    let mut v = DVector::from_fn(n, |i, _| 1.0 + i as f64 * 0.1);
    v /= v.norm();
    let mut lambda = 0.0f64;
    for _ in 0..MAX_ITERATIONS {
        let w = &ata * &v;
        let next = v.dot(&w);
        let norm = w.norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        v = w / norm;
        if (next - lambda).abs() <= 1e-14 * next.abs() {
            return Ok(next.max(0.0).sqrt());
        }
        lambda = next;
    }
    Err(GeoRepError::NonConvergence)
}

/// Gelfand estimate `|M^k|^(1/k)` with `k = 2^squarings`, renormalising at
/// every squaring so large radii do not overflow. Always an upper bound on
/// the spectral radius; converges to it as `k` grows.
pub fn gelfand_estimate(m: &DMatrix<f64>, squarings: u32) -> Result<f64, GeoRepError> {
    let mut a = m.clone();
    let mut log_scale = 0.0f64;
    let s = operator_norm(&a)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    a /= s;
    log_scale += s.ln();
    for _ in 0..squarings {
        a = &a * &a;
        log_scale *= 2.0;
        let s = operator_norm(&a)?;
        if s == 0.0 {
            return Ok(0.0);
        }
        a /= s;
        log_scale += s.ln();
    }
    Ok((log_scale / 2f64.powi(squarings as i32)).exp())
}

/// Evidence that a word acts loxodromically on the hyperbolic plane.
#[derive(Debug, Clone, PartialEq)]
pub struct LoxodromicCertificate {
    pub word: Word,
    pub matrix: GeoRepMatrix,
    pub spectral_radius: f64,
    /// `ln ρ`.
    pub translation_length: f64,
}

/// Certify `word` in a hyperbolic triangle group: the ambient Gram form must
/// have signature (2,0,1) and the word's matrix spectral radius above
/// `1 + margin`.
pub fn loxodromic_certificate(
    graph: &CoxeterGraph,
    word: &Word,
    tol: &Tolerances,
) -> Result<Option<LoxodromicCertificate>, GeoRepError> {
    require_hyperbolic_triangle(graph, tol)?;
    certify_word(&Reflections::new(graph), word, tol)
}

fn require_hyperbolic_triangle(graph: &CoxeterGraph, tol: &Tolerances) -> Result<(), GeoRepError> {
    let (l, m, n) = triangle_labels(graph).ok_or(GeoRepError::NotHyperbolicTriangle)?;
    let class = classify_triangle(l, m, n).map_err(|_| GeoRepError::NotHyperbolicTriangle)?;
    if class.geometry != Geometry::Hyperbolic {
        return Err(GeoRepError::NotHyperbolicTriangle);
    }
    if robust_signature(graph, tol.eigen)? != Signature::new(2, 0, 1) {
        return Err(GeoRepError::Ambiguity(
            "hyperbolic triangle without Lorentzian Gram form".into(),
        ));
    }
    Ok(())
}

fn certify_word(
    refl: &Reflections,
    word: &Word,
    tol: &Tolerances,
) -> Result<Option<LoxodromicCertificate>, GeoRepError> {
    let matrix = refl.word(word)?;
    let rho = spectral_radius(&matrix.entries)?;
    if rho > 1.0 + tol.loxodromic_margin {
        Ok(Some(LoxodromicCertificate {
            word: word.clone(),
            spectral_radius: rho,
            translation_length: rho.ln(),
            matrix,
        }))
    } else {
        Ok(None)
    }
}

/// First certified word in lexicographic order over lengths `1..=max_len`.
pub fn find_loxodromic(
    graph: &CoxeterGraph,
    max_len: usize,
    tol: &Tolerances,
) -> Result<Option<LoxodromicCertificate>, GeoRepError> {
    require_hyperbolic_triangle(graph, tol)?;
    let refl = Reflections::new(graph);
    for len in 1..=max_len {
        for word in words_of_length(graph.len(), len) {
            if let Some(cert) = certify_word(&refl, &word, tol)? {
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[usize]) -> Word {
        Word::from_letters(letters.to_vec())
    }

    #[test]
    fn gram_examples() {
        let dinf = CoxeterGraph::numbered(2, &[]).unwrap();
        assert_eq!(
            gram_matrix(&dinf).matrix(),
            &DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0])
        );
        let k2 = CoxeterGraph::numbered(2, &[(0, 1, 2)]).unwrap();
        assert!((gram_matrix(&k2).matrix() - DMatrix::<f64>::identity(2, 2)).amax() < 1e-15);

        // a-b = 2, b-c = 3, a-c = 6
        let t = CoxeterGraph::triangle(2, 3, 6).unwrap();
        let expected = DMatrix::from_row_slice(
            3,
            3,
            &[
                1.0, 0.0, -(3f64.sqrt()) / 2.0, //
                0.0, 1.0, -0.5, //
                -(3f64.sqrt()) / 2.0, -0.5, 1.0,
            ],
        );
        assert!((gram_matrix(&t).matrix() - expected).amax() < 1e-15);
    }

    #[test]
    fn triangle_signatures() {
        let tol = 1e-9;
        let sig = |l, m, n| signature(&gram_matrix(&CoxeterGraph::triangle(l, m, n).unwrap()), tol);
        assert_eq!(sig(2, 3, 5), Signature::new(3, 0, 0));
        assert_eq!(sig(2, 3, 6), Signature::new(2, 1, 0));
        assert_eq!(sig(2, 3, 7), Signature::new(2, 0, 1));
    }

    #[test]
    fn robust_signature_falls_back_to_exact_triangle_test() {
        // (2,3,7) Gram eigenvalues are about -0.0304, 1 and 2.03. A band of
        // 0.01 makes -0.0304 borderline, and the widened band 0.1 makes 1.0
        // borderline, so only the exact fallback can answer.
        let g = CoxeterGraph::triangle(2, 3, 7).unwrap();
        assert_eq!(robust_signature(&g, 0.01).unwrap(), Signature::new(2, 0, 1));
        assert_eq!(robust_signature(&g, 1e-9).unwrap(), Signature::new(2, 0, 1));
        // Eigenvalues about -0.239, 0.838, 1.16, 2.24: same situation at 0.05
        // but with no exact fallback on four vertices.
        let g4 = CoxeterGraph::numbered(
            4,
            &[(0, 1, 3), (1, 2, 3), (2, 3, 3), (0, 2, 2), (1, 3, 2), (0, 3, 7)],
        )
        .unwrap();
        assert!(matches!(
            robust_signature(&g4, 0.05),
            Err(GeoRepError::Ambiguity(_))
        ));
        assert_eq!(robust_signature(&g4, 1e-9).unwrap(), Signature::new(3, 0, 1));
    }

    #[test]
    fn reflections_are_involutions() {
        let g = CoxeterGraph::numbered(4, &[(0, 1, 3), (1, 2, 5), (0, 3, 2)]).unwrap();
        for i in 0..4 {
            let s = simple_reflection(&g, i).unwrap();
            let sq = &s.entries * &s.entries;
            assert!((sq - DMatrix::<f64>::identity(4, 4)).amax() < 1e-12);
        }
        assert!(matches!(
            simple_reflection(&g, 4),
            Err(GeoRepError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn commuting_reflections() {
        let g = CoxeterGraph::numbered(2, &[(0, 1, 2)]).unwrap();
        let m = word_to_matrix(&g, &w(&[0, 1])).unwrap();
        assert!(m.distance_to_identity() > 1e-3);
        let m2 = word_to_matrix(&g, &w(&[0, 1, 0, 1])).unwrap();
        assert!(m2.distance_to_identity() < 1e-12);
    }

    #[test]
    fn triangle_relator() {
        let g = CoxeterGraph::triangle(3, 3, 3).unwrap();
        let m = word_to_matrix(&g, &w(&[0, 1, 0, 1, 0, 1])).unwrap();
        assert!(m.distance_to_identity() < 1e-9);
    }

    #[test]
    fn word_matrices() {
        let g = CoxeterGraph::triangle(2, 3, 7).unwrap();
        assert!(word_to_matrix(&g, &Word::empty()).unwrap().distance_to_identity() == 0.0);
        assert!(word_to_matrix(&g, &w(&[2, 2])).unwrap().distance_to_identity() < 1e-12);
        assert!(word_to_matrix(&g, &w(&[0, 3])).is_err());
    }

    // Frozen from an independent dense eigensolver (numpy.linalg.eigvals)
    // applied to σ_a σ_b σ_c for the (2,3,7) triangle.
    const RHO_237_ABC: f64 = 1.635_573_129_922_221;

    #[test]
    fn spectral_radius_examples() {
        let g = CoxeterGraph::triangle(2, 3, 7).unwrap();
        let id = DMatrix::<f64>::identity(3, 3);
        assert!((spectral_radius(&id).unwrap() - 1.0).abs() < 1e-12);
        let a = word_to_matrix(&g, &w(&[0])).unwrap();
        assert!((spectral_radius(&a.entries).unwrap() - 1.0).abs() < 1e-12);
        let abc = word_to_matrix(&g, &w(&[0, 1, 2])).unwrap();
        let rho = spectral_radius(&abc.entries).unwrap();
        assert!((rho - RHO_237_ABC).abs() < 1e-9, "rho = {rho}");
        assert!((cubic_spectral_radius(&abc.entries) - RHO_237_ABC).abs() < 1e-9);
    }

    #[test]
    fn near_identity_products_converge() {
        // (bc)^3 = 1 in (3,3,3); the computed product is the identity up to
        // round-off and stalls the strictest Schur threshold.
        let t = CoxeterGraph::triangle(3, 3, 3).unwrap();
        let m = word_to_matrix(&t, &w(&[1, 2, 1, 2, 1, 2])).unwrap();
        assert!(m.distance_to_identity() < 1e-14);
        assert!((spectral_radius(&m.entries).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gelfand_bounds_radius() {
        let g = CoxeterGraph::triangle(2, 3, 7).unwrap();
        let abc = word_to_matrix(&g, &w(&[0, 1, 2])).unwrap();
        let est = gelfand_estimate(&abc.entries, 8).unwrap();
        assert!(est >= RHO_237_ABC - 1e-12);
        assert!((est - RHO_237_ABC) / RHO_237_ABC < 1e-2, "est = {est}");
        // Rotation: radius 1 and every power has norm 1.
        let ab = word_to_matrix(&CoxeterGraph::triangle(3, 3, 3).unwrap(), &w(&[0, 1])).unwrap();
        let r = spectral_radius(&ab.entries).unwrap();
        assert!((r - 1.0).abs() < 1e-9);
        assert!(gelfand_estimate(&ab.entries, 8).unwrap() >= r - 1e-12);
    }

    #[test]
    fn certificates() {
        let tol = Tolerances::default();
        let g = CoxeterGraph::triangle(2, 3, 7).unwrap();
        let cert = loxodromic_certificate(&g, &w(&[0, 1, 2]), &tol).unwrap().unwrap();
        assert!(cert.spectral_radius > 1.0 + 1e-6);
        assert!((cert.translation_length - RHO_237_ABC.ln()).abs() < 1e-9);
        assert!(loxodromic_certificate(&g, &w(&[0]), &tol).unwrap().is_none());

        let found = find_loxodromic(&g, 6, &tol).unwrap().unwrap();
        assert_eq!(found.word.letters(), &[0, 1, 2]);

        let euclid = CoxeterGraph::triangle(3, 3, 3).unwrap();
        assert_eq!(
            loxodromic_certificate(&euclid, &w(&[0, 1, 2]), &tol),
            Err(GeoRepError::NotHyperbolicTriangle)
        );
        let incomplete = CoxeterGraph::numbered(3, &[(0, 1, 3)]).unwrap();
        assert_eq!(
            find_loxodromic(&incomplete, 6, &tol).unwrap_err(),
            GeoRepError::NotHyperbolicTriangle
        );
    }

    #[test]
    fn form_preserved_on_long_words() {
        let g = CoxeterGraph::numbered(4, &[(0, 1, 3), (2, 3, 7)]).unwrap();
        let refl = Reflections::new(&g);
        let word = w(&[0, 1, 2, 3, 1, 0, 3, 2, 0, 2, 1, 3, 0, 1, 2, 3, 2, 1, 0, 3]);
        let m = refl.word(&word).unwrap();
        assert!(m.form_residual(refl.gram()) < 1e-9);
    }
}
