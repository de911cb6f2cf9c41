//! The infinite dihedral group acting on the real line.
//!
//! Elements are pairs `(p, q)` acting by `x ↦ (-1)^q x + 2p`. The two
//! generating reflections are `r = (0, 1)` (about 0) and `s = (1, 1)` (about
//! 1); the unit translation `t = sr = (1, 0)` moves every point by +2.
//! Products compose as functions: the left factor is applied last.

use std::fmt;
use std::ops::Mul;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::classify::EpimorphismWitness;
use crate::coxgraph::{CoxeterGraph, GraphError, Word};

/// Exact line coordinates.
pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DInftyError {
    #[error("`{0}` is not a generator of D∞ (expected `r` or `s`)")]
    InvalidLetter(char),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An element `t^p r^q` of D∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DInftyElement {
    /// Translation component, in units of 2 on the line.
    pub p: i64,
    /// `true` for orientation-reversing elements (reflections).
    pub q: bool,
}

impl DInftyElement {
    pub const IDENTITY: DInftyElement = DInftyElement { p: 0, q: false };
    pub const R: DInftyElement = DInftyElement { p: 0, q: true };
    pub const S: DInftyElement = DInftyElement { p: 1, q: true };
    /// `sr`, translation by +2.
    pub const T: DInftyElement = DInftyElement { p: 1, q: false };

    pub fn new(p: i64, q: bool) -> Self {
        DInftyElement { p, q }
    }

    pub fn is_identity(self) -> bool {
        self == Self::IDENTITY
    }

    pub fn inverse(self) -> Self {
        if self.q {
            self
        } else {
            DInftyElement::new(-self.p, false)
        }
    }

    pub fn pow(self, mut k: i64) -> Self {
        let mut base = if k < 0 { self.inverse() } else { self };
        k = k.abs();
        let mut acc = Self::IDENTITY;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    /// Image of `x` under this isometry.
    pub fn act(self, x: Rational) -> Rational {
        let signed = if self.q { -x } else { x };
        signed + Rational::from_integer(2 * self.p)
    }

    pub fn isometry_type(self) -> IsometryType {
        match (self.p, self.q) {
            (0, false) => IsometryType::Identity,
            // -x + 2p = x  ⇔  x = p
            (p, true) => IsometryType::EllipticReflection {
                fixed_point: Rational::from_integer(p),
            },
            (p, false) => IsometryType::LoxodromicTranslation {
                translation_length: 2 * p.unsigned_abs(),
                attracting_end: if p > 0 { End::PlusInfinity } else { End::MinusInfinity },
            },
        }
    }

    /// The unique reduced word in `r`, `s` for this element.
    ///
    /// Reduced words in D∞ alternate between the two letters, so each element
    /// has exactly one: `(sr)^p` / `(rs)^-p` for translations, `(sr)^(p-1) s`
    /// for reflections about `p ≥ 1`, and `(rs)^-p r` for `p ≤ 0`.
    pub fn normal_form(self) -> String {
        let p = self.p;
        let k = p.unsigned_abs() as usize;
        match (self.q, p >= 0) {
            (false, true) => "sr".repeat(k),
            (false, false) => "rs".repeat(k),
            (true, _) if p >= 1 => {
                let mut w = "sr".repeat(k - 1);
                w.push('s');
                w
            }
            (true, _) => {
                let mut w = "rs".repeat(k);
                w.push('r');
                w
            }
        }
    }

    /// Length of the normal form.
    pub fn word_length(self) -> u64 {
        let a = self.p.unsigned_abs();
        match (self.q, self.p >= 1) {
            (false, _) => 2 * a,
            (true, true) => 2 * a - 1,
            (true, false) => 2 * a + 1,
        }
    }
}

impl Mul for DInftyElement {
    type Output = DInftyElement;

    fn mul(self, rhs: DInftyElement) -> DInftyElement {
        let p2 = if self.q { -rhs.p } else { rhs.p };
        DInftyElement::new(self.p + p2, self.q ^ rhs.q)
    }
}

impl fmt::Display for DInftyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q as u8)
    }
}

/// Which end of the line an orbit escapes to under positive powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum End {
    #[serde(rename = "+inf")]
    PlusInfinity,
    #[serde(rename = "-inf")]
    MinusInfinity,
}

/// Isometry type of an element acting on the line. There are no parabolics
/// in this action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsometryType {
    Identity,
    EllipticReflection { fixed_point: Rational },
    LoxodromicTranslation { translation_length: u64, attracting_end: End },
}

impl IsometryType {
    pub fn kind(&self) -> &'static str {
        match self {
            IsometryType::Identity => "IDENTITY",
            IsometryType::EllipticReflection { .. } => "ELLIPTIC_REFLECTION",
            IsometryType::LoxodromicTranslation { .. } => "LOXODROMIC_TRANSLATION",
        }
    }

    pub fn is_loxodromic(&self) -> bool {
        matches!(self, IsometryType::LoxodromicTranslation { .. })
    }
}

/// Fold a word over `{r, s}` into an element. The empty word is the identity.
pub fn word_to_element(word: &str) -> Result<DInftyElement, DInftyError> {
    word.chars()
        .filter(|c| !c.is_whitespace())
        .try_fold(DInftyElement::IDENTITY, |acc, c| {
            let g = match c {
                'r' => DInftyElement::R,
                's' => DInftyElement::S,
                other => return Err(DInftyError::InvalidLetter(other)),
            };
            Ok(acc * g)
        })
}

/// Image of a single generator under the witness map: `A → r`, `B → s`,
/// `K → 1`.
pub fn generator_image(witness: &EpimorphismWitness, vertex: usize) -> DInftyElement {
    if witness.a.contains(&vertex) {
        DInftyElement::R
    } else if witness.b.contains(&vertex) {
        DInftyElement::S
    } else {
        DInftyElement::IDENTITY
    }
}

/// Image of a word of `W_Γ` in D∞ under the map encoded by the witness.
pub fn push_forward(
    graph: &CoxeterGraph,
    witness: &EpimorphismWitness,
    word: &Word,
) -> Result<DInftyElement, DInftyError> {
    word.check(graph)?;
    Ok(word
        .letters()
        .iter()
        .fold(DInftyElement::IDENTITY, |acc, &v| acc * generator_image(witness, v)))
}
