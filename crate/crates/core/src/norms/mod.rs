//! KS norm and the companion Kato, Rollnik, Morrey-Campanato and
//! Lebesgue norms of a potential.

mod aux;
mod ks;
mod lemma;
pub mod tables;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use aux::{apply_riesz, aux_norm};
pub use ks::{cube_double_integral, ks_norm, upper_bound_constant};
pub use lemma::{ks_lemma_ratio, LemmaRatio};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum NormKind<T: Real> {
    #[serde(rename = "KS")]
    Ks {
        alpha: T,
    },
    Kato,
    Rollnik,
    MorreyCampanato {
        alpha: T,
        p: T,
    },
    Lp {
        p: T,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormRequest<T: Real> {
    pub kind: NormKind<T>,
    /// `|V|^beta` is taken before the norm.
    pub beta: T,
    /// Coarsest and finest dyadic generation searched (KS).
    pub k_min: i32,
    pub k_max: i32,
    /// Cells per axis are `2^level`: per cube for KS, on the support box otherwise.
    pub level: u32,
    /// Evaluate every cube instead of pruning with the upper bound.
    pub exhaustive: bool,
    /// Radii per octave of the Morrey-Campanato ladder.
    pub radii_per_octave: usize,
}

impl<T: Real> NormRequest<T> {
    pub fn new(kind: NormKind<T>, d: usize) -> Self {
        let level = match (&kind, d) {
            (NormKind::Ks { .. }, 1) => 6,
            (NormKind::Ks { .. }, 2) => 4,
            (NormKind::Ks { .. }, _) => 3,
            (_, 1) => 10,
            (_, 2) => 7,
            _ => 5,
        };
        NormRequest {
            kind,
            beta: T::one(),
            k_min: -4,
            k_max: 4,
            level,
            exhaustive: false,
            radii_per_octave: 1,
        }
    }

    pub fn ks(d: usize, alpha: T, beta: T) -> Self {
        NormRequest {
            beta,
            ..Self::new(NormKind::Ks { alpha }, d)
        }
    }

    pub fn with_depth(mut self, k_min: i32, k_max: i32) -> Self {
        self.k_min = k_min;
        self.k_max = k_max;
        self
    }

    pub fn with_level(mut self, level: u32) -> Self {
        self.level = level;
        self
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        let dd = T::from_usize_lossy(d);
        let bad = |s: String| Err(Error::InvalidParameter(s));
        if !(self.beta > T::zero()) {
            return bad(format!("beta must be positive, got {}", self.beta));
        }
        if self.k_min > self.k_max {
            return bad(format!("k_min {} exceeds k_max {}", self.k_min, self.k_max));
        }
        if self.level > 12 {
            return bad(format!("level {} too large", self.level));
        }
        match self.kind {
            NormKind::Ks { alpha } if !(alpha > T::zero() && alpha < dd) => {
                bad(format!("KS needs 0 < alpha < d = {d}, got {alpha}"))
            }
            NormKind::MorreyCampanato { alpha, p } => {
                if !(alpha > T::zero()) {
                    return bad(format!("Morrey-Campanato needs alpha > 0, got {alpha}"));
                }
                if !(p >= T::one() && p <= dd / alpha) {
                    return bad(format!(
                        "Morrey-Campanato needs 1 <= p <= d/alpha, got p = {p}"
                    ));
                }
                if self.radii_per_octave == 0 {
                    return bad("radii_per_octave must be positive".into());
                }
                Ok(())
            }
            NormKind::Lp { p } if !(p >= T::one()) => bad(format!("Lp needs p >= 1, got {p}")),
            NormKind::Rollnik if d != 3 => {
                bad(format!("Rollnik norm is defined for d = 3, got {d}"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Cube { k: i32, m: Vec<i64> },
    Ball { x: Vec<f64>, r: f64 },
    Point { x: Vec<f64> },
}

/// Running maximum after each refinement level (generation, or radius index).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry<T: Real> {
    pub level: i32,
    pub value: T,
    pub evaluated: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormResult<T: Real> {
    pub value: T,
    pub witness: Option<Witness>,
    pub trace: Vec<TraceEntry<T>>,
    /// Cubes evaluated and cubes discarded by the upper bound (KS only).
    pub evaluated: usize,
    pub pruned: usize,
}

pub(crate) fn unit_ball_volume(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => std::f64::consts::PI,
        _ => 4.0 * std::f64::consts::PI / 3.0,
    }
}
