use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::binom::Backend;
use crate::error::{Error, Result};

/// A probability distribution over coalition sizes `0..=n-1`.
#[derive(Debug, Clone, PartialEq)]
pub enum BetaSpec {
    /// Uniform over `0..=n-1`.
    Shapley,
    /// All mass on one size.
    Dirac(usize),
    /// Uniform over the closed interval `lo..=hi`.
    TruncatedUniform { lo: usize, hi: usize },
    /// One weight per size, `n` entries summing to 1.
    Explicit(Vec<f64>),
}

const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

impl BetaSpec {
    /// Uniform on `|S0| ..= |S0| + round(c (n - 1 - |S0|))`.
    ///
    /// `c → 0` degenerates to the Dirac mass at `|S0|`; `c = 1` with an
    /// empty `S0` is the Shapley distribution.
    pub fn truncated_from(n: usize, s0_size: usize, c: f64) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "c must lie in (0, 1], got {c}"
            )));
        }
        if s0_size >= n {
            return Err(Error::SeedsCoverGraph);
        }
        let span = (c * (n - 1 - s0_size) as f64).round() as usize;
        Ok(BetaSpec::TruncatedUniform {
            lo: s0_size,
            hi: s0_size + span,
        })
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidParameter("beta needs n >= 1".into()));
        }
        match self {
            BetaSpec::Shapley => Ok(()),
            BetaSpec::Dirac(s) if *s < n => Ok(()),
            BetaSpec::Dirac(s) => Err(Error::InvalidParameter(format!(
                "dirac size {s} outside 0..={}",
                n - 1
            ))),
            BetaSpec::TruncatedUniform { lo, hi } if lo <= hi && *hi < n => Ok(()),
            BetaSpec::TruncatedUniform { lo, hi } => Err(Error::InvalidParameter(format!(
                "uniform bounds {lo}..={hi} invalid for sizes 0..={}",
                n - 1
            ))),
            BetaSpec::Explicit(weights) => {
                if weights.len() != n {
                    return Err(Error::InvalidParameter(format!(
                        "explicit beta has {} weights, expected {n}",
                        weights.len()
                    )));
                }
                if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
                    return Err(Error::InvalidParameter(
                        "explicit beta weights must be finite and non-negative".into(),
                    ));
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
                    return Err(Error::InvalidParameter(format!(
                        "explicit beta weights sum to {total}, not 1"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Sizes that may carry positive mass.
    pub fn support(&self, n: usize) -> RangeInclusive<usize> {
        match self {
            BetaSpec::Shapley | BetaSpec::Explicit(_) => 0..=n - 1,
            BetaSpec::Dirac(s) => *s..=*s,
            BetaSpec::TruncatedUniform { lo, hi } => *lo..=*hi,
        }
    }

    pub fn weight(&self, n: usize, s: usize) -> f64 {
        match self {
            BetaSpec::Shapley => 1.0 / n as f64,
            BetaSpec::Dirac(d) => (s == *d) as u8 as f64,
            BetaSpec::TruncatedUniform { lo, hi } if (*lo..=*hi).contains(&s) => {
                1.0 / (hi - lo + 1) as f64
            }
            BetaSpec::TruncatedUniform { .. } => 0.0,
            BetaSpec::Explicit(weights) => weights.get(s).copied().unwrap_or(0.0),
        }
    }

    pub fn weight_exact(&self, n: usize, s: usize) -> BigRational {
        let ratio = |p: usize, q: usize| BigRational::new(BigInt::from(p), BigInt::from(q));
        match self {
            BetaSpec::Shapley => ratio(1, n),
            BetaSpec::Dirac(d) => ratio((s == *d) as usize, 1),
            BetaSpec::TruncatedUniform { lo, hi } if (*lo..=*hi).contains(&s) => {
                ratio(1, hi - lo + 1)
            }
            BetaSpec::TruncatedUniform { .. } => BigRational::zero(),
            BetaSpec::Explicit(weights) => weights
                .get(s)
                .and_then(|&w| BigRational::from_float(w))
                .unwrap_or_else(BigRational::zero),
        }
    }

    pub(crate) fn weight_in<B: Backend>(&self, backend: &B, n: usize, s: usize) -> B::Value {
        match self {
            BetaSpec::Explicit(weights) => backend.lift_f64(weights.get(s).copied().unwrap_or(0.0)),
            _ => backend.lift_exact(&self.weight_exact(n, s)),
        }
    }

    /// `(lo, hi)` when the mass is uniform on `lo..=hi`.
    pub fn uniform_interval(&self, n: usize) -> Option<(usize, usize)> {
        match self {
            BetaSpec::Shapley => Some((0, n - 1)),
            BetaSpec::Dirac(s) => Some((*s, *s)),
            BetaSpec::TruncatedUniform { lo, hi } => Some((*lo, *hi)),
            BetaSpec::Explicit(_) => None,
        }
    }

    pub fn is_shapley(&self) -> bool {
        matches!(self, BetaSpec::Shapley)
    }
}

impl fmt::Display for BetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaSpec::Shapley => write!(f, "shapley"),
            BetaSpec::Dirac(s) => write!(f, "dirac:{s}"),
            BetaSpec::TruncatedUniform { lo, hi } => write!(f, "uniform:{lo},{hi}"),
            BetaSpec::Explicit(w) => write!(f, "explicit[{}]", w.len()),
        }
    }
}
