//! Point-to-point distances.
//!
//! All sums run left to right over coordinates, so a distance is a pure
//! function of its inputs down to the last bit regardless of which search
//! backend asked for it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::is_code;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMetric {
    #[default]
    Euclidean,
    Manhattan,
    /// Count of mismatching categorical codes.
    Hamming,
}

impl DistanceMetric {
    pub const ALL: [DistanceMetric; 3] = [
        DistanceMetric::Euclidean,
        DistanceMetric::Manhattan,
        DistanceMetric::Hamming,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DistanceMetric::Euclidean => "euclidean",
            DistanceMetric::Manhattan => "manhattan",
            DistanceMetric::Hamming => "hamming",
        }
    }

    /// Whether the metric is a monotone sum of per-axis terms, which is what
    /// kd-tree pruning needs.
    pub fn is_axis_decomposable(&self) -> bool {
        matches!(self, DistanceMetric::Euclidean | DistanceMetric::Manhattan)
    }

    /// Per-axis term of the search surrogate (squared gap for euclidean).
    #[inline]
    pub(crate) fn axis_term(&self, gap: f64) -> f64 {
        match self {
            DistanceMetric::Euclidean => gap * gap,
            DistanceMetric::Manhattan => gap.abs(),
            DistanceMetric::Hamming => {
                if gap == 0.0 {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    /// Order-preserving surrogate used during neighbor search. Squared
    /// distance for euclidean, the distance itself otherwise. No validation.
    #[inline]
    pub(crate) fn surrogate(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = 0.0;
        match self {
            DistanceMetric::Euclidean => {
                for (a, b) in x.iter().zip(y) {
                    let d = a - b;
                    acc += d * d;
                }
            }
            DistanceMetric::Manhattan => {
                for (a, b) in x.iter().zip(y) {
                    acc += (a - b).abs();
                }
            }
            DistanceMetric::Hamming => {
                for (a, b) in x.iter().zip(y) {
                    if a != b {
                        acc += 1.0;
                    }
                }
            }
        }
        acc
    }

    /// Maps a surrogate value back to the distance.
    #[inline]
    pub(crate) fn finish(&self, surrogate: f64) -> f64 {
        match self {
            DistanceMetric::Euclidean => surrogate.sqrt(),
            _ => surrogate,
        }
    }
}

impl fmt::Display for DistanceMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DistanceMetric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        DistanceMetric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown metric {s:?} (expected euclidean, manhattan or hamming)"))
    }
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// `sqrt(sum((x_i - y_i)^2))`.
pub fn euclidean(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    Ok(DistanceMetric::Euclidean.finish(DistanceMetric::Euclidean.surrogate(x, y)))
}

pub fn squared_euclidean(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    Ok(DistanceMetric::Euclidean.surrogate(x, y))
}

/// `sum(|x_i - y_i|)`.
pub fn manhattan(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    Ok(DistanceMetric::Manhattan.surrogate(x, y))
}

/// Number of coordinates whose codes differ. Inputs must be non-negative
/// integer codes; equality is exact.
pub fn hamming(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    if let Some(&bad) = x.iter().chain(y).find(|v| !is_code(**v)) {
        return Err(Error::NotACode(bad));
    }
    Ok(DistanceMetric::Hamming.surrogate(x, y))
}

pub fn distance(metric: DistanceMetric, x: &[f64], y: &[f64]) -> Result<f64> {
    match metric {
        DistanceMetric::Euclidean => euclidean(x, y),
        DistanceMetric::Manhattan => manhattan(x, y),
        DistanceMetric::Hamming => hamming(x, y),
    }
}
