// SPDX-License-Identifier: Apache-2.0

//! Closed-population capture-recapture estimators.
//!
//! The two-sample (Petersen) estimator and its multi-sample weighted
//! extension (Schnabel index), each paired with the standard deviation
//! formula that accompanies it in the mark-and-recapture literature.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EstimateError {
    #[error("no marked recaptures: the estimate is undefined")]
    ZeroRecapture,
    #[error("invalid counts: {0}")]
    InvalidCounts(String),
    #[error("invalid capture sequence: {0}")]
    InvalidSequence(String),
}

impl EstimateError {
    /// Stable machine-readable code, used by the CLI and the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            EstimateError::ZeroRecapture => "ZeroRecapture",
            EstimateError::InvalidCounts(_) => "InvalidCounts",
            EstimateError::InvalidSequence(_) => "InvalidSequence",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Petersen,
    Schnabel,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Petersen => f.write_str("Petersen"),
            Method::Schnabel => f.write_str("Schnabel"),
        }
    }
}

/// Estimated total population with its standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationEstimate {
    pub point: f64,
    pub stddev: f64,
    pub method: Method,
}

/// One sampling event of a multi-sample census.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaptureSample {
    /// Individuals caught in this sample.
    pub caught: u64,
    /// Caught individuals that already carried a mark.
    pub recaptured: u64,
    /// Marked individuals in the population just before this sample.
    pub marked_before: u64,
}

impl CaptureSample {
    pub fn new(caught: u64, recaptured: u64, marked_before: u64) -> Self {
        Self {
            caught,
            recaptured,
            marked_before,
        }
    }
}

/// Two-sample Petersen estimate `n1 * n2 / r`.
///
/// The standard deviation is
/// `sqrt((n1+1)(n2+1)(n1-r)(n2-r) / ((r+1)^2 (r+2)))`.
pub fn petersen_estimate(n1: u64, n2: u64, r: u64) -> Result<PopulationEstimate, EstimateError> {
    if r == 0 {
        return Err(EstimateError::ZeroRecapture);
    }
    if r > n1.min(n2) {
        return Err(EstimateError::InvalidCounts(format!(
            "recaptures r={r} exceed min(n1={n1}, n2={n2})"
        )));
    }
    let (n1, n2, r) = (n1 as f64, n2 as f64, r as f64);
    let point = n1 * n2 / r;
    let variance =
        (n1 + 1.0) * (n2 + 1.0) * (n1 - r) * (n2 - r) / ((r + 1.0) * (r + 1.0) * (r + 2.0));
    Ok(PopulationEstimate {
        point,
        stddev: variance.sqrt(),
        method: Method::Petersen,
    })
}

/// Schnabel index `sum(n_i m_i) / sum(r_i)`.
///
/// The `stddev` field holds `sqrt(sum(r_i) / sum(n_i m_i)^2)` exactly as the
/// classical formula is usually printed. Note that this quantity is on the
/// scale of `1 / N`, not `N`; the delta-method standard error of the point
/// estimate is approximately `point^2 * stddev`.
pub fn schnabel_estimate(samples: &[CaptureSample]) -> Result<PopulationEstimate, EstimateError> {
    if samples.len() < 2 {
        return Err(EstimateError::InvalidSequence(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    let first = samples[0];
    if first.marked_before != 0 || first.recaptured != 0 {
        return Err(EstimateError::InvalidSequence(
            "first sample must have no marked individuals and no recaptures".into(),
        ));
    }
    let mut prev_marked = 0;
    for (i, s) in samples.iter().enumerate() {
        if s.recaptured > s.caught {
            return Err(EstimateError::InvalidSequence(format!(
                "sample {}: recaptured {} > caught {}",
                i + 1,
                s.recaptured,
                s.caught
            )));
        }
        if s.recaptured > s.marked_before {
            return Err(EstimateError::InvalidSequence(format!(
                "sample {}: recaptured {} > marked {}",
                i + 1,
                s.recaptured,
                s.marked_before
            )));
        }
        if s.marked_before < prev_marked {
            return Err(EstimateError::InvalidSequence(format!(
                "sample {}: marked count decreased from {} to {}",
                i + 1,
                prev_marked,
                s.marked_before
            )));
        }
        prev_marked = s.marked_before;
    }

    // promote before multiplying; the square below overflows u64 quickly
    let weighted: f64 = samples
        .iter()
        .map(|s| s.caught as f64 * s.marked_before as f64)
        .sum();
    let recaptured: f64 = samples.iter().map(|s| s.recaptured as f64).sum();
    if recaptured == 0.0 {
        return Err(EstimateError::ZeroRecapture);
    }
    if weighted <= 0.0 {
        return Err(EstimateError::InvalidSequence(
            "sum of caught * marked is zero".into(),
        ));
    }
    Ok(PopulationEstimate {
        point: weighted / recaptured,
        stddev: (recaptured / (weighted * weighted)).sqrt(),
        method: Method::Schnabel,
    })
}

/// Derives per-sample counts from raw capture sets. An individual counts as
/// marked once it has appeared in any earlier set.
pub fn samples_from_capture_sets<T, S>(captures: &[S]) -> Vec<CaptureSample>
where
    T: Ord + Hash + Clone,
    S: AsRef<[T]>,
{
    let mut marked: BTreeSet<T> = BTreeSet::new();
    captures
        .iter()
        .map(|set| {
            let unique: BTreeSet<&T> = set.as_ref().iter().collect();
            let recaptured = unique.iter().filter(|id| marked.contains(**id)).count();
            let sample = CaptureSample::new(
                unique.len() as u64,
                recaptured as u64,
                marked.len() as u64,
            );
            marked.extend(unique.into_iter().cloned());
            sample
        })
        .collect()
}
