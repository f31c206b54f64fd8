// SPDX-License-Identifier: Apache-2.0

//! Similarity of truncated rankings.
//!
//! The central object is the overlap curve `R(j)`: the number of ids common
//! to the top-`j` prefixes of two rankings. Identical rankings trace the
//! line `y = x`, rankings with nothing in common trace `y = 0`. The
//! similarity `S` is one minus the squared distance of `R` from `y = x`,
//! normalized by the distance between `y = x` and `y = 0`, so agreement near
//! the top of the rankings weighs more than agreement near the bottom.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("rankings have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("ranking contains duplicate id at position {0}")]
    DuplicateId(usize),
    #[error("ranking is empty")]
    Empty,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

impl RankError {
    pub fn code(&self) -> &'static str {
        match self {
            RankError::LengthMismatch(..) => "LengthMismatch",
            RankError::DuplicateId(_) => "DuplicateId",
            RankError::Empty => "Empty",
            RankError::DegenerateInput(_) => "DegenerateInput",
        }
    }
}

/// Ordered, duplicate-free top-N list of entity ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<T>", into = "Vec<T>")]
pub struct TruncatedRanking<T: Eq + Hash + Clone> {
    ids: Vec<T>,
}

impl<T: Eq + Hash + Clone> TruncatedRanking<T> {
    pub fn new(ids: Vec<T>) -> Result<Self, RankError> {
        if ids.is_empty() {
            return Err(RankError::Empty);
        }
        let mut seen = HashSet::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if !seen.insert(id) {
                return Err(RankError::DuplicateId(i + 1));
            }
        }
        Ok(Self { ids })
    }

    pub fn ids(&self) -> &[T] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn reversed(&self) -> Self {
        let mut ids = self.ids.clone();
        ids.reverse();
        Self { ids }
    }
}

impl<T: Eq + Hash + Clone> TryFrom<Vec<T>> for TruncatedRanking<T> {
    type Error = RankError;

    fn try_from(ids: Vec<T>) -> Result<Self, Self::Error> {
        Self::new(ids)
    }
}

impl<T: Eq + Hash + Clone> From<TruncatedRanking<T>> for Vec<T> {
    fn from(r: TruncatedRanking<T>) -> Self {
        r.ids
    }
}

/// `values[j]` = size of the intersection of both top-`j` prefixes, for
/// `j = 0..=N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapCurve {
    pub values: Vec<usize>,
}

impl OverlapCurve {
    /// Renders `j,R` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,R\n");
        for (j, r) in self.values.iter().enumerate() {
            out.push_str(&format!("{j},{r}\n"));
        }
        out
    }
}

fn check_lengths<T: Eq + Hash + Clone>(
    q1: &TruncatedRanking<T>,
    q2: &TruncatedRanking<T>,
) -> Result<usize, RankError> {
    if q1.len() != q2.len() {
        return Err(RankError::LengthMismatch(q1.len(), q2.len()));
    }
    Ok(q1.len())
}

pub fn overlap_curve<T: Eq + Hash + Clone>(
    q1: &TruncatedRanking<T>,
    q2: &TruncatedRanking<T>,
) -> Result<OverlapCurve, RankError> {
    let n = check_lengths(q1, q2)?;
    let mut values = Vec::with_capacity(n + 1);
    values.push(0);
    let mut in_first: HashSet<&T> = HashSet::with_capacity(n);
    let mut in_second: HashSet<&T> = HashSet::with_capacity(n);
    let mut common = 0;
    for (a, b) in q1.ids.iter().zip(&q2.ids) {
        // a and b enter their prefixes together; a == b counts once
        if a == b {
            common += 1;
        } else {
            if in_second.contains(a) {
                common += 1;
            }
            if in_first.contains(b) {
                common += 1;
            }
        }
        in_first.insert(a);
        in_second.insert(b);
        values.push(common);
    }
    Ok(OverlapCurve { values })
}

/// Squared error between the identity line and `curve`.
fn squared_error_from_identity(curve: &OverlapCurve) -> f64 {
    curve
        .values
        .iter()
        .enumerate()
        .map(|(j, &r)| {
            let d = j as f64 - r as f64;
            d * d
        })
        .sum()
}

/// `S = 1 - E(I, R) / E(I, Z)` with `E(I, Z) = N(N+1)(2N+1)/6`.
pub fn similarity_s<T: Eq + Hash + Clone>(
    q1: &TruncatedRanking<T>,
    q2: &TruncatedRanking<T>,
) -> Result<f64, RankError> {
    let curve = overlap_curve(q1, q2)?;
    Ok(similarity_from_curve(&curve))
}

pub fn similarity_from_curve(curve: &OverlapCurve) -> f64 {
    let n = (curve.values.len() - 1) as f64;
    let worst = n * (n + 1.0) * (2.0 * n + 1.0) / 6.0;
    if worst == 0.0 {
        return 1.0;
    }
    1.0 - squared_error_from_identity(curve) / worst
}

/// Kendall tau over the pairs present in both rankings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KendallTau {
    pub value: f64,
    pub concordant: u64,
    pub discordant: u64,
    /// No pair was present in both rankings; `value` is 0.
    pub undefined: bool,
}

/// Pairs missing from either ranking are neither concordant nor discordant.
pub fn kendall_tau_truncated<T: Eq + Hash + Clone>(
    q1: &TruncatedRanking<T>,
    q2: &TruncatedRanking<T>,
) -> KendallTau {
    let pos2: HashMap<&T, usize> = q2.ids.iter().enumerate().map(|(i, id)| (id, i)).collect();
    // positions in q2 of the shared ids, in q1 order
    let mut seq: Vec<usize> = q1.ids.iter().filter_map(|id| pos2.get(id).copied()).collect();
    let m = seq.len() as u64;
    let total = m * m.saturating_sub(1) / 2;
    if total == 0 {
        return KendallTau {
            value: 0.0,
            concordant: 0,
            discordant: 0,
            undefined: true,
        };
    }
    let discordant = count_inversions(&mut seq);
    let concordant = total - discordant;
    KendallTau {
        value: (concordant as f64 - discordant as f64) / total as f64,
        concordant,
        discordant,
        undefined: false,
    }
}

/// Merge sort that returns the number of inverted pairs.
fn count_inversions(v: &mut [usize]) -> u64 {
    let mut buf = vec![0; v.len()];
    sort_count(v, &mut buf)
}

fn sort_count(v: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = {
        let (left, right) = v.split_at_mut(mid);
        sort_count(left, &mut buf[..mid]) + sort_count(right, &mut buf[mid..])
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[i] <= v[j] {
            buf[k] = v[i];
            i += 1;
        } else {
            buf[k] = v[j];
            inv += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    inv
}

/// `|set(q1) ∩ set(q2)| / N`.
pub fn normalized_overlap<T: Eq + Hash + Clone>(
    q1: &TruncatedRanking<T>,
    q2: &TruncatedRanking<T>,
) -> Result<f64, RankError> {
    let n = check_lengths(q1, q2)?;
    let first: HashSet<&T> = q1.ids.iter().collect();
    let shared = q2.ids.iter().filter(|id| first.contains(id)).count();
    Ok(shared as f64 / n as f64)
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, RankError> {
    if xs.len() != ys.len() {
        return Err(RankError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(RankError::DegenerateInput("need at least two points".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(RankError::DegenerateInput("constant sequence".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// All four measures for one pair of rankings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    pub s: f64,
    pub kendall: f64,
    pub kendall_undefined: bool,
    pub overlap: f64,
    pub n: usize,
}

pub fn compare<T: Eq + Hash + Clone>(
    q1: &TruncatedRanking<T>,
    q2: &TruncatedRanking<T>,
) -> Result<SimilarityReport, RankError> {
    let tau = kendall_tau_truncated(q1, q2);
    Ok(SimilarityReport {
        s: similarity_s(q1, q2)?,
        kendall: tau.value,
        kendall_undefined: tau.undefined,
        overlap: normalized_overlap(q1, q2)?,
        n: q1.len(),
    })
}
