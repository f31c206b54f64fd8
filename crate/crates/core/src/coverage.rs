// SPDX-License-Identifier: Apache-2.0

//! Coverage of a body of literature as a function of search depth.
//!
//! For two engines compared at depth `n`, `N1` and `N2` count the unique
//! articles in each top-`n` prefix and `R` counts the articles found by
//! both. The Petersen estimate `T = N1 N2 / R` sizes the literature, and
//! `C = (N1 + N2 - R) / T` is the fraction of it already seen. `R` is
//! floored at 1 inside `T` only.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::records::{normalize_key, RankedList, RecordsError};

/// Depth used when the caller does not choose one.
pub const DEFAULT_MAX_N: usize = 500;
pub const DEFAULT_WINDOW: usize = 5;
/// Default prominence threshold as a fraction of the range of `C`.
pub const DEFAULT_PROMINENCE_FRACTION: f64 = 0.05;
/// Shortest series that can be classified.
pub const MIN_CLASSIFIABLE_N: usize = 50;
/// Accepted band for the log-log slope of `T` in a quadratic (Type I) tail.
pub const QUADRATIC_SLOPE_BAND: (f64, f64) = (1.8, 2.2);
/// Terminal coverage below which a decreasing tail counts as converging to zero.
pub const TERMINAL_COVERAGE_MAX: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverageError {
    #[error("ranked list {0:?} is empty")]
    EmptyList(String),
    #[error("max_n must be at least 1")]
    ZeroDepth,
    #[error("smoothing window {window} must be smaller than the series length {len}")]
    WindowTooLarge { window: usize, len: usize },
    #[error("smoothing window must be a positive odd integer, got {0}")]
    InvalidWindow(usize),
    #[error("series too short: {0}")]
    TooShort(String),
    #[error(transparent)]
    Records(#[from] RecordsError),
}

impl CoverageError {
    pub fn code(&self) -> &'static str {
        match self {
            CoverageError::EmptyList(_) => "EmptyList",
            CoverageError::ZeroDepth => "ZeroDepth",
            CoverageError::WindowTooLarge { .. } => "WindowTooLarge",
            CoverageError::InvalidWindow(_) => "InvalidWindow",
            CoverageError::TooShort(_) => "TooShort",
            CoverageError::Records(e) => e.code(),
        }
    }
}

/// Per-depth counts and estimates. Index `i` holds depth `n = i + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageSeries {
    pub max_n: usize,
    pub n1: Vec<usize>,
    pub n2: Vec<usize>,
    pub r: Vec<usize>,
    pub t: Vec<f64>,
    pub c: Vec<f64>,
}

impl CoverageSeries {
    /// Builds `T` and `C` from the raw counts.
    pub fn from_counts(n1: Vec<usize>, n2: Vec<usize>, r: Vec<usize>) -> Self {
        let max_n = n1.len();
        let mut t = Vec::with_capacity(max_n);
        let mut c = Vec::with_capacity(max_n);
        for i in 0..max_n {
            let (a, b, shared) = (n1[i] as f64, n2[i] as f64, r[i] as f64);
            let total = a * b / shared.max(1.0);
            t.push(total);
            c.push(if total > 0.0 { (a + b - shared) / total } else { 0.0 });
        }
        Self {
            max_n,
            n1,
            n2,
            r,
            t,
            c,
        }
    }

    /// `n,N1,N2,R,T,C` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,N1,N2,R,T,C\n");
        for i in 0..self.max_n {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                i + 1,
                self.n1[i],
                self.n2[i],
                self.r[i],
                self.t[i],
                self.c[i]
            ));
        }
        out
    }
}

pub fn build_series(
    list1: &RankedList,
    list2: &RankedList,
    max_n: usize,
) -> Result<CoverageSeries, CoverageError> {
    for list in [list1, list2] {
        if list.is_empty() {
            return Err(CoverageError::EmptyList(list.label.clone()));
        }
    }
    if max_n == 0 {
        return Err(CoverageError::ZeroDepth);
    }
    let depth = max_n.min(list1.len().max(list2.len()));
    let (mut seen1, mut seen2) = (HashSet::new(), HashSet::new());
    let (mut n1, mut n2, mut r) = (Vec::new(), Vec::new(), Vec::new());
    let mut shared = 0;
    for i in 0..depth {
        if let Some(rec) = list1.entries().get(i) {
            let key = normalize_key(rec)?;
            if !seen1.contains(&key) {
                if seen2.contains(&key) {
                    shared += 1;
                }
                seen1.insert(key);
            }
        }
        if let Some(rec) = list2.entries().get(i) {
            let key = normalize_key(rec)?;
            if !seen2.contains(&key) {
                if seen1.contains(&key) {
                    shared += 1;
                }
                seen2.insert(key);
            }
        }
        n1.push(seen1.len());
        n2.push(seen2.len());
        r.push(shared);
    }
    Ok(CoverageSeries::from_counts(n1, n2, r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtremumKind {
    LocalMin,
    LocalMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoppingPoint {
    pub n: usize,
    pub kind: ExtremumKind,
    /// Smoothed coverage at `n`.
    pub c_value: f64,
    pub prominence: f64,
}

/// Smoothing and significance settings for stopping-point detection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoppingConfig {
    pub window: usize,
    /// `None` means `DEFAULT_PROMINENCE_FRACTION` of the range of `C`.
    pub min_prominence: Option<f64>,
}

impl Default for StoppingConfig {
    fn default() -> Self {
        Self {
            window: DEFAULT_WINDOW,
            min_prominence: None,
        }
    }
}

impl StoppingConfig {
    pub fn prominence_for(&self, series: &CoverageSeries) -> f64 {
        self.min_prominence.unwrap_or_else(|| {
            let (lo, hi) = min_max(&series.c);
            DEFAULT_PROMINENCE_FRACTION * (hi - lo)
        })
    }
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    xs.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// Centered moving average; the window shrinks symmetrically-truncated at
/// the edges.
pub fn moving_average(xs: &[f64], window: usize) -> Vec<f64> {
    let half = window / 2;
    let mut prefix = Vec::with_capacity(xs.len() + 1);
    prefix.push(0.0);
    for x in xs {
        prefix.push(prefix.last().unwrap() + x);
    }
    (0..xs.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(xs.len());
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
struct Turn {
    index: usize,
    value: f64,
    kind: Option<ExtremumKind>,
}

/// Strict interior extrema of `xs`. A run of equal values is one point,
/// located at its middle.
fn raw_extrema(xs: &[f64]) -> Vec<Turn> {
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        match runs.last_mut() {
            Some((_, end)) if xs[*end] == *x => *end = i,
            _ => runs.push((i, i)),
        }
    }
    let mut out = Vec::new();
    for w in runs.windows(3) {
        let (prev, cur, next) = (xs[w[0].0], xs[w[1].0], xs[w[2].0]);
        let kind = if cur < prev && cur < next {
            ExtremumKind::LocalMin
        } else if cur > prev && cur > next {
            ExtremumKind::LocalMax
        } else {
            continue;
        };
        out.push(Turn {
            index: (w[1].0 + w[1].1) / 2,
            value: cur,
            kind: Some(kind),
        });
    }
    out
}

fn prominence_at(points: &[Turn], i: usize) -> f64 {
    let v = points[i].value;
    (v - points[i - 1].value)
        .abs()
        .min((v - points[i + 1].value).abs())
}

/// Local extrema of the smoothed coverage curve whose prominence reaches
/// `min_prominence`.
///
/// Prominence is measured against the neighbouring opposite extrema, or the
/// series endpoints. Insignificant extrema are cancelled pairwise, smallest
/// first, so a wiggle next to a deep minimum does not mask it.
pub fn stopping_points(
    series: &CoverageSeries,
    window: usize,
    min_prominence: f64,
) -> Result<Vec<StoppingPoint>, CoverageError> {
    if window == 0 || window.is_multiple_of(2) {
        return Err(CoverageError::InvalidWindow(window));
    }
    if window >= series.max_n {
        return Err(CoverageError::WindowTooLarge {
            window,
            len: series.max_n,
        });
    }
    let smoothed = moving_average(&series.c, window);
    let last = smoothed.len() - 1;
    let mut points = vec![Turn {
        index: 0,
        value: smoothed[0],
        kind: None,
    }];
    points.extend(raw_extrema(&smoothed));
    points.push(Turn {
        index: last,
        value: smoothed[last],
        kind: None,
    });

    loop {
        let weakest = (1..points.len() - 1)
            .map(|i| (i, prominence_at(&points, i)))
            .filter(|&(_, p)| p < min_prominence)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let Some((i, p)) = weakest else { break };
        let left_close = (points[i].value - points[i - 1].value).abs() == p;
        let partner = if left_close { i - 1 } else { i + 1 };
        if points[partner].kind.is_some() {
            let lo = i.min(partner);
            points.drain(lo..lo + 2);
        } else {
            points.remove(i);
        }
    }

    Ok((1..points.len() - 1)
        .map(|i| StoppingPoint {
            n: points[i].index + 1,
            kind: points[i].kind.expect("interior points are extrema"),
            c_value: points[i].value,
            prominence: prominence_at(&points, i),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KeywordType {
    /// Coverage converges to zero while `T` grows quadratically.
    TypeI,
    /// One local maximum and one local minimum.
    TypeII,
    /// A local minimum only.
    TypeIII,
    /// No significant feature.
    TypeIV,
}

impl fmt::Display for KeywordType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            KeywordType::TypeI => "TypeI",
            KeywordType::TypeII => "TypeII",
            KeywordType::TypeIII => "TypeIII",
            KeywordType::TypeIV => "TypeIV",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordClass {
    pub class: KeywordType,
    pub stopping_points: Vec<StoppingPoint>,
    pub rationale: String,
    /// Least-squares slope of `ln T` against `ln n` over the final half.
    pub t_growth_exponent: Option<f64>,
}

/// Growth exponent of `T` over the last half of the series.
pub fn t_growth_exponent(series: &CoverageSeries) -> Option<f64> {
    let start = series.max_n / 2;
    let pts: Vec<(f64, f64)> = (start..series.max_n)
        .filter(|&i| series.t[i] > 0.0)
        .map(|i| (((i + 1) as f64).ln(), series.t[i].ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn classify_keyword(series: &CoverageSeries) -> KeywordClass {
    classify_keyword_with(series, &StoppingConfig::default())
}

/// Precedence is II, then III, then I, then IV.
pub fn classify_keyword_with(series: &CoverageSeries, config: &StoppingConfig) -> KeywordClass {
    let exponent = t_growth_exponent(series);
    let class = |class, points, rationale: String| KeywordClass {
        class,
        stopping_points: points,
        rationale,
        t_growth_exponent: exponent,
    };

    let identical = (0..series.max_n)
        .all(|i| series.r[i] == series.n1[i] && series.r[i] == series.n2[i]);
    if identical {
        return class(KeywordType::TypeIV, vec![], "degenerate: identical inputs".into());
    }
    if series.max_n < MIN_CLASSIFIABLE_N || config.window >= series.max_n {
        return class(
            KeywordType::TypeIV,
            vec![],
            format!(
                "insufficient data: {} points, need at least {}",
                series.max_n, MIN_CLASSIFIABLE_N
            ),
        );
    }
    let points = match stopping_points(series, config.window, config.prominence_for(series)) {
        Ok(p) => p,
        Err(e) => return class(KeywordType::TypeIV, vec![], format!("no analysis: {e}")),
    };
    let first_of = |kind| points.iter().find(|p| p.kind == kind).map(|p| p.n);
    match (first_of(ExtremumKind::LocalMin), first_of(ExtremumKind::LocalMax)) {
        (Some(lo), Some(hi)) => {
            return class(
                KeywordType::TypeII,
                points,
                format!("local minimum of C at n={lo} and local maximum at n={hi}"),
            )
        }
        (Some(lo), None) => {
            return class(
                KeywordType::TypeIII,
                points,
                format!("local minimum of C at n={lo}, no significant maximum"),
            )
        }
        _ => {}
    }

    let has_extrema = !points.is_empty();
    let tail_start = series.max_n / 2;
    let terminal = series.c[series.max_n - 1];
    let tail_decreasing = terminal < series.c[tail_start];
    let quadratic = exponent
        .is_some_and(|e| (QUADRATIC_SLOPE_BAND.0..=QUADRATIC_SLOPE_BAND.1).contains(&e));
    if !has_extrema && tail_decreasing && terminal < TERMINAL_COVERAGE_MAX && quadratic {
        return class(
            KeywordType::TypeI,
            points,
            format!(
                "coverage decreasing to {terminal:.4} with T growth exponent {:.3}",
                exponent.unwrap_or(f64::NAN)
            ),
        );
    }
    let detail = match exponent {
        Some(e) => format!("terminal C {terminal:.4}, T growth exponent {e:.3}"),
        None => format!("terminal C {terminal:.4}"),
    };
    class(
        KeywordType::TypeIV,
        points,
        format!("no significant feature ({detail})"),
    )
}

/// First difference of `C`, one element shorter than the series.
pub fn information_gain(series: &CoverageSeries) -> Vec<f64> {
    series.c.windows(2).map(|w| w[1] - w[0]).collect()
}
