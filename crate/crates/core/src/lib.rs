// SPDX-License-Identifier: Apache-2.0

//! Capture-recapture tools for literature search.
//!
//! * [`estimators`]: Petersen and Schnabel population estimates.
//! * [`records`]: CSV / RIS / BibTeX exports and article identity.
//! * [`coverage`]: coverage of a literature versus search depth, stopping
//!   points and keyword classification.
//! * [`ranksim`]: similarity of truncated rankings.
//! * [`graphsim`]: churned preferential-attachment networks compared by
//!   eigenvector-centrality rankings.
//! * [`suites`]: seeded ranking scenarios.

pub mod cli;
pub mod coverage;
pub mod estimators;
pub mod graphsim;
pub mod ranksim;
pub mod records;
pub mod suites;

pub use coverage::{build_series, classify_keyword, information_gain, stopping_points, CoverageSeries};
pub use estimators::{petersen_estimate, samples_from_capture_sets, schnabel_estimate, CaptureSample, PopulationEstimate};
pub use ranksim::{kendall_tau_truncated, normalized_overlap, overlap_curve, pearson, similarity_s, TruncatedRanking};
pub use records::{dedup_prefix, normalize_key, parse_export, ArticleRecord, DedupKey, RankedList};
