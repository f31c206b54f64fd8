// SPDX-License-Identifier: Apache-2.0

//! C ABI over the recapture toolkit.
//!
//! Every fallible function returns an `RcStatus`; `RC_STATUS_OK` is zero.
//! On failure, `rc_last_error_message` describes the most recent error on the
//! calling thread. Rankings and coverage series are opaque handles owned by
//! the caller and released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use recapture::coverage::{self, CoverageError, CoverageSeries, KeywordType};
use recapture::estimators::{self, CaptureSample, EstimateError};
use recapture::ranksim::{self, RankError, TruncatedRanking};
use recapture::records::{self, ExportFormat, RecordsError};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ZeroRecapture = 3,
    InvalidCounts = 4,
    InvalidSequence = 5,
    LengthMismatch = 6,
    DuplicateId = 7,
    EmptyInput = 8,
    DegenerateInput = 9,
    ParseError = 10,
    UnsupportedFormat = 11,
    EmptyTitle = 12,
    BufferTooSmall = 13,
    Panic = 99,
}

/// Bibliographic export format accepted by `rc_coverage_from_exports`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcFormat {
    Csv = 0,
    Ris = 1,
    Bibtex = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcKeywordType {
    TypeI = 1,
    TypeII = 2,
    TypeIII = 3,
    TypeIV = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RcEstimate {
    pub point: f64,
    pub stddev: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RcSimilarity {
    pub s: f64,
    pub kendall: f64,
    pub kendall_undefined: bool,
    pub overlap: f64,
    pub n: usize,
}

/// One depth of a coverage series.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RcCoveragePoint {
    pub n: usize,
    pub n1: usize,
    pub n2: usize,
    pub r: usize,
    pub t: f64,
    pub c: f64,
}

/// Opaque truncated ranking of 64-bit ids.
pub struct RcRanking(TruncatedRanking<u64>);

/// Opaque coverage series built from two bibliographic exports.
pub struct RcCoverage(CoverageSeries);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(RcStatus, String);

impl From<EstimateError> for Failure {
    fn from(e: EstimateError) -> Self {
        let status = match e {
            EstimateError::ZeroRecapture => RcStatus::ZeroRecapture,
            EstimateError::InvalidCounts(_) => RcStatus::InvalidCounts,
            EstimateError::InvalidSequence(_) => RcStatus::InvalidSequence,
        };
        Failure(status, e.to_string())
    }
}

impl From<RankError> for Failure {
    fn from(e: RankError) -> Self {
        let status = match e {
            RankError::LengthMismatch(..) => RcStatus::LengthMismatch,
            RankError::DuplicateId(_) => RcStatus::DuplicateId,
            RankError::Empty => RcStatus::EmptyInput,
            RankError::DegenerateInput(_) => RcStatus::DegenerateInput,
        };
        Failure(status, e.to_string())
    }
}

impl From<RecordsError> for Failure {
    fn from(e: RecordsError) -> Self {
        let status = match e {
            RecordsError::EmptyTitle => RcStatus::EmptyTitle,
            RecordsError::ParseError { .. } => RcStatus::ParseError,
            RecordsError::UnsupportedFormat(_) => RcStatus::UnsupportedFormat,
        };
        Failure(status, e.to_string())
    }
}

impl From<CoverageError> for Failure {
    fn from(e: CoverageError) -> Self {
        match e {
            CoverageError::Records(inner) => inner.into(),
            CoverageError::EmptyList(_) => Failure(RcStatus::EmptyInput, e.to_string()),
            _ => Failure(RcStatus::InvalidArgument, e.to_string()),
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(RcStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> RcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => RcStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            RcStatus::Panic
        }
    }
}

/// # Safety
/// `data` must point to `len` readable elements or be null with `len == 0`.
unsafe fn slice<'a, T>(data: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    // SAFETY: non-null and, per the caller contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

/// Message of the last failed call on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Two-sample Petersen estimate.
#[no_mangle]
pub extern "C" fn rc_petersen(n1: u64, n2: u64, r: u64, out: *mut RcEstimate) -> RcStatus {
    guard(|| {
        let est = estimators::petersen_estimate(n1, n2, r)?;
        write_out(out, RcEstimate { point: est.point, stddev: est.stddev })
    })
}

/// Schnabel estimate over `len` samples given as three parallel arrays.
///
/// # Safety
/// Each array must hold `len` readable elements.
#[no_mangle]
pub unsafe extern "C" fn rc_schnabel(
    caught: *const u64,
    recaptured: *const u64,
    marked_before: *const u64,
    len: usize,
    out: *mut RcEstimate,
) -> RcStatus {
    guard(|| {
        let c = slice(caught, len, "caught")?;
        let r = slice(recaptured, len, "recaptured")?;
        let m = slice(marked_before, len, "marked_before")?;
        let samples: Vec<CaptureSample> = (0..len).map(|i| CaptureSample::new(c[i], r[i], m[i])).collect();
        let est = estimators::schnabel_estimate(&samples)?;
        write_out(out, RcEstimate { point: est.point, stddev: est.stddev })
    })
}

/// Builds a ranking from `len` distinct ids, best first.
///
/// # Safety
/// `ids` must hold `len` readable elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_ranking_new(ids: *const u64, len: usize, out: *mut *mut RcRanking) -> RcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let ranking = TruncatedRanking::new(slice(ids, len, "ids")?.to_vec())?;
        write_out(out, Box::into_raw(Box::new(RcRanking(ranking))))
    })
}

/// # Safety
/// `ranking` must come from `rc_ranking_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rc_ranking_free(ranking: *mut RcRanking) {
    if !ranking.is_null() {
        drop(Box::from_raw(ranking));
    }
}

/// # Safety
/// `ranking` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn rc_ranking_len(ranking: *const RcRanking) -> usize {
    ranking.as_ref().map_or(0, |r| r.0.len())
}

unsafe fn pair<'a>(a: *const RcRanking, b: *const RcRanking) -> Result<(&'a RcRanking, &'a RcRanking), Failure> {
    Ok((a.as_ref().ok_or_else(|| null("first ranking"))?, b.as_ref().ok_or_else(|| null("second ranking"))?))
}

/// Similarity `S`, truncated Kendall tau and normalized overlap.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_similarity(a: *const RcRanking, b: *const RcRanking, out: *mut RcSimilarity) -> RcStatus {
    guard(|| {
        let (a, b) = pair(a, b)?;
        let r = ranksim::compare(&a.0, &b.0)?;
        write_out(
            out,
            RcSimilarity {
                s: r.s,
                kendall: r.kendall,
                kendall_undefined: r.kendall_undefined,
                overlap: r.overlap,
                n: r.n,
            },
        )
    })
}

/// Writes the overlap curve `R(0..=N)` into `out`, which must hold at least
/// `N + 1` values. `RC_STATUS_BUFFER_TOO_SMALL` is returned otherwise and
/// `written` still receives the required length.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must hold `capacity` writable
/// elements; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_overlap_curve(
    a: *const RcRanking,
    b: *const RcRanking,
    out: *mut usize,
    capacity: usize,
    written: *mut usize,
) -> RcStatus {
    guard(|| {
        let (a, b) = pair(a, b)?;
        let curve = ranksim::overlap_curve(&a.0, &b.0)?;
        write_out(written, curve.values.len())?;
        if capacity < curve.values.len() {
            return Err(Failure(
                RcStatus::BufferTooSmall,
                format!("curve needs {} values, buffer holds {capacity}", curve.values.len()),
            ));
        }
        if out.is_null() {
            return Err(null("curve buffer"));
        }
        ptr::copy_nonoverlapping(curve.values.as_ptr(), out, curve.values.len());
        Ok(())
    })
}

fn format_of(f: RcFormat) -> ExportFormat {
    match f {
        RcFormat::Csv => ExportFormat::Csv,
        RcFormat::Ris => ExportFormat::Ris,
        RcFormat::Bibtex => ExportFormat::Bibtex,
    }
}

/// Parses two exports and builds their coverage series up to `max_n`.
///
/// # Safety
/// `first` and `second` must hold `first_len` and `second_len` readable
/// bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_coverage_from_exports(
    first: *const u8,
    first_len: usize,
    first_format: RcFormat,
    second: *const u8,
    second_len: usize,
    second_format: RcFormat,
    max_n: usize,
    out: *mut *mut RcCoverage,
) -> RcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let a = records::parse_export(slice(first, first_len, "first")?, format_of(first_format), "first")?;
        let b = records::parse_export(slice(second, second_len, "second")?, format_of(second_format), "second")?;
        let series = coverage::build_series(&a, &b, max_n)?;
        write_out(out, Box::into_raw(Box::new(RcCoverage(series))))
    })
}

/// # Safety
/// `series` must come from `rc_coverage_from_exports` and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn rc_coverage_free(series: *mut RcCoverage) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// Number of depths in the series (0 for null).
///
/// # Safety
/// `series` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn rc_coverage_len(series: *const RcCoverage) -> usize {
    series.as_ref().map_or(0, |s| s.0.c.len())
}

/// Row `index` of the series; depth `n` is `index + 1`.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_coverage_point(series: *const RcCoverage, index: usize, out: *mut RcCoveragePoint) -> RcStatus {
    guard(|| {
        let s = &series.as_ref().ok_or_else(|| null("series"))?.0;
        if index >= s.c.len() {
            return Err(Failure(
                RcStatus::InvalidArgument,
                format!("index {index} out of range for {} depths", s.c.len()),
            ));
        }
        write_out(
            out,
            RcCoveragePoint {
                n: index + 1,
                n1: s.n1[index],
                n2: s.n2[index],
                r: s.r[index],
                t: s.t[index],
                c: s.c[index],
            },
        )
    })
}

/// Keyword class of the series with default smoothing. `exponent` receives
/// the growth exponent of `T`, or NaN when it is undefined; it may be null.
///
/// # Safety
/// `series` must be a live handle; `class` must be writable; `exponent` must
/// be writable or null.
#[no_mangle]
pub unsafe extern "C" fn rc_coverage_classify(
    series: *const RcCoverage,
    class: *mut RcKeywordType,
    exponent: *mut f64,
) -> RcStatus {
    guard(|| {
        let s = &series.as_ref().ok_or_else(|| null("series"))?.0;
        let k = coverage::classify_keyword(s);
        let kind = match k.class {
            KeywordType::TypeI => RcKeywordType::TypeI,
            KeywordType::TypeII => RcKeywordType::TypeII,
            KeywordType::TypeIII => RcKeywordType::TypeIII,
            KeywordType::TypeIV => RcKeywordType::TypeIV,
        };
        write_out(class, kind)?;
        if !exponent.is_null() {
            exponent.write(k.t_growth_exponent.unwrap_or(f64::NAN));
        }
        Ok(())
    })
}

