// SPDX-License-Identifier: Apache-2.0

use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use recapture_ffi::*;

fn last_error() -> String {
    let p = rc_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn ranking(ids: &[u64]) -> *mut RcRanking {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { rc_ranking_new(ids.as_ptr(), ids.len(), &mut h) }, RcStatus::Ok);
    h
}

#[test]
fn estimates() {
    let mut est = RcEstimate::default();
    assert_eq!(rc_petersen(43, 55, 20, &mut est), RcStatus::Ok);
    assert_eq!(est.point, 118.25);
    assert!((est.stddev - 14.298).abs() < 0.005);

    assert_eq!(rc_petersen(10, 10, 0, &mut est), RcStatus::ZeroRecapture);
    assert!(!last_error().is_empty());
    assert_eq!(rc_petersen(10, 10, 2, ptr::null_mut()), RcStatus::NullPointer);

    let (c, r, m) = ([43u64, 55], [0u64, 20], [0u64, 43]);
    let status = unsafe { rc_schnabel(c.as_ptr(), r.as_ptr(), m.as_ptr(), 2, &mut est) };
    assert_eq!(status, RcStatus::Ok);
    assert!((est.point - 118.25).abs() < 1e-9);

    let bad = [0u64, 50];
    let status = unsafe { rc_schnabel(c.as_ptr(), bad.as_ptr(), m.as_ptr(), 2, &mut est) };
    assert_eq!(status, RcStatus::InvalidSequence);
}

#[test]
fn rankings_and_similarity() {
    let ids: Vec<u64> = (0..1000).collect();
    let rev: Vec<u64> = ids.iter().rev().copied().collect();
    let (a, b) = (ranking(&ids), ranking(&rev));
    unsafe {
        assert_eq!(rc_ranking_len(a), 1000);
        let mut sim = RcSimilarity::default();
        assert_eq!(rc_similarity(a, a, &mut sim), RcStatus::Ok);
        assert_eq!((sim.s, sim.kendall, sim.overlap), (1.0, 1.0, 1.0));
        assert_eq!(rc_similarity(a, b, &mut sim), RcStatus::Ok);
        assert!((sim.s - (1.0 - 83_333_500.0 / 333_833_500.0)).abs() < 1e-15);
        assert_eq!(sim.kendall, -1.0);

        let mut curve = vec![0usize; 1001];
        let mut written = 0;
        assert_eq!(rc_overlap_curve(a, b, curve.as_mut_ptr(), 10, &mut written), RcStatus::BufferTooSmall);
        assert_eq!(written, 1001);
        assert_eq!(rc_overlap_curve(a, b, curve.as_mut_ptr(), curve.len(), &mut written), RcStatus::Ok);
        assert_eq!((curve[0], curve[500], curve[1000]), (0, 0, 1000));

        let short = ranking(&[1, 2, 3]);
        assert_eq!(rc_similarity(a, short, &mut sim), RcStatus::LengthMismatch);
        assert_eq!(rc_similarity(a, ptr::null(), &mut sim), RcStatus::NullPointer);

        rc_ranking_free(short);
        rc_ranking_free(a);
        rc_ranking_free(b);
        rc_ranking_free(ptr::null_mut());
    }

    let mut h = ptr::null_mut();
    let dup = [4u64, 5, 4];
    assert_eq!(unsafe { rc_ranking_new(dup.as_ptr(), 3, &mut h) }, RcStatus::DuplicateId);
    assert!(h.is_null());
    assert!(last_error().contains("duplicate"));
}

fn titles_csv(prefix: &str, n: usize) -> String {
    let mut s = String::from("title,authors,year\n");
    for i in 0..n {
        s.push_str(&format!("{prefix} study {i},Doe J.,2001\n"));
    }
    s
}

#[test]
fn coverage_handle() {
    let (a, b) = (titles_csv("alpha", 120), titles_csv("beta", 120));
    let mut h = ptr::null_mut();
    unsafe {
        let status = rc_coverage_from_exports(a.as_ptr(), a.len(), RcFormat::Csv, b.as_ptr(), b.len(), RcFormat::Csv, 500, &mut h);
        assert_eq!(status, RcStatus::Ok);
        assert_eq!(rc_coverage_len(h), 120);
        let mut p = RcCoveragePoint::default();
        assert_eq!(rc_coverage_point(h, 119, &mut p), RcStatus::Ok);
        assert_eq!((p.n, p.n1, p.n2, p.r), (120, 120, 120, 0));
        assert_eq!(p.t, 14_400.0);
        assert_eq!(rc_coverage_point(h, 120, &mut p), RcStatus::InvalidArgument);

        let mut class = RcKeywordType::TypeIV;
        let mut exponent = 0.0;
        assert_eq!(rc_coverage_classify(h, &mut class, &mut exponent), RcStatus::Ok);
        assert_eq!(class, RcKeywordType::TypeI);
        assert!((1.8..=2.2).contains(&exponent));
        assert_eq!(rc_coverage_classify(h, &mut class, ptr::null_mut()), RcStatus::Ok);
        rc_coverage_free(h);

        let ris = b"TY  - JOUR\nTI  - No end marker\n";
        let status = rc_coverage_from_exports(a.as_ptr(), a.len(), RcFormat::Csv, ris.as_ptr(), ris.len(), RcFormat::Ris, 500, &mut h);
        assert_eq!(status, RcStatus::ParseError);
        let empty = b"title,authors,year\n";
        let status = rc_coverage_from_exports(a.as_ptr(), a.len(), RcFormat::Csv, empty.as_ptr(), empty.len(), RcFormat::Csv, 500, &mut h);
        assert_eq!(status, RcStatus::EmptyInput);
    }
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(rc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

const C_PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "recapture.h"

int main(void) {
    RcEstimate est;
    if (rc_petersen(43, 55, 20, &est) != RC_STATUS_OK || est.point != 118.25) return 1;
    if (rc_petersen(1, 1, 0, &est) != RC_STATUS_ZERO_RECAPTURE) return 2;
    if (rc_last_error_message() == NULL) return 3;

    uint64_t ids[4] = {1, 2, 3, 4};
    uint64_t swapped[4] = {2, 1, 3, 4};
    RcRanking *a = NULL, *b = NULL;
    if (rc_ranking_new(ids, 4, &a) != RC_STATUS_OK) return 4;
    if (rc_ranking_new(swapped, 4, &b) != RC_STATUS_OK) return 5;
    RcSimilarity sim;
    if (rc_similarity(a, b, &sim) != RC_STATUS_OK) return 6;
    /* one missing overlap at depth 1 against a worst case of 30 */
    if (fabs(sim.s - (1.0 - 1.0 / 30.0)) > 1e-12) return 7;
    rc_ranking_free(a);
    rc_ranking_free(b);
    printf("ok %s\n", rc_version());
    return 0;
}
"#;

/// Directory holding the cdylib: the test binary sits in `target/<profile>/deps`.
fn library_dir() -> PathBuf {
    std::env::current_exe().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler available, skipping");
        return;
    }
    let lib_dir = library_dir();
    if !lib_dir.join("librecapture_ffi.so").exists() && !lib_dir.join("librecapture_ffi.dylib").exists() {
        eprintln!("cdylib not found in {}, skipping", lib_dir.display());
        return;
    }
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg("-L")
        .arg(&lib_dir)
        .args(["-lrecapture_ffi", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe)
        .env("LD_LIBRARY_PATH", &lib_dir)
        .env("DYLD_LIBRARY_PATH", &lib_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "C program exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
