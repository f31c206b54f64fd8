// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use recapture::records::{ArticleRecord, RankedList};

pub fn record(title: &str) -> ArticleRecord {
    ArticleRecord {
        title: title.to_string(),
        authors: vec!["A. Author".to_string()],
        year: None,
        venue: None,
        rank: 0,
        source_label: String::new(),
    }
}

pub fn list(label: &str, titles: &[String]) -> RankedList {
    RankedList::from_records(label, titles.iter().map(|t| record(t)).collect())
}

pub fn names(prefix: &str, range: std::ops::Range<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix} {i}")).collect()
}

/// Two engines that agree on nothing.
pub fn disjoint_fixture(len: usize) -> (RankedList, RankedList) {
    (list("a", &names("a", 0..len)), list("b", &names("b", 0..len)))
}

/// Common articles stay at 2 up to depth 20, then the second engine lists
/// 30 articles the first engine already returned (R grows with slope 1 up
/// to depth 50), then the engines diverge again.
pub fn min_max_fixture(len: usize) -> (RankedList, RankedList) {
    assert!(len > 50);
    let a = names("x", 1..len + 1);
    let mut b = vec!["x 1".to_string(), "x 2".to_string()];
    b.extend(names("y", 3..21));
    b.extend(names("x", 3..33));
    b.extend(names("y", 51..len + 1));
    (list("a", &a), list("b", &b))
}
