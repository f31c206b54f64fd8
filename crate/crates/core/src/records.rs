// SPDX-License-Identifier: Apache-2.0

//! Bibliographic export parsing and article identity.
//!
//! Two records are the same article when their titles match and they are
//! authored by the same people. Titles are compared after Unicode-aware
//! lowercasing, diacritic folding and punctuation removal; authors are
//! compared as a set of family names.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordsError {
    #[error("title is empty after normalization")]
    EmptyTitle,
    #[error("parse error at {location}: {message}")]
    ParseError { location: String, message: String },
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
}

impl RecordsError {
    pub fn code(&self) -> &'static str {
        match self {
            RecordsError::EmptyTitle => "EmptyTitle",
            RecordsError::ParseError { .. } => "ParseError",
            RecordsError::UnsupportedFormat(_) => "UnsupportedFormat",
        }
    }

    fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        RecordsError::ParseError {
            location: location.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleRecord {
    pub title: String,
    pub authors: Vec<String>,
    pub year: Option<i32>,
    pub venue: Option<String>,
    /// 1-based position in the source result list.
    pub rank: usize,
    pub source_label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DedupKey {
    pub normalized_title: String,
    pub normalized_authors: BTreeSet<String>,
}

impl fmt::Display for DedupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.normalized_title)?;
        f.write_str(" | ")?;
        let authors: Vec<&str> = self.normalized_authors.iter().map(String::as_str).collect();
        f.write_str(&authors.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedList {
    pub label: String,
    entries: Vec<ArticleRecord>,
}

impl RankedList {
    /// Builds a list, assigning ranks 1..=len in the given order.
    pub fn from_records(label: impl Into<String>, records: Vec<ArticleRecord>) -> Self {
        let label = label.into();
        let entries = records
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.rank = i + 1;
                r.source_label = label.clone();
                r
            })
            .collect();
        Self { label, entries }
    }

    pub fn entries(&self) -> &[ArticleRecord] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExportFormat {
    Csv,
    Ris,
    Bibtex,
}

impl FromStr for ExportFormat {
    type Err = RecordsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportFormat::Csv),
            "ris" => Ok(ExportFormat::Ris),
            "bib" | "bibtex" => Ok(ExportFormat::Bibtex),
            other => Err(RecordsError::UnsupportedFormat(other.to_string())),
        }
    }
}

/// Lowercase, fold diacritics, drop every non-alphanumeric character and
/// collapse whitespace.
pub fn normalize_text(s: &str) -> String {
    let folded: String = s
        .nfkd()
        .filter(|c| !is_combining_mark(*c))
        .flat_map(char::to_lowercase)
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect();
    folded.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Family name of a display name. `"Fortunato, S."` and `"S. Fortunato"`
/// both yield `"fortunato"`.
pub fn family_name(author: &str) -> Option<String> {
    let author = author.trim();
    let raw = match author.split_once(',') {
        Some((family, _)) => family,
        None => author.split_whitespace().last().unwrap_or(""),
    };
    let name = normalize_text(raw).replace(' ', "");
    (!name.is_empty()).then_some(name)
}

pub fn normalize_key(record: &ArticleRecord) -> Result<DedupKey, RecordsError> {
    let normalized_title = normalize_text(&record.title);
    if normalized_title.is_empty() {
        return Err(RecordsError::EmptyTitle);
    }
    let normalized_authors = record
        .authors
        .iter()
        .filter_map(|a| family_name(a))
        .collect();
    Ok(DedupKey {
        normalized_title,
        normalized_authors,
    })
}

/// Keys of the first `n` entries with repeats removed, in first-occurrence
/// order.
pub fn dedup_prefix(list: &RankedList, n: usize) -> Result<Vec<DedupKey>, RecordsError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for record in list.entries.iter().take(n) {
        let key = normalize_key(record)?;
        if seen.insert(key.clone()) {
            out.push(key);
        }
    }
    Ok(out)
}

pub fn parse_export(
    content: &[u8],
    format: ExportFormat,
    label: &str,
) -> Result<RankedList, RecordsError> {
    let content = content.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(content);
    let text = std::str::from_utf8(content).map_err(|e| {
        RecordsError::parse(
            format!("byte {}", e.valid_up_to()),
            "content is not valid UTF-8",
        )
    })?;
    let records = match format {
        ExportFormat::Csv => parse_csv(text)?,
        ExportFormat::Ris => parse_ris(text)?,
        ExportFormat::Bibtex => parse_bibtex(text)?,
    };
    Ok(RankedList::from_records(label, records))
}

fn blank_record(title: String, authors: Vec<String>, year: Option<i32>, venue: Option<String>) -> ArticleRecord {
    ArticleRecord {
        title,
        authors,
        year,
        venue,
        rank: 0,
        source_label: String::new(),
    }
}

fn parse_year(raw: &str, location: impl Fn() -> String) -> Result<Option<i32>, RecordsError> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(None);
    }
    // RIS dates look like "2010/05/01/"
    let digits: String = raw.chars().take_while(|c| c.is_ascii_digit()).collect();
    digits
        .parse()
        .map(Some)
        .map_err(|_| RecordsError::parse(location(), format!("invalid year {raw:?}")))
}

fn parse_csv(text: &str) -> Result<Vec<ArticleRecord>, RecordsError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| RecordsError::parse("line 1", e.to_string()))?
        .iter()
        .map(|h| h.trim().to_ascii_lowercase())
        .collect();
    let expected = ["title", "authors", "year"];
    if headers.len() < 3 || headers.len() > 4 || headers[..3] != expected {
        return Err(RecordsError::parse(
            "line 1",
            format!("expected header title,authors,year[,venue], got {}", headers.join(",")),
        ));
    }
    if headers.len() == 4 && headers[3] != "venue" {
        return Err(RecordsError::parse("line 1", format!("unknown column {:?}", headers[3])));
    }

    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let index = i + 1;
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(index as u64 + 1);
            RecordsError::parse(format!("record {index} (line {line})"), e.to_string())
        })?;
        let location = || format!("record {index}");
        let title = row.get(0).unwrap_or("").trim().to_string();
        if title.is_empty() {
            return Err(RecordsError::parse(location(), "missing title"));
        }
        let authors = row
            .get(1)
            .unwrap_or("")
            .split(';')
            .map(str::trim)
            .filter(|a| !a.is_empty())
            .map(String::from)
            .collect();
        let year = parse_year(row.get(2).unwrap_or(""), location)?;
        let venue = row
            .get(3)
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .map(String::from);
        records.push(blank_record(title, authors, year, venue));
    }
    Ok(records)
}

/// Serializes a list using the same column contract `parse_export` reads.
pub fn write_csv(list: &RankedList) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let has_venue = list.entries.iter().any(|r| r.venue.is_some());
    let mut header = vec!["title", "authors", "year"];
    if has_venue {
        header.push("venue");
    }
    writer.write_record(&header).expect("in-memory write");
    for r in &list.entries {
        let year = r.year.map(|y| y.to_string()).unwrap_or_default();
        let authors = r.authors.join("; ");
        let mut row = vec![r.title.as_str(), authors.as_str(), year.as_str()];
        if has_venue {
            row.push(r.venue.as_deref().unwrap_or(""));
        }
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

#[derive(Default)]
struct RisEntry {
    start_line: usize,
    title: Option<String>,
    authors: Vec<String>,
    year: Option<i32>,
    venue: Option<String>,
}

fn parse_ris(text: &str) -> Result<Vec<ArticleRecord>, RecordsError> {
    let mut records = Vec::new();
    let mut current: Option<RisEntry> = None;
    let mut index = 0;

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim_end();
        if line.trim().is_empty() {
            continue;
        }
        let Some((tag, value)) = split_ris_line(line) else {
            // continuation lines are not part of the tag grammar we honor
            continue;
        };
        match tag {
            "TY" => {
                if let Some(open) = &current {
                    return Err(RecordsError::parse(
                        format!("record {index} (line {})", open.start_line),
                        "missing ER terminator before next TY",
                    ));
                }
                index += 1;
                current = Some(RisEntry {
                    start_line: lineno,
                    ..Default::default()
                });
            }
            "ER" => {
                let entry = current.take().ok_or_else(|| {
                    RecordsError::parse(format!("line {lineno}"), "ER without matching TY")
                })?;
                let title = entry.title.filter(|t| !t.is_empty()).ok_or_else(|| {
                    RecordsError::parse(
                        format!("record {index} (line {})", entry.start_line),
                        "missing TI/T1 title",
                    )
                })?;
                records.push(blank_record(title, entry.authors, entry.year, entry.venue));
            }
            _ => {
                let Some(entry) = current.as_mut() else {
                    return Err(RecordsError::parse(
                        format!("line {lineno}"),
                        format!("tag {tag} outside of a TY..ER block"),
                    ));
                };
                match tag {
                    "TI" | "T1" => entry.title = Some(value.to_string()),
                    "AU" | "A1" => entry.authors.push(value.to_string()),
                    "PY" | "Y1" => {
                        let idx = index;
                        entry.year = parse_year(value, || format!("record {idx} (line {lineno})"))?;
                    }
                    "JO" | "JF" | "T2" => {
                        entry.venue.get_or_insert_with(|| value.to_string());
                    }
                    _ => {}
                }
            }
        }
    }
    if let Some(open) = current {
        return Err(RecordsError::parse(
            format!("record {index} (line {})", open.start_line),
            "missing ER terminator",
        ));
    }
    Ok(records)
}

/// Splits `"TI  - Title"` into `("TI", "Title")`.
fn split_ris_line(line: &str) -> Option<(&str, &str)> {
    let bytes = line.as_bytes();
    if bytes.len() < 5 || !bytes[0].is_ascii_alphabetic() || !bytes[1].is_ascii_alphanumeric() {
        return None;
    }
    let rest = &line[2..];
    let rest = rest.trim_start_matches(' ');
    let value = rest.strip_prefix('-')?;
    Some((&line[..2], value.trim()))
}

fn parse_bibtex(text: &str) -> Result<Vec<ArticleRecord>, RecordsError> {
    let mut parser = BibParser {
        src: text.as_bytes(),
        text,
        pos: 0,
    };
    let mut records = Vec::new();
    let mut index = 0;
    while let Some(at) = text[parser.pos..].find('@') {
        parser.pos += at + 1;
        let entry_type = parser.ident().to_ascii_lowercase();
        if matches!(entry_type.as_str(), "comment" | "preamble" | "string") {
            parser.skip_ws();
            if matches!(parser.peek(), Some(b'{') | Some(b'(')) {
                parser.skip_balanced().map_err(|m| {
                    RecordsError::parse(format!("line {}", parser.line()), m)
                })?;
            }
            continue;
        }
        index += 1;
        let location = |p: &BibParser| format!("record {index} (line {})", p.line());
        let fields = parser
            .entry_body()
            .map_err(|m| RecordsError::parse(location(&parser), m))?;
        let mut title = None;
        let mut authors = Vec::new();
        let mut year = None;
        let mut venue = None;
        for (name, value) in fields {
            match name.as_str() {
                "title" => title = Some(clean_bib_value(&value)),
                "author" => {
                    authors = split_bib_authors(&value);
                }
                "year" => {
                    year = parse_year(&clean_bib_value(&value), || location(&parser))?;
                }
                "journal" | "booktitle" => {
                    venue.get_or_insert_with(|| clean_bib_value(&value));
                }
                _ => {}
            }
        }
        let title = title
            .filter(|t| !t.is_empty())
            .ok_or_else(|| RecordsError::parse(location(&parser), "missing title field"))?;
        records.push(blank_record(title, authors, year, venue));
    }
    Ok(records)
}

fn clean_bib_value(raw: &str) -> String {
    let stripped: String = raw.chars().filter(|c| !matches!(c, '{' | '}' | '"')).collect();
    stripped.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn split_bib_authors(raw: &str) -> Vec<String> {
    let cleaned = clean_bib_value(raw);
    let mut out = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for token in cleaned.split(' ') {
        if token.eq_ignore_ascii_case("and") {
            if !current.is_empty() {
                out.push(current.join(" "));
                current.clear();
            }
        } else if !token.is_empty() {
            current.push(token);
        }
    }
    if !current.is_empty() {
        out.push(current.join(" "));
    }
    out
}

struct BibParser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
}

impl BibParser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn line(&self) -> usize {
        self.text[..self.pos.min(self.text.len())].matches('\n').count() + 1
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || matches!(c, b'_' | b'-' | b':' | b'.'))
        {
            self.pos += 1;
        }
        self.text[start..self.pos].to_string()
    }

    fn skip_balanced(&mut self) -> Result<(), String> {
        let (open, close) = match self.peek() {
            Some(b'(') => (b'(', b')'),
            _ => (b'{', b'}'),
        };
        let mut depth = 0usize;
        while let Some(c) = self.peek() {
            self.pos += 1;
            if c == open {
                depth += 1;
            } else if c == close {
                depth -= 1;
                if depth == 0 {
                    return Ok(());
                }
            }
        }
        Err("unterminated block".into())
    }

    /// Parses `{key, name = value, ...}` and returns lowercase field names
    /// with raw values.
    fn entry_body(&mut self) -> Result<Vec<(String, String)>, String> {
        self.skip_ws();
        let close = match self.peek() {
            Some(b'{') => b'}',
            Some(b'(') => b')',
            _ => return Err("expected '{' after entry type".into()),
        };
        self.pos += 1;
        // citation key
        while let Some(c) = self.peek() {
            if c == b',' || c == close {
                break;
            }
            self.pos += 1;
        }
        let mut fields = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Err("unterminated entry".into()),
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(fields);
                }
                Some(b',') => {
                    self.pos += 1;
                    continue;
                }
                _ => {}
            }
            let name = self.ident().to_ascii_lowercase();
            if name.is_empty() {
                return Err(format!("unexpected character {:?}", self.peek().map(char::from)));
            }
            self.skip_ws();
            if self.peek() != Some(b'=') {
                return Err(format!("expected '=' after field {name}"));
            }
            self.pos += 1;
            let value = self.value()?;
            fields.push((name, value));
        }
    }

    fn value(&mut self) -> Result<String, String> {
        let mut parts = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'{') => {
                    let start = self.pos;
                    self.skip_balanced()?;
                    parts.push(self.text[start + 1..self.pos - 1].to_string());
                }
                Some(b'"') => {
                    self.pos += 1;
                    let start = self.pos;
                    let mut depth = 0i32;
                    loop {
                        match self.peek() {
                            None => return Err("unterminated quoted value".into()),
                            Some(b'{') => depth += 1,
                            Some(b'}') => depth -= 1,
                            Some(b'"') if depth == 0 => break,
                            _ => {}
                        }
                        self.pos += 1;
                    }
                    parts.push(self.text[start..self.pos].to_string());
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_alphanumeric() => parts.push(self.ident()),
                _ => return Err("expected field value".into()),
            }
            self.skip_ws();
            if self.peek() == Some(b'#') {
                self.pos += 1;
            } else {
                return Ok(parts.concat());
            }
        }
    }
}
