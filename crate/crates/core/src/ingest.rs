//! Corpus ingestion: read JSONL or raw statement files, validate article
//! records and apply the exclusion rules (institutional authors, missing
//! contribution info, malformed input).
//!
//! Malformed input never aborts a parse: each bad record becomes an entry in
//! the [`ExclusionReport`] and parsing continues. Only unreadable files are
//! fatal.

use std::collections::BTreeMap;
use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::text;
use crate::{Error, Result};

/// Longest acronym token accepted after normalization.
pub const MAX_ACRONYM_LEN: usize = 10;

/// Keywords whose whole-word presence marks a byline entry as an
/// organization rather than a person.
pub const DEFAULT_INSTITUTIONAL_KEYWORDS: [&str; 13] = [
    "University",
    "Universidade",
    "Institute",
    "Instituto",
    "Department",
    "Hospital",
    "Center",
    "Centre",
    "Laboratory",
    "Group",
    "Consortium",
    "Network",
    "Team",
];

/// An author's full name as it appears in the byline, trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AuthorName(String);

impl AuthorName {
    pub fn new(name: impl Into<String>) -> Self {
        AuthorName(name.into().trim().to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for AuthorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for AuthorName {
    fn from(s: &str) -> Self {
        AuthorName::new(s)
    }
}

/// One contribution statement: a free-text phrase plus the acronym tokens
/// crediting authors with it. Tokens are stored normalized (ASCII uppercase
/// letters only).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawStatement {
    pub text: String,
    pub acronyms: Vec<String>,
}

impl RawStatement {
    /// Validate and normalize a statement from already-split parts.
    pub fn new(text: impl Into<String>, tokens: &[impl AsRef<str>]) -> Result<Self> {
        let text = text.into().trim().to_string();
        if text.is_empty() {
            return Err(Error::MalformedStatement("empty contribution text".into()));
        }
        if tokens.is_empty() {
            return Err(Error::MalformedStatement(format!(
                "no acronym tokens in statement {text:?}"
            )));
        }
        let mut acronyms = Vec::with_capacity(tokens.len());
        for token in tokens {
            let normalized = text::normalize_acronym(token.as_ref());
            if normalized.is_empty() || normalized.len() > MAX_ACRONYM_LEN {
                return Err(Error::MalformedStatement(format!(
                    "acronym token {:?} is not 1-{MAX_ACRONYM_LEN} letters",
                    token.as_ref()
                )));
            }
            acronyms.push(normalized);
        }
        Ok(RawStatement { text, acronyms })
    }

    /// Render in the canonical raw line form, `"Phrase: ACR1 ACR2."`.
    /// [`parse_raw_statement`] inverts this for any valid statement whose
    /// text contains no colon.
    pub fn render(&self) -> String {
        format!("{}: {}.", self.text, self.acronyms.join(" "))
    }
}

/// Split a raw `"Phrase: ACR1 ACR2."` line into a [`RawStatement`].
///
/// The line must contain exactly one colon; the right-hand side is
/// whitespace-split into tokens which are period-stripped, diacritic-folded
/// and uppercased. A missing colon or an empty token list is a malformed
/// statement, never a panic.
pub fn parse_raw_statement(line: &str) -> Result<RawStatement> {
    let (text, rest) = line
        .split_once(':')
        .ok_or_else(|| Error::MalformedStatement(format!("no colon separator in {line:?}")))?;
    if rest.contains(':') {
        return Err(Error::MalformedStatement(format!(
            "more than one colon separator in {line:?}"
        )));
    }
    let tokens: Vec<&str> = rest.split_whitespace().collect();
    RawStatement::new(text, &tokens)
}

/// One validated article: ordered byline (rank = 1-based position), year,
/// and its contribution statements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArticleRecord {
    pub id: String,
    pub year: i32,
    pub authors: Vec<AuthorName>,
    pub statements: Vec<RawStatement>,
}

impl ArticleRecord {
    /// Number of authors (`n_A`).
    pub fn author_count(&self) -> usize {
        self.authors.len()
    }

    /// 1-based rank of an author, if present.
    pub fn rank_of(&self, name: &AuthorName) -> Option<usize> {
        self.authors.iter().position(|a| a == name).map(|i| i + 1)
    }
}

/// Why an article was excluded from the corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExclusionReason {
    InstitutionalAuthor,
    NoContributionInfo,
    UnresolvableAcronyms,
    MalformedRecord,
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ExclusionReason::InstitutionalAuthor => "InstitutionalAuthor",
            ExclusionReason::NoContributionInfo => "NoContributionInfo",
            ExclusionReason::UnresolvableAcronyms => "UnresolvableAcronyms",
            ExclusionReason::MalformedRecord => "MalformedRecord",
        };
        f.write_str(s)
    }
}

/// Excluded article ids, each with exactly one primary reason, in exclusion
/// order. Line counts are kept so that callers can check conservation:
/// for JSONL input, `total_lines = records + excluded + blank_lines`.
#[derive(Debug, Clone, Default)]
pub struct ExclusionReport {
    entries: Vec<(String, ExclusionReason)>,
    pub total_lines: usize,
    pub blank_lines: usize,
}

impl ExclusionReport {
    /// Record an exclusion. Ids are kept unique: a repeated id (several
    /// duplicates of one article) gets a `#line<N>` suffix so every entry
    /// still maps to exactly one reason.
    pub fn add(&mut self, id: impl Into<String>, reason: ExclusionReason, line: usize) {
        let mut id = id.into();
        if self.entries.iter().any(|(existing, _)| *existing == id) {
            id = format!("{id}#line{line}");
        }
        self.entries.push((id, reason));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn excluded_ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(id, _)| id.as_str())
    }

    pub fn reason_of(&self, id: &str) -> Option<ExclusionReason> {
        self.entries
            .iter()
            .find(|(existing, _)| existing == id)
            .map(|(_, reason)| *reason)
    }

    pub fn entries(&self) -> &[(String, ExclusionReason)] {
        &self.entries
    }

    /// Exclusion counts broken down by reason.
    pub fn counts_by_reason(&self) -> BTreeMap<ExclusionReason, usize> {
        let mut counts = BTreeMap::new();
        for (_, reason) in &self.entries {
            *counts.entry(*reason).or_insert(0) += 1;
        }
        counts
    }
}

/// Input corpus file format. The format is declared by the caller, never
/// sniffed from content.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    Raw,
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" => Ok(CorpusFormat::Jsonl),
            "raw" => Ok(CorpusFormat::Raw),
            other => Err(format!("invalid format: {other} (expected jsonl or raw)")),
        }
    }
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusFormat::Jsonl => f.write_str("jsonl"),
            CorpusFormat::Raw => f.write_str("raw"),
        }
    }
}

/// Knobs for ingestion; defaults match the shipped behavior.
#[derive(Debug, Clone)]
pub struct IngestOptions {
    pub institutional_keywords: Vec<String>,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            institutional_keywords: DEFAULT_INSTITUTIONAL_KEYWORDS
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }
}

/// True iff the name contains one of the institutional keywords as a whole
/// word, case-insensitively and with diacritics folded.
pub fn is_institutional_name(name: &AuthorName, keywords: &[String]) -> bool {
    let words = text::words(name.as_str());
    keywords.iter().any(|kw| {
        let kw = text::strip_diacritics(kw).to_lowercase();
        words.iter().any(|w| w.to_lowercase() == kw)
    })
}

/// On-disk JSONL shape: one article object per line.
#[derive(Debug, Serialize, Deserialize)]
pub struct ArticleJson {
    pub id: String,
    pub year: i32,
    pub authors: Vec<String>,
    pub contributions: Vec<ContributionJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ContributionJson {
    pub text: String,
    pub acronyms: Vec<String>,
}

impl From<&ArticleRecord> for ArticleJson {
    fn from(record: &ArticleRecord) -> Self {
        ArticleJson {
            id: record.id.clone(),
            year: record.year,
            authors: record
                .authors
                .iter()
                .map(|a| a.as_str().to_string())
                .collect(),
            contributions: record
                .statements
                .iter()
                .map(|s| ContributionJson {
                    text: s.text.clone(),
                    acronyms: s.acronyms.clone(),
                })
                .collect(),
        }
    }
}

/// Validate parsed parts into an [`ArticleRecord`] or the primary reason for
/// excluding them.
///
/// Checks run in a fixed precedence so every record gets exactly one reason:
/// structural problems (`MalformedRecord`) first, then institutional
/// authors, then the empty-statements case (`NoContributionInfo`).
pub fn validate_record(
    id: String,
    year: i32,
    authors: Vec<AuthorName>,
    statements: Vec<std::result::Result<RawStatement, String>>,
    options: &IngestOptions,
) -> std::result::Result<ArticleRecord, ExclusionReason> {
    if id.trim().is_empty() {
        return Err(ExclusionReason::MalformedRecord);
    }
    if authors.is_empty() {
        return Err(ExclusionReason::MalformedRecord);
    }
    let mut seen = HashSet::new();
    for author in &authors {
        if author.is_empty() || !seen.insert(author.as_str().to_string()) {
            return Err(ExclusionReason::MalformedRecord);
        }
    }
    let mut parsed = Vec::with_capacity(statements.len());
    for statement in statements {
        match statement {
            Ok(s) => parsed.push(s),
            Err(_) => return Err(ExclusionReason::MalformedRecord),
        }
    }
    if authors
        .iter()
        .any(|a| is_institutional_name(a, &options.institutional_keywords))
    {
        return Err(ExclusionReason::InstitutionalAuthor);
    }
    if parsed.is_empty() {
        return Err(ExclusionReason::NoContributionInfo);
    }
    Ok(ArticleRecord {
        id,
        year,
        authors,
        statements: parsed,
    })
}

/// Parse a corpus file with default options.
pub fn parse_corpus(
    path: impl AsRef<Path>,
    format: CorpusFormat,
) -> Result<(Vec<ArticleRecord>, ExclusionReport)> {
    parse_corpus_with(path, format, &IngestOptions::default())
}

/// Parse a corpus file. Unreadable files are fatal; malformed content is
/// reported per record. Record order preserves file order.
pub fn parse_corpus_with(
    path: impl AsRef<Path>,
    format: CorpusFormat,
    options: &IngestOptions,
) -> Result<(Vec<ArticleRecord>, ExclusionReport)> {
    let file = File::open(path.as_ref())?;
    let reader = BufReader::new(file);
    match format {
        CorpusFormat::Jsonl => parse_jsonl(reader, options),
        CorpusFormat::Raw => parse_raw(reader, options),
    }
}

/// Parse JSONL content: one article object per line, blank lines skipped.
pub fn parse_jsonl(
    reader: impl BufRead,
    options: &IngestOptions,
) -> Result<(Vec<ArticleRecord>, ExclusionReport)> {
    let mut records = Vec::new();
    let mut report = ExclusionReport::default();
    let mut seen_ids: HashSet<String> = HashSet::new();

    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = index + 1;
        report.total_lines += 1;
        if line.trim().is_empty() {
            report.blank_lines += 1;
            continue;
        }
        let json: ArticleJson = match serde_json::from_str(&line) {
            Ok(json) => json,
            Err(_) => {
                report.add(
                    recover_id(&line, line_no),
                    ExclusionReason::MalformedRecord,
                    line_no,
                );
                continue;
            }
        };
        let id = json.id.clone();
        if !id.trim().is_empty() && !seen_ids.insert(id.clone()) {
            // Duplicate id: keep the first record, exclude the rest.
            report.add(id, ExclusionReason::MalformedRecord, line_no);
            continue;
        }
        let statements = json
            .contributions
            .iter()
            .map(|c| RawStatement::new(c.text.clone(), &c.acronyms).map_err(|e| e.to_string()))
            .collect();
        let authors = json
            .authors
            .iter()
            .map(|a| AuthorName::new(a.as_str()))
            .collect();
        match validate_record(json.id, json.year, authors, statements, options) {
            Ok(record) => records.push(record),
            Err(reason) => report.add(id_or_line(&id, line_no), reason, line_no),
        }
    }
    Ok((records, report))
}

/// Parse the raw block format: articles separated by blank lines, each block
/// holding `#id`, `#year` and `#authors` header lines (authors separated by
/// `;`) followed by one `"Phrase: ACR ACR."` line per statement.
pub fn parse_raw(
    reader: impl BufRead,
    options: &IngestOptions,
) -> Result<(Vec<ArticleRecord>, ExclusionReport)> {
    let mut records = Vec::new();
    let mut report = ExclusionReport::default();
    let mut seen_ids: HashSet<String> = HashSet::new();
    let mut block: Vec<(usize, String)> = Vec::new();

    let finish = |block: &mut Vec<(usize, String)>,
                  report: &mut ExclusionReport,
                  records: &mut Vec<ArticleRecord>,
                  seen_ids: &mut HashSet<String>| {
        if block.is_empty() {
            return;
        }
        let first_line = block[0].0;
        let (id, outcome) = parse_raw_block(block, options);
        let id = id.unwrap_or_else(|| format!("line-{first_line}"));
        match outcome {
            Ok(record) => {
                if seen_ids.insert(record.id.clone()) {
                    records.push(record);
                } else {
                    report.add(id, ExclusionReason::MalformedRecord, first_line);
                }
            }
            Err(reason) => report.add(id, reason, first_line),
        }
        block.clear();
    };

    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = index + 1;
        report.total_lines += 1;
        if line.trim().is_empty() {
            report.blank_lines += 1;
            finish(&mut block, &mut report, &mut records, &mut seen_ids);
        } else {
            block.push((line_no, line));
        }
    }
    finish(&mut block, &mut report, &mut records, &mut seen_ids);
    Ok((records, report))
}

fn parse_raw_block(
    block: &[(usize, String)],
    options: &IngestOptions,
) -> (
    Option<String>,
    std::result::Result<ArticleRecord, ExclusionReason>,
) {
    let mut id: Option<String> = None;
    let mut year: Option<i32> = None;
    let mut authors: Vec<AuthorName> = Vec::new();
    let mut statements: Vec<std::result::Result<RawStatement, String>> = Vec::new();

    for (_, line) in block {
        let trimmed = line.trim();
        if let Some(value) = trimmed.strip_prefix("#id") {
            id = Some(value.trim().to_string());
        } else if let Some(value) = trimmed.strip_prefix("#year") {
            year = value.trim().parse().ok();
        } else if let Some(value) = trimmed.strip_prefix("#authors") {
            authors = value
                .split(';')
                .map(AuthorName::new)
                .filter(|a| !a.is_empty())
                .collect();
        } else {
            statements.push(parse_raw_statement(trimmed).map_err(|e| e.to_string()));
        }
    }

    let (Some(id), Some(year)) = (id.clone(), year) else {
        return (id, Err(ExclusionReason::MalformedRecord));
    };
    let outcome = validate_record(id.clone(), year, authors, statements, options);
    (Some(id), outcome)
}

fn recover_id(line: &str, line_no: usize) -> String {
    serde_json::from_str::<serde_json::Value>(line)
        .ok()
        .and_then(|v| {
            v.get("id")
                .and_then(|id| id.as_str())
                .map(|s| s.to_string())
        })
        .filter(|s| !s.trim().is_empty())
        .unwrap_or_else(|| format!("line-{line_no}"))
}

fn id_or_line(id: &str, line_no: usize) -> String {
    if id.trim().is_empty() {
        format!("line-{line_no}")
    } else {
        id.to_string()
    }
}
