//! Canonicalization of free-text contribution phrases into the six
//! categories used throughout the analysis.
//!
//! Lookup is exact over normalized keys; there is deliberately no fuzzy
//! phrase matching. Phrases outside the vocabulary are `Unmapped` values
//! (dropped from matrices and logged), never errors.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::text;
use crate::{Error, Result};

/// The closed set of contribution categories.
///
/// `RevisedManuscript` is parsed like the others but excluded from analyses
/// by default; [`Category::retained`] returns the set a given run works on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    AnalyzedData,
    CollectedData,
    ConceivedExperiments,
    PerformedExperiments,
    WrotePaper,
    RevisedManuscript,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::AnalyzedData,
        Category::CollectedData,
        Category::ConceivedExperiments,
        Category::PerformedExperiments,
        Category::WrotePaper,
        Category::RevisedManuscript,
    ];

    /// Categories used for matrices and aggregation; drops
    /// `RevisedManuscript` unless `include_revised` is set.
    pub fn retained(include_revised: bool) -> Vec<Category> {
        Category::ALL
            .into_iter()
            .filter(|c| include_revised || *c != Category::RevisedManuscript)
            .collect()
    }

    /// Short machine name used in data files and CSV columns.
    pub fn key(&self) -> &'static str {
        match self {
            Category::AnalyzedData => "analyzed",
            Category::CollectedData => "collected",
            Category::ConceivedExperiments => "conceived",
            Category::PerformedExperiments => "performed",
            Category::WrotePaper => "wrote",
            Category::RevisedManuscript => "revised",
        }
    }

    /// Human-readable name used in reports.
    pub fn display_name(&self) -> &'static str {
        match self {
            Category::AnalyzedData => "Analyzed the data",
            Category::CollectedData => "Collected the data",
            Category::ConceivedExperiments => "Conceived the experiments",
            Category::PerformedExperiments => "Performed the experiments",
            Category::WrotePaper => "Wrote the paper",
            Category::RevisedManuscript => "Revised the manuscript",
        }
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "analyzed" => Ok(Category::AnalyzedData),
            "collected" => Ok(Category::CollectedData),
            "conceived" => Ok(Category::ConceivedExperiments),
            "performed" => Ok(Category::PerformedExperiments),
            "wrote" => Ok(Category::WrotePaper),
            "revised" => Ok(Category::RevisedManuscript),
            other => Err(format!("unknown category: {other}")),
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Map from normalized contribution phrases to categories, loaded from a
/// tab-separated data file. The shipped vocabulary covers every phrase the
/// six categories cluster; the file is editable because the clustering is
/// explicitly non-exhaustive.
#[derive(Debug, Clone)]
pub struct SynonymTable {
    map: BTreeMap<String, Category>,
}

const BUILTIN_SYNONYMS: &str = include_str!("../data/synonyms.tsv");

impl SynonymTable {
    /// The vocabulary shipped with the crate.
    pub fn builtin() -> Self {
        SynonymTable::parse(BUILTIN_SYNONYMS).expect("shipped synonym table must parse")
    }

    /// Load a vocabulary file: one `phrase<TAB>category` per line, `#`
    /// comments and blank lines ignored.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let content = std::fs::read_to_string(path)?;
        SynonymTable::parse(&content)
    }

    pub fn parse(content: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (index, line) in content.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (phrase, category) = line.split_once('\t').ok_or_else(|| {
                Error::SynonymTable(format!("line {}: expected phrase<TAB>category", index + 1))
            })?;
            let category: Category = category
                .parse()
                .map_err(|e| Error::SynonymTable(format!("line {}: {e}", index + 1)))?;
            let key = text::normalize_phrase(phrase);
            if key.is_empty() {
                return Err(Error::SynonymTable(format!(
                    "line {}: empty phrase",
                    index + 1
                )));
            }
            map.insert(key, category);
        }
        if map.is_empty() {
            return Err(Error::SynonymTable("no entries".into()));
        }
        Ok(SynonymTable { map })
    }

    /// Add or replace one phrase.
    pub fn insert(&mut self, phrase: &str, category: Category) {
        self.map.insert(text::normalize_phrase(phrase), category);
    }

    /// Exact lookup after normalization; `None` means unmapped.
    pub fn lookup(&self, phrase: &str) -> Option<Category> {
        self.map.get(&text::normalize_phrase(phrase)).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, Category)> {
        self.map.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// Canonicalize one phrase; `None` is the Unmapped outcome, a value rather
/// than an error.
pub fn canonicalize(phrase: &str, table: &SynonymTable) -> Option<Category> {
    table.lookup(phrase)
}

/// Fraction of author-occurrences credited with each category, counting
/// every author of every paper as a distinct occurrence. Fractions need not
/// sum to 1 because one author can hold several categories.
///
/// Each item of `articles` is one paper's per-author category sets in rank
/// order.
pub fn category_frequencies<'a, I>(articles: I) -> Result<BTreeMap<Category, f64>>
where
    I: IntoIterator<Item = &'a [std::collections::BTreeSet<Category>]>,
{
    let mut occurrences = 0usize;
    let mut counts: BTreeMap<Category, usize> = BTreeMap::new();
    for author_sets in articles {
        occurrences += author_sets.len();
        for set in author_sets {
            for category in set {
                *counts.entry(*category).or_insert(0) += 1;
            }
        }
    }
    if occurrences == 0 {
        return Err(Error::EmptyCorpus);
    }
    Ok(Category::ALL
        .into_iter()
        .map(|c| {
            (
                c,
                counts.get(&c).copied().unwrap_or(0) as f64 / occurrences as f64,
            )
        })
        .collect())
}
