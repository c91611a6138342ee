//! The ingest -> match -> canonicalize -> metrics pipeline for whole
//! corpora.
//!
//! Per-article work is pure, so order-preserving parallelism would be safe;
//! the sequential implementation here already preserves input order, which
//! is what the deterministic-output contract requires.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::canon::{self, Category, SynonymTable};
use crate::ingest::{
    self, ArticleRecord, AuthorName, CorpusFormat, ExclusionReason, ExclusionReport, IngestOptions,
};
use crate::matcher::{self, AcronymIndex, SimilarityMode};
use crate::metrics::{build_matrix, ContributionMatrix, PaperMetrics};
use crate::Result;

/// Default similarity threshold for fuzzy acronym resolution.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Everything the pipeline needs besides the input records.
#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub ingest: IngestOptions,
    pub similarity: SimilarityMode,
    pub threshold: f64,
    pub include_revised: bool,
    pub synonyms: SynonymTable,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            ingest: IngestOptions::default(),
            similarity: SimilarityMode::default(),
            threshold: DEFAULT_THRESHOLD,
            include_revised: false,
            synonyms: SynonymTable::builtin(),
        }
    }
}

/// A token that could not be resolved for one article, with its best
/// candidate for the log.
#[derive(Debug, Clone, PartialEq)]
pub struct UnresolvedToken {
    pub article_id: String,
    pub token: String,
    pub best_candidate: String,
    pub best_score: f64,
}

/// Side outputs of a pipeline run: exclusions (ingest-stage entries plus
/// articles lost to resolution or filtering), the unresolved-token log and
/// unmapped-phrase counts.
#[derive(Debug, Clone, Default)]
pub struct PipelineReport {
    pub exclusions: ExclusionReport,
    pub unresolved_tokens: Vec<UnresolvedToken>,
    pub unmapped_phrases: BTreeMap<String, usize>,
}

/// One article after resolution, canonicalization and metric computation.
#[derive(Debug, Clone)]
pub struct ProcessedArticle {
    pub id: String,
    pub year: i32,
    pub authors: Vec<AuthorName>,
    /// Categories credited to each rank, unfiltered (all six possible).
    pub author_categories: Vec<BTreeSet<Category>>,
    /// Matrix over the retained categories of this run.
    pub matrix: ContributionMatrix,
    pub metrics: PaperMetrics,
}

impl ProcessedArticle {
    pub fn author_count(&self) -> usize {
        self.authors.len()
    }

    /// Per-author category sets restricted to the retained categories.
    pub fn retained_categories(&self, include_revised: bool) -> Vec<BTreeSet<Category>> {
        let retained: BTreeSet<Category> =
            Category::retained(include_revised).into_iter().collect();
        self.author_categories
            .iter()
            .map(|set| set.intersection(&retained).copied().collect())
            .collect()
    }
}

/// Parse a corpus file and push every record through the full pipeline.
pub fn run_file(
    path: impl AsRef<Path>,
    format: CorpusFormat,
    options: &PipelineOptions,
) -> Result<(Vec<ProcessedArticle>, PipelineReport)> {
    let (records, ingest_report) = ingest::parse_corpus_with(path, format, &options.ingest)?;
    Ok(process_records(&records, ingest_report, options))
}

/// Resolve, canonicalize and score each record. Articles that lose every
/// statement to resolution are excluded as `UnresolvableAcronyms`; articles
/// with nothing left after canonicalization and category filtering as
/// `NoContributionInfo`. Output preserves input order.
pub fn process_records(
    records: &[ArticleRecord],
    ingest_report: ExclusionReport,
    options: &PipelineOptions,
) -> (Vec<ProcessedArticle>, PipelineReport) {
    let mut report = PipelineReport {
        exclusions: ingest_report,
        ..PipelineReport::default()
    };
    let mut articles = Vec::with_capacity(records.len());
    for (position, record) in records.iter().enumerate() {
        match process_article(record, options, &mut report) {
            Ok(article) => articles.push(article),
            Err(reason) => report.exclusions.add(record.id.clone(), reason, position),
        }
    }
    (articles, report)
}

fn process_article(
    record: &ArticleRecord,
    options: &PipelineOptions,
    report: &mut PipelineReport,
) -> std::result::Result<ProcessedArticle, ExclusionReason> {
    let index = AcronymIndex::build(&record.authors);
    let mut resolved = Vec::with_capacity(record.statements.len());
    for statement in &record.statements {
        let (resolutions, dropped) =
            matcher::resolve_tokens(statement, &index, options.threshold, options.similarity);
        for drop in dropped {
            report.unresolved_tokens.push(UnresolvedToken {
                article_id: record.id.clone(),
                token: drop.token,
                best_candidate: drop.best_candidate,
                best_score: drop.best_score,
            });
        }
        if !resolutions.is_empty() {
            resolved.push((statement.text.clone(), resolutions));
        }
    }
    if resolved.is_empty() {
        return Err(ExclusionReason::UnresolvableAcronyms);
    }

    let mut author_categories = vec![BTreeSet::new(); record.author_count()];
    for (text, resolutions) in &resolved {
        let Some(category) = canon::canonicalize(text, &options.synonyms) else {
            let key = crate::text::normalize_phrase(text);
            *report.unmapped_phrases.entry(key).or_insert(0) += 1;
            continue;
        };
        for resolution in resolutions {
            author_categories[resolution.rank - 1].insert(category);
        }
    }

    let matrix = build_matrix(&author_categories, options.include_revised)
        .map_err(|_| ExclusionReason::NoContributionInfo)?;
    let metrics = PaperMetrics::from_matrix(&matrix)
        .expect("a non-empty binary matrix always yields metrics");

    Ok(ProcessedArticle {
        id: record.id.clone(),
        year: record.year,
        authors: record.authors.clone(),
        author_categories,
        matrix,
        metrics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::RawStatement;

    fn record(id: &str, authors: &[&str], statements: &[(&str, &[&str])]) -> ArticleRecord {
        ArticleRecord {
            id: id.into(),
            year: 2012,
            authors: authors.iter().map(|&a| AuthorName::new(a)).collect(),
            statements: statements
                .iter()
                .map(|(text, tokens)| RawStatement::new(*text, tokens).unwrap())
                .collect(),
        }
    }

    #[test]
    fn clean_article_flows_through() {
        let records = vec![record(
            "a1",
            &["Diego R. Amancio", "Luciano da F. Costa"],
            &[
                ("Analyzed the data", &["DRA", "LFC"]),
                ("Wrote the paper", &["DRA"]),
                ("Collected the data", &["DRA"]),
            ],
        )];
        let (articles, report) = process_records(
            &records,
            ExclusionReport::default(),
            &PipelineOptions::default(),
        );
        assert_eq!(articles.len(), 1);
        assert!(report.exclusions.is_empty());
        assert!(report.unresolved_tokens.is_empty());
        let article = &articles[0];
        assert_eq!(article.metrics.shares, vec![0.75, 0.25]);
        assert!((article.metrics.effective_authors - 1.754765).abs() < 1e-6);
    }

    #[test]
    fn unresolvable_article_is_excluded() {
        let records = vec![record(
            "a1",
            &["Diego R. Amancio"],
            &[("Analyzed the data", &["QQQ"])],
        )];
        let (articles, report) = process_records(
            &records,
            ExclusionReport::default(),
            &PipelineOptions::default(),
        );
        assert!(articles.is_empty());
        assert_eq!(
            report.exclusions.reason_of("a1"),
            Some(ExclusionReason::UnresolvableAcronyms)
        );
        assert_eq!(report.unresolved_tokens.len(), 1);
        assert_eq!(report.unresolved_tokens[0].best_candidate, "DRA");
    }

    #[test]
    fn unmapped_phrases_drop_but_keep_article() {
        let records = vec![record(
            "a1",
            &["Diego R. Amancio"],
            &[
                ("Juggled flaming torches", &["DRA"]),
                ("Wrote the paper", &["DRA"]),
            ],
        )];
        let (articles, report) = process_records(
            &records,
            ExclusionReport::default(),
            &PipelineOptions::default(),
        );
        assert_eq!(articles.len(), 1);
        assert_eq!(
            report.unmapped_phrases.get("juggled flaming torches"),
            Some(&1)
        );
        assert_eq!(articles[0].author_categories[0].len(), 1);
    }

    #[test]
    fn all_statements_unmapped_excludes_article() {
        let records = vec![record(
            "a1",
            &["Diego R. Amancio"],
            &[("Juggled flaming torches", &["DRA"])],
        )];
        let (articles, report) = process_records(
            &records,
            ExclusionReport::default(),
            &PipelineOptions::default(),
        );
        assert!(articles.is_empty());
        assert_eq!(
            report.exclusions.reason_of("a1"),
            Some(ExclusionReason::NoContributionInfo)
        );
    }

    #[test]
    fn revised_only_article_depends_on_flag() {
        let records = vec![record(
            "a1",
            &["Diego R. Amancio"],
            &[("Revised the manuscript", &["DRA"])],
        )];
        let (articles, _) = process_records(
            &records,
            ExclusionReport::default(),
            &PipelineOptions::default(),
        );
        assert!(articles.is_empty());

        let options = PipelineOptions {
            include_revised: true,
            ..Default::default()
        };
        let (articles, _) = process_records(&records, ExclusionReport::default(), &options);
        assert_eq!(articles.len(), 1);
    }

    #[test]
    fn retained_categories_filter_revised() {
        let records = vec![record(
            "a1",
            &["Diego R. Amancio"],
            &[
                ("Wrote the paper", &["DRA"]),
                ("Revised the manuscript", &["DRA"]),
            ],
        )];
        let (articles, _) = process_records(
            &records,
            ExclusionReport::default(),
            &PipelineOptions::default(),
        );
        let article = &articles[0];
        // unfiltered sets keep revised for the frequency table
        assert_eq!(article.author_categories[0].len(), 2);
        assert_eq!(article.retained_categories(false)[0].len(), 1);
        assert_eq!(article.retained_categories(true)[0].len(), 2);
    }
}
