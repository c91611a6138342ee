//! Parsing and analysis of author-contribution metadata in scientific articles.
//!
//! The crate turns corpus files (JSONL or a line-oriented raw format) into
//! clean article records, resolves the acronym tokens attached to each
//! contribution statement back to author ranks, folds free-text contribution
//! phrases into six canonical categories, and computes entropy-based credit
//! metrics over the resulting author x contribution matrices:
//!
//! - the contribution share of each author,
//! - the effective number of authors (exponential of the share entropy),
//! - the symmetry of contributions (effective over actual author count),
//! - the accessibility of a weighted star (effective neighbor count).
//!
//! Corpus-level aggregation lives in [`analysis`]: author-count histograms,
//! metric-versus-author-count curves, per-rank contribution profiles and the
//! classification of those profiles into monotone/U-shaped patterns.
//!
//! A seeded synthetic-corpus generator ([`synth`]) makes every aggregate
//! operation testable without any external dataset.

use thiserror::Error;

pub mod analysis;
pub mod canon;
pub mod ingest;
pub mod matcher;
pub mod metrics;
pub mod output;
pub mod pipeline;
pub mod synth;
pub mod text;

pub use canon::{Category, SynonymTable};
pub use ingest::{ArticleRecord, AuthorName, ExclusionReason, ExclusionReport, RawStatement};
pub use matcher::{AcronymIndex, ResolvedStatement, SimilarityMode};
pub use metrics::{ContributionMatrix, PaperMetrics, WeightedStar};
pub use pipeline::{PipelineOptions, PipelineReport, ProcessedArticle};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by corpus parsing, matching and the numeric core.
///
/// Recoverable per-record problems (a malformed line, an unresolvable
/// statement) are *values* handled through [`ingest::ExclusionReport`];
/// this enum covers the fatal cases.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed statement: {0}")]
    MalformedStatement(String),

    #[error("statement has no resolvable acronym tokens: {0:?}")]
    UnresolvableStatement(Vec<String>),

    #[error("empty acronym string")]
    EmptyAcronym,

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("empty cohort: no papers with {0} authors")]
    EmptyCohort(usize),

    #[error("contribution matrix has no nonzero entries")]
    EmptyMatrix,

    #[error("weighted contribution mass is zero")]
    ZeroMass,

    #[error("shares do not sum to 1 (sum = {0})")]
    UnnormalizedShares(f64),

    #[error("share outside [0, 1]: {0}")]
    InvalidShare(f64),

    #[error("effective author count {effective} outside [1, {actual}]")]
    EffectiveOutOfRange { effective: f64, actual: usize },

    #[error("author count is zero")]
    NoAuthors,

    #[error("star has no neighbors")]
    EmptyStar,

    #[error("non-positive neighbor weight: {0}")]
    NonPositiveWeight(f64),

    #[error("negative rank-profile entry: {0}")]
    NegativeEntry(f64),

    #[error("synonym table: {0}")]
    SynonymTable(String),

    #[error("unknown regime: {0}")]
    UnknownRegime(String),
}
