//! Run configuration: defaults, optional JSON config file, command-line
//! overrides — in that precedence order, flags winning.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use authorcred_core::analysis::{DEFAULT_COHORT_CAP, DEFAULT_EPSILON};
use authorcred_core::ingest::{CorpusFormat, IngestOptions};
use authorcred_core::matcher::SimilarityMode;
use authorcred_core::output::DEFAULT_MAX_SHARE_COLUMNS;
use authorcred_core::pipeline::{PipelineOptions, DEFAULT_THRESHOLD};
use authorcred_core::synth::{Regime, SynthConfig};
use authorcred_core::SynonymTable;

/// Machine-parseable failure: one `error: <kind>: <reason>` line on stderr
/// and a stable exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config values or generator parameters (exit 1).
    Usage(String),
    /// Unreadable or unwritable files (exit 2).
    Io(String),
    /// No usable records in the corpus (exit 3).
    EmptyCorpus(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::EmptyCorpus(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage: {msg}"),
            CliError::Io(msg) => write!(f, "io: {msg}"),
            CliError::EmptyCorpus(msg) => write!(f, "empty-corpus: {msg}"),
        }
    }
}

impl From<authorcred_core::Error> for CliError {
    fn from(err: authorcred_core::Error) -> Self {
        use authorcred_core::Error;
        match err {
            Error::Io(e) => CliError::Io(e.to_string()),
            Error::Csv(e) => CliError::Io(e.to_string()),
            Error::EmptyCorpus | Error::EmptyCohort(_) => CliError::EmptyCorpus(err.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Optional JSON config file; every field mirrors a flag or an
/// otherwise-defaulted knob. Unknown keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub input: Option<PathBuf>,
    pub format: Option<String>,
    pub threshold: Option<f64>,
    pub similarity: Option<String>,
    pub synonyms: Option<PathBuf>,
    pub include_revised: Option<bool>,
    pub epsilon: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub svg: Option<bool>,
    pub institutional_keywords: Option<Vec<String>>,
    pub cohort_cap: Option<usize>,
    pub max_share_columns: Option<usize>,
    pub papers: Option<usize>,
    pub regime: Option<String>,
    pub min_authors: Option<usize>,
    pub max_authors: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let content = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("config {}: {e}", path.display())))?;
        serde_json::from_str(&content)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

/// Fully resolved configuration for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub format: CorpusFormat,
    pub threshold: f64,
    pub similarity: SimilarityMode,
    pub synonyms: Option<PathBuf>,
    pub include_revised: bool,
    pub epsilon: f64,
    pub out: PathBuf,
    pub seed: u64,
    pub svg: bool,
    pub institutional_keywords: Option<Vec<String>>,
    pub cohort_cap: usize,
    pub max_share_columns: usize,
    pub papers: usize,
    pub regime: Regime,
    pub min_authors: usize,
    pub max_authors: usize,
}

/// Flag-level overrides collected from whichever subcommand ran; `None`
/// falls through to the config file, then to the default.
#[derive(Debug, Default)]
pub struct Overrides {
    pub input: Option<PathBuf>,
    pub format: Option<String>,
    pub threshold: Option<f64>,
    pub similarity: Option<String>,
    pub synonyms: Option<PathBuf>,
    pub include_revised: bool,
    pub epsilon: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub svg: bool,
    pub papers: Option<usize>,
    pub regime: Option<String>,
    pub min_authors: Option<usize>,
    pub max_authors: Option<usize>,
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

impl RunConfig {
    /// Merge defaults, config file and flag overrides.
    pub fn resolve(file: FileConfig, flags: Overrides) -> CliResult<Self> {
        let format = pick(flags.format, file.format, "jsonl".to_string())
            .parse::<CorpusFormat>()
            .map_err(CliError::Usage)?;
        let similarity = pick(flags.similarity, file.similarity, "charset".to_string())
            .parse::<SimilarityMode>()
            .map_err(CliError::Usage)?;
        let regime = pick(flags.regime, file.regime, "mixed".to_string())
            .parse::<Regime>()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let threshold = pick(flags.threshold, file.threshold, DEFAULT_THRESHOLD);
        if !(threshold > 0.0 && threshold <= 1.0) {
            return Err(CliError::Usage(format!(
                "threshold must be in (0, 1], got {threshold}"
            )));
        }
        let epsilon = pick(flags.epsilon, file.epsilon, DEFAULT_EPSILON);
        if !(0.0..1.0).contains(&epsilon) {
            return Err(CliError::Usage(format!(
                "epsilon must be in [0, 1), got {epsilon}"
            )));
        }
        let min_authors = pick(flags.min_authors, file.min_authors, 1);
        let max_authors = pick(flags.max_authors, file.max_authors, 12);
        let papers = pick(flags.papers, file.papers, 100);
        if min_authors == 0 || min_authors > max_authors {
            return Err(CliError::Usage(format!(
                "author range {min_authors}..{max_authors} is invalid"
            )));
        }
        if papers == 0 {
            return Err(CliError::Usage("papers must be at least 1".into()));
        }
        Ok(RunConfig {
            input: flags.input.or(file.input),
            format,
            threshold,
            similarity,
            synonyms: flags.synonyms.or(file.synonyms),
            include_revised: flags.include_revised || file.include_revised.unwrap_or(false),
            epsilon,
            out: pick(flags.out, file.out, PathBuf::from("out")),
            seed: pick(flags.seed, file.seed, 42),
            svg: flags.svg || file.svg.unwrap_or(false),
            institutional_keywords: file.institutional_keywords,
            cohort_cap: file.cohort_cap.unwrap_or(DEFAULT_COHORT_CAP),
            max_share_columns: file.max_share_columns.unwrap_or(DEFAULT_MAX_SHARE_COLUMNS),
            papers,
            regime,
            min_authors,
            max_authors,
        })
    }

    pub fn input(&self) -> CliResult<&Path> {
        self.input
            .as_deref()
            .ok_or_else(|| CliError::Usage("--input is required (flag or config file)".into()))
    }

    pub fn pipeline_options(&self) -> CliResult<PipelineOptions> {
        let synonyms = match &self.synonyms {
            Some(path) => SynonymTable::from_path(path).map_err(|e| match e {
                authorcred_core::Error::Io(io) => {
                    CliError::Io(format!("synonyms {}: {io}", path.display()))
                }
                other => CliError::Usage(format!("synonyms {}: {other}", path.display())),
            })?,
            None => SynonymTable::builtin(),
        };
        let mut ingest = IngestOptions::default();
        if let Some(keywords) = &self.institutional_keywords {
            ingest.institutional_keywords = keywords.clone();
        }
        Ok(PipelineOptions {
            ingest,
            similarity: self.similarity,
            threshold: self.threshold,
            include_revised: self.include_revised,
            synonyms,
        })
    }

    pub fn synth_config(&self) -> SynthConfig {
        SynthConfig {
            papers: self.papers,
            seed: self.seed,
            regime: self.regime,
            min_authors: self.min_authors,
            max_authors: self.max_authors,
        }
    }
}
