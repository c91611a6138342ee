//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "authorcred",
    version,
    about = "Parse author-contribution statements and compute entropy-based credit metrics"
)]
pub struct Cli {
    /// JSON config file; command-line flags override its values
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a corpus, printing valid/excluded counts
    Validate(ValidateArgs),
    /// Run the full pipeline and write per-paper metrics
    Metrics(PipelineArgs),
    /// Write every corpus-level table: histogram, curves, rank profiles,
    /// pattern labels, category frequencies
    Analyze(AnalyzeArgs),
    /// Generate a seeded synthetic JSONL corpus
    Synth(SynthArgs),
    /// Print comparison-ready summary tables to stdout
    Report(ReportArgs),
}

#[derive(Args, Debug, Default)]
pub struct InputArgs {
    /// Corpus file to read
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,

    /// Input format: jsonl or raw
    #[arg(long, value_name = "FORMAT")]
    pub format: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct MatchArgs {
    /// Similarity threshold for fuzzy acronym resolution, in (0, 1]
    #[arg(long, value_name = "SCORE")]
    pub threshold: Option<f64>,

    /// Similarity feature set: charset or bigram
    #[arg(long, value_name = "MODE")]
    pub similarity: Option<String>,

    /// Synonym table file (phrase<TAB>category per line); defaults to the
    /// built-in vocabulary
    #[arg(long, value_name = "FILE")]
    pub synonyms: Option<PathBuf>,

    /// Keep manuscript-revision statements in matrices and analyses
    #[arg(long)]
    pub include_revised: bool,
}

#[derive(Args, Debug, Default)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Directory for the exclusion report CSV (optional)
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub matching: MatchArgs,

    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,

    /// Per-step tolerance fraction for pattern classification
    #[arg(long, value_name = "FRACTION")]
    pub epsilon: Option<f64>,

    /// Also render curve_N.svg and curve_sigma.svg
    #[arg(long)]
    pub svg: bool,
}

#[derive(Args, Debug, Default)]
pub struct SynthArgs {
    /// Output JSONL file
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Random seed; fixed seed, identical bytes
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,

    /// Number of articles to generate
    #[arg(long, value_name = "N")]
    pub papers: Option<usize>,

    /// Contribution regime: uniform, rank-biased, patterns or mixed
    #[arg(long, value_name = "REGIME")]
    pub regime: Option<String>,

    /// Smallest byline
    #[arg(long, value_name = "N")]
    pub min_authors: Option<usize>,

    /// Largest byline
    #[arg(long, value_name = "N")]
    pub max_authors: Option<usize>,
}

#[derive(Args, Debug, Default)]
pub struct ReportArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub matching: MatchArgs,

    /// Per-step tolerance fraction for pattern classification
    #[arg(long, value_name = "FRACTION")]
    pub epsilon: Option<f64>,
}
