//! `authorcred`: parse author-contribution metadata, resolve acronyms,
//! canonicalize contribution phrases and compute entropy-based credit
//! metrics over whole corpora.
//!
//! Exit codes: 0 ok, 1 usage, 2 I/O, 3 empty corpus. Every failure prints a
//! single `error: <kind>: <reason>` line to stderr.

mod cli;
mod commands;
mod config;

use clap::error::ErrorKind;
use clap::Parser;

use cli::{Cli, Command};
use config::{CliError, CliResult, FileConfig, Overrides, RunConfig};

fn main() {
    match run() {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}

fn run() -> CliResult<()> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) =>
        {
            print!("{err}");
            return Ok(());
        }
        Err(err) => {
            let line = err
                .to_string()
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ")
                .to_string();
            return Err(CliError::Usage(line));
        }
    };

    let file = FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Validate(args) => {
            let config = RunConfig::resolve(
                file,
                Overrides {
                    input: args.input.input,
                    format: args.input.format,
                    ..Overrides::default()
                },
            )?;
            commands::validate(&config, args.out.as_deref())
        }
        Command::Metrics(args) => {
            let config = RunConfig::resolve(
                file,
                Overrides {
                    input: args.input.input,
                    format: args.input.format,
                    threshold: args.matching.threshold,
                    similarity: args.matching.similarity,
                    synonyms: args.matching.synonyms,
                    include_revised: args.matching.include_revised,
                    out: args.out,
                    ..Overrides::default()
                },
            )?;
            commands::metrics(&config)
        }
        Command::Analyze(args) => {
            let config = RunConfig::resolve(
                file,
                Overrides {
                    input: args.pipeline.input.input,
                    format: args.pipeline.input.format,
                    threshold: args.pipeline.matching.threshold,
                    similarity: args.pipeline.matching.similarity,
                    synonyms: args.pipeline.matching.synonyms,
                    include_revised: args.pipeline.matching.include_revised,
                    epsilon: args.epsilon,
                    out: args.pipeline.out,
                    svg: args.svg,
                    ..Overrides::default()
                },
            )?;
            commands::analyze(&config)
        }
        Command::Synth(args) => {
            let config = RunConfig::resolve(
                file,
                Overrides {
                    out: args.out.clone(),
                    seed: args.seed,
                    papers: args.papers,
                    regime: args.regime,
                    min_authors: args.min_authors,
                    max_authors: args.max_authors,
                    ..Overrides::default()
                },
            )?;
            commands::synth(&config, args.out.as_deref())
        }
        Command::Report(args) => {
            let config = RunConfig::resolve(
                file,
                Overrides {
                    input: args.input.input,
                    format: args.input.format,
                    threshold: args.matching.threshold,
                    similarity: args.matching.similarity,
                    synonyms: args.matching.synonyms,
                    include_revised: args.matching.include_revised,
                    epsilon: args.epsilon,
                    ..Overrides::default()
                },
            )?;
            commands::report(&config)
        }
    }
}
