//! The five subcommands. Every error path funnels into [`CliError`] so the
//! binary always exits with one machine-parseable reason line.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use authorcred_core::analysis::{analyze_corpus, AnalysisOptions, CorpusAnalysis};
use authorcred_core::canon::Category;
use authorcred_core::ingest::{parse_corpus_with, ExclusionReport};
use authorcred_core::output;
use authorcred_core::pipeline::{run_file, PipelineReport, ProcessedArticle};
use authorcred_core::synth::{generate_corpus, write_jsonl};

use crate::config::{CliError, CliResult, RunConfig};

fn io_err(path: &Path, err: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {err}", path.display()))
}

fn create_dir(path: &Path) -> CliResult<()> {
    std::fs::create_dir_all(path).map_err(|e| io_err(path, e))
}

fn create_file(path: &Path) -> CliResult<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).map_err(|e| io_err(path, e))?,
    ))
}

fn exclusion_breakdown(report: &ExclusionReport) -> String {
    if report.is_empty() {
        return String::new();
    }
    let pairs: Vec<String> = report
        .counts_by_reason()
        .iter()
        .map(|(reason, count)| format!("{reason}: {count}"))
        .collect();
    format!(" ({})", pairs.join(", "))
}

/// `validate`: parse only, print counts, exit 0 iff at least one record is
/// valid.
pub fn validate(config: &RunConfig, out: Option<&Path>) -> CliResult<()> {
    let options = config.pipeline_options()?;
    let input = config.input()?;
    let (records, report) = parse_corpus_with(input, config.format, &options.ingest)
        .map_err(|e| with_input_context(input, e))?;
    println!(
        "{} valid, {} excluded{}",
        records.len(),
        report.len(),
        exclusion_breakdown(&report)
    );
    if let Some(dir) = out {
        create_dir(dir)?;
        let path = dir.join("exclusions.csv");
        output::write_exclusions_csv(&report, create_file(&path)?).map_err(CliError::from)?;
        println!("exclusion report: {}", path.display());
    }
    if records.is_empty() {
        return Err(CliError::EmptyCorpus("no valid records in corpus".into()));
    }
    Ok(())
}

fn with_input_context(input: &Path, err: authorcred_core::Error) -> CliError {
    match err {
        authorcred_core::Error::Io(io) => CliError::Io(format!("{}: {io}", input.display())),
        other => CliError::from(other),
    }
}

fn run_pipeline(config: &RunConfig) -> CliResult<(Vec<ProcessedArticle>, PipelineReport)> {
    let options = config.pipeline_options()?;
    let input = config.input()?;
    run_file(input, config.format, &options).map_err(|e| with_input_context(input, e))
}

fn write_side_reports(dir: &Path, report: &PipelineReport) -> CliResult<()> {
    output::write_exclusions_csv(
        &report.exclusions,
        create_file(&dir.join("exclusions.csv"))?,
    )?;
    output::write_unresolved_csv(
        &report.unresolved_tokens,
        create_file(&dir.join("unresolved.csv"))?,
    )?;
    output::write_unmapped_csv(
        &report.unmapped_phrases,
        create_file(&dir.join("unmapped.csv"))?,
    )?;
    Ok(())
}

/// `metrics`: full pipeline, one metrics row per retained article ordered
/// by id.
pub fn metrics(config: &RunConfig) -> CliResult<()> {
    let (articles, report) = run_pipeline(config)?;
    create_dir(&config.out)?;
    write_side_reports(&config.out, &report)?;
    if articles.is_empty() {
        return Err(CliError::EmptyCorpus(
            "no articles survived the pipeline; see exclusions.csv".into(),
        ));
    }
    let path = config.out.join("metrics.csv");
    output::write_metrics_csv(&articles, config.max_share_columns, create_file(&path)?)?;
    println!(
        "{} articles -> {} ({} excluded)",
        articles.len(),
        path.display(),
        report.exclusions.len()
    );
    Ok(())
}

fn run_analysis(
    config: &RunConfig,
) -> CliResult<(Vec<ProcessedArticle>, PipelineReport, CorpusAnalysis)> {
    let (articles, report) = run_pipeline(config)?;
    if articles.is_empty() {
        return Err(CliError::EmptyCorpus(
            "no articles survived the pipeline".into(),
        ));
    }
    let options = AnalysisOptions {
        epsilon: config.epsilon,
        cohort_cap: config.cohort_cap,
        include_revised: config.include_revised,
    };
    let analysis = analyze_corpus(&articles, &options).map_err(CliError::from)?;
    Ok((articles, report, analysis))
}

/// `analyze`: every corpus-level table, plus optional SVG curves.
pub fn analyze(config: &RunConfig) -> CliResult<()> {
    let (articles, report, analysis) = run_analysis(config)?;
    let dir = &config.out;
    create_dir(dir)?;
    write_side_reports(dir, &report)?;
    output::write_metrics_csv(
        &articles,
        config.max_share_columns,
        create_file(&dir.join("metrics.csv"))?,
    )?;
    output::write_histogram_csv(
        &analysis.histogram,
        create_file(&dir.join("histogram.csv"))?,
    )?;
    output::write_curve_csv(
        &analysis.curve_effective,
        create_file(&dir.join("curve_N.csv"))?,
    )?;
    output::write_curve_csv(
        &analysis.curve_symmetry,
        create_file(&dir.join("curve_sigma.csv"))?,
    )?;
    let retained = Category::retained(config.include_revised);
    for profile in &analysis.profiles {
        let path = dir.join(format!("profile_{}.csv", profile.author_count));
        output::write_profile_csv(profile, &retained, create_file(&path)?)?;
    }
    output::write_patterns_csv(&analysis.patterns, create_file(&dir.join("patterns.csv"))?)?;
    output::write_frequencies_csv(
        &analysis.frequencies,
        create_file(&dir.join("category_frequencies.csv"))?,
    )?;
    if config.svg {
        let svg_n = output::curve_svg(
            &analysis.curve_effective,
            "effective number of authors",
            "N",
            true,
        );
        let svg_sigma = output::curve_svg(
            &analysis.curve_symmetry,
            "symmetry of contributions",
            "sigma",
            false,
        );
        let path_n = dir.join("curve_N.svg");
        create_file(&path_n)?
            .write_all(svg_n.as_bytes())
            .map_err(|e| io_err(&path_n, e))?;
        let path_s = dir.join("curve_sigma.svg");
        create_file(&path_s)?
            .write_all(svg_sigma.as_bytes())
            .map_err(|e| io_err(&path_s, e))?;
    }
    println!(
        "{} articles analyzed, {} cohorts -> {}",
        articles.len(),
        analysis.histogram.len(),
        dir.display()
    );
    Ok(())
}

/// `synth`: deterministic synthetic corpus to a JSONL file.
pub fn synth(config: &RunConfig, out: Option<&Path>) -> CliResult<()> {
    let path: PathBuf = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| config.out.clone());
    let records = generate_corpus(&config.synth_config()).map_err(|e| match e {
        authorcred_core::Error::UnknownRegime(r) => CliError::Usage(format!("unknown regime: {r}")),
        other => CliError::Usage(other.to_string()),
    })?;
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    let mut file = create_file(&path)?;
    write_jsonl(&records, &mut file).map_err(|e| io_err(&path, e))?;
    file.flush().map_err(|e| io_err(&path, e))?;
    println!(
        "wrote {} articles to {} (seed {}, regime {})",
        records.len(),
        path.display(),
        config.seed,
        config.regime
    );
    Ok(())
}

/// `report`: comparison-ready tables on stdout, including the parameter
/// values the numbers were computed with.
pub fn report(config: &RunConfig) -> CliResult<()> {
    let (articles, report, analysis) = run_analysis(config)?;
    let stdout = std::io::stdout();
    match render_report(&mut stdout.lock(), config, &articles, &report, &analysis) {
        // a closed pager is not an error
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(CliError::Io(e.to_string())),
        Ok(()) => Ok(()),
    }
}

fn render_report(
    w: &mut impl Write,
    config: &RunConfig,
    articles: &[ProcessedArticle],
    report: &PipelineReport,
    analysis: &CorpusAnalysis,
) -> std::io::Result<()> {
    let total_authors: usize = articles.iter().map(|a| a.author_count()).sum();

    writeln!(w, "corpus summary")?;
    writeln!(
        w,
        "  {} articles kept, {} excluded{}",
        articles.len(),
        report.exclusions.len(),
        exclusion_breakdown(&report.exclusions)
    )?;
    writeln!(w, "  {total_authors} author occurrences")?;
    writeln!(
        w,
        "  parameters: format={} similarity={} threshold={:.2} include_revised={} epsilon={:.2}",
        config.format, config.similarity, config.threshold, config.include_revised, config.epsilon
    )?;
    if !report.unmapped_phrases.is_empty() {
        let occurrences: usize = report.unmapped_phrases.values().sum();
        writeln!(
            w,
            "  {} distinct unmapped phrases ({} occurrences) dropped",
            report.unmapped_phrases.len(),
            occurrences
        )?;
    }

    writeln!(w)?;
    writeln!(w, "category frequencies (fraction of author occurrences)")?;
    for (category, fraction) in &analysis.frequencies {
        writeln!(
            w,
            "  {:<28} {:>6.2}%",
            category.display_name(),
            fraction * 100.0
        )?;
    }

    writeln!(w)?;
    writeln!(w, "authors per paper")?;
    writeln!(w, "  {:>4}  {:>6}", "n_A", "papers")?;
    for (n, count) in &analysis.histogram {
        writeln!(w, "  {n:>4}  {count:>6}")?;
    }

    for (title, curve) in [
        ("effective number of authors", &analysis.curve_effective),
        ("symmetry of contributions", &analysis.curve_symmetry),
    ] {
        writeln!(w)?;
        writeln!(w, "{title} by byline size")?;
        writeln!(
            w,
            "  {:>4}  {:>9}  {:>9}  {:>9}  {:>6}",
            "n_A", "mean", "min", "max", "papers"
        )?;
        for point in curve {
            writeln!(
                w,
                "  {:>4}  {:>9.4}  {:>9.4}  {:>9.4}  {:>6}",
                point.cohort.to_string(),
                point.mean,
                point.min,
                point.max,
                point.count
            )?;
        }
    }

    let retained = Category::retained(config.include_revised);
    let classified_cohorts: Vec<usize> = analysis
        .patterns
        .iter()
        .map(|row| row.author_count)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    if !classified_cohorts.is_empty() {
        writeln!(w)?;
        writeln!(w, "rank-contribution pattern per cohort and category")?;
        write!(w, "  {:>4}", "n_A")?;
        for category in &retained {
            write!(w, "  {:>12}", category.key())?;
        }
        writeln!(w)?;
        for n in classified_cohorts {
            write!(w, "  {n:>4}")?;
            for category in &retained {
                let label = analysis
                    .patterns
                    .iter()
                    .find(|row| row.author_count == n && row.category == *category)
                    .map(|row| row.class.label.to_string())
                    .unwrap_or_default();
                write!(w, "  {label:>12}")?;
            }
            writeln!(w)?;
        }
    }

    Ok(())
}
