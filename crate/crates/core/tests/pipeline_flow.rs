//! End-to-end flows over the library API: file parsing through metrics and
//! corpus aggregation, plus whole-pipeline determinism.

use std::io::Write;

use authorcred_core::analysis::{analyze_corpus, AnalysisOptions, CohortKey, PatternLabel};
use authorcred_core::ingest::CorpusFormat;
use authorcred_core::output;
use authorcred_core::pipeline::{run_file, PipelineOptions};
use authorcred_core::synth::{generate_corpus, write_jsonl, Regime, SynthConfig};

fn write_temp(content: &[u8]) -> tempfile::NamedTempFile {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(content).unwrap();
    file.flush().unwrap();
    file
}

#[test]
fn jsonl_file_to_metrics() {
    let corpus = concat!(
        r#"{"id":"p1","year":2010,"authors":["Ada K. Lima","Ben Moraes"],"contributions":[{"text":"Analyzed the data","acronyms":["AKL","BM"]},{"text":"Wrote the paper","acronyms":["AKL"]},{"text":"Collected the data","acronyms":["AKL"]}]}"#,
        "\n",
        r#"{"id":"p2","year":2011,"authors":["Carla Dias"],"contributions":[{"text":"Performed the experiments","acronyms":["CD"]}]}"#,
        "\n",
        r#"{"id":"p3","year":2012,"authors":["University of Somewhere"],"contributions":[{"text":"Analyzed the data","acronyms":["US"]}]}"#,
        "\n",
    );
    let file = write_temp(corpus.as_bytes());
    let (articles, report) = run_file(
        file.path(),
        CorpusFormat::Jsonl,
        &PipelineOptions::default(),
    )
    .unwrap();

    assert_eq!(articles.len(), 2);
    assert_eq!(report.exclusions.len(), 1);
    assert_eq!(articles[0].metrics.shares, vec![0.75, 0.25]);
    assert!((articles[0].metrics.effective_authors - 1.754765).abs() < 1e-6);
    assert!((articles[0].metrics.symmetry - 0.877383).abs() < 1e-6);
    assert_eq!(articles[1].metrics.effective_authors, 1.0);
    assert_eq!(articles[1].metrics.symmetry, 1.0);
}

#[test]
fn raw_file_to_metrics() {
    let corpus = "\
#id r1
#year 2009
#authors Ada K. Lima; Ben Moraes
Analyzed the data: AKL BM.
Wrote the paper: AKL.
";
    let file = write_temp(corpus.as_bytes());
    let (articles, report) =
        run_file(file.path(), CorpusFormat::Raw, &PipelineOptions::default()).unwrap();
    assert!(report.exclusions.is_empty());
    assert_eq!(articles.len(), 1);
    assert_eq!(articles[0].metrics.author_count, 2);
}

#[test]
fn uniform_corpus_has_unit_symmetry_everywhere() {
    let config = SynthConfig {
        papers: 50,
        regime: Regime::Uniform,
        min_authors: 1,
        max_authors: 8,
        ..Default::default()
    };
    let records = generate_corpus(&config).unwrap();
    let (articles, _) = authorcred_core::pipeline::process_records(
        &records,
        Default::default(),
        &PipelineOptions::default(),
    );
    assert_eq!(articles.len(), 50);
    let analysis = analyze_corpus(&articles, &AnalysisOptions::default()).unwrap();
    for point in &analysis.curve_symmetry {
        assert!((point.mean - 1.0).abs() < 1e-9);
        assert!((point.min - 1.0).abs() < 1e-9);
        assert!((point.max - 1.0).abs() < 1e-9);
    }
    // uniform crediting: every frequency over the five retained categories
    // is 1, revised never appears
    for (category, fraction) in &analysis.frequencies {
        let expected = if *category == authorcred_core::Category::RevisedManuscript {
            0.0
        } else {
            1.0
        };
        assert_eq!(*fraction, expected, "{category}");
    }
}

#[test]
fn rank_biased_corpus_symmetry_decreases_with_authors() {
    let config = SynthConfig {
        papers: 1500,
        seed: 7,
        regime: Regime::RankBiased,
        min_authors: 2,
        max_authors: 10,
    };
    let records = generate_corpus(&config).unwrap();
    let (articles, _) = authorcred_core::pipeline::process_records(
        &records,
        Default::default(),
        &PipelineOptions::default(),
    );
    let analysis = analyze_corpus(&articles, &AnalysisOptions::default()).unwrap();
    let means: Vec<(usize, f64)> = analysis
        .curve_symmetry
        .iter()
        .filter_map(|p| match p.cohort {
            CohortKey::Exact(n) => Some((n, p.mean)),
            _ => None,
        })
        .collect();
    assert_eq!(means.len(), 9);
    for pair in means.windows(2) {
        assert!(
            pair[1].1 < pair[0].1,
            "mean symmetry should fall from {} to {} authors ({} vs {})",
            pair[0].0,
            pair[1].0,
            pair[0].1,
            pair[1].1
        );
    }
}

#[test]
fn patterns_corpus_recovers_planted_labels() {
    let config = SynthConfig {
        papers: 2000,
        seed: 13,
        regime: Regime::Patterns,
        min_authors: 4,
        max_authors: 7,
    };
    let records = generate_corpus(&config).unwrap();
    let (articles, _) = authorcred_core::pipeline::process_records(
        &records,
        Default::default(),
        &PipelineOptions::default(),
    );
    let analysis = analyze_corpus(&articles, &AnalysisOptions::default()).unwrap();
    for row in &analysis.patterns {
        let expected = match row.category {
            authorcred_core::Category::PerformedExperiments => PatternLabel::A,
            authorcred_core::Category::CollectedData => PatternLabel::B,
            _ => PatternLabel::C,
        };
        assert_eq!(
            row.class.label, expected,
            "cohort {} category {}",
            row.author_count, row.category
        );
    }
}

#[test]
fn full_pipeline_is_deterministic() {
    let config = SynthConfig {
        papers: 120,
        seed: 3,
        ..Default::default()
    };
    let render = || {
        let records = generate_corpus(&config).unwrap();
        let file = {
            let mut f = tempfile::NamedTempFile::new().unwrap();
            write_jsonl(&records, &mut f).unwrap();
            f.flush().unwrap();
            f
        };
        let (articles, report) = run_file(
            file.path(),
            CorpusFormat::Jsonl,
            &PipelineOptions::default(),
        )
        .unwrap();
        let analysis = analyze_corpus(&articles, &AnalysisOptions::default()).unwrap();
        let mut bytes = Vec::new();
        output::write_metrics_csv(&articles, 10, &mut bytes).unwrap();
        output::write_histogram_csv(&analysis.histogram, &mut bytes).unwrap();
        output::write_curve_csv(&analysis.curve_effective, &mut bytes).unwrap();
        output::write_curve_csv(&analysis.curve_symmetry, &mut bytes).unwrap();
        output::write_patterns_csv(&analysis.patterns, &mut bytes).unwrap();
        output::write_frequencies_csv(&analysis.frequencies, &mut bytes).unwrap();
        output::write_exclusions_csv(&report.exclusions, &mut bytes).unwrap();
        output::write_unmapped_csv(&report.unmapped_phrases, &mut bytes).unwrap();
        for profile in &analysis.profiles {
            output::write_profile_csv(
                profile,
                &authorcred_core::Category::retained(false),
                &mut bytes,
            )
            .unwrap();
        }
        bytes
    };
    assert_eq!(render(), render());
}
