//! Corpus-level aggregation: author-count histograms, metric-vs-author-count
//! curves, per-rank contribution profiles and the classification of profile
//! shapes into three patterns:
//!
//! - **A**: totals fall monotonically with rank,
//! - **B**: totals rise from the first to the second-to-last rank, with the
//!   last author in between,
//! - **C**: a valley — high at both ends, minimal at an interior rank.
//!
//! Monotonicity is tested per step within a tolerance of `epsilon * max(v)`,
//! which makes every classification scale-invariant.

use std::collections::BTreeMap;
use std::fmt;

use crate::canon::Category;
use crate::metrics::compensated_sum;
use crate::pipeline::ProcessedArticle;
use crate::{canon, Error, Result};

/// Default per-step tolerance fraction for pattern classification.
pub const DEFAULT_EPSILON: f64 = 0.05;

/// Default author-count cap; larger cohorts pool into one overflow bucket
/// for curves.
pub const DEFAULT_COHORT_CAP: usize = 30;

/// Exact counts of papers per author count, sparse (absent key = zero).
pub fn author_count_histogram(
    author_counts: impl IntoIterator<Item = usize>,
) -> BTreeMap<usize, usize> {
    let mut histogram = BTreeMap::new();
    for n in author_counts {
        *histogram.entry(n).or_insert(0) += 1;
    }
    histogram
}

/// Cohort identity on a curve: an exact author count, or the pooled bucket
/// of every paper above the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CohortKey {
    Exact(usize),
    /// Everything with more than `cap` authors.
    Overflow(usize),
}

impl fmt::Display for CohortKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CohortKey::Exact(n) => write!(f, "{n}"),
            CohortKey::Overflow(cap) => write!(f, ">{cap}"),
        }
    }
}

/// Summary of one metric over one cohort.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub cohort: CohortKey,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

/// Group per-paper `(author_count, value)` pairs into one [`CurvePoint`] per
/// observed cohort, exact cohorts ascending and the overflow bucket (author
/// counts above `cap`) last.
pub fn metric_curve(values: impl IntoIterator<Item = (usize, f64)>, cap: usize) -> Vec<CurvePoint> {
    let mut groups: BTreeMap<CohortKey, Vec<f64>> = BTreeMap::new();
    for (n, value) in values {
        let key = if n <= cap {
            CohortKey::Exact(n)
        } else {
            CohortKey::Overflow(cap)
        };
        groups.entry(key).or_default().push(value);
    }
    groups
        .into_iter()
        .map(|(cohort, values)| {
            let count = values.len();
            let mean = compensated_sum(values.iter().copied()) / count as f64;
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            CurvePoint {
                cohort,
                mean,
                min,
                max,
                count,
            }
        })
        .collect()
}

/// Per-rank contribution totals for one author-count cohort.
#[derive(Debug, Clone, PartialEq)]
pub struct RankProfile {
    pub author_count: usize,
    pub cohort_size: usize,
    /// Mean number of categories credited to each rank, over cohort papers.
    pub per_rank_total: Vec<f64>,
    /// Each rank's share of all contributions in the cohort; sums to 1.
    pub per_rank_fraction: Vec<f64>,
    /// Mean 0/1 indicator per category and rank.
    pub per_rank_by_category: BTreeMap<Category, Vec<f64>>,
}

/// Aggregate the per-rank contribution profile of every paper with exactly
/// `author_count` authors. Items of `corpus` are per-paper category sets in
/// rank order (already filtered to the categories under analysis).
pub fn rank_profile<'a, I>(corpus: I, author_count: usize) -> Result<RankProfile>
where
    I: IntoIterator<Item = &'a [std::collections::BTreeSet<Category>]>,
{
    let cohort: Vec<_> = corpus
        .into_iter()
        .filter(|sets| sets.len() == author_count)
        .collect();
    if cohort.is_empty() || author_count == 0 {
        return Err(Error::EmptyCohort(author_count));
    }
    let cohort_size = cohort.len();
    let mut totals = vec![0.0; author_count];
    let mut by_category: BTreeMap<Category, Vec<f64>> = Category::ALL
        .iter()
        .map(|&c| (c, vec![0.0; author_count]))
        .collect();
    for sets in &cohort {
        for (rank_index, set) in sets.iter().enumerate() {
            totals[rank_index] += set.len() as f64;
            for category in set {
                by_category.get_mut(category).unwrap()[rank_index] += 1.0;
            }
        }
    }
    let grand_total: f64 = compensated_sum(totals.iter().copied());
    let per_rank_fraction = if grand_total > 0.0 {
        totals.iter().map(|&t| t / grand_total).collect()
    } else {
        vec![0.0; author_count]
    };
    let divide = |v: Vec<f64>| {
        v.into_iter()
            .map(|x| x / cohort_size as f64)
            .collect::<Vec<_>>()
    };
    Ok(RankProfile {
        author_count,
        cohort_size,
        per_rank_total: divide(totals),
        per_rank_fraction,
        per_rank_by_category: by_category
            .into_iter()
            .map(|(c, v)| (c, divide(v)))
            .collect(),
    })
}

/// Shape label of a per-rank vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternLabel {
    A,
    B,
    C,
    Unclassified,
}

impl fmt::Display for PatternLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternLabel::A => f.write_str("A"),
            PatternLabel::B => f.write_str("B"),
            PatternLabel::C => f.write_str("C"),
            PatternLabel::Unclassified => f.write_str("Unclassified"),
        }
    }
}

/// Step-consistency fractions of each candidate shape, kept for diagnostics
/// when nothing matches.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PatternScores {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Classification outcome: exactly one label plus a fit score in `[0, 1]`
/// (the winning shape's step-consistency fraction; for `Unclassified`, the
/// best losing fraction).
#[derive(Debug, Clone, PartialEq)]
pub struct PatternClass {
    pub label: PatternLabel,
    pub score: f64,
    pub scores: PatternScores,
}

/// Classify a per-rank vector into pattern A, B or C.
///
/// Per-step monotonicity is tolerant: an adverse step of at most
/// `epsilon * max(v)` does not break a run. Endpoint conditions are strict:
/// A needs `v[first] > v[last]`, B needs the last value between the first
/// and the second-to-last, C needs both endpoints above the interior
/// minimum. Vectors shorter than 4 are `Unclassified` by definition;
/// on a multi-match the exact-monotone labels win over C.
pub fn classify_pattern(values: &[f64], epsilon: f64) -> Result<PatternClass> {
    if let Some(&bad) = values.iter().find(|&&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::NegativeEntry(bad));
    }
    let n = values.len();
    if n < 4 {
        return Ok(PatternClass {
            label: PatternLabel::Unclassified,
            score: 0.0,
            scores: PatternScores::default(),
        });
    }
    let max = values.iter().copied().fold(0.0, f64::max);
    let tol = epsilon * max;
    let dec_ok = |i: usize| values[i + 1] <= values[i] + tol;
    let inc_ok = |i: usize| values[i + 1] >= values[i] - tol;
    let steps = n - 1;

    // A: non-increasing end to end, strictly lower at the last rank.
    let a_steps = (0..steps).filter(|&i| dec_ok(i)).count();
    let score_a = a_steps as f64 / steps as f64;
    let a_match = a_steps == steps && values[0] > values[n - 1];

    // B: non-decreasing to the second-to-last rank, last rank intermediate.
    let prefix_steps = n - 2;
    let b_steps = (0..prefix_steps).filter(|&i| inc_ok(i)).count();
    let score_b = b_steps as f64 / prefix_steps as f64;
    let b_match = b_steps == prefix_steps
        && values[n - 2] > values[0]
        && values[0] <= values[n - 1]
        && values[n - 1] <= values[n - 2];

    // C: falls to an interior minimum, rises after it, both endpoints above
    // the minimum.
    let mut score_c: f64 = 0.0;
    let mut c_match = false;
    for m in 1..n - 1 {
        let ok = (0..m).filter(|&i| dec_ok(i)).count() + (m..steps).filter(|&i| inc_ok(i)).count();
        score_c = score_c.max(ok as f64 / steps as f64);
        if ok == steps && values[0] > values[m] && values[n - 1] > values[m] {
            c_match = true;
        }
    }

    let scores = PatternScores {
        a: score_a,
        b: score_b,
        c: score_c,
    };
    let (label, score) = if a_match && b_match {
        // contradictory endpoints make this unreachable; kept as the
        // documented tie rule
        (PatternLabel::Unclassified, score_a.max(score_b))
    } else if a_match {
        (PatternLabel::A, score_a)
    } else if b_match {
        (PatternLabel::B, score_b)
    } else if c_match {
        (PatternLabel::C, score_c)
    } else {
        (
            PatternLabel::Unclassified,
            score_a.max(score_b).max(score_c),
        )
    };
    Ok(PatternClass {
        label,
        score,
        scores,
    })
}

/// One row of the pattern table: cohort, category, classification.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternRow {
    pub author_count: usize,
    pub category: Category,
    pub class: PatternClass,
}

/// Aggregation knobs.
#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub epsilon: f64,
    pub cohort_cap: usize,
    pub include_revised: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            epsilon: DEFAULT_EPSILON,
            cohort_cap: DEFAULT_COHORT_CAP,
            include_revised: false,
        }
    }
}

/// Everything the analyze stage computes over a processed corpus.
#[derive(Debug, Clone)]
pub struct CorpusAnalysis {
    pub histogram: BTreeMap<usize, usize>,
    pub curve_effective: Vec<CurvePoint>,
    pub curve_symmetry: Vec<CurvePoint>,
    /// One profile per exact cohort at or below the cap, ascending.
    pub profiles: Vec<RankProfile>,
    /// One row per cohort and retained category, cohort-major.
    pub patterns: Vec<PatternRow>,
    /// Author-occurrence fraction per category, over all six categories.
    pub frequencies: BTreeMap<Category, f64>,
}

/// Run every corpus-level aggregation.
pub fn analyze_corpus(
    articles: &[ProcessedArticle],
    options: &AnalysisOptions,
) -> Result<CorpusAnalysis> {
    if articles.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let histogram = author_count_histogram(articles.iter().map(|a| a.author_count()));
    let curve_effective = metric_curve(
        articles
            .iter()
            .map(|a| (a.author_count(), a.metrics.effective_authors)),
        options.cohort_cap,
    );
    let curve_symmetry = metric_curve(
        articles
            .iter()
            .map(|a| (a.author_count(), a.metrics.symmetry)),
        options.cohort_cap,
    );

    let filtered: Vec<Vec<std::collections::BTreeSet<Category>>> = articles
        .iter()
        .map(|a| a.retained_categories(options.include_revised))
        .collect();

    let retained = Category::retained(options.include_revised);
    let mut profiles = Vec::new();
    let mut patterns = Vec::new();
    for (&n, _) in histogram.iter().filter(|&(&n, _)| n <= options.cohort_cap) {
        let profile = rank_profile(filtered.iter().map(|sets| sets.as_slice()), n)?;
        for &category in &retained {
            let class =
                classify_pattern(&profile.per_rank_by_category[&category], options.epsilon)?;
            patterns.push(PatternRow {
                author_count: n,
                category,
                class,
            });
        }
        profiles.push(profile);
    }

    let frequencies =
        canon::category_frequencies(articles.iter().map(|a| a.author_categories.as_slice()))?;

    Ok(CorpusAnalysis {
        histogram,
        curve_effective,
        curve_symmetry,
        profiles,
        patterns,
        frequencies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn histogram_counts_exactly() {
        let histogram = author_count_histogram([2, 2, 5]);
        assert_eq!(histogram.get(&2), Some(&2));
        assert_eq!(histogram.get(&5), Some(&1));
        assert_eq!(histogram.get(&3), None); // sparse: absent, never zero
    }

    #[test]
    fn curve_groups_by_author_count() {
        // two 2-author papers: sigma for shares (0.75, 0.25) via the
        // product form, and a perfectly even paper
        let sigma_a = 0.75_f64.powf(-0.75) * 0.25_f64.powf(-0.25) / 2.0;
        assert!((sigma_a - 0.877383).abs() < 1e-6);
        let points = metric_curve([(2, sigma_a), (2, 1.0)], 30);
        assert_eq!(points.len(), 1);
        let p = &points[0];
        assert_eq!(p.cohort, CohortKey::Exact(2));
        assert_eq!(p.count, 2);
        assert!((p.mean - (sigma_a + 1.0) / 2.0).abs() < 1e-12);
        assert!((p.mean - 0.938691).abs() < 1e-6);
        assert!((p.min - sigma_a).abs() < 1e-12);
        assert_eq!(p.max, 1.0);
    }

    #[test]
    fn curve_pools_large_cohorts() {
        let points = metric_curve([(2, 1.0), (31, 0.5), (40, 0.7)], 30);
        assert_eq!(points.len(), 2);
        assert_eq!(points[0].cohort, CohortKey::Exact(2));
        assert_eq!(points[1].cohort, CohortKey::Overflow(30));
        assert_eq!(points[1].count, 2);
        assert_eq!(points[1].cohort.to_string(), ">30");
    }

    #[test]
    fn curve_invariants_hold() {
        let points = metric_curve([(3, 0.5), (3, 0.9), (3, 0.7)], 30);
        let p = &points[0];
        assert!(p.min <= p.mean && p.mean <= p.max);
    }

    fn paper(counts: &[usize]) -> Vec<BTreeSet<Category>> {
        let retained = Category::retained(false);
        counts
            .iter()
            .map(|&k| retained.iter().take(k).copied().collect())
            .collect()
    }

    #[test]
    fn profile_of_single_paper_is_its_counts() {
        let p = paper(&[3, 2]);
        let profile = rank_profile([p.as_slice()], 2).unwrap();
        assert_eq!(profile.per_rank_total, vec![3.0, 2.0]);
        assert_eq!(profile.cohort_size, 1);
        assert!((profile.per_rank_fraction[0] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn profile_averages_over_cohort() {
        let p1 = paper(&[3, 1]);
        let p2 = paper(&[1, 3]);
        let other = paper(&[2, 2, 2]); // different cohort, ignored
        let profile = rank_profile([p1.as_slice(), p2.as_slice(), other.as_slice()], 2).unwrap();
        assert_eq!(profile.cohort_size, 2);
        assert_eq!(profile.per_rank_total, vec![2.0, 2.0]);
        // fraction: 4 of 8 contributions at rank 1
        assert_eq!(profile.per_rank_fraction, vec![0.5, 0.5]);
    }

    #[test]
    fn profile_conserves_totals() {
        let papers = [paper(&[3, 1]), paper(&[2, 2]), paper(&[5, 0])];
        let profile = rank_profile(papers.iter().map(|p| p.as_slice()), 2).unwrap();
        let total: f64 = profile.per_rank_total.iter().sum();
        let mean_per_paper = (4.0 + 4.0 + 5.0) / 3.0;
        assert!((total - mean_per_paper).abs() < 1e-12);
        let fraction_sum: f64 = profile.per_rank_fraction.iter().sum();
        assert!((fraction_sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn profile_of_missing_cohort_errors() {
        let p = paper(&[1, 1]);
        assert!(matches!(
            rank_profile([p.as_slice()], 9),
            Err(Error::EmptyCohort(9))
        ));
    }

    #[test]
    fn classify_recognizes_the_three_shapes() {
        let a = classify_pattern(&[10.0, 8.0, 6.0, 4.0, 2.0], 0.05).unwrap();
        assert_eq!(a.label, PatternLabel::A);
        assert_eq!(a.score, 1.0);

        let b = classify_pattern(&[2.0, 4.0, 6.0, 8.0, 5.0], 0.05).unwrap();
        assert_eq!(b.label, PatternLabel::B);

        let c = classify_pattern(&[10.0, 6.0, 4.0, 6.0, 10.0], 0.05).unwrap();
        assert_eq!(c.label, PatternLabel::C);
    }

    #[test]
    fn classify_short_and_flat_vectors_are_unclassified() {
        let short = classify_pattern(&[3.0, 2.0, 1.0], 0.05).unwrap();
        assert_eq!(short.label, PatternLabel::Unclassified);

        let flat = classify_pattern(&[2.0, 2.0, 2.0, 2.0, 2.0], 0.05).unwrap();
        assert_eq!(flat.label, PatternLabel::Unclassified);
        // flat vectors run every monotone test cleanly; only the strict
        // endpoint checks fail, so diagnostics stay at 1.0
        assert_eq!(flat.scores.a, 1.0);
    }

    #[test]
    fn classify_rejects_negatives() {
        assert!(matches!(
            classify_pattern(&[1.0, -0.5, 2.0, 3.0], 0.05),
            Err(Error::NegativeEntry(_))
        ));
    }

    #[test]
    fn classify_tolerates_small_upticks() {
        // one 2% uptick within the 5% tolerance band
        let v = [10.0, 8.0, 8.2, 6.0, 4.0];
        assert_eq!(classify_pattern(&v, 0.05).unwrap().label, PatternLabel::A);
        // the same uptick breaks at a tighter tolerance
        assert_eq!(
            classify_pattern(&v, 0.01).unwrap().label,
            PatternLabel::Unclassified
        );
    }

    #[test]
    fn unclassified_carries_losing_scores() {
        let v = [10.0, 2.0, 9.0, 1.0, 8.0]; // sawtooth
        let class = classify_pattern(&v, 0.05).unwrap();
        assert_eq!(class.label, PatternLabel::Unclassified);
        assert!(class.scores.a < 1.0 && class.scores.b < 1.0 && class.scores.c < 1.0);
        assert_eq!(
            class.score,
            class.scores.a.max(class.scores.b).max(class.scores.c)
        );
    }

    proptest! {
        #[test]
        fn classification_is_scale_invariant(
            values in proptest::collection::vec(0.0f64..100.0, 4..12),
            scale in 0.001f64..1000.0,
        ) {
            let scaled: Vec<f64> = values.iter().map(|&v| v * scale).collect();
            let original = classify_pattern(&values, 0.05).unwrap();
            let rescaled = classify_pattern(&scaled, 0.05).unwrap();
            prop_assert_eq!(original.label, rescaled.label);
        }

        #[test]
        fn symmetric_valley_survives_reversal(
            half in proptest::collection::vec(0.0f64..100.0, 2..6),
            middle in 0.0f64..100.0,
        ) {
            // palindrome: v ++ [middle] ++ reverse(v)
            let mut values = half.clone();
            values.push(middle);
            values.extend(half.iter().rev());
            let forward = classify_pattern(&values, 0.05).unwrap();
            let mut reversed = values.clone();
            reversed.reverse();
            let backward = classify_pattern(&reversed, 0.05).unwrap();
            if forward.label == PatternLabel::C {
                prop_assert_eq!(backward.label, PatternLabel::C);
            }
        }
    }

    #[test]
    fn curve_matches_brute_force_recomputation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let papers: Vec<(usize, f64)> = (0..100)
            .map(|_| (rng.random_range(1..=12), rng.random::<f64>()))
            .collect();

        let points = metric_curve(papers.iter().copied(), 30);

        // brute force: scan per cohort, naive mean
        for point in &points {
            let CohortKey::Exact(n) = point.cohort else {
                panic!("no overflow expected")
            };
            let cohort: Vec<f64> = papers
                .iter()
                .filter(|(m, _)| *m == n)
                .map(|&(_, v)| v)
                .collect();
            assert_eq!(point.count, cohort.len());
            let mean: f64 = cohort.iter().sum::<f64>() / cohort.len() as f64;
            assert!((point.mean - mean).abs() < 1e-12);
            let min = cohort.iter().copied().fold(f64::INFINITY, f64::min);
            let max = cohort.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(point.min, min);
            assert_eq!(point.max, max);
        }
    }
}
