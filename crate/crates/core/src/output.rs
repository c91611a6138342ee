//! Writers for every file the pipeline emits.
//!
//! All outputs are deterministic for a fixed input: rows follow either input
//! order or an explicit sort, and floats are printed with a fixed number of
//! decimals.

use std::collections::BTreeMap;
use std::io::Write;

use crate::analysis::{CohortKey, CurvePoint, PatternRow, RankProfile};
use crate::canon::Category;
use crate::ingest::ExclusionReport;
use crate::pipeline::{ProcessedArticle, UnresolvedToken};
use crate::Result;

/// Default number of per-rank share columns in the metrics CSV.
pub const DEFAULT_MAX_SHARE_COLUMNS: usize = 10;

fn fmt(value: f64) -> String {
    format!("{value:.6}")
}

/// `id,reason` in exclusion order.
pub fn write_exclusions_csv(report: &ExclusionReport, writer: impl Write) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["id", "reason"])?;
    for (id, reason) in report.entries() {
        csv.write_record([id.as_str(), &reason.to_string()])?;
    }
    csv.flush()?;
    Ok(())
}

/// `id,token,best_candidate,score` in drop order.
pub fn write_unresolved_csv(tokens: &[UnresolvedToken], writer: impl Write) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["id", "token", "best_candidate", "score"])?;
    for token in tokens {
        csv.write_record([
            token.article_id.as_str(),
            token.token.as_str(),
            token.best_candidate.as_str(),
            &fmt(token.best_score),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// `phrase,count`, most frequent first, ties alphabetical.
pub fn write_unmapped_csv(phrases: &BTreeMap<String, usize>, writer: impl Write) -> Result<()> {
    let mut rows: Vec<(&String, &usize)> = phrases.iter().collect();
    rows.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["phrase", "count"])?;
    for (phrase, count) in rows {
        csv.write_record([phrase.as_str(), &count.to_string()])?;
    }
    csv.flush()?;
    Ok(())
}

/// Per-paper metrics, one row per retained article ordered by id:
/// `id,n_A,H,N,sigma` plus one share column per rank up to
/// `max_share_columns`.
pub fn write_metrics_csv(
    articles: &[ProcessedArticle],
    max_share_columns: usize,
    writer: impl Write,
) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    let mut header = vec![
        "id".to_string(),
        "n_A".to_string(),
        "H".to_string(),
        "N".to_string(),
        "sigma".to_string(),
    ];
    header.extend((1..=max_share_columns).map(|r| format!("c{r}")));
    csv.write_record(&header)?;

    let mut sorted: Vec<&ProcessedArticle> = articles.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    for article in sorted {
        let m = &article.metrics;
        let mut row = vec![
            article.id.clone(),
            m.author_count.to_string(),
            fmt(m.entropy),
            fmt(m.effective_authors),
            fmt(m.symmetry),
        ];
        for rank in 0..max_share_columns {
            row.push(m.shares.get(rank).map(|&c| fmt(c)).unwrap_or_default());
        }
        csv.write_record(&row)?;
    }
    csv.flush()?;
    Ok(())
}

/// `n_A,count`, keys ascending, absent cohorts omitted.
pub fn write_histogram_csv(histogram: &BTreeMap<usize, usize>, writer: impl Write) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["n_A", "count"])?;
    for (n, count) in histogram {
        csv.write_record([n.to_string(), count.to_string()])?;
    }
    csv.flush()?;
    Ok(())
}

/// `n_A,mean,min,max,count`, exact cohorts ascending, overflow bucket last.
pub fn write_curve_csv(points: &[CurvePoint], writer: impl Write) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["n_A", "mean", "min", "max", "count"])?;
    for point in points {
        csv.write_record([
            point.cohort.to_string(),
            fmt(point.mean),
            fmt(point.min),
            fmt(point.max),
            point.count.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// One cohort's profile: `rank,total,<category columns>,total_frac`.
/// `total` is the mean contribution count per paper at that rank;
/// `total_frac` the rank's share of all contributions in the cohort.
pub fn write_profile_csv(
    profile: &RankProfile,
    categories: &[Category],
    writer: impl Write,
) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    let mut header = vec!["rank".to_string(), "total".to_string()];
    header.extend(categories.iter().map(|c| c.key().to_string()));
    header.push("total_frac".to_string());
    csv.write_record(&header)?;
    for rank_index in 0..profile.author_count {
        let mut row = vec![
            (rank_index + 1).to_string(),
            fmt(profile.per_rank_total[rank_index]),
        ];
        for category in categories {
            row.push(fmt(profile.per_rank_by_category[category][rank_index]));
        }
        row.push(fmt(profile.per_rank_fraction[rank_index]));
        csv.write_record(&row)?;
    }
    csv.flush()?;
    Ok(())
}

/// `n_A,category,label,score`, cohort-major.
pub fn write_patterns_csv(rows: &[PatternRow], writer: impl Write) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["n_A", "category", "label", "score"])?;
    for row in rows {
        csv.write_record([
            row.author_count.to_string(),
            row.category.key().to_string(),
            row.class.label.to_string(),
            fmt(row.class.score),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// `category,fraction` over all six categories, canonical order.
pub fn write_frequencies_csv(
    frequencies: &BTreeMap<Category, f64>,
    writer: impl Write,
) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["category", "fraction"])?;
    for (category, fraction) in frequencies {
        csv.write_record([category.key().to_string(), fmt(*fraction)])?;
    }
    csv.flush()?;
    Ok(())
}

const SVG_WIDTH: f64 = 640.0;
const SVG_HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

/// Render a metric curve as a standalone SVG: mean polyline with circle
/// markers, min..max whiskers, and optionally the `y = x` reference
/// diagonal. Only exact cohorts are plotted; the overflow bucket lives in
/// the CSV.
pub fn curve_svg(points: &[CurvePoint], title: &str, y_label: &str, diagonal: bool) -> String {
    let exact: Vec<(f64, &CurvePoint)> = points
        .iter()
        .filter_map(|p| match p.cohort {
            CohortKey::Exact(n) => Some((n as f64, p)),
            CohortKey::Overflow(_) => None,
        })
        .collect();

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" \
         viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"16\">{title}</text>\n",
        SVG_WIDTH / 2.0
    ));

    if exact.is_empty() {
        svg.push_str("</svg>\n");
        return svg;
    }

    let x_min = exact.first().map(|(x, _)| *x).unwrap();
    let x_max = exact.last().map(|(x, _)| *x).unwrap().max(x_min + 1.0);
    let y_data_max = exact.iter().map(|(_, p)| p.max).fold(0.0, f64::max);
    let y_max = if diagonal {
        y_data_max.max(x_max) * 1.05
    } else {
        y_data_max * 1.05
    };
    let y_max = if y_max > 0.0 { y_max } else { 1.0 };

    let sx = |x: f64| MARGIN + (x - x_min) / (x_max - x_min) * (SVG_WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| SVG_HEIGHT - MARGIN - y / y_max * (SVG_HEIGHT - 2.0 * MARGIN);

    // axes
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        MARGIN,
        SVG_HEIGHT - MARGIN,
        SVG_WIDTH - MARGIN,
        SVG_HEIGHT - MARGIN
    ));
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        MARGIN,
        MARGIN,
        MARGIN,
        SVG_HEIGHT - MARGIN
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"12\">number of authors</text>\n",
        SVG_WIDTH / 2.0,
        SVG_HEIGHT - 16.0
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"12\" transform=\"rotate(-90 18 {})\">{y_label}</text>\n",
        SVG_HEIGHT / 2.0,
        SVG_HEIGHT / 2.0
    ));

    // x ticks on every exact cohort, thinned to at most ~15 labels
    let stride = (exact.len() / 15).max(1);
    for (i, (x, _)) in exact.iter().enumerate() {
        if i % stride != 0 {
            continue;
        }
        svg.push_str(&format!(
            "<line x1=\"{0:.2}\" y1=\"{1:.2}\" x2=\"{0:.2}\" y2=\"{2:.2}\" stroke=\"black\"/>\n\
             <text x=\"{0:.2}\" y=\"{3:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"10\">{4}</text>\n",
            sx(*x),
            SVG_HEIGHT - MARGIN,
            SVG_HEIGHT - MARGIN + 5.0,
            SVG_HEIGHT - MARGIN + 18.0,
            x
        ));
    }
    // y ticks at quarters
    for i in 0..=4 {
        let y = y_max * i as f64 / 4.0;
        svg.push_str(&format!(
            "<line x1=\"{0:.2}\" y1=\"{1:.2}\" x2=\"{2:.2}\" y2=\"{1:.2}\" stroke=\"black\"/>\n\
             <text x=\"{3:.2}\" y=\"{4:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" \
             font-size=\"10\">{5}</text>\n",
            MARGIN - 5.0,
            sy(y),
            MARGIN,
            MARGIN - 8.0,
            sy(y) + 3.0,
            format_args!("{y:.2}")
        ));
    }

    if diagonal {
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"red\" \
             stroke-dasharray=\"6 4\"/>\n",
            sx(x_min),
            sy(x_min),
            sx(x_max),
            sy(x_max)
        ));
    }

    // min..max whiskers
    for (x, point) in &exact {
        svg.push_str(&format!(
            "<line x1=\"{0:.2}\" y1=\"{1:.2}\" x2=\"{0:.2}\" y2=\"{2:.2}\" stroke=\"steelblue\" \
             stroke-width=\"1\"/>\n",
            sx(*x),
            sy(point.min),
            sy(point.max)
        ));
    }
    // mean polyline and markers
    let path: Vec<String> = exact
        .iter()
        .map(|(x, p)| format!("{:.2},{:.2}", sx(*x), sy(p.mean)))
        .collect();
    svg.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\"/>\n",
        path.join(" ")
    ));
    for (x, point) in &exact {
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"steelblue\"/>\n",
            sx(*x),
            sy(point.mean)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
