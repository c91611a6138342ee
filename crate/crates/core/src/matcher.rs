//! Resolve the acronym tokens of contribution statements to author ranks.
//!
//! Authors invent their own acronyms, so resolution runs in two stages:
//! exact match against the acronym generated from each author's name, then a
//! Tanimoto-similarity fallback for the rest. Tokens scoring below the
//! threshold are dropped and logged, never guessed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::ingest::{AuthorName, RawStatement};
use crate::text;
use crate::{Error, Result};

/// Feature set used by [`tanimoto_similarity`].
///
/// Acronyms are short (2-5 letters) and middle initials come and go, so the
/// default compares character *sets*; bigram mode is available for sources
/// where letter order matters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SimilarityMode {
    #[default]
    CharSet,
    Bigram,
}

impl FromStr for SimilarityMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "charset" => Ok(SimilarityMode::CharSet),
            "bigram" => Ok(SimilarityMode::Bigram),
            other => Err(format!(
                "invalid similarity mode: {other} (expected charset or bigram)"
            )),
        }
    }
}

impl fmt::Display for SimilarityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimilarityMode::CharSet => f.write_str("charset"),
            SimilarityMode::Bigram => f.write_str("bigram"),
        }
    }
}

/// Derive an author's acronym from the capital letters of the
/// diacritic-folded name, in order. Lowercase particles ("da", "de", "van")
/// contribute nothing. Names without any capital letters fall back to the
/// uppercased initial of each word.
pub fn generate_acronym(name: &AuthorName) -> String {
    let folded = text::strip_diacritics(name.as_str());
    let capitals: String = folded.chars().filter(|c| c.is_ascii_uppercase()).collect();
    if !capitals.is_empty() {
        return capitals;
    }
    folded
        .split(|c: char| !c.is_alphabetic())
        .filter_map(|word| word.chars().next())
        .map(|c| c.to_ascii_uppercase())
        .collect()
}

/// Tanimoto (Jaccard) coefficient |A ∩ B| / |A ∪ B| between the feature sets
/// of two normalized acronyms. Symmetric; 1 iff the sets are equal; empty
/// input is an error, never a division by zero.
pub fn tanimoto_similarity(a: &str, b: &str, mode: SimilarityMode) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyAcronym);
    }
    let (sa, sb) = (features(a, mode), features(b, mode));
    let intersection = sa.intersection(&sb).count();
    let union = sa.union(&sb).count();
    Ok(intersection as f64 / union as f64)
}

fn features(s: &str, mode: SimilarityMode) -> BTreeSet<(char, char)> {
    let chars: Vec<char> = s.chars().collect();
    match mode {
        SimilarityMode::CharSet => chars.iter().map(|&c| (c, '\0')).collect(),
        SimilarityMode::Bigram => {
            if chars.len() < 2 {
                // single-letter acronym: the letter itself is the only gram
                chars.iter().map(|&c| (c, '\0')).collect()
            } else {
                chars.windows(2).map(|w| (w[0], w[1])).collect()
            }
        }
    }
}

/// Per-article lookup from generated acronyms to author ranks.
#[derive(Debug, Clone)]
pub struct AcronymIndex {
    generated: Vec<String>,
    by_acronym: BTreeMap<String, Vec<usize>>,
}

impl AcronymIndex {
    /// Build the index for one article's byline. `generated_acronyms()[i]`
    /// is derived solely from `authors[i]`; every rank lands in exactly one
    /// entry.
    pub fn build(authors: &[AuthorName]) -> Self {
        let generated: Vec<String> = authors.iter().map(generate_acronym).collect();
        let mut by_acronym: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, acronym) in generated.iter().enumerate() {
            by_acronym.entry(acronym.clone()).or_default().push(i + 1);
        }
        AcronymIndex {
            generated,
            by_acronym,
        }
    }

    pub fn author_count(&self) -> usize {
        self.generated.len()
    }

    /// Acronyms aligned with author order (index i = rank i+1).
    pub fn generated_acronyms(&self) -> &[String] {
        &self.generated
    }

    /// Ranks whose generated acronym equals `token` exactly, ascending.
    pub fn exact_ranks(&self, token: &str) -> Option<&[usize]> {
        self.by_acronym.get(token).map(|v| v.as_slice())
    }
}

/// How one token was resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenResolution {
    pub token: String,
    /// 1-based author rank.
    pub rank: usize,
    /// Similarity score; 1.0 for exact matches.
    pub score: f64,
}

/// A token that scored below the threshold against every author.
#[derive(Debug, Clone, PartialEq)]
pub struct DroppedToken {
    pub token: String,
    pub best_candidate: String,
    pub best_score: f64,
}

/// A statement whose tokens have been mapped to author ranks.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedStatement {
    pub text: String,
    pub resolutions: Vec<TokenResolution>,
    pub dropped: Vec<DroppedToken>,
}

impl ResolvedStatement {
    /// The set of credited ranks; non-empty for any successfully resolved
    /// statement.
    pub fn author_ranks(&self) -> BTreeSet<usize> {
        self.resolutions.iter().map(|r| r.rank).collect()
    }
}

/// Map each token of a statement to an author rank: the exact-match rank if
/// one exists, otherwise the rank with maximal Tanimoto similarity at or
/// above `threshold`. Ties break toward the lowest rank. Tokens below the
/// threshold are dropped and recorded; a statement whose every token drops
/// is an [`Error::UnresolvableStatement`].
pub fn resolve_statement(
    statement: &RawStatement,
    index: &AcronymIndex,
    threshold: f64,
    mode: SimilarityMode,
) -> Result<ResolvedStatement> {
    let (resolutions, dropped) = resolve_tokens(statement, index, threshold, mode);
    if resolutions.is_empty() {
        return Err(Error::UnresolvableStatement(statement.acronyms.clone()));
    }
    Ok(ResolvedStatement {
        text: statement.text.clone(),
        resolutions,
        dropped,
    })
}

/// The infallible core of [`resolve_statement`]: per-token outcomes, with
/// drop diagnostics even when every token fails.
pub fn resolve_tokens(
    statement: &RawStatement,
    index: &AcronymIndex,
    threshold: f64,
    mode: SimilarityMode,
) -> (Vec<TokenResolution>, Vec<DroppedToken>) {
    debug_assert!(
        threshold > 0.0 && threshold <= 1.0,
        "threshold must be in (0, 1]"
    );
    let mut resolutions = Vec::new();
    let mut dropped = Vec::new();

    for token in &statement.acronyms {
        if let Some(ranks) = index.exact_ranks(token) {
            resolutions.push(TokenResolution {
                token: token.clone(),
                rank: ranks[0],
                score: 1.0,
            });
            continue;
        }
        let mut best: Option<(usize, f64, &str)> = None;
        for (i, acronym) in index.generated_acronyms().iter().enumerate() {
            if acronym.is_empty() {
                continue;
            }
            // tokens and generated acronyms are both non-empty here
            let score =
                tanimoto_similarity(token, acronym, mode).expect("non-empty acronyms always score");
            if best.is_none_or(|(_, best_score, _)| score > best_score) {
                best = Some((i + 1, score, acronym));
            }
        }
        match best {
            Some((rank, score, _)) if score >= threshold => {
                resolutions.push(TokenResolution {
                    token: token.clone(),
                    rank,
                    score,
                });
            }
            Some((_, score, acronym)) => {
                dropped.push(DroppedToken {
                    token: token.clone(),
                    best_candidate: acronym.to_string(),
                    best_score: score,
                });
            }
            None => {
                dropped.push(DroppedToken {
                    token: token.clone(),
                    best_candidate: String::new(),
                    best_score: 0.0,
                });
            }
        }
    }
    (resolutions, dropped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn authors(names: &[&str]) -> Vec<AuthorName> {
        names.iter().map(|&n| AuthorName::new(n)).collect()
    }

    #[test]
    fn acronym_from_capital_letters() {
        assert_eq!(generate_acronym(&"Diego R. Amancio".into()), "DRA");
        assert_eq!(generate_acronym(&"Luciano da F. Costa".into()), "LFC");
        assert_eq!(generate_acronym(&"X".into()), "X");
        assert_eq!(generate_acronym(&"Edilson A. Corrêa Jr.".into()), "EACJ");
    }

    #[test]
    fn acronym_falls_back_to_word_initials() {
        assert_eq!(generate_acronym(&"john smith".into()), "JS");
        assert_eq!(generate_acronym(&"maría de la cruz".into()), "MDLC");
    }

    #[test]
    fn tanimoto_identical_and_disjoint() {
        assert_eq!(
            tanimoto_similarity("EAC", "EAC", SimilarityMode::CharSet).unwrap(),
            1.0
        );
        assert_eq!(
            tanimoto_similarity("ABC", "XYZ", SimilarityMode::CharSet).unwrap(),
            0.0
        );
    }

    #[test]
    fn tanimoto_partial_overlap() {
        let score = tanimoto_similarity("EAC", "EC", SimilarityMode::CharSet).unwrap();
        assert!((score - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn tanimoto_empty_is_error() {
        assert!(matches!(
            tanimoto_similarity("", "ABC", SimilarityMode::CharSet),
            Err(Error::EmptyAcronym)
        ));
    }

    #[test]
    fn bigram_mode_counts_adjacent_pairs() {
        // {EA, AC} vs {EC}: disjoint
        assert_eq!(
            tanimoto_similarity("EAC", "EC", SimilarityMode::Bigram).unwrap(),
            0.0
        );
        // {AB} vs {AB, BC}: 1/2
        let score = tanimoto_similarity("AB", "ABC", SimilarityMode::Bigram).unwrap();
        assert!((score - 0.5).abs() < 1e-9);
        // single-letter gram fallback
        assert_eq!(
            tanimoto_similarity("A", "A", SimilarityMode::Bigram).unwrap(),
            1.0
        );
    }

    fn statement(tokens: &[&str]) -> RawStatement {
        RawStatement::new("Analyzed the data", tokens).unwrap()
    }

    #[test]
    fn exact_match_resolves_with_quality_one() {
        let index = AcronymIndex::build(&authors(&["Diego R. Amancio"]));
        let resolved =
            resolve_statement(&statement(&["DRA"]), &index, 0.5, SimilarityMode::CharSet).unwrap();
        assert_eq!(resolved.resolutions[0].rank, 1);
        assert_eq!(resolved.resolutions[0].score, 1.0);
        assert!(resolved.dropped.is_empty());
    }

    #[test]
    fn fuzzy_match_uses_tanimoto() {
        let index = AcronymIndex::build(&authors(&["Diego R. Amancio"]));
        let resolved =
            resolve_statement(&statement(&["DA"]), &index, 0.5, SimilarityMode::CharSet).unwrap();
        assert_eq!(resolved.resolutions[0].rank, 1);
        assert!((resolved.resolutions[0].score - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn token_below_threshold_is_dropped() {
        let index = AcronymIndex::build(&authors(&["Diego R. Amancio", "Filipi N. Silva"]));
        let err = resolve_statement(&statement(&["QQQ"]), &index, 0.5, SimilarityMode::CharSet);
        assert!(matches!(err, Err(Error::UnresolvableStatement(_))));

        // with one resolvable token the statement survives and the drop is logged
        let resolved = resolve_statement(
            &statement(&["QQQ", "DRA"]),
            &index,
            0.5,
            SimilarityMode::CharSet,
        )
        .unwrap();
        assert_eq!(resolved.author_ranks(), [1].into_iter().collect());
        assert_eq!(resolved.dropped.len(), 1);
        assert_eq!(resolved.dropped[0].token, "QQQ");
    }

    #[test]
    fn ties_break_toward_lowest_rank() {
        // both authors generate "DRA"
        let index = AcronymIndex::build(&authors(&["David R. Allen", "Diana R. Archer"]));
        assert_eq!(index.exact_ranks("DRA"), Some(&[1, 2][..]));
        let resolved =
            resolve_statement(&statement(&["DRA"]), &index, 0.5, SimilarityMode::CharSet).unwrap();
        assert_eq!(resolved.resolutions[0].rank, 1);

        // fuzzy tie: "DR" scores 2/3 against both
        let resolved =
            resolve_statement(&statement(&["DR"]), &index, 0.5, SimilarityMode::CharSet).unwrap();
        assert_eq!(resolved.resolutions[0].rank, 1);
    }

    #[test]
    fn every_rank_lands_in_exactly_one_entry() {
        let index = AcronymIndex::build(&authors(&["Ann B. Cole", "Dan E. Fox", "Amy B. Chase"]));
        let mut seen: Vec<usize> = Vec::new();
        for ranks in index
            .generated_acronyms()
            .iter()
            .filter_map(|a| index.exact_ranks(a))
        {
            seen.extend_from_slice(ranks);
        }
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen, vec![1, 2, 3]);
    }

    proptest! {
        #[test]
        fn tanimoto_is_symmetric(a in "[A-Z]{1,6}", b in "[A-Z]{1,6}") {
            for mode in [SimilarityMode::CharSet, SimilarityMode::Bigram] {
                let ab = tanimoto_similarity(&a, &b, mode).unwrap();
                let ba = tanimoto_similarity(&b, &a, mode).unwrap();
                prop_assert_eq!(ab, ba);
                prop_assert!((0.0..=1.0).contains(&ab));
            }
        }

        #[test]
        fn tanimoto_self_is_one(a in "[A-Z]{1,6}") {
            for mode in [SimilarityMode::CharSet, SimilarityMode::Bigram] {
                prop_assert_eq!(tanimoto_similarity(&a, &a, mode).unwrap(), 1.0);
            }
        }

        // Perfect-match regime: when provided acronyms equal the generated
        // ones, every token resolves with quality 1.0 and nothing drops.
        #[test]
        fn perfect_acronyms_resolve_perfectly(n in 1usize..8) {
            let pool = ["Ann B. Cole", "Dan E. Fox", "Gil H. Iver", "Kay L. Moss",
                        "Ned O. Pratt", "Sue T. Usher", "Val W. Xie", "Zoe A. Burke"];
            let byline = authors(&pool[..n]);
            let index = AcronymIndex::build(&byline);
            let tokens: Vec<String> = index.generated_acronyms().to_vec();
            let token_refs: Vec<&str> = tokens.iter().map(|s| s.as_str()).collect();
            let resolved = resolve_statement(
                &statement(&token_refs), &index, 0.5, SimilarityMode::CharSet).unwrap();
            prop_assert!(resolved.dropped.is_empty());
            prop_assert!(resolved.resolutions.iter().all(|r| r.score == 1.0));
        }
    }
}
