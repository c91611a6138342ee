//! The numeric core: author x contribution matrices, contribution shares,
//! share entropy, effective number of authors, symmetry, and the
//! accessibility of a weighted star.
//!
//! All entropies use the natural logarithm so that `exp` inverts them, with
//! the standard convention `0 * ln 0 = 0`. Sums are compensated
//! (Neumaier) so entropy stays stable for bylines up to hundreds of authors.

use std::collections::BTreeSet;

use crate::canon::Category;
use crate::{Error, Result};

/// Tolerance for "these probabilities/shares must sum to 1" checks.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Compensated (Neumaier) summation.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for value in values {
        let t = sum + value;
        if sum.abs() >= value.abs() {
            compensation += (sum - t) + value;
        } else {
            compensation += (value - t) + sum;
        }
        sum = t;
    }
    sum + compensation
}

/// Binary author x category matrix: entry `(i, j)` is 1 iff the rank-`i+1`
/// author performs the `j`-th retained category. Row order equals author
/// rank order; per-category weights default to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ContributionMatrix {
    categories: Vec<Category>,
    rows: Vec<Vec<bool>>,
    weights: Vec<f64>,
}

impl ContributionMatrix {
    /// Build from explicit rows. Every row must be `categories.len()` wide
    /// and at least one entry must be set.
    pub fn new(categories: Vec<Category>, rows: Vec<Vec<bool>>) -> Result<Self> {
        if rows.is_empty() || rows.iter().all(|r| r.iter().all(|&b| !b)) {
            return Err(Error::EmptyMatrix);
        }
        assert!(
            rows.iter().all(|r| r.len() == categories.len()),
            "matrix rows must match category count"
        );
        let weights = vec![1.0; categories.len()];
        Ok(ContributionMatrix {
            categories,
            rows,
            weights,
        })
    }

    /// Replace the per-category weights (non-negative, same length as the
    /// category list).
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        assert_eq!(
            weights.len(),
            self.categories.len(),
            "one weight per category"
        );
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::NonPositiveWeight(
                weights
                    .iter()
                    .copied()
                    .find(|&w| w < 0.0 || !w.is_finite())
                    .unwrap(),
            ));
        }
        self.weights = weights;
        Ok(self)
    }

    pub fn author_count(&self) -> usize {
        self.rows.len()
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn entry(&self, author: usize, category: usize) -> bool {
        self.rows[author][category]
    }

    /// Number of set entries in each author's row, in rank order.
    pub fn counts_per_author(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().filter(|&&b| b).count())
            .collect()
    }

    /// Categories credited to the rank-`i+1` author.
    pub fn categories_of(&self, author: usize) -> BTreeSet<Category> {
        self.rows[author]
            .iter()
            .zip(&self.categories)
            .filter_map(|(&set, &cat)| set.then_some(cat))
            .collect()
    }
}

/// Build the matrix for one article from its per-author category sets
/// (rank order). Columns are the retained categories in canonical order;
/// an article with nothing left after filtering is an error and is excluded
/// upstream.
pub fn build_matrix(
    author_categories: &[BTreeSet<Category>],
    include_revised: bool,
) -> Result<ContributionMatrix> {
    let retained = Category::retained(include_revised);
    let rows: Vec<Vec<bool>> = author_categories
        .iter()
        .map(|set| retained.iter().map(|c| set.contains(c)).collect())
        .collect();
    ContributionMatrix::new(retained, rows)
}

/// Per-author contribution shares: each author's weighted row sum divided by
/// the whole matrix's weighted mass. Sums to 1 by construction.
pub fn contribution_shares(matrix: &ContributionMatrix) -> Result<Vec<f64>> {
    let weights = matrix.weights();
    let row_mass = |row: &Vec<bool>| {
        compensated_sum(
            row.iter()
                .zip(weights)
                .filter_map(|(&b, &w)| b.then_some(w)),
        )
    };
    let masses: Vec<f64> = matrix.rows.iter().map(row_mass).collect();
    let total = compensated_sum(masses.iter().copied());
    if total <= 0.0 {
        return Err(Error::ZeroMass);
    }
    Ok(masses.into_iter().map(|m| m / total).collect())
}

/// Shannon entropy (nats) of a share distribution and its exponential, the
/// effective number of authors. Input must sum to 1 within
/// [`NORMALIZATION_TOLERANCE`]; zero shares contribute nothing.
pub fn effective_authors(shares: &[f64]) -> Result<(f64, f64)> {
    if let Some(&bad) = shares
        .iter()
        .find(|&&c| !(0.0..=1.0 + NORMALIZATION_TOLERANCE).contains(&c))
    {
        return Err(Error::InvalidShare(bad));
    }
    let sum = compensated_sum(shares.iter().copied());
    if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::UnnormalizedShares(sum));
    }
    let entropy = -compensated_sum(shares.iter().filter(|&&c| c > 0.0).map(|&c| c * c.ln()));
    Ok((entropy, entropy.exp()))
}

/// Symmetry of contributions: effective over actual author count, in
/// `(0, 1]`. Equals 1 iff all shares are equal.
pub fn symmetry(effective: f64, author_count: usize) -> Result<f64> {
    if author_count == 0 {
        return Err(Error::NoAuthors);
    }
    if effective < 1.0 - NORMALIZATION_TOLERANCE
        || effective > author_count as f64 + NORMALIZATION_TOLERANCE
    {
        return Err(Error::EffectiveOutOfRange {
            effective,
            actual: author_count,
        });
    }
    Ok(effective / author_count as f64)
}

/// The per-paper credit metrics derived from one contribution matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PaperMetrics {
    pub author_count: usize,
    /// Contribution share of each author, rank order; sums to 1.
    pub shares: Vec<f64>,
    /// Shannon entropy of the shares, nats.
    pub entropy: f64,
    /// Effective number of authors, `exp(entropy)`, in `[1, author_count]`.
    pub effective_authors: f64,
    /// Effective over actual author count, in `(0, 1]`.
    pub symmetry: f64,
}

impl PaperMetrics {
    pub fn from_matrix(matrix: &ContributionMatrix) -> Result<Self> {
        let shares = contribution_shares(matrix)?;
        let (entropy, effective) = effective_authors(&shares)?;
        let symmetry = symmetry(effective, matrix.author_count())?;
        Ok(PaperMetrics {
            author_count: matrix.author_count(),
            shares,
            entropy,
            effective_authors: effective,
            symmetry,
        })
    }
}

/// A star neighborhood: one center with positive transition probabilities to
/// each neighbor, stored normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedStar {
    center: String,
    probabilities: Vec<f64>,
}

impl WeightedStar {
    /// Normalize positive edge weights into transition probabilities.
    pub fn from_weights(center: impl Into<String>, weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyStar);
        }
        if let Some(&bad) = weights.iter().find(|&&w| w <= 0.0 || !w.is_finite()) {
            return Err(Error::NonPositiveWeight(bad));
        }
        let total = compensated_sum(weights.iter().copied());
        Ok(WeightedStar {
            center: center.into(),
            probabilities: weights.iter().map(|&w| w / total).collect(),
        })
    }

    /// Accept already-normalized probabilities; off-by-more-than-1e-9 sums
    /// are rejected.
    pub fn from_probabilities(center: impl Into<String>, probabilities: &[f64]) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::EmptyStar);
        }
        if let Some(&bad) = probabilities.iter().find(|&&p| p <= 0.0 || !p.is_finite()) {
            return Err(Error::NonPositiveWeight(bad));
        }
        let sum = compensated_sum(probabilities.iter().copied());
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::UnnormalizedShares(sum));
        }
        Ok(WeightedStar {
            center: center.into(),
            probabilities: probabilities.to_vec(),
        })
    }

    pub fn center(&self) -> &str {
        &self.center
    }

    pub fn degree(&self) -> usize {
        self.probabilities.len()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }
}

/// Accessibility of the star center: the exponential of the entropy of its
/// transition probabilities, i.e. the effective number of neighbors a
/// one-step random walker reaches. Bounded by the degree, with equality iff
/// the probabilities are uniform.
pub fn accessibility(star: &WeightedStar) -> Result<f64> {
    let sum = compensated_sum(star.probabilities.iter().copied());
    if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::UnnormalizedShares(sum));
    }
    let entropy = -compensated_sum(star.probabilities.iter().map(|&p| p * p.ln()));
    Ok(entropy.exp())
}
