//! Cuisine similarity: Jensen-Shannon divergence over ingredient
//! distributions, Gaussian flavor models compared by symmetrized KL,
//! and the top-k neighbor graphs built from either.

pub mod gaussian;
pub mod graph;

pub use gaussian::{
    fit_flavor_gaussian, flavor_similarity, gaussian_symkl, FlavorGaussian,
};
pub use graph::{
    build_similarity_graph, export_graph, import_graph_json, GraphEdge, GraphFormat, GraphNode,
    SimilarityGraph,
};

use rayon::prelude::*;

use crate::corpus::RecipeCorpus;
use crate::error::{Error, Result};
use crate::metrics::{ingredient_distribution, BalancedSample};

/// Which similarity semantics a matrix or graph carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimilarityKind {
    /// `1 - JS` over ingredient distributions, in `[0, 1]`.
    Ingredient,
    /// Reciprocal symmetrized KL between flavor Gaussians, capped.
    Flavor,
}

impl SimilarityKind {
    pub fn name(self) -> &'static str {
        match self {
            SimilarityKind::Ingredient => "ingredient",
            SimilarityKind::Flavor => "flavor",
        }
    }
}

/// Jensen-Shannon divergence between two probability vectors, in bits
/// (base-2 logarithms), so the value lies in `[0, 1]`.
///
/// Both arguments must be equal-length distributions: non-negative
/// entries summing to 1 (within 1e-6). Zero entries contribute zero;
/// disjoint supports reach the maximum of exactly 1.
pub fn js_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            context: "js_divergence",
            expected: p.len(),
            got: q.len(),
        });
    }
    validate_distribution(p)?;
    validate_distribution(q)?;
    let mut kl_p = 0.0;
    let mut kl_q = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        let m = 0.5 * (pi + qi);
        if pi > 0.0 {
            kl_p += pi * (pi / m).log2();
        }
        if qi > 0.0 {
            kl_q += qi * (qi / m).log2();
        }
    }
    Ok(0.5 * (kl_p + kl_q))
}

fn validate_distribution(p: &[f64]) -> Result<()> {
    if p.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::InvalidArg(
            "distribution entries must be finite and non-negative".into(),
        ));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidArg(format!(
            "distribution sums to {sum}, expected 1"
        )));
    }
    Ok(())
}

/// Ingredient-usage similarity: `1 - JS(p, q)`. Identical distributions
/// score 1; disjoint supports score 0.
pub fn ingredient_similarity(p: &[f64], q: &[f64]) -> Result<f64> {
    Ok(1.0 - js_divergence(p, q)?)
}

/// A dense symmetric similarity matrix over labeled cuisines.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    pub kind: SimilarityKind,
    /// Sorted cuisine labels; `values` rows/columns follow this order.
    pub labels: Vec<String>,
    /// Row-major square matrix; `values[i][i]` holds the self-similarity
    /// (1 for ingredient, the cap for flavor).
    pub values: Vec<Vec<f64>>,
}

/// Cuisines left out of the flavor matrix and how many usable flavor
/// vectors they had.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcludedCuisine {
    pub cuisine: String,
    pub have: usize,
    pub need: usize,
}

fn fill_symmetric<F>(
    kind: SimilarityKind,
    labels: Vec<String>,
    diagonal: f64,
    threads: usize,
    cell: F,
) -> Result<SimilarityMatrix>
where
    F: Fn(usize, usize) -> Result<f64> + Sync,
{
    let n = labels.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let computed: Vec<Result<f64>> = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidArg(format!("thread pool: {e}")))?;
        // Results land at fixed pair positions, so the outcome is
        // identical to the sequential fill.
        pool.install(|| pairs.par_iter().map(|&(i, j)| cell(i, j)).collect())
    } else {
        pairs.iter().map(|&(i, j)| cell(i, j)).collect()
    };
    let mut values = vec![vec![0.0; n]; n];
    for (idx, res) in computed.into_iter().enumerate() {
        let (i, j) = pairs[idx];
        let v = res?;
        values[i][j] = v;
        values[j][i] = v;
    }
    for i in 0..n {
        values[i][i] = diagonal;
    }
    Ok(SimilarityMatrix {
        kind,
        labels,
        values,
    })
}

/// Pairwise `1 - JS` similarities between the ingredient distributions
/// of every sampled cuisine. `threads > 1` parallelizes the pair fill
/// without changing the result.
pub fn ingredient_similarity_matrix(
    sample: &BalancedSample,
    corpus: &RecipeCorpus,
    threads: usize,
) -> Result<SimilarityMatrix> {
    if threads == 0 {
        return Err(Error::InvalidArg("threads must be at least 1".into()));
    }
    let labels: Vec<String> = sample.per_cuisine.keys().cloned().collect();
    let dists = labels
        .iter()
        .map(|c| ingredient_distribution(sample, c, corpus))
        .collect::<Result<Vec<_>>>()?;
    fill_symmetric(
        SimilarityKind::Ingredient,
        labels,
        1.0,
        threads,
        |i, j| ingredient_similarity(&dists[i].probs, &dists[j].probs),
    )
}

/// Pairwise capped reciprocal symmetrized-KL similarities between
/// per-cuisine flavor Gaussians. Cuisines with fewer than the required
/// number of complete flavor vectors are excluded and reported.
pub fn flavor_similarity_matrix(
    sample: &BalancedSample,
    corpus: &RecipeCorpus,
    ridge: f64,
    cap: f64,
    threads: usize,
) -> Result<(SimilarityMatrix, Vec<ExcludedCuisine>)> {
    if threads == 0 {
        return Err(Error::InvalidArg("threads must be at least 1".into()));
    }
    let mut labels = Vec::new();
    let mut gaussians = Vec::new();
    let mut excluded = Vec::new();
    for cuisine in sample.per_cuisine.keys() {
        match fit_flavor_gaussian(sample, cuisine, corpus, ridge) {
            Ok(g) => {
                labels.push(cuisine.clone());
                gaussians.push(g);
            }
            Err(Error::TooFewFlavorVectors { cuisine, have, need }) => {
                excluded.push(ExcludedCuisine {
                    cuisine,
                    have,
                    need,
                });
            }
            Err(e) => return Err(e),
        }
    }
    let matrix = fill_symmetric(
        SimilarityKind::Flavor,
        labels,
        cap,
        threads,
        |i, j| flavor_similarity(&gaussians[i], &gaussians[j], cap),
    )?;
    Ok((matrix, excluded))
}
