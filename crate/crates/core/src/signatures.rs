//! TF-IDF ingredient signatures: which ingredients characterize a
//! cuisine against the rest of the sampled corpus.

use crate::error::{Error, Result};
use crate::corpus::RecipeCorpus;
use crate::metrics::BalancedSample;

/// TF-IDF weights for every (cuisine, ingredient) pair in a sample.
///
/// `weights[c][j] = tf(c, j) * ln(n_docs / df[j])` with raw
/// per-recipe-presence term frequencies and no smoothing; an ingredient
/// absent from the sample keeps weight zero everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdfTable {
    /// Sampled cuisines, sorted; one weight row each.
    pub cuisines: Vec<String>,
    /// Vocabulary in corpus column order.
    pub ingredient_names: Vec<String>,
    /// Cuisine-major weight matrix, rows parallel to `cuisines`.
    pub weights: Vec<Vec<f64>>,
    /// Number of sampled cuisines whose recipes use each ingredient.
    pub df: Vec<u32>,
    /// Number of cuisine documents (`cuisines.len()`).
    pub n_docs: usize,
}

/// Compute the TF-IDF table over a balanced sample. Each cuisine is one
/// "document"; `tf(c, j)` counts the cuisine's sampled recipes containing
/// ingredient `j`. Requires at least two sampled cuisines.
pub fn tfidf(sample: &BalancedSample, corpus: &RecipeCorpus) -> Result<TfIdfTable> {
    let n_docs = sample.per_cuisine.len();
    if n_docs < 2 {
        return Err(Error::Data(format!(
            "tf-idf needs at least 2 sampled cuisines, got {n_docs}"
        )));
    }
    let v = corpus.vocab_size();
    if v == 0 {
        return Err(Error::Data("corpus has an empty vocabulary".into()));
    }

    let mut tf_rows: Vec<Vec<u32>> = Vec::with_capacity(n_docs);
    let mut cuisines = Vec::with_capacity(n_docs);
    for (cuisine, indices) in &sample.per_cuisine {
        let mut tf = vec![0u32; v];
        for &idx in indices {
            for id in &corpus.recipes[idx].std_ingredients {
                let col = corpus
                    .ingredient_index
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::Data(format!("ingredient {id:?} is not indexed")))?;
                tf[col] += 1;
            }
        }
        cuisines.push(cuisine.clone());
        tf_rows.push(tf);
    }

    let mut df = vec![0u32; v];
    for tf in &tf_rows {
        for (j, &count) in tf.iter().enumerate() {
            if count > 0 {
                df[j] += 1;
            }
        }
    }

    let weights = tf_rows
        .iter()
        .map(|tf| {
            tf.iter()
                .enumerate()
                .map(|(j, &count)| {
                    if count == 0 || df[j] == 0 {
                        0.0
                    } else {
                        count as f64 * (n_docs as f64 / df[j] as f64).ln()
                    }
                })
                .collect()
        })
        .collect();

    Ok(TfIdfTable {
        cuisines,
        ingredient_names: corpus.ingredient_names.clone(),
        weights,
        df,
        n_docs,
    })
}

/// The cuisine's `k` highest-weight ingredients, weight descending,
/// ties broken by ascending ingredient id. Zero-weight ingredients are
/// never returned, so fewer than `k` entries may come back.
pub fn notable_ingredients(
    table: &TfIdfTable,
    cuisine: &str,
    k: usize,
) -> Result<Vec<(String, f64)>> {
    if k == 0 {
        return Err(Error::InvalidArg("k must be at least 1".into()));
    }
    let row = table
        .cuisines
        .iter()
        .position(|c| c == cuisine)
        .ok_or_else(|| Error::Data(format!("cuisine {cuisine:?} is not in the table")))?;
    let mut entries: Vec<(String, f64)> = table.weights[row]
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(j, &w)| (table.ingredient_names[j].clone(), w))
        .collect();
    entries.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .expect("weights are finite")
            .then_with(|| a.0.cmp(&b.0))
    });
    entries.truncate(k);
    Ok(entries)
}
