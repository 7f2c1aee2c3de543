//! Map raw ingredient strings onto the reference lexicon.

use std::collections::BTreeSet;

use crate::corpus::{IngredientLexicon, RecipeCorpus};
use crate::error::{Error, Result};

/// Outcome counts from [`standardize`]. Always satisfies
/// `parsed == retained + dropped_below_threshold + dropped_empty`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StandardizeReport {
    pub retained: usize,
    /// Recipes whose mapped fraction fell below `min_mapped`.
    pub dropped_below_threshold: usize,
    /// Recipes whose standardized set came out empty even though the
    /// threshold passed (only possible with `min_mapped == 0`).
    pub dropped_empty: usize,
    /// Size of the rebuilt vocabulary.
    pub vocabulary: usize,
}

/// Normalize every raw ingredient, resolve it through the lexicon, and
/// drop recipes that standardize too poorly.
///
/// A recipe is retained when at least `min_mapped` of its raw strings
/// resolve to reference ids (strictly fewer drops it) and its resulting
/// id set is non-empty. Duplicate resolutions collapse: the output is a
/// set. The ingredient index is rebuilt over the ids that survive, and
/// the lexicon (with updated lookup stats) is carried into the corpus.
pub fn standardize(
    corpus: RecipeCorpus,
    mut lexicon: IngredientLexicon,
    min_mapped: f64,
) -> Result<(RecipeCorpus, StandardizeReport)> {
    if !(0.0..=1.0).contains(&min_mapped) {
        return Err(Error::InvalidArg(format!(
            "min_mapped must lie in [0,1], got {min_mapped}"
        )));
    }

    let mut report = StandardizeReport::default();
    let mut retained = Vec::with_capacity(corpus.recipes.len());
    for mut recipe in corpus.recipes {
        let total = recipe.raw_ingredients.len();
        let mut mapped = 0usize;
        let mut std_set = BTreeSet::new();
        for raw in &recipe.raw_ingredients {
            let normalized = lexicon.normalizer.normalize(raw);
            match lexicon.lookup(&normalized) {
                Some(id) => {
                    mapped += 1;
                    std_set.insert(id.to_string());
                }
                None => {}
            }
        }
        lexicon.stats.mapped_raws += mapped;
        lexicon.stats.unmapped_raws += total - mapped;

        let fraction = if total == 0 {
            0.0
        } else {
            mapped as f64 / total as f64
        };
        if total == 0 || fraction < min_mapped {
            report.dropped_below_threshold += 1;
            continue;
        }
        if std_set.is_empty() {
            report.dropped_empty += 1;
            continue;
        }
        recipe.std_ingredients = std_set;
        retained.push(recipe);
    }
    report.retained = retained.len();

    let corpus = RecipeCorpus::from_recipes(retained, lexicon);
    report.vocabulary = corpus.vocab_size();
    Ok((corpus, report))
}
