//! Cuisine and region classification from binary ingredient
//! indicators: featurization, stratified splitting, a linear SVM
//! trained with Pegasos-style SGD, and a feed-forward network trained
//! with Adadelta.

pub mod eval;
pub mod mlp;
pub mod persist;
pub mod svm;

pub use eval::{evaluate, evaluate_predictions, ClassEval, Classifier, EvalReport};
pub use mlp::{train_mlp, MlpConfig, MlpModel};
pub use persist::SavedModel;
pub use svm::{train_svm, LinearModel, SvmConfig};

/// Per-epoch training losses reported by both trainers.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TrainReport {
    pub epoch_losses: Vec<f64>,
}

use ndarray::Array2;
use rand::seq::SliceRandom;

use crate::corpus::country::CountryTables;
use crate::corpus::RecipeCorpus;
use crate::error::{Error, Result};
use crate::seed;

/// What the class labels mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelKind {
    Cuisine,
    Region,
}

impl LabelKind {
    pub fn name(self) -> &'static str {
        match self {
            LabelKind::Cuisine => "cuisine",
            LabelKind::Region => "region",
        }
    }
}

/// Binary ingredient-presence features with dense class labels.
///
/// Rows are ordered by recipe id. Each row stores the sorted column
/// indices of the ingredients present, against a vocabulary of `v`
/// columns shared with the source corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub label_kind: LabelKind,
    /// Vocabulary size (number of feature columns).
    pub v: usize,
    /// Class names in sorted order; labels index into this.
    pub class_names: Vec<String>,
    /// Sorted ingredient column indices per row.
    pub rows: Vec<Vec<u32>>,
    /// Dense class id per row.
    pub labels: Vec<usize>,
    /// Recipe id per row, for traceability.
    pub recipe_ids: Vec<String>,
}

impl FeatureMatrix {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows per class, indexed by class id.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.class_names.len()];
        for &label in &self.labels {
            counts[label] += 1;
        }
        counts
    }

    /// Densifies the selected rows into a `len x v` 0/1 matrix.
    pub fn dense_batch(&self, row_indices: &[usize]) -> Array2<f64> {
        let mut out = Array2::zeros((row_indices.len(), self.v));
        for (r, &idx) in row_indices.iter().enumerate() {
            for &col in &self.rows[idx] {
                out[(r, col as usize)] = 1.0;
            }
        }
        out
    }

    fn take_rows(&self, row_indices: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            label_kind: self.label_kind,
            v: self.v,
            class_names: self.class_names.clone(),
            rows: row_indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: row_indices.iter().map(|&i| self.labels[i]).collect(),
            recipe_ids: row_indices
                .iter()
                .map(|&i| self.recipe_ids[i].clone())
                .collect(),
        }
    }
}

/// Builds the feature matrix for a standardized corpus.
///
/// With [`LabelKind::Cuisine`], only cuisines holding strictly more
/// than `min_recipes` recipes become classes; the rest are left out.
/// With [`LabelKind::Region`], every recipe participates, labeled by
/// its cuisine's region through `tables` (required), and a cuisine
/// with no region mapping is an error.
pub fn featurize(
    corpus: &RecipeCorpus,
    label_kind: LabelKind,
    min_recipes: usize,
    tables: Option<&CountryTables>,
) -> Result<FeatureMatrix> {
    if corpus.vocab_size() == 0 {
        return Err(Error::Data("corpus has an empty vocabulary".into()));
    }
    // (class name, recipe index) pairs, then sorted into final order.
    let mut tagged: Vec<(String, usize)> = Vec::new();
    match label_kind {
        LabelKind::Cuisine => {
            for (cuisine, indices) in &corpus.cuisines {
                if indices.len() > min_recipes {
                    tagged.extend(indices.iter().map(|&i| (cuisine.clone(), i)));
                }
            }
            if tagged.is_empty() {
                return Err(Error::Data(format!(
                    "no cuisine has more than {min_recipes} recipes"
                )));
            }
        }
        LabelKind::Region => {
            let tables = tables.ok_or_else(|| {
                Error::InvalidArg("region labels require country tables".into())
            })?;
            for (cuisine, indices) in &corpus.cuisines {
                let region = tables.region_of_cuisine(cuisine).ok_or_else(|| {
                    Error::Data(format!("cuisine {cuisine:?} has no region mapping"))
                })?;
                tagged.extend(indices.iter().map(|&i| (region.name().to_string(), i)));
            }
            if tagged.is_empty() {
                return Err(Error::Data("corpus has no recipes".into()));
            }
        }
    }
    let mut class_names: Vec<String> = tagged.iter().map(|(name, _)| name.clone()).collect();
    class_names.sort();
    class_names.dedup();
    let class_id = |name: &str| class_names.binary_search_by(|c| c.as_str().cmp(name)).unwrap();

    // Deterministic row order: sort by recipe id.
    tagged.sort_by(|a, b| corpus.recipes[a.1].id.cmp(&corpus.recipes[b.1].id));

    let mut rows = Vec::with_capacity(tagged.len());
    let mut labels = Vec::with_capacity(tagged.len());
    let mut recipe_ids = Vec::with_capacity(tagged.len());
    for (class, idx) in &tagged {
        let recipe = &corpus.recipes[*idx];
        let mut row: Vec<u32> = Vec::with_capacity(recipe.std_ingredients.len());
        for ing in &recipe.std_ingredients {
            let col = corpus.ingredient_index.get(ing).ok_or_else(|| {
                Error::Data(format!("ingredient {ing:?} is missing from the index"))
            })?;
            row.push(*col as u32);
        }
        if row.is_empty() {
            return Err(Error::Data(format!(
                "recipe {:?} has no standardized ingredients",
                recipe.id
            )));
        }
        // BTreeSet iteration is sorted and the index preserves name
        // order, so the row arrives sorted already.
        debug_assert!(row.windows(2).all(|w| w[0] < w[1]));
        rows.push(row);
        labels.push(class_id(class));
        recipe_ids.push(recipe.id.clone());
    }
    Ok(FeatureMatrix {
        label_kind,
        v: corpus.vocab_size(),
        class_names,
        rows,
        labels,
        recipe_ids,
    })
}

/// Stratified train/test split.
///
/// Each class contributes `floor(n_c * (1 - train_frac))` rows to the
/// test set, chosen without replacement by a per-class RNG derived
/// from `seed` and the class name; the remainder trains. Every class
/// must have at least two rows. Row order within each half follows
/// the original matrix.
pub fn split(
    fm: &FeatureMatrix,
    train_frac: f64,
    seed: u64,
) -> Result<(FeatureMatrix, FeatureMatrix)> {
    if !(train_frac.is_finite() && 0.0 < train_frac && train_frac < 1.0) {
        return Err(Error::InvalidArg(format!(
            "train fraction must lie strictly between 0 and 1, got {train_frac}"
        )));
    }
    let mut test_rows: Vec<usize> = Vec::new();
    let mut train_rows: Vec<usize> = Vec::new();
    for (class_id, class_name) in fm.class_names.iter().enumerate() {
        let mut members: Vec<usize> = (0..fm.len()).filter(|&i| fm.labels[i] == class_id).collect();
        if members.len() < 2 {
            return Err(Error::Data(format!(
                "class {class_name:?} has {} row(s); need at least 2 to split",
                members.len()
            )));
        }
        // floor(n_c * (1 - train_frac)) computed with a nudge so that
        // products which are integers in exact arithmetic (10 * 0.2)
        // do not round down from an off-by-one-ulp float.
        let test_count = (members.len() as f64 * (1.0 - train_frac) + 1e-9).floor() as usize;
        let mut rng = seed::rng(seed, &format!("split:{class_name}"));
        members.shuffle(&mut rng);
        test_rows.extend(&members[..test_count]);
        train_rows.extend(&members[test_count..]);
    }
    test_rows.sort_unstable();
    train_rows.sort_unstable();
    Ok((fm.take_rows(&train_rows), fm.take_rows(&test_rows)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::country::Region;
    use crate::testutil;

    fn toy_corpus() -> RecipeCorpus {
        testutil::corpus(&[
            ("a1", "alpha", &["garlic", "onion"]),
            ("a2", "alpha", &["garlic"]),
            ("a3", "alpha", &["onion", "rice"]),
            ("b1", "beta", &["rice", "soy"]),
            ("b2", "beta", &["soy"]),
            ("z1", "zeta", &["garlic"]),
        ])
    }

    #[test]
    fn featurize_builds_sorted_indicator_rows() {
        let corpus = toy_corpus();
        let fm = featurize(&corpus, LabelKind::Cuisine, 0, None).unwrap();
        assert_eq!(fm.class_names, vec!["alpha", "beta", "zeta"]);
        assert_eq!(fm.recipe_ids, vec!["a1", "a2", "a3", "b1", "b2", "z1"]);
        assert_eq!(fm.v, 4); // garlic, onion, rice, soy
        assert_eq!(fm.rows[0], vec![0, 1]); // garlic, onion
        assert_eq!(fm.rows[3], vec![2, 3]); // rice, soy
        assert_eq!(fm.labels, vec![0, 0, 0, 1, 1, 2]);
    }

    #[test]
    fn min_recipes_is_a_strict_threshold() {
        let corpus = toy_corpus();
        // beta has exactly 2 recipes: excluded at min_recipes = 2.
        let fm = featurize(&corpus, LabelKind::Cuisine, 2, None).unwrap();
        assert_eq!(fm.class_names, vec!["alpha"]);
        assert_eq!(fm.len(), 3);
        let all = featurize(&corpus, LabelKind::Cuisine, 99, None);
        assert!(all.is_err());
    }

    fn region_tables() -> CountryTables {
        let mut t = CountryTables::default();
        t.cuisine_to_country
            .insert("alpha".into(), vec!["Alphaland".into()]);
        t.cuisine_to_country
            .insert("beta".into(), vec!["Betaland".into()]);
        t.cuisine_to_country
            .insert("zeta".into(), vec!["Alphaland".into()]);
        t.country_to_region
            .insert("Alphaland".into(), Region::EastAsia);
        t.country_to_region
            .insert("Betaland".into(), Region::Africa);
        t
    }

    #[test]
    fn region_labels_pool_cuisines_and_keep_every_recipe() {
        let corpus = toy_corpus();
        let fm = featurize(&corpus, LabelKind::Region, 100, Some(&region_tables())).unwrap();
        assert_eq!(fm.class_names, vec!["Africa", "East Asia"]);
        assert_eq!(fm.len(), 6);
        // alpha and zeta share East Asia.
        assert_eq!(fm.labels, vec![1, 1, 1, 0, 0, 1]);
    }

    #[test]
    fn region_labels_require_tables_and_full_mapping() {
        let corpus = toy_corpus();
        assert!(matches!(
            featurize(&corpus, LabelKind::Region, 0, None),
            Err(Error::InvalidArg(_))
        ));
        let mut partial = region_tables();
        partial.cuisine_to_country.remove("zeta");
        assert!(matches!(
            featurize(&corpus, LabelKind::Region, 0, Some(&partial)),
            Err(Error::Data(_))
        ));
    }

    fn balanced_matrix(per_class: usize) -> FeatureMatrix {
        let mut recipes = Vec::new();
        for i in 0..per_class {
            recipes.push(testutil::recipe(&format!("alpha-{i:03}"), "alpha", &["garlic"]));
            recipes.push(testutil::recipe(&format!("beta-{i:03}"), "beta", &["soy"]));
        }
        let corpus = RecipeCorpus::from_recipes(recipes, Default::default());
        featurize(&corpus, LabelKind::Cuisine, 0, None).unwrap()
    }

    #[test]
    fn split_80_20_on_ten_rows_per_class_is_exactly_8_and_2() {
        let fm = balanced_matrix(10);
        let (train, test) = split(&fm, 0.8, 7).unwrap();
        assert_eq!(train.len(), 16);
        assert_eq!(test.len(), 4);
        assert_eq!(train.class_counts(), vec![8, 8]);
        assert_eq!(test.class_counts(), vec![2, 2]);
    }

    #[test]
    fn split_is_disjoint_exhaustive_and_deterministic() {
        let fm = balanced_matrix(13);
        let (train1, test1) = split(&fm, 0.75, 99).unwrap();
        let (train2, test2) = split(&fm, 0.75, 99).unwrap();
        assert_eq!(train1, train2);
        assert_eq!(test1, test2);
        let mut ids: Vec<&String> = train1.recipe_ids.iter().chain(&test1.recipe_ids).collect();
        ids.sort();
        let mut all: Vec<&String> = fm.recipe_ids.iter().collect();
        all.sort();
        assert_eq!(ids, all);
        // Different seeds pick different test rows (overwhelmingly).
        let (_, test3) = split(&fm, 0.75, 100).unwrap();
        assert_ne!(test1.recipe_ids, test3.recipe_ids);
    }

    #[test]
    fn split_respects_the_floor_rule_per_class() {
        let fm = balanced_matrix(7);
        // test = floor(7 * 0.25) = 1 per class.
        let (train, test) = split(&fm, 0.75, 1).unwrap();
        assert_eq!(test.class_counts(), vec![1, 1]);
        assert_eq!(train.class_counts(), vec![6, 6]);
    }

    #[test]
    fn split_rejects_tiny_classes_and_bad_fractions() {
        let corpus = toy_corpus(); // zeta has a single recipe
        let fm = featurize(&corpus, LabelKind::Cuisine, 0, None).unwrap();
        assert!(matches!(split(&fm, 0.8, 1), Err(Error::Data(_))));
        let ok = balanced_matrix(5);
        assert!(matches!(split(&ok, 0.0, 1), Err(Error::InvalidArg(_))));
        assert!(matches!(split(&ok, 1.0, 1), Err(Error::InvalidArg(_))));
    }

    #[test]
    fn dense_batch_places_ones_at_feature_columns() {
        let fm = balanced_matrix(2);
        let dense = fm.dense_batch(&[0, 1]);
        assert_eq!(dense.shape(), &[2, fm.v]);
        for (r, &row_idx) in [0usize, 1].iter().enumerate() {
            let mut expect = vec![0.0; fm.v];
            for &c in &fm.rows[row_idx] {
                expect[c as usize] = 1.0;
            }
            assert_eq!(dense.row(r).to_vec(), expect);
        }
    }
}
