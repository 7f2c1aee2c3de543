//! Balanced sampling and per-cuisine diversity / complexity metrics.
//!
//! Cuisine sizes in aggregator data are wildly uneven, so every metric
//! runs on a [`BalancedSample`]: exactly `n` recipes per cuisine, drawn
//! without replacement with a seeded generator; cuisines with fewer than
//! `n` recipes are excluded outright.

pub mod polyfit;

pub use polyfit::{fit_polynomial, PolyFit};

use std::collections::BTreeMap;

use crate::corpus::{CountryTables, RecipeCorpus};
use crate::error::{Error, Result};
use crate::seed;

/// A per-cuisine sample of fixed size `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedSample {
    /// Requested per-cuisine size.
    pub n: usize,
    /// Seed the sample was drawn with.
    pub seed: u64,
    /// Cuisine -> sampled recipe indices (into `corpus.recipes`),
    /// strictly ascending, exactly `n` per retained cuisine.
    pub per_cuisine: BTreeMap<String, Vec<usize>>,
    /// Cuisines left out because they hold fewer than `n` recipes.
    pub excluded: Vec<String>,
}

impl BalancedSample {
    /// Sampled recipe indices for `cuisine`, or an error naming it.
    pub fn indices_of(&self, cuisine: &str) -> Result<&[usize]> {
        self.per_cuisine
            .get(cuisine)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Data(format!("cuisine {cuisine:?} is not in the sample")))
    }
}

/// Draw exactly `n` recipes per cuisine, without replacement.
///
/// Each cuisine consumes its own random stream derived from `seed` and
/// the cuisine name, so the draw for one cuisine is independent of which
/// other cuisines exist. A cuisine with exactly `n` recipes keeps all of
/// them; one with fewer is excluded and listed in `excluded`.
pub fn sample_balanced(corpus: &RecipeCorpus, n: usize, seed: u64) -> Result<BalancedSample> {
    if n == 0 {
        return Err(Error::InvalidArg("sample size must be at least 1".into()));
    }
    let mut sample = BalancedSample {
        n,
        seed,
        per_cuisine: BTreeMap::new(),
        excluded: Vec::new(),
    };
    for (cuisine, indices) in &corpus.cuisines {
        if indices.len() < n {
            sample.excluded.push(cuisine.clone());
            continue;
        }
        let mut rng = seed::rng(seed, &format!("sample:{cuisine}"));
        let mut picked: Vec<usize> = rand::seq::index::sample(&mut rng, indices.len(), n)
            .into_iter()
            .map(|i| indices[i])
            .collect();
        picked.sort_unstable();
        sample.per_cuisine.insert(cuisine.clone(), picked);
    }
    Ok(sample)
}

/// Number of distinct standardized ingredients used by the cuisine's
/// sampled recipes.
pub fn global_diversity(
    sample: &BalancedSample,
    cuisine: &str,
    corpus: &RecipeCorpus,
) -> Result<usize> {
    let mut seen = std::collections::BTreeSet::new();
    for &idx in sample.indices_of(cuisine)? {
        seen.extend(corpus.recipes[idx].std_ingredients.iter());
    }
    Ok(seen.len())
}

/// A cuisine's ingredient-usage distribution over the corpus vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct CuisineDistribution {
    pub cuisine: String,
    /// One probability per vocabulary entry (corpus column order);
    /// sums to 1.
    pub probs: Vec<f64>,
    /// Number of non-zero entries.
    pub support_size: usize,
}

/// Per-recipe-presence ingredient distribution: each sampled recipe
/// contributes 1 to every ingredient it contains, and counts are
/// normalized over the whole vocabulary.
pub fn ingredient_distribution(
    sample: &BalancedSample,
    cuisine: &str,
    corpus: &RecipeCorpus,
) -> Result<CuisineDistribution> {
    let v = corpus.vocab_size();
    if v == 0 {
        return Err(Error::Data("corpus has an empty vocabulary".into()));
    }
    let mut counts = vec![0u64; v];
    for &idx in sample.indices_of(cuisine)? {
        for id in &corpus.recipes[idx].std_ingredients {
            let col = corpus
                .ingredient_index
                .get(id)
                .copied()
                .ok_or_else(|| Error::Data(format!("ingredient {id:?} is not indexed")))?;
            counts[col] += 1;
        }
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::Data(format!(
            "cuisine {cuisine:?} has no standardized ingredients in the sample"
        )));
    }
    let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
    let support_size = counts.iter().filter(|&&c| c > 0).count();
    Ok(CuisineDistribution {
        cuisine: cuisine.to_string(),
        probs,
        support_size,
    })
}

/// Shannon entropy in nats; zero-probability entries contribute zero.
pub fn entropy_nats(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

/// Local diversity of a cuisine: the Shannon entropy (nats) of its
/// ingredient distribution. Lies in `[0, ln(vocabulary)]`.
pub fn local_diversity(dist: &CuisineDistribution) -> f64 {
    entropy_nats(&dist.probs)
}

/// A per-cuisine metric re-keyed to countries.
#[derive(Debug, Clone, PartialEq)]
pub struct CountrySeries {
    /// Metric label, carried through to output files.
    pub metric: String,
    /// Country -> mean metric value over its cuisines.
    pub values: BTreeMap<String, f64>,
    /// Country -> the cuisines averaged into its value (sorted).
    pub provenance: BTreeMap<String, Vec<String>>,
    /// Cuisines with no country mapping, skipped with a warning.
    pub skipped_cuisines: Vec<String>,
}

/// Map per-cuisine values onto countries via the cuisine->country table,
/// averaging when several cuisines share a country. A cuisine may map to
/// several countries and then contributes to each.
pub fn map_to_countries(
    metric: &BTreeMap<String, f64>,
    tables: &CountryTables,
    metric_name: &str,
) -> Result<CountrySeries> {
    let mut sums: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    let mut provenance: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut skipped = Vec::new();
    for (cuisine, &value) in metric {
        let countries = tables.countries_of(cuisine);
        if countries.is_empty() {
            skipped.push(cuisine.clone());
            continue;
        }
        for country in countries {
            let entry = sums.entry(country.clone()).or_insert((0.0, 0));
            entry.0 += value;
            entry.1 += 1;
            provenance
                .entry(country.clone())
                .or_default()
                .push(cuisine.clone());
        }
    }
    if sums.is_empty() {
        return Err(Error::Data(
            "no cuisine in the metric maps to any country".into(),
        ));
    }
    let values = sums
        .into_iter()
        .map(|(country, (sum, count))| (country, sum / count as f64))
        .collect();
    Ok(CountrySeries {
        metric: metric_name.to_string(),
        values,
        provenance,
        skipped_cuisines: skipped,
    })
}

/// Distribution of per-recipe ingredient counts for one cuisine, on the
/// support `1..=i_max` shared by every cuisine of the corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityDistribution {
    pub cuisine: String,
    /// `pmf[i]` = fraction of sampled recipes with exactly `i`
    /// ingredients; index 0 is unused and zero.
    pub pmf: Vec<f64>,
    /// Running cumulative sums of `pmf`; `ccd[i_max] == 1`.
    pub ccd: Vec<f64>,
    /// Corpus-wide maximum ingredient count.
    pub i_max: usize,
}

/// Histogram of ingredient counts for the cuisine's sampled recipes,
/// padded to the corpus-wide maximum so that complexity scores are
/// comparable across cuisines.
pub fn complexity_distribution(
    sample: &BalancedSample,
    cuisine: &str,
    corpus: &RecipeCorpus,
) -> Result<ComplexityDistribution> {
    let i_max = corpus
        .recipes
        .iter()
        .map(|r| r.std_ingredients.len())
        .max()
        .unwrap_or(0);
    if i_max == 0 {
        return Err(Error::Data("corpus has no standardized recipes".into()));
    }
    let indices = sample.indices_of(cuisine)?;
    let mut hist = vec![0u64; i_max + 1];
    for &idx in indices {
        let count = corpus.recipes[idx].std_ingredients.len();
        if count == 0 || count > i_max {
            return Err(Error::Data(format!(
                "recipe {:?} has {count} ingredients, outside 1..={i_max}",
                corpus.recipes[idx].id
            )));
        }
        hist[count] += 1;
    }
    let total: u64 = hist.iter().sum();
    if total == 0 {
        return Err(Error::Data(format!("cuisine {cuisine:?} sample is empty")));
    }
    let pmf: Vec<f64> = hist.iter().map(|&c| c as f64 / total as f64).collect();
    let mut ccd = vec![0.0; i_max + 1];
    let mut running = 0.0;
    for i in 1..=i_max {
        running += pmf[i];
        ccd[i] = running;
    }
    Ok(ComplexityDistribution {
        cuisine: cuisine.to_string(),
        pmf,
        ccd,
        i_max,
    })
}

/// Complexity score: the reciprocal of the area under the cumulative
/// distribution. Mass concentrated at high ingredient counts shrinks the
/// area and raises the score; the score lies in `(1/i_max, 1]`-ish
/// territory, with the all-minimal corpus at exactly `1/i_max` and the
/// all-maximal one at exactly 1.
pub fn complexity_score(cd: &ComplexityDistribution) -> f64 {
    let area: f64 = cd.ccd[1..=cd.i_max].iter().sum();
    1.0 / area
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil;

    fn big_corpus(sizes: &[(&str, usize)]) -> RecipeCorpus {
        let mut entries = Vec::new();
        let mut ids = Vec::new();
        for (cuisine, count) in sizes {
            for i in 0..*count {
                ids.push((format!("{cuisine}-{i:04}"), cuisine.to_string()));
            }
        }
        for (id, cuisine) in &ids {
            entries.push((id.as_str(), cuisine.as_str(), ["salt"].as_slice()));
        }
        testutil::corpus(&entries)
    }

    #[test]
    fn keeps_cuisines_with_at_least_n_and_excludes_the_rest() {
        let corpus = big_corpus(&[("big", 150), ("exact", 100), ("small", 80)]);
        let sample = sample_balanced(&corpus, 100, 7).unwrap();
        assert_eq!(sample.per_cuisine.len(), 2);
        assert_eq!(sample.per_cuisine["big"].len(), 100);
        // A cuisine with exactly n recipes keeps all of them.
        assert_eq!(
            sample.per_cuisine["exact"],
            corpus.recipes_of("exact").to_vec()
        );
        assert_eq!(sample.excluded, vec!["small".to_string()]);
    }

    #[test]
    fn sampled_indices_are_distinct_sorted_and_deterministic() {
        let corpus = big_corpus(&[("big", 150)]);
        let a = sample_balanced(&corpus, 100, 7).unwrap();
        let b = sample_balanced(&corpus, 100, 7).unwrap();
        assert_eq!(a, b);
        let picked = &a.per_cuisine["big"];
        assert!(picked.windows(2).all(|w| w[0] < w[1]));
        let c = sample_balanced(&corpus, 100, 8).unwrap();
        assert_ne!(a.per_cuisine["big"], c.per_cuisine["big"]);
    }

    #[test]
    fn zero_sample_size_errors() {
        let corpus = big_corpus(&[("big", 5)]);
        assert!(matches!(
            sample_balanced(&corpus, 0, 7),
            Err(Error::InvalidArg(_))
        ));
    }

    #[test]
    fn global_diversity_counts_the_union() {
        let corpus = testutil::corpus(&[
            ("a", "x", &["a", "b"]),
            ("b", "x", &["b", "c"]),
            ("c", "y", &["a", "b"]),
            ("d", "y", &["a", "b"]),
        ]);
        let sample = sample_balanced(&corpus, 2, 1).unwrap();
        assert_eq!(global_diversity(&sample, "x", &corpus).unwrap(), 3);
        // Identical recipes count their set once.
        assert_eq!(global_diversity(&sample, "y", &corpus).unwrap(), 2);
        assert!(global_diversity(&sample, "zz", &corpus).is_err());
    }

    #[test]
    fn global_diversity_is_monotone_under_sample_union() {
        let corpus = testutil::corpus(&[
            ("a", "x", &["a", "b"]),
            ("b", "x", &["c"]),
            ("c", "x", &["d", "e"]),
        ]);
        let smaller = BalancedSample {
            n: 1,
            seed: 0,
            per_cuisine: [("x".to_string(), vec![0])].into(),
            excluded: vec![],
        };
        let larger = BalancedSample {
            n: 3,
            seed: 0,
            per_cuisine: [("x".to_string(), vec![0, 1, 2])].into(),
            excluded: vec![],
        };
        let d_small = global_diversity(&smaller, "x", &corpus).unwrap();
        let d_large = global_diversity(&larger, "x", &corpus).unwrap();
        assert!(d_small <= d_large);
    }

    #[test]
    fn distribution_matches_the_worked_example() {
        // Recipes {a,b} and {a}: p(a) = 2/3, p(b) = 1/3.
        let corpus = testutil::corpus(&[("r1", "x", &["a", "b"]), ("r2", "x", &["a"])]);
        let sample = sample_balanced(&corpus, 2, 1).unwrap();
        let dist = ingredient_distribution(&sample, "x", &corpus).unwrap();
        assert!((dist.probs[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((dist.probs[1] - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(dist.support_size, 2);
    }

    #[test]
    fn single_ingredient_cuisine_is_a_point_mass() {
        let corpus = testutil::corpus(&[("r1", "x", &["a"]), ("r2", "y", &["b"])]);
        let sample = sample_balanced(&corpus, 1, 1).unwrap();
        let dist = ingredient_distribution(&sample, "x", &corpus).unwrap();
        assert_eq!(dist.probs[0], 1.0);
        assert_eq!(dist.probs[1], 0.0);
        assert_eq!(dist.support_size, 1);
        assert_eq!(local_diversity(&dist), 0.0);
    }

    #[test]
    fn distribution_sums_to_one_and_matches_a_naive_count() {
        use rand::Rng;
        let mut rng = crate::seed::rng(99, "dist-fixture");
        let vocab: Vec<String> = (0..12).map(|i| format!("ing{i:02}")).collect();
        let mut entries: Vec<(String, Vec<&str>)> = Vec::new();
        for r in 0..40 {
            let k = rng.random_range(1..=6);
            let mut set: Vec<&str> = Vec::new();
            while set.len() < k {
                let pick = vocab[rng.random_range(0..vocab.len())].as_str();
                if !set.contains(&pick) {
                    set.push(pick);
                }
            }
            entries.push((format!("r{r:03}"), set));
        }
        let borrowed: Vec<(&str, &str, &[&str])> = entries
            .iter()
            .map(|(id, set)| (id.as_str(), "only", set.as_slice()))
            .collect();
        let corpus = testutil::corpus(&borrowed);
        let sample = sample_balanced(&corpus, 40, 3).unwrap();
        let dist = ingredient_distribution(&sample, "only", &corpus).unwrap();
        assert!((dist.probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);

        // Independent count: tally strings, normalize with a fresh pass.
        let mut naive: std::collections::HashMap<&str, u64> = Default::default();
        let mut total = 0u64;
        for (_, set) in &entries {
            for id in set {
                *naive.entry(id).or_default() += 1;
                total += 1;
            }
        }
        for (id, col) in &corpus.ingredient_index {
            let expected = naive.get(id.as_str()).copied().unwrap_or(0) as f64 / total as f64;
            assert!(
                (dist.probs[*col] - expected).abs() < 1e-12,
                "{id}: {} vs {expected}",
                dist.probs[*col]
            );
        }
    }

    #[test]
    fn entropy_matches_frozen_values() {
        assert_eq!(entropy_nats(&[1.0, 0.0]), 0.0);
        let uniform8 = vec![0.125; 8];
        assert!((entropy_nats(&uniform8) - 2.0794415416798357).abs() < 1e-12);
        let skewed = [2.0 / 3.0, 1.0 / 3.0];
        assert!((entropy_nats(&skewed) - 0.6365141682948128).abs() < 1e-12);
    }

    #[test]
    fn entropy_bounds_hold_on_random_distributions() {
        use rand::Rng;
        let mut rng = crate::seed::rng(5, "entropy-bounds");
        for _ in 0..200 {
            let k = rng.random_range(1..=16);
            let mut probs: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..1.0) + 1e-9).collect();
            let sum: f64 = probs.iter().sum();
            probs.iter_mut().for_each(|p| *p /= sum);
            let h = entropy_nats(&probs);
            assert!(h >= -1e-12, "negative entropy {h}");
            assert!(h <= (k as f64).ln() + 1e-9, "entropy {h} above ln({k})");
        }
    }

    #[test]
    fn merging_equal_probability_entries_decreases_entropy() {
        // Exact identity: merging two entries of probability p drops the
        // entropy by exactly 2 p ln 2.
        let p = 0.2;
        let before = [p, p, 0.35, 0.25];
        let after = [2.0 * p, 0.35, 0.25];
        let drop = entropy_nats(&before) - entropy_nats(&after);
        assert!((drop - 2.0 * p * 2.0_f64.ln()).abs() < 1e-12);
        assert!(drop > 0.0);
    }

    #[test]
    fn map_to_countries_passes_single_values_through_and_averages_pairs() {
        use crate::corpus::country::CountryTables;
        let mut tables = CountryTables::default();
        tables
            .cuisine_to_country
            .insert("solo".into(), vec!["Solostan".into()]);
        tables
            .cuisine_to_country
            .insert("first".into(), vec!["Pairland".into()]);
        tables
            .cuisine_to_country
            .insert("second".into(), vec!["Pairland".into()]);
        let metric: BTreeMap<String, f64> = [
            ("solo".to_string(), 7.5),
            ("first".to_string(), 4.0),
            ("second".to_string(), 6.0),
            ("unmapped".to_string(), 1.0),
        ]
        .into();
        let series = map_to_countries(&metric, &tables, "demo").unwrap();
        assert_eq!(series.values["Solostan"], 7.5);
        assert_eq!(series.values["Pairland"], 5.0);
        assert_eq!(series.skipped_cuisines, vec!["unmapped".to_string()]);
        assert_eq!(
            series.provenance["Pairland"],
            vec!["first".to_string(), "second".to_string()]
        );
    }

    #[test]
    fn map_to_countries_with_no_mapping_at_all_errors() {
        let tables = CountryTables::default();
        let metric: BTreeMap<String, f64> = [("x".to_string(), 1.0)].into();
        assert!(map_to_countries(&metric, &tables, "demo").is_err());
    }

    fn complexity_fixture(counts_per_recipe: &[usize], pad_to: usize) -> RecipeCorpus {
        // One cuisine under test plus a padding cuisine that fixes i_max.
        let vocab: Vec<String> = (0..pad_to).map(|i| format!("i{i:03}")).collect();
        let mut entries: Vec<(String, &str, Vec<&str>)> = Vec::new();
        for (r, &count) in counts_per_recipe.iter().enumerate() {
            let set: Vec<&str> = vocab[..count].iter().map(String::as_str).collect();
            entries.push((format!("m{r:03}"), "main", set));
        }
        entries.push((
            "pad0".to_string(),
            "padding",
            vocab.iter().map(String::as_str).collect(),
        ));
        let borrowed: Vec<(&str, &str, &[&str])> = entries
            .iter()
            .map(|(id, c, set)| (id.as_str(), *c, set.as_slice()))
            .collect();
        testutil::corpus(&borrowed)
    }

    #[test]
    fn all_minimal_recipes_score_the_reciprocal_of_i_max() {
        let corpus = complexity_fixture(&[1, 1, 1, 1], 20);
        let sample = BalancedSample {
            n: 4,
            seed: 0,
            per_cuisine: [("main".to_string(), vec![0, 1, 2, 3])].into(),
            excluded: vec![],
        };
        let cd = complexity_distribution(&sample, "main", &corpus).unwrap();
        assert_eq!(cd.i_max, 20);
        assert!((complexity_score(&cd) - 0.05).abs() < 1e-12);
    }

    #[test]
    fn all_maximal_recipes_score_one() {
        let corpus = complexity_fixture(&[20, 20, 20], 20);
        let sample = BalancedSample {
            n: 3,
            seed: 0,
            per_cuisine: [("main".to_string(), vec![0, 1, 2])].into(),
            excluded: vec![],
        };
        let cd = complexity_distribution(&sample, "main", &corpus).unwrap();
        assert!((complexity_score(&cd) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ccd_is_the_running_sum_of_the_pmf() {
        let corpus = complexity_fixture(&[1, 2, 2, 3, 5], 8);
        let sample = BalancedSample {
            n: 5,
            seed: 0,
            per_cuisine: [("main".to_string(), vec![0, 1, 2, 3, 4])].into(),
            excluded: vec![],
        };
        let cd = complexity_distribution(&sample, "main", &corpus).unwrap();
        assert_eq!(cd.pmf.len(), cd.i_max + 1);
        assert_eq!(cd.pmf[0], 0.0);
        // Bitwise match when accumulated in the same order.
        let mut running = 0.0;
        for i in 1..=cd.i_max {
            running += cd.pmf[i];
            assert_eq!(cd.ccd[i], running, "ccd[{i}]");
        }
        assert!((cd.ccd[cd.i_max] - 1.0).abs() < 1e-9);
        assert!(cd.ccd.windows(2).all(|w| w[1] >= w[0] - 1e-15));
    }

    #[test]
    fn i_max_is_corpus_wide_not_per_cuisine() {
        let corpus = complexity_fixture(&[1, 2], 5);
        let sample = BalancedSample {
            n: 2,
            seed: 0,
            per_cuisine: [("main".to_string(), vec![0, 1])].into(),
            excluded: vec![],
        };
        let cd = complexity_distribution(&sample, "main", &corpus).unwrap();
        assert_eq!(cd.i_max, 5);
        assert_eq!(cd.pmf.len(), 6);
    }

    #[test]
    fn stochastic_dominance_orders_the_scores() {
        // "high" concentrates mass at larger counts than "low" does, so
        // its cumulative curve sits below and its score is larger.
        let low = complexity_fixture(&[1, 1, 2, 3], 6);
        let sample_low = BalancedSample {
            n: 4,
            seed: 0,
            per_cuisine: [("main".to_string(), vec![0, 1, 2, 3])].into(),
            excluded: vec![],
        };
        let cd_low = complexity_distribution(&sample_low, "main", &low).unwrap();

        let high = complexity_fixture(&[3, 4, 5, 6], 6);
        let cd_high = complexity_distribution(&sample_low, "main", &high).unwrap();

        for i in 1..=6 {
            assert!(cd_high.ccd[i] <= cd_low.ccd[i] + 1e-15);
        }
        assert!(complexity_score(&cd_high) > complexity_score(&cd_low));
    }
}
