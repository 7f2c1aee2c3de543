//! Deterministic synthetic-corpus generator.
//!
//! Produces a recipe corpus plus the matching lexicon and country tables
//! so the whole pipeline can run end to end without external data. The
//! output is a pure function of [`SynthConfig`]: one ChaCha stream,
//! derived from the seed with the label `"synth"`, drives every draw in
//! a fixed order, so equal configs yield byte-identical files.
//!
//! The world is planted with enough structure for the analyses to find:
//! each region has its own flavor base and nutrition profile, each
//! cuisine perturbs them slightly and owns two signature ingredients,
//! and country obesity tracks the sugar level of the cuisines cooked
//! there. Raw ingredient strings go through quantity/unit templates that
//! the normalizer plus alias table must undo.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{Flavors, Region, FLAVOR_DIM};
use crate::error::{Error, Result};
use crate::seed;

/// Knobs for [`generate`]. Defaults give a corpus big enough to
/// exercise every analysis while staying quick to regenerate.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    /// Number of cuisines (each gets `recipes_per_cuisine` recipes).
    pub cuisines: usize,
    /// Recipes generated per cuisine.
    pub recipes_per_cuisine: usize,
    /// Base seed for the generator stream.
    pub seed: u64,
    /// Probability that a recipe carries no flavor vector.
    pub flavor_missing_rate: f64,
    /// Probability that a recipe carries no rating.
    pub rating_missing_rate: f64,
    /// Probability that a recipe gains one unmappable raw string.
    pub unmappable_rate: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            cuisines: 82,
            recipes_per_cuisine: 122,
            seed: 0,
            flavor_missing_rate: 0.10,
            rating_missing_rate: 0.15,
            unmappable_rate: 0.05,
        }
    }
}

/// The six generated files, as in-memory strings. File layout and
/// persistence are the caller's concern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthOutput {
    /// Recipe corpus, one JSON object per line.
    pub corpus_jsonl: String,
    /// Reference ingredient ids, one per line.
    pub reference: String,
    /// Alias TSV (`surface form<TAB>reference id`).
    pub aliases: String,
    /// `cuisine,country` CSV.
    pub cuisine_country_csv: String,
    /// `country,region` CSV.
    pub country_region_csv: String,
    /// `country,obesity_pct,diabetes_pct,health_expenditure_pct_gdp,net_migration` CSV.
    pub country_health_csv: String,
}

const SYLLABLES: [&str; 24] = [
    "ba", "be", "bi", "bo", "bu", "da", "de", "di", "do", "du", "ka", "ke", "ki", "ko", "ku",
    "la", "le", "li", "lo", "lu", "ma", "me", "mi", "mo",
];

const SUFFIXES: [&str; 10] = [
    "root", "leaf", "oil", "berry", "seed", "paste", "flour", "spice", "bean", "pepper",
];

const STAPLES: usize = 24;
const REGIONALS_PER_REGION: usize = 8;
const SIGNATURES_PER_CUISINE: usize = 2;
/// Probability that a recipe borrows one regional from the next region.
const NEIGHBOR_BLEED: f64 = 0.12;
/// Probability that a recipe carries no nutrition block.
const NUTRITION_MISSING: f64 = 0.05;

// Name-index namespaces. All bases stay below 24^2 = 576, so every name
// is exactly two syllables and distinct indices give distinct strings.
const STAPLE_BASE: usize = 100;
const REGIONAL_BASE: usize = 200;
const SIGNATURE_BASE: usize = 300;
/// Mystery names land in the three-syllable zone (>= 576).
const MYSTERY_BASE: usize = 700;
const MYSTERY_POOL: usize = 50;
/// Country names also use the three-syllable zone, after the mysteries.
const COUNTRY_BASE: usize = 800;

/// Spell `n` in little-endian base-24 syllables, at least two digits.
/// Fixed-width syllables make the encoding prefix-free, so distinct
/// indices always produce distinct names.
fn spelled(mut n: usize) -> String {
    let mut out = String::new();
    for _ in 0..2 {
        out.push_str(SYLLABLES[n % 24]);
        n /= 24;
    }
    while n > 0 {
        out.push_str(SYLLABLES[n % 24]);
        n /= 24;
    }
    out
}

fn country_name(j: usize) -> String {
    let base = spelled(COUNTRY_BASE + j);
    let mut chars = base.chars();
    let head = chars.next().expect("non-empty name").to_uppercase();
    let tail: String = chars.collect();
    let suffix = ["ia", "land", "stan", ""][j % 4];
    format!("{head}{tail}{suffix}")
}

fn ingredient_name(index: usize, suffix: usize) -> String {
    format!("{} {}", spelled(index), SUFFIXES[suffix % SUFFIXES.len()])
}

/// Wrap an ingredient in one of the raw-string templates the
/// normalizer and alias table are expected to undo.
fn raw_of(template: usize, ingredient: &str) -> String {
    match template {
        0 => format!("2 cups {ingredient}"),
        1 => format!("100 g {ingredient}"),
        2 => format!("Fresh {ingredient}"),
        3 => format!("{ingredient}, chopped"),
        4 => format!("1 can {ingredient} (drained)"),
        5 => format!("organic {ingredient}"),
        _ => ingredient.to_string(),
    }
}
const TEMPLATE_COUNT: usize = 7;

fn mystery_raw(rng: &mut ChaCha8Rng) -> String {
    let pick = rng.random_range(0..MYSTERY_POOL);
    format!("mystery {} blend", spelled(MYSTERY_BASE + pick))
}

fn round_to(v: f64, dp: i32) -> f64 {
    let scale = 10f64.powi(dp);
    (v * scale).round() / scale
}

struct RegionProfile {
    calories: f64,
    protein: f64,
    fat: f64,
    sat_frac: f64,
    sodium: f64,
    fiber: f64,
    sugar: f64,
    carbohydrate: f64,
}

struct CuisineSpec {
    name: String,
    country: usize,
    flavor_offset: [f64; FLAVOR_DIM],
    sugar_offset: f64,
    calorie_offset: f64,
}

struct CountrySpec {
    name: String,
    region: usize,
}

#[derive(Serialize)]
struct NutritionOut {
    calories: f64,
    protein: f64,
    fat: f64,
    saturated_fat: f64,
    sodium: f64,
    fiber: f64,
    sugar: f64,
    carbohydrate: f64,
}

#[derive(Serialize)]
struct LineOut<'a> {
    id: String,
    cuisine: &'a str,
    ingredients: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    flavors: Option<Flavors>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rating: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nutrition: Option<NutritionOut>,
}

fn validate(config: &SynthConfig) -> Result<()> {
    if config.cuisines == 0 {
        return Err(Error::InvalidArg("cuisines must be at least 1".into()));
    }
    if config.recipes_per_cuisine == 0 {
        return Err(Error::InvalidArg(
            "recipes_per_cuisine must be at least 1".into(),
        ));
    }
    for (name, rate) in [
        ("flavor_missing_rate", config.flavor_missing_rate),
        ("rating_missing_rate", config.rating_missing_rate),
        ("unmappable_rate", config.unmappable_rate),
    ] {
        if !(0.0..1.0).contains(&rate) {
            return Err(Error::InvalidArg(format!(
                "{name} must lie in [0,1), got {rate}"
            )));
        }
    }
    Ok(())
}

/// Generate the full fixture set for `config`.
pub fn generate(config: &SynthConfig) -> Result<SynthOutput> {
    validate(config)?;
    let mut rng = seed::rng(config.seed, "synth");
    let n_regions = Region::ALL.len();

    // Region flavor bases: comfortably inside [0,1] so cuisine offsets
    // and recipe noise rarely clip.
    let mut region_flavor: Vec<[f64; FLAVOR_DIM]> = Vec::with_capacity(n_regions);
    for _ in 0..n_regions {
        let mut base = [0.0; FLAVOR_DIM];
        for slot in base.iter_mut() {
            *slot = rng.random_range(0.2..0.8);
        }
        region_flavor.push(base);
    }

    let mut region_profile: Vec<RegionProfile> = Vec::with_capacity(n_regions);
    for _ in 0..n_regions {
        region_profile.push(RegionProfile {
            calories: rng.random_range(140.0..380.0),
            protein: rng.random_range(6.0..28.0),
            fat: rng.random_range(6.0..26.0),
            sat_frac: rng.random_range(0.25..0.55),
            sodium: rng.random_range(80.0..700.0),
            fiber: rng.random_range(1.0..8.0),
            sugar: rng.random_range(4.0..28.0),
            carbohydrate: rng.random_range(20.0..70.0),
        });
    }

    // Cuisines and countries. Mostly one country per cuisine; every
    // seventh slot shares the previous cuisine's country so some
    // countries host two cuisines.
    let mut cuisines: Vec<CuisineSpec> = Vec::with_capacity(config.cuisines);
    let mut countries: Vec<CountrySpec> = Vec::new();
    for i in 0..config.cuisines {
        let country = if i % 7 == 3 && i > 0 {
            cuisines[i - 1].country
        } else {
            countries.push(CountrySpec {
                name: country_name(countries.len()),
                region: countries.len() % n_regions,
            });
            countries.len() - 1
        };
        let mut flavor_offset = [0.0; FLAVOR_DIM];
        for slot in flavor_offset.iter_mut() {
            *slot = rng.random_range(-0.08..0.08);
        }
        cuisines.push(CuisineSpec {
            name: spelled(i),
            country,
            flavor_offset,
            sugar_offset: rng.random_range(-3.0..3.0),
            calorie_offset: rng.random_range(-30.0..30.0),
        });
    }

    // Vocabulary: shared staples, per-region regionals, and two
    // signature ingredients owned by each cuisine.
    let staples: Vec<String> = (0..STAPLES)
        .map(|k| ingredient_name(STAPLE_BASE + k, k))
        .collect();
    let regionals: Vec<Vec<String>> = (0..n_regions)
        .map(|r| {
            (0..REGIONALS_PER_REGION)
                .map(|k| ingredient_name(REGIONAL_BASE + r * REGIONALS_PER_REGION + k, r * 3 + k))
                .collect()
        })
        .collect();
    let signatures: Vec<Vec<String>> = (0..config.cuisines)
        .map(|i| {
            (0..SIGNATURES_PER_CUISINE)
                .map(|k| ingredient_name(SIGNATURE_BASE + i * SIGNATURES_PER_CUISINE + k, i + k))
                .collect()
        })
        .collect();

    let mut reference_ids: Vec<&String> = staples
        .iter()
        .chain(regionals.iter().flatten())
        .chain(signatures.iter().flatten())
        .collect();
    reference_ids.sort_unstable();

    let mut reference = String::new();
    let mut aliases = String::new();
    for id in &reference_ids {
        reference.push_str(id);
        reference.push('\n');
        aliases.push_str(&format!("fresh {id}\t{id}\n"));
        aliases.push_str(&format!("{id} chopped\t{id}\n"));
        aliases.push_str(&format!("organic {id}\t{id}\n"));
    }

    // Recipes.
    let mut corpus_jsonl = String::new();
    for (i, spec) in cuisines.iter().enumerate() {
        let region = countries[spec.country].region;
        let base = &region_flavor[region];
        let profile = &region_profile[region];
        for k in 0..config.recipes_per_cuisine {
            let mut raws: Vec<String> = Vec::new();
            if i % 10 == 0 && k == 0 {
                // One deliberately unresolvable recipe in every tenth
                // cuisine; standardization is expected to drop it.
                for _ in 0..3 {
                    raws.push(mystery_raw(&mut rng));
                }
            } else {
                let n_staple = rng.random_range(2..=4usize);
                let mut staple_idx = sample(&mut rng, STAPLES, n_staple).into_vec();
                staple_idx.sort_unstable();
                let n_reg = rng.random_range(1..=4usize);
                let mut reg_idx = sample(&mut rng, REGIONALS_PER_REGION, n_reg).into_vec();
                reg_idx.sort_unstable();

                let mut picks: Vec<&str> = Vec::new();
                picks.extend(staple_idx.iter().map(|&s| staples[s].as_str()));
                picks.extend(reg_idx.iter().map(|&r| regionals[region][r].as_str()));
                if rng.random::<f64>() < NEIGHBOR_BLEED {
                    let neighbor = (region + 1) % n_regions;
                    let pick = rng.random_range(0..REGIONALS_PER_REGION);
                    picks.push(regionals[neighbor][pick].as_str());
                }
                match rng.random_range(0..=2usize) {
                    0 => {}
                    1 => {
                        let which = rng.random_range(0..SIGNATURES_PER_CUISINE);
                        picks.push(signatures[i][which].as_str());
                    }
                    _ => picks.extend(signatures[i].iter().map(String::as_str)),
                }

                for ingredient in picks {
                    let template = rng.random_range(0..TEMPLATE_COUNT);
                    raws.push(raw_of(template, ingredient));
                }
                if rng.random::<f64>() < config.unmappable_rate {
                    raws.push(mystery_raw(&mut rng));
                }
                raws.shuffle(&mut rng);
            }

            let flavors = if rng.random::<f64>() < config.flavor_missing_rate {
                None
            } else {
                let mut v = [0.0; FLAVOR_DIM];
                for (d, slot) in v.iter_mut().enumerate() {
                    let noise = rng.random_range(-0.1..0.1);
                    *slot = round_to((base[d] + spec.flavor_offset[d] + noise).clamp(0.0, 1.0), 4);
                }
                Some(Flavors {
                    salty: v[0],
                    sour: v[1],
                    sweet: v[2],
                    bitter: v[3],
                    meaty: v[4],
                    piquant: v[5],
                })
            };

            let rating = if rng.random::<f64>() < config.rating_missing_rate {
                None
            } else {
                // Skewed toward the top of the scale, like aggregator data.
                let u: f64 = rng.random();
                Some(round_to(1.0 + 4.0 * u.powf(0.6), 2))
            };

            let nutrition = if rng.random::<f64>() < NUTRITION_MISSING {
                None
            } else {
                let calories = (profile.calories
                    + spec.calorie_offset
                    + rng.random_range(-40.0..40.0))
                .max(0.0);
                let protein = (profile.protein + rng.random_range(-3.0..3.0)).max(0.0);
                let fat = (profile.fat + rng.random_range(-3.0..3.0)).max(0.0);
                let sodium = (profile.sodium + rng.random_range(-60.0..60.0)).max(0.0);
                let fiber = (profile.fiber + rng.random_range(-1.0..1.0)).max(0.0);
                let sugar = (profile.sugar + spec.sugar_offset + rng.random_range(-2.0..2.0))
                    .max(0.0);
                let carbohydrate =
                    (profile.carbohydrate + rng.random_range(-8.0..8.0)).max(0.0);
                Some(NutritionOut {
                    calories: round_to(calories, 1),
                    protein: round_to(protein, 1),
                    fat: round_to(fat, 1),
                    saturated_fat: round_to(fat * profile.sat_frac, 1),
                    sodium: round_to(sodium, 1),
                    fiber: round_to(fiber, 1),
                    sugar: round_to(sugar, 2),
                    carbohydrate: round_to(carbohydrate, 1),
                })
            };

            let line = LineOut {
                id: format!("{}-{:04}", spec.name, k),
                cuisine: &spec.name,
                ingredients: &raws,
                flavors,
                rating,
                nutrition,
            };
            corpus_jsonl.push_str(&serde_json::to_string(&line).expect("serializable"));
            corpus_jsonl.push('\n');
        }
    }

    // Cuisine -> country mapping; a handful of cuisines span a second
    // country to exercise the many-to-many path.
    let mut mappings: Vec<(usize, usize)> = Vec::new();
    for (i, spec) in cuisines.iter().enumerate() {
        mappings.push((i, spec.country));
        if i % 13 == 5 && i + 1 < cuisines.len() && cuisines[i + 1].country != spec.country {
            mappings.push((i, cuisines[i + 1].country));
        }
    }

    let mut cuisine_country_csv = String::from("cuisine,country\n");
    for &(i, c) in &mappings {
        cuisine_country_csv.push_str(&format!("{},{}\n", cuisines[i].name, countries[c].name));
    }

    let mut country_region_csv = String::from("country,region\n");
    for country in &countries {
        country_region_csv.push_str(&format!(
            "{},{}\n",
            country.name,
            Region::ALL[country.region].name()
        ));
    }

    // Health stats: obesity tracks the expected sugar level of the
    // cuisines cooked in the country, diabetes tracks obesity.
    let expected_sugar: Vec<f64> = (0..countries.len())
        .map(|c| {
            let mut total = 0.0;
            let mut n = 0usize;
            for &(i, mc) in &mappings {
                if mc == c {
                    let region = countries[cuisines[i].country].region;
                    total += region_profile[region].sugar + cuisines[i].sugar_offset;
                    n += 1;
                }
            }
            total / n as f64
        })
        .collect();

    let mut country_health_csv = String::from(
        "country,obesity_pct,diabetes_pct,health_expenditure_pct_gdp,net_migration\n",
    );
    for (c, country) in countries.iter().enumerate() {
        let obesity = (5.0 + 0.7 * expected_sugar[c] + rng.random_range(-1.5..1.5))
            .clamp(5.0, 45.0);
        let diabetes = (2.0 + 0.25 * obesity + rng.random_range(-0.4..0.4)).clamp(0.0, 100.0);
        let expenditure = rng.random_range(2.0..18.0);
        let migration = rng.random_range(-500_000.0f64..500_000.0).round();
        country_health_csv.push_str(&format!(
            "{},{:.2},{:.2},{:.2},{}\n",
            country.name,
            round_to(obesity, 2),
            round_to(diabetes, 2),
            round_to(expenditure, 2),
            migration
        ));
    }

    Ok(SynthOutput {
        corpus_jsonl,
        reference,
        aliases,
        cuisine_country_csv,
        country_region_csv,
        country_health_csv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{
        build_lexicon, load_country_tables, parse_corpus, standardize, CorpusFormat, Normalizer,
    };
    use crate::health::pearson;
    use std::path::{Path, PathBuf};

    fn small() -> SynthConfig {
        SynthConfig {
            cuisines: 12,
            recipes_per_cuisine: 20,
            seed: 7,
            ..SynthConfig::default()
        }
    }

    struct Files {
        corpus: PathBuf,
        reference: PathBuf,
        aliases: PathBuf,
        cuisine_country: PathBuf,
        country_region: PathBuf,
        country_health: PathBuf,
    }

    fn write_out(dir: &Path, out: &SynthOutput) -> Files {
        let write = |name: &str, text: &str| {
            let path = dir.join(name);
            std::fs::write(&path, text).unwrap();
            path
        };
        Files {
            corpus: write("corpus.jsonl", &out.corpus_jsonl),
            reference: write("reference.txt", &out.reference),
            aliases: write("aliases.tsv", &out.aliases),
            cuisine_country: write("cuisine_country.csv", &out.cuisine_country_csv),
            country_region: write("country_region.csv", &out.country_region_csv),
            country_health: write("country_health.csv", &out.country_health_csv),
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let config = small();
        assert_eq!(generate(&config).unwrap(), generate(&config).unwrap());
    }

    #[test]
    fn different_seeds_give_different_corpora() {
        let a = generate(&small()).unwrap();
        let b = generate(&SynthConfig {
            seed: 8,
            ..small()
        })
        .unwrap();
        assert_ne!(a.corpus_jsonl, b.corpus_jsonl);
    }

    #[test]
    fn output_feeds_the_full_ingestion_pipeline() {
        let config = small();
        let out = generate(&config).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files = write_out(dir.path(), &out);

        let (corpus, report) = parse_corpus(&files.corpus, CorpusFormat::JsonLines).unwrap();
        assert_eq!(report.parsed, config.cuisines * config.recipes_per_cuisine);
        assert!(report.rejected.is_empty(), "{:?}", report.rejected);

        let lexicon =
            build_lexicon(&files.reference, &files.aliases, Normalizer::default()).unwrap();
        let (std_corpus, std_report) = standardize(corpus, lexicon, 0.5).unwrap();
        // Only the planted unresolvable recipes (one per tenth cuisine)
        // may drop.
        let planted = config.cuisines.div_ceil(10);
        assert_eq!(
            std_report.retained,
            config.cuisines * config.recipes_per_cuisine - planted
        );
        assert!(std_report.vocabulary > 50);
        assert!(std_report.vocabulary <= out.reference.lines().count());

        let tables = load_country_tables(
            &files.cuisine_country,
            &files.country_region,
            &files.country_health,
        )
        .unwrap();
        for cuisine in std_corpus.cuisines.keys() {
            assert!(
                tables.region_of_cuisine(cuisine).is_some(),
                "{cuisine} has no region"
            );
            assert!(!tables.countries_of(cuisine).is_empty());
        }
        // Shared-country plan: cuisine 3 lives in cuisine 2's country.
        assert_eq!(
            tables.countries_of(&spelled(3)),
            tables.countries_of(&spelled(2))
        );
    }

    #[test]
    fn planted_unresolvable_recipe_drops_only_from_tenth_cuisines() {
        let config = small();
        let out = generate(&config).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files = write_out(dir.path(), &out);
        let (corpus, _) = parse_corpus(&files.corpus, CorpusFormat::JsonLines).unwrap();
        let lexicon =
            build_lexicon(&files.reference, &files.aliases, Normalizer::default()).unwrap();
        let (std_corpus, _) = standardize(corpus, lexicon, 0.5).unwrap();

        // Cuisines 0 and 10 each lose exactly their first recipe.
        for dropped in [0usize, 10] {
            let name = spelled(dropped);
            assert_eq!(
                std_corpus.recipes_of(&name).len(),
                config.recipes_per_cuisine - 1
            );
            let gone = format!("{name}-0000");
            assert!(std_corpus
                .recipes
                .iter()
                .all(|r| r.id != gone));
        }
        assert_eq!(
            std_corpus.recipes_of(&spelled(1)).len(),
            config.recipes_per_cuisine
        );
    }

    #[test]
    fn optional_fields_are_sometimes_missing_and_always_in_range() {
        let out = generate(&small()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files = write_out(dir.path(), &out);
        let (corpus, report) = parse_corpus(&files.corpus, CorpusFormat::JsonLines).unwrap();
        // The parser rejects out-of-range values, so zero rejects means
        // every emitted value respected the bounds.
        assert!(report.rejected.is_empty());

        let total = corpus.recipes.len();
        let no_flavor = corpus.recipes.iter().filter(|r| r.flavors.is_none()).count();
        let no_rating = corpus.recipes.iter().filter(|r| r.rating.is_none()).count();
        let no_nutrition = corpus
            .recipes
            .iter()
            .filter(|r| r.nutrition.is_none())
            .count();
        assert!(no_flavor > 0 && no_flavor < total / 2);
        assert!(no_rating > 0 && no_rating < total / 2);
        assert!(no_nutrition > 0 && no_nutrition < total / 2);
        for recipe in &corpus.recipes {
            if let Some(n) = recipe.nutrition {
                assert!(n.sugar.unwrap() >= 0.0);
                assert!(n.calories.unwrap() >= 0.0);
            }
        }
    }

    #[test]
    fn health_table_is_loadable_with_planted_structure() {
        // More cuisines -> more countries, so the sample correlation is
        // a stable estimate of the planted one.
        let out = generate(&SynthConfig {
            cuisines: 40,
            recipes_per_cuisine: 4,
            ..small()
        })
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files = write_out(dir.path(), &out);
        let tables = load_country_tables(
            &files.cuisine_country,
            &files.country_region,
            &files.country_health,
        )
        .unwrap();
        assert!(!tables.health.is_empty());
        let mut obesity = Vec::new();
        let mut diabetes = Vec::new();
        for stats in tables.health.values() {
            assert!((5.0..=45.0).contains(&stats.obesity_pct));
            assert!(stats.diabetes_pct > 0.0);
            assert!((2.0..=18.0).contains(&stats.health_expenditure_pct_gdp));
            obesity.push(stats.obesity_pct);
            diabetes.push(stats.diabetes_pct);
        }
        // Diabetes is planted as an affine function of obesity plus
        // small noise, so the correlation should be strong.
        assert!(pearson(&obesity, &diabetes).unwrap() > 0.9);
    }

    #[test]
    fn reference_and_alias_sizes_match_the_vocabulary_plan() {
        let config = small();
        let out = generate(&config).unwrap();
        let expected =
            STAPLES + Region::ALL.len() * REGIONALS_PER_REGION
                + SIGNATURES_PER_CUISINE * config.cuisines;
        assert_eq!(out.reference.lines().count(), expected);
        assert_eq!(out.aliases.lines().count(), 3 * expected);
    }

    #[test]
    fn name_spelling_is_injective_across_namespaces() {
        let mut seen = std::collections::BTreeSet::new();
        for n in 0..1000 {
            assert!(seen.insert(spelled(n)), "collision at {n}");
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad = [
            SynthConfig {
                cuisines: 0,
                ..small()
            },
            SynthConfig {
                recipes_per_cuisine: 0,
                ..small()
            },
            SynthConfig {
                flavor_missing_rate: 1.0,
                ..small()
            },
            SynthConfig {
                unmappable_rate: -0.1,
                ..small()
            },
        ];
        for config in bad {
            assert!(matches!(
                generate(&config),
                Err(Error::InvalidArg(_))
            ));
        }
    }
}
