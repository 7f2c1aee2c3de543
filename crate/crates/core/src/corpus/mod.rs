//! Corpus ingestion: recipe records, JSONL parsing, normalization,
//! lexicon-driven standardization, and country/region tables.

pub mod country;
pub mod lexicon;
pub mod normalize;
pub mod standardize;

pub use country::{load_country_tables, CountryTables, HealthStats, Region};
pub use lexicon::{build_lexicon, IngredientLexicon, LexiconStats};
pub use normalize::Normalizer;
pub use standardize::{standardize, StandardizeReport};

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Flavor intensity scores, each in `[0, 1]`.
///
/// The canonical vector order is salty, sour, sweet, bitter, meaty
/// (savoriness), piquant (spiciness).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Flavors {
    pub salty: f64,
    pub sour: f64,
    pub sweet: f64,
    pub bitter: f64,
    pub meaty: f64,
    pub piquant: f64,
}

/// Number of flavor dimensions.
pub const FLAVOR_DIM: usize = 6;

impl Flavors {
    pub fn as_array(&self) -> [f64; FLAVOR_DIM] {
        [
            self.salty,
            self.sour,
            self.sweet,
            self.bitter,
            self.meaty,
            self.piquant,
        ]
    }
}

/// Per-serving nutrition facts; every field is optional and
/// non-negative when present.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Nutrition {
    pub calories: Option<f64>,
    pub protein: Option<f64>,
    pub fat: Option<f64>,
    pub saturated_fat: Option<f64>,
    pub sodium: Option<f64>,
    pub fiber: Option<f64>,
    pub sugar: Option<f64>,
    pub carbohydrate: Option<f64>,
}

impl Nutrition {
    fn fields(&self) -> [(&'static str, Option<f64>); 8] {
        [
            ("calories", self.calories),
            ("protein", self.protein),
            ("fat", self.fat),
            ("saturated_fat", self.saturated_fat),
            ("sodium", self.sodium),
            ("fiber", self.fiber),
            ("sugar", self.sugar),
            ("carbohydrate", self.carbohydrate),
        ]
    }

    fn is_empty(&self) -> bool {
        self.fields().iter().all(|(_, v)| v.is_none())
    }
}

/// One recipe record. `std_ingredients` is empty until
/// [`standardize`] has run.
#[derive(Debug, Clone, PartialEq)]
pub struct Recipe {
    pub id: String,
    pub cuisine: String,
    pub raw_ingredients: Vec<String>,
    pub std_ingredients: BTreeSet<String>,
    pub flavors: Option<Flavors>,
    pub rating: Option<f64>,
    pub nutrition: Option<Nutrition>,
}

/// A parsed (and possibly standardized) recipe collection.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RecipeCorpus {
    /// Recipes in input order.
    pub recipes: Vec<Recipe>,
    /// Cuisine name -> indices into `recipes`, names sorted.
    pub cuisines: BTreeMap<String, Vec<usize>>,
    /// Standardized ingredient id -> dense column index, ids sorted.
    /// Empty until standardization.
    pub ingredient_index: BTreeMap<String, usize>,
    /// Inverse of `ingredient_index`: column index -> ingredient id.
    pub ingredient_names: Vec<String>,
    /// Lexicon used to standardize (default-empty before that).
    pub lexicon: IngredientLexicon,
}

impl PartialEq for IngredientLexicon {
    fn eq(&self, other: &Self) -> bool {
        self.reference == other.reference
            && self.aliases == other.aliases
            && self.stats == other.stats
    }
}

impl RecipeCorpus {
    /// Build a corpus from ready-made recipes (used by tests and the
    /// synthetic generator); derives the cuisine map and, when the
    /// recipes carry standardized sets, the ingredient index.
    pub fn from_recipes(recipes: Vec<Recipe>, lexicon: IngredientLexicon) -> RecipeCorpus {
        let mut corpus = RecipeCorpus {
            recipes,
            lexicon,
            ..RecipeCorpus::default()
        };
        corpus.rebuild_cuisine_map();
        corpus.rebuild_ingredient_index();
        corpus
    }

    pub fn rebuild_cuisine_map(&mut self) {
        let mut map: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, r) in self.recipes.iter().enumerate() {
            map.entry(r.cuisine.clone()).or_default().push(i);
        }
        self.cuisines = map;
    }

    /// Rebuild the dense ingredient index over all ids appearing in
    /// `std_ingredients`, sorted lexicographically.
    pub fn rebuild_ingredient_index(&mut self) {
        let mut ids = BTreeSet::new();
        for r in &self.recipes {
            ids.extend(r.std_ingredients.iter().cloned());
        }
        self.ingredient_names = ids.into_iter().collect();
        self.ingredient_index = self
            .ingredient_names
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
    }

    /// Vocabulary size after standardization.
    pub fn vocab_size(&self) -> usize {
        self.ingredient_names.len()
    }

    /// Indices of the recipes belonging to `cuisine`.
    pub fn recipes_of(&self, cuisine: &str) -> &[usize] {
        self.cuisines.get(cuisine).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Canonical JSONL rendering of the standardized corpus, sorted by
    /// recipe id. Used for reports and byte-level determinism checks.
    pub fn to_standard_jsonl(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            id: &'a str,
            cuisine: &'a str,
            std_ingredients: Vec<&'a str>,
        }
        let mut order: Vec<&Recipe> = self.recipes.iter().collect();
        order.sort_by(|a, b| a.id.cmp(&b.id));
        let mut out = String::new();
        for r in order {
            let line = Line {
                id: &r.id,
                cuisine: &r.cuisine,
                std_ingredients: r.std_ingredients.iter().map(String::as_str).collect(),
            };
            out.push_str(&serde_json::to_string(&line).expect("serializable"));
            out.push('\n');
        }
        out
    }
}

/// Supported corpus file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    /// One JSON object per line.
    JsonLines,
}

/// One rejected input line and why it was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RejectedRecord {
    pub line: usize,
    pub reason: String,
}

/// Outcome counts from [`parse_corpus`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ParseReport {
    /// Number of records accepted.
    pub parsed: usize,
    /// Malformed or constraint-violating lines, in input order.
    pub rejected: Vec<RejectedRecord>,
}

#[derive(Deserialize)]
struct RawFlavors {
    salty: Option<f64>,
    sour: Option<f64>,
    sweet: Option<f64>,
    bitter: Option<f64>,
    meaty: Option<f64>,
    piquant: Option<f64>,
}

#[derive(Deserialize)]
struct RawRecord {
    id: String,
    cuisine: String,
    ingredients: Vec<String>,
    #[serde(default)]
    flavors: Option<RawFlavors>,
    #[serde(default)]
    rating: Option<f64>,
    #[serde(default)]
    nutrition: Option<Nutrition>,
}

/// Parse a recipe corpus from disk.
///
/// Blank lines are ignored. Malformed lines — invalid JSON, missing or
/// empty required fields, duplicate ids, out-of-range flavor, rating, or
/// nutrition values — are counted and reported, not fatal. An input that
/// yields zero valid records is an error.
pub fn parse_corpus(path: &Path, format: CorpusFormat) -> Result<(RecipeCorpus, ParseReport)> {
    let CorpusFormat::JsonLines = format;
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;

    let mut recipes = Vec::new();
    let mut seen_ids = BTreeSet::new();
    let mut report = ParseReport::default();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        match parse_record(line, &mut seen_ids) {
            Ok(recipe) => {
                recipes.push(recipe);
                report.parsed += 1;
            }
            Err(reason) => report.rejected.push(RejectedRecord {
                line: line_no,
                reason,
            }),
        }
    }

    if recipes.is_empty() {
        return Err(Error::ZeroValidRecords {
            path: path.to_path_buf(),
        });
    }

    let corpus = RecipeCorpus::from_recipes(recipes, IngredientLexicon::default());
    Ok((corpus, report))
}

fn parse_record(line: &str, seen_ids: &mut BTreeSet<String>) -> std::result::Result<Recipe, String> {
    let raw: RawRecord =
        serde_json::from_str(line).map_err(|e| format!("invalid JSON: {e}"))?;
    if raw.id.trim().is_empty() {
        return Err("empty id".into());
    }
    if raw.cuisine.trim().is_empty() {
        return Err("empty cuisine".into());
    }
    if raw.ingredients.is_empty() {
        return Err("no ingredients".into());
    }
    if !seen_ids.insert(raw.id.clone()) {
        return Err(format!("duplicate id {:?}", raw.id));
    }

    let flavors = match raw.flavors {
        None => None,
        Some(f) => validate_flavors(f)?,
    };

    if let Some(r) = raw.rating {
        if !(1.0..=5.0).contains(&r) {
            return Err(format!("rating out of [1,5]: {r}"));
        }
    }

    let nutrition = match raw.nutrition {
        None => None,
        Some(n) => {
            for (name, value) in n.fields() {
                if let Some(v) = value {
                    if !v.is_finite() || v < 0.0 {
                        return Err(format!("nutrition {name} must be non-negative, got {v}"));
                    }
                }
            }
            if n.is_empty() {
                None
            } else {
                Some(n)
            }
        }
    };

    Ok(Recipe {
        id: raw.id,
        cuisine: raw.cuisine,
        raw_ingredients: raw.ingredients,
        std_ingredients: BTreeSet::new(),
        flavors,
        rating: raw.rating,
        nutrition,
    })
}

/// A flavor object with all six scores present and in range becomes a
/// vector; a partial object is treated as missing; any out-of-range
/// score rejects the record.
fn validate_flavors(f: RawFlavors) -> std::result::Result<Option<Flavors>, String> {
    let entries = [
        ("salty", f.salty),
        ("sour", f.sour),
        ("sweet", f.sweet),
        ("bitter", f.bitter),
        ("meaty", f.meaty),
        ("piquant", f.piquant),
    ];
    for (name, value) in entries {
        if let Some(v) = value {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("flavor {name} out of [0,1]: {v}"));
            }
        }
    }
    match (f.salty, f.sour, f.sweet, f.bitter, f.meaty, f.piquant) {
        (Some(salty), Some(sour), Some(sweet), Some(bitter), Some(meaty), Some(piquant)) => {
            Ok(Some(Flavors {
                salty,
                sour,
                sweet,
                bitter,
                meaty,
                piquant,
            }))
        }
        _ => Ok(None),
    }
}
