//! One module per subcommand plus the pipeline steps they share.
//!
//! Each `run` resolves its settings (flag > config file > default),
//! creates the run manifest, records every input it reads, writes its
//! artifacts through the manifest, and finally writes `manifest.json`.
//! `report` reuses the same emit functions so bundled artifacts are
//! byte-identical to what the individual subcommands produce.

pub mod classify;
pub mod health;
pub mod ingest;
pub mod metrics;
pub mod notable;
pub mod report;
pub mod similarity;

use std::collections::BTreeSet;

use culina_core::classify::LabelKind;
use culina_core::corpus::country::{load_country_tables, CountryTables};
use culina_core::corpus::lexicon::build_lexicon;
use culina_core::corpus::normalize::Normalizer;
use culina_core::corpus::standardize::{standardize, StandardizeReport};
use culina_core::corpus::{parse_corpus, CorpusFormat, ParseReport, RecipeCorpus};
use culina_core::health::{MeasureKind, MissingRatingPolicy, NutrientKind};
use culina_core::metrics::{sample_balanced, BalancedSample};
use culina_core::similarity::graph::GraphFormat;
use culina_core::similarity::SimilarityKind;
use culina_core::{Error, Result};

use crate::manifest::RunManifest;
use crate::settings::{CommonSettings, TablePaths};

/// A parsed and standardized corpus with its quality reports.
pub struct Ingested {
    pub corpus: RecipeCorpus,
    pub parse: ParseReport,
    pub standardize: StandardizeReport,
}

/// Runs the shared front of every pipeline: lexicon, parse,
/// standardize. Records the files it reads as manifest inputs.
pub fn ingest_corpus(common: &CommonSettings, manifest: &mut RunManifest) -> Result<Ingested> {
    manifest.record_input("corpus", &common.corpus)?;
    manifest.record_input("reference", &common.reference)?;
    manifest.record_input("aliases", &common.aliases)?;
    let normalizer = match &common.units {
        Some(path) => {
            manifest.record_input("units", path)?;
            Normalizer::with_units_file(path)?
        }
        None => Normalizer::default(),
    };
    let lexicon = build_lexicon(&common.reference, &common.aliases, normalizer)?;
    let (corpus, parse) = parse_corpus(&common.corpus, CorpusFormat::JsonLines)?;
    let (corpus, standardize) = standardize(corpus, lexicon, common.min_mapped)?;
    Ok(Ingested {
        corpus,
        parse,
        standardize,
    })
}

/// Loads the three country tables, recording them as inputs.
pub fn load_tables(paths: &TablePaths, manifest: &mut RunManifest) -> Result<CountryTables> {
    manifest.record_input("cuisine_country", &paths.cuisine_country)?;
    manifest.record_input("country_region", &paths.country_region)?;
    manifest.record_input("country_health", &paths.country_health)?;
    load_country_tables(
        &paths.cuisine_country,
        &paths.country_region,
        &paths.country_health,
    )
}

/// Draws the balanced per-cuisine sample all metric commands share.
pub fn draw_sample(common: &CommonSettings, corpus: &RecipeCorpus) -> Result<BalancedSample> {
    let sample = sample_balanced(corpus, common.sample_size, common.seed)?;
    if sample.per_cuisine.is_empty() {
        return Err(Error::Data(format!(
            "no cuisine has at least {} recipes to sample; largest has {}",
            common.sample_size,
            corpus.cuisines.values().map(Vec::len).max().unwrap_or(0)
        )));
    }
    if !sample.excluded.is_empty() {
        warn(&format!(
            "sample excludes cuisine(s) with fewer than {} recipes: {}",
            common.sample_size,
            sample.excluded.join(", ")
        ));
    }
    Ok(sample)
}

/// Emits a single-line machine-parsable warning on stderr.
pub fn warn(message: &str) {
    eprintln!("{}", serde_json::json!({ "warning": message }));
}

// ---------------------------------------------------------------------------
// Enum-like setting parsers shared by flags and config-file values.
// ---------------------------------------------------------------------------

/// Which classifier to train.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Svm,
    Mlp,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Svm => "svm",
            ModelKind::Mlp => "mlp",
        }
    }
}

pub fn parse_kind(s: &str) -> Result<SimilarityKind> {
    match s.trim().to_lowercase().as_str() {
        "ingredient" => Ok(SimilarityKind::Ingredient),
        "flavor" => Ok(SimilarityKind::Flavor),
        other => Err(Error::InvalidArg(format!(
            "unknown similarity kind {other:?} (expected ingredient or flavor)"
        ))),
    }
}

pub fn parse_format(s: &str) -> Result<GraphFormat> {
    match s.trim().to_lowercase().as_str() {
        "dot" => Ok(GraphFormat::Dot),
        "graphml" => Ok(GraphFormat::GraphMl),
        "json" => Ok(GraphFormat::Json),
        other => Err(Error::InvalidArg(format!(
            "unknown graph format {other:?} (expected dot, graphml, or json)"
        ))),
    }
}

pub fn parse_model(s: &str) -> Result<ModelKind> {
    match s.trim().to_lowercase().as_str() {
        "svm" => Ok(ModelKind::Svm),
        "mlp" => Ok(ModelKind::Mlp),
        other => Err(Error::InvalidArg(format!(
            "unknown model {other:?} (expected svm or mlp)"
        ))),
    }
}

pub fn parse_target(s: &str) -> Result<LabelKind> {
    match s.trim().to_lowercase().as_str() {
        "cuisine" => Ok(LabelKind::Cuisine),
        "region" => Ok(LabelKind::Region),
        other => Err(Error::InvalidArg(format!(
            "unknown classification target {other:?} (expected cuisine or region)"
        ))),
    }
}

pub fn parse_policy(s: &str) -> Result<MissingRatingPolicy> {
    match s.trim().to_lowercase().as_str() {
        "corpus-mean" | "corpus_mean" => Ok(MissingRatingPolicy::CorpusMean),
        "unit" => Ok(MissingRatingPolicy::Unit),
        other => Err(Error::InvalidArg(format!(
            "unknown rating policy {other:?} (expected corpus-mean or unit)"
        ))),
    }
}

/// Parses a comma list of health measures into canonical order.
pub fn parse_measures(s: &str) -> Result<Vec<MeasureKind>> {
    let mut selected = BTreeSet::new();
    for item in s.split(',') {
        let kind: MeasureKind = item.parse()?;
        selected.insert(kind.name());
    }
    Ok(MeasureKind::ALL
        .into_iter()
        .filter(|k| selected.contains(k.name()))
        .collect())
}

/// Parses a comma list of nutrients into canonical order.
pub fn parse_nutrients(s: &str) -> Result<Vec<NutrientKind>> {
    let mut selected = BTreeSet::new();
    for item in s.split(',') {
        let kind: NutrientKind = item.parse()?;
        selected.insert(kind.name());
    }
    Ok(NutrientKind::ALL
        .into_iter()
        .filter(|k| selected.contains(k.name()))
        .collect())
}

/// Parses a comma list of positive layer widths.
pub fn parse_hidden(s: &str) -> Result<Vec<usize>> {
    let mut widths = Vec::new();
    for item in s.split(',') {
        let width: usize = item
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArg(format!("bad hidden layer width {item:?}")))?;
        if width == 0 {
            return Err(Error::InvalidArg("hidden layer widths must be positive".into()));
        }
        widths.push(width);
    }
    Ok(widths)
}
