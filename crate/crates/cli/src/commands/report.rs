//! `culina report`: every analysis in one directory, sharing a single
//! ingest and sample, with an artifact index.

use culina_core::classify::LabelKind;
use culina_core::signatures::tfidf;
use culina_core::similarity::SimilarityKind;
use culina_core::Result;
use serde_json::json;

use super::similarity::{ArtifactNames, SimilarityFlags, SimilaritySettings};
use super::{classify, draw_sample, health, ingest, ingest_corpus, load_tables, metrics, notable};
use crate::manifest::RunManifest;
use crate::settings::{CommonSettings, Resolver, TablePaths};

/// Flags the `report` subcommand takes. Model hyperparameters and
/// health selections come from the config file, like any other run.
#[derive(Debug, Clone, Default)]
pub struct ReportFlags {
    pub degree: Option<usize>,
    pub top: Option<usize>,
    pub top_k: Option<usize>,
    pub format: Option<String>,
    pub model: Option<String>,
    pub target: Option<String>,
    pub train_frac: Option<f64>,
}

pub fn run(
    common: &CommonSettings,
    table_paths: &TablePaths,
    flags: &ReportFlags,
    resolver: &mut Resolver,
) -> Result<()> {
    let degree = resolver.get("degree", flags.degree, 3)?;
    let top = resolver.get("top", flags.top, 10)?;
    let similarity_settings = super::similarity::resolve(
        resolver,
        &SimilarityFlags {
            kind: None,
            top_k: flags.top_k,
            format: flags.format.clone(),
            ridge: None,
            cap: None,
            out: None,
        },
    )?;
    // The report always renders both similarity kinds; the `kind`
    // setting does not apply to it.
    resolver.drop_from_echo("kind");
    let classify_settings = classify::resolve(
        resolver,
        &classify::ClassifyFlags {
            model: flags.model.clone(),
            target: flags.target.clone(),
            train_frac: flags.train_frac,
            ..classify::ClassifyFlags::default()
        },
        common.seed,
    )?;
    let health_settings = health::resolve(resolver, &health::HealthFlags::default())?;

    let mut manifest = RunManifest::create("report", &common.out_dir, resolver.echo().clone())?;
    if let Some(config) = &common.config_file {
        manifest.record_input("config", config)?;
    }

    let ing = ingest_corpus(common, &mut manifest)?;
    let tables = load_tables(table_paths, &mut manifest)?;
    let sample = draw_sample(common, &ing.corpus)?;

    ingest::emit(&ing, &mut manifest)?;
    metrics::emit_diversity(&sample, &ing.corpus, &tables, degree, &mut manifest)?;
    metrics::emit_complexity(&sample, &ing.corpus, &tables, &mut manifest)?;

    let table = tfidf(&sample, &ing.corpus)?;
    notable::emit(&table, None, top, &mut manifest)?;

    let ext = similarity_settings.format.extension();
    super::similarity::emit(
        &sample,
        &ing.corpus,
        &tables,
        &SimilaritySettings {
            kind: SimilarityKind::Ingredient,
            ..similarity_settings.clone()
        },
        common.threads,
        &ArtifactNames {
            graph: &format!("graph_ingredient.{ext}"),
            regions: Some("regions.csv"),
            summary: "similarity_ingredient_report.json",
        },
        &mut manifest,
    )?;
    super::similarity::emit(
        &sample,
        &ing.corpus,
        &tables,
        &SimilaritySettings {
            kind: SimilarityKind::Flavor,
            ..similarity_settings.clone()
        },
        common.threads,
        &ArtifactNames {
            graph: &format!("graph_flavor.{ext}"),
            regions: None,
            summary: "similarity_flavor_report.json",
        },
        &mut manifest,
    )?;

    // Region labels need the tables; they are already loaded here, so
    // hand them over for either target.
    let tables_ref = match classify_settings.target {
        LabelKind::Region => Some(&tables),
        LabelKind::Cuisine => None,
    };
    classify::emit(
        &ing.corpus,
        tables_ref,
        &classify_settings,
        common.min_recipes,
        common.seed,
        &mut manifest,
    )?;

    health::emit(&ing.corpus, &tables, &health_settings, &mut manifest)?;

    let artifacts = manifest.artifact_names();
    let index = json!({
        "artifacts": artifacts,
        "count": artifacts.len(),
    });
    let text = format!("{}\n", serde_json::to_string_pretty(&index).expect("plain json"));
    manifest.write_artifact("index.json", &text)?;
    manifest.write()?;
    Ok(())
}
