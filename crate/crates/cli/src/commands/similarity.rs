//! `culina similarity`: k-nearest-neighbor cuisine graphs from
//! ingredient-distribution or flavor-Gaussian similarity.

use culina_core::corpus::country::CountryTables;
use culina_core::corpus::RecipeCorpus;
use culina_core::metrics::BalancedSample;
use culina_core::similarity::graph::{build_similarity_graph, export_graph, GraphFormat};
use culina_core::similarity::{
    flavor_similarity_matrix, ingredient_similarity_matrix, ExcludedCuisine, SimilarityKind,
};
use culina_core::Result;
use serde_json::json;

use super::{draw_sample, ingest_corpus, load_tables, parse_format, parse_kind};
use crate::manifest::RunManifest;
use crate::outputs::Csv;
use crate::settings::{CommonSettings, Resolver, TablePaths};

/// Resolved similarity settings.
#[derive(Debug, Clone)]
pub struct SimilaritySettings {
    pub kind: SimilarityKind,
    pub top_k: usize,
    pub format: GraphFormat,
    pub ridge: f64,
    pub cap: f64,
}

/// Flags the `similarity` subcommand takes.
#[derive(Debug, Clone, Default)]
pub struct SimilarityFlags {
    pub kind: Option<String>,
    pub top_k: Option<usize>,
    pub format: Option<String>,
    pub ridge: Option<f64>,
    pub cap: Option<f64>,
    pub out: Option<String>,
}

pub fn resolve(resolver: &mut Resolver, flags: &SimilarityFlags) -> Result<SimilaritySettings> {
    Ok(SimilaritySettings {
        kind: resolver.get_with("kind", flags.kind.clone(), "ingredient", parse_kind)?,
        top_k: resolver.get("top_k", flags.top_k, 5)?,
        format: resolver.get_with("format", flags.format.clone(), "json", parse_format)?,
        ridge: resolver.get("ridge", flags.ridge, 1e-6)?,
        cap: resolver.get("cap", flags.cap, 1e9)?,
    })
}

/// Names for the three artifacts one graph emission produces.
pub struct ArtifactNames<'a> {
    pub graph: &'a str,
    /// `None` skips the region legend (report mode writes it once).
    pub regions: Option<&'a str>,
    pub summary: &'a str,
}

/// Builds the matrix and graph, writes the graph in the requested
/// format, the `cuisine,region` legend, and a JSON summary including
/// any cuisines excluded for sparse flavor data.
pub fn emit(
    sample: &BalancedSample,
    corpus: &RecipeCorpus,
    tables: &CountryTables,
    settings: &SimilaritySettings,
    threads: usize,
    names: &ArtifactNames,
    manifest: &mut RunManifest,
) -> Result<Vec<ExcludedCuisine>> {
    let (matrix, excluded) = match settings.kind {
        SimilarityKind::Ingredient => (
            ingredient_similarity_matrix(sample, corpus, threads)?,
            Vec::new(),
        ),
        SimilarityKind::Flavor => flavor_similarity_matrix(
            sample,
            corpus,
            settings.ridge,
            settings.cap,
            threads,
        )?,
    };
    let graph = build_similarity_graph(&matrix, tables, settings.top_k)?;
    manifest.write_artifact(names.graph, &export_graph(&graph, settings.format)?)?;

    if let Some(regions_name) = names.regions {
        let mut csv = Csv::new(&["cuisine", "region"]);
        for node in &graph.nodes {
            csv.row([node.cuisine.clone(), node.region.name().to_string()]);
        }
        manifest.write_artifact(regions_name, &csv.into_string())?;
    }

    let excluded_json: Vec<_> = excluded
        .iter()
        .map(|e| json!({ "cuisine": e.cuisine, "have": e.have, "need": e.need }))
        .collect();
    let mut summary = json!({
        "kind": settings.kind.name(),
        "top_k": settings.top_k,
        "nodes": graph.nodes.len(),
        "edges": graph.edges.len(),
        "excluded": excluded_json,
    });
    if settings.kind == SimilarityKind::Flavor {
        summary["ridge"] = json!(settings.ridge);
        summary["cap"] = json!(settings.cap);
    }
    let text = format!("{}\n", serde_json::to_string_pretty(&summary).expect("plain json"));
    manifest.write_artifact(names.summary, &text)?;
    Ok(excluded)
}

pub fn run(
    common: &CommonSettings,
    table_paths: &TablePaths,
    flags: &SimilarityFlags,
    resolver: &mut Resolver,
) -> Result<()> {
    let settings = resolve(resolver, flags)?;
    let graph_name = resolver.get(
        "out",
        flags.out.clone(),
        format!(
            "graph_{}.{}",
            settings.kind.name(),
            settings.format.extension()
        ),
    )?;
    let mut manifest = RunManifest::create("similarity", &common.out_dir, resolver.echo().clone())?;
    if let Some(config) = &common.config_file {
        manifest.record_input("config", config)?;
    }
    let ing = ingest_corpus(common, &mut manifest)?;
    let tables = load_tables(table_paths, &mut manifest)?;
    let sample = draw_sample(common, &ing.corpus)?;
    emit(
        &sample,
        &ing.corpus,
        &tables,
        &settings,
        common.threads,
        &ArtifactNames {
            graph: &graph_name,
            regions: Some("regions.csv"),
            summary: "similarity_report.json",
        },
        &mut manifest,
    )?;
    manifest.write()?;
    Ok(())
}
