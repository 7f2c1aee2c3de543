//! `culina diversity` and `culina complexity`: per-cuisine metrics,
//! their country-level averages, and the diversity-vs-migration fit.

use std::collections::BTreeMap;

use culina_core::corpus::country::CountryTables;
use culina_core::corpus::RecipeCorpus;
use culina_core::metrics::{
    complexity_distribution, complexity_score, fit_polynomial, global_diversity,
    ingredient_distribution, local_diversity, map_to_countries, BalancedSample,
};
use culina_core::Result;
use serde_json::json;

use super::{draw_sample, ingest_corpus, load_tables, warn};
use crate::manifest::RunManifest;
use crate::outputs::{fmt_f64, Csv};
use crate::settings::{CommonSettings, Resolver, TablePaths};

fn cuisine_csv(values: &BTreeMap<String, f64>) -> String {
    let mut csv = Csv::new(&["cuisine", "value"]);
    for (cuisine, &value) in values {
        csv.row([cuisine.clone(), fmt_f64(value)]);
    }
    csv.into_string()
}

fn country_csv(
    values: &BTreeMap<String, f64>,
    tables: &CountryTables,
    metric: &str,
    manifest: &mut RunManifest,
    name: &str,
) -> Result<BTreeMap<String, f64>> {
    let series = map_to_countries(values, tables, metric)?;
    if !series.skipped_cuisines.is_empty() {
        warn(&format!(
            "{metric}: no country mapping for cuisine(s) {}",
            series.skipped_cuisines.join(", ")
        ));
    }
    let mut csv = Csv::new(&["country", "value"]);
    for (country, &value) in &series.values {
        csv.row([country.clone(), fmt_f64(value)]);
    }
    manifest.write_artifact(name, &csv.into_string())?;
    Ok(series.values)
}

/// Diversity artifacts: global (unique-ingredient count) and local
/// (ingredient-distribution entropy) per cuisine and per country, plus
/// a polynomial fit of country global diversity against net migration.
pub fn emit_diversity(
    sample: &BalancedSample,
    corpus: &RecipeCorpus,
    tables: &CountryTables,
    degree: usize,
    manifest: &mut RunManifest,
) -> Result<()> {
    let mut global = BTreeMap::new();
    let mut local = BTreeMap::new();
    for cuisine in sample.per_cuisine.keys() {
        global.insert(
            cuisine.clone(),
            global_diversity(sample, cuisine, corpus)? as f64,
        );
        let dist = ingredient_distribution(sample, cuisine, corpus)?;
        local.insert(cuisine.clone(), local_diversity(&dist));
    }

    manifest.write_artifact("diversity_global_cuisine.csv", &cuisine_csv(&global))?;
    manifest.write_artifact("diversity_local_cuisine.csv", &cuisine_csv(&local))?;
    let global_by_country = country_csv(
        &global,
        tables,
        "global_diversity",
        manifest,
        "diversity_global_country.csv",
    )?;
    country_csv(
        &local,
        tables,
        "local_diversity",
        manifest,
        "diversity_local_country.csv",
    )?;

    // Fit country-level global diversity against net migration.
    let mut points = Vec::new();
    let mut without_migration = Vec::new();
    for (country, &value) in &global_by_country {
        match tables.net_migration.get(country) {
            Some(&migration) => points.push((migration, value)),
            None => without_migration.push(country.clone()),
        }
    }
    let fit = fit_polynomial(&points, degree)?;
    let fit_json = json!({
        "metric": "global_diversity",
        "statistic": "net_migration",
        "degree": degree,
        "n": points.len(),
        "coefficients": fit.coefficients,
        "scaled_coefficients": fit.scaled_coefficients,
        "x_offset": fit.x_offset,
        "x_scale": fit.x_scale,
        "residual_norm": fit.residual_norm,
        "countries_without_migration": without_migration,
    });
    let text = format!("{}\n", serde_json::to_string_pretty(&fit_json).expect("plain json"));
    manifest.write_artifact("migration_fit.json", &text)?;
    Ok(())
}

/// Complexity artifacts: the reciprocal-CCD-area score per cuisine and
/// its country-level average.
pub fn emit_complexity(
    sample: &BalancedSample,
    corpus: &RecipeCorpus,
    tables: &CountryTables,
    manifest: &mut RunManifest,
) -> Result<()> {
    let mut scores = BTreeMap::new();
    for cuisine in sample.per_cuisine.keys() {
        let cd = complexity_distribution(sample, cuisine, corpus)?;
        scores.insert(cuisine.clone(), complexity_score(&cd));
    }
    manifest.write_artifact("complexity_cuisine.csv", &cuisine_csv(&scores))?;
    country_csv(
        &scores,
        tables,
        "complexity_score",
        manifest,
        "complexity_country.csv",
    )?;
    Ok(())
}

pub fn run_diversity(
    common: &CommonSettings,
    table_paths: &TablePaths,
    degree_flag: Option<usize>,
    resolver: &mut Resolver,
) -> Result<()> {
    let degree = resolver.get("degree", degree_flag, 3)?;
    let mut manifest = RunManifest::create("diversity", &common.out_dir, resolver.echo().clone())?;
    if let Some(config) = &common.config_file {
        manifest.record_input("config", config)?;
    }
    let ing = ingest_corpus(common, &mut manifest)?;
    let tables = load_tables(table_paths, &mut manifest)?;
    let sample = draw_sample(common, &ing.corpus)?;
    emit_diversity(&sample, &ing.corpus, &tables, degree, &mut manifest)?;
    manifest.write()?;
    Ok(())
}

pub fn run_complexity(
    common: &CommonSettings,
    table_paths: &TablePaths,
    resolver: &mut Resolver,
) -> Result<()> {
    let mut manifest = RunManifest::create("complexity", &common.out_dir, resolver.echo().clone())?;
    if let Some(config) = &common.config_file {
        manifest.record_input("config", config)?;
    }
    let ing = ingest_corpus(common, &mut manifest)?;
    let tables = load_tables(table_paths, &mut manifest)?;
    let sample = draw_sample(common, &ing.corpus)?;
    emit_complexity(&sample, &ing.corpus, &tables, &mut manifest)?;
    manifest.write()?;
    Ok(())
}
