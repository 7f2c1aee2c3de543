//! `culina health`: country-level nutrition averages, their
//! correlations with public-health measures, and bottom-k curves.

use culina_core::corpus::country::CountryTables;
use culina_core::corpus::RecipeCorpus;
use culina_core::health::{
    bottomk_curve, country_nutrition, kendall_tau, pearson, MeasureKind, MissingRatingPolicy,
    NutrientKind,
};
use culina_core::Result;
use serde_json::json;

use super::{ingest_corpus, load_tables, parse_measures, parse_nutrients, parse_policy, warn};
use crate::manifest::RunManifest;
use crate::outputs::{fmt_f64, Csv};
use crate::settings::{CommonSettings, Resolver, TablePaths};

/// Resolved health-analysis settings.
#[derive(Debug, Clone)]
pub struct HealthSettings {
    pub measures: Vec<MeasureKind>,
    pub nutrients: Vec<NutrientKind>,
    pub policy: MissingRatingPolicy,
}

/// Flags the `health` subcommand takes.
#[derive(Debug, Clone, Default)]
pub struct HealthFlags {
    pub measures: Option<String>,
    pub nutrients: Option<String>,
    pub rating_policy: Option<String>,
}

pub fn resolve(resolver: &mut Resolver, flags: &HealthFlags) -> Result<HealthSettings> {
    Ok(HealthSettings {
        measures: resolver.get_with(
            "measures",
            flags.measures.clone(),
            "obesity,diabetes,expenditure",
            parse_measures,
        )?,
        nutrients: resolver.get_with(
            "nutrients",
            flags.nutrients.clone(),
            "calories,protein,fat,carbohydrate,sugar",
            parse_nutrients,
        )?,
        policy: resolver.get_with(
            "rating_policy",
            flags.rating_policy.clone(),
            "corpus-mean",
            parse_policy,
        )?,
    })
}

fn policy_name(policy: MissingRatingPolicy) -> &'static str {
    match policy {
        MissingRatingPolicy::CorpusMean => "corpus-mean",
        MissingRatingPolicy::Unit => "unit",
    }
}

/// Writes the correlation table, one bottom-k curve per selected
/// measure-nutrient pair, the per-country nutrition averages, and a
/// JSON summary.
pub fn emit(
    corpus: &RecipeCorpus,
    tables: &CountryTables,
    settings: &HealthSettings,
    manifest: &mut RunManifest,
) -> Result<()> {
    let (nutrition, report) = country_nutrition(corpus, tables, settings.policy)?;
    if !report.skipped_cuisines.is_empty() {
        warn(&format!(
            "nutrition pooling: no country mapping for cuisine(s) {}",
            report.skipped_cuisines.join(", ")
        ));
    }

    // Correlation rows in canonical order (measures outer, nutrients
    // inner), restricted to the selected kinds. The pairing rule
    // matches the full-table operation: a country contributes when it
    // has the nutrient average and health statistics.
    let mut table = Csv::new(&["measure", "nutrient", "pearson", "kendall_tau", "n"]);
    for &measure in &settings.measures {
        for &nutrient in &settings.nutrients {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for (country, cn) in &nutrition {
                let (Some(&avg), Some(stats)) =
                    (cn.averages.get(&nutrient), tables.health.get(country))
                else {
                    continue;
                };
                xs.push(avg);
                ys.push(measure.extract(stats));
            }
            table.row([
                measure.name().to_string(),
                nutrient.name().to_string(),
                fmt_f64(pearson(&xs, &ys)?),
                fmt_f64(kendall_tau(&xs, &ys)?),
                xs.len().to_string(),
            ]);
        }
    }
    manifest.write_artifact("health_correlations.csv", &table.into_string())?;

    for &measure in &settings.measures {
        for &nutrient in &settings.nutrients {
            let curve = bottomk_curve(&nutrition, tables, nutrient, measure)?;
            let mut csv = Csv::new(&["k", "mean_measure"]);
            for (k, mean) in curve {
                csv.row([k.to_string(), fmt_f64(mean)]);
            }
            manifest.write_artifact(
                &format!("curve_{}_{}.csv", measure.name(), nutrient.name()),
                &csv.into_string(),
            )?;
        }
    }

    let mut averages = Csv::new(&[
        "country",
        "calories",
        "protein",
        "fat",
        "carbohydrate",
        "sugar",
        "weights_used",
        "n_recipes",
    ]);
    for (country, cn) in &nutrition {
        let mut row = vec![country.clone()];
        for kind in NutrientKind::ALL {
            row.push(match cn.averages.get(&kind) {
                Some(&v) => fmt_f64(v),
                None => String::new(),
            });
        }
        row.push(fmt_f64(cn.weights_used));
        row.push(cn.n_recipes.to_string());
        averages.row(row);
    }
    manifest.write_artifact("nutrition_by_country.csv", &averages.into_string())?;

    let summary = json!({
        "countries": nutrition.len(),
        "rating_policy": policy_name(settings.policy),
        "skipped_cuisines": report.skipped_cuisines,
        "measures": settings.measures.iter().map(|m| m.name()).collect::<Vec<_>>(),
        "nutrients": settings.nutrients.iter().map(|n| n.name()).collect::<Vec<_>>(),
    });
    let text = format!("{}\n", serde_json::to_string_pretty(&summary).expect("plain json"));
    manifest.write_artifact("health_report.json", &text)?;
    Ok(())
}

pub fn run(
    common: &CommonSettings,
    table_paths: &TablePaths,
    flags: &HealthFlags,
    resolver: &mut Resolver,
) -> Result<()> {
    let settings = resolve(resolver, flags)?;
    let mut manifest = RunManifest::create("health", &common.out_dir, resolver.echo().clone())?;
    if let Some(config) = &common.config_file {
        manifest.record_input("config", config)?;
    }
    let ing = ingest_corpus(common, &mut manifest)?;
    let tables = load_tables(table_paths, &mut manifest)?;
    emit(&ing.corpus, &tables, &settings, &mut manifest)?;
    manifest.write()?;
    Ok(())
}
