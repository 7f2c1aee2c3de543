//! `culina notable`: top TF-IDF ingredients of a cuisine.

use culina_core::signatures::{notable_ingredients, tfidf, TfIdfTable};
use culina_core::{Error, Result};

use super::{draw_sample, ingest_corpus};
use crate::manifest::RunManifest;
use crate::outputs::{fmt_f64, Csv};
use crate::settings::{CommonSettings, Resolver};

/// Writes `notable.csv`. With a cuisine the columns are
/// `rank,ingredient,weight`; without one (report mode) every sampled
/// cuisine is listed and a leading `cuisine` column is added.
pub fn emit(
    table: &TfIdfTable,
    cuisine: Option<&str>,
    top: usize,
    manifest: &mut RunManifest,
) -> Result<()> {
    let text = match cuisine {
        Some(cuisine) => {
            let mut csv = Csv::new(&["rank", "ingredient", "weight"]);
            for (rank, (ingredient, weight)) in
                notable_ingredients(table, cuisine, top)?.into_iter().enumerate()
            {
                csv.row([(rank + 1).to_string(), ingredient, fmt_f64(weight)]);
            }
            csv.into_string()
        }
        None => {
            let mut csv = Csv::new(&["cuisine", "rank", "ingredient", "weight"]);
            for cuisine in &table.cuisines {
                for (rank, (ingredient, weight)) in
                    notable_ingredients(table, cuisine, top)?.into_iter().enumerate()
                {
                    csv.row([
                        cuisine.clone(),
                        (rank + 1).to_string(),
                        ingredient,
                        fmt_f64(weight),
                    ]);
                }
            }
            csv.into_string()
        }
    };
    manifest.write_artifact("notable.csv", &text)?;
    Ok(())
}

pub fn run(
    common: &CommonSettings,
    cuisine_flag: Option<String>,
    top_flag: Option<usize>,
    resolver: &mut Resolver,
) -> Result<()> {
    let cuisine = resolver.get_opt("cuisine", cuisine_flag)?.ok_or_else(|| {
        Error::InvalidArg(
            "missing required setting `cuisine`: pass --cuisine or set `cuisine` in the config file"
                .into(),
        )
    })?;
    let top = resolver.get("top", top_flag, 10)?;
    let mut manifest = RunManifest::create("notable", &common.out_dir, resolver.echo().clone())?;
    if let Some(config) = &common.config_file {
        manifest.record_input("config", config)?;
    }
    let ing = ingest_corpus(common, &mut manifest)?;
    let sample = draw_sample(common, &ing.corpus)?;
    let table = tfidf(&sample, &ing.corpus)?;
    emit(&table, Some(&cuisine), top, &mut manifest)?;
    manifest.write()?;
    Ok(())
}
