//! `culina ingest`: parse, standardize, and re-emit the corpus.

use culina_core::Result;
use serde_json::json;

use super::{ingest_corpus, Ingested};
use crate::manifest::RunManifest;
use crate::settings::{CommonSettings, Resolver};

/// Writes the standardized corpus and the ingest quality report.
pub fn emit(ing: &Ingested, manifest: &mut RunManifest) -> Result<()> {
    manifest.write_artifact("corpus_std.jsonl", &ing.corpus.to_standard_jsonl())?;

    let stats = ing.corpus.lexicon.stats;
    let report = json!({
        "parsed": ing.parse.parsed,
        "rejected": ing.parse.rejected,
        "retained": ing.standardize.retained,
        "dropped_below_threshold": ing.standardize.dropped_below_threshold,
        "dropped_empty": ing.standardize.dropped_empty,
        "vocabulary": ing.standardize.vocabulary,
        "cuisines": ing.corpus.cuisines.len(),
        "lookups": {
            "mapped_raws": stats.mapped_raws,
            "unmapped_raws": stats.unmapped_raws,
        },
    });
    let text = format!("{}\n", serde_json::to_string_pretty(&report).expect("plain json"));
    manifest.write_artifact("ingest_report.json", &text)?;
    Ok(())
}

pub fn run(common: &CommonSettings, resolver: &mut Resolver) -> Result<()> {
    let mut manifest = RunManifest::create("ingest", &common.out_dir, resolver.echo().clone())?;
    if let Some(config) = &common.config_file {
        manifest.record_input("config", config)?;
    }
    let ing = ingest_corpus(common, &mut manifest)?;
    emit(&ing, &mut manifest)?;
    manifest.write()?;
    Ok(())
}
