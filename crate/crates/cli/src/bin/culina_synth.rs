//! `culina-synth`: deterministic synthetic fixture generator.
//!
//! Writes a recipe corpus plus the lexicon and country tables the
//! `culina` pipeline consumes. Identical arguments always produce
//! identical bytes, so generated fixtures can be committed and checked.

use std::path::PathBuf;

use clap::Parser;
use culina_core::synth::{generate, SynthConfig};
use culina_core::{Error, Result};

/// Generate a synthetic recipe corpus with matching lexicon and
/// country tables.
#[derive(Debug, Parser)]
#[command(name = "culina-synth", version)]
struct Args {
    /// Directory to write the fixture files into.
    #[arg(long, value_name = "DIR", default_value = "fixtures")]
    out_dir: PathBuf,
    /// Number of cuisines.
    #[arg(long, value_name = "N", default_value_t = 82)]
    cuisines: usize,
    /// Recipes generated per cuisine.
    #[arg(long, value_name = "N", default_value_t = 122)]
    recipes_per_cuisine: usize,
    /// Generator seed.
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
    /// Probability that a recipe carries no flavor vector.
    #[arg(long, value_name = "F", default_value_t = 0.10)]
    flavor_missing_rate: f64,
    /// Probability that a recipe carries no rating.
    #[arg(long, value_name = "F", default_value_t = 0.15)]
    rating_missing_rate: f64,
    /// Probability that a recipe gains one unmappable raw string.
    #[arg(long, value_name = "F", default_value_t = 0.05)]
    unmappable_rate: f64,
}

/// The fixed file names the generator writes, paired with the output
/// field each carries.
pub const FILE_NAMES: [&str; 6] = [
    "corpus.jsonl",
    "reference.txt",
    "aliases.tsv",
    "cuisine_country.csv",
    "country_region.csv",
    "country_health.csv",
];

fn run(args: &Args) -> Result<()> {
    let config = SynthConfig {
        cuisines: args.cuisines,
        recipes_per_cuisine: args.recipes_per_cuisine,
        seed: args.seed,
        flavor_missing_rate: args.flavor_missing_rate,
        rating_missing_rate: args.rating_missing_rate,
        unmappable_rate: args.unmappable_rate,
    };
    let output = generate(&config)?;
    std::fs::create_dir_all(&args.out_dir).map_err(|source| Error::Io {
        path: args.out_dir.clone(),
        source,
    })?;
    let contents = [
        &output.corpus_jsonl,
        &output.reference,
        &output.aliases,
        &output.cuisine_country_csv,
        &output.country_region_csv,
        &output.country_health_csv,
    ];
    for (name, content) in FILE_NAMES.iter().zip(contents) {
        let path = args.out_dir.join(name);
        std::fs::write(&path, content.as_bytes()).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
    }
    println!(
        "{}",
        serde_json::json!({
            "out_dir": args.out_dir.display().to_string(),
            "files": FILE_NAMES,
        })
    );
    Ok(())
}

fn main() {
    let args = Args::parse();
    if let Err(err) = run(&args) {
        std::process::exit(culina_cli::report_error(&err));
    }
}
