//! Argument parsing and dispatch for the `culina` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use culina_core::Result;

use crate::commands;
use crate::commands::classify::ClassifyFlags;
use crate::commands::health::HealthFlags;
use crate::commands::report::ReportFlags;
use crate::commands::similarity::SimilarityFlags;
use crate::settings::{CommonSettings, FileConfig, Resolver, TablePaths};

/// Culinary corpus analytics: diversity, complexity, notable
/// ingredients, similarity graphs, classification, and health
/// correlations, with reproducible run manifests.
#[derive(Debug, Parser)]
#[command(name = "culina", version, propagate_version = true)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonFlags,
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every subcommand. Each flag overrides the config
/// file key of the same name (underscores for dashes).
#[derive(Debug, Clone, Args)]
pub struct CommonFlags {
    /// Flat `key = value` config file; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Recipe corpus (JSON Lines).
    #[arg(long, global = true, value_name = "FILE")]
    pub corpus: Option<PathBuf>,
    /// Reference ingredient ids, one per line.
    #[arg(long, global = true, value_name = "FILE")]
    pub reference: Option<PathBuf>,
    /// Ingredient alias TSV (surface form <TAB> reference id).
    #[arg(long, global = true, value_name = "FILE")]
    pub aliases: Option<PathBuf>,
    /// Extra measurement-unit tokens for the normalizer, one per line.
    #[arg(long, global = true, value_name = "FILE")]
    pub units: Option<PathBuf>,
    /// cuisine,country table (CSV).
    #[arg(long, global = true, value_name = "FILE")]
    pub cuisine_country: Option<PathBuf>,
    /// country,region table (CSV).
    #[arg(long, global = true, value_name = "FILE")]
    pub country_region: Option<PathBuf>,
    /// country health-statistics table (CSV).
    #[arg(long, global = true, value_name = "FILE")]
    pub country_health: Option<PathBuf>,
    /// Output directory for artifacts and the run manifest [default: out].
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Recipes sampled per cuisine [default: 100].
    #[arg(long, global = true, value_name = "N")]
    pub sample_size: Option<usize>,
    /// Top-level RNG seed; all randomness derives from it [default: 0].
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Minimum fraction of a recipe's raw ingredients that must map to
    /// reference ids [default: 0.5].
    #[arg(long, global = true, value_name = "F")]
    pub min_mapped: Option<f64>,
    /// A cuisine becomes a classification class only with strictly
    /// more recipes than this [default: 100].
    #[arg(long, global = true, value_name = "N")]
    pub min_recipes: Option<usize>,
    /// Worker threads for the similarity matrix fill [default: 1].
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and standardize the corpus; emit it with a quality report.
    Ingest,
    /// Global/local ingredient diversity per cuisine and country, plus
    /// the diversity-vs-migration polynomial fit.
    Diversity {
        /// Degree of the migration fit polynomial [default: 3].
        #[arg(long, value_name = "N")]
        degree: Option<usize>,
    },
    /// Recipe-complexity scores per cuisine and country.
    Complexity,
    /// Top TF-IDF ingredients of one cuisine.
    Notable {
        /// Cuisine to rank ingredients for.
        #[arg(long, value_name = "NAME")]
        cuisine: Option<String>,
        /// Number of ingredients to emit [default: 10].
        #[arg(long, value_name = "K")]
        top: Option<usize>,
    },
    /// k-nearest-neighbor cuisine similarity graph.
    Similarity {
        /// ingredient (1 - Jensen-Shannon) or flavor (reciprocal
        /// symmetrized KL) [default: ingredient].
        #[arg(long, value_name = "KIND")]
        kind: Option<String>,
        /// Outgoing edges per cuisine [default: 5].
        #[arg(long, value_name = "K")]
        top_k: Option<usize>,
        /// Graph format: dot, graphml, or json [default: json].
        #[arg(long, value_name = "FMT")]
        format: Option<String>,
        /// Covariance ridge for flavor Gaussians [default: 1e-6].
        #[arg(long, value_name = "F")]
        ridge: Option<f64>,
        /// Similarity cap for near-identical flavor pairs [default: 1e9].
        #[arg(long, value_name = "F")]
        cap: Option<f64>,
        /// Graph file name within the output directory
        /// [default: graph_<kind>.<ext>].
        #[arg(long, value_name = "NAME")]
        out: Option<String>,
    },
    /// Train and evaluate a cuisine or region classifier.
    Classify {
        /// svm or mlp [default: svm].
        #[arg(long, value_name = "MODEL")]
        model: Option<String>,
        /// cuisine or region [default: cuisine].
        #[arg(long, value_name = "TARGET")]
        target: Option<String>,
        /// Fraction of each class used for training [default: 0.8].
        #[arg(long, value_name = "F")]
        train_frac: Option<f64>,
        /// Training epochs (svm default 20, mlp default 30).
        #[arg(long, value_name = "N")]
        epochs: Option<usize>,
        /// SVM step-size numerator [default: 0.5].
        #[arg(long, value_name = "F")]
        lr: Option<f64>,
        /// SVM L2 regularization [default: 1e-4].
        #[arg(long, value_name = "F")]
        l2: Option<f64>,
        /// MLP minibatch size [default: 128].
        #[arg(long, value_name = "N")]
        batch: Option<usize>,
        /// MLP dropout probability [default: 0.5].
        #[arg(long, value_name = "F")]
        dropout: Option<f64>,
        /// MLP hidden layer widths, comma-separated
        /// [default: 1000,1000,500,500].
        #[arg(long, value_name = "LIST")]
        hidden: Option<String>,
    },
    /// Correlate country nutrition averages with health measures.
    Health {
        /// Comma list of measures [default: obesity,diabetes,expenditure].
        #[arg(long, value_name = "LIST")]
        measures: Option<String>,
        /// Comma list of nutrients
        /// [default: calories,protein,fat,carbohydrate,sugar].
        #[arg(long, value_name = "LIST")]
        nutrients: Option<String>,
        /// Weight for unrated recipes: corpus-mean or unit
        /// [default: corpus-mean].
        #[arg(long, value_name = "POLICY")]
        rating_policy: Option<String>,
    },
    /// Run every analysis into one directory with an artifact index.
    Report {
        /// Degree of the migration fit polynomial [default: 3].
        #[arg(long, value_name = "N")]
        degree: Option<usize>,
        /// Notable ingredients per cuisine [default: 10].
        #[arg(long, value_name = "K")]
        top: Option<usize>,
        /// Outgoing edges per cuisine in similarity graphs [default: 5].
        #[arg(long, value_name = "K")]
        top_k: Option<usize>,
        /// Graph format: dot, graphml, or json [default: json].
        #[arg(long, value_name = "FMT")]
        format: Option<String>,
        /// Classifier: svm or mlp [default: svm].
        #[arg(long, value_name = "MODEL")]
        model: Option<String>,
        /// Classification target: cuisine or region [default: cuisine].
        #[arg(long, value_name = "TARGET")]
        target: Option<String>,
        /// Fraction of each class used for training [default: 0.8].
        #[arg(long, value_name = "F")]
        train_frac: Option<f64>,
    },
}

fn resolve_common(resolver: &mut Resolver, flags: &CommonFlags) -> Result<CommonSettings> {
    let corpus = resolver.input_path("corpus", flags.corpus.clone())?;
    let reference = resolver.input_path("reference", flags.reference.clone())?;
    let aliases = resolver.input_path("aliases", flags.aliases.clone())?;
    let units = match resolver.path_opt("units", flags.units.clone()) {
        Some(path) if path.is_file() => Some(path),
        Some(path) => {
            return Err(culina_core::Error::InvalidArg(format!(
                "setting `units`: {} is not a readable file",
                path.display()
            )))
        }
        None => None,
    };
    let out_dir = resolver
        .path_opt("out_dir", flags.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    // Where artifacts land does not affect their bytes; keep it out of
    // the manifest echo so runs into different directories compare
    // equal.
    resolver.drop_from_echo("out_dir");
    Ok(CommonSettings {
        config_file: flags.config.clone(),
        corpus,
        reference,
        aliases,
        units,
        out_dir,
        sample_size: resolver.get("sample_size", flags.sample_size, 100)?,
        seed: resolver.get("seed", flags.seed, 0)?,
        min_mapped: resolver.get("min_mapped", flags.min_mapped, 0.5)?,
        min_recipes: resolver.get("min_recipes", flags.min_recipes, 100)?,
        threads: resolver.get("threads", flags.threads, 1)?,
    })
}

fn resolve_tables(resolver: &mut Resolver, flags: &CommonFlags) -> Result<TablePaths> {
    Ok(TablePaths {
        cuisine_country: resolver.input_path("cuisine_country", flags.cuisine_country.clone())?,
        country_region: resolver.input_path("country_region", flags.country_region.clone())?,
        country_health: resolver.input_path("country_health", flags.country_health.clone())?,
    })
}

/// Resolves settings and runs the selected subcommand.
pub fn run(cli: Cli) -> Result<()> {
    let file = match &cli.common.config {
        Some(path) => Some(FileConfig::load(path)?),
        None => None,
    };
    let mut resolver = Resolver::new(file);
    let common = resolve_common(&mut resolver, &cli.common)?;
    match cli.command {
        Command::Ingest => commands::ingest::run(&common, &mut resolver),
        Command::Diversity { degree } => {
            let tables = resolve_tables(&mut resolver, &cli.common)?;
            commands::metrics::run_diversity(&common, &tables, degree, &mut resolver)
        }
        Command::Complexity => {
            let tables = resolve_tables(&mut resolver, &cli.common)?;
            commands::metrics::run_complexity(&common, &tables, &mut resolver)
        }
        Command::Notable { cuisine, top } => {
            commands::notable::run(&common, cuisine, top, &mut resolver)
        }
        Command::Similarity {
            kind,
            top_k,
            format,
            ridge,
            cap,
            out,
        } => {
            let tables = resolve_tables(&mut resolver, &cli.common)?;
            let flags = SimilarityFlags {
                kind,
                top_k,
                format,
                ridge,
                cap,
                out,
            };
            commands::similarity::run(&common, &tables, &flags, &mut resolver)
        }
        Command::Classify {
            model,
            target,
            train_frac,
            epochs,
            lr,
            l2,
            batch,
            dropout,
            hidden,
        } => {
            let flags = ClassifyFlags {
                model,
                target,
                train_frac,
                epochs,
                lr,
                l2,
                batch,
                dropout,
                hidden,
            };
            let common_flags = cli.common.clone();
            commands::classify::run(
                &common,
                move |resolver| resolve_tables(resolver, &common_flags),
                &flags,
                &mut resolver,
            )
        }
        Command::Health {
            measures,
            nutrients,
            rating_policy,
        } => {
            let tables = resolve_tables(&mut resolver, &cli.common)?;
            let flags = HealthFlags {
                measures,
                nutrients,
                rating_policy,
            };
            commands::health::run(&common, &tables, &flags, &mut resolver)
        }
        Command::Report {
            degree,
            top,
            top_k,
            format,
            model,
            target,
            train_frac,
        } => {
            let tables = resolve_tables(&mut resolver, &cli.common)?;
            let flags = ReportFlags {
                degree,
                top,
                top_k,
                format,
                model,
                target,
                train_frac,
            };
            commands::report::run(&common, &tables, &flags, &mut resolver)
        }
    }
}
