//! `culina classify`: cuisine or region prediction from binary
//! ingredient indicators, with metrics, confusion matrix, and a
//! versioned serialized model.

use culina_core::classify::{
    evaluate, split, train_mlp, train_svm, EvalReport, LabelKind, MlpConfig, SavedModel,
    SvmConfig, TrainReport,
};
use culina_core::corpus::country::CountryTables;
use culina_core::corpus::RecipeCorpus;
use culina_core::{Error, Result};
use serde_json::json;

use super::{ingest_corpus, load_tables, parse_hidden, parse_model, parse_target, ModelKind};
use crate::manifest::RunManifest;
use crate::outputs::Csv;
use crate::settings::{CommonSettings, Resolver, TablePaths};

/// Resolved classification settings; exactly one of `svm`/`mlp` is
/// consulted, per `model`.
#[derive(Debug, Clone)]
pub struct ClassifySettings {
    pub model: ModelKind,
    pub target: LabelKind,
    pub train_frac: f64,
    pub svm: SvmConfig,
    pub mlp: MlpConfig,
}

/// Flags the `classify` subcommand takes.
#[derive(Debug, Clone, Default)]
pub struct ClassifyFlags {
    pub model: Option<String>,
    pub target: Option<String>,
    pub train_frac: Option<f64>,
    pub epochs: Option<usize>,
    pub lr: Option<f64>,
    pub l2: Option<f64>,
    pub batch: Option<usize>,
    pub dropout: Option<f64>,
    pub hidden: Option<String>,
}

fn reject_flag<T>(flag: &Option<T>, name: &str, model: ModelKind) -> Result<()> {
    if flag.is_some() {
        return Err(Error::InvalidArg(format!(
            "--{name} does not apply to --model {}",
            model.name()
        )));
    }
    Ok(())
}

pub fn resolve(resolver: &mut Resolver, flags: &ClassifyFlags, seed: u64) -> Result<ClassifySettings> {
    let model = resolver.get_with("model", flags.model.clone(), "svm", parse_model)?;
    let target = resolver.get_with("target", flags.target.clone(), "cuisine", parse_target)?;
    let train_frac = resolver.get("train_frac", flags.train_frac, 0.8)?;
    let mut svm = SvmConfig {
        seed,
        ..SvmConfig::default()
    };
    let mut mlp = MlpConfig {
        seed,
        ..MlpConfig::default()
    };
    match model {
        ModelKind::Svm => {
            reject_flag(&flags.batch, "batch", model)?;
            reject_flag(&flags.dropout, "dropout", model)?;
            reject_flag(&flags.hidden, "hidden", model)?;
            svm.epochs = resolver.get("svm_epochs", flags.epochs, svm.epochs)?;
            svm.lr = resolver.get("svm_lr", flags.lr, svm.lr)?;
            svm.l2 = resolver.get("svm_l2", flags.l2, svm.l2)?;
        }
        ModelKind::Mlp => {
            reject_flag(&flags.lr, "lr", model)?;
            reject_flag(&flags.l2, "l2", model)?;
            mlp.epochs = resolver.get("mlp_epochs", flags.epochs, mlp.epochs)?;
            mlp.batch = resolver.get("mlp_batch", flags.batch, mlp.batch)?;
            mlp.dropout = resolver.get("mlp_dropout", flags.dropout, mlp.dropout)?;
            mlp.rho = resolver.get("mlp_rho", None, mlp.rho)?;
            mlp.eps = resolver.get("mlp_eps", None, mlp.eps)?;
            let default_hidden = mlp
                .hidden
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(",");
            mlp.hidden = resolver.get_with(
                "mlp_hidden",
                flags.hidden.clone(),
                &default_hidden,
                parse_hidden,
            )?;
        }
    }
    Ok(ClassifySettings {
        model,
        target,
        train_frac,
        svm,
        mlp,
    })
}

fn confusion_csv(eval: &EvalReport, class_names: &[String]) -> String {
    let mut header: Vec<&str> = vec!["class"];
    header.extend(class_names.iter().map(String::as_str));
    header.push("top_confusion");
    let mut csv = Csv::new(&header);
    for (i, name) in class_names.iter().enumerate() {
        let mut row = vec![name.clone()];
        row.extend(eval.confusion[i].iter().map(u64::to_string));
        row.push(match eval.top_confusion[i] {
            Some(j) => class_names[j].clone(),
            None => String::new(),
        });
        csv.row(row);
    }
    csv.into_string()
}

/// Featurizes, splits, trains, and writes `metrics.json`,
/// `confusion.csv`, and `model.json`.
pub fn emit(
    corpus: &RecipeCorpus,
    tables: Option<&CountryTables>,
    settings: &ClassifySettings,
    min_recipes: usize,
    seed: u64,
    manifest: &mut RunManifest,
) -> Result<()> {
    let fm = culina_core::classify::featurize(corpus, settings.target, min_recipes, tables)?;
    let (train, test) = split(&fm, settings.train_frac, seed)?;

    let (saved, train_report): (SavedModel, TrainReport) = match settings.model {
        ModelKind::Svm => {
            let (model, report) = train_svm(&train, &settings.svm)?;
            (SavedModel::Svm(model), report)
        }
        ModelKind::Mlp => {
            let (model, report) = train_mlp(&train, &settings.mlp)?;
            (SavedModel::Mlp(model), report)
        }
    };
    let eval = match &saved {
        SavedModel::Svm(model) => evaluate(model, &test)?,
        SavedModel::Mlp(model) => evaluate(model, &test)?,
    };

    let config = match settings.model {
        ModelKind::Svm => json!({
            "epochs": settings.svm.epochs,
            "lr": settings.svm.lr,
            "l2": settings.svm.l2,
        }),
        ModelKind::Mlp => json!({
            "epochs": settings.mlp.epochs,
            "batch": settings.mlp.batch,
            "dropout": settings.mlp.dropout,
            "rho": settings.mlp.rho,
            "eps": settings.mlp.eps,
            "hidden": settings.mlp.hidden,
        }),
    };
    let metrics = json!({
        "model": settings.model.name(),
        "target": settings.target.name(),
        "train_frac": settings.train_frac,
        "seed": seed,
        "min_recipes": min_recipes,
        "classes": fm.class_names,
        "train_rows": train.len(),
        "test_rows": test.len(),
        "config": config,
        "train": train_report,
        "eval": eval,
    });
    let text = format!("{}\n", serde_json::to_string_pretty(&metrics).expect("plain json"));
    manifest.write_artifact("metrics.json", &text)?;
    manifest.write_artifact("confusion.csv", &confusion_csv(&eval, &fm.class_names))?;
    manifest.write_artifact("model.json", &saved.to_json()?)?;
    Ok(())
}

pub fn run(
    common: &CommonSettings,
    table_paths_flags: impl FnOnce(&mut Resolver) -> Result<TablePaths>,
    flags: &ClassifyFlags,
    resolver: &mut Resolver,
) -> Result<()> {
    let settings = resolve(resolver, flags, common.seed)?;
    // Region labels come from the country tables; cuisine labels are
    // intrinsic, so the tables are only required (and only recorded as
    // inputs) for the region target.
    let table_paths = match settings.target {
        LabelKind::Region => Some(table_paths_flags(resolver)?),
        LabelKind::Cuisine => None,
    };
    let mut manifest = RunManifest::create("classify", &common.out_dir, resolver.echo().clone())?;
    if let Some(config) = &common.config_file {
        manifest.record_input("config", config)?;
    }
    let ing = ingest_corpus(common, &mut manifest)?;
    let tables = match &table_paths {
        Some(paths) => Some(load_tables(paths, &mut manifest)?),
        None => None,
    };
    emit(
        &ing.corpus,
        tables.as_ref(),
        &settings,
        common.min_recipes,
        common.seed,
        &mut manifest,
    )?;
    manifest.write()?;
    Ok(())
}
