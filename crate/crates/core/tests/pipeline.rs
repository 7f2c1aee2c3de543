//! End-to-end flow over a small synthetic world: generation, ingestion,
//! standardization, sampling, diversity and complexity, notability,
//! similarity matrices and graphs, classification, persistence, and the
//! nutrition-health correlations. The point is cross-module wiring and
//! determinism, not metric quality — module tests cover that.

use std::path::PathBuf;

use culina_core::classify::{
    evaluate, featurize, split, train_mlp, train_svm, Classifier, LabelKind, MlpConfig,
    SavedModel, SvmConfig,
};
use culina_core::corpus::{
    build_lexicon, load_country_tables, parse_corpus, standardize, CorpusFormat, CountryTables,
    Normalizer, RecipeCorpus,
};
use culina_core::health::{
    bottomk_curve, correlation_table, country_nutrition, MeasureKind, MissingRatingPolicy,
    NutrientKind,
};
use culina_core::metrics::{
    complexity_distribution, complexity_score, global_diversity, ingredient_distribution,
    local_diversity, map_to_countries, sample_balanced,
};
use culina_core::signatures::{notable_ingredients, tfidf};
use culina_core::similarity::{
    build_similarity_graph, export_graph, flavor_similarity_matrix, import_graph_json,
    ingredient_similarity_matrix, GraphFormat,
};
use culina_core::synth::{generate, SynthConfig};

const CUISINES: usize = 10;
const RECIPES: usize = 24;
const SAMPLE_N: usize = 18;
const SEED: u64 = 20_240_101;
const FLAVOR_RIDGE: f64 = 1e-6;
const FLAVOR_CAP: f64 = 1e9;

fn fixture_config() -> SynthConfig {
    SynthConfig {
        cuisines: CUISINES,
        recipes_per_cuisine: RECIPES,
        seed: 99,
        ..SynthConfig::default()
    }
}

struct World {
    corpus: RecipeCorpus,
    tables: CountryTables,
    _dir: tempfile::TempDir,
}

fn build_world() -> World {
    let out = generate(&fixture_config()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| -> PathBuf {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    };
    let corpus_path = write("corpus.jsonl", &out.corpus_jsonl);
    let reference = write("reference.txt", &out.reference);
    let aliases = write("aliases.tsv", &out.aliases);
    let cc = write("cuisine_country.csv", &out.cuisine_country_csv);
    let cr = write("country_region.csv", &out.country_region_csv);
    let ch = write("country_health.csv", &out.country_health_csv);

    let (parsed, report) = parse_corpus(&corpus_path, CorpusFormat::JsonLines).unwrap();
    assert!(report.rejected.is_empty(), "{:?}", report.rejected);
    let lexicon = build_lexicon(&reference, &aliases, Normalizer::default()).unwrap();
    let (corpus, std_report) = standardize(parsed, lexicon, 0.5).unwrap();
    assert_eq!(
        std_report.retained + std_report.dropped_below_threshold + std_report.dropped_empty,
        report.parsed
    );
    let tables = load_country_tables(&cc, &cr, &ch).unwrap();
    World {
        corpus,
        tables,
        _dir: dir,
    }
}

#[test]
fn full_pipeline_holds_together() {
    let world = build_world();
    let corpus = &world.corpus;
    let tables = &world.tables;

    // Every cuisine keeps enough recipes to sample from.
    for (cuisine, members) in &corpus.cuisines {
        assert!(
            members.len() >= RECIPES - 1,
            "{cuisine} retained only {}",
            members.len()
        );
    }

    let sample = sample_balanced(corpus, SAMPLE_N, SEED).unwrap();
    assert!(sample.excluded.is_empty());
    assert_eq!(sample.per_cuisine.len(), CUISINES);

    // Diversity: the distribution support and the distinct-ingredient
    // count are two routes to the same set.
    let vocab_ln = (corpus.vocab_size() as f64).ln();
    for cuisine in sample.per_cuisine.keys() {
        let dist = ingredient_distribution(&sample, cuisine, corpus).unwrap();
        let local = local_diversity(&dist);
        assert!(local > 0.0 && local < vocab_ln);
        assert_eq!(
            dist.support_size,
            global_diversity(&sample, cuisine, corpus).unwrap()
        );
        let cd = complexity_distribution(&sample, cuisine, corpus).unwrap();
        assert!((cd.ccd[cd.i_max] - 1.0).abs() < 1e-12);
        let score = complexity_score(&cd);
        assert!(score > 0.0 && score <= 1.0 + 1e-12);
    }

    // Country mapping averages cuisines without losing any.
    let diversities: std::collections::BTreeMap<String, f64> = sample
        .per_cuisine
        .keys()
        .map(|c| {
            let dist = ingredient_distribution(&sample, c, corpus).unwrap();
            (c.clone(), local_diversity(&dist))
        })
        .collect();
    let series = map_to_countries(&diversities, tables, "local_diversity").unwrap();
    assert!(series.skipped_cuisines.is_empty());
    let mapped: usize = series.provenance.values().map(Vec::len).sum();
    assert!(mapped >= CUISINES);

    // Notability: weights are finite and ranked.
    let table = tfidf(&sample, corpus).unwrap();
    for cuisine in sample.per_cuisine.keys() {
        let top = notable_ingredients(&table, cuisine, 5).unwrap();
        assert!(!top.is_empty());
        for pair in top.windows(2) {
            assert!(pair[0].1 >= pair[1].1);
        }
        assert!(top.iter().all(|(_, w)| w.is_finite() && *w > 0.0));
    }

    // Similarity matrices: structure plus graph round trip.
    let ingredient = ingredient_similarity_matrix(&sample, corpus, 1).unwrap();
    assert_eq!(ingredient.labels.len(), CUISINES);
    for i in 0..CUISINES {
        assert_eq!(ingredient.values[i][i], 1.0);
        for j in 0..CUISINES {
            assert_eq!(ingredient.values[i][j], ingredient.values[j][i]);
            assert!((0.0..=1.0).contains(&ingredient.values[i][j]));
        }
    }
    let (flavor, excluded) =
        flavor_similarity_matrix(&sample, corpus, FLAVOR_RIDGE, FLAVOR_CAP, 1).unwrap();
    assert!(excluded.is_empty(), "{excluded:?}");
    assert_eq!(flavor.labels, ingredient.labels);

    let graph = build_similarity_graph(&ingredient, tables, 3).unwrap();
    assert_eq!(graph.edges.len(), CUISINES * 3);
    for node in 0..CUISINES {
        let out_degree = graph.edges.iter().filter(|e| e.source == node).count();
        assert_eq!(out_degree, 3);
    }
    let json = export_graph(&graph, GraphFormat::Json).unwrap();
    assert_eq!(import_graph_json(&json).unwrap(), graph);

    // Classification end to end, both model families, plus persistence.
    let fm = featurize(corpus, LabelKind::Cuisine, SAMPLE_N, None).unwrap();
    assert_eq!(fm.class_names.len(), CUISINES);
    let (train, test) = split(&fm, 0.8, SEED).unwrap();
    // Ten classes with ~20 training rows each need gentler steps than
    // the defaults (eta = lr/(l2*t)), hence the larger l2 here.
    let (svm, svm_report) = train_svm(
        &train,
        &SvmConfig {
            epochs: 40,
            l2: 0.1,
            seed: SEED,
            ..SvmConfig::default()
        },
    )
    .unwrap();
    assert_eq!(svm_report.epoch_losses.len(), 40);
    let svm_eval = evaluate(&svm, &test).unwrap();
    assert!(
        svm_eval.accuracy >= 0.7,
        "svm accuracy {}",
        svm_eval.accuracy
    );

    let (mlp, _) = train_mlp(
        &train,
        &MlpConfig {
            epochs: 15,
            batch: 32,
            hidden: vec![32],
            dropout: 0.2,
            seed: SEED,
            ..MlpConfig::default()
        },
    )
    .unwrap();
    let mlp_eval = evaluate(&mlp, &test).unwrap();
    assert!(
        mlp_eval.accuracy >= 0.7,
        "mlp accuracy {}",
        mlp_eval.accuracy
    );

    let saved = SavedModel::Svm(svm);
    let json = saved.to_json().unwrap();
    let back = SavedModel::from_json(&json).unwrap();
    assert_eq!(
        back.predict(&test).unwrap(),
        saved.predict(&test).unwrap()
    );

    // Health: the full correlation table and a bottom-k curve.
    let (nutrition, nut_report) =
        country_nutrition(corpus, tables, MissingRatingPolicy::CorpusMean).unwrap();
    assert!(nut_report.skipped_cuisines.is_empty());
    assert!(!nutrition.is_empty());
    let rows = correlation_table(&nutrition, tables).unwrap();
    assert_eq!(rows.len(), 15);
    for row in &rows {
        assert!(row.pearson.is_finite() && row.pearson.abs() <= 1.0 + 1e-12);
        assert!(row.kendall_tau.is_finite() && row.kendall_tau.abs() <= 1.0 + 1e-12);
        assert!(row.n >= 3);
    }
    let curve = bottomk_curve(&nutrition, tables, NutrientKind::Sugar, MeasureKind::Obesity)
        .unwrap();
    assert!(!curve.is_empty());
    for pair in curve.windows(2) {
        assert_eq!(pair[1].0, pair[0].0 + 1);
    }
}

#[test]
fn pipeline_outputs_are_reproducible() {
    let world = build_world();
    let corpus = &world.corpus;

    let sample_a = sample_balanced(corpus, SAMPLE_N, SEED).unwrap();
    let sample_b = sample_balanced(corpus, SAMPLE_N, SEED).unwrap();
    assert_eq!(sample_a.per_cuisine, sample_b.per_cuisine);

    let tfidf_a = tfidf(&sample_a, corpus).unwrap();
    let tfidf_b = tfidf(&sample_b, corpus).unwrap();
    assert_eq!(tfidf_a.weights, tfidf_b.weights);

    let m_seq = ingredient_similarity_matrix(&sample_a, corpus, 1).unwrap();
    let m_par = ingredient_similarity_matrix(&sample_a, corpus, 4).unwrap();
    assert_eq!(m_seq.values, m_par.values);

    // A fresh world from the same config reproduces the corpus exactly.
    let again = build_world();
    assert_eq!(again.corpus.to_standard_jsonl(), corpus.to_standard_jsonl());
}

/// Region-level classification needs every cuisine mapped through the
/// country tables; check the plumbing with a bigger world so each
/// region class holds at least two cuisines.
#[test]
fn region_labels_pool_cuisines_through_the_tables() {
    let out = generate(&SynthConfig {
        cuisines: 30,
        recipes_per_cuisine: 12,
        seed: 4,
        ..SynthConfig::default()
    })
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| -> PathBuf {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    };
    let corpus_path = write("corpus.jsonl", &out.corpus_jsonl);
    let reference = write("reference.txt", &out.reference);
    let aliases = write("aliases.tsv", &out.aliases);
    let cc = write("cuisine_country.csv", &out.cuisine_country_csv);
    let cr = write("country_region.csv", &out.country_region_csv);
    let ch = write("country_health.csv", &out.country_health_csv);

    let (parsed, _) = parse_corpus(&corpus_path, CorpusFormat::JsonLines).unwrap();
    let lexicon = build_lexicon(&reference, &aliases, Normalizer::default()).unwrap();
    let (corpus, _) = standardize(parsed, lexicon, 0.5).unwrap();
    let tables = load_country_tables(&cc, &cr, &ch).unwrap();

    let fm = featurize(&corpus, LabelKind::Region, 5, Some(&tables)).unwrap();
    assert!(fm.class_names.len() >= 2);
    // Region rows pool all the cuisines' recipes.
    assert_eq!(fm.len(), corpus.recipes.len());
    let (train, test) = split(&fm, 0.8, SEED).unwrap();
    assert_eq!(train.len() + test.len(), fm.len());
}

/// The exported DOT and GraphML renderings stay in sync with the graph.
#[test]
fn graph_exports_cover_all_formats() {
    let world = build_world();
    let sample = sample_balanced(&world.corpus, SAMPLE_N, SEED).unwrap();
    let matrix = ingredient_similarity_matrix(&sample, &world.corpus, 1).unwrap();
    let graph = build_similarity_graph(&matrix, &world.tables, 2).unwrap();
    for format in [GraphFormat::Dot, GraphFormat::GraphMl, GraphFormat::Json] {
        let text = export_graph(&graph, format).unwrap();
        assert!(!text.is_empty());
        for node in &graph.nodes {
            assert!(
                text.contains(&node.cuisine),
                "{} missing from {:?}",
                node.cuisine,
                format
            );
        }
    }
}
