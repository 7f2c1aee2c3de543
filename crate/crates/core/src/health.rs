//! Nutrition aggregation by country and its correlation with health
//! statistics: rating-weighted nutrient averages, Pearson and
//! Kendall tau-b coefficients, and bottom-k prefix curves.

use std::collections::BTreeMap;

use crate::corpus::country::{CountryTables, HealthStats};
use crate::corpus::{Nutrition, RecipeCorpus};
use crate::error::{Error, Result};

/// The nutrients tracked per country.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum NutrientKind {
    Calories,
    Protein,
    Fat,
    Carbohydrate,
    Sugar,
}

impl NutrientKind {
    pub const ALL: [NutrientKind; 5] = [
        NutrientKind::Calories,
        NutrientKind::Protein,
        NutrientKind::Fat,
        NutrientKind::Carbohydrate,
        NutrientKind::Sugar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NutrientKind::Calories => "calories",
            NutrientKind::Protein => "protein",
            NutrientKind::Fat => "fat",
            NutrientKind::Carbohydrate => "carbohydrate",
            NutrientKind::Sugar => "sugar",
        }
    }

    pub fn extract(self, n: &Nutrition) -> Option<f64> {
        match self {
            NutrientKind::Calories => n.calories,
            NutrientKind::Protein => n.protein,
            NutrientKind::Fat => n.fat,
            NutrientKind::Carbohydrate => n.carbohydrate,
            NutrientKind::Sugar => n.sugar,
        }
    }
}

impl std::str::FromStr for NutrientKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<NutrientKind> {
        NutrientKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim().to_lowercase())
            .ok_or_else(|| Error::InvalidArg(format!("unknown nutrient {s:?}")))
    }
}

/// The health measures countries report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MeasureKind {
    Obesity,
    Diabetes,
    Expenditure,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 3] = [
        MeasureKind::Obesity,
        MeasureKind::Diabetes,
        MeasureKind::Expenditure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Obesity => "obesity",
            MeasureKind::Diabetes => "diabetes",
            MeasureKind::Expenditure => "expenditure",
        }
    }

    pub fn extract(self, h: &HealthStats) -> f64 {
        match self {
            MeasureKind::Obesity => h.obesity_pct,
            MeasureKind::Diabetes => h.diabetes_pct,
            MeasureKind::Expenditure => h.health_expenditure_pct_gdp,
        }
    }
}

impl std::str::FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<MeasureKind> {
        MeasureKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim().to_lowercase())
            .ok_or_else(|| Error::InvalidArg(format!("unknown health measure {s:?}")))
    }
}

/// How recipes without a rating are weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingRatingPolicy {
    /// Weight by the mean rating over all rated recipes in the corpus
    /// (1 if the corpus has no ratings at all).
    #[default]
    CorpusMean,
    /// Weight 1, i.e. ignore ratings entirely for unrated recipes.
    Unit,
}

/// Rating-weighted nutrient averages for one country.
#[derive(Debug, Clone, PartialEq)]
pub struct CountryNutrition {
    pub country: String,
    /// Weighted mean per nutrient; absent when no pooled recipe
    /// reports that nutrient.
    pub averages: BTreeMap<NutrientKind, f64>,
    /// Total weight of the pooled recipes that carried nutrition.
    pub weights_used: f64,
    /// Number of pooled recipes that carried nutrition.
    pub n_recipes: usize,
}

/// Cuisines that could not be pooled into any country.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NutritionReport {
    pub skipped_cuisines: Vec<String>,
}

/// Pools every cuisine's recipes into its mapped countries and
/// computes rating-weighted nutrient means.
///
/// A cuisine mapped to several countries contributes its recipes to
/// each of them. Each nutrient averages only over recipes reporting
/// it: `sum(w_i * x_i) / sum(w_i)`, where `w_i` is the recipe rating
/// or the policy's fallback. Countries that end up with no
/// nutrition-carrying recipes are omitted.
pub fn country_nutrition(
    corpus: &RecipeCorpus,
    tables: &CountryTables,
    policy: MissingRatingPolicy,
) -> Result<(BTreeMap<String, CountryNutrition>, NutritionReport)> {
    let rated: Vec<f64> = corpus.recipes.iter().filter_map(|r| r.rating).collect();
    let fallback = match policy {
        MissingRatingPolicy::Unit => 1.0,
        MissingRatingPolicy::CorpusMean => {
            if rated.is_empty() {
                1.0
            } else {
                rated.iter().sum::<f64>() / rated.len() as f64
            }
        }
    };
    let weight_of = |rating: Option<f64>| -> f64 {
        match policy {
            MissingRatingPolicy::Unit => 1.0,
            MissingRatingPolicy::CorpusMean => rating.unwrap_or(fallback),
        }
    };

    struct Acc {
        wx: [f64; 5],
        w: [f64; 5],
        weights_used: f64,
        n_recipes: usize,
    }
    let mut acc: BTreeMap<String, Acc> = BTreeMap::new();
    let mut report = NutritionReport::default();
    for (cuisine, indices) in &corpus.cuisines {
        let countries = tables.countries_of(cuisine);
        if countries.is_empty() {
            report.skipped_cuisines.push(cuisine.clone());
            continue;
        }
        for country in countries {
            let entry = acc.entry(country.clone()).or_insert(Acc {
                wx: [0.0; 5],
                w: [0.0; 5],
                weights_used: 0.0,
                n_recipes: 0,
            });
            for &idx in indices {
                let recipe = &corpus.recipes[idx];
                let Some(nutrition) = &recipe.nutrition else {
                    continue;
                };
                let w = weight_of(recipe.rating);
                for (slot, kind) in NutrientKind::ALL.into_iter().enumerate() {
                    if let Some(value) = kind.extract(nutrition) {
                        entry.wx[slot] += w * value;
                        entry.w[slot] += w;
                    }
                }
                entry.weights_used += w;
                entry.n_recipes += 1;
            }
        }
    }
    let mut out = BTreeMap::new();
    for (country, a) in acc {
        if a.n_recipes == 0 {
            continue;
        }
        let mut averages = BTreeMap::new();
        for (slot, kind) in NutrientKind::ALL.into_iter().enumerate() {
            if a.w[slot] > 0.0 {
                averages.insert(kind, a.wx[slot] / a.w[slot]);
            }
        }
        out.insert(
            country.clone(),
            CountryNutrition {
                country,
                averages,
                weights_used: a.weights_used,
                n_recipes: a.n_recipes,
            },
        );
    }
    if out.is_empty() {
        return Err(Error::Data(
            "no recipe with nutrition mapped to any country".into(),
        ));
    }
    Ok((out, report))
}

fn check_pair(x: &[f64], y: &[f64], context: &'static str) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            context,
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::InvalidArg(format!(
            "{context} needs at least 3 observations, got {}",
            x.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArg(format!(
            "{context} requires finite observations"
        )));
    }
    Ok(())
}

/// Pearson product-moment correlation. Errors when either side has
/// zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y, "pearson")?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - mx;
        let dy = yi - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVariance { context: "pearson x" });
    }
    if syy == 0.0 {
        return Err(Error::ZeroVariance { context: "pearson y" });
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Pairs `i < j` with `values[i] > values[j]`, counted by merge sort.
fn count_inversions(values: &mut [f64], scratch: &mut [f64]) -> u64 {
    let n = values.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inversions = count_inversions(&mut values[..mid], scratch)
        + count_inversions(&mut values[mid..], scratch);
    // Merge, counting how many right-half elements jump left elements.
    let (left, right) = values.split_at(mid);
    let mut i = 0;
    let mut j = 0;
    let mut k = 0;
    while i < left.len() && j < right.len() {
        if right[j] < left[i] {
            inversions += (left.len() - i) as u64;
            scratch[k] = right[j];
            j += 1;
        } else {
            scratch[k] = left[i];
            i += 1;
        }
        k += 1;
    }
    while i < left.len() {
        scratch[k] = left[i];
        i += 1;
        k += 1;
    }
    while j < right.len() {
        scratch[k] = right[j];
        j += 1;
        k += 1;
    }
    values.copy_from_slice(&scratch[..n]);
    inversions
}

fn tied_pairs(sorted: &[f64]) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Kendall rank correlation with the tie correction (tau-b), computed
/// in `O(n log n)` by sorting on `x` and counting inversions in `y`.
/// Errors when either side is entirely tied.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y, "kendall_tau")?;
    let n = x.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        x[a].partial_cmp(&x[b])
            .expect("finite")
            .then(y[a].partial_cmp(&y[b]).expect("finite"))
    });

    // Tie counts among x, among y, and among (x, y) jointly.
    let xs_sorted: Vec<f64> = idx.iter().map(|&i| x[i]).collect();
    let n1 = tied_pairs(&xs_sorted);
    let mut ys_sorted: Vec<f64> = y.to_vec();
    ys_sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let n2 = tied_pairs(&ys_sorted);
    let mut n3 = 0u64;
    let mut run = 1u64;
    for w in idx.windows(2) {
        if x[w[0]] == x[w[1]] && y[w[0]] == y[w[1]] {
            run += 1;
        } else {
            n3 += run * (run - 1) / 2;
            run = 1;
        }
    }
    n3 += run * (run - 1) / 2;

    // Discordant pairs: inversions of y in x-order. Ties in x were
    // sorted by y, so an x-tied pair never counts; y-ties are not
    // strict inversions either.
    let mut ys: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
    let mut scratch = vec![0.0; n];
    let discordant = count_inversions(&mut ys, &mut scratch);

    let n0 = (n as u64) * (n as u64 - 1) / 2;
    if n0 == n1 {
        return Err(Error::AllTied { context: "kendall_tau x" });
    }
    if n0 == n2 {
        return Err(Error::AllTied { context: "kendall_tau y" });
    }
    let concordant = n0 - n1 - n2 + n3 - discordant;
    let numerator = concordant as f64 - discordant as f64;
    let denominator = ((n0 - n1) as f64 * (n0 - n2) as f64).sqrt();
    Ok(numerator / denominator)
}

/// One correlation-table row: a health measure against a nutrient.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationRow {
    pub measure: MeasureKind,
    pub nutrient: NutrientKind,
    pub pearson: f64,
    pub kendall_tau: f64,
    /// Countries contributing to this pair.
    pub n: usize,
    /// Countries with nutrition data that lacked this pairing.
    pub dropped: usize,
}

fn paired_values(
    nutrition: &BTreeMap<String, CountryNutrition>,
    tables: &CountryTables,
    nutrient: NutrientKind,
    measure: MeasureKind,
) -> Vec<(String, f64, f64)> {
    let mut rows = Vec::new();
    for (country, cn) in nutrition {
        let Some(&avg) = cn.averages.get(&nutrient) else {
            continue;
        };
        let Some(stats) = tables.health.get(country) else {
            continue;
        };
        rows.push((country.clone(), avg, measure.extract(stats)));
    }
    rows
}

/// The full measure-by-nutrient correlation table, in canonical order
/// (measures outer, nutrients inner). Coefficient preconditions
/// propagate as errors.
pub fn correlation_table(
    nutrition: &BTreeMap<String, CountryNutrition>,
    tables: &CountryTables,
) -> Result<Vec<CorrelationRow>> {
    let mut rows = Vec::with_capacity(MeasureKind::ALL.len() * NutrientKind::ALL.len());
    for measure in MeasureKind::ALL {
        for nutrient in NutrientKind::ALL {
            let pairs = paired_values(nutrition, tables, nutrient, measure);
            let xs: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let ys: Vec<f64> = pairs.iter().map(|p| p.2).collect();
            rows.push(CorrelationRow {
                measure,
                nutrient,
                pearson: pearson(&xs, &ys)?,
                kendall_tau: kendall_tau(&xs, &ys)?,
                n: pairs.len(),
                dropped: nutrition.len() - pairs.len(),
            });
        }
    }
    Ok(rows)
}

/// Prefix means of a health measure over countries sorted by a
/// nutrient average (ascending, ties by country name): entry `k-1`
/// averages the measure over the `k` lowest-nutrient countries.
pub fn bottomk_curve(
    nutrition: &BTreeMap<String, CountryNutrition>,
    tables: &CountryTables,
    nutrient: NutrientKind,
    measure: MeasureKind,
) -> Result<Vec<(usize, f64)>> {
    let mut pairs = paired_values(nutrition, tables, nutrient, measure);
    if pairs.is_empty() {
        return Err(Error::Data(format!(
            "no country pairs {} with {}",
            nutrient.name(),
            measure.name()
        )));
    }
    pairs.sort_by(|a, b| {
        a.1.partial_cmp(&b.1)
            .expect("averages are finite")
            .then_with(|| a.0.cmp(&b.0))
    });
    let mut out = Vec::with_capacity(pairs.len());
    let mut running = 0.0;
    for (k, (_, _, value)) in pairs.iter().enumerate() {
        running += value;
        out.push((k + 1, running / (k + 1) as f64));
    }
    Ok(out)
}
