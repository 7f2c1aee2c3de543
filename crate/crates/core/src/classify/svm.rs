//! One-vs-rest linear SVM trained by stochastic subgradient descent
//! on the hinge loss with L2 regularization and inverse-frequency
//! class balancing.
//!
//! The intercept is trained as an always-on feature inside the L2
//! penalty (the augmented-bias formulation). With the `lr / (l2 * t)`
//! step schedule the first steps are enormous, and only parameters
//! that share the multiplicative shrink recover from them; an
//! unpenalized intercept would random-walk in the early epochs and
//! freeze wherever the decayed steps leave it.

use rand::seq::SliceRandom;

use crate::classify::{FeatureMatrix, LabelKind, TrainReport};
use crate::error::{Error, Result};
use crate::seed;

/// Hyperparameters for [`train_svm`].
///
/// The step size at update `t` (counted per binary problem) is
/// `lr / (l2 * t)`, so `lr` scales the whole schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmConfig {
    pub epochs: usize,
    pub lr: f64,
    pub l2: f64,
    pub seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig {
            epochs: 20,
            lr: 0.5,
            l2: 1e-4,
            seed: 0,
        }
    }
}

/// K binary max-margin separators sharing one vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub label_kind: LabelKind,
    pub class_names: Vec<String>,
    pub v: usize,
    /// One weight vector per class, `K x V`.
    pub weights: Vec<Vec<f64>>,
    /// Intercept per class (trained under the shared L2 penalty).
    pub biases: Vec<f64>,
    /// Balanced example weight per class: `N / (K * n_class)`.
    pub class_weights: Vec<f64>,
}

impl LinearModel {
    /// Raw decision scores for one sparse row, one per class.
    pub fn scores(&self, row: &[u32]) -> Vec<f64> {
        (0..self.class_names.len())
            .map(|k| {
                let w = &self.weights[k];
                self.biases[k] + row.iter().map(|&j| w[j as usize]).sum::<f64>()
            })
            .collect()
    }
}

/// Trains one binary one-vs-rest problem and returns
/// `(weights, bias, per-epoch losses)`.
///
/// Isolated so that training the K problems jointly is bit-for-bit
/// identical to training each on its own: every problem draws from
/// an RNG derived from the seed and its class name only.
pub(crate) fn train_binary(
    train: &FeatureMatrix,
    class_id: usize,
    example_weights: &[f64],
    config: &SvmConfig,
) -> Result<(Vec<f64>, f64, Vec<f64>)> {
    let n = train.len();
    let mut w = vec![0.0f64; train.v];
    let mut b = 0.0f64;
    let mut rng = seed::rng(
        config.seed,
        &format!("svm:{}", train.class_names[class_id]),
    );
    let mut order: Vec<usize> = (0..n).collect();
    let mut t = 0u64;
    let mut epoch_losses = Vec::with_capacity(config.epochs);
    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = config.lr / (config.l2 * t as f64);
            let y = if train.labels[i] == class_id { 1.0 } else { -1.0 };
            let row = &train.rows[i];
            let score = b + row.iter().map(|&j| w[j as usize]).sum::<f64>();
            let shrink = 1.0 - eta * config.l2;
            for wj in w.iter_mut() {
                *wj *= shrink;
            }
            b *= shrink;
            if y * score < 1.0 {
                let step = eta * example_weights[i] * y;
                for &j in row {
                    w[j as usize] += step;
                }
                b += step;
            }
        }
        let loss = binary_objective(train, class_id, example_weights, &w, b, config.l2);
        if !loss.is_finite() {
            return Err(Error::Divergence(format!(
                "SVM loss for class {:?} became non-finite at epoch {}",
                train.class_names[class_id],
                epoch + 1
            )));
        }
        epoch_losses.push(loss);
    }
    Ok((w, b, epoch_losses))
}

fn binary_objective(
    train: &FeatureMatrix,
    class_id: usize,
    example_weights: &[f64],
    w: &[f64],
    b: f64,
    l2: f64,
) -> f64 {
    let reg = 0.5 * l2 * (b * b + w.iter().map(|x| x * x).sum::<f64>());
    let mut hinge = 0.0;
    for i in 0..train.len() {
        let y = if train.labels[i] == class_id { 1.0 } else { -1.0 };
        let score = b + train.rows[i].iter().map(|&j| w[j as usize]).sum::<f64>();
        hinge += example_weights[i] * (1.0 - y * score).max(0.0);
    }
    reg + hinge / train.len() as f64
}

/// Trains the one-vs-rest SVM. Requires at least two classes with
/// training rows; examples are weighted by `N / (K * n_class)` so
/// every class contributes equal total mass.
pub fn train_svm(
    train: &FeatureMatrix,
    config: &SvmConfig,
) -> Result<(LinearModel, TrainReport)> {
    if train.is_empty() {
        return Err(Error::Data("training set is empty".into()));
    }
    if config.epochs == 0 {
        return Err(Error::InvalidArg("epochs must be at least 1".into()));
    }
    if !(config.lr.is_finite() && config.lr > 0.0) {
        return Err(Error::InvalidArg(format!(
            "learning rate must be positive, got {}",
            config.lr
        )));
    }
    if !(config.l2.is_finite() && config.l2 > 0.0) {
        return Err(Error::InvalidArg(format!(
            "l2 strength must be positive, got {}",
            config.l2
        )));
    }
    let counts = train.class_counts();
    let k = train.class_names.len();
    if counts.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(Error::Data(
            "training data holds fewer than two classes".into(),
        ));
    }
    let n = train.len() as f64;
    let mut class_weights = Vec::with_capacity(k);
    for (name, &count) in train.class_names.iter().zip(&counts) {
        if count == 0 {
            return Err(Error::Data(format!(
                "class {name:?} has no training rows"
            )));
        }
        class_weights.push(n / (k as f64 * count as f64));
    }
    let example_weights: Vec<f64> = train
        .labels
        .iter()
        .map(|&label| class_weights[label])
        .collect();

    let mut weights = Vec::with_capacity(k);
    let mut biases = Vec::with_capacity(k);
    let mut epoch_losses = vec![0.0f64; config.epochs];
    for class_id in 0..k {
        let (w, b, losses) = train_binary(train, class_id, &example_weights, config)?;
        weights.push(w);
        biases.push(b);
        for (total, loss) in epoch_losses.iter_mut().zip(&losses) {
            *total += loss;
        }
    }
    Ok((
        LinearModel {
            label_kind: train.label_kind,
            class_names: train.class_names.clone(),
            v: train.v,
            weights,
            biases,
            class_weights,
        },
        TrainReport { epoch_losses },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::eval::Classifier;
    use rand::Rng;

    /// Hand-built sparse matrix: class 0 rows contain feature 0,
    /// class 1 rows contain feature 1, plus shared noise columns.
    fn matrix(rows: Vec<Vec<u32>>, labels: Vec<usize>, v: usize, names: &[&str]) -> FeatureMatrix {
        let ids = (0..rows.len()).map(|i| format!("r{i:04}")).collect();
        FeatureMatrix {
            label_kind: LabelKind::Cuisine,
            v,
            class_names: names.iter().map(|s| s.to_string()).collect(),
            rows,
            labels,
            recipe_ids: ids,
        }
    }

    fn separable(per_class: usize) -> FeatureMatrix {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..per_class {
            rows.push(vec![0, 2 + (i % 3) as u32]);
            labels.push(0);
            rows.push(vec![1, 2 + ((i + 1) % 3) as u32]);
            labels.push(1);
        }
        matrix(rows, labels, 5, &["left", "right"])
    }

    #[test]
    fn separable_classes_are_fit_perfectly() {
        let fm = separable(30);
        let (model, report) = train_svm(&fm, &SvmConfig::default()).unwrap();
        let preds = model.predict(&fm).unwrap();
        assert_eq!(preds, fm.labels);
        assert_eq!(report.epoch_losses.len(), 20);
        assert!(report.epoch_losses.iter().all(|l| l.is_finite()));
        assert!(report.epoch_losses.last().unwrap() < report.epoch_losses.first().unwrap());
    }

    #[test]
    fn single_class_data_is_rejected() {
        let fm = matrix(vec![vec![0], vec![1]], vec![0, 0], 2, &["only"]);
        assert!(matches!(
            train_svm(&fm, &SvmConfig::default()),
            Err(Error::Data(_))
        ));
    }

    #[test]
    fn class_weights_follow_the_balancing_formula() {
        let mut rows = vec![vec![0u32]; 6];
        rows.extend(vec![vec![1u32]; 2]);
        let labels = vec![0, 0, 0, 0, 0, 0, 1, 1];
        let fm = matrix(rows, labels, 2, &["big", "small"]);
        let (model, _) = train_svm(&fm, &SvmConfig { epochs: 1, ..Default::default() }).unwrap();
        // N = 8, K = 2: big -> 8 / (2*6), small -> 8 / (2*2).
        assert_eq!(model.class_weights, vec![8.0 / 12.0, 2.0]);
    }

    #[test]
    fn training_is_deterministic() {
        let fm = separable(25);
        let config = SvmConfig::default();
        let (m1, r1) = train_svm(&fm, &config).unwrap();
        let (m2, r2) = train_svm(&fm, &config).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(r1, r2);
        let (m3, _) = train_svm(&fm, &SvmConfig { seed: 5, ..config }).unwrap();
        assert_ne!(m1.weights, m3.weights);
    }

    #[test]
    fn joint_training_equals_training_each_class_alone() {
        let mut rng = crate::seed::rng(31, "svm-decompose");
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..90 {
            let class = i % 3;
            let mut row = vec![class as u32];
            for extra in 3..10u32 {
                if rng.random_range(0.0f64..1.0) < 0.3 {
                    row.push(extra);
                }
            }
            rows.push(row);
            labels.push(class);
        }
        let fm = matrix(rows, labels, 10, &["a", "b", "c"]);
        let config = SvmConfig::default();
        let (joint, _) = train_svm(&fm, &config).unwrap();
        let counts = fm.class_counts();
        let class_weights: Vec<f64> = counts
            .iter()
            .map(|&c| fm.len() as f64 / (3.0 * c as f64))
            .collect();
        let example_weights: Vec<f64> =
            fm.labels.iter().map(|&l| class_weights[l]).collect();
        for class_id in 0..3 {
            let (w, b, _) = train_binary(&fm, class_id, &example_weights, &config).unwrap();
            assert_eq!(joint.weights[class_id], w);
            assert_eq!(joint.biases[class_id], b);
        }
    }

    /// Noisy two-class generator with overlapping support.
    fn noisy_rows(
        n: usize,
        class: usize,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> Vec<Vec<u32>> {
        (0..n)
            .map(|_| {
                let mut row = Vec::new();
                for j in 0..20u32 {
                    // Features 0..10 favor class 0, 10..20 favor class 1,
                    // with heavy overlap.
                    let p = if (j < 10) == (class == 0) { 0.45 } else { 0.25 };
                    if rng.random_range(0.0f64..1.0) < p {
                        row.push(j);
                    }
                }
                if row.is_empty() {
                    row.push(if class == 0 { 0 } else { 19 });
                }
                row
            })
            .collect()
    }

    #[test]
    fn duplicating_the_minority_matches_balanced_weighting() {
        let mut rng = crate::seed::rng(32, "svm-duplication");
        let major = noisy_rows(200, 0, &mut rng);
        let minor = noisy_rows(50, 1, &mut rng);
        let test_rows: Vec<Vec<u32>> = noisy_rows(150, 0, &mut rng)
            .into_iter()
            .chain(noisy_rows(150, 1, &mut rng))
            .collect();
        let test_labels: Vec<usize> = std::iter::repeat_n(0, 150)
            .chain(std::iter::repeat_n(1, 150))
            .collect();
        let test = matrix(test_rows, test_labels, 20, &["a", "b"]);

        let original = {
            let mut rows = major.clone();
            rows.extend(minor.iter().cloned());
            let labels = [vec![0; 200], vec![1; 50]].concat();
            matrix(rows, labels, 20, &["a", "b"])
        };
        let duplicated = {
            let mut rows = major.clone();
            rows.extend(minor.iter().cloned());
            rows.extend(minor.iter().cloned());
            let labels = [vec![0; 200], vec![1; 100]].concat();
            matrix(rows, labels, 20, &["a", "b"])
        };
        let config = SvmConfig::default();
        let accuracy = |fm: &FeatureMatrix| {
            let (model, _) = train_svm(fm, &config).unwrap();
            let preds = model.predict(&test).unwrap();
            preds
                .iter()
                .zip(&test.labels)
                .filter(|(p, l)| p == l)
                .count() as f64
                / test.len() as f64
        };
        let acc_original = accuracy(&original);
        let acc_duplicated = accuracy(&duplicated);
        assert!(acc_original > 0.7, "weak baseline: {acc_original}");
        assert!(
            (acc_original - acc_duplicated).abs() <= 0.02,
            "accuracies diverge: {acc_original} vs {acc_duplicated}"
        );
    }

    #[test]
    fn config_bounds_are_enforced() {
        let fm = separable(5);
        for config in [
            SvmConfig { epochs: 0, ..Default::default() },
            SvmConfig { lr: 0.0, ..Default::default() },
            SvmConfig { l2: -1.0, ..Default::default() },
        ] {
            assert!(matches!(
                train_svm(&fm, &config),
                Err(Error::InvalidArg(_))
            ));
        }
    }
}
