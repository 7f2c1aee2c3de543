//! Prediction and evaluation shared by both classifiers: accuracy,
//! per-class precision/recall/F1, macro-F1, and the confusion matrix
//! with each class's strongest confusion.

use ndarray::Array2;
use serde::Serialize;

use crate::classify::{FeatureMatrix, LinearModel, MlpModel};
use crate::error::{Error, Result};

/// Anything that can score sparse ingredient rows into class ids.
pub trait Classifier {
    fn class_names(&self) -> &[String];

    /// Class id per row; tied scores resolve to the lowest class id.
    fn predict(&self, fm: &FeatureMatrix) -> Result<Vec<usize>>;
}

/// First index holding the maximum value (strict comparison, so the
/// earliest maximum wins).
fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

impl Classifier for LinearModel {
    fn class_names(&self) -> &[String] {
        &self.class_names
    }

    fn predict(&self, fm: &FeatureMatrix) -> Result<Vec<usize>> {
        if fm.v != self.v {
            return Err(Error::DimensionMismatch {
                context: "svm features",
                expected: self.v,
                got: fm.v,
            });
        }
        Ok(fm.rows.iter().map(|row| argmax(&self.scores(row))).collect())
    }
}

impl Classifier for MlpModel {
    fn class_names(&self) -> &[String] {
        &self.class_names
    }

    fn predict(&self, fm: &FeatureMatrix) -> Result<Vec<usize>> {
        if fm.v != self.v {
            return Err(Error::DimensionMismatch {
                context: "mlp features",
                expected: self.v,
                got: fm.v,
            });
        }
        let mut preds = Vec::with_capacity(fm.len());
        // Chunked to bound the dense activation memory.
        let all: Vec<usize> = (0..fm.len()).collect();
        for chunk in all.chunks(512) {
            let x: Array2<f64> = fm.dense_batch(chunk);
            let logits = self.logits(&x);
            for row in logits.rows() {
                preds.push(argmax(row.as_slice().expect("row is contiguous")));
            }
        }
        Ok(preds)
    }
}

/// Per-class evaluation entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassEval {
    pub name: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Rows whose true class this is.
    pub support: usize,
}

/// Aggregate evaluation of predictions against true labels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub accuracy: f64,
    /// Mean F1 over all classes, counting absent or never-predicted
    /// classes as 0.
    pub macro_f1: f64,
    pub per_class: Vec<ClassEval>,
    /// `confusion[actual][predicted]` row counts.
    pub confusion: Vec<Vec<u64>>,
    /// Per class, the most frequent wrong prediction (lowest class id
    /// on ties), or `None` when the class is never misclassified.
    pub top_confusion: Vec<Option<usize>>,
}

/// Scores a prediction vector against the matrix's labels.
pub fn evaluate_predictions(predictions: &[usize], test: &FeatureMatrix) -> Result<EvalReport> {
    if predictions.len() != test.len() {
        return Err(Error::DimensionMismatch {
            context: "predictions",
            expected: test.len(),
            got: predictions.len(),
        });
    }
    if test.is_empty() {
        return Err(Error::Data("evaluation set is empty".into()));
    }
    let k = test.class_names.len();
    let mut confusion = vec![vec![0u64; k]; k];
    for (&pred, &actual) in predictions.iter().zip(&test.labels) {
        if pred >= k {
            return Err(Error::Data(format!(
                "prediction {pred} is outside the {k} known classes"
            )));
        }
        confusion[actual][pred] += 1;
    }
    let mut correct = 0u64;
    let mut per_class = Vec::with_capacity(k);
    let mut macro_f1 = 0.0;
    for c in 0..k {
        let tp = confusion[c][c];
        correct += tp;
        let support: u64 = confusion[c].iter().sum();
        let predicted: u64 = (0..k).map(|r| confusion[r][c]).sum();
        let precision = if predicted > 0 {
            tp as f64 / predicted as f64
        } else {
            0.0
        };
        let recall = if support > 0 {
            tp as f64 / support as f64
        } else {
            0.0
        };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        macro_f1 += f1;
        per_class.push(ClassEval {
            name: test.class_names[c].clone(),
            precision,
            recall,
            f1,
            support: support as usize,
        });
    }
    macro_f1 /= k as f64;
    // Largest off-diagonal count per row; ties keep the lowest id.
    let top_confusion: Vec<Option<usize>> = (0..k)
        .map(|actual| {
            let mut best: Option<usize> = None;
            for j in 0..k {
                if j == actual || confusion[actual][j] == 0 {
                    continue;
                }
                match best {
                    None => best = Some(j),
                    Some(b) if confusion[actual][j] > confusion[actual][b] => best = Some(j),
                    _ => {}
                }
            }
            best
        })
        .collect();
    Ok(EvalReport {
        accuracy: correct as f64 / test.len() as f64,
        macro_f1,
        per_class,
        confusion,
        top_confusion,
    })
}

/// Predicts with the model and scores the result.
pub fn evaluate<M: Classifier>(model: &M, test: &FeatureMatrix) -> Result<EvalReport> {
    if model.class_names() != test.class_names {
        return Err(Error::Data(
            "model and evaluation set disagree on class names".into(),
        ));
    }
    let predictions = model.predict(test)?;
    evaluate_predictions(&predictions, test)
}
