//! Model (de)serialization. Both classifiers share one JSON envelope
//! tagged `culina-model/1`; optimizer accumulators are deliberately
//! not part of the format, so a reloaded model predicts identically
//! but resumes training with fresh state.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::classify::eval::Classifier;
use crate::classify::mlp::Dense;
use crate::classify::{FeatureMatrix, LabelKind, LinearModel, MlpModel};
use crate::error::{Error, Result};

pub const MODEL_FORMAT: &str = "culina-model/1";

/// A trained model of either kind, ready to save or just loaded.
#[derive(Debug, Clone, PartialEq)]
pub enum SavedModel {
    Svm(LinearModel),
    Mlp(MlpModel),
}

impl SavedModel {
    pub fn kind_name(&self) -> &'static str {
        match self {
            SavedModel::Svm(_) => "svm",
            SavedModel::Mlp(_) => "mlp",
        }
    }

    pub fn label_kind(&self) -> LabelKind {
        match self {
            SavedModel::Svm(m) => m.label_kind,
            SavedModel::Mlp(m) => m.label_kind,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let file = match self {
            SavedModel::Svm(m) => ModelFile {
                format: MODEL_FORMAT.to_string(),
                kind: "svm".to_string(),
                label_kind: m.label_kind.name().to_string(),
                classes: m.class_names.clone(),
                v: m.v,
                svm: Some(SvmSection {
                    weights: m.weights.clone(),
                    biases: m.biases.clone(),
                    class_weights: m.class_weights.clone(),
                }),
                mlp: None,
            },
            SavedModel::Mlp(m) => ModelFile {
                format: MODEL_FORMAT.to_string(),
                kind: "mlp".to_string(),
                label_kind: m.label_kind.name().to_string(),
                classes: m.class_names.clone(),
                v: m.v,
                svm: None,
                mlp: Some(MlpSection {
                    hidden: m.hidden.clone(),
                    layers: m
                        .layers
                        .iter()
                        .map(|layer| LayerSection {
                            w: layer.w.rows().into_iter().map(|r| r.to_vec()).collect(),
                            b: layer.b.to_vec(),
                        })
                        .collect(),
                }),
            },
        };
        serde_json::to_string(&file).map_err(|e| Error::Data(format!("model encode: {e}")))
    }

    pub fn from_json(text: &str) -> Result<SavedModel> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| Error::Data(format!("model JSON: {e}")))?;
        if file.format != MODEL_FORMAT {
            return Err(Error::Data(format!(
                "unsupported model format {:?}, expected {MODEL_FORMAT:?}",
                file.format
            )));
        }
        let label_kind = match file.label_kind.as_str() {
            "cuisine" => LabelKind::Cuisine,
            "region" => LabelKind::Region,
            other => return Err(Error::Data(format!("unknown label kind {other:?}"))),
        };
        if file.classes.len() < 2 {
            return Err(Error::Data("model must carry at least two classes".into()));
        }
        match file.kind.as_str() {
            "svm" => {
                let section = file
                    .svm
                    .ok_or_else(|| Error::Data("svm model lacks its weight section".into()))?;
                let k = file.classes.len();
                if section.weights.len() != k
                    || section.biases.len() != k
                    || section.class_weights.len() != k
                {
                    return Err(Error::DimensionMismatch {
                        context: "svm class count",
                        expected: k,
                        got: section.weights.len(),
                    });
                }
                if section.weights.iter().any(|w| w.len() != file.v) {
                    return Err(Error::DimensionMismatch {
                        context: "svm weight width",
                        expected: file.v,
                        got: section.weights.iter().map(Vec::len).find(|&l| l != file.v).unwrap_or(0),
                    });
                }
                Ok(SavedModel::Svm(LinearModel {
                    label_kind,
                    class_names: file.classes,
                    v: file.v,
                    weights: section.weights,
                    biases: section.biases,
                    class_weights: section.class_weights,
                }))
            }
            "mlp" => {
                let section = file
                    .mlp
                    .ok_or_else(|| Error::Data("mlp model lacks its layer section".into()))?;
                let mut layers = Vec::with_capacity(section.layers.len());
                for layer in section.layers {
                    let rows = layer.w.len();
                    let cols = layer.w.first().map_or(0, Vec::len);
                    if layer.w.iter().any(|r| r.len() != cols) {
                        return Err(Error::Data("ragged weight matrix in model file".into()));
                    }
                    let flat: Vec<f64> = layer.w.into_iter().flatten().collect();
                    let w = Array2::from_shape_vec((rows, cols), flat)
                        .map_err(|e| Error::Data(format!("weight shape: {e}")))?;
                    layers.push(Dense {
                        w,
                        b: Array1::from_vec(layer.b),
                    });
                }
                let model = MlpModel::from_layers(
                    label_kind,
                    file.classes,
                    file.v,
                    section.hidden,
                    layers,
                )?;
                Ok(SavedModel::Mlp(model))
            }
            other => Err(Error::Data(format!("unknown model kind {other:?}"))),
        }
    }
}

impl Classifier for SavedModel {
    fn class_names(&self) -> &[String] {
        match self {
            SavedModel::Svm(m) => &m.class_names,
            SavedModel::Mlp(m) => &m.class_names,
        }
    }

    fn predict(&self, fm: &FeatureMatrix) -> Result<Vec<usize>> {
        match self {
            SavedModel::Svm(m) => m.predict(fm),
            SavedModel::Mlp(m) => m.predict(fm),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    kind: String,
    label_kind: String,
    classes: Vec<String>,
    v: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    svm: Option<SvmSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    mlp: Option<MlpSection>,
}

#[derive(Serialize, Deserialize)]
struct SvmSection {
    weights: Vec<Vec<f64>>,
    biases: Vec<f64>,
    class_weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MlpSection {
    hidden: Vec<usize>,
    layers: Vec<LayerSection>,
}

#[derive(Serialize, Deserialize)]
struct LayerSection {
    w: Vec<Vec<f64>>,
    b: Vec<f64>,
}
