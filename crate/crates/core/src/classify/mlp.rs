//! Feed-forward softmax classifier trained with mini-batch gradient
//! descent, inverted dropout, and the Adadelta step-size rule.

use ndarray::{Array1, Array2, Axis, Zip};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::classify::{FeatureMatrix, LabelKind, TrainReport};
use crate::error::{Error, Result};
use crate::seed;

/// Hidden layer widths used when the config does not override them.
pub const DEFAULT_HIDDEN: [usize; 4] = [1000, 1000, 500, 500];

/// Hyperparameters for [`train_mlp`].
#[derive(Debug, Clone, PartialEq)]
pub struct MlpConfig {
    pub epochs: usize,
    pub batch: usize,
    /// Probability of zeroing a hidden activation during training;
    /// inverted scaling keeps the inference path untouched.
    pub dropout: f64,
    /// Adadelta decay.
    pub rho: f64,
    /// Adadelta conditioning constant.
    pub eps: f64,
    pub seed: u64,
    pub hidden: Vec<usize>,
}

impl Default for MlpConfig {
    fn default() -> Self {
        MlpConfig {
            epochs: 30,
            batch: 128,
            dropout: 0.5,
            rho: 0.95,
            eps: 1e-6,
            seed: 0,
            hidden: DEFAULT_HIDDEN.to_vec(),
        }
    }
}

/// One affine layer; `w` is `out x in`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub w: Array2<f64>,
    pub b: Array1<f64>,
}

#[derive(Debug, Clone, PartialEq)]
struct LayerOpt {
    eg2_w: Array2<f64>,
    ed2_w: Array2<f64>,
    eg2_b: Array1<f64>,
    ed2_b: Array1<f64>,
}

impl LayerOpt {
    fn zeros_like(layer: &Dense) -> LayerOpt {
        LayerOpt {
            eg2_w: Array2::zeros(layer.w.raw_dim()),
            ed2_w: Array2::zeros(layer.w.raw_dim()),
            eg2_b: Array1::zeros(layer.b.raw_dim()),
            ed2_b: Array1::zeros(layer.b.raw_dim()),
        }
    }
}

/// Fully-connected ReLU network with a softmax output layer.
///
/// The Adadelta accumulators live with the model for the duration of
/// training but are not part of its serialized form.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    pub label_kind: LabelKind,
    pub class_names: Vec<String>,
    pub v: usize,
    pub hidden: Vec<usize>,
    /// Hidden layers followed by the output layer.
    pub layers: Vec<Dense>,
    opt: Vec<LayerOpt>,
}

impl MlpModel {
    /// Glorot-uniform initialization; layer `i` draws from an RNG
    /// derived from the seed and its position, biases start at zero.
    pub fn new(
        label_kind: LabelKind,
        class_names: Vec<String>,
        v: usize,
        hidden: &[usize],
        seed: u64,
    ) -> Result<MlpModel> {
        if v == 0 {
            return Err(Error::InvalidArg("input dimension must be positive".into()));
        }
        if class_names.len() < 2 {
            return Err(Error::Data("need at least two classes".into()));
        }
        if hidden.iter().any(|&h| h == 0) {
            return Err(Error::InvalidArg("hidden layer sizes must be positive".into()));
        }
        let mut dims = vec![v];
        dims.extend_from_slice(hidden);
        dims.push(class_names.len());
        let mut layers = Vec::with_capacity(dims.len() - 1);
        for i in 0..dims.len() - 1 {
            let (fan_in, fan_out) = (dims[i], dims[i + 1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            let mut rng = seed::rng(seed, &format!("mlp:init:{i}"));
            // Explicit row-major fill keeps the draw order independent
            // of ndarray internals.
            let mut data = Vec::with_capacity(fan_out * fan_in);
            for _ in 0..fan_out * fan_in {
                data.push(rng.random_range(-limit..limit));
            }
            let w = Array2::from_shape_vec((fan_out, fan_in), data).expect("shape matches");
            layers.push(Dense {
                w,
                b: Array1::zeros(fan_out),
            });
        }
        let opt = layers.iter().map(LayerOpt::zeros_like).collect();
        Ok(MlpModel {
            label_kind,
            class_names,
            v,
            hidden: hidden.to_vec(),
            layers,
            opt,
        })
    }

    /// Rebuilds a model from bare layers (deserialization); optimizer
    /// accumulators restart at zero.
    pub fn from_layers(
        label_kind: LabelKind,
        class_names: Vec<String>,
        v: usize,
        hidden: Vec<usize>,
        layers: Vec<Dense>,
    ) -> Result<MlpModel> {
        let mut dims = vec![v];
        dims.extend_from_slice(&hidden);
        dims.push(class_names.len());
        if layers.len() + 1 != dims.len() {
            return Err(Error::DimensionMismatch {
                context: "mlp layers",
                expected: dims.len() - 1,
                got: layers.len(),
            });
        }
        for (i, layer) in layers.iter().enumerate() {
            if layer.w.nrows() != dims[i + 1]
                || layer.w.ncols() != dims[i]
                || layer.b.len() != dims[i + 1]
            {
                return Err(Error::DimensionMismatch {
                    context: "mlp layer shape",
                    expected: dims[i + 1],
                    got: layer.w.nrows(),
                });
            }
        }
        let opt = layers.iter().map(LayerOpt::zeros_like).collect();
        Ok(MlpModel {
            label_kind,
            class_names,
            v,
            hidden,
            layers,
            opt,
        })
    }

    /// Inference forward pass: logits for a dense batch.
    pub fn logits(&self, x: &Array2<f64>) -> Array2<f64> {
        let mut a = x.clone();
        for (i, layer) in self.layers.iter().enumerate() {
            let mut z = a.dot(&layer.w.t());
            z += &layer.b;
            if i + 1 < self.layers.len() {
                z.mapv_inplace(|v| v.max(0.0));
            }
            a = z;
        }
        a
    }

    /// Mean cross-entropy and parameter gradients for one batch.
    ///
    /// `masks` supplies one inverted-dropout mask per hidden layer
    /// (entries `0` or `1/keep`); `None` runs the exact inference
    /// forward pass, which is what gradient checking needs.
    pub fn loss_and_grad(
        &self,
        x: &Array2<f64>,
        labels: &[usize],
        masks: Option<&[Array2<f64>]>,
    ) -> Result<(f64, Vec<Dense>)> {
        let b = x.nrows();
        if labels.len() != b {
            return Err(Error::DimensionMismatch {
                context: "mlp batch labels",
                expected: b,
                got: labels.len(),
            });
        }
        if let Some(m) = masks {
            if m.len() != self.layers.len() - 1 {
                return Err(Error::DimensionMismatch {
                    context: "mlp dropout masks",
                    expected: self.layers.len() - 1,
                    got: m.len(),
                });
            }
        }
        let k = self.class_names.len();
        if labels.iter().any(|&y| y >= k) {
            return Err(Error::Data("label out of class range".into()));
        }

        // Forward, keeping pre-activations and activations.
        let mut activations: Vec<Array2<f64>> = vec![x.clone()];
        let mut zs: Vec<Array2<f64>> = Vec::with_capacity(self.layers.len());
        for (i, layer) in self.layers.iter().enumerate() {
            let mut z = activations[i].dot(&layer.w.t());
            z += &layer.b;
            if i + 1 < self.layers.len() {
                let mut a = z.mapv(|v| v.max(0.0));
                if let Some(m) = masks {
                    a *= &m[i];
                }
                zs.push(z);
                activations.push(a);
            } else {
                zs.push(z);
            }
        }
        let logits = zs.last().expect("at least one layer");

        // Row-stable softmax cross-entropy.
        let mut loss = 0.0;
        let mut dlogits = Array2::zeros(logits.raw_dim());
        for (i, row) in logits.axis_iter(Axis(0)).enumerate() {
            let y = labels[i];
            let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lse = max + row.iter().map(|&v| (v - max).exp()).sum::<f64>().ln();
            loss += lse - row[y];
            let mut drow = dlogits.row_mut(i);
            for (j, d) in drow.iter_mut().enumerate() {
                let p = (row[j] - lse).exp();
                *d = (p - if j == y { 1.0 } else { 0.0 }) / b as f64;
            }
        }
        loss /= b as f64;
        if !loss.is_finite() {
            return Err(Error::Divergence("cross-entropy loss is not finite".into()));
        }

        // Backward.
        let mut grads: Vec<Dense> = Vec::with_capacity(self.layers.len());
        let mut dz = dlogits;
        for i in (0..self.layers.len()).rev() {
            let dw = dz.t().dot(&activations[i]);
            let db = dz.sum_axis(Axis(0));
            if i > 0 {
                let mut da = dz.dot(&self.layers[i].w);
                if let Some(m) = masks {
                    da *= &m[i - 1];
                }
                Zip::from(&mut da).and(&zs[i - 1]).for_each(|d, &z| {
                    if z <= 0.0 {
                        *d = 0.0;
                    }
                });
                dz = da;
            }
            grads.push(Dense { w: dw, b: db });
        }
        grads.reverse();
        Ok((loss, grads))
    }

    fn adadelta_update(&mut self, grads: &[Dense], rho: f64, eps: f64) {
        for ((layer, opt), grad) in self.layers.iter_mut().zip(&mut self.opt).zip(grads) {
            Zip::from(&mut layer.w)
                .and(&mut opt.eg2_w)
                .and(&mut opt.ed2_w)
                .and(&grad.w)
                .for_each(|w, eg2, ed2, &g| {
                    *w += adadelta_scalar(eg2, ed2, g, rho, eps);
                });
            Zip::from(&mut layer.b)
                .and(&mut opt.eg2_b)
                .and(&mut opt.ed2_b)
                .and(&grad.b)
                .for_each(|w, eg2, ed2, &g| {
                    *w += adadelta_scalar(eg2, ed2, g, rho, eps);
                });
        }
    }
}

/// One Adadelta step for a single parameter. Updates the accumulators
/// in place and returns the (signed) increment to add:
/// `E[g^2] <- rho E[g^2] + (1-rho) g^2`,
/// `delta = -sqrt((E[d^2] + eps) / (E[g^2] + eps)) * g`,
/// `E[d^2] <- rho E[d^2] + (1-rho) delta^2`.
pub fn adadelta_scalar(eg2: &mut f64, ed2: &mut f64, g: f64, rho: f64, eps: f64) -> f64 {
    *eg2 = rho * *eg2 + (1.0 - rho) * g * g;
    let delta = -((*ed2 + eps) / (*eg2 + eps)).sqrt() * g;
    *ed2 = rho * *ed2 + (1.0 - rho) * delta * delta;
    delta
}

/// Trains the network on binary ingredient features.
pub fn train_mlp(train: &FeatureMatrix, config: &MlpConfig) -> Result<(MlpModel, TrainReport)> {
    if train.is_empty() {
        return Err(Error::Data("training set is empty".into()));
    }
    if config.epochs == 0 || config.batch == 0 {
        return Err(Error::InvalidArg(
            "epochs and batch size must be at least 1".into(),
        ));
    }
    if !(0.0..1.0).contains(&config.dropout) {
        return Err(Error::InvalidArg(format!(
            "dropout must lie in [0, 1), got {}",
            config.dropout
        )));
    }
    if !(config.rho > 0.0 && config.rho < 1.0) {
        return Err(Error::InvalidArg(format!(
            "rho must lie in (0, 1), got {}",
            config.rho
        )));
    }
    if !(config.eps.is_finite() && config.eps > 0.0) {
        return Err(Error::InvalidArg(format!(
            "eps must be positive, got {}",
            config.eps
        )));
    }
    let counts = train.class_counts();
    if counts.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(Error::Data(
            "training data holds fewer than two classes".into(),
        ));
    }
    let mut model = MlpModel::new(
        train.label_kind,
        train.class_names.clone(),
        train.v,
        &config.hidden,
        config.seed,
    )?;
    let mut order_rng = seed::rng(config.seed, "mlp:order");
    let mut dropout_rng = seed::rng(config.seed, "mlp:dropout");
    let keep = 1.0 - config.dropout;
    let n = train.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut epoch_losses = Vec::with_capacity(config.epochs);
    for epoch in 0..config.epochs {
        order.shuffle(&mut order_rng);
        let mut total = 0.0;
        for chunk in order.chunks(config.batch) {
            let x = train.dense_batch(chunk);
            let labels: Vec<usize> = chunk.iter().map(|&i| train.labels[i]).collect();
            let masks: Option<Vec<Array2<f64>>> = if config.dropout > 0.0 {
                let mut layer_masks = Vec::with_capacity(config.hidden.len());
                for &h in &config.hidden {
                    let mut data = Vec::with_capacity(chunk.len() * h);
                    for _ in 0..chunk.len() * h {
                        data.push(if dropout_rng.random_range(0.0f64..1.0) < keep {
                            1.0 / keep
                        } else {
                            0.0
                        });
                    }
                    layer_masks.push(
                        Array2::from_shape_vec((chunk.len(), h), data).expect("shape matches"),
                    );
                }
                Some(layer_masks)
            } else {
                None
            };
            let (loss, grads) = model.loss_and_grad(&x, &labels, masks.as_deref())?;
            total += loss * chunk.len() as f64;
            model.adadelta_update(&grads, config.rho, config.eps);
        }
        let epoch_loss = total / n as f64;
        if !epoch_loss.is_finite() {
            return Err(Error::Divergence(format!(
                "MLP loss became non-finite at epoch {}",
                epoch + 1
            )));
        }
        epoch_losses.push(epoch_loss);
    }
    Ok((model, TrainReport { epoch_losses }))
}
