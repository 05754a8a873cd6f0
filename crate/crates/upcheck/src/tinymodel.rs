//! A small fully-connected network with exact manual backpropagation, a
//! deterministic training loop, JSON persistence, and a frequency-domain
//! wrapper.
//!
//! The wrapper prepends [`crate::spectral::synthesize`] to the forward pass,
//! so the wrapped model consumes packed spectrum parameters instead of raw
//! samples; its input gradient is the [`crate::spectral::synthesis_adjoint`]
//! of the time-domain gradient. Both views of one parameter set let
//! attribution methods explain the same prediction in either domain.
//!
//! Everything is plain scalar `f64` arithmetic: no external autodiff, no
//! BLAS RNG opacity — a fixed seed pins initialization, shuffling, and the
//! final weights bit for bit.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write as IoWrite};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectral::{synthesis_adjoint, synthesize, SpectralError, SynthesisParams, TimeSeries};
use crate::synthgen::{LabeledSample, SynthDataset};

/// Parameter file format version accepted by [`load_params`].
pub const PARAMS_VERSION: u32 = 1;

const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPSILON: f64 = 1e-8;

/// Errors from model construction, evaluation, training, and persistence.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid layer sizes {sizes:?}: {reason}")]
    InvalidLayerSizes { sizes: Vec<usize>, reason: String },
    #[error("input length {got} does not match model input {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("target {target} out of range for {outputs} outputs")]
    BadTarget { target: usize, outputs: usize },
    #[error("inconsistent parameters: {0}")]
    MalformedParams(String),
    #[error("handle is already frequency-wrapped")]
    AlreadyWrapped,
    #[error("training diverged at epoch {epoch}: loss {loss}")]
    Diverged { epoch: usize, loss: f64 },
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("invalid train config field `{field}`: {reason}")]
    Config { field: &'static str, reason: String },
    #[error("task mismatch: {0}")]
    TaskMismatch(String),
    #[error("unsupported parameter file version {found} (expected {PARAMS_VERSION})")]
    Version { found: u32 },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parameter file parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Loss attached to the network head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    /// Softmax cross-entropy over class logits.
    Classification,
    /// Squared error on a scalar output.
    Regression,
}

/// Weight-update rule for the training loop.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Optimizer {
    /// Plain momentum-free stochastic gradient descent (the default).
    #[default]
    Sgd,
    /// Adam with the standard published constants (echoed in the metrics).
    Adam,
}

/// Fully-connected network parameters. `weights[l]` holds the rows of layer
/// l's matrix (one row per output unit, row length = fan-in); hidden layers
/// apply a rectifier, the final layer is linear.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub layer_sizes: Vec<usize>,
    pub weights: Vec<Vec<Vec<f64>>>,
    pub biases: Vec<Vec<f64>>,
    pub task: TaskKind,
}

impl MlpParams {
    pub fn input_len(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn output_len(&self) -> usize {
        *self.layer_sizes.last().expect("validated nonempty")
    }

    /// Checks the shape chain and finiteness of every parameter.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.layer_sizes.len() < 2 {
            return Err(ModelError::InvalidLayerSizes {
                sizes: self.layer_sizes.clone(),
                reason: "need at least input and output sizes".into(),
            });
        }
        if self.layer_sizes.iter().any(|&s| s == 0) {
            return Err(ModelError::InvalidLayerSizes {
                sizes: self.layer_sizes.clone(),
                reason: "zero-width layer".into(),
            });
        }
        let layers = self.layer_sizes.len() - 1;
        if self.weights.len() != layers || self.biases.len() != layers {
            return Err(ModelError::MalformedParams(format!(
                "expected {layers} weight/bias tensors, got {}/{}",
                self.weights.len(),
                self.biases.len()
            )));
        }
        for l in 0..layers {
            let (fan_in, fan_out) = (self.layer_sizes[l], self.layer_sizes[l + 1]);
            if self.weights[l].len() != fan_out || self.biases[l].len() != fan_out {
                return Err(ModelError::MalformedParams(format!(
                    "layer {l}: expected {fan_out} rows/biases, got {}/{}",
                    self.weights[l].len(),
                    self.biases[l].len()
                )));
            }
            for (i, row) in self.weights[l].iter().enumerate() {
                if row.len() != fan_in {
                    return Err(ModelError::MalformedParams(format!(
                        "layer {l} row {i}: expected fan-in {fan_in}, got {}",
                        row.len()
                    )));
                }
                if row.iter().any(|v| !v.is_finite()) {
                    return Err(ModelError::MalformedParams(format!(
                        "layer {l} row {i}: non-finite weight"
                    )));
                }
            }
            if self.biases[l].iter().any(|v| !v.is_finite()) {
                return Err(ModelError::MalformedParams(format!("layer {l}: non-finite bias")));
            }
        }
        Ok(())
    }
}

/// Which space the handle's inputs live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputDomain {
    Time,
    /// Inputs are packed spectrum parameters; the forward pass resynthesizes
    /// them before the first layer.
    FrequencyWrapped,
}

/// A parameter set bound to an input domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelHandle {
    pub params: MlpParams,
    pub domain: InputDomain,
}

impl ModelHandle {
    /// A plain time-domain view of the parameters.
    pub fn time(params: MlpParams) -> Self {
        ModelHandle {
            params,
            domain: InputDomain::Time,
        }
    }
}

/// Frequency-domain view of a time-domain handle: `f_wrapped(p) =
/// f(synthesize(p))`, with the gradient path through the adjoint.
pub fn wrap_frequency(h: &ModelHandle) -> Result<ModelHandle, ModelError> {
    match h.domain {
        InputDomain::Time => Ok(ModelHandle {
            params: h.params.clone(),
            domain: InputDomain::FrequencyWrapped,
        }),
        InputDomain::FrequencyWrapped => Err(ModelError::AlreadyWrapped),
    }
}

/// Deterministic initialization: weights uniform in ±1/√fan_in, biases zero.
/// Requires at least one hidden layer; hand-built [`MlpParams`] may be
/// shallower.
pub fn init_params(layer_sizes: &[usize], seed: u64, task: TaskKind) -> Result<MlpParams, ModelError> {
    if layer_sizes.len() < 3 {
        return Err(ModelError::InvalidLayerSizes {
            sizes: layer_sizes.to_vec(),
            reason: "zero hidden layers requested".into(),
        });
    }
    if layer_sizes.iter().any(|&s| s == 0) {
        return Err(ModelError::InvalidLayerSizes {
            sizes: layer_sizes.to_vec(),
            reason: "zero-width layer".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = Vec::new();
    let mut biases = Vec::new();
    for pair in layer_sizes.windows(2) {
        let (fan_in, fan_out) = (pair[0], pair[1]);
        let scale = 1.0 / (fan_in as f64).sqrt();
        weights.push(
            (0..fan_out)
                .map(|_| (0..fan_in).map(|_| rng.random_range(-scale..scale)).collect())
                .collect(),
        );
        biases.push(vec![0.0; fan_out]);
    }
    Ok(MlpParams {
        layer_sizes: layer_sizes.to_vec(),
        weights,
        biases,
        task,
    })
}

/// Outputs plus everything backward needs: `activations[l]` is the input fed
/// to layer l (post-rectifier for l ≥ 1, the resynthesized series for l = 0
/// on wrapped handles).
#[derive(Debug, Clone)]
pub struct ForwardPass {
    pub outputs: Vec<f64>,
    pub activations: Vec<Vec<f64>>,
}

fn layer_forward(weights: &[Vec<f64>], biases: &[f64], input: &[f64]) -> Vec<f64> {
    weights
        .iter()
        .zip(biases)
        .map(|(row, b)| row.iter().zip(input).map(|(w, x)| w * x).sum::<f64>() + b)
        .collect()
}

/// Runs the network. Wrapped handles first resynthesize the packed spectrum
/// into a time series; the rest of the pass is identical.
pub fn forward(h: &ModelHandle, x: &[f64]) -> Result<ForwardPass, ModelError> {
    h.params.validate()?;
    let expected = h.params.input_len();
    if x.len() != expected {
        return Err(ModelError::ShapeMismatch {
            expected,
            got: x.len(),
        });
    }
    let first = match h.domain {
        InputDomain::Time => x.to_vec(),
        InputDomain::FrequencyWrapped => synthesize(&SynthesisParams {
            values: x.to_vec(),
        })?,
    };
    let layers = h.params.weights.len();
    let mut activations = Vec::with_capacity(layers);
    let mut current = first;
    for l in 0..layers {
        let z = layer_forward(&h.params.weights[l], &h.params.biases[l], &current);
        activations.push(std::mem::replace(&mut current, Vec::new()));
        current = if l + 1 < layers {
            z.into_iter().map(|v| v.max(0.0)).collect()
        } else {
            z
        };
    }
    Ok(ForwardPass {
        outputs: current,
        activations,
    })
}

/// Gradient of one output (a class logit, or the scalar regression head)
/// with respect to the handle's input: backpropagation through the rectifier
/// masks, then — for wrapped handles — the synthesis adjoint.
pub fn input_gradient(h: &ModelHandle, x: &[f64], target: usize) -> Result<Vec<f64>, ModelError> {
    let pass = forward(h, x)?;
    if target >= pass.outputs.len() {
        return Err(ModelError::BadTarget {
            target,
            outputs: pass.outputs.len(),
        });
    }
    let mut delta = vec![0.0; pass.outputs.len()];
    delta[target] = 1.0;
    let time_grad = backprop_to_input(&h.params, &pass.activations, delta);
    match h.domain {
        InputDomain::Time => Ok(time_grad),
        InputDomain::FrequencyWrapped => Ok(synthesis_adjoint(&time_grad)?.values),
    }
}

/// Pulls an output-side delta back to the first layer's input.
fn backprop_to_input(params: &MlpParams, activations: &[Vec<f64>], mut delta: Vec<f64>) -> Vec<f64> {
    for l in (0..params.weights.len()).rev() {
        let fan_in = params.layer_sizes[l];
        let mut grad_in = vec![0.0; fan_in];
        for (row, d) in params.weights[l].iter().zip(&delta) {
            for (g, w) in grad_in.iter_mut().zip(row) {
                *g += w * d;
            }
        }
        if l > 0 {
            // activations[l] is the rectifier output feeding layer l; its
            // derivative is the indicator of a strictly positive activation.
            for (g, a) in grad_in.iter_mut().zip(&activations[l]) {
                if *a <= 0.0 {
                    *g = 0.0;
                }
            }
        }
        delta = grad_in;
    }
    delta
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

/// One supervised target for the generic fitting path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrainTarget {
    Class(usize),
    Value(f64),
}

/// Training hyperparameters. `hidden_sizes` fixes the architecture between
/// the data-determined input and output widths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub hidden_sizes: Vec<usize>,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub task: TaskKind,
    pub optimizer: Optimizer,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            hidden_sizes: vec![256, 128, 64],
            learning_rate: 0.05,
            epochs: 40,
            batch_size: 32,
            seed: 1,
            task: TaskKind::Classification,
            optimizer: Optimizer::Sgd,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        let fail = |field: &'static str, reason: String| Err(ModelError::Config { field, reason });
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return fail(
                "learning_rate",
                format!("must be finite and > 0, got {}", self.learning_rate),
            );
        }
        if self.epochs == 0 {
            return fail("epochs", "must be at least 1".into());
        }
        if self.batch_size == 0 {
            return fail("batch_size", "must be at least 1".into());
        }
        Ok(())
    }
}

/// Per-group evaluation of a trained classifier: accuracy plus the mean and
/// standard deviation of the true-class logit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupEval {
    pub n: usize,
    pub accuracy: f64,
    pub mean_target_logit: f64,
    pub std_target_logit: f64,
}

/// Optimizer echo for the metrics output; Adam reports its constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum OptimizerEcho {
    Sgd,
    Adam { beta1: f64, beta2: f64, epsilon: f64 },
}

/// Everything [`train`] reports besides the parameters themselves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainMetrics {
    pub epoch_loss: Vec<f64>,
    pub train_accuracy: f64,
    pub groups: BTreeMap<String, GroupEval>,
    pub optimizer: OptimizerEcho,
    pub config: TrainConfig,
}

struct GradBuffers {
    weights: Vec<Vec<Vec<f64>>>,
    biases: Vec<Vec<f64>>,
}

impl GradBuffers {
    fn zeros_like(params: &MlpParams) -> Self {
        GradBuffers {
            weights: params
                .weights
                .iter()
                .map(|m| m.iter().map(|r| vec![0.0; r.len()]).collect())
                .collect(),
            biases: params.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
        }
    }

    fn zero(&mut self) {
        for m in &mut self.weights {
            for r in m {
                r.iter_mut().for_each(|v| *v = 0.0);
            }
        }
        for b in &mut self.biases {
            b.iter_mut().for_each(|v| *v = 0.0);
        }
    }
}

/// Forward + backward for one sample, accumulating parameter gradients into
/// `grads` and returning the loss. Training always runs in the time domain.
fn accumulate_sample(
    params: &MlpParams,
    x: &[f64],
    target: TrainTarget,
    grads: &mut GradBuffers,
) -> Result<f64, ModelError> {
    let layers = params.weights.len();
    // Inline forward (identical to `forward`, without revalidating params).
    let mut activations = Vec::with_capacity(layers);
    let mut current = x.to_vec();
    for l in 0..layers {
        let z = layer_forward(&params.weights[l], &params.biases[l], &current);
        activations.push(std::mem::replace(&mut current, Vec::new()));
        current = if l + 1 < layers {
            z.into_iter().map(|v| v.max(0.0)).collect()
        } else {
            z
        };
    }
    let outputs = current;

    let (loss, mut delta) = match (params.task, target) {
        (TaskKind::Classification, TrainTarget::Class(label)) => {
            if label >= outputs.len() {
                return Err(ModelError::BadTarget {
                    target: label,
                    outputs: outputs.len(),
                });
            }
            // Stable softmax cross-entropy.
            let peak = outputs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let exps: Vec<f64> = outputs.iter().map(|z| (z - peak).exp()).collect();
            let total: f64 = exps.iter().sum();
            let loss = total.ln() + peak - outputs[label];
            let mut delta: Vec<f64> = exps.iter().map(|e| e / total).collect();
            delta[label] -= 1.0;
            (loss, delta)
        }
        (TaskKind::Regression, TrainTarget::Value(y)) => {
            if outputs.len() != 1 {
                return Err(ModelError::TaskMismatch(format!(
                    "regression head must be scalar, model has {} outputs",
                    outputs.len()
                )));
            }
            let err = outputs[0] - y;
            (0.5 * err * err, vec![err])
        }
        (task, t) => {
            return Err(ModelError::TaskMismatch(format!(
                "target {t:?} does not fit task {task:?}"
            )))
        }
    };

    for l in (0..layers).rev() {
        let input = &activations[l];
        for ((row_grad, bias_grad), d) in grads.weights[l]
            .iter_mut()
            .zip(&mut grads.biases[l])
            .zip(&delta)
        {
            for (g, a) in row_grad.iter_mut().zip(input) {
                *g += d * a;
            }
            *bias_grad += d;
        }
        if l > 0 {
            let mut grad_in = vec![0.0; params.layer_sizes[l]];
            for (row, d) in params.weights[l].iter().zip(&delta) {
                for (g, w) in grad_in.iter_mut().zip(row) {
                    *g += w * d;
                }
            }
            for (g, a) in grad_in.iter_mut().zip(input) {
                if *a <= 0.0 {
                    *g = 0.0;
                }
            }
            delta = grad_in;
        }
    }
    Ok(loss)
}

enum OptimizerState {
    Sgd,
    Adam {
        m: GradBuffers,
        v: GradBuffers,
        step: u64,
    },
}

fn apply_update(
    params: &mut MlpParams,
    grads: &GradBuffers,
    state: &mut OptimizerState,
    lr: f64,
    scale: f64,
) {
    match state {
        OptimizerState::Sgd => {
            for (wm, gm) in params.weights.iter_mut().zip(&grads.weights) {
                for (wr, gr) in wm.iter_mut().zip(gm) {
                    for (w, g) in wr.iter_mut().zip(gr) {
                        *w -= lr * g * scale;
                    }
                }
            }
            for (bv, gv) in params.biases.iter_mut().zip(&grads.biases) {
                for (b, g) in bv.iter_mut().zip(gv) {
                    *b -= lr * g * scale;
                }
            }
        }
        OptimizerState::Adam { m, v, step } => {
            *step += 1;
            let t = *step as i32;
            let bc1 = 1.0 - ADAM_BETA1.powi(t);
            let bc2 = 1.0 - ADAM_BETA2.powi(t);
            let update = |p: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
                let g = g * scale;
                *m = ADAM_BETA1 * *m + (1.0 - ADAM_BETA1) * g;
                *v = ADAM_BETA2 * *v + (1.0 - ADAM_BETA2) * g * g;
                let m_hat = *m / bc1;
                let v_hat = *v / bc2;
                *p -= lr * m_hat / (v_hat.sqrt() + ADAM_EPSILON);
            };
            for l in 0..params.weights.len() {
                for i in 0..params.weights[l].len() {
                    for j in 0..params.weights[l][i].len() {
                        let g = grads.weights[l][i][j];
                        update(
                            &mut params.weights[l][i][j],
                            g,
                            &mut m.weights[l][i][j],
                            &mut v.weights[l][i][j],
                        );
                    }
                }
                for i in 0..params.biases[l].len() {
                    let g = grads.biases[l][i];
                    update(
                        &mut params.biases[l][i],
                        g,
                        &mut m.biases[l][i],
                        &mut v.biases[l][i],
                    );
                }
            }
        }
    }
}

/// Fits an MLP to generic labeled data: mini-batch updates over shuffled
/// epochs, deterministic under the seed. Returns the parameters and the
/// per-epoch mean loss.
pub fn fit(
    inputs: &[TimeSeries],
    targets: &[TrainTarget],
    cfg: &TrainConfig,
    output_len: usize,
) -> Result<(MlpParams, Vec<f64>), ModelError> {
    cfg.validate()?;
    if inputs.is_empty() {
        return Err(ModelError::EmptyTrainingSet);
    }
    if inputs.len() != targets.len() {
        return Err(ModelError::Config {
            field: "targets",
            reason: format!("{} inputs vs {} targets", inputs.len(), targets.len()),
        });
    }
    let input_len = inputs[0].len();
    if inputs.iter().any(|x| x.len() != input_len) {
        return Err(ModelError::Config {
            field: "inputs",
            reason: "ragged input lengths".into(),
        });
    }
    let mut layer_sizes = vec![input_len];
    layer_sizes.extend_from_slice(&cfg.hidden_sizes);
    layer_sizes.push(output_len);
    let mut params = init_params(&layer_sizes, cfg.seed, cfg.task)?;

    // Offset the shuffle stream from the init stream sharing the same seed.
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ SHUFFLE_STREAM);
    let mut order: Vec<usize> = (0..inputs.len()).collect();
    let mut grads = GradBuffers::zeros_like(&params);
    let mut state = match cfg.optimizer {
        Optimizer::Sgd => OptimizerState::Sgd,
        Optimizer::Adam => OptimizerState::Adam {
            m: GradBuffers::zeros_like(&params),
            v: GradBuffers::zeros_like(&params),
            step: 0,
        },
    };
    let mut epoch_loss = Vec::with_capacity(cfg.epochs);
    for epoch in 0..cfg.epochs {
        order.shuffle(&mut rng);
        let mut total_loss = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            grads.zero();
            for &idx in batch {
                total_loss += accumulate_sample(&params, &inputs[idx], targets[idx], &mut grads)?;
            }
            apply_update(
                &mut params,
                &grads,
                &mut state,
                cfg.learning_rate,
                1.0 / batch.len() as f64,
            );
        }
        let mean_loss = total_loss / inputs.len() as f64;
        if !mean_loss.is_finite() {
            return Err(ModelError::Diverged {
                epoch,
                loss: mean_loss,
            });
        }
        epoch_loss.push(mean_loss);
    }
    Ok((params, epoch_loss))
}

const SHUFFLE_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

/// Evaluates accuracy and true-class logit statistics over one sample list.
pub fn evaluate_group(params: &MlpParams, samples: &[LabeledSample]) -> Result<GroupEval, ModelError> {
    let handle = ModelHandle::time(params.clone());
    let mut correct = 0usize;
    let mut logits = Vec::with_capacity(samples.len());
    for s in samples {
        let pass = forward(&handle, &s.values)?;
        let argmax = pass
            .outputs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .expect("nonempty outputs");
        if argmax == s.label {
            correct += 1;
        }
        logits.push(pass.outputs[s.label]);
    }
    let n = samples.len();
    let mean = logits.iter().sum::<f64>() / n.max(1) as f64;
    let var = logits.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n.max(1) as f64;
    Ok(GroupEval {
        n,
        accuracy: correct as f64 / n.max(1) as f64,
        mean_target_logit: mean,
        std_target_logit: var.sqrt(),
    })
}

/// Trains a classifier on the synthetic dataset's training split (time
/// domain only) and evaluates every validation group.
pub fn train(ds: &SynthDataset, cfg: &TrainConfig) -> Result<(MlpParams, TrainMetrics), ModelError> {
    if cfg.task != TaskKind::Classification {
        return Err(ModelError::TaskMismatch(
            "the synthetic dataset is classification data; use `fit` for regression".into(),
        ));
    }
    if ds.train.is_empty() {
        return Err(ModelError::EmptyTrainingSet);
    }
    let inputs: Vec<TimeSeries> = ds.train.iter().map(|s| s.values.clone()).collect();
    let targets: Vec<TrainTarget> = ds.train.iter().map(|s| TrainTarget::Class(s.label)).collect();
    let (params, epoch_loss) = fit(&inputs, &targets, cfg, ds.config.classes())?;

    let mut groups = BTreeMap::new();
    groups.insert("both".to_string(), evaluate_group(&params, &ds.val_both)?);
    groups.insert("time-only".to_string(), evaluate_group(&params, &ds.val_time)?);
    groups.insert("freq-only".to_string(), evaluate_group(&params, &ds.val_freq)?);
    let train_eval = evaluate_group(&params, &ds.train)?;
    let metrics = TrainMetrics {
        epoch_loss,
        train_accuracy: train_eval.accuracy,
        groups,
        optimizer: match cfg.optimizer {
            Optimizer::Sgd => OptimizerEcho::Sgd,
            Optimizer::Adam => OptimizerEcho::Adam {
                beta1: ADAM_BETA1,
                beta2: ADAM_BETA2,
                epsilon: ADAM_EPSILON,
            },
        },
        config: cfg.clone(),
    };
    Ok((params, metrics))
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    version: u32,
    layer_sizes: Vec<usize>,
    weights: Vec<Vec<Vec<f64>>>,
    biases: Vec<Vec<f64>>,
    task: TaskKind,
}

/// Writes parameters as a single-version JSON document.
pub fn save_params(params: &MlpParams, path: &Path) -> Result<(), ModelError> {
    params.validate()?;
    let file = ParamsFile {
        version: PARAMS_VERSION,
        layer_sizes: params.layer_sizes.clone(),
        weights: params.weights.clone(),
        biases: params.biases.clone(),
        task: params.task,
    };
    let mut out = BufWriter::new(File::create(path)?);
    let text = serde_json::to_string(&file).expect("params serialize without error");
    out.write_all(text.as_bytes())?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// Reads parameters back, refusing unknown versions and malformed shapes.
pub fn load_params(path: &Path) -> Result<MlpParams, ModelError> {
    let reader = BufReader::new(File::open(path)?);
    // Peek the version before insisting on the full schema so version
    // mismatches are reported as such, not as shape errors.
    let value: serde_json::Value =
        serde_json::from_reader(reader).map_err(|e| ModelError::Parse(e.to_string()))?;
    let version = value
        .get("version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| ModelError::Parse("missing integer `version` field".into()))?;
    if version != PARAMS_VERSION as u64 {
        return Err(ModelError::Version {
            found: version as u32,
        });
    }
    let file: ParamsFile =
        serde_json::from_value(value).map_err(|e| ModelError::Parse(e.to_string()))?;
    let params = MlpParams {
        layer_sizes: file.layer_sizes,
        weights: file.weights,
        biases: file.biases,
        task: file.task,
    };
    params.validate()?;
    Ok(params)
}
