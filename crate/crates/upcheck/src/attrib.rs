//! Attribution methods over both input domains: Saliency, Input×Gradient,
//! Integrated Gradients, window Occlusion, and a LIME-style sparse linear
//! surrogate with multi-run aggregation.
//!
//! Every method runs against a [`ModelHandle`]; on a time-domain handle the
//! scores are per time step (length N), on a frequency-wrapped handle they
//! are per frequency bin (length ⌊N/2⌋+1). Gradient-family methods compute
//! scores in the packed parameter space and fold the re/im pairs into bin
//! magnitudes; occlusion and LIME treat one bin (its re/im pair jointly) as
//! the unit of perturbation, so their frequency scores are per-bin and
//! signed from the start.
//!
//! [`explain_pair`] packages the two views of one sample into the
//! [`AttributionPair`] consumed by the violation detector.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectral::{dft, fold_bin_scores, half_bin_count, im_slot, pack, re_slot, SpectralError};
use crate::tinymodel::{forward, input_gradient, wrap_frequency, InputDomain, ModelError, ModelHandle};
use crate::updetect::AttributionPair;

/// Errors from attribution computation and configuration.
#[derive(Debug, Error)]
pub enum AttribError {
    #[error("invalid attribution config field `{field}`: {reason}")]
    Config {
        field: &'static str,
        reason: String,
    },
    #[error(
        "unknown method `{name}`; supported: saliency, input-x-gradient, integrated-gradients, \
         occlusion, lime, lime-agg[N]. Externally produced attributions can be ingested as a \
         pair file and checked with the `check` command."
    )]
    UnknownMethod { name: String },
    #[error("degenerate attribution for sample `{sample_id}`: {method} produced all zeros in the {domain} domain")]
    Degenerate {
        sample_id: String,
        method: String,
        domain: String,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Which space an [`AttributionResult`]'s scores index into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    Time,
    Frequency,
}

impl Domain {
    fn of(handle: &ModelHandle) -> Self {
        match handle.domain {
            InputDomain::Time => Domain::Time,
            InputDomain::FrequencyWrapped => Domain::Frequency,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Domain::Time => "time",
            Domain::Frequency => "frequency",
        }
    }
}

/// One method's scores for one sample in one domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributionResult {
    pub sample_id: String,
    pub method: String,
    pub domain: Domain,
    pub target: usize,
    pub scores: Vec<f64>,
    /// Free-form annotations (segment count, ridge fallback, run count).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, String>,
}

/// The implemented attribution methods. `LimeAggregate` may carry an
/// explicit run count parsed from `lime-aggN`; otherwise the config's run
/// count applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Saliency,
    InputXGradient,
    IntegratedGradients,
    Occlusion,
    Lime,
    LimeAggregate(Option<usize>),
}

impl FromStr for Method {
    type Err = AttribError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "saliency" => Ok(Method::Saliency),
            "input-x-gradient" | "ixg" => Ok(Method::InputXGradient),
            "integrated-gradients" | "ig" => Ok(Method::IntegratedGradients),
            "occlusion" => Ok(Method::Occlusion),
            "lime" => Ok(Method::Lime),
            "lime-agg" => Ok(Method::LimeAggregate(None)),
            _ => {
                if let Some(runs) = s.strip_prefix("lime-agg") {
                    if let Ok(r) = runs.parse::<usize>() {
                        if r >= 1 {
                            return Ok(Method::LimeAggregate(Some(r)));
                        }
                    }
                }
                Err(AttribError::UnknownMethod { name: s.to_string() })
            }
        }
    }
}

/// Configuration for the LIME surrogate. The baseline is always the zero
/// input. In the frequency domain each bin is one segment, so `segment_len`
/// applies to the time domain only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimeConfig {
    pub segment_len: usize,
    /// Surrogate feature budget; `None` picks max(4, segments/10).
    pub k: Option<usize>,
    pub n_perturbations: usize,
    pub mask_probability: f64,
    /// Run count for [`lime_aggregate`].
    pub runs: usize,
    pub seed: u64,
}

impl Default for LimeConfig {
    fn default() -> Self {
        LimeConfig {
            segment_len: 10,
            k: None,
            n_perturbations: 500,
            mask_probability: 0.5,
            runs: 100,
            seed: 0,
        }
    }
}

impl LimeConfig {
    fn effective_k(&self, segments: usize) -> usize {
        self.k.unwrap_or_else(|| 4.max(segments / 10))
    }

    fn validate(&self, segments: usize) -> Result<(), AttribError> {
        let fail = |field: &'static str, reason: String| Err(AttribError::Config { field, reason });
        if self.segment_len == 0 {
            return fail("segment_len", "must be at least 1".into());
        }
        let k = self.effective_k(segments);
        if k == 0 || k > segments {
            return fail(
                "k",
                format!("must lie in 1..={segments} (segment count), got {k}"),
            );
        }
        if self.n_perturbations < segments {
            return fail(
                "n_perturbations",
                format!(
                    "need at least one perturbation per segment ({segments}), got {}",
                    self.n_perturbations
                ),
            );
        }
        if !(0.0..=1.0).contains(&self.mask_probability) {
            return fail(
                "mask_probability",
                format!("must lie in [0, 1], got {}", self.mask_probability),
            );
        }
        if self.runs == 0 {
            return fail("runs", "must be at least 1".into());
        }
        Ok(())
    }
}

/// Configuration for window occlusion. In the frequency domain the unit of
/// occlusion is one bin (re/im zeroed jointly), so the window and stride
/// apply to the time domain only. The baseline fill is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OcclusionConfig {
    pub window_len: usize,
    pub stride: usize,
}

impl Default for OcclusionConfig {
    fn default() -> Self {
        OcclusionConfig {
            window_len: 10,
            stride: 1,
        }
    }
}

impl OcclusionConfig {
    fn validate(&self, n: usize) -> Result<(), AttribError> {
        if self.window_len == 0 || self.window_len > n {
            return Err(AttribError::Config {
                field: "window_len",
                reason: format!("must lie in 1..={n} (input length), got {}", self.window_len),
            });
        }
        if self.stride == 0 {
            return Err(AttribError::Config {
                field: "stride",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// Bundled method settings for [`explain_pair`] and the batch surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplainConfig {
    pub ig_steps: usize,
    pub occlusion: OcclusionConfig,
    pub lime: LimeConfig,
}

impl Default for ExplainConfig {
    fn default() -> Self {
        ExplainConfig {
            ig_steps: 50,
            occlusion: OcclusionConfig::default(),
            lime: LimeConfig::default(),
        }
    }
}

fn result(
    handle: &ModelHandle,
    sample_id: &str,
    method: &str,
    target: usize,
    scores: Vec<f64>,
    meta: BTreeMap<String, String>,
) -> AttributionResult {
    AttributionResult {
        sample_id: sample_id.to_string(),
        method: method.to_string(),
        domain: Domain::of(handle),
        target,
        scores,
        meta,
    }
}

/// On frequency handles, gradient-family scores live in the packed parameter
/// space and are folded to per-bin magnitudes; time scores pass through.
fn fold_if_frequency(handle: &ModelHandle, scores: Vec<f64>) -> Result<Vec<f64>, AttribError> {
    match handle.domain {
        InputDomain::Time => Ok(scores),
        InputDomain::FrequencyWrapped => Ok(fold_bin_scores(&scores)?.scores),
    }
}

/// Gradient magnitude of the target output with respect to the input.
pub fn saliency(h: &ModelHandle, x: &[f64], target: usize) -> Result<AttributionResult, AttribError> {
    let grad = input_gradient(h, x, target)?;
    let scores = fold_if_frequency(h, grad)?
        .into_iter()
        .map(f64::abs)
        .collect();
    Ok(result(h, "", "saliency", target, scores, BTreeMap::new()))
}

/// Signed elementwise product of the input with its gradient.
pub fn input_x_gradient(
    h: &ModelHandle,
    x: &[f64],
    target: usize,
) -> Result<AttributionResult, AttribError> {
    let grad = input_gradient(h, x, target)?;
    let product: Vec<f64> = x.iter().zip(&grad).map(|(xi, gi)| xi * gi).collect();
    let scores = fold_if_frequency(h, product)?;
    Ok(result(h, "", "input-x-gradient", target, scores, BTreeMap::new()))
}

/// Midpoint-rule path integral of the gradient from the baseline (zero
/// unless given) to the input, scaled by the displacement.
pub fn integrated_gradients(
    h: &ModelHandle,
    x: &[f64],
    target: usize,
    steps: usize,
    baseline: Option<&[f64]>,
) -> Result<AttributionResult, AttribError> {
    if steps == 0 {
        return Err(AttribError::Config {
            field: "ig_steps",
            reason: "must be at least 1".into(),
        });
    }
    let zero_baseline;
    let base: &[f64] = match baseline {
        Some(b) => {
            if b.len() != x.len() {
                return Err(AttribError::Config {
                    field: "baseline",
                    reason: format!("length {} does not match input {}", b.len(), x.len()),
                });
            }
            b
        }
        None => {
            zero_baseline = vec![0.0; x.len()];
            &zero_baseline
        }
    };
    let mut mean_grad = vec![0.0; x.len()];
    let mut point = vec![0.0; x.len()];
    for s in 0..steps {
        let alpha = (s as f64 + 0.5) / steps as f64;
        for ((p, b), xi) in point.iter_mut().zip(base).zip(x) {
            *p = b + alpha * (xi - b);
        }
        let grad = input_gradient(h, &point, target)?;
        for (m, g) in mean_grad.iter_mut().zip(&grad) {
            *m += g;
        }
    }
    let raw: Vec<f64> = mean_grad
        .iter()
        .zip(x)
        .zip(base)
        .map(|((m, xi), b)| m / steps as f64 * (xi - b))
        .collect();
    let scores = fold_if_frequency(h, raw)?;
    let mut meta = BTreeMap::new();
    meta.insert("steps".to_string(), steps.to_string());
    Ok(result(h, "", "integrated-gradients", target, scores, meta))
}

/// Drop in the target output when a window (time) or a single bin's re/im
/// pair (frequency) is zeroed; overlapping windows average.
pub fn occlusion(
    h: &ModelHandle,
    x: &[f64],
    target: usize,
    cfg: &OcclusionConfig,
) -> Result<AttributionResult, AttribError> {
    let base_out = forward(h, x)?.outputs;
    if target >= base_out.len() {
        return Err(AttribError::Model(ModelError::BadTarget {
            target,
            outputs: base_out.len(),
        }));
    }
    let base = base_out[target];
    let mut meta = BTreeMap::new();
    let scores = match h.domain {
        InputDomain::Time => {
            cfg.validate(x.len())?;
            let n = x.len();
            let mut sums = vec![0.0; n];
            let mut counts = vec![0usize; n];
            let mut start = 0;
            while start + cfg.window_len <= n {
                let mut masked = x.to_vec();
                masked[start..start + cfg.window_len].fill(0.0);
                let drop = base - forward(h, &masked)?.outputs[target];
                for i in start..start + cfg.window_len {
                    sums[i] += drop;
                    counts[i] += 1;
                }
                start += cfg.stride;
            }
            sums.iter()
                .zip(&counts)
                .map(|(s, &c)| if c == 0 { 0.0 } else { s / c as f64 })
                .collect()
        }
        InputDomain::FrequencyWrapped => {
            let n = x.len();
            let bins = half_bin_count(n);
            meta.insert("unit".to_string(), "bin".to_string());
            (0..bins)
                .map(|bin| -> Result<f64, AttribError> {
                    let mut masked = x.to_vec();
                    masked[re_slot(n, bin).expect("bin <= n/2")] = 0.0;
                    if let Some(slot) = im_slot(n, bin) {
                        masked[slot] = 0.0;
                    }
                    Ok(base - forward(h, &masked)?.outputs[target])
                })
                .collect::<Result<Vec<f64>, _>>()?
        }
    };
    Ok(result(h, "", "occlusion", target, scores, meta))
}

/// Contiguous time segments of `segment_len` (the last may be shorter), or
/// one segment per frequency bin.
fn segment_slots(h: &ModelHandle, n: usize, segment_len: usize) -> Vec<Vec<usize>> {
    match h.domain {
        InputDomain::Time => (0..n.div_ceil(segment_len))
            .map(|s| (s * segment_len..((s + 1) * segment_len).min(n)).collect())
            .collect(),
        InputDomain::FrequencyWrapped => (0..half_bin_count(n))
            .map(|bin| {
                let mut slots = vec![re_slot(n, bin).expect("bin <= n/2")];
                if let Some(slot) = im_slot(n, bin) {
                    slots.push(slot);
                }
                slots
            })
            .collect(),
    }
}

/// Gaussian elimination with partial pivoting; `None` when a pivot is
/// effectively zero (singular system).
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("nonempty range");
        if a[pivot_row][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for col in row + 1..n {
            acc -= a[row][col] * x[col];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// One LIME run: random binary segment masks, model evaluations on masked
/// inputs, an unweighted least-squares linear surrogate over the mask
/// indicators, then hard top-k selection. Kept coefficients are replicated
/// over their segment's positions.
pub fn lime(
    h: &ModelHandle,
    x: &[f64],
    target: usize,
    cfg: &LimeConfig,
) -> Result<AttributionResult, AttribError> {
    use rand::{Rng, SeedableRng};
    let segments = segment_slots(h, x.len(), cfg.segment_len);
    let s_count = segments.len();
    cfg.validate(s_count)?;
    let k = cfg.effective_k(s_count);

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    // Normal equations for the design [intercept | indicators].
    let dim = s_count + 1;
    let mut xtx = vec![vec![0.0; dim]; dim];
    let mut xty = vec![0.0; dim];
    let mut masked = vec![0.0; x.len()];
    let mut row = vec![0.0; dim];
    for _ in 0..cfg.n_perturbations {
        row[0] = 1.0;
        masked.copy_from_slice(x);
        for (s, slots) in segments.iter().enumerate() {
            let keep = !rng.random_bool(cfg.mask_probability);
            row[s + 1] = if keep { 1.0 } else { 0.0 };
            if !keep {
                for &slot in slots {
                    masked[slot] = 0.0;
                }
            }
        }
        let y = forward(h, &masked)?.outputs;
        if target >= y.len() {
            return Err(AttribError::Model(ModelError::BadTarget {
                target,
                outputs: y.len(),
            }));
        }
        let y = y[target];
        for i in 0..dim {
            if row[i] == 0.0 {
                continue;
            }
            for j in 0..dim {
                xtx[i][j] += row[i] * row[j];
            }
            xty[i] += row[i] * y;
        }
    }

    let mut meta = BTreeMap::new();
    meta.insert("segments".to_string(), s_count.to_string());
    meta.insert("k".to_string(), k.to_string());
    let beta = match solve_dense(xtx.clone(), xty.clone()) {
        Some(solution) => solution,
        None => {
            // Singular fit (e.g. a segment never varied): retry with a small
            // ridge term and record the fallback.
            const RIDGE: f64 = 1e-6;
            meta.insert("ridge".to_string(), format!("{RIDGE:e}"));
            let mut ridged = xtx;
            for (i, r) in ridged.iter_mut().enumerate() {
                r[i] += RIDGE;
            }
            solve_dense(ridged, xty).expect("ridge-regularized system is positive definite")
        }
    };

    // Top-k by coefficient magnitude, ties resolved toward lower segment
    // index; everything else is zeroed.
    let mut order: Vec<usize> = (0..s_count).collect();
    order.sort_by(|&a, &b| {
        beta[b + 1]
            .abs()
            .total_cmp(&beta[a + 1].abs())
            .then(a.cmp(&b))
    });
    let mut scores = vec![0.0; x.len()];
    let mut kept: Vec<usize> = order.into_iter().take(k).collect();
    kept.sort_unstable();
    for &s in &kept {
        for &slot in &segments[s] {
            scores[slot] = beta[s + 1];
        }
    }
    let scores = match h.domain {
        InputDomain::Time => scores,
        // One segment per bin: collapse the slot-space scores (re slot
        // carries the coefficient) to per-bin values.
        InputDomain::FrequencyWrapped => {
            let n = x.len();
            (0..half_bin_count(n))
                .map(|bin| scores[re_slot(n, bin).expect("bin <= n/2")])
                .collect()
        }
    };
    Ok(result(h, "", "lime", target, scores, meta))
}

/// Elementwise mean of `runs` LIME runs seeded `seed`, `seed+1`, …; tagged
/// `lime-agg{runs}`.
pub fn lime_aggregate(
    h: &ModelHandle,
    x: &[f64],
    target: usize,
    cfg: &LimeConfig,
) -> Result<AttributionResult, AttribError> {
    let segments = segment_slots(h, x.len(), cfg.segment_len).len();
    cfg.validate(segments)?;
    let mut mean: Vec<f64> = Vec::new();
    let mut ridge_runs = 0usize;
    let mut single_meta = BTreeMap::new();
    for run in 0..cfg.runs {
        let run_cfg = LimeConfig {
            seed: cfg.seed + run as u64,
            ..cfg.clone()
        };
        let out = lime(h, x, target, &run_cfg)?;
        if out.meta.contains_key("ridge") {
            ridge_runs += 1;
        }
        if run == 0 {
            single_meta = out.meta.clone();
            mean = vec![0.0; out.scores.len()];
        }
        for (m, s) in mean.iter_mut().zip(&out.scores) {
            *m += s;
        }
    }
    for m in &mut mean {
        *m /= cfg.runs as f64;
    }
    let mut meta = single_meta;
    meta.remove("ridge");
    meta.insert("runs".to_string(), cfg.runs.to_string());
    if ridge_runs > 0 {
        meta.insert("ridge_runs".to_string(), ridge_runs.to_string());
    }
    let tag = format!("lime-agg{}", cfg.runs);
    Ok(result(h, "", &tag, target, mean, meta))
}

/// Runs one method on one handle, stamping the sample id.
pub fn run_method(
    h: &ModelHandle,
    x: &[f64],
    sample_id: &str,
    target: usize,
    method: Method,
    cfg: &ExplainConfig,
) -> Result<AttributionResult, AttribError> {
    let mut out = match method {
        Method::Saliency => saliency(h, x, target)?,
        Method::InputXGradient => input_x_gradient(h, x, target)?,
        Method::IntegratedGradients => integrated_gradients(h, x, target, cfg.ig_steps, None)?,
        Method::Occlusion => occlusion(h, x, target, &cfg.occlusion)?,
        Method::Lime => lime(h, x, target, &cfg.lime)?,
        Method::LimeAggregate(runs) => {
            let lime_cfg = LimeConfig {
                runs: runs.unwrap_or(cfg.lime.runs),
                ..cfg.lime.clone()
            };
            lime_aggregate(h, x, target, &lime_cfg)?
        }
    };
    out.sample_id = sample_id.to_string();
    Ok(out)
}

/// Explains one sample in both domains: the method runs once on the time
/// handle with the raw series and once on the frequency wrapper with the
/// packed spectrum of the same series. All-zero output in either domain is
/// an error, never a silent pass.
pub fn explain_pair(
    h_time: &ModelHandle,
    x: &[f64],
    sample_id: &str,
    target: usize,
    method: Method,
    cfg: &ExplainConfig,
) -> Result<AttributionPair, AttribError> {
    if h_time.domain != InputDomain::Time {
        return Err(AttribError::Config {
            field: "handle",
            reason: "explain_pair requires a time-domain handle".into(),
        });
    }
    let time_result = run_method(h_time, x, sample_id, target, method, cfg)?;
    let wrapped = wrap_frequency(h_time)?;
    let packed = pack(&dft(x)?)?;
    let freq_result = run_method(&wrapped, &packed.values, sample_id, target, method, cfg)?;
    for r in [&time_result, &freq_result] {
        if r.scores.iter().all(|s| *s == 0.0) {
            return Err(AttribError::Degenerate {
                sample_id: sample_id.to_string(),
                method: r.method.clone(),
                domain: r.domain.name().to_string(),
            });
        }
    }
    Ok(AttributionPair {
        sample_id: sample_id.to_string(),
        time_scores: time_result.scores,
        freq_scores: freq_result.scores,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{ablate_bins, synthesis_adjoint};
    use crate::tinymodel::{init_params, MlpParams, TaskKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn linear_model(w: Vec<f64>) -> ModelHandle {
        let n = w.len();
        ModelHandle::time(MlpParams {
            layer_sizes: vec![n, 1],
            weights: vec![vec![w]],
            biases: vec![vec![0.0]],
            task: TaskKind::Regression,
        })
    }

    fn two_class_linear(w0: Vec<f64>, w1: Vec<f64>) -> ModelHandle {
        let n = w0.len();
        ModelHandle::time(MlpParams {
            layer_sizes: vec![n, 2],
            weights: vec![vec![w0, w1]],
            biases: vec![vec![0.0, 0.0]],
            task: TaskKind::Classification,
        })
    }

    fn constant_model(n: usize) -> ModelHandle {
        ModelHandle::time(MlpParams {
            layer_sizes: vec![n, 2],
            weights: vec![vec![vec![0.0; n]; 2]],
            biases: vec![vec![0.75, -0.25]],
            task: TaskKind::Classification,
        })
    }

    fn random_mlp_handle(n: usize, seed: u64) -> ModelHandle {
        ModelHandle::time(init_params(&[n, 12, 3], seed, TaskKind::Classification).unwrap())
    }

    fn random_input(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    #[test]
    fn saliency_on_linear_model_is_weight_magnitude() {
        let h = linear_model(vec![1.0, -2.0, 0.5, 0.0]);
        let out = saliency(&h, &[3.0, 1.0, -1.0, 2.0], 0).unwrap();
        assert_eq!(out.scores, vec![1.0, 2.0, 0.5, 0.0]);
        assert_eq!(out.domain, Domain::Time);
    }

    #[test]
    fn saliency_on_wrapped_linear_model_folds_the_adjoint() {
        let w = vec![1.0, -2.0, 0.5, 0.0, 0.25, 1.5, -0.5, 0.75];
        let h = linear_model(w.clone());
        let wrapped = wrap_frequency(&h).unwrap();
        let x = random_input(8, 3);
        let p = pack(&dft(&x).unwrap()).unwrap();
        let out = saliency(&wrapped, &p.values, 0).unwrap();
        let expected = fold_bin_scores(&synthesis_adjoint(&w).unwrap().values).unwrap();
        assert_eq!(out.scores.len(), 5);
        for (a, b) in out.scores.iter().zip(&expected.scores) {
            assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn input_x_gradient_closed_forms() {
        let h = linear_model(vec![2.0, -1.0, 0.5]);
        let x = [3.0, 4.0, -2.0];
        let out = input_x_gradient(&h, &x, 0).unwrap();
        assert_eq!(out.scores, vec![6.0, -4.0, -1.0]);

        let zero = input_x_gradient(&h, &[0.0; 3], 0).unwrap();
        assert!(zero.scores.iter().all(|s| *s == 0.0));
    }

    #[test]
    fn integrated_gradients_is_exact_on_linear_models() {
        let h = two_class_linear(vec![1.0, 2.0, -1.0, 0.5], vec![0.0, 1.0, 1.0, -2.0]);
        let x = [0.5, -1.5, 2.0, 1.0];
        for steps in [1usize, 7, 50] {
            let out = integrated_gradients(&h, &x, 1, steps, None).unwrap();
            let expected = [0.0, -1.5, 2.0, -2.0];
            for (a, b) in out.scores.iter().zip(&expected) {
                assert!((a - b).abs() <= 1e-12, "steps {steps}: {a} vs {b}");
            }
        }
        let at_baseline = integrated_gradients(&h, &[0.0; 4], 1, 9, None).unwrap();
        assert!(at_baseline.scores.iter().all(|s| *s == 0.0));
    }

    #[test]
    fn integrated_gradients_completeness_on_random_models() {
        for case in 0..5u64 {
            let n = 8;
            let h = random_mlp_handle(n, 40 + case);
            let x = random_input(n, 50 + case);
            let target = (case % 3) as usize;
            let out = integrated_gradients(&h, &x, target, 300, None).unwrap();
            let f_x = forward(&h, &x).unwrap().outputs[target];
            let f_0 = forward(&h, &vec![0.0; n]).unwrap().outputs[target];
            let total: f64 = out.scores.iter().sum();
            let gap = (total - (f_x - f_0)).abs();
            assert!(
                gap <= 1e-3 * (f_x - f_0).abs() + 1e-6,
                "case {case}: completeness gap {gap} vs span {}",
                f_x - f_0
            );
        }
    }

    #[test]
    fn occlusion_window_one_matches_linear_closed_form() {
        let h = two_class_linear(vec![1.0, -2.0, 3.0, 0.5], vec![0.0; 4]);
        let x = [2.0, 1.0, -1.0, 4.0];
        let cfg = OcclusionConfig {
            window_len: 1,
            stride: 1,
        };
        let out = occlusion(&h, &x, 0, &cfg).unwrap();
        assert_eq!(out.scores, vec![2.0, -2.0, -3.0, 2.0]);

        let constant = constant_model(4);
        let flat = occlusion(&constant, &x, 0, &cfg).unwrap();
        assert!(flat.scores.iter().all(|s| *s == 0.0));
    }

    #[test]
    fn occlusion_averages_overlapping_windows() {
        let h = linear_model(vec![1.0, 1.0, 1.0, 1.0]);
        let x = [1.0, 2.0, 3.0, 4.0];
        let cfg = OcclusionConfig {
            window_len: 2,
            stride: 1,
        };
        let out = occlusion(&h, &x, 0, &cfg).unwrap();
        // Windows drop sums: [3, 5, 7]; position 1 is covered by windows 0
        // and 1, so its score is (3 + 5) / 2.
        assert_eq!(out.scores, vec![3.0, 4.0, 6.0, 7.0]);
    }

    #[test]
    fn frequency_occlusion_equals_bin_ablation() {
        let n = 16;
        let h = random_mlp_handle(n, 60);
        let wrapped = wrap_frequency(&h).unwrap();
        let x = random_input(n, 61);
        let packed = pack(&dft(&x).unwrap()).unwrap();
        let out = occlusion(&wrapped, &packed.values, 1, &OcclusionConfig::default()).unwrap();
        assert_eq!(out.scores.len(), half_bin_count(n));
        let base = forward(&h, &x).unwrap().outputs[1];
        for (bin, score) in out.scores.iter().enumerate() {
            let ablated = ablate_bins(&x, &[bin]).unwrap();
            let expected = base - forward(&h, &ablated).unwrap().outputs[1];
            assert!(
                (score - expected).abs() <= 1e-9,
                "bin {bin}: {score} vs {expected}"
            );
        }
    }

    #[test]
    fn lime_recovers_a_single_relevant_segment() {
        // Model reads only positions 10..15 (segment 2 of length-5 segments).
        let n = 20;
        let mut w = vec![0.0; n];
        for slot in w.iter_mut().take(15).skip(10) {
            *slot = 1.0;
        }
        let h = linear_model(w);
        let x = vec![1.0; n];
        let cfg = LimeConfig {
            segment_len: 5,
            k: Some(1),
            n_perturbations: 64,
            seed: 5,
            ..LimeConfig::default()
        };
        let out = lime(&h, &x, 0, &cfg).unwrap();
        for (i, s) in out.scores.iter().enumerate() {
            if (10..15).contains(&i) {
                assert!((s - 5.0).abs() < 1e-6, "position {i}: {s}");
            } else {
                assert_eq!(*s, 0.0, "position {i} leaked attribution");
            }
        }
        assert_eq!(out.meta.get("segments"), Some(&"4".to_string()));
    }

    #[test]
    fn lime_is_deterministic_and_k_sparse() {
        let n = 30;
        let h = random_mlp_handle(n, 70);
        let x = random_input(n, 71);
        let cfg = LimeConfig {
            segment_len: 3,
            k: Some(2),
            n_perturbations: 40,
            seed: 9,
            ..LimeConfig::default()
        };
        let a = lime(&h, &x, 0, &cfg).unwrap();
        let b = lime(&h, &x, 0, &cfg).unwrap();
        assert_eq!(a, b);
        let nonzero_segments = a
            .scores
            .chunks(3)
            .filter(|c| c.iter().any(|v| *v != 0.0))
            .count();
        assert!(nonzero_segments <= 2, "more than k segments kept");
    }

    #[test]
    fn lime_rejects_insufficient_perturbations() {
        let h = random_mlp_handle(20, 72);
        let x = random_input(20, 73);
        let cfg = LimeConfig {
            segment_len: 2,
            n_perturbations: 5,
            ..LimeConfig::default()
        };
        let err = lime(&h, &x, 0, &cfg).unwrap_err();
        assert!(matches!(err, AttribError::Config { field: "n_perturbations", .. }));
    }

    #[test]
    fn lime_aggregate_is_the_mean_and_densifies_a_sum_model() {
        let n = 40;
        let h = linear_model(vec![1.0; n]);
        let x = vec![1.0; n];
        let cfg = LimeConfig {
            segment_len: 4,
            k: Some(2),
            n_perturbations: 50,
            runs: 1,
            seed: 31,
            ..LimeConfig::default()
        };
        let single = lime(&h, &x, 0, &cfg).unwrap();
        let agg1 = lime_aggregate(&h, &x, 0, &cfg).unwrap();
        assert_eq!(single.scores, agg1.scores);
        assert_eq!(agg1.method, "lime-agg1");

        let cfg100 = LimeConfig {
            runs: 100,
            ..cfg.clone()
        };
        let agg = lime_aggregate(&h, &x, 0, &cfg100).unwrap();
        assert_eq!(agg.method, "lime-agg100");
        let single_support = single.scores.iter().filter(|s| **s != 0.0).count();
        let agg_support = agg.scores.iter().filter(|s| **s != 0.0).count();
        assert!(single_support <= 8, "single run support {single_support}");
        assert!(
            agg_support * 10 >= n * 9,
            "aggregate support only {agg_support}/{n}"
        );

        // Exact mean check against manual recomputation.
        let mut manual = vec![0.0; n];
        for run in 0..100u64 {
            let run_cfg = LimeConfig {
                seed: 31 + run,
                runs: 100,
                ..cfg.clone()
            };
            let out = lime(&h, &x, 0, &run_cfg).unwrap();
            for (m, s) in manual.iter_mut().zip(&out.scores) {
                *m += s;
            }
        }
        for (m, a) in manual.iter().zip(&agg.scores) {
            assert!((m / 100.0 - a).abs() <= 1e-12);
        }
    }

    #[test]
    fn constant_model_yields_zero_lime_and_degenerate_pair() {
        let n = 16;
        let h = constant_model(n);
        let x = random_input(n, 80);
        let cfg = LimeConfig {
            segment_len: 4,
            n_perturbations: 16,
            ..LimeConfig::default()
        };
        let out = lime(&h, &x, 0, &cfg).unwrap();
        assert!(out.scores.iter().all(|s| s.abs() < 1e-9));

        let err = explain_pair(&h, &x, "const", 0, Method::Saliency, &ExplainConfig::default())
            .unwrap_err();
        assert!(matches!(err, AttribError::Degenerate { .. }), "got {err}");
    }

    #[test]
    fn explain_pair_has_contract_shapes() {
        let n = 24;
        let h = random_mlp_handle(n, 90);
        let x = random_input(n, 91);
        let cfg = ExplainConfig {
            lime: LimeConfig {
                segment_len: 4,
                n_perturbations: 40,
                ..LimeConfig::default()
            },
            ..ExplainConfig::default()
        };
        for method in [
            Method::Saliency,
            Method::InputXGradient,
            Method::IntegratedGradients,
            Method::Occlusion,
            Method::Lime,
            Method::LimeAggregate(Some(3)),
        ] {
            let pair = explain_pair(&h, &x, "shape", 0, method, &cfg).unwrap();
            assert_eq!(pair.time_scores.len(), n, "{method:?}");
            assert_eq!(pair.freq_scores.len(), half_bin_count(n), "{method:?}");
            assert!(pair.time_scores.iter().all(|v| v.is_finite()));
            assert!(pair.freq_scores.iter().all(|v| v.is_finite()));
        }
    }

    #[test]
    fn method_names_parse_and_reject() {
        assert_eq!("saliency".parse::<Method>().unwrap(), Method::Saliency);
        assert_eq!(
            "input-x-gradient".parse::<Method>().unwrap(),
            Method::InputXGradient
        );
        assert_eq!(
            "lime-agg100".parse::<Method>().unwrap(),
            Method::LimeAggregate(Some(100))
        );
        assert_eq!(
            "lime-agg".parse::<Method>().unwrap(),
            Method::LimeAggregate(None)
        );
        let err = "deeplift".parse::<Method>().unwrap_err();
        let message = err.to_string();
        assert!(message.contains("deeplift"));
        assert!(message.contains("check"), "no ingestion hint: {message}");
    }

    #[test]
    fn saliency_matches_finite_difference_magnitudes() {
        let n = 10;
        let h = random_mlp_handle(n, 95);
        let x = random_input(n, 96);
        let out = saliency(&h, &x, 2).unwrap();
        for i in 0..n {
            let mut plus = x.clone();
            plus[i] += 1e-5;
            let mut minus = x.clone();
            minus[i] -= 1e-5;
            let fd = (forward(&h, &plus).unwrap().outputs[2]
                - forward(&h, &minus).unwrap().outputs[2])
                / 2e-5;
            let tol = 1e-4 * fd.abs().max(out.scores[i]).max(1e-3);
            assert!(
                (out.scores[i] - fd.abs()).abs() <= tol,
                "coord {i}: {} vs |{fd}|",
                out.scores[i]
            );
        }
    }
}
