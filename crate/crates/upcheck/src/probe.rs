//! Frequency/amplitude response maps: probe a trained time-domain model
//! with single sine tones plus a small amount of Gaussian noise over an
//! (amplitude × bin) grid and record the target-class logit.
//!
//! Each cell is averaged over `repeats` noisy draws with its own
//! deterministic RNG stream (`seed ⊕ cell index`), so cells could be
//! evaluated in any order — or in parallel — without changing a digit.

use std::f64::consts::TAU;
use std::fmt::Write as FmtWrite;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tinymodel::{forward, InputDomain, ModelError, ModelHandle};

/// Errors from probe configuration and evaluation.
#[derive(Debug, Error)]
pub enum ProbeError {
    #[error("invalid probe config field `{field}`: {reason}")]
    Config {
        field: &'static str,
        reason: String,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Probe grid settings. Bins must be alias-free tone frequencies
/// (`0 < bin ≤ ⌊N/2⌋`); amplitude values are taken as given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    pub freq_bins: Vec<usize>,
    pub amplitudes: Vec<f64>,
    pub noise_sigma: f64,
    pub repeats: usize,
    pub seed: u64,
    pub target: usize,
    /// With phase averaging each repeat draws a uniform random phase;
    /// otherwise every tone starts at phase 0.
    pub phase_averaging: bool,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            freq_bins: vec![4, 8, 12, 16, 24, 30, 45, 60],
            amplitudes: vec![0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0],
            noise_sigma: 0.01,
            repeats: 8,
            seed: 0,
            target: 0,
            phase_averaging: false,
        }
    }
}

impl ProbeConfig {
    fn validate(&self, n: usize, outputs: usize) -> Result<(), ProbeError> {
        let fail = |field: &'static str, reason: String| Err(ProbeError::Config { field, reason });
        if self.freq_bins.is_empty() {
            return fail("freq_bins", "need at least one bin".into());
        }
        let max = n / 2;
        for &bin in &self.freq_bins {
            if bin == 0 || bin > max {
                return fail(
                    "freq_bins",
                    format!("bin {bin} outside half-open range (0, {max}] for length {n}"),
                );
            }
        }
        if self.amplitudes.is_empty() {
            return fail("amplitudes", "need at least one amplitude".into());
        }
        if self.amplitudes.iter().any(|a| !a.is_finite()) {
            return fail("amplitudes", "non-finite amplitude".into());
        }
        if self.repeats == 0 {
            return fail("repeats", "must be at least 1".into());
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return fail(
                "noise_sigma",
                format!("must be finite and >= 0, got {}", self.noise_sigma),
            );
        }
        if self.target >= outputs {
            return fail(
                "target",
                format!("class {} out of range for {outputs} outputs", self.target),
            );
        }
        Ok(())
    }
}

/// Mean and per-cell spread of the target logit, indexed
/// `[amplitude][bin]`, plus the configuration that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseGrid {
    /// Mean target logit per cell.
    pub mean: Vec<Vec<f64>>,
    /// Population standard deviation over the repeats (0 for one repeat).
    pub std: Vec<Vec<f64>>,
    pub config: ProbeConfig,
}

impl ResponseGrid {
    /// CSV rendering: a `#`-prefixed config echo, a header row of bins, and
    /// one row per amplitude (`mean±std` cells keep both statistics).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let echo = serde_json::to_string(&self.config).expect("config serializes");
        writeln!(out, "# config: {echo}").expect("string write");
        out.push_str("amplitude");
        for bin in &self.config.freq_bins {
            write!(out, ",{bin}").expect("string write");
        }
        out.push('\n');
        for (ai, amplitude) in self.config.amplitudes.iter().enumerate() {
            write!(out, "{amplitude}").expect("string write");
            for bi in 0..self.config.freq_bins.len() {
                write!(out, ",{}±{}", self.mean[ai][bi], self.std[ai][bi]).expect("string write");
            }
            out.push('\n');
        }
        out
    }
}

/// Evaluates the model on `amplitude·sin(2π·bin·t/N [+ phase]) + noise` for
/// every grid cell, averaging the target logit over the repeats.
pub fn amp_freq_response(h: &ModelHandle, cfg: &ProbeConfig) -> Result<ResponseGrid, ProbeError> {
    if h.domain != InputDomain::Time {
        return Err(ProbeError::Config {
            field: "handle",
            reason: "probing requires a time-domain handle".into(),
        });
    }
    h.params.validate()?;
    let n = h.params.input_len();
    cfg.validate(n, h.params.output_len())?;

    let bins = cfg.freq_bins.len();
    let mut mean = vec![vec![0.0; bins]; cfg.amplitudes.len()];
    let mut std = vec![vec![0.0; bins]; cfg.amplitudes.len()];
    let mut signal = vec![0.0; n];
    for (ai, &amplitude) in cfg.amplitudes.iter().enumerate() {
        for (bi, &bin) in cfg.freq_bins.iter().enumerate() {
            let cell_index = (ai * bins + bi) as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ cell_index);
            let mut logits = Vec::with_capacity(cfg.repeats);
            for _ in 0..cfg.repeats {
                let phase = if cfg.phase_averaging {
                    rng.random::<f64>() * TAU
                } else {
                    0.0
                };
                for (t, v) in signal.iter_mut().enumerate() {
                    let tone = (TAU * bin as f64 * t as f64 / n as f64 + phase).sin();
                    let noise: f64 = rng.sample(StandardNormal);
                    *v = amplitude * tone + cfg.noise_sigma * noise;
                }
                logits.push(forward(h, &signal)?.outputs[cfg.target]);
            }
            let m = logits.iter().sum::<f64>() / cfg.repeats as f64;
            let var = logits.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / cfg.repeats as f64;
            mean[ai][bi] = m;
            std[ai][bi] = var.sqrt();
        }
    }
    Ok(ResponseGrid {
        mean,
        std,
        config: cfg.clone(),
    })
}
