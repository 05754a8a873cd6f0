//! Synthetic time-series classification data with two independent feature
//! families: a class-specific shapelet (a short fixed pattern inserted at a
//! random offset) and a class-specific dominant frequency (a sine at a fixed
//! bin with random phase). Two non-feature shapelets and one non-feature tone
//! are added with a label-independent probability so that they carry no class
//! information.
//!
//! Training samples carry exactly one of the two feature families (half
//! shapelet-only, half frequency-only per class), which forces a model to
//! learn both. Validation samples come in three groups: `both`, `time-only`
//! (shapelet without tone), and `freq-only` (tone without shapelet), so that
//! downstream attribution analysis can ask where a model looks when only one
//! family is present.
//!
//! Generation is sequential and deterministic: one seeded ChaCha8 stream
//! drives every draw in a documented order, so a seed pins the dataset bit
//! for bit.

use std::f64::consts::TAU;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectral::TimeSeries;

/// Errors from dataset generation and file handling.
#[derive(Debug, Error)]
pub enum SynthError {
    /// A configuration field violates its documented constraint.
    #[error("invalid config field `{field}`: {reason}")]
    Config {
        field: &'static str,
        reason: String,
    },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    /// A dataset file line failed to parse or validate.
    #[error("dataset file line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Which validation slice a sample's feature mix belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleGroup {
    /// Shapelet and dominant frequency both present.
    Both,
    /// Shapelet only.
    TimeOnly,
    /// Dominant frequency only.
    FreqOnly,
}

impl SampleGroup {
    fn from_flags(has_shapelet: bool, has_freq: bool) -> Option<Self> {
        match (has_shapelet, has_freq) {
            (true, true) => Some(SampleGroup::Both),
            (true, false) => Some(SampleGroup::TimeOnly),
            (false, true) => Some(SampleGroup::FreqOnly),
            (false, false) => None,
        }
    }
}

/// Configuration for [`generate_dataset`]. `class_freq_bins` has one entry
/// per class, so its length fixes the class count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    /// Series length N.
    pub length: usize,
    /// Total number of training samples.
    pub n_train: usize,
    /// Samples per validation group.
    pub n_val_per_group: usize,
    pub seed: u64,
    /// Length of every inserted shapelet pattern.
    pub shapelet_len: usize,
    /// Peak amplitude of the shapelet patterns.
    pub shapelet_amplitude: f64,
    /// Dominant frequency bin per class; one entry per class.
    pub class_freq_bins: Vec<usize>,
    /// Amplitude of the class sine and the non-feature tone.
    pub freq_amplitude: f64,
    /// Number of fixed non-feature shapelet patterns (drawn once per seed).
    pub nonfeature_shapelets: usize,
    /// Bin of the non-feature tone; distinct from every class bin.
    pub nonfeature_freq_bin: usize,
    /// Probability of adding each non-feature, independently per sample.
    pub nonfeature_probability: f64,
    /// Standard deviation of the Gaussian background noise.
    pub noise_sigma: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            length: 256,
            n_train: 4096,
            n_val_per_group: 128,
            seed: 7,
            shapelet_len: 20,
            shapelet_amplitude: 1.0,
            // Each class tone sits inside that class's own shapelet band
            // (window harmonics 2 and 9 of length 20 → bins ≈ 25.6 and
            // 115.2 at N = 256), so the two cue families reinforce rather
            // than cross one another; the non-feature tone sits in the gap
            // between the bands.
            class_freq_bins: vec![25, 115],
            freq_amplitude: 1.0,
            nonfeature_shapelets: 2,
            nonfeature_freq_bin: 64,
            nonfeature_probability: 0.5,
            noise_sigma: 0.1,
        }
    }
}

impl SynthConfig {
    /// Number of classes (one dominant bin per class).
    pub fn classes(&self) -> usize {
        self.class_freq_bins.len()
    }

    /// Checks every documented invariant, naming the offending field.
    pub fn validate(&self) -> Result<(), SynthError> {
        let fail = |field: &'static str, reason: String| Err(SynthError::Config { field, reason });
        if self.length < 2 {
            return fail("length", format!("need at least 2 samples, got {}", self.length));
        }
        if self.shapelet_len == 0 || self.shapelet_len >= self.length {
            return fail(
                "shapelet_len",
                format!(
                    "must lie in 1..{} (series length), got {}",
                    self.length, self.shapelet_len
                ),
            );
        }
        if self.class_freq_bins.is_empty() {
            return fail("class_freq_bins", "need at least one class bin".into());
        }
        let half = self.length / 2;
        for (i, &bin) in self.class_freq_bins.iter().enumerate() {
            if bin == 0 || bin >= half {
                return fail(
                    "class_freq_bins",
                    format!("bin {bin} (class {i}) outside open range (0, {half})"),
                );
            }
        }
        if self.nonfeature_freq_bin == 0 || self.nonfeature_freq_bin >= half {
            return fail(
                "nonfeature_freq_bin",
                format!(
                    "bin {} outside open range (0, {half})",
                    self.nonfeature_freq_bin
                ),
            );
        }
        let mut bins: Vec<usize> = self.class_freq_bins.clone();
        bins.push(self.nonfeature_freq_bin);
        bins.sort_unstable();
        if bins.windows(2).any(|w| w[0] == w[1]) {
            return fail(
                "class_freq_bins",
                "class bins and non-feature bin must be pairwise distinct".into(),
            );
        }
        if !(self.shapelet_amplitude > 0.0) {
            return fail(
                "shapelet_amplitude",
                format!("must be > 0, got {}", self.shapelet_amplitude),
            );
        }
        if !(self.freq_amplitude > 0.0) {
            return fail(
                "freq_amplitude",
                format!("must be > 0, got {}", self.freq_amplitude),
            );
        }
        if !(0.0..=1.0).contains(&self.nonfeature_probability) {
            return fail(
                "nonfeature_probability",
                format!("must lie in [0, 1], got {}", self.nonfeature_probability),
            );
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return fail(
                "noise_sigma",
                format!("must be finite and >= 0, got {}", self.noise_sigma),
            );
        }
        Ok(())
    }
}

/// One generated series with its label and feature-presence flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub id: String,
    pub label: usize,
    pub group: SampleGroup,
    pub has_shapelet: bool,
    pub has_freq: bool,
    pub values: TimeSeries,
}

/// The generated splits plus the configuration that produced them. Sample
/// ids carry the split (`train-`, `val-both-`, `val-time-`, `val-freq-`), so
/// a flat file round-trips losslessly.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthDataset {
    pub train: Vec<LabeledSample>,
    pub val_both: Vec<LabeledSample>,
    pub val_time: Vec<LabeledSample>,
    pub val_freq: Vec<LabeledSample>,
    pub config: SynthConfig,
}

impl SynthDataset {
    /// All splits in file order: train, then the three validation groups.
    pub fn all_samples(&self) -> impl Iterator<Item = &LabeledSample> {
        self.train
            .iter()
            .chain(&self.val_both)
            .chain(&self.val_time)
            .chain(&self.val_freq)
    }
}

/// Fixed patterns drawn once from the seed: per-class shapelets followed by
/// the non-feature shapelets, each peak-normalized and scaled.
struct Patterns {
    class_shapelets: Vec<Vec<f64>>,
    nonfeature_shapelets: Vec<Vec<f64>>,
}

/// Relative weight of the random in-band texture next to the dominant
/// harmonic of a class pattern.
const PATTERN_TEXTURE_WEIGHT: f64 = 0.25;
/// Fractional offset of the texture harmonics around the dominant one.
const PATTERN_TEXTURE_SPREAD: f64 = 0.4;

fn hann_taper(pattern: &mut [f64]) {
    let len = pattern.len();
    if len >= 4 {
        for (t, v) in pattern.iter_mut().enumerate() {
            *v *= 0.5 - 0.5 * (TAU * t as f64 / (len - 1) as f64).cos();
        }
    }
}

fn peak_normalize(pattern: Vec<f64>, amplitude: f64) -> Vec<f64> {
    let peak = pattern.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if peak == 0.0 {
        // Degenerate draw (all coefficients zero, or a length the taper
        // annihilates): keep the pattern usable instead of dividing by zero.
        return vec![amplitude; pattern.len()];
    }
    pattern.iter().map(|v| v / peak * amplitude).collect()
}

/// Draws one class shapelet: a dominant within-window harmonic at a random
/// phase plus faint random texture just beside it, under a Hann taper,
/// peak-normalized to `amplitude`. A smooth narrowband bump keeps a
/// recognizable magnitude spectrum wherever it is inserted — that is what
/// lets a position-agnostic dense model learn shapelets placed at uniformly
/// random offsets — and the taper avoids step discontinuities at the
/// insertion edges. The number of random draws is independent of `len` and
/// `amplitude`, keeping the stream alignment stable across configs that
/// differ only in those fields.
fn draw_class_pattern(rng: &mut ChaCha8Rng, len: usize, amplitude: f64, dominant: f64) -> Vec<f64> {
    // Keep every harmonic below the within-window alias limit for short
    // patterns; the default length 20 is unaffected.
    let alias_limit = ((len / 2).max(1)) as f64;
    let clamp = |j: f64| if j > alias_limit { alias_limit } else { j };
    let phase: f64 = rng.random::<f64>() * TAU;
    let mut pattern = vec![0.0; len];
    let angle = |j: f64, t: usize| TAU * clamp(j) * t as f64 / len as f64;
    for (t, v) in pattern.iter_mut().enumerate() {
        *v = (angle(dominant, t) + phase).sin();
    }
    for j in [
        dominant - PATTERN_TEXTURE_SPREAD,
        dominant + PATTERN_TEXTURE_SPREAD,
    ] {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        for (t, v) in pattern.iter_mut().enumerate() {
            *v += PATTERN_TEXTURE_WEIGHT * (a * angle(j, t).cos() + b * angle(j, t).sin());
        }
    }
    hann_taper(&mut pattern);
    peak_normalize(pattern, amplitude)
}

/// Draws one non-feature shapelet: a tapered broadband noise blip. Its flat,
/// weak spectral splash carries no class information, so it works as pure
/// clutter against the narrowband class patterns.
fn draw_noise_pattern(rng: &mut ChaCha8Rng, len: usize, amplitude: f64) -> Vec<f64> {
    let mut pattern: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
    hann_taper(&mut pattern);
    peak_normalize(pattern, amplitude)
}

/// Evenly spaced dominant harmonics across the usable within-window range,
/// so class bands sit as far apart as the shapelet length allows. One class
/// lands mid-range.
fn class_dominants(classes: usize, shapelet_len: usize) -> Vec<f64> {
    let lo = 2.0;
    let hi = ((shapelet_len / 2).saturating_sub(1) as f64).max(lo);
    (0..classes)
        .map(|i| {
            if classes == 1 {
                (lo + hi) / 2.0
            } else {
                lo + (hi - lo) * i as f64 / (classes - 1) as f64
            }
        })
        .collect()
}

fn draw_patterns(rng: &mut ChaCha8Rng, cfg: &SynthConfig) -> Patterns {
    let class_shapelets = class_dominants(cfg.classes(), cfg.shapelet_len)
        .into_iter()
        .map(|dominant| draw_class_pattern(rng, cfg.shapelet_len, cfg.shapelet_amplitude, dominant))
        .collect();
    let nonfeature_shapelets = (0..cfg.nonfeature_shapelets)
        .map(|_| draw_noise_pattern(rng, cfg.shapelet_len, cfg.shapelet_amplitude))
        .collect();
    Patterns {
        class_shapelets,
        nonfeature_shapelets,
    }
}

fn add_tone(values: &mut [f64], bin: usize, amplitude: f64, phase: f64) {
    let n = values.len() as f64;
    for (t, v) in values.iter_mut().enumerate() {
        *v += amplitude * (TAU * bin as f64 * t as f64 / n + phase).sin();
    }
}

/// Draw order per sample (frozen for reproducibility): noise, shapelet
/// offset, tone phase, then per non-feature a coin followed by its offset or
/// phase only when the coin lands.
fn synth_sample(
    rng: &mut ChaCha8Rng,
    cfg: &SynthConfig,
    patterns: &Patterns,
    id: String,
    label: usize,
    has_shapelet: bool,
    has_freq: bool,
) -> LabeledSample {
    let n = cfg.length;
    let mut values: Vec<f64> = (0..n)
        .map(|_| cfg.noise_sigma * rng.sample::<f64, _>(StandardNormal))
        .collect();
    if has_shapelet {
        let offset = rng.random_range(0..n - cfg.shapelet_len);
        for (i, &p) in patterns.class_shapelets[label].iter().enumerate() {
            values[offset + i] += p;
        }
    }
    if has_freq {
        let phase = rng.random::<f64>() * TAU;
        add_tone(&mut values, cfg.class_freq_bins[label], cfg.freq_amplitude, phase);
    }
    for pattern in &patterns.nonfeature_shapelets {
        if rng.random_bool(cfg.nonfeature_probability) {
            let offset = rng.random_range(0..n - cfg.shapelet_len);
            for (i, &p) in pattern.iter().enumerate() {
                values[offset + i] += p;
            }
        }
    }
    if rng.random_bool(cfg.nonfeature_probability) {
        let phase = rng.random::<f64>() * TAU;
        add_tone(&mut values, cfg.nonfeature_freq_bin, cfg.freq_amplitude, phase);
    }
    let group = SampleGroup::from_flags(has_shapelet, has_freq)
        .expect("samples always carry at least one feature");
    LabeledSample {
        id,
        label,
        group,
        has_shapelet,
        has_freq,
        values,
    }
}

/// Generates all four splits from one sequential seeded stream. Training
/// samples alternate label and feature kind so that each class is split
/// exactly in half between shapelet-only and frequency-only (±1 when counts
/// are odd); validation groups alternate labels only.
pub fn generate_dataset(cfg: &SynthConfig) -> Result<SynthDataset, SynthError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let patterns = draw_patterns(&mut rng, cfg);
    let classes = cfg.classes();

    let train: Vec<LabeledSample> = (0..cfg.n_train)
        .map(|i| {
            let label = i % classes;
            let shapelet_only = (i / classes) % 2 == 0;
            synth_sample(
                &mut rng,
                cfg,
                &patterns,
                format!("train-{i:05}"),
                label,
                shapelet_only,
                !shapelet_only,
            )
        })
        .collect();

    let val_group = |prefix: &str, has_shapelet: bool, has_freq: bool, rng: &mut ChaCha8Rng| {
        (0..cfg.n_val_per_group)
            .map(|i| {
                synth_sample(
                    rng,
                    cfg,
                    &patterns,
                    format!("val-{prefix}-{i:05}"),
                    i % classes,
                    has_shapelet,
                    has_freq,
                )
            })
            .collect::<Vec<_>>()
    };
    let val_both = val_group("both", true, true, &mut rng);
    let val_time = val_group("time", true, false, &mut rng);
    let val_freq = val_group("freq", false, true, &mut rng);

    Ok(SynthDataset {
        train,
        val_both,
        val_time,
        val_freq,
        config: cfg.clone(),
    })
}

/// Writes the dataset as JSON lines: a `{"config": …}` header, then one
/// sample per line in split order.
pub fn write_dataset(ds: &SynthDataset, path: &Path) -> Result<(), SynthError> {
    let mut out = BufWriter::new(File::create(path)?);
    let header = serde_json::json!({ "config": ds.config });
    writeln!(out, "{header}").map_err(SynthError::Io)?;
    for sample in ds.all_samples() {
        let line = serde_json::to_string(sample)
            .expect("samples serialize without error");
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct Header {
    config: SynthConfig,
}

/// Reads a dataset file back, validating the header, per-line shape, and
/// group/flag consistency, and reassigning splits from the id prefixes.
pub fn read_dataset(path: &Path) -> Result<SynthDataset, SynthError> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines().enumerate();
    let (_, first) = lines.next().ok_or(SynthError::Parse {
        line: 1,
        reason: "empty file; expected a {\"config\": …} header".into(),
    })?;
    let header: Header = serde_json::from_str(&first?).map_err(|e| SynthError::Parse {
        line: 1,
        reason: format!("bad config header: {e}"),
    })?;
    let config = header.config;
    config.validate()?;

    let mut ds = SynthDataset {
        train: Vec::new(),
        val_both: Vec::new(),
        val_time: Vec::new(),
        val_freq: Vec::new(),
        config,
    };
    for (idx, line) in lines {
        let lineno = idx + 1;
        let text = line?;
        if text.trim().is_empty() {
            continue;
        }
        let sample: LabeledSample = serde_json::from_str(&text).map_err(|e| SynthError::Parse {
            line: lineno,
            reason: e.to_string(),
        })?;
        if sample.values.len() != ds.config.length {
            return Err(SynthError::Parse {
                line: lineno,
                reason: format!(
                    "sample `{}` has {} values, config says {}",
                    sample.id,
                    sample.values.len(),
                    ds.config.length
                ),
            });
        }
        if sample.label >= ds.config.classes() {
            return Err(SynthError::Parse {
                line: lineno,
                reason: format!(
                    "sample `{}` has label {}, config has {} classes",
                    sample.id,
                    sample.label,
                    ds.config.classes()
                ),
            });
        }
        if SampleGroup::from_flags(sample.has_shapelet, sample.has_freq) != Some(sample.group) {
            return Err(SynthError::Parse {
                line: lineno,
                reason: format!(
                    "sample `{}`: group {:?} inconsistent with flags (shapelet={}, freq={})",
                    sample.id, sample.group, sample.has_shapelet, sample.has_freq
                ),
            });
        }
        let bucket = if sample.id.starts_with("train-") {
            &mut ds.train
        } else if sample.id.starts_with("val-both-") {
            &mut ds.val_both
        } else if sample.id.starts_with("val-time-") {
            &mut ds.val_time
        } else if sample.id.starts_with("val-freq-") {
            &mut ds.val_freq
        } else {
            return Err(SynthError::Parse {
                line: lineno,
                reason: format!(
                    "sample id `{}` lacks a split prefix (train-/val-both-/val-time-/val-freq-)",
                    sample.id
                ),
            });
        };
        bucket.push(sample);
    }
    Ok(ds)
}
