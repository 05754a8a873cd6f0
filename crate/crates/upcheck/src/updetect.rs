//! Uncertainty-principle violation detection for attribution pairs.
//!
//! For a length-N sequence and its unitary DFT, simultaneous concentration in
//! both domains is bounded: if the time side is ε_t-concentrated on N_t
//! entries and the frequency side ε_f-concentrated on N_f entries, then
//!
//! ```text
//! N_t · N_f ≥ N · (1 − (ε_t + ε_f))²      whenever ε_t + ε_f < 1.
//! ```
//!
//! A genuine signal/spectrum pair can never break this bound, so an
//! attribution pair that does is certain evidence that the time-domain and
//! frequency-domain explanations highlight different features. The detector
//! scans every pair of concentration thresholds — the sorted magnitudes of
//! each vector — and reports the first (or strongest) witness that breaks
//! the bound.

use serde::{Deserialize, Serialize};
use std::str::FromStr;
use thiserror::Error;

/// Errors from detector operations.
#[derive(Debug, Error, PartialEq)]
pub enum DetectError {
    #[error("attribution is degenerate: {reason}")]
    Degenerate { reason: String },
    #[error("time vector has length {len}; need at least 2")]
    TimeTooShort { len: usize },
    #[error(
        "frequency vector has length {freq_len}, but time length {time_len} \
         requires {time_len} (full spectrum) or {half} (half spectrum)"
    )]
    FreqLengthMismatch {
        time_len: usize,
        freq_len: usize,
        half: usize,
    },
    #[error("batch is empty")]
    EmptyBatch,
}

/// One sample's attribution magnitudes in both explanation spaces. The
/// frequency vector may be either a full spectrum (length `N`) or the
/// non-redundant half spectrum (length `⌊N/2⌋+1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributionPair {
    pub sample_id: String,
    pub time_scores: Vec<f64>,
    pub freq_scores: Vec<f64>,
}

/// Which witness the detector reports when several threshold pairs violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMode {
    /// First violating pair in scan order (time thresholds outer, frequency
    /// inner, both ascending). Cheapest: the scan stops at the first hit.
    #[default]
    FirstFound,
    /// The pair minimizing lhs/rhs — the most extreme break of the bound.
    Strongest,
}

impl FromStr for ScanMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first-found" => Ok(ScanMode::FirstFound),
            "strongest" => Ok(ScanMode::Strongest),
            other => Err(format!(
                "unknown mode {other:?}; expected \"first-found\" or \"strongest\""
            )),
        }
    }
}

impl std::fmt::Display for ScanMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ScanMode::FirstFound => "first-found",
            ScanMode::Strongest => "strongest",
        })
    }
}

/// How a half-spectrum frequency vector is compared against the length-N
/// bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumLayout {
    /// Use the frequency vector as given; the bound still uses the time
    /// length N.
    #[default]
    Half,
    /// Mirror half-spectrum scores to full length N before detection
    /// (a no-op when the vector is already full length).
    Mirrored,
}

impl FromStr for SpectrumLayout {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "half" => Ok(SpectrumLayout::Half),
            "mirrored" => Ok(SpectrumLayout::Mirrored),
            other => Err(format!(
                "unknown spectrum layout {other:?}; expected \"half\" or \"mirrored\""
            )),
        }
    }
}

impl std::fmt::Display for SpectrumLayout {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SpectrumLayout::Half => "half",
            SpectrumLayout::Mirrored => "mirrored",
        })
    }
}

/// The threshold pair certifying a violation, with everything needed to
/// recheck it by hand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationWitness {
    /// L2 mass of normalized time entries at or below `threshold_t`.
    pub eps_t: f64,
    /// L2 mass of normalized frequency entries at or below `threshold_f`.
    pub eps_f: f64,
    /// Count of time entries strictly above `threshold_t`.
    pub n_t: usize,
    /// Count of frequency entries strictly above `threshold_f`.
    pub n_f: usize,
    /// `n_t * n_f`.
    pub lhs: u64,
    /// `N * (1 - (eps_t + eps_f))²` where N is the time length.
    pub rhs: f64,
    pub threshold_t: f64,
    pub threshold_f: f64,
}

/// Verdict for one attribution pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub sample_id: String,
    pub violated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ViolationWitness>,
    pub mode: ScanMode,
}

/// `|x| / ‖x‖₂`: magnitudes scaled to unit L2 norm, the textbook formula
/// with the sum of squares accumulated in input order.
pub fn normalize_abs(x: &[f64]) -> Result<Vec<f64>, DetectError> {
    if let Some(index) = x.iter().position(|v| !v.is_finite()) {
        return Err(DetectError::Degenerate {
            reason: format!("non-finite value at index {index}"),
        });
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(DetectError::Degenerate {
            reason: "all entries are zero".into(),
        });
    }
    if !norm.is_finite() {
        return Err(DetectError::Degenerate {
            reason: "norm overflows; rescale the attribution first".into(),
        });
    }
    Ok(x.iter().map(|v| v.abs() / norm).collect())
}

/// ε-concentration of a nonnegative unit vector at a value threshold:
/// returns `(ε, support)` where ε is the L2 mass of the entries at or below
/// the threshold and `support` counts the entries strictly above it. Ties at
/// the threshold are excluded from the support and included in ε.
pub fn concentration_epsilon(q: &[f64], threshold: f64) -> (f64, usize) {
    let mut below_sq = 0.0;
    let mut support = 0usize;
    for &v in q {
        if v > threshold {
            support += 1;
        } else {
            below_sq += v * v;
        }
    }
    (below_sq.sqrt(), support)
}

/// Support-size product bound: counts exact nonzeros of both vectors and
/// checks `n_t · n_f ≥ N` with N the time length. Genuine Fourier pairs
/// always satisfy it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SupportProductCheck {
    pub n_t: usize,
    pub n_f: usize,
    pub holds: bool,
}

pub fn check_theorem1(time: &[f64], freq: &[f64]) -> SupportProductCheck {
    let n_t = time.iter().filter(|v| **v != 0.0).count();
    let n_f = freq.iter().filter(|v| **v != 0.0).count();
    SupportProductCheck {
        n_t,
        n_f,
        holds: n_t as u64 * n_f as u64 >= time.len() as u64,
    }
}

/// Additive support bound `n_t + n_f ≥ 2√N`, the arithmetic-geometric-mean
/// consequence of the product bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupportSumCheck {
    pub sum: usize,
    pub bound: f64,
    pub holds: bool,
}

pub fn check_corollary1(time: &[f64], freq: &[f64]) -> SupportSumCheck {
    let product = check_theorem1(time, freq);
    let sum = product.n_t + product.n_f;
    let bound = 2.0 * (time.len() as f64).sqrt();
    SupportSumCheck {
        sum,
        bound,
        holds: sum as f64 >= bound,
    }
}

/// Concentration profile of one normalized vector: for each distinct value v
/// (ascending), the ε and support count of the threshold at v. Prefix sums
/// of squares accumulate in ascending order, so each (ε, support) costs O(1)
/// and ties share a single entry.
struct ThresholdTable {
    values: Vec<f64>,
    eps: Vec<f64>,
    support: Vec<usize>,
}

impl ThresholdTable {
    fn build(q: &[f64]) -> Self {
        let mut sorted = q.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        let n = sorted.len();
        let mut values = Vec::new();
        let mut eps = Vec::new();
        let mut support = Vec::new();
        let mut below_sq = 0.0f64;
        let mut i = 0;
        while i < n {
            let v = sorted[i];
            while i < n && sorted[i] == v {
                below_sq += sorted[i] * sorted[i];
                i += 1;
            }
            values.push(v);
            eps.push(below_sq.sqrt());
            support.push(n - i);
        }
        // The final entry excludes every coordinate of a unit-normalized
        // vector, so its ε is exactly 1 by construction. Summation rounding
        // can land a hair below 1.0, which would let the strict guard pass
        // with an empty support; pin the exact value instead.
        if let Some(last) = eps.last_mut() {
            *last = 1.0;
        }
        ThresholdTable {
            values,
            eps,
            support,
        }
    }

    fn len(&self) -> usize {
        self.values.len()
    }
}

fn mirror_to_full(freq: &[f64], n: usize) -> Vec<f64> {
    // freq has length ⌊n/2⌋+1; bins 1..⌈n/2⌉ mirror to the upper half.
    let mut full = Vec::with_capacity(n);
    full.extend_from_slice(freq);
    for k in (1..n.div_ceil(2)).rev() {
        full.push(freq[k]);
    }
    debug_assert_eq!(full.len(), n);
    full
}

fn validate_pair(pair: &AttributionPair) -> Result<(), DetectError> {
    let n = pair.time_scores.len();
    if n < 2 {
        return Err(DetectError::TimeTooShort { len: n });
    }
    let m = pair.freq_scores.len();
    let half = n / 2 + 1;
    if m != n && m != half {
        return Err(DetectError::FreqLengthMismatch {
            time_len: n,
            freq_len: m,
            half,
        });
    }
    Ok(())
}

/// Scan all threshold pairs of a normalized attribution pair for a break of
/// the uncertainty bound. Violation requires both strict inequalities:
/// `ε_t + ε_f < 1` and `n_t · n_f < N(1−(ε_t+ε_f))²`; equality never
/// violates. The bound length N is always the time length, regardless of the
/// frequency layout.
pub fn detect_violation(
    pair: &AttributionPair,
    mode: ScanMode,
    layout: SpectrumLayout,
) -> Result<ViolationReport, DetectError> {
    validate_pair(pair)?;
    let n_bound = pair.time_scores.len();
    let t = normalize_abs(&pair.time_scores)?;
    let f = match layout {
        SpectrumLayout::Half => normalize_abs(&pair.freq_scores)?,
        SpectrumLayout::Mirrored => {
            if pair.freq_scores.len() == n_bound {
                normalize_abs(&pair.freq_scores)?
            } else {
                normalize_abs(&mirror_to_full(&pair.freq_scores, n_bound))?
            }
        }
    };

    let tt = ThresholdTable::build(&t);
    let tf = ThresholdTable::build(&f);
    let nf64 = n_bound as f64;

    let mut best: Option<(f64, ViolationWitness)> = None;
    'scan: for i in 0..tt.len() {
        let eps_t = tt.eps[i];
        if eps_t >= 1.0 {
            break;
        }
        for j in 0..tf.len() {
            let eps_f = tf.eps[j];
            let eps_sum = eps_t + eps_f;
            if eps_sum >= 1.0 {
                // ε_f only grows with j; no later threshold passes the guard.
                break;
            }
            let n_t = tt.support[i];
            let n_f = tf.support[j];
            let lhs = n_t as u64 * n_f as u64;
            let rhs = nf64 * (1.0 - eps_sum) * (1.0 - eps_sum);
            if (lhs as f64) < rhs {
                let witness = ViolationWitness {
                    eps_t,
                    eps_f,
                    n_t,
                    n_f,
                    lhs,
                    rhs,
                    threshold_t: tt.values[i],
                    threshold_f: tf.values[j],
                };
                match mode {
                    ScanMode::FirstFound => {
                        best = Some((0.0, witness));
                        break 'scan;
                    }
                    ScanMode::Strongest => {
                        let ratio = lhs as f64 / rhs;
                        if best.as_ref().is_none_or(|(r, _)| ratio < *r) {
                            best = Some((ratio, witness));
                        }
                    }
                }
            }
        }
    }

    let witness = best.map(|(_, w)| w);
    Ok(ViolationReport {
        sample_id: pair.sample_id.clone(),
        violated: witness.is_some(),
        witness,
        mode,
    })
}

/// Per-pair outcome inside a batch: a verdict, or the error that prevented
/// one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SampleOutcome {
    Report(ViolationReport),
    Errored { sample_id: String, error: String },
}

impl SampleOutcome {
    pub fn sample_id(&self) -> &str {
        match self {
            SampleOutcome::Report(r) => &r.sample_id,
            SampleOutcome::Errored { sample_id, .. } => sample_id,
        }
    }
}

/// Batch totals. The violation fraction is computed over successfully
/// checked pairs only; degenerate pairs are counted separately, never
/// folded into the denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub total: usize,
    pub checked: usize,
    pub violated: usize,
    pub errored: usize,
}

impl BatchSummary {
    /// Violated fraction of checked pairs; `None` when nothing was checked.
    pub fn fraction(&self) -> Option<f64> {
        (self.checked > 0).then(|| self.violated as f64 / self.checked as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub outcomes: Vec<SampleOutcome>,
    pub summary: BatchSummary,
}

/// Run the detector over every pair, in input order. Degenerate pairs are
/// reported as errored outcomes and the rest keep processing.
pub fn batch_detect(
    pairs: &[AttributionPair],
    mode: ScanMode,
    layout: SpectrumLayout,
) -> Result<BatchReport, DetectError> {
    if pairs.is_empty() {
        return Err(DetectError::EmptyBatch);
    }
    let mut outcomes = Vec::with_capacity(pairs.len());
    let mut summary = BatchSummary {
        total: pairs.len(),
        checked: 0,
        violated: 0,
        errored: 0,
    };
    for pair in pairs {
        match detect_violation(pair, mode, layout) {
            Ok(report) => {
                summary.checked += 1;
                if report.violated {
                    summary.violated += 1;
                }
                outcomes.push(SampleOutcome::Report(report));
            }
            Err(err) => {
                summary.errored += 1;
                outcomes.push(SampleOutcome::Errored {
                    sample_id: pair.sample_id.clone(),
                    error: err.to_string(),
                });
            }
        }
    }
    Ok(BatchReport { outcomes, summary })
}
