//! Shared test oracles: line-by-line transcriptions of the published
//! procedures, kept deliberately naive and independent of the library's
//! optimized implementations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Witness found by the literal detector transcription.
#[derive(Debug, Clone, PartialEq)]
pub struct LiteralWitness {
    pub threshold_t: f64,
    pub threshold_f: f64,
    pub eps_t: f64,
    pub eps_f: f64,
    pub n_t: usize,
    pub n_f: usize,
}

/// Literal transcription of the violation grid search, with no
/// deduplication, no prefix sums, and no early exits beyond the first hit:
///
/// ```text
/// N ← |x_t|
/// x_t ← Abs(Unit_norm(x_t));  x_f ← Abs(Unit_norm(x_f))
/// t_steps ← Sort(x_t);        f_steps ← Sort(x_f)
/// for i, for j:
///     ε̄_t ← t_steps[i];  ε̄_f ← f_steps[j]
///     N_t ← |x_t 1{x_t > ε̄_t}|;   N_f ← |x_f 1{x_f > ε̄_f}|
///     ε_t ← ‖x_t 1{x_t ≤ ε̄_t}‖₂;  ε_f ← ‖x_f 1{x_f ≤ ε̄_f}‖₂
///     if ε_t + ε_f < 1 and N_t·N_f < N(1−(ε_t+ε_f))²: violation
/// ```
pub fn literal_detect(time: &[f64], freq: &[f64]) -> Option<LiteralWitness> {
    let n_bound = time.len() as f64;
    let xt = abs_unit(time);
    let xf = abs_unit(freq);
    let mut t_steps = xt.clone();
    t_steps.sort_by(f64::total_cmp);
    let mut f_steps = xf.clone();
    f_steps.sort_by(f64::total_cmp);
    for &thr_t in &t_steps {
        for &thr_f in &f_steps {
            let n_t = xt.iter().filter(|v| **v > thr_t).count();
            let n_f = xf.iter().filter(|v| **v > thr_f).count();
            // When a threshold excludes every coordinate, the retained mass
            // is the whole unit-normalized vector, whose norm is exactly 1;
            // pin that value so summation rounding cannot dip below 1.0 and
            // sneak past the strict guard with an empty support.
            let eps_t = if n_t == 0 {
                1.0
            } else {
                xt.iter()
                    .filter(|v| **v <= thr_t)
                    .map(|v| v * v)
                    .sum::<f64>()
                    .sqrt()
            };
            let eps_f = if n_f == 0 {
                1.0
            } else {
                xf.iter()
                    .filter(|v| **v <= thr_f)
                    .map(|v| v * v)
                    .sum::<f64>()
                    .sqrt()
            };
            if eps_t + eps_f < 1.0 && ((n_t * n_f) as f64) < n_bound * (1.0 - (eps_t + eps_f)).powi(2)
            {
                return Some(LiteralWitness {
                    threshold_t: thr_t,
                    threshold_f: thr_f,
                    eps_t,
                    eps_f,
                    n_t,
                    n_f,
                });
            }
        }
    }
    None
}

fn abs_unit(x: &[f64]) -> Vec<f64> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter().map(|v| v.abs() / norm).collect()
}

/// Random attribution pair covering the shapes the detector must handle:
/// dense, sparse with exact zeros, spiky, signed, and half-length frequency
/// vectors with tied values.
pub fn random_pair(rng: &mut ChaCha8Rng, max_n: usize) -> (Vec<f64>, Vec<f64>) {
    let n = rng.random_range(2..=max_n);
    let freq_len = if rng.random_bool(0.5) { n } else { n / 2 + 1 };
    (random_scores(rng, n), random_scores(rng, freq_len))
}

/// Like [`random_pair`] but without the quantized style: continuous values
/// keep strict comparisons away from exact ties, which matters for property
/// tests that rerun with fresh entropy on every invocation.
#[allow(dead_code)] // each test binary compiles this module separately
pub fn random_pair_continuous(rng: &mut ChaCha8Rng, max_n: usize) -> (Vec<f64>, Vec<f64>) {
    let n = rng.random_range(2..=max_n);
    let freq_len = if rng.random_bool(0.5) { n } else { n / 2 + 1 };
    let style = rng.random_range(0..3);
    let mut out = Vec::new();
    for len in [n, freq_len] {
        let mut v: Vec<f64> = (0..len)
            .map(|_| match style {
                0 => rng.random_range(-1.0..1.0),
                1 => {
                    if rng.random_bool(0.2) {
                        rng.random_range(-1.0..1.0)
                    } else {
                        0.0
                    }
                }
                _ => {
                    if rng.random_bool(0.15) {
                        rng.random_range(1.0..10.0)
                    } else {
                        rng.random_range(0.0..0.05)
                    }
                }
            })
            .collect();
        if v.iter().all(|x| *x == 0.0) {
            let hot = rng.random_range(0..len);
            v[hot] = 1.0;
        }
        out.push(v);
    }
    let freq = out.pop().expect("two vectors pushed");
    let time = out.pop().expect("two vectors pushed");
    (time, freq)
}

fn random_scores(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let style = rng.random_range(0..4);
    let mut v: Vec<f64> = (0..len)
        .map(|_| match style {
            0 => rng.random_range(-1.0..1.0),
            1 => {
                // Sparse: mostly exact zeros.
                if rng.random_bool(0.2) {
                    rng.random_range(-1.0..1.0)
                } else {
                    0.0
                }
            }
            2 => {
                // Spiky: small floor with occasional large entries.
                if rng.random_bool(0.15) {
                    rng.random_range(1.0..10.0)
                } else {
                    rng.random_range(0.0..0.05)
                }
            }
            _ => {
                // Quantized: duplicates force tie handling.
                (rng.random_range(0..5) as f64) * 0.25
            }
        })
        .collect();
    if v.iter().all(|x| *x == 0.0) {
        let hot = rng.random_range(0..len);
        v[hot] = 1.0;
    }
    v
}

/// Deterministic RNG for test fixtures.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
