//! Unitary discrete Fourier analysis and synthesis.
//!
//! All transforms here use the unitary convention
//!
//! ```text
//! X[k] = (1/sqrt(N)) * sum_t x[t] * exp(-2*pi*i*k*t/N)
//! x[t] = (1/sqrt(N)) * sum_k X[k] * exp(+2*pi*i*k*t/N)
//! ```
//!
//! so Parseval holds exactly: `||X|| = ||x||`. The module also defines the
//! real parameterization of the non-redundant half spectrum that the
//! frequency-domain model wrapper consumes, the adjoint of the synthesis map
//! (for gradient pullback), folding of per-parameter attributions to per-bin
//! scores, and bin ablation (zero a bin and its mirror, resynthesize).
//!
//! The fast transform is backed by `rustfft` (mixed-radix/Bluestein, so
//! non-power-of-two lengths are fine); [`dft_direct`] and [`idft_direct`] are
//! literal O(N²) summations of the definition above and double as the
//! reference the fast path is tested against.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use thiserror::Error;

/// Real time-domain signal. All operations expect length ≥ 2 and finite
/// entries.
pub type TimeSeries = Vec<f64>;

/// Errors from spectral operations.
#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("input length {len} is too short; need at least 2 samples")]
    TooShort { len: usize },
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("bin {bin} out of range; length-{n} signals have bins 0..={max}")]
    BinOutOfRange { bin: usize, n: usize, max: usize },
}

/// Complex DFT coefficients, full length N. Spectra of real signals are
/// Hermitian: `coeffs[k] == conj(coeffs[N-k mod N])`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest deviation from Hermitian symmetry, `max_k |c[k] - conj(c[N-k])|`.
    pub fn hermitian_residue(&self) -> f64 {
        let n = self.coeffs.len();
        let mut worst = 0.0f64;
        for k in 0..n {
            let mirror = self.coeffs[(n - k) % n].conj();
            worst = worst.max((self.coeffs[k] - mirror).norm());
        }
        worst
    }
}

/// Real packing of the non-redundant half spectrum, length exactly N:
///
/// ```text
/// [re(0), re(1), ..., re(floor(N/2)), im(1), ..., im(ceil(N/2)-1)]
/// ```
///
/// For even N the Nyquist bin N/2 stores only its real part (its imaginary
/// part is zero for any real signal), and so does bin 0. The layout is part
/// of the file-interchange contract and must not change.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisParams {
    pub values: Vec<f64>,
}

impl SynthesisParams {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Slot of `re(k)` in the packed layout for signal length `n`, or `None` if
/// the bin does not exist.
pub fn re_slot(n: usize, bin: usize) -> Option<usize> {
    (bin <= n / 2).then_some(bin)
}

/// Slot of `im(k)` in the packed layout for signal length `n`. Bins 0 and
/// (for even N) N/2 carry no imaginary slot.
pub fn im_slot(n: usize, bin: usize) -> Option<usize> {
    (bin >= 1 && bin <= n.div_ceil(2) - 1).then(|| n / 2 + bin)
}

/// Number of non-redundant frequency bins for signal length `n`.
pub fn half_bin_count(n: usize) -> usize {
    n / 2 + 1
}

/// Nonnegative per-bin scores over the non-redundant half spectrum,
/// length `floor(N/2)+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinScores {
    pub scores: Vec<f64>,
}

impl BinScores {
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Result of an inverse transform: the real part of the output together with
/// the largest imaginary component encountered. For Hermitian input the
/// residue is numerical noise (< 1e-9); a substantial residue means the
/// spectrum did not come from a real signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Resynthesis {
    pub values: TimeSeries,
    pub imag_residue: f64,
}

fn check_real_input(x: &[f64]) -> Result<(), SpectralError> {
    if x.len() < 2 {
        return Err(SpectralError::TooShort { len: x.len() });
    }
    match x.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(SpectralError::NonFinite { index }),
        None => Ok(()),
    }
}

fn check_complex_input(x: &[Complex64]) -> Result<(), SpectralError> {
    if x.len() < 2 {
        return Err(SpectralError::TooShort { len: x.len() });
    }
    match x.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
        Some(index) => Err(SpectralError::NonFinite { index }),
        None => Ok(()),
    }
}

thread_local! {
    // rustfft caches plans per length inside the planner; keeping one planner
    // per thread makes repeated transforms of the same length cheap.
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        }
    })
}

/// Unitary DFT of a real signal (fast path).
pub fn dft(x: &[f64]) -> Result<Spectrum, SpectralError> {
    check_real_input(x)?;
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    plan(x.len(), false).process(&mut buf);
    let scale = 1.0 / (x.len() as f64).sqrt();
    for c in &mut buf {
        *c *= scale;
    }
    Ok(Spectrum { coeffs: buf })
}

/// Unitary DFT by direct O(N²) summation of the definition. Reference
/// implementation; the fast path must agree with it to 1e-9.
pub fn dft_direct(x: &[f64]) -> Result<Spectrum, SpectralError> {
    check_real_input(x)?;
    let n = x.len();
    let scale = 1.0 / (n as f64).sqrt();
    let coeffs = (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (t, &v) in x.iter().enumerate() {
                let angle = -std::f64::consts::TAU * (k as f64) * (t as f64) / (n as f64);
                acc += v * Complex64::new(angle.cos(), angle.sin());
            }
            acc * scale
        })
        .collect();
    Ok(Spectrum { coeffs })
}

/// Unitary inverse DFT (fast path). Returns the real part plus the largest
/// imaginary residue, which is reported rather than silently discarded.
pub fn idft(spectrum: &Spectrum) -> Result<Resynthesis, SpectralError> {
    check_complex_input(&spectrum.coeffs)?;
    let mut buf = spectrum.coeffs.clone();
    plan(buf.len(), true).process(&mut buf);
    let scale = 1.0 / (buf.len() as f64).sqrt();
    let mut residue = 0.0f64;
    let values = buf
        .iter()
        .map(|c| {
            residue = residue.max((c.im * scale).abs());
            c.re * scale
        })
        .collect();
    Ok(Resynthesis {
        values,
        imag_residue: residue,
    })
}

/// Inverse DFT by direct O(N²) summation. Reference implementation.
pub fn idft_direct(spectrum: &Spectrum) -> Result<Resynthesis, SpectralError> {
    check_complex_input(&spectrum.coeffs)?;
    let n = spectrum.coeffs.len();
    let scale = 1.0 / (n as f64).sqrt();
    let mut residue = 0.0f64;
    let values = (0..n)
        .map(|t| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, c) in spectrum.coeffs.iter().enumerate() {
                let angle = std::f64::consts::TAU * (k as f64) * (t as f64) / (n as f64);
                acc += c * Complex64::new(angle.cos(), angle.sin());
            }
            acc *= scale;
            residue = residue.max(acc.im.abs());
            acc.re
        })
        .collect();
    Ok(Resynthesis {
        values,
        imag_residue: residue,
    })
}

/// Pack the non-redundant half of a (Hermitian) spectrum into the real
/// layout. The mirror half is not inspected; packing a non-Hermitian
/// spectrum simply drops the inconsistent parts.
pub fn pack(spectrum: &Spectrum) -> Result<SynthesisParams, SpectralError> {
    check_complex_input(&spectrum.coeffs)?;
    let n = spectrum.coeffs.len();
    let mut values = vec![0.0; n];
    for (bin, c) in spectrum.coeffs.iter().enumerate().take(n / 2 + 1) {
        values[bin] = c.re;
        if let Some(slot) = im_slot(n, bin) {
            values[slot] = c.im;
        }
    }
    Ok(SynthesisParams { values })
}

/// Expand packed params back to a full-length Hermitian spectrum.
pub fn unpack(params: &SynthesisParams) -> Result<Spectrum, SpectralError> {
    check_real_input(&params.values)?;
    let n = params.values.len();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    for bin in 0..=n / 2 {
        let re = params.values[bin];
        let im = im_slot(n, bin).map_or(0.0, |slot| params.values[slot]);
        coeffs[bin] = Complex64::new(re, im);
        let mirror = (n - bin) % n;
        if mirror != bin {
            coeffs[mirror] = Complex64::new(re, -im);
        }
    }
    Ok(Spectrum { coeffs })
}

/// The linear synthesis map `S`: packed params → real signal, i.e. the
/// inverse DFT of the unpacked Hermitian spectrum.
pub fn synthesize(params: &SynthesisParams) -> Result<TimeSeries, SpectralError> {
    Ok(idft(&unpack(params)?)?.values)
}

/// Adjoint (transpose) of the synthesis map: pulls a gradient over the
/// signal back to a gradient over packed params. Paired bins pick up the
/// factor 2 because both `c[k]` and its mirror move when a param moves.
pub fn synthesis_adjoint(gradient: &[f64]) -> Result<SynthesisParams, SpectralError> {
    let spectrum = dft(gradient)?;
    let n = gradient.len();
    let mut values = vec![0.0; n];
    for bin in 0..=n / 2 {
        let c = spectrum.coeffs[bin];
        if let Some(slot) = im_slot(n, bin) {
            values[bin] = 2.0 * c.re;
            values[slot] = 2.0 * c.im;
        } else {
            // Self-conjugate bins (0 and, for even N, N/2) appear once in the
            // synthesis sum.
            values[bin] = c.re;
        }
    }
    Ok(SynthesisParams { values })
}

/// Collapse a per-parameter attribution (packed layout) to one nonnegative
/// score per bin: `score[k] = sqrt(a_re(k)² + a_im(k)²)`, with the missing
/// imaginary slots of bins 0 and N/2 treated as zero.
pub fn fold_bin_scores(attribution: &[f64]) -> Result<BinScores, SpectralError> {
    check_real_input(attribution)?;
    let n = attribution.len();
    let scores = (0..=n / 2)
        .map(|bin| {
            let re = attribution[bin];
            let im = im_slot(n, bin).map_or(0.0, |slot| attribution[slot]);
            re.hypot(im)
        })
        .collect();
    Ok(BinScores { scores })
}

/// Zero the listed bins (and their Hermitian mirrors) in the spectrum of `x`
/// and resynthesize. Bins may repeat and come in any order.
pub fn ablate_bins(x: &[f64], bins: &[usize]) -> Result<TimeSeries, SpectralError> {
    let n = x.len();
    let mut spectrum = dft(x)?;
    let max = n / 2;
    for &bin in bins {
        if bin > max {
            return Err(SpectralError::BinOutOfRange { bin, n, max });
        }
        spectrum.coeffs[bin] = Complex64::new(0.0, 0.0);
        let mirror = (n - bin) % n;
        spectrum.coeffs[mirror] = Complex64::new(0.0, 0.0);
    }
    Ok(idft(&spectrum)?.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_signal(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    fn norm(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    fn spectrum_norm(s: &Spectrum) -> f64 {
        s.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    fn max_coeff_dist(a: &Spectrum, b: &Spectrum) -> f64 {
        a.coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn constant_signal_concentrates_in_bin_zero() {
        let s = dft(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!((s.coeffs[0] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        for k in 1..4 {
            assert!(s.coeffs[k].norm() < 1e-12, "bin {k} should be empty");
        }
    }

    #[test]
    fn single_tone_has_sqrt2_coefficients() {
        // cos(2*pi*t/8) has all its energy in bins 1 and 7; with unitary
        // scaling each carries (N/2)/sqrt(N) = sqrt(2).
        let x: Vec<f64> = (0..8)
            .map(|t| (std::f64::consts::TAU * t as f64 / 8.0).cos())
            .collect();
        let s = dft(&x).unwrap();
        let expect = 2.0f64.sqrt();
        for (k, c) in s.coeffs.iter().enumerate() {
            let want = if k == 1 || k == 7 { expect } else { 0.0 };
            assert!(
                (c.norm() - want).abs() < 1e-12,
                "bin {k}: got {}, want {want}",
                c.norm()
            );
        }
    }

    #[test]
    fn fast_path_matches_direct_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 3, 8, 13, 64, 257, 500] {
            let x = random_signal(&mut rng, n);
            let fast = dft(&x).unwrap();
            let slow = dft_direct(&x).unwrap();
            assert!(
                max_coeff_dist(&fast, &slow) < 1e-9,
                "forward mismatch at N={n}"
            );
            let back_fast = idft(&fast).unwrap();
            let back_slow = idft_direct(&slow).unwrap();
            for (a, b) in back_fast.values.iter().zip(&back_slow.values) {
                assert!((a - b).abs() < 1e-9, "inverse mismatch at N={n}");
            }
        }
    }

    #[test]
    fn parseval_holds_on_random_signals() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let x = random_signal(&mut rng, 64);
        let s = dft(&x).unwrap();
        assert!((spectrum_norm(&s) - norm(&x)).abs() < 1e-9);
    }

    #[test]
    fn idft_inverts_dft() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let x = random_signal(&mut rng, 128);
        let back = idft(&dft(&x).unwrap()).unwrap();
        assert!(back.imag_residue < 1e-9);
        for (a, b) in back.values.iter().zip(&x) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn idft_of_constant_spectrum() {
        let s = Spectrum {
            coeffs: vec![
                Complex64::new(2.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        };
        let out = idft(&s).unwrap();
        for v in &out.values {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn non_hermitian_input_reports_residue() {
        // A lone impulse in bin 1 with no mirror partner cannot come from a
        // real signal; the inverse must surface a substantial residue.
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 8];
        coeffs[1] = Complex64::new(0.0, 1.0);
        let out = idft(&Spectrum { coeffs: coeffs.clone() }).unwrap();
        let reference = idft_direct(&Spectrum { coeffs }).unwrap();
        assert!(out.imag_residue > 0.1, "residue {}", out.imag_residue);
        assert!((out.imag_residue - reference.imag_residue).abs() < 1e-9);
    }

    #[test]
    fn hermitian_symmetry_of_real_spectra() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for n in [8, 13, 64] {
            let x = random_signal(&mut rng, n);
            assert!(dft(&x).unwrap().hermitian_residue() < 1e-9);
        }
    }

    #[test]
    fn pack_unpack_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for n in [8, 13, 64, 257] {
            // pack ∘ unpack is the identity on params...
            let params = SynthesisParams {
                values: random_signal(&mut rng, n),
            };
            let back = pack(&unpack(&params).unwrap()).unwrap();
            for (a, b) in back.values.iter().zip(&params.values) {
                assert!((a - b).abs() < 1e-12, "params round trip at N={n}");
            }
            // ...and unpack ∘ pack is the identity on Hermitian spectra.
            let spectrum = dft(&random_signal(&mut rng, n)).unwrap();
            let again = unpack(&pack(&spectrum).unwrap()).unwrap();
            assert!(max_coeff_dist(&again, &spectrum) < 1e-9, "spectrum round trip at N={n}");
        }
    }

    #[test]
    fn synthesize_inverts_pack_of_dft() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for n in [8, 13, 64, 257, 512] {
            let x = random_signal(&mut rng, n);
            let p = pack(&dft(&x).unwrap()).unwrap();
            let back = synthesize(&p).unwrap();
            for (a, b) in back.iter().zip(&x) {
                assert!((a - b).abs() < 1e-9, "synthesis round trip at N={n}");
            }
        }
    }

    #[test]
    fn zero_params_synthesize_to_zero() {
        let p = SynthesisParams { values: vec![0.0; 16] };
        assert!(synthesize(&p).unwrap().iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn unit_re_param_synthesizes_to_cosine() {
        // A paired bin k contributes c[k] + its mirror, so re(k) = 1 yields
        // (2/sqrt(N)) * cos(2*pi*k*t/N).
        let n = 16;
        let k = 3;
        let mut values = vec![0.0; n];
        values[re_slot(n, k).unwrap()] = 1.0;
        let x = synthesize(&SynthesisParams { values }).unwrap();
        let amp = 2.0 / (n as f64).sqrt();
        for (t, v) in x.iter().enumerate() {
            let want = amp * (std::f64::consts::TAU * (k * t) as f64 / n as f64).cos();
            assert!((v - want).abs() < 1e-12, "t={t}: got {v}, want {want}");
        }
    }

    #[test]
    fn adjoint_identity_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in [8, 13, 64, 257] {
            let p = SynthesisParams {
                values: random_signal(&mut rng, n),
            };
            let g = random_signal(&mut rng, n);
            let sp = synthesize(&p).unwrap();
            let stg = synthesis_adjoint(&g).unwrap();
            let lhs: f64 = sp.iter().zip(&g).map(|(a, b)| a * b).sum();
            let rhs: f64 = p.values.iter().zip(&stg.values).map(|(a, b)| a * b).sum();
            assert!((lhs - rhs).abs() < 1e-9, "adjoint identity at N={n}");
        }
    }

    #[test]
    fn adjoint_of_zero_is_zero() {
        let g = vec![0.0; 12];
        let out = synthesis_adjoint(&g).unwrap();
        assert!(out.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn adjoint_matches_finite_differences() {
        // Column k of S via central differences must equal row k of Sᵀ.
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for n in [9, 16] {
            let g = random_signal(&mut rng, n);
            let adj = synthesis_adjoint(&g).unwrap();
            let step = 1e-6;
            for k in 0..n {
                let mut plus = vec![0.0; n];
                plus[k] = step;
                let mut minus = vec![0.0; n];
                minus[k] = -step;
                let f_plus = synthesize(&SynthesisParams { values: plus }).unwrap();
                let f_minus = synthesize(&SynthesisParams { values: minus }).unwrap();
                // d<S p, g>/dp_k by central differences.
                let numeric: f64 = f_plus
                    .iter()
                    .zip(&f_minus)
                    .zip(&g)
                    .map(|((p, m), gv)| (p - m) / (2.0 * step) * gv)
                    .sum();
                let analytic = adj.values[k];
                let rel = (numeric - analytic).abs() / analytic.abs().max(1e-8);
                assert!(rel < 1e-6, "param {k} of N={n}: rel err {rel}");
            }
        }
    }

    #[test]
    fn fold_single_re_slot() {
        let n = 16;
        let mut attr = vec![0.0; n];
        attr[re_slot(n, 3).unwrap()] = -2.5;
        let scores = fold_bin_scores(&attr).unwrap().scores;
        assert_eq!(scores.len(), half_bin_count(n));
        for (k, s) in scores.iter().enumerate() {
            let want = if k == 3 { 2.5 } else { 0.0 };
            assert!((s - want).abs() < 1e-15);
        }
    }

    #[test]
    fn fold_is_pythagorean() {
        let n = 16;
        let mut attr = vec![0.0; n];
        attr[re_slot(n, 5).unwrap()] = 3.0;
        attr[im_slot(n, 5).unwrap()] = 4.0;
        let scores = fold_bin_scores(&attr).unwrap().scores;
        assert!((scores[5] - 5.0).abs() < 1e-15);
    }

    #[test]
    fn fold_matches_elementwise_recomputation() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for n in [8usize, 13] {
            let attr = random_signal(&mut rng, n);
            let scores = fold_bin_scores(&attr).unwrap().scores;
            for (bin, s) in scores.iter().enumerate() {
                let re = attr[bin];
                let im = im_slot(n, bin).map_or(0.0, |slot| attr[slot]);
                assert!((s - (re * re + im * im).sqrt()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ablate_dc_of_constant_signal_gives_zero() {
        let out = ablate_bins(&[3.0; 8], &[0]).unwrap();
        assert!(out.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn ablate_nothing_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let x = random_signal(&mut rng, 13);
        let out = ablate_bins(&x, &[]).unwrap();
        for (a, b) in out.iter().zip(&x) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn ablating_one_tone_leaves_the_other() {
        let n = 32;
        let tone = |bin: usize, t: usize| {
            (std::f64::consts::TAU * (bin * t) as f64 / n as f64).sin()
        };
        let two: Vec<f64> = (0..n).map(|t| tone(3, t) + tone(7, t)).collect();
        let single: Vec<f64> = (0..n).map(|t| tone(7, t)).collect();
        let out = ablate_bins(&two, &[3]).unwrap();
        for (a, b) in out.iter().zip(&single) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn ablate_rejects_out_of_range_bin() {
        let err = ablate_bins(&[1.0; 8], &[5]).unwrap_err();
        assert_eq!(
            err,
            SpectralError::BinOutOfRange { bin: 5, n: 8, max: 4 }
        );
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let mut x = vec![1.0; 8];
        x[3] = f64::NAN;
        assert_eq!(dft(&x).unwrap_err(), SpectralError::NonFinite { index: 3 });
        assert_eq!(
            dft(&[1.0]).unwrap_err(),
            SpectralError::TooShort { len: 1 }
        );
    }

    #[test]
    fn packed_layout_slots() {
        // Even N = 8: re 0..=4, im 1..=3.
        assert_eq!(re_slot(8, 4), Some(4));
        assert_eq!(im_slot(8, 1), Some(5));
        assert_eq!(im_slot(8, 3), Some(7));
        assert_eq!(im_slot(8, 4), None);
        assert_eq!(im_slot(8, 0), None);
        // Odd N = 7: re 0..=3, im 1..=3.
        assert_eq!(re_slot(7, 3), Some(3));
        assert_eq!(im_slot(7, 1), Some(4));
        assert_eq!(im_slot(7, 3), Some(6));
        assert_eq!(re_slot(7, 4), None);
    }
}
