//! Python bindings for the detector and the spectral operations around it.
//!
//! The module mirrors the library's core surface: build attribution pairs,
//! scan them for uncertainty-bound violations, and manipulate signals in the
//! packed spectrum space (transform, synthesize, fold, ablate). Build with
//! `cargo build -p upcheck-py` and import the produced shared library as
//! `upcheck_py` (see `python/smoke_test.py`).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use upcheck::spectral;
use upcheck::updetect::{self, AttributionPair, ScanMode, SpectrumLayout};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Threshold pair certifying one violation, with everything needed to
/// recheck the bound by hand.
#[pyclass(frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct Witness {
    eps_t: f64,
    eps_f: f64,
    n_t: usize,
    n_f: usize,
    lhs: u64,
    rhs: f64,
    threshold_t: f64,
    threshold_f: f64,
}

#[pymethods]
impl Witness {
    fn __repr__(&self) -> String {
        format!(
            "Witness(n_t={}, n_f={}, eps_t={}, eps_f={}, lhs={}, rhs={})",
            self.n_t, self.n_f, self.eps_t, self.eps_f, self.lhs, self.rhs
        )
    }
}

impl From<updetect::ViolationWitness> for Witness {
    fn from(w: updetect::ViolationWitness) -> Self {
        Witness {
            eps_t: w.eps_t,
            eps_f: w.eps_f,
            n_t: w.n_t,
            n_f: w.n_f,
            lhs: w.lhs,
            rhs: w.rhs,
            threshold_t: w.threshold_t,
            threshold_f: w.threshold_f,
        }
    }
}

/// Verdict for one attribution pair.
#[pyclass(frozen, get_all)]
struct Report {
    sample_id: String,
    violated: bool,
    witness: Option<Witness>,
    mode: String,
}

#[pymethods]
impl Report {
    fn __repr__(&self) -> String {
        format!(
            "Report(sample_id={:?}, violated={}, mode={:?})",
            self.sample_id, self.violated, self.mode
        )
    }
}

/// Scan an attribution pair for a break of the uncertainty bound.
///
/// `time` holds per-position scores; `freq` holds per-bin scores, either
/// full length N or the non-redundant half spectrum. `mode` is
/// "first-found" or "strongest"; `layout` is "half" or "mirrored".
#[pyfunction]
#[pyo3(signature = (time, freq, *, sample_id = "sample", mode = "first-found", layout = "half"))]
fn detect_violation(
    time: Vec<f64>,
    freq: Vec<f64>,
    sample_id: &str,
    mode: &str,
    layout: &str,
) -> PyResult<Report> {
    let mode: ScanMode = mode.parse().map_err(value_err)?;
    let layout: SpectrumLayout = layout.parse().map_err(value_err)?;
    let pair = AttributionPair {
        sample_id: sample_id.to_string(),
        time_scores: time,
        freq_scores: freq,
    };
    let report = updetect::detect_violation(&pair, mode, layout).map_err(value_err)?;
    Ok(Report {
        sample_id: report.sample_id,
        violated: report.violated,
        witness: report.witness.map(Witness::from),
        mode: report.mode.to_string(),
    })
}

/// Exact-support product bound `n_t · n_f ≥ N`; returns `(n_t, n_f, holds)`.
#[pyfunction]
fn check_theorem1(time: Vec<f64>, freq: Vec<f64>) -> (usize, usize, bool) {
    let check = updetect::check_theorem1(&time, &freq);
    (check.n_t, check.n_f, check.holds)
}

/// Additive support bound `n_t + n_f ≥ 2√N`; returns `(sum, holds)`.
#[pyfunction]
fn check_corollary1(time: Vec<f64>, freq: Vec<f64>) -> (usize, bool) {
    let check = updetect::check_corollary1(&time, &freq);
    (check.sum, check.holds)
}

/// Magnitudes of the unitary transform of a real signal, full length N.
#[pyfunction]
fn dft_magnitudes(x: Vec<f64>) -> PyResult<Vec<f64>> {
    let spectrum = spectral::dft(&x).map_err(value_err)?;
    Ok(spectrum.coeffs.iter().map(|c| c.norm()).collect())
}

/// Real packing of a signal's non-redundant half spectrum, length exactly N:
/// `[re(0), …, re(⌊N/2⌋), im(1), …, im(⌈N/2⌉−1)]`.
#[pyfunction]
fn pack_spectrum(x: Vec<f64>) -> PyResult<Vec<f64>> {
    let spectrum = spectral::dft(&x).map_err(value_err)?;
    Ok(spectral::pack(&spectrum).map_err(value_err)?.values)
}

/// Inverse of [`pack_spectrum`]: resynthesize a time series from packed
/// spectrum parameters.
#[pyfunction]
fn synthesize(params: Vec<f64>) -> PyResult<Vec<f64>> {
    spectral::synthesize(&spectral::SynthesisParams { values: params }).map_err(value_err)
}

/// Fold packed-space scores to per-bin magnitudes `√(re² + im²)`, length
/// `⌊N/2⌋+1`.
#[pyfunction]
fn fold_bin_scores(scores: Vec<f64>) -> PyResult<Vec<f64>> {
    Ok(spectral::fold_bin_scores(&scores).map_err(value_err)?.scores)
}

/// Zero the listed bins (and their mirrors) of a signal's spectrum and
/// resynthesize it.
#[pyfunction]
fn ablate_bins(x: Vec<f64>, bins: Vec<usize>) -> PyResult<Vec<f64>> {
    spectral::ablate_bins(&x, &bins).map_err(value_err)
}

/// Number of non-redundant bins for a signal of length `n`: `⌊n/2⌋+1`.
#[pyfunction]
fn half_bin_count(n: usize) -> usize {
    spectral::half_bin_count(n)
}

#[pymodule]
fn upcheck_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Witness>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(detect_violation, m)?)?;
    m.add_function(wrap_pyfunction!(check_theorem1, m)?)?;
    m.add_function(wrap_pyfunction!(check_corollary1, m)?)?;
    m.add_function(wrap_pyfunction!(dft_magnitudes, m)?)?;
    m.add_function(wrap_pyfunction!(pack_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(fold_bin_scores, m)?)?;
    m.add_function(wrap_pyfunction!(ablate_bins, m)?)?;
    m.add_function(wrap_pyfunction!(half_bin_count, m)?)?;
    Ok(())
}
