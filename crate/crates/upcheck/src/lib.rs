//! Uncertainty-principle checking for time-series attributions.
//!
//! A time-domain attribution and a frequency-domain attribution of the same
//! sample cannot both be sharply concentrated: the discrete uncertainty
//! principle puts a floor on the product of their support sizes. An
//! attribution pair that beats this floor is mathematically impossible for a
//! genuine signal/spectrum pair, so finding one proves the two explanation
//! spaces disagree about where the important features are.
//!
//! The crate ships the detector together with a small reference pipeline that
//! produces such pairs end to end:
//!
//! - [`spectral`] — unitary DFT/inverse, the real half-spectrum
//!   parameterization used by the frequency wrapper, its adjoint, per-bin
//!   score folding, and bin ablation.
//! - [`updetect`] — ε-concentration arithmetic, the support-count bounds, and
//!   the grid-search violation detector with witness reporting.
//! - [`synthgen`] — synthetic shapelet/frequency dataset with three
//!   validation groups.
//! - [`tinymodel`] — a small fully-connected network with manual
//!   backpropagation, training loop, persistence, and the frequency-domain
//!   wrapper.
//! - [`attrib`] — saliency, input×gradient, integrated gradients, occlusion,
//!   and a LIME-style surrogate with multi-run aggregation, each runnable in
//!   either explanation space.
//! - [`probe`] — amplitude/frequency response grids of a trained model.
//! - [`cli`] — the `upcheck` batch command-line surface and its file formats.

pub mod attrib;
pub mod cli;
pub mod probe;
pub mod spectral;
pub mod synthgen;
pub mod tinymodel;
pub mod updetect;
