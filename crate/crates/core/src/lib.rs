//! Nonlinear feature extraction and classification for single-channel EEG.
//!
//! The crate implements a complete pipeline: load plain-text EEG segments,
//! band-pass filter them (Butterworth, zero phase), decompose into wavelet
//! sub-bands (db4 pyramid), compute ten entropy measures per sub-band plus
//! delay-embedding parameters (AMI first minimum for the delay, false
//! nearest neighbors for the dimension), compare groups with the
//! Mann-Whitney U test, and classify healthy vs. epileptic segments with
//! LDA or a from-scratch SMO-trained SVM under stratified k-fold
//! cross-validation.
//!
//! Everything is deterministic: fixed seeds drive the only randomized step
//! (fold assignment), and parallel execution (the default `parallel`
//! feature) produces bit-identical output to the sequential fallback.

// Parameter guards are written `!(x > 0.0)` on purpose: the negated form
// rejects NaN, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod embedding;
pub mod entropy;
pub mod error;
pub mod features;
pub mod par;
pub mod pipeline;
pub mod preprocess;
pub mod signal_io;
pub mod stats;

pub use error::{Error, Result};
pub use features::FeatureMatrix;
pub use signal_io::{load_dataset, load_segment, Label, Segment};
