//! Band-pass filtering and wavelet sub-band decomposition.

pub mod butterworth;
pub mod wavelet;

pub use butterworth::{
    design_butterworth_bandpass, filter_zero_phase, magnitude_response, FilterCoefficients, Sos,
};
pub use wavelet::{dwt_decompose, energy, wavelet_filters, BoundaryMode, SubbandSet};
