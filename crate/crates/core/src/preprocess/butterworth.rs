//! Butterworth band-pass design and zero-phase filtering.
//!
//! The design path is the textbook one: analog low-pass prototype poles,
//! low-pass to band-pass transform, bilinear transform with frequency
//! prewarping, then grouping into second-order sections. Prewarping makes
//! the -3 dB points land on the requested digital edges.
//!
//! Zero-phase filtering runs each section forward and backward with the
//! boundary states chosen by Gustafsson's criterion: filtering forward then
//! backward must equal filtering backward then forward. That removes the
//! start-up transients without any signal padding and makes the operation
//! commute with time reversal, which matters because delay estimates
//! downstream are sensitive to waveform timing.

use nalgebra::{DMatrix, DVector};
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};

/// One second-order section, transfer (b0 + b1 z^-1 + b2 z^-2) /
/// (1 + a1 z^-1 + a2 z^-2).
#[derive(Debug, Clone, Copy)]
pub struct Sos {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
}

impl Sos {
    /// Stability via the coefficient triangle: |a1| < 1 + a2 and |a2| < 1.
    fn is_stable(&self) -> bool {
        self.a2.abs() < 1.0 && self.a1.abs() < 1.0 + self.a2
    }
}

/// Cascade of second-order sections with a single overall gain.
#[derive(Debug, Clone)]
pub struct FilterCoefficients {
    pub sections: Vec<Sos>,
    pub gain: f64,
    /// Design order of the band-pass (number of sections).
    pub order: usize,
}

/// Design a digital Butterworth band-pass of the given order.
///
/// `low_hz` and `high_hz` are the -3 dB edges; both must lie strictly
/// inside (0, fs/2). The returned cascade has `order` sections (2·order
/// poles) and exact zeros at DC and Nyquist.
pub fn design_butterworth_bandpass(
    order: usize,
    low_hz: f64,
    high_hz: f64,
    fs: f64,
) -> Result<FilterCoefficients> {
    if order == 0 {
        return Err(Error::InvalidParam("filter order must be >= 1".into()));
    }
    if !(fs > 0.0 && fs.is_finite()) {
        return Err(Error::InvalidParam(format!("bad sampling rate {fs}")));
    }
    if !(low_hz > 0.0 && low_hz < high_hz && high_hz < fs / 2.0) {
        return Err(Error::InvalidParam(format!(
            "band edges must satisfy 0 < low < high < fs/2, got {low_hz}:{high_hz} at fs {fs}"
        )));
    }

    let fs2 = 2.0 * fs;
    // Prewarped analog edge frequencies (rad/s).
    let w1 = fs2 * (std::f64::consts::PI * low_hz / fs).tan();
    let w2 = fs2 * (std::f64::consts::PI * high_hz / fs).tan();
    let bw = w2 - w1;
    let w0_sq = Complex64::new(w1 * w2, 0.0);

    // Analog prototype poles on the unit circle, left half plane. Index k
    // and order-1-k are conjugates; we walk the upper half only.
    let proto = |k: usize| -> Complex64 {
        let theta =
            std::f64::consts::PI * (2.0 * k as f64 + order as f64 + 1.0) / (2.0 * order as f64);
        Complex64::new(theta.cos(), theta.sin())
    };

    // Low-pass to band-pass: every prototype pole p maps to the pair
    // q +/- sqrt(q^2 - w0^2) with q = p*bw/2, doubling the pole count.
    let mut analog_poles: Vec<Complex64> = Vec::with_capacity(2 * order);
    let mut sections: Vec<Sos> = Vec::with_capacity(order);

    let bilinear = |s: Complex64| (fs2 + s) / (fs2 - s);

    let push_conjugate_pair_section = |zp: Complex64, sections: &mut Vec<Sos>| {
        sections.push(Sos {
            b0: 1.0,
            b1: 0.0,
            b2: -1.0,
            a1: -2.0 * zp.re,
            a2: zp.norm_sqr(),
        });
    };

    for k in 0..order / 2 {
        let p = proto(k); // Im > 0
        let q = p * (bw / 2.0);
        let disc = (q * q - w0_sq).sqrt();
        for s in [q + disc, q - disc] {
            // s and its conjugate (from the mirror prototype pole) form one
            // digital conjugate pair, hence one section.
            analog_poles.push(s);
            analog_poles.push(s.conj());
            push_conjugate_pair_section(bilinear(s), &mut sections);
        }
    }
    if order % 2 == 1 {
        // Real prototype pole at -1.
        let q = Complex64::new(-bw / 2.0, 0.0);
        let disc = (q * q - w0_sq).sqrt();
        let s1 = q + disc;
        let s2 = q - disc;
        analog_poles.push(s1);
        analog_poles.push(s2);
        let z1 = bilinear(s1);
        let z2 = bilinear(s2);
        if disc.im.abs() > 0.0 {
            // Complex pair; s2 = conj(s1).
            push_conjugate_pair_section(z1, &mut sections);
        } else {
            // Two real poles share a section.
            sections.push(Sos {
                b0: 1.0,
                b1: 0.0,
                b2: -1.0,
                a1: -(z1.re + z2.re),
                a2: z1.re * z2.re,
            });
        }
    }

    // Overall constant from the bilinear algebra:
    //   H(z) = K (z-1)^n (z+1)^n / prod(z - z_k),
    //   K = bw^n (2 fs)^n / prod(2 fs - s_k).
    let mut denom = Complex64::new(1.0, 0.0);
    for s in &analog_poles {
        denom *= fs2 - s;
    }
    let k_num = (bw * fs2).powi(order as i32);
    let gain_c = k_num / denom;
    debug_assert!(gain_c.im.abs() <= 1e-9 * gain_c.re.abs().max(1e-300));
    let gain = gain_c.re;

    for (i, s) in sections.iter().enumerate() {
        if !s.is_stable() {
            return Err(Error::InvalidParam(format!(
                "filter design produced an unstable section ({i}): band too extreme for fs {fs}"
            )));
        }
    }

    Ok(FilterCoefficients {
        sections,
        gain,
        order,
    })
}

/// |H(e^{j 2 pi f / fs})| of the cascade.
pub fn magnitude_response(coeffs: &FilterCoefficients, f_hz: f64, fs: f64) -> f64 {
    let w = 2.0 * std::f64::consts::PI * f_hz / fs;
    let z = Complex64::new(w.cos(), w.sin());
    let z2 = z * z;
    let mut h = Complex64::new(coeffs.gain, 0.0);
    for s in &coeffs.sections {
        let num = z2 * s.b0 + z * s.b1 + s.b2;
        let den = z2 + z * s.a1 + s.a2;
        h *= num / den;
    }
    h.norm()
}

/// One causal pass of a single section (transposed direct form II) from the
/// given initial state.
fn run_section(s: &Sos, x: &[f64], mut z1: f64, mut z2: f64) -> Vec<f64> {
    x.iter()
        .map(|&xin| {
            let y = s.b0 * xin + z1;
            z1 = s.b1 * xin - s.a1 * y + z2;
            z2 = s.b2 * xin - s.a2 * y;
            y
        })
        .collect()
}

fn reversed(x: &[f64]) -> Vec<f64> {
    x.iter().rev().copied().collect()
}

/// One causal pass through the cascade, each section starting from its
/// constant-input steady state for the first input sample. That choice
/// makes a constant signal pass through with no start-up transient at all.
pub fn filter_forward(coeffs: &FilterCoefficients, x: &[f64]) -> Vec<f64> {
    let mut y: Vec<f64> = x.iter().map(|v| v * coeffs.gain).collect();
    for s in &coeffs.sections {
        let x0 = y.first().copied().unwrap_or(0.0);
        // Steady state for unit constant input, scaled by the first sample.
        let den = 1.0 + s.a1 + s.a2;
        let y_ss = (s.b0 + s.b1 + s.b2) / den;
        let z2_ss = s.b2 - s.a2 * y_ss;
        let z1_ss = s.b1 - s.a1 * y_ss + z2_ss;
        y = run_section(s, &y, z1_ss * x0, z2_ss * x0);
    }
    y
}

/// Zero-phase pass of one section with Gustafsson's boundary treatment.
///
/// The two boundary states (forward-pass initial state, backward-pass
/// initial state) are chosen so that forward-then-backward filtering equals
/// backward-then-forward filtering. Both orderings are affine in the states,
/// so the condition is a small linear least-squares problem; its solution
/// also removes the start-up transients of the naive zero-state passes.
fn zero_phase_section(s: &Sos, x: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();

    // Both orderings with zero boundary states.
    let y_f = run_section(s, x, 0.0, 0.0);
    let y_fb = reversed(&run_section(s, &reversed(&y_f), 0.0, 0.0));
    let y_b = reversed(&run_section(s, &reversed(x), 0.0, 0.0));
    let y_bf = run_section(s, &y_b, 0.0, 0.0);

    // o_k: zero-input response to a unit in state component k. A unit in z2
    // reaches z1 one step later, so o1 is o0 delayed by one sample.
    let o0 = run_section(s, &vec![0.0; n], 1.0, 0.0);
    let mut o1 = vec![0.0; n];
    o1[1..].copy_from_slice(&o0[..n - 1]);
    // s_k: o_k reversed and filtered again, i.e. the second pass applied to
    // the first pass's state response.
    let s0 = run_section(s, &reversed(&o0), 0.0, 0.0);
    let s1 = run_section(s, &reversed(&o1), 0.0, 0.0);
    let s0r = reversed(&s0);
    let s1r = reversed(&s1);
    let o0r = reversed(&o0);
    let o1r = reversed(&o1);

    // Solve (y_fb + [s0r s1r] zf + [o0r o1r] zb) = (y_bf + [o0 o1] zf +
    // [s0 s1] zb) for the shared states zf, zb in the least-squares sense.
    let m = DMatrix::from_fn(n, 4, |i, j| match j {
        0 => s0r[i] - o0[i],
        1 => s1r[i] - o1[i],
        2 => o0r[i] - s0[i],
        _ => o1r[i] - s1[i],
    });
    let rhs = DVector::from_fn(n, |i, _| y_bf[i] - y_fb[i]);
    let svd = m.svd(true, true);
    let cutoff = 1e-12 * svd.singular_values.max();
    let ic = svd
        .solve(&rhs, cutoff)
        .map_err(|e| Error::Matrix(format!("zero-phase boundary solve: {e}")))?;

    let mut y = y_fb;
    for i in 0..n {
        y[i] += ic[0] * s0r[i] + ic[1] * s1r[i] + ic[2] * o0r[i] + ic[3] * o1r[i];
    }
    Ok(y)
}

/// Forward-backward filtering: zero phase, squared magnitude response.
///
/// The input mean is removed first. The pass band excludes DC, so the mean
/// is pure stop-band content; subtracting it up front realizes the ideal
/// zero response to that component instead of smearing it into boundary
/// transients. Each section is then applied forward-backward with
/// Gustafsson boundary states, which makes the whole operation commute
/// with time reversal. Output length equals input length. Requires
/// `x.len() > 3 * order`.
pub fn filter_zero_phase(coeffs: &FilterCoefficients, x: &[f64]) -> Result<Vec<f64>> {
    let min = 3 * coeffs.order;
    if x.len() <= min {
        return Err(Error::TooShort {
            what: "zero-phase filtering",
            needed: min + 1,
            got: x.len(),
        });
    }
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    // Two passes apply the gain twice.
    let g2 = coeffs.gain * coeffs.gain;
    let mut y: Vec<f64> = x.iter().map(|&v| (v - mean) * g2).collect();
    for s in &coeffs.sections {
        y = zero_phase_section(s, &y)?;
    }
    Ok(y)
}
