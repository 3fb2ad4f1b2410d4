//! State-space reconstruction and the choice of its two parameters.
//!
//! A scalar series is unfolded into delay vectors (x[t], x[t+tau], ...,
//! x[t+(m-1)tau]). The delay tau comes from the first local minimum of the
//! average mutual information between the series and its lagged copy; the
//! dimension m comes from the false-nearest-neighbor criterion: the
//! smallest dimension in which almost no nearest neighbor is an artifact
//! of projection.

use crate::error::{Error, Result};
use crate::par;

/// Delay-vector matrix: row t holds (x[t], x[t+tau], ..., x[t+(m-1)tau]).
#[derive(Debug, Clone)]
pub struct Trajectory {
    data: Vec<f64>,
    rows: usize,
    pub m: usize,
    pub tau: usize,
}

impl Trajectory {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.m..(t + 1) * self.m]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.m)
    }
}

/// Build the delay-vector matrix. Requires `x.len() > (m-1)*tau` so at
/// least one row exists; the result has exactly `x.len() - (m-1)*tau` rows.
pub fn reconstruct_state_space(x: &[f64], m: usize, tau: usize) -> Result<Trajectory> {
    if m == 0 {
        return Err(Error::InvalidParam("embedding dimension must be >= 1".into()));
    }
    if m > 1 && tau == 0 {
        return Err(Error::InvalidParam("embedding delay must be >= 1".into()));
    }
    let span = (m - 1) * tau;
    if x.len() <= span {
        return Err(Error::TooShort {
            what: "state-space reconstruction",
            needed: span + 1,
            got: x.len(),
        });
    }
    let rows = x.len() - span;
    let mut data = Vec::with_capacity(rows * m);
    for t in 0..rows {
        for k in 0..m {
            data.push(x[t + k * tau]);
        }
    }
    Ok(Trajectory { data, rows, m, tau })
}

/// Bin index on an equal-width grid over [min, max]; the max itself lands
/// in the top bin.
fn bin_of(v: f64, min: f64, range: f64, bins: usize) -> usize {
    let t = ((v - min) / range * bins as f64) as usize;
    t.min(bins - 1)
}

/// Average mutual information between x[n] and x[n+tau], in nats.
///
/// Joint probabilities come from a bins x bins equal-width 2-D histogram
/// spanning [min, max] of the whole signal; marginals are its row and
/// column sums. tau = 0 is allowed and reduces to the marginal Shannon
/// entropy. Requires `tau < x.len()` and a non-constant signal.
pub fn average_mutual_information(x: &[f64], tau: usize, bins: usize) -> Result<f64> {
    if bins < 2 {
        return Err(Error::InvalidParam(format!("ami needs >= 2 bins, got {bins}")));
    }
    if tau >= x.len() {
        return Err(Error::InvalidParam(format!(
            "ami delay {tau} out of range for length {}",
            x.len()
        )));
    }
    let (min, max) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let range = max - min;
    if range <= 0.0 {
        return Err(Error::ConstantSignal("average mutual information"));
    }

    let pairs = x.len() - tau;
    let mut joint = vec![0u32; bins * bins];
    for n in 0..pairs {
        let i = bin_of(x[n], min, range, bins);
        let j = bin_of(x[n + tau], min, range, bins);
        joint[i * bins + j] += 1;
    }
    let mut row = vec![0u32; bins];
    let mut col = vec![0u32; bins];
    for i in 0..bins {
        for j in 0..bins {
            let c = joint[i * bins + j];
            row[i] += c;
            col[j] += c;
        }
    }
    let total = pairs as f64;
    let mut info = 0.0;
    for i in 0..bins {
        for j in 0..bins {
            let c = joint[i * bins + j];
            if c > 0 {
                let p = c as f64 / total;
                info += p * (c as f64 * total / (row[i] as f64 * col[j] as f64)).ln();
            }
        }
    }
    // Non-negative by Gibbs' inequality; rounding can leave a tiny negative.
    Ok(info.max(0.0))
}

/// I(tau) for tau = 0..=tau_max.
pub fn ami_curve(x: &[f64], tau_max: usize, bins: usize) -> Result<Vec<f64>> {
    (0..=tau_max)
        .map(|tau| average_mutual_information(x, tau, bins))
        .collect()
}

/// Outcome of the delay search. `curve[tau]` is I(tau) over 0..=tau_max.
#[derive(Debug, Clone)]
pub struct DelaySelection {
    pub tau: usize,
    pub curve: Vec<f64>,
    /// False when the curve had no local minimum and `tau` is the argmin
    /// fallback.
    pub found_minimum: bool,
}

/// Smallest tau in [1, tau_max-1] where I(tau) < I(tau-1) and
/// I(tau) <= I(tau+1); if the curve has no such point, the argmin over
/// [1, tau_max] with `found_minimum = false`.
pub fn optimal_delay(x: &[f64], tau_max: usize, bins: usize) -> Result<DelaySelection> {
    if tau_max < 2 {
        return Err(Error::InvalidParam(format!(
            "delay search needs tau_max >= 2, got {tau_max}"
        )));
    }
    let curve = ami_curve(x, tau_max, bins)?;
    for tau in 1..tau_max {
        if curve[tau] < curve[tau - 1] && curve[tau] <= curve[tau + 1] {
            return Ok(DelaySelection {
                tau,
                curve,
                found_minimum: true,
            });
        }
    }
    let mut tau = 1;
    for t in 2..=tau_max {
        if curve[t] < curve[tau] {
            tau = t;
        }
    }
    Ok(DelaySelection {
        tau,
        curve,
        found_minimum: false,
    })
}

/// Fraction of embedded points whose nearest neighbor at dimension `dim`
/// is false: the pair separates in coordinate dim+1 by more than `r_tol`
/// times its dimension-`dim` distance.
///
/// Neighbors are Euclidean over the M = N - dim*tau points that still have
/// a (dim+1)-th coordinate, excluding self and anything within tau samples
/// in time. A pair at zero distance counts as false exactly when the next
/// coordinate separates it.
pub fn fnn_fraction(x: &[f64], tau: usize, dim: usize, r_tol: f64) -> Result<f64> {
    if dim == 0 || tau == 0 {
        return Err(Error::InvalidParam(
            "false-nearest-neighbor search needs dim >= 1 and tau >= 1".into(),
        ));
    }
    if !(r_tol > 0.0) {
        return Err(Error::InvalidParam(format!("r_tol must be > 0, got {r_tol}")));
    }
    let n = x.len();
    if n < dim * tau + 10 {
        return Err(Error::TooShort {
            what: "false-nearest-neighbor search",
            needed: dim * tau + 10,
            got: n,
        });
    }
    let m_pts = n - dim * tau;
    if m_pts <= tau + 1 {
        // Theiler exclusion would leave the first point with no candidates.
        return Err(Error::TooShort {
            what: "false-nearest-neighbor search (temporal exclusion)",
            needed: dim * tau + tau + 2,
            got: n,
        });
    }

    // Row-major embedded points; contiguous rows keep the scan cache-friendly.
    let mut pts = Vec::with_capacity(m_pts * dim);
    for t in 0..m_pts {
        for k in 0..dim {
            pts.push(x[t + k * tau]);
        }
    }

    let flags = par::map_indexed(m_pts, |t| {
        let pt = &pts[t * dim..(t + 1) * dim];
        let mut best = f64::INFINITY;
        let mut best_t = usize::MAX;
        for u in 0..m_pts {
            if u.abs_diff(t) <= tau {
                continue;
            }
            let pu = &pts[u * dim..(u + 1) * dim];
            // Partial-distance cutoff: abandon the pair once it cannot beat
            // the current best.
            let mut d2 = 0.0;
            for k in 0..dim {
                let d = pt[k] - pu[k];
                d2 += d * d;
                if d2 >= best {
                    break;
                }
            }
            if d2 < best {
                best = d2;
                best_t = u;
            }
        }
        let gap = x[t + dim * tau] - x[best_t + dim * tau];
        let gap2 = gap * gap;
        if best == 0.0 {
            u8::from(gap2 > 0.0)
        } else {
            u8::from(gap2 > r_tol * r_tol * best)
        }
    });
    let false_count: usize = flags.iter().map(|&f| f as usize).sum();
    Ok(false_count as f64 / m_pts as f64)
}

/// Outcome of the dimension search. `curve[d-1]` is the false-neighbor
/// fraction at dimension d, filled up to the selected dimension.
#[derive(Debug, Clone)]
pub struct DimensionSelection {
    pub dim: usize,
    pub curve: Vec<f64>,
    /// False when no dimension up to d_max reached the drop threshold and
    /// `dim` is the d_max fallback.
    pub converged: bool,
}

/// Smallest dimension in [1, d_max] whose false-neighbor fraction is at
/// most `drop`; d_max with `converged = false` if none qualifies.
pub fn optimal_dimension(
    x: &[f64],
    tau: usize,
    d_max: usize,
    r_tol: f64,
    drop: f64,
) -> Result<DimensionSelection> {
    if d_max < 2 {
        return Err(Error::InvalidParam(format!(
            "dimension search needs d_max >= 2, got {d_max}"
        )));
    }
    if !(drop > 0.0 && drop < 1.0) {
        return Err(Error::InvalidParam(format!(
            "drop threshold must lie in (0, 1), got {drop}"
        )));
    }
    let mut curve = Vec::with_capacity(d_max);
    for dim in 1..=d_max {
        let f = fnn_fraction(x, tau, dim, r_tol)?;
        curve.push(f);
        if f <= drop {
            return Ok(DimensionSelection {
                dim,
                curve,
                converged: true,
            });
        }
    }
    Ok(DimensionSelection {
        dim: d_max,
        curve,
        converged: false,
    })
}

/// Both embedding parameters of one signal, with their diagnostic curves.
#[derive(Debug, Clone)]
pub struct EmbeddingParams {
    pub tau: usize,
    pub m: usize,
    pub ami_curve: Vec<f64>,
    pub fnn_curve: Vec<f64>,
    pub tau_is_local_minimum: bool,
    pub dim_converged: bool,
}

/// Run the delay search, then the dimension search at that delay.
pub fn estimate_embedding(
    x: &[f64],
    tau_max: usize,
    bins: usize,
    d_max: usize,
    r_tol: f64,
    drop: f64,
) -> Result<EmbeddingParams> {
    let delay = optimal_delay(x, tau_max, bins)?;
    let dim = optimal_dimension(x, delay.tau, d_max, r_tol, drop)?;
    Ok(EmbeddingParams {
        tau: delay.tau,
        m: dim.dim,
        ami_curve: delay.curve,
        fnn_curve: dim.curve,
        tau_is_local_minimum: delay.found_minimum,
        dim_converged: dim.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform_noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.gen_range(0.0..1.0)).collect()
    }

    fn henon_x(n: usize) -> Vec<f64> {
        let (mut x, mut y) = (0.1f64, 0.1f64);
        let mut out = Vec::with_capacity(n);
        for i in 0..n + 100 {
            let xn = 1.0 - 1.4 * x * x + y;
            y = 0.3 * x;
            x = xn;
            if i >= 100 {
                out.push(x);
            }
        }
        out
    }

    #[test]
    fn reconstruction_matches_hand_example() {
        let tr = reconstruct_state_space(&[1.0, 2.0, 3.0, 4.0, 5.0], 2, 2).unwrap();
        assert_eq!(tr.rows(), 3);
        assert_eq!(tr.row(0), &[1.0, 3.0]);
        assert_eq!(tr.row(1), &[2.0, 4.0]);
        assert_eq!(tr.row(2), &[3.0, 5.0]);
    }

    #[test]
    fn dimension_one_is_identity() {
        let x = [4.0, 7.0, -1.0];
        let tr = reconstruct_state_space(&x, 1, 3).unwrap();
        assert_eq!(tr.rows(), 3);
        for (t, row) in tr.iter_rows().enumerate() {
            assert_eq!(row, &x[t..=t]);
        }
    }

    #[test]
    fn reconstruction_boundary_lengths() {
        // span = (m-1) tau = 4: five samples give one row, four give none.
        assert_eq!(
            reconstruct_state_space(&[1.0, 2.0, 3.0, 4.0, 5.0], 3, 2)
                .unwrap()
                .rows(),
            1
        );
        assert!(matches!(
            reconstruct_state_space(&[1.0, 2.0, 3.0, 4.0], 3, 2),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn reconstruction_indices_match_oracle() {
        let x = uniform_noise(200, 3);
        for (m, tau) in [(2usize, 1usize), (3, 5), (5, 7), (7, 11), (12, 16)] {
            let tr = reconstruct_state_space(&x, m, tau).unwrap();
            assert_eq!(tr.rows(), x.len() - (m - 1) * tau);
            for t in 0..tr.rows() {
                for k in 0..m {
                    assert_eq!(tr.row(t)[k], x[t + k * tau], "m={m} tau={tau} t={t} k={k}");
                }
            }
        }
    }

    #[test]
    fn ami_at_lag_zero_is_marginal_entropy() {
        let x = uniform_noise(2000, 1);
        let bins = 16;
        let i0 = average_mutual_information(&x, 0, bins).unwrap();
        // Oracle: Shannon entropy (nats) of the equal-width histogram.
        let min = x.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut counts = vec![0usize; bins];
        for &v in &x {
            counts[bin_of(v, min, max - min, bins)] += 1;
        }
        let h: f64 = counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / x.len() as f64;
                -p * p.ln()
            })
            .sum();
        assert!((i0 - h).abs() < 1e-12, "I(0) = {i0}, marginal H = {h}");
    }

    #[test]
    fn ami_independent_noise_is_near_zero() {
        // Independence bias is about (bins-1)^2 / (2N) nats.
        for seed in 0..20 {
            let x = uniform_noise(10_000, seed);
            let i1 = average_mutual_information(&x, 1, 16).unwrap();
            assert!((0.0..0.05).contains(&i1), "seed {seed}: I(1) = {i1}");
        }
    }

    #[test]
    fn ami_nonnegative_and_maximal_at_lag_zero() {
        for seed in [11, 12, 13] {
            let x = uniform_noise(500, seed);
            let curve = ami_curve(&x, 20, 8).unwrap();
            for (tau, &v) in curve.iter().enumerate() {
                assert!(v >= 0.0, "I({tau}) = {v}");
                assert!(v <= curve[0] + 1e-12, "I({tau}) = {v} > I(0) = {}", curve[0]);
            }
        }
    }

    #[test]
    fn ami_exact_under_affine_transforms() {
        let x = uniform_noise(1500, 21);
        for (a, b) in [(2.0, 1000.0), (0.125, -3.5), (7.3, 0.0)] {
            let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            for tau in [0usize, 1, 5, 17] {
                let ix = average_mutual_information(&x, tau, 16).unwrap();
                let iy = average_mutual_information(&y, tau, 16).unwrap();
                assert_eq!(ix, iy, "a={a} b={b} tau={tau}");
            }
        }
    }

    #[test]
    fn ami_rejects_bad_input() {
        assert!(matches!(
            average_mutual_information(&[1.0; 64], 1, 16),
            Err(Error::ConstantSignal(_))
        ));
        assert!(average_mutual_information(&[1.0, 2.0], 2, 16).is_err());
        assert!(average_mutual_information(&[1.0, 2.0], 1, 1).is_err());
    }

    #[test]
    fn sine_delay_is_quarter_period() {
        // A noiseless sine with integer period visits only 100 distinct
        // values, and any histogram fine enough to separate them aliases
        // the orbit: the curve picks up shallow spurious dips well before
        // the quarter period. The two-bin partition is the one member of
        // the equal-width family that cannot alias; sign agreement decays
        // linearly and reaches independence exactly at the quarter period.
        let x: Vec<f64> = (0..5000)
            .map(|n| (2.0 * std::f64::consts::PI * n as f64 / 100.0).sin())
            .collect();
        let sel = optimal_delay(&x, 50, 2).unwrap();
        assert!(sel.found_minimum);
        assert!(
            (23..=27).contains(&sel.tau),
            "quarter-period delay, got {}",
            sel.tau
        );
        // The reported tau is a local minimum of the curve.
        assert!(sel.curve[sel.tau] < sel.curve[sel.tau - 1]);
        assert!(sel.curve[sel.tau] <= sel.curve[sel.tau + 1]);
    }

    #[test]
    fn monotone_curve_falls_back_to_argmin() {
        // AR(1) with strong positive correlation: I(tau) decays with lag
        // and has no local minimum over a short horizon.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut v = 0.0f64;
        let x: Vec<f64> = (0..20_000)
            .map(|_| {
                v = 0.97 * v + rng.gen_range(-1.0..1.0);
                v
            })
            .collect();
        let sel = optimal_delay(&x, 6, 16).unwrap();
        assert!(!sel.found_minimum);
        assert_eq!(sel.tau, 6);
        for t in 1..sel.curve.len() - 1 {
            assert!(sel.curve[t + 1] < sel.curve[t], "not decreasing at {t}");
        }
    }

    #[test]
    fn ramp_has_no_false_neighbors() {
        let x: Vec<f64> = (0..50).map(|n| 0.3 * n as f64).collect();
        for tau in [1usize, 3] {
            let f = fnn_fraction(&x, tau, 1, 10.0).unwrap();
            assert_eq!(f, 0.0, "tau = {tau}");
        }
    }

    #[test]
    fn henon_unfolds_in_two_dimensions() {
        let x = henon_x(2000);
        let f2 = fnn_fraction(&x, 1, 2, 10.0).unwrap();
        assert!(f2 < 0.02, "fraction at dim 2 = {f2}");
        let sel = optimal_dimension(&x, 1, 12, 10.0, 0.02).unwrap();
        assert!(sel.converged);
        assert_eq!(sel.dim, 2);
    }

    #[test]
    fn noise_never_unfolds() {
        // The pure ratio criterion compares the next-coordinate gap to the
        // neighbor distance; for bounded i.i.d. noise the gap is bounded
        // while neighbor distances grow with dimension, so a tolerance of
        // 10 can hardly ever fire at dim 5. The folded-noise signature is
        // asserted at a tolerance the ratio can actually express.
        for seed in 0..20 {
            let x = uniform_noise(2000, 40 + seed);
            let f = fnn_fraction(&x, 1, 5, 2.0).unwrap();
            assert!(f > 0.2, "seed {seed}: fraction at dim 5 = {f}");
        }
    }

    #[test]
    fn fnn_fraction_bounded_and_monotone_in_tolerance() {
        let x = uniform_noise(800, 9);
        let mut prev = 1.0f64;
        for r_tol in [2.0, 5.0, 10.0, 20.0, 40.0] {
            let f = fnn_fraction(&x, 2, 3, r_tol).unwrap();
            assert!((0.0..=1.0).contains(&f));
            assert!(f <= prev, "fraction rose from {prev} to {f} at r_tol {r_tol}");
            prev = f;
        }
    }

    #[test]
    fn fnn_rejects_short_input() {
        let x = uniform_noise(30, 2);
        assert!(matches!(
            fnn_fraction(&x, 5, 5, 10.0),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn dimension_search_fallback_flags() {
        // White noise stays folded at every dimension the data can support.
        let x = uniform_noise(400, 77);
        let sel = optimal_dimension(&x, 1, 4, 10.0, 0.01).unwrap();
        assert!(!sel.converged);
        assert_eq!(sel.dim, 4);
        assert_eq!(sel.curve.len(), 4);
    }

    #[test]
    fn embedding_params_combine_both_searches() {
        // Sine with an irrational period in samples: no two samples repeat
        // exactly, so neighbor distances stay meaningful at every
        // dimension. The delay lands on the quarter period and the
        // (x, quarter-shifted x) plane is a circle, which unfolds at two
        // dimensions.
        let x: Vec<f64> = (0..5000)
            .map(|n| (2.0 * std::f64::consts::PI * n as f64 / 103.37).sin())
            .collect();
        let p = estimate_embedding(&x, 50, 2, 8, 10.0, 0.02).unwrap();
        assert!((24..=28).contains(&p.tau), "tau = {}", p.tau);
        assert_eq!(p.m, 2);
        assert_eq!(p.ami_curve.len(), 51);
        assert_eq!(p.fnn_curve.len(), p.m);
        assert!(p.tau_is_local_minimum);
        assert!(p.dim_converged);
    }
}
