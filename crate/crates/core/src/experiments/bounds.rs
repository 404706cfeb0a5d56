//! Closed-form decoding-failure bounds for the BSC and the BI-AWGN channel.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum BoundChannel {
    Bsc,
    Awgn,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundResult {
    pub channel: BoundChannel,
    /// Crossover probability for the BSC, noise variance for the AWGN channel.
    pub threshold: f64,
    /// Failure-probability bound; for the AWGN channel it includes the
    /// `σ`-dependent prefactor and is `None` when no `σ` was given.
    pub bound: Option<f64>,
    pub n: f64,
    pub d: f64,
    pub dl_min: f64,
    pub dl_max: f64,
    pub epsilon: f64,
    /// `log_D(N)`, the path length the bound is built on.
    pub g: f64,
    /// `d_L^min / (d_L^min + d_L^max)`.
    pub delta: f64,
    /// Whether the systematic-half puncturing variant was requested.
    pub punctured: bool,
    /// Left-regular BSC value `D^-8 / 4` at `ε = 1/2`.
    pub regular_threshold: Option<f64>,
    /// Matching bound `1/√N`.
    pub regular_bound: Option<f64>,
}

impl BoundResult {
    /// The bound needs paths of length `g` to be cycle-free.
    pub fn applicable(&self, girth: Option<usize>) -> bool {
        girth.is_none_or(|gi| self.g < gi as f64)
    }
}

fn check_inputs(n: f64, d: f64, epsilon: f64) -> Result<()> {
    if !(n > 1.0 && n.is_finite()) {
        return Err(Error::InvalidParameter(format!("N = {n} must exceed 1")));
    }
    if !(d >= 2.0 && d.is_finite()) {
        return Err(Error::InvalidParameter(format!("D = {d} must be at least 2")));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!("ε = {epsilon} must be positive")));
    }
    Ok(())
}

fn log_base(d: f64, x: f64) -> f64 {
    x.ln() / d.ln()
}

/// BSC threshold `D^{-2(1 + dmin/dmax)(ε + 3/2 + ½ log_D 2)}` with bound
/// `N^{-ε}`. With `punctured`, the per-path variable count is halved:
/// `D^{-4(1 + dmin/dmax)(ε + 3/2 + ¼ log_D 2)}`.
pub fn bound_bsc(
    n: f64,
    d: f64,
    dl_min: f64,
    dl_max: f64,
    epsilon: f64,
    punctured: bool,
) -> Result<BoundResult> {
    check_inputs(n, d, epsilon)?;
    if !(dl_min > 0.0 && dl_max >= dl_min) {
        return Err(Error::InvalidParameter(format!(
            "left degrees {dl_min}..{dl_max} are not a positive range"
        )));
    }
    let (outer, inner) = if punctured { (4.0, 0.25) } else { (2.0, 0.5) };
    let exponent = -outer * (1.0 + dl_min / dl_max) * (epsilon + 1.5 + inner * log_base(d, 2.0));
    let regular_half = dl_min == dl_max && epsilon == 0.5 && !punctured;
    Ok(BoundResult {
        channel: BoundChannel::Bsc,
        threshold: d.powf(exponent),
        bound: Some(n.powf(-epsilon)),
        n,
        d,
        dl_min,
        dl_max,
        epsilon,
        g: log_base(d, n),
        delta: dl_min / (dl_min + dl_max),
        punctured,
        regular_threshold: regular_half.then(|| d.powi(-8) / 4.0),
        regular_bound: regular_half.then(|| 1.0 / n.sqrt()),
    })
}

/// AWGN threshold `σ² < log_D(e) / (6 + 4ε)` with bound
/// `σ / √(π log_D N) · N^{-ε}`; left-regular codes only. With `punctured`:
/// `log_D(e) / (12 + 8ε)` and prefactor `σ √(2 / (π log_D N))`.
pub fn bound_awgn(n: f64, d: f64, epsilon: f64, sigma: Option<f64>, punctured: bool) -> Result<BoundResult> {
    check_inputs(n, d, epsilon)?;
    if let Some(s) = sigma {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidParameter(format!("σ = {s} must be positive")));
        }
    }
    let g = log_base(d, n);
    let log_e = log_base(d, std::f64::consts::E);
    let pi = std::f64::consts::PI;
    let (threshold, prefactor) = if punctured {
        (log_e / (12.0 + 8.0 * epsilon), (2.0 / (pi * g)).sqrt())
    } else {
        (log_e / (6.0 + 4.0 * epsilon), 1.0 / (pi * g).sqrt())
    };
    Ok(BoundResult {
        channel: BoundChannel::Awgn,
        threshold,
        bound: sigma.map(|s| s * prefactor * n.powf(-epsilon)),
        n,
        d,
        dl_min: f64::NAN,
        dl_max: f64::NAN,
        epsilon,
        g,
        delta: 0.5,
        punctured,
        regular_threshold: None,
        regular_bound: None,
    })
}

/// `σ / (x √(2π)) · exp(-x² / (2σ²))`, an upper bound on `Pr{N(0,σ²) ≥ x}`.
pub fn gaussian_tail(x: f64, sigma: f64) -> Result<f64> {
    if !(x > 0.0 && sigma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gaussian tail needs x > 0 and σ > 0, got x = {x}, σ = {sigma}"
        )));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    Ok(sigma / (x * two_pi.sqrt()) * (-(x * x) / (2.0 * sigma * sigma)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_closed_form() {
        let r = bound_bsc(1000.0, 4.0, 2.0, 2.0, 0.5, false).unwrap();
        assert_eq!(r.regular_threshold, Some(2f64.powi(-18)));
        assert!((r.threshold - 2f64.powi(-18)).abs() < 1e-18);
        assert_eq!(r.regular_bound, Some(1.0 / 1000f64.sqrt()));
        assert!(bound_bsc(1000.0, 4.0, 2.0, 4.0, 0.5, false).unwrap().regular_threshold.is_none());
    }

    #[test]
    fn bsc_threshold_monotone_in_epsilon() {
        let mut last = 0.0;
        for k in (1..50).rev() {
            let t = bound_bsc(1e4, 6.0, 2.0, 2.0, k as f64 * 0.1, false).unwrap().threshold;
            assert!(t > last);
            last = t;
        }
    }

    #[test]
    fn awgn_threshold_d6() {
        let r = bound_awgn(1e6, 6.0, 0.5, None, false).unwrap();
        assert!((r.threshold - 1.0 / (8.0 * 6f64.ln())).abs() < 1e-15);
        assert!((r.threshold - 0.06977).abs() < 1e-5);
    }

    #[test]
    fn awgn_bound_monotone() {
        let b = |n: f64, s: f64| bound_awgn(n, 6.0, 0.5, Some(s), false).unwrap().bound.unwrap();
        assert!(b(1e6, 0.2) < b(1e6, 0.25));
        assert!(b(1e8, 0.2) < b(1e6, 0.2));
    }

    #[test]
    fn tail_examples() {
        let v = gaussian_tail(1.0, 1.0).unwrap();
        assert!((v - 0.24197).abs() < 1e-5);
        assert!(gaussian_tail(40.0, 1.0).unwrap() < 1e-300);
        assert!(gaussian_tail(0.0, 1.0).is_err());
        assert!(gaussian_tail(1.0, -1.0).is_err());
    }

    #[test]
    fn punctured_thresholds_are_smaller() {
        let a = bound_bsc(1e4, 6.0, 2.0, 2.0, 0.5, false).unwrap().threshold;
        let b = bound_bsc(1e4, 6.0, 2.0, 2.0, 0.5, true).unwrap().threshold;
        assert!(b < a);
        let a = bound_awgn(1e4, 6.0, 0.5, None, false).unwrap().threshold;
        let b = bound_awgn(1e4, 6.0, 0.5, None, true).unwrap().threshold;
        assert!((b - a / 2.0).abs() < 1e-15);
    }
}
