// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Exponential decay fits and Arrhenius analysis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{GHZ_PER_CM1, K_B_GHZ_PER_K};

/// Result of fitting y(t) = a + b exp(-t / tau).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpFit {
    pub a: f64,
    pub b: f64,
    /// Decay time in the units of the input times.
    pub tau: f64,
    /// RMS residual divided by |b|.
    pub rel_residual: f64,
}

/// Fits with a relative residual above this are reported as multi-exponential.
pub const SINGLE_EXP_THRESHOLD: f64 = 0.05;

fn linear_part(t: &[f64], y: &[f64], tau: f64) -> (f64, f64, f64) {
    let n = t.len() as f64;
    let e: Vec<f64> = t.iter().map(|&ti| (-ti / tau).exp()).collect();
    let (se, see) = (e.iter().sum::<f64>(), e.iter().map(|x| x * x).sum::<f64>());
    let (sy, sey) = (y.iter().sum::<f64>(), e.iter().zip(y).map(|(a, b)| a * b).sum::<f64>());
    let det = n * see - se * se;
    if det.abs() < 1e-300 {
        let a = sy / n;
        let ssr = y.iter().map(|v| (v - a).powi(2)).sum();
        return (a, 0.0, ssr);
    }
    let b = (n * sey - se * sy) / det;
    let a = (sy - b * se) / n;
    let ssr = e.iter().zip(y).map(|(ei, yi)| (yi - a - b * ei).powi(2)).sum();
    (a, b, ssr)
}

/// Least-squares fit of a + b exp(-t/tau). The decay time is found by a
/// log-spaced scan followed by golden-section refinement; a and b are solved
/// linearly at each trial tau.
pub fn fit_exponential(t: &[f64], y: &[f64]) -> Result<ExpFit> {
    if t.len() != y.len() || t.len() < 4 {
        return Err(Error::NoFit("need at least four samples".into()));
    }
    if t.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::NoFit("non-finite samples".into()));
    }
    let span = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - y.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = y.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-300);
    if span <= 1e-9 * scale || span == 0.0 {
        return Err(Error::NoFit("signal does not change".into()));
    }
    let t_max = t.iter().cloned().fold(0.0, f64::max);
    let t_min = t.iter().cloned().filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min);
    if !(t_max > 0.0) {
        return Err(Error::NoFit("time grid has no positive times".into()));
    }
    let (lo, hi) = ((t_min / 10.0).ln(), (t_max * 10.0).ln());
    let cost = |x: f64| linear_part(t, y, x.exp()).2;

    let steps = 400;
    let mut best = (0, f64::INFINITY);
    for k in 0..=steps {
        let x = lo + (hi - lo) * k as f64 / steps as f64;
        let c = cost(x);
        if c < best.1 {
            best = (k, c);
        }
    }
    if best.0 == steps {
        return Err(Error::NoFit("decay is too slow for the time window".into()));
    }
    let h = (hi - lo) / steps as f64;
    let (mut a, mut b) = (lo + h * (best.0 as f64 - 1.0), lo + h * (best.0 as f64 + 1.0));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
    let (mut fc, mut fd) = (cost(c), cost(d));
    for _ in 0..200 {
        if (b - a).abs() < 1e-13 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = cost(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = cost(d);
        }
    }
    let tau = (0.5 * (a + b)).exp();
    let (ca, cb, ssr) = linear_part(t, y, tau);
    if cb.abs() <= 1e-12 * scale {
        return Err(Error::NoFit("fitted amplitude vanishes".into()));
    }
    Ok(ExpFit { a: ca, b: cb, tau, rel_residual: (ssr / t.len() as f64).sqrt() / cb.abs() })
}

/// ln T1 = ln tau0 + U / (k_B T).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrheniusFit {
    pub u_eff_cm1: f64,
    /// Prefactor, in the units of the supplied T1 values.
    pub tau0: f64,
    pub t_range_k: (f64, f64),
    /// RMS residual of ln T1.
    pub residual: f64,
    pub r_squared: f64,
    /// T1 decreases monotonically with temperature.
    pub monotonic: bool,
}

pub fn arrhenius_fit(points: &[(f64, f64)]) -> Result<ArrheniusFit> {
    if points.len() < 2 {
        return Err(Error::IllConditioned("at least two temperatures are required".into()));
    }
    if points.iter().any(|&(t, t1)| !(t > 0.0 && t1 > 0.0 && t.is_finite() && t1.is_finite())) {
        return Err(Error::IllConditioned("temperatures and T1 must be positive".into()));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let x: Vec<f64> = pts.iter().map(|p| 1.0 / p.0).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx <= 1e-12 * mx * mx {
        return Err(Error::IllConditioned("temperatures must differ".into()));
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let ssr: f64 = x.iter().zip(&y).map(|(a, b)| (b - icpt - slope * a).powi(2)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let monotonic = pts.windows(2).all(|w| w[1].1 < w[0].1);
    Ok(ArrheniusFit {
        // slope is U / k_B in kelvin
        u_eff_cm1: slope * K_B_GHZ_PER_K / GHZ_PER_CM1,
        tau0: icpt.exp(),
        t_range_k: (pts[0].0, pts[pts.len() - 1].0),
        residual: (ssr / n).sqrt(),
        r_squared: if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 },
        monotonic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_pure_exponential() {
        let t: Vec<f64> = (0..80).map(|k| 0.1 * 1.1f64.powi(k)).collect();
        let y: Vec<f64> = t.iter().map(|&x| 0.2 + 0.7 * (-x / 10.0).exp()).collect();
        let f = fit_exponential(&t, &y).unwrap();
        assert!((f.tau / 10.0 - 1.0).abs() < 1e-3, "{f:?}");
        assert!((f.a - 0.2).abs() < 1e-6 && (f.b - 0.7).abs() < 1e-6);
        assert!(f.rel_residual < 1e-6);
    }

    #[test]
    fn flat_signal_is_no_fit() {
        let t: Vec<f64> = (0..10).map(|k| k as f64).collect();
        assert!(matches!(fit_exponential(&t, &[0.5; 10]), Err(Error::NoFit(_))));
        let slow: Vec<f64> = t.iter().map(|&x| 1.0 - 1e-3 * x).collect();
        assert!(fit_exponential(&t, &slow).is_err());
    }

    #[test]
    fn arrhenius_recovers_barrier() {
        let u = 34.5;
        let pts: Vec<(f64, f64)> =
            (3..=11).map(|t| (t as f64, 2.0e-3 * (u * GHZ_PER_CM1 / (K_B_GHZ_PER_K * t as f64)).exp())).collect();
        let f = arrhenius_fit(&pts).unwrap();
        assert!((f.u_eff_cm1 / u - 1.0).abs() < 1e-9);
        assert!((f.tau0 / 2.0e-3 - 1.0).abs() < 1e-9);
        assert!(f.monotonic && f.r_squared > 0.999_999);
    }

    #[test]
    fn two_points_interpolate_exactly() {
        let f = arrhenius_fit(&[(3.0, 100.0), (6.0, 10.0)]).unwrap();
        assert!(f.residual < 1e-12);
        let expect = 10f64.ln() / (1.0 / 3.0 - 1.0 / 6.0) * K_B_GHZ_PER_K / GHZ_PER_CM1;
        assert!((f.u_eff_cm1 - expect).abs() < 1e-10);
    }

    #[test]
    fn arrhenius_diagnostics() {
        assert!(arrhenius_fit(&[(3.0, 1.0)]).is_err());
        assert!(arrhenius_fit(&[(3.0, 1.0), (3.0, 2.0)]).is_err());
        assert!(arrhenius_fit(&[(3.0, -1.0), (4.0, 2.0)]).is_err());
        let f = arrhenius_fit(&[(3.0, 1.0), (4.0, 2.0), (5.0, 0.5)]).unwrap();
        assert!(!f.monotonic);
    }
}
