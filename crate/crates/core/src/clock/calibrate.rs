// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Least-squares calibration of model parameters against clock-transition
//! observables, using a Nelder–Mead simplex.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::SpinSystemParams;

use super::anticrossing::{find_anticrossings, transition_frequency, CtSearch};

/// A parameter the optimizer may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum FreeParam {
    /// Tunneling gap of the effective doublet (GHz).
    Delta,
    AZ,
    GJ,
    /// Any crystal-field coefficient B_k^q.
    Cf {
        k: i32,
        q: i32,
    },
}

impl FreeParam {
    pub fn get(&self, p: &SpinSystemParams) -> f64 {
        match *self {
            FreeParam::Delta => p.tunneling_gap(),
            FreeParam::AZ => p.a_z,
            FreeParam::GJ => p.g_j,
            FreeParam::Cf { k, q } => p.cf.get(k, q),
        }
    }

    pub fn set(&self, p: &mut SpinSystemParams, v: f64) {
        match *self {
            FreeParam::Delta => {
                let (k, q) = crate::spin::params::TUNNELING_KEY;
                p.cf.set(k, q, v)
            }
            FreeParam::AZ => p.a_z = v,
            FreeParam::GJ => p.g_j = v,
            FreeParam::Cf { k, q } => p.cf.set(k, q, v),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "delta" => Ok(FreeParam::Delta),
            "a_z" => Ok(FreeParam::AZ),
            "g_j" => Ok(FreeParam::GJ),
            other => {
                let parts: Vec<_> = other.split(':').collect();
                if parts.len() == 3 && parts[0] == "cf" {
                    let k = parts[1].parse().map_err(|_| Error::Config(format!("bad k in '{other}'")))?;
                    let q = parts[2].parse().map_err(|_| Error::Config(format!("bad q in '{other}'")))?;
                    return Ok(FreeParam::Cf { k, q });
                }
                Err(Error::Config(format!("unknown free parameter '{other}' (delta, a_z, g_j or cf:k:q)")))
            }
        }
    }
}

/// An observable that can be targeted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Observable {
    /// Field of the first anticrossing above `search_from_mt` (mT).
    FirstCtField { lower: usize, upper: usize, search_from_mt: f64, search_to_mt: f64 },
    /// Gap at that anticrossing (GHz).
    FirstCtFrequency { lower: usize, upper: usize, search_from_mt: f64, search_to_mt: f64 },
    /// Transition frequency at a fixed field (GHz).
    GapAt { lower: usize, upper: usize, field_mt: f64 },
}

impl Observable {
    pub fn first_ct_field() -> Self {
        Observable::FirstCtField { lower: 7, upper: 8, search_from_mt: 0.0, search_to_mt: 60.0 }
    }

    pub fn first_ct_frequency() -> Self {
        Observable::FirstCtFrequency { lower: 7, upper: 8, search_from_mt: 0.0, search_to_mt: 60.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub observable: Observable,
    pub value: f64,
    #[serde(default = "unit_weight")]
    pub weight: f64,
}

fn unit_weight() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTarget {
    pub targets: Vec<Target>,
}

#[derive(Debug, Clone, Copy)]
pub struct CalibrationOptions {
    /// Stop once the weighted squared relative residual falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Initial simplex step, relative to each starting value.
    pub initial_step: f64,
    pub search: CtSearch,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 400,
            initial_step: 0.05,
            search: CtSearch { prescan_step_mt: 0.5, tol_mt: 1e-6, ..CtSearch::default() },
        }
    }
}

#[derive(Debug, Clone)]
pub struct CalibrationReport {
    pub params: SpinSystemParams,
    pub free: Vec<(FreeParam, f64)>,
    pub residual: f64,
    /// Best residual after each iteration (non-increasing).
    pub history: Vec<f64>,
    pub iterations: usize,
    /// (target value, achieved value) per target.
    pub achieved: Vec<(f64, f64)>,
}

impl CalibrationReport {
    pub fn to_text(&self) -> String {
        let mut out = String::from("calibration report\n");
        for (f, v) in &self.free {
            out.push_str(&format!("free {f:?} = {v:.12e}\n"));
        }
        for (i, (t, a)) in self.achieved.iter().enumerate() {
            out.push_str(&format!("target[{i}] = {t:.9e} achieved = {a:.9e}\n"));
        }
        out.push_str(&format!("residual = {:.6e}\niterations = {}\n", self.residual, self.iterations));
        out.push_str("residual_history =");
        for h in &self.history {
            out.push_str(&format!(" {h:.6e}"));
        }
        out.push('\n');
        out
    }
}

/// Penalty reported when an observable is undefined (e.g. no anticrossing).
const MISSING_PENALTY: f64 = 1e6;

pub fn evaluate(obs: &Observable, p: &SpinSystemParams, search: &CtSearch) -> Result<Option<f64>> {
    match *obs {
        Observable::GapAt { lower, upper, field_mt } => {
            Ok(Some(transition_frequency(p, (lower, upper), field_mt, search.voltage)?))
        }
        Observable::FirstCtField { lower, upper, search_from_mt, search_to_mt }
        | Observable::FirstCtFrequency { lower, upper, search_from_mt, search_to_mt } => {
            let cts = find_anticrossings(p, (lower, upper), (search_from_mt, search_to_mt), search)?;
            Ok(cts.first().map(|c| match obs {
                Observable::FirstCtField { .. } => c.b_min_mt,
                _ => c.f_ct_ghz,
            }))
        }
    }
}

fn scale(v: f64) -> f64 {
    if v != 0.0 {
        v.abs()
    } else {
        1.0
    }
}

fn objective(targets: &CalibrationTarget, p: &SpinSystemParams, search: &CtSearch) -> Result<(f64, Vec<f64>)> {
    let mut total = 0.0;
    let mut values = Vec::with_capacity(targets.targets.len());
    for t in &targets.targets {
        match evaluate(&t.observable, p, search) {
            Ok(Some(v)) => {
                total += t.weight * ((v - t.value) / scale(t.value)).powi(2);
                values.push(v);
            }
            Ok(None) | Err(Error::NotHermitian(_)) => {
                total += t.weight * MISSING_PENALTY;
                values.push(f64::NAN);
            }
            Err(e) => return Err(e),
        }
    }
    Ok((total, values))
}

/// Fit `free` parameters of `initial` to `targets`.
pub fn calibrate(
    initial: &SpinSystemParams,
    targets: &CalibrationTarget,
    free: &[FreeParam],
    opts: &CalibrationOptions,
) -> Result<CalibrationReport> {
    initial.validate()?;
    if targets.targets.is_empty() {
        return Err(Error::InvalidCalibration("at least one target is required".into()));
    }
    if free.is_empty() || free.len() > targets.targets.len() {
        return Err(Error::InvalidCalibration(format!(
            "{} free parameters for {} targets",
            free.len(),
            targets.targets.len()
        )));
    }
    if targets.targets.iter().any(|t| !(t.weight > 0.0)) {
        return Err(Error::InvalidCalibration("weights must be positive".into()));
    }

    let x0: Vec<f64> = free.iter().map(|f| f.get(initial)).collect();
    let eval = |x: &[f64]| -> Result<f64> {
        let mut p = initial.clone();
        for (f, &v) in free.iter().zip(x) {
            f.set(&mut p, v);
        }
        Ok(objective(targets, &p, &opts.search)?.0)
    };

    let (best, history, iterations) = nelder_mead(eval, &x0, opts)?;
    let mut params = initial.clone();
    for (f, &v) in free.iter().zip(&best) {
        f.set(&mut params, v);
    }
    let (residual, values) = objective(targets, &params, &opts.search)?;
    if residual > opts.tolerance {
        return Err(Error::CalibrationFailed { iterations, best_residual: residual });
    }
    Ok(CalibrationReport {
        free: free.iter().copied().zip(best.iter().copied()).collect(),
        params,
        residual,
        history,
        iterations,
        achieved: targets.targets.iter().map(|t| t.value).zip(values).collect(),
    })
}

/// Nelder–Mead minimization. Returns the best point, the best value after
/// each iteration and the iteration count.
pub fn nelder_mead<F>(f: F, x0: &[f64], opts: &CalibrationOptions) -> Result<(Vec<f64>, Vec<f64>, usize)>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = f(x0)?;
    simplex.push((x0.to_vec(), f0));
    if f0 <= opts.tolerance {
        return Ok((x0.to_vec(), vec![f0], 0));
    }
    for i in 0..n {
        let mut x = x0.to_vec();
        let step = if x[i] != 0.0 { opts.initial_step * x[i] } else { opts.initial_step };
        x[i] += step;
        let fx = f(&x)?;
        simplex.push((x, fx));
    }

    let mut history = Vec::new();
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        history.push(simplex[0].1);
        if simplex[0].1 <= opts.tolerance {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> =
            (0..n).map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64).collect();
        let worst = simplex[n].clone();
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect() };

        let xr = along(1.0);
        let fr = f(&xr)?;
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = f(&xe)?;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let x = along(0.5);
            let fx = f(&x)?;
            (x, fx)
        } else {
            let x = along(-0.5);
            let fx = f(&x)?;
            (x, fx)
        };
        if fc < worst.1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for v in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = best.iter().zip(&v.0).map(|(b, xi)| b + 0.5 * (xi - b)).collect();
            let fx = f(&x)?;
            *v = (x, fx);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    if history.last() != Some(&simplex[0].1) {
        history.push(simplex[0].1);
    }
    Ok((simplex[0].0.clone(), history, iterations))
}
