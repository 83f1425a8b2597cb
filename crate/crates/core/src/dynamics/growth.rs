//! Envelope growth rate from a simulated trace.
//!
//! Per-cycle maxima of stored energy are fitted with a straight line in
//! log space. The first 20 % of cycles is dropped so the non-amplified
//! quadrature has time to die out.

use serde::Serialize;

use super::simulate::Trace;
use crate::error::{ParampError, Result};

pub const MIN_FIT_CYCLES: usize = 20;
/// Fraction of leading cycles excluded from the fit.
pub const TRANSIENT_FRACTION: f64 = 0.2;
const ENERGY_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthMethod {
    CycleMaximaLogLinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthEstimate {
    /// Fitted energy growth rate, 1/s. Negative for decay.
    pub rate: f64,
    pub r_squared: f64,
    pub window_cycles: usize,
    pub method: GrowthMethod,
}

/// Ordinary least-squares line through `(x, y)` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_line(points: &[(f64, f64)]) -> Option<LineFit> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let ss_res = (syy - slope * sxy).max(0.0);
    let r_squared = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Some(LineFit {
        slope,
        intercept: mean_y - slope * mean_x,
        r_squared,
    })
}

/// `(time, energy)` of the largest stored energy within each complete
/// signal cycle.
pub fn cycle_maxima(trace: &Trace) -> Vec<(f64, f64)> {
    let n_cycles = trace.meta.config.n_cycles;
    let mut best: Vec<Option<(f64, f64)>> = vec![None; n_cycles];
    for (k, s) in trace.samples.iter().enumerate() {
        let c = trace.cycle_of(k);
        if c >= n_cycles {
            continue;
        }
        let u = s.stored_energy();
        match best[c] {
            Some((_, b)) if u <= b || u.is_nan() => {}
            _ => best[c] = Some((s.state.time, u)),
        }
    }
    best.into_iter().flatten().collect()
}

/// Mean capacitor and inductor energies over each complete cycle:
/// `(cycle start time, ⟨U_E⟩, ⟨U_B⟩)`.
pub fn cycle_averages(trace: &Trace) -> Vec<(f64, f64, f64)> {
    let n_cycles = trace.meta.config.n_cycles;
    let mut acc = vec![(0.0, 0.0, 0usize); n_cycles];
    for (k, s) in trace.samples.iter().enumerate() {
        let c = trace.cycle_of(k);
        if c >= n_cycles {
            continue;
        }
        acc[c].0 += s.u_e;
        acc[c].1 += s.u_b;
        acc[c].2 += 1;
    }
    let period = trace.period();
    acc.into_iter()
        .enumerate()
        .filter(|(_, a)| a.2 > 0)
        .map(|(c, (ue, ub, n))| (c as f64 * period, ue / n as f64, ub / n as f64))
        .collect()
}

pub fn estimate_growth_rate(trace: &Trace) -> Result<GrowthEstimate> {
    let n_cycles = trace.meta.config.n_cycles;
    if n_cycles < MIN_FIT_CYCLES {
        return Err(ParampError::ConfigError(format!(
            "growth fit needs at least {MIN_FIT_CYCLES} cycles, trace has {n_cycles}"
        )));
    }
    let maxima = cycle_maxima(trace);
    if maxima.iter().any(|&(_, u)| !u.is_finite()) {
        return Err(ParampError::DegenerateTrace);
    }
    let skip = (TRANSIENT_FRACTION * maxima.len() as f64).floor() as usize;
    let points: Vec<(f64, f64)> = maxima[skip..]
        .iter()
        .filter(|&&(_, u)| u > ENERGY_FLOOR)
        .map(|&(t, u)| (t, u.ln()))
        .collect();
    let fit = fit_line(&points).ok_or(ParampError::DegenerateTrace)?;
    Ok(GrowthEstimate {
        rate: fit.slope,
        r_squared: fit.r_squared,
        window_cycles: points.len(),
        method: GrowthMethod::CycleMaximaLogLinear,
    })
}
