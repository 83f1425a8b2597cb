//! Numerical threshold location and phase scans over kinematic drives.

use rayon::prelude::*;
use serde::Serialize;

use super::circuit::LcCircuit;
use super::growth::{estimate_growth_rate, GrowthEstimate};
use super::simulate::{simulate, SimConfig};
use crate::error::{ParampError, Result};
use crate::model::PumpDrive;
use crate::thresholds::threshold_velocity;

/// Upper end of the search bracket in units of the analytic threshold.
pub const BRACKET_MULTIPLE: f64 = 10.0;
/// Growth rates smaller than this many e-folds per signal cycle count as zero.
pub const ZERO_RATE_PER_CYCLE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericThreshold {
    /// Midpoint of the final bracket, m/s.
    pub velocity: f64,
    pub bracket: (f64, f64),
    pub probes: usize,
    pub cycles_simulated: usize,
}

/// Fitted growth rate for a kinematic drive of amplitude `v_2w`.
pub fn growth_at(
    circuit: &LcCircuit,
    v_2w: f64,
    phase: f64,
    cfg: &SimConfig,
) -> Result<GrowthEstimate> {
    let drive = PumpDrive::kinematic(v_2w, phase)?;
    let trace = simulate(circuit, &drive, cfg)?;
    estimate_growth_rate(&trace)
}

/// Bisects the drive amplitude for zero net energy growth on
/// `[0, 10 · 4ωd0/Q]`, stopping once the bracket is narrower than `tol_rel`
/// of its midpoint.
pub fn find_threshold_velocity_numeric(
    circuit: &LcCircuit,
    cfg: &SimConfig,
    tol_rel: f64,
) -> Result<NumericThreshold> {
    if !(1e-4..=0.2).contains(&tol_rel) {
        return Err(ParampError::ConfigError(format!(
            "tol_rel must lie in [1e-4, 0.2], got {tol_rel}"
        )));
    }
    cfg.validate()?;
    let cav = circuit.cavity();
    let analytic = threshold_velocity(cav.omega(), cav.gap(), cav.quality())?;
    let zero_band = ZERO_RATE_PER_CYCLE / cav.period();
    let phase = cfg.drive_phase;

    let mut lo = 0.0;
    let mut hi = BRACKET_MULTIPLE * analytic;
    let rate_lo = growth_at(circuit, lo, phase, cfg)?.rate;
    let rate_hi = growth_at(circuit, hi, phase, cfg)?.rate;
    let mut probes = 2;
    if !(rate_lo < -zero_band && rate_hi > zero_band) {
        return Err(ParampError::NoSignChange {
            lo,
            hi,
            rate_lo,
            rate_hi,
        });
    }

    while hi - lo > tol_rel * 0.5 * (lo + hi) {
        let mid = 0.5 * (lo + hi);
        let rate = growth_at(circuit, mid, phase, cfg)?.rate;
        probes += 1;
        if rate > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    Ok(NumericThreshold {
        velocity: 0.5 * (lo + hi),
        bracket: (lo, hi),
        probes,
        cycles_simulated: probes * cfg.n_cycles,
    })
}

/// Growth rate at each drive phase, computed in parallel. Output order
/// follows `phases`.
pub fn phase_scan(
    circuit: &LcCircuit,
    v_2w: f64,
    phases: &[f64],
    cfg: &SimConfig,
) -> Result<Vec<(f64, GrowthEstimate)>> {
    phases
        .par_iter()
        .map(|&phase| growth_at(circuit, v_2w, phase, cfg).map(|g| (phase, g)))
        .collect()
}

/// `n` phases evenly spaced over one drive period, starting at 0.
pub fn even_phases(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| std::f64::consts::TAU * k as f64 / n as f64)
        .collect()
}
