//! Numerical checks of the time-average identities, LC equipartition, and
//! the steady plate amplitude under a field drive.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::circuit::LcCircuit;
use super::growth::cycle_averages;
use super::simulate::{simulate, SimConfig, Trace};
use crate::error::{ParampError, Result};
use crate::model::{PumpDrive, EPSILON_0};
use crate::thresholds::{averaged_pump_power, mean_energy_density};

/// Uniform nodes per drive period. Exact for trigonometric polynomials of
/// degree below this.
const NODES_PER_PERIOD: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeAverageReport {
    pub numeric_power: f64,
    pub analytic_power: f64,
    pub rel_diff: f64,
    /// `⟨cos² 2ωt⟩` over the same nodes.
    pub mean_cos2: f64,
    pub numeric_energy_density: f64,
    pub analytic_energy_density: f64,
}

fn rel_diff(numeric: f64, analytic: f64) -> f64 {
    if analytic == 0.0 {
        numeric.abs()
    } else {
        ((numeric - analytic) / analytic).abs()
    }
}

/// Averages the instantaneous power `¼ε₀E₀²·A·v_2w·(cos 2ωt + cos² 2ωt)`
/// over `n_periods` periods of the `2ω` drive and compares with `⅛ε₀E₀²Av_2w`.
pub fn verify_time_averages(
    signal_e0: f64,
    v_2w: f64,
    area: f64,
    omega: f64,
    n_periods: usize,
) -> Result<TimeAverageReport> {
    if n_periods < 1 {
        return Err(ParampError::ConfigError("n_periods must be >= 1".into()));
    }
    let analytic_power = averaged_pump_power(signal_e0, area, v_2w)?;
    let drive_period = std::f64::consts::PI / omega;
    let n = n_periods * NODES_PER_PERIOD;
    let dt = n_periods as f64 * drive_period / n as f64;
    let prefactor = 0.25 * EPSILON_0 * signal_e0 * signal_e0 * area * v_2w;

    let (mut power, mut cos2, mut density) = (0.0, 0.0, 0.0);
    for k in 0..n {
        let t = k as f64 * dt;
        let c2 = (2.0 * omega * t).cos();
        let c1 = (omega * t).cos();
        power += prefactor * (c2 + c2 * c2);
        cos2 += c2 * c2;
        density += 0.5 * EPSILON_0 * signal_e0 * signal_e0 * c1 * c1;
    }
    let nf = n as f64;
    let numeric_power = power / nf;
    let analytic_energy_density = mean_energy_density(signal_e0);
    Ok(TimeAverageReport {
        numeric_power,
        analytic_power,
        rel_diff: rel_diff(numeric_power, analytic_power),
        mean_cos2: cos2 / nf,
        numeric_energy_density: density / nf,
        analytic_energy_density,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquipartitionReport {
    pub mean_u_e: f64,
    pub mean_u_b: f64,
    /// `|⟨U_E⟩ − ⟨U_B⟩| / ⟨U_E⟩`.
    pub rel_diff: f64,
    /// Worst `|U(t) − U(0)| / U(0)` over the run.
    pub energy_drift: f64,
    pub cycles: usize,
}

pub const MIN_EQUIPARTITION_CYCLES: usize = 10;

/// Runs the undriven circuit from `cfg`'s seed and compares the
/// capacitor and inductor energies averaged over all complete cycles.
pub fn verify_equipartition(circuit: &LcCircuit, cfg: &SimConfig) -> Result<EquipartitionReport> {
    if cfg.n_cycles < MIN_EQUIPARTITION_CYCLES {
        return Err(ParampError::ConfigError(format!(
            "equipartition needs at least {MIN_EQUIPARTITION_CYCLES} cycles"
        )));
    }
    if cfg.initial_charge == 0.0 && cfg.initial_current == 0.0 {
        return Err(ParampError::ConfigError(
            "equipartition needs a nonzero seed".into(),
        ));
    }
    let trace = simulate(circuit, &PumpDrive::kinematic(0.0, 0.0)?, cfg)?;
    Ok(equipartition_of(&trace))
}

pub fn equipartition_of(trace: &Trace) -> EquipartitionReport {
    let per_cycle = cycle_averages(trace);
    let cycles = per_cycle.len();
    let mean_u_e = per_cycle.iter().map(|c| c.1).sum::<f64>() / cycles as f64;
    let mean_u_b = per_cycle.iter().map(|c| c.2).sum::<f64>() / cycles as f64;
    let u0 = trace.samples[0].stored_energy();
    let energy_drift = trace
        .samples
        .iter()
        .map(|s| (s.stored_energy() - u0).abs() / u0)
        .fold(0.0, f64::max);
    EquipartitionReport {
        mean_u_e,
        mean_u_b,
        rel_diff: (mean_u_e - mean_u_b).abs() / mean_u_e,
        energy_drift,
        cycles,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlateOscillation {
    /// Displacement amplitude at the requested frequency, m.
    pub amplitude: f64,
    /// Amplitude at twice that frequency, m.
    pub second_harmonic: f64,
    /// Root-mean-square fit residual, m.
    pub residual_rms: f64,
}

/// Separates plate motion into a quadratic drift plus harmonics at
/// `omega` and `2·omega` by linear least squares, and reports the harmonic
/// amplitudes. The free plate under a constant pressure component drifts
/// as `t²`, which the polynomial part absorbs.
pub fn extract_plate_oscillation(trace: &Trace, omega: f64) -> Result<PlateOscillation> {
    let n = trace.samples.len();
    if n < 8 {
        return Err(ParampError::DegenerateTrace);
    }
    let t_end = trace.samples[n - 1].state.time;
    let half = 0.5 * t_end;
    let basis = |t: f64| {
        let s = (t - half) / half;
        [
            1.0,
            s,
            s * s,
            (omega * t).cos(),
            (omega * t).sin(),
            (2.0 * omega * t).cos(),
            (2.0 * omega * t).sin(),
        ]
    };
    let a = DMatrix::from_fn(n, 7, |r, c| basis(trace.samples[r].state.time)[c]);
    let b = DVector::from_iterator(n, trace.samples.iter().map(|s| s.state.plate_x));
    let svd = a.clone().svd(true, true);
    let coef = svd
        .solve(&b, 1e-12)
        .map_err(|_| ParampError::DegenerateTrace)?;
    let resid = &a * &coef - &b;
    Ok(PlateOscillation {
        amplitude: coef[3].hypot(coef[4]),
        second_harmonic: coef[5].hypot(coef[6]),
        residual_rms: (resid.norm_squared() / n as f64).sqrt(),
    })
}
