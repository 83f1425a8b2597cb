//! Closed-form energy-balance results for the moving-plate oscillator.
//!
//! Every function here is pure and cheap. Inputs that carry a sign
//! constraint are checked and reported as [`crate::ParampError::NonPositiveParameter`].

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::Result;
use crate::model::{
    require_non_negative, require_positive, CavityParams, PumpCavityParams, EPSILON_0,
};

/// Electric energy density `½ε₀E²`, J/m³.
pub fn energy_density(e: f64) -> f64 {
    0.5 * EPSILON_0 * e * e
}

/// Pressure on a conducting plate bounding a field `E`, Pa. Numerically the
/// same as the energy density.
pub fn pressure_on_plate(e: f64) -> f64 {
    energy_density(e)
}

/// Maxwell stress tensor `T_ij = ε₀[E_iE_j + c²B_iB_j − ½δ_ij(E·E + c²B·B)]`.
pub fn maxwell_stress(e: [f64; 3], b: [f64; 3]) -> [[f64; 3]; 3] {
    let c2 = crate::model::SPEED_OF_LIGHT * crate::model::SPEED_OF_LIGHT;
    let e2: f64 = e.iter().map(|v| v * v).sum();
    let b2: f64 = b.iter().map(|v| v * v).sum();
    let iso = 0.5 * (e2 + c2 * b2);
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let diag = if i == j { iso } else { 0.0 };
            t[i][j] = EPSILON_0 * (e[i] * e[j] + c2 * (b[i] * b[j]) - diag);
        }
    }
    t
}

/// Time-averaged power fed into the signal field by a plate moving as
/// `v_2w cos 2ωt` against a field `signal_e0 cos ωt`: `⅛ε₀E₀²·A·v_2w`.
pub fn averaged_pump_power(signal_e0: f64, area: f64, v_2w: f64) -> Result<f64> {
    require_non_negative(signal_e0.abs(), "signal_E0")?;
    require_non_negative(area, "area")?;
    require_non_negative(v_2w, "v_2w")?;
    Ok(0.125 * EPSILON_0 * signal_e0 * signal_e0 * area * v_2w)
}

/// Time-averaged capacitor energy density for a field `E₀ cos ωt`.
pub fn mean_energy_density(signal_e0: f64) -> f64 {
    0.25 * EPSILON_0 * signal_e0 * signal_e0
}

/// Energy gain rate `κ = v_2w / (4 d0)`, 1/s.
pub fn gain_coefficient(v_2w: f64, gap: f64) -> Result<f64> {
    require_positive(gap, "gap_d0")?;
    require_non_negative(v_2w, "v_2w")?;
    Ok(0.25 * v_2w / gap)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RingDown {
    /// Energy loss rate `ω/Q`, 1/s.
    pub gamma: f64,
    /// `Q/ω`, s.
    pub tau: f64,
}

pub fn ring_down(omega: f64, quality: f64) -> Result<RingDown> {
    require_positive(omega, "omega")?;
    require_positive(quality, "quality")?;
    Ok(RingDown {
        gamma: omega / quality,
        tau: quality / omega,
    })
}

/// Drive velocity amplitude at which gain equals loss: `4ωd0/Q`.
pub fn threshold_velocity(omega: f64, gap: f64, quality: f64) -> Result<f64> {
    require_positive(omega, "omega")?;
    require_positive(gap, "gap_d0")?;
    require_positive(quality, "quality")?;
    Ok(4.0 * omega * gap / quality)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdEnergy {
    /// Time-averaged plate kinetic energy at threshold, J.
    pub kinetic: f64,
    /// Kinetic plus potential, always twice the kinetic term, J.
    pub total: f64,
}

pub fn threshold_energy(cavity: &CavityParams) -> ThresholdEnergy {
    let v = 4.0 * cavity.omega() * cavity.gap() / cavity.quality();
    let kinetic = 0.25 * cavity.mass() * v * v;
    ThresholdEnergy {
        kinetic,
        total: 2.0 * kinetic,
    }
}

/// Radiation-pressure Fabry-Perot threshold `½ m ω_s² L² / (Q_i Q_s)`.
pub fn braginsky_threshold(
    mass: f64,
    omega_s: f64,
    length: f64,
    quality_i: f64,
    quality_s: f64,
) -> Result<f64> {
    require_positive(mass, "mass")?;
    require_positive(omega_s, "omega_s")?;
    require_non_negative(length, "length")?;
    require_positive(quality_i, "quality_i")?;
    require_positive(quality_s, "quality_s")?;
    Ok(0.5 * mass * omega_s * omega_s * length * length / (quality_i * quality_s))
}

/// Threshold mirror speed over `c` in the squeezing-literature form, `1/Q`.
pub fn walls_milburn_velocity_ratio(quality: f64) -> Result<f64> {
    require_positive(quality, "quality")?;
    Ok(1.0 / quality)
}

/// Peak velocity `εω` of a mirror oscillating with displacement amplitude `ε`.
pub fn mirror_velocity(displacement: f64, omega: f64) -> f64 {
    displacement * omega
}

/// Order-of-magnitude threshold `v/c ≈ 2π/Q`, taking `d0 ω ≈ 2πc`.
///
/// The exact form with the same geometry is `8π/Q`; see
/// [`exact_velocity_ratio_wavelength_gap`].
pub fn rough_velocity_ratio(quality: f64) -> Result<f64> {
    require_positive(quality, "quality")?;
    Ok(TAU / quality)
}

/// `threshold_velocity / c` evaluated with a one-wavelength gap (`d0 ω = 2πc`).
pub fn exact_velocity_ratio_wavelength_gap(quality: f64) -> Result<f64> {
    require_positive(quality, "quality")?;
    Ok(4.0 * TAU / quality)
}

/// Steady-state input power that balances a stored energy `U` in the pump
/// cavity: `ω_p U / Q_p`.
pub fn stored_energy_to_power(energy: f64, pump: &PumpCavityParams) -> Result<f64> {
    require_non_negative(energy, "stored_energy")?;
    Ok(pump.omega_p() * energy / pump.quality_p())
}

/// Pump power needed at threshold when the pump runs at the signal
/// frequency with no bias: `8 m ω_p ω_s² d0² / (Q_s² Q_p)`.
pub fn threshold_power_no_bias(cavity: &CavityParams, pump: &PumpCavityParams) -> f64 {
    let ws = cavity.omega();
    let d0 = cavity.gap();
    let qs = cavity.quality();
    8.0 * cavity.mass() * pump.omega_p() * ws * ws * d0 * d0 / (qs * qs * pump.quality_p())
}

/// Every analytic threshold quantity for one design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub kappa_at_threshold: f64,
    pub gamma: f64,
    pub tau: f64,
    pub v_threshold: f64,
    pub k_threshold: f64,
    pub u_threshold: f64,
    pub p_threshold_no_bias: f64,
    pub braginsky_u: f64,
    pub walls_milburn_vc: f64,
    pub rough_vc: f64,
}

impl ThresholdReport {
    pub fn compute(cavity: &CavityParams, pump: &PumpCavityParams) -> Result<Self> {
        let v_threshold = threshold_velocity(cavity.omega(), cavity.gap(), cavity.quality())?;
        let rd = ring_down(cavity.omega(), cavity.quality())?;
        let energy = threshold_energy(cavity);
        let report = ThresholdReport {
            kappa_at_threshold: gain_coefficient(v_threshold, cavity.gap())?,
            gamma: rd.gamma,
            tau: rd.tau,
            v_threshold,
            k_threshold: energy.kinetic,
            u_threshold: energy.total,
            p_threshold_no_bias: threshold_power_no_bias(cavity, pump),
            braginsky_u: braginsky_threshold(
                cavity.mass(),
                cavity.omega(),
                4.0 * cavity.gap(),
                cavity.quality(),
                cavity.quality(),
            )?,
            walls_milburn_vc: walls_milburn_velocity_ratio(cavity.quality())?,
            rough_vc: rough_velocity_ratio(cavity.quality())?,
        };
        debug_assert!(report.u_threshold == 2.0 * report.k_threshold);
        Ok(report)
    }
}
