//! Plate response to a pump field in the neighbouring cavity, and the
//! threshold chain for the DC-biased pump.
//!
//! The plate is a free mass: no membrane stiffness, no mechanical resonance.
//! Amplitudes carry the plate area explicitly, so `x_p` is a length.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{ParampError, Result};
use crate::model::{
    require_harmonic, require_non_negative, require_positive, CavityParams, PumpCavityParams,
    PumpDrive, EPSILON_0, SPEED_OF_LIGHT,
};
use crate::thresholds::stored_energy_to_power;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriveResponse {
    /// Displacement amplitude, m.
    pub x_p: f64,
    /// Velocity amplitude, m/s.
    pub v_p: f64,
    /// Angular frequency of the plate motion, rad/s.
    pub drive_omega: f64,
    pub validity_warning: Option<String>,
}

/// Unbiased pump `E_p sin ω_p t`. Only the `2ω_p` part of the pressure is
/// kept, so the plate oscillates at twice the pump frequency:
/// `x_p = ε₀E_p²A / (16 m ω_p²)`, `v_p = 2ω_p x_p`.
pub fn no_bias_response(e_p: f64, omega_p: f64, mass: f64, area: f64) -> Result<DriveResponse> {
    require_non_negative(e_p, "E_p")?;
    require_positive(omega_p, "omega_p")?;
    require_positive(mass, "mass")?;
    require_positive(area, "area")?;
    let x_p = EPSILON_0 * e_p * e_p * area / (16.0 * mass * omega_p * omega_p);
    let drive_omega = 2.0 * omega_p;
    Ok(DriveResponse {
        x_p,
        v_p: drive_omega * x_p,
        drive_omega,
        validity_warning: None,
    })
}

/// Biased pump `E_dc − E_p sin ω_p t`, keeping only the cross term
/// `ε₀E_dcE_p` of the pressure: motion at `ω_p` with
/// `x_p = ε₀E_dcE_pA / (m ω_p²)`.
pub fn dc_bias_response(
    e_dc: f64,
    e_p: f64,
    omega_p: f64,
    mass: f64,
    area: f64,
) -> Result<DriveResponse> {
    let drive = PumpDrive::dc_bias(e_dc, e_p, omega_p)?;
    require_positive(mass, "mass")?;
    require_positive(area, "area")?;
    let x_p = EPSILON_0 * e_dc * e_p * area / (mass * omega_p * omega_p);
    Ok(DriveResponse {
        x_p,
        v_p: omega_p * x_p,
        drive_omega: omega_p,
        validity_warning: drive.validity_warning(),
    })
}

/// Response for any field drive; `None` for the kinematic mode, where the
/// plate motion is prescribed.
pub fn field_response(drive: &PumpDrive, mass: f64, area: f64) -> Result<Option<DriveResponse>> {
    match *drive {
        PumpDrive::KinematicVelocity { .. } => Ok(None),
        PumpDrive::NoBiasField { e_p, omega_p } => {
            no_bias_response(e_p, omega_p, mass, area).map(Some)
        }
        PumpDrive::DcBiasField { e_dc, e_p, omega_p } => {
            dc_bias_response(e_dc, e_p, omega_p, mass, area).map(Some)
        }
    }
}

fn require_second_harmonic(cavity: &CavityParams, omega_p: f64) -> Result<()> {
    require_harmonic(
        "DC-bias pump must run at twice the signal frequency",
        2.0 * cavity.omega(),
        omega_p,
    )
}

/// Pump amplitude that puts the biased plate velocity exactly at threshold,
/// `v_p = 2 d0 ω_p / Q_s`: `E_p = 2 m ω_p² d0 / (ε₀ E_dc A Q_s)`.
pub fn dc_bias_threshold_field(cavity: &CavityParams, e_dc: f64, omega_p: f64) -> Result<f64> {
    require_positive(e_dc, "E_dc")?;
    require_positive(omega_p, "omega_p")?;
    require_second_harmonic(cavity, omega_p)?;
    Ok(2.0 * cavity.mass() * omega_p * omega_p * cavity.gap()
        / (EPSILON_0 * e_dc * cavity.area() * cavity.quality()))
}

/// Threshold pump power with DC bias,
/// `m² ω_p⁵ d0³ / (ε₀ E_dc² A Q_s² Q_p)`.
pub fn dc_bias_threshold_power(
    cavity: &CavityParams,
    pump: &PumpCavityParams,
    e_dc: f64,
) -> Result<f64> {
    require_positive(e_dc, "E_dc")?;
    require_second_harmonic(cavity, pump.omega_p())?;
    let m = cavity.mass();
    let wp = pump.omega_p();
    let d0 = cavity.gap();
    let qs = cavity.quality();
    Ok(m * m * wp.powi(5) * d0.powi(3)
        / (EPSILON_0 * e_dc * e_dc * cavity.area() * qs * qs * pump.quality_p()))
}

/// Pump-cavity stored energy at the biased threshold as it enters the
/// power balance: `½ · (½ε₀E_p,th²) · A d0`.
pub fn dc_bias_threshold_stored_energy(cavity: &CavityParams, e_dc: f64, omega_p: f64) -> Result<f64> {
    let e_th = dc_bias_threshold_field(cavity, e_dc, omega_p)?;
    Ok(0.5 * (0.5 * EPSILON_0 * e_th * e_th) * cavity.volume())
}

/// The same threshold power reached through the threshold field and the
/// stored-energy balance rather than the closed form.
pub fn dc_bias_threshold_power_via_energy(
    cavity: &CavityParams,
    pump: &PumpCavityParams,
    e_dc: f64,
) -> Result<f64> {
    let stored = dc_bias_threshold_stored_energy(cavity, e_dc, pump.omega_p())?;
    stored_energy_to_power(stored, pump)
}

/// Closed form with a half-wavelength pump gap `d0 = πc/ω_p` and
/// `Q_s = Q_p = Q`: `π³ m² ω_p² c³ / (ε₀ E_dc² A Q³)`.
pub fn dc_bias_threshold_power_half_wave(
    mass: f64,
    omega_p: f64,
    e_dc: f64,
    area: f64,
    quality: f64,
) -> Result<f64> {
    require_positive(mass, "mass")?;
    require_positive(omega_p, "omega_p")?;
    require_positive(e_dc, "E_dc")?;
    require_positive(area, "area")?;
    require_positive(quality, "quality")?;
    let c = SPEED_OF_LIGHT;
    Ok(PI.powi(3) * mass * mass * omega_p * omega_p * c * c * c
        / (EPSILON_0 * e_dc * e_dc * area * quality.powi(3)))
}

/// Half-wavelength gap `πc/ω_p` for a pump at `ω_p`.
pub fn half_wave_gap(omega_p: f64) -> f64 {
    PI * SPEED_OF_LIGHT / omega_p
}

/// Ratio of the biased to unbiased threshold powers,
/// `(π²/32) m c² / (ε₀ E_dc² V0)`. Rest energy of the plate over the DC
/// field energy, up to the prefactor.
pub fn dc_bias_power_ratio(mass: f64, e_dc: f64, volume: f64) -> Result<f64> {
    require_positive(mass, "mass")?;
    require_positive(e_dc, "E_dc")?;
    require_positive(volume, "volume")?;
    let c = SPEED_OF_LIGHT;
    Ok(PI * PI / 32.0 * mass * c * c / (EPSILON_0 * e_dc * e_dc * volume))
}

/// Builds up the plate charge from zero in `n_steps` equal increments,
/// accumulating `dF = E dQ` with `E = Q/(ε₀A)` by the trapezoid rule.
pub fn charge_integrated_force(e_final: f64, area: f64, n_steps: usize) -> Result<f64> {
    if n_steps < 2 {
        return Err(ParampError::ConfigError(format!(
            "charge integration needs at least 2 steps, got {n_steps}"
        )));
    }
    require_positive(area, "area")?;
    let q_final = EPSILON_0 * area * e_final;
    let dq = q_final / n_steps as f64;
    let field = |q: f64| q / (EPSILON_0 * area);
    let mut force = 0.0;
    for k in 0..n_steps {
        let q0 = k as f64 * dq;
        let q1 = (k + 1) as f64 * dq;
        force += 0.5 * (field(q0) + field(q1)) * dq;
    }
    Ok(force)
}

/// Plate pressure from [`charge_integrated_force`] on a unit area. An
/// independent route to `½ε₀E²`.
pub fn pressure_via_charge_integration(e_final: f64, n_steps: usize) -> Result<f64> {
    const AREA: f64 = 1.0;
    Ok(charge_integrated_force(e_final, AREA, n_steps)? / AREA)
}
