//! Domain types shared by the formula, pump and simulation modules.
//!
//! All quantities are SI. Frequencies are angular (rad/s); conversion from
//! cyclic frequency happens at the CLI boundary. Positive plate displacement
//! widens the capacitor gap.

use serde::{Deserialize, Serialize};

use crate::error::{ParampError, Result};

/// Vacuum permittivity, F/m (CODATA 2018).
pub const EPSILON_0: f64 = 8.8541878128e-12;

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 2.99792458e8;

/// Relative tolerance for harmonic frequency matching between pump and cavity.
pub const FREQUENCY_MATCH_TOL: f64 = 1e-9;

/// Below this `E_dc / E_p` ratio the first-harmonic force approximation is
/// flagged as questionable.
pub const DC_BIAS_WARN_RATIO: f64 = 10.0;

/// Unit-carrying view of the two constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    pub epsilon0: f64,
    pub c: f64,
}

impl PhysicalConstants {
    pub const SI: PhysicalConstants = PhysicalConstants {
        epsilon0: EPSILON_0,
        c: SPEED_OF_LIGHT,
    };
}

pub(crate) fn require_positive(value: f64, name: &'static str) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ParampError::NonPositiveParameter(name))
    }
}

pub(crate) fn require_non_negative(value: f64, name: &'static str) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(ParampError::NonPositiveParameter(name))
    }
}

pub(crate) fn require_harmonic(
    what: &'static str,
    expected: f64,
    actual: f64,
) -> Result<()> {
    if ((actual - expected) / expected).abs() <= FREQUENCY_MATCH_TOL {
        Ok(())
    } else {
        Err(ParampError::FrequencyMismatch {
            what,
            expected,
            actual,
        })
    }
}

/// Signal cavity in its lumped LC picture: a movable plate of mass `mass`
/// at equilibrium gap `gap` over area `area`, resonant at `omega` with
/// quality factor `quality`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCavity")]
pub struct CavityParams {
    mass: f64,
    gap: f64,
    area: f64,
    omega: f64,
    quality: f64,
}

#[derive(Deserialize)]
struct RawCavity {
    mass: f64,
    gap: f64,
    area: f64,
    omega: f64,
    quality: f64,
}

impl TryFrom<RawCavity> for CavityParams {
    type Error = ParampError;

    fn try_from(raw: RawCavity) -> Result<Self> {
        CavityParams::new(raw.mass, raw.gap, raw.area, raw.omega, raw.quality)
    }
}

impl CavityParams {
    pub fn new(mass: f64, gap: f64, area: f64, omega: f64, quality: f64) -> Result<Self> {
        require_positive(mass, "mass")?;
        require_positive(gap, "gap_d0")?;
        require_positive(area, "area")?;
        require_positive(omega, "omega")?;
        require_positive(quality, "quality")?;
        if quality < 1.0 {
            return Err(ParampError::ConfigError(format!(
                "quality factor must be >= 1, got {quality}"
            )));
        }
        Ok(Self {
            mass,
            gap,
            area,
            omega,
            quality,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn quality(&self) -> f64 {
        self.quality
    }

    /// Equilibrium capacitor volume `A d0`.
    pub fn volume(&self) -> f64 {
        self.area * self.gap
    }

    /// Signal period `2π/ω`.
    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega
    }

    pub fn with_mass(self, mass: f64) -> Result<Self> {
        Self::new(mass, self.gap, self.area, self.omega, self.quality)
    }

    pub fn with_gap(self, gap: f64) -> Result<Self> {
        Self::new(self.mass, gap, self.area, self.omega, self.quality)
    }

    pub fn with_area(self, area: f64) -> Result<Self> {
        Self::new(self.mass, self.gap, area, self.omega, self.quality)
    }

    pub fn with_quality(self, quality: f64) -> Result<Self> {
        Self::new(self.mass, self.gap, self.area, self.omega, quality)
    }
}

/// Pump cavity resonance and quality factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPump")]
pub struct PumpCavityParams {
    omega_p: f64,
    quality_p: f64,
}

#[derive(Deserialize)]
struct RawPump {
    omega_p: f64,
    quality_p: f64,
}

impl TryFrom<RawPump> for PumpCavityParams {
    type Error = ParampError;

    fn try_from(raw: RawPump) -> Result<Self> {
        PumpCavityParams::new(raw.omega_p, raw.quality_p)
    }
}

impl PumpCavityParams {
    pub fn new(omega_p: f64, quality_p: f64) -> Result<Self> {
        require_positive(omega_p, "omega_p")?;
        require_positive(quality_p, "quality_p")?;
        Ok(Self { omega_p, quality_p })
    }

    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }

    pub fn quality_p(&self) -> f64 {
        self.quality_p
    }

    pub fn with_quality(self, quality_p: f64) -> Result<Self> {
        Self::new(self.omega_p, quality_p)
    }
}

/// How the plate is set in motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PumpDrive {
    /// Prescribed plate velocity `v_2w cos(2ωt + phase)`.
    KinematicVelocity { v_2w: f64, phase: f64 },
    /// Pump field `E_p sin(ω_p t)` at the signal frequency; the plate is a
    /// free mass pushed by the field pressure.
    NoBiasField { e_p: f64, omega_p: f64 },
    /// Pump field `E_dc − E_p sin(ω_p t)` at twice the signal frequency.
    DcBiasField { e_dc: f64, e_p: f64, omega_p: f64 },
}

impl PumpDrive {
    pub fn kinematic(v_2w: f64, phase: f64) -> Result<Self> {
        let drive = PumpDrive::KinematicVelocity { v_2w, phase };
        drive.check_amplitudes()?;
        Ok(drive)
    }

    pub fn no_bias(e_p: f64, omega_p: f64) -> Result<Self> {
        let drive = PumpDrive::NoBiasField { e_p, omega_p };
        drive.check_amplitudes()?;
        Ok(drive)
    }

    pub fn dc_bias(e_dc: f64, e_p: f64, omega_p: f64) -> Result<Self> {
        let drive = PumpDrive::DcBiasField { e_dc, e_p, omega_p };
        drive.check_amplitudes()?;
        Ok(drive)
    }

    fn check_amplitudes(&self) -> Result<()> {
        match *self {
            PumpDrive::KinematicVelocity { v_2w, phase } => {
                require_non_negative(v_2w, "v_2w")?;
                if !phase.is_finite() {
                    return Err(ParampError::ConfigError("drive phase must be finite".into()));
                }
            }
            PumpDrive::NoBiasField { e_p, omega_p } => {
                require_non_negative(e_p, "E_p")?;
                require_positive(omega_p, "omega_p")?;
            }
            PumpDrive::DcBiasField { e_dc, e_p, omega_p } => {
                require_non_negative(e_dc, "E_dc")?;
                require_non_negative(e_p, "E_p")?;
                require_positive(omega_p, "omega_p")?;
                if e_dc <= e_p {
                    return Err(ParampError::BiasRegimeViolation { e_dc, e_p });
                }
            }
        }
        Ok(())
    }

    /// Soft warning for a DC bias that is not much larger than the pump.
    pub fn validity_warning(&self) -> Option<String> {
        match *self {
            PumpDrive::DcBiasField { e_dc, e_p, .. } if e_p > 0.0 && e_dc / e_p < DC_BIAS_WARN_RATIO => {
                Some(format!(
                    "E_dc/E_p = {:.3} < {DC_BIAS_WARN_RATIO}: first-harmonic force approximation is marginal",
                    e_dc / e_p
                ))
            }
            _ => None,
        }
    }
}

/// Instantaneous state of circuit and plate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct LcState {
    pub charge: f64,
    pub current: f64,
    pub plate_x: f64,
    pub plate_v: f64,
    pub time: f64,
}

/// Output of [`validate`]: the inputs, untouched, plus any soft warning.
#[derive(Debug, Clone, PartialEq)]
pub struct Validated {
    pub cavity: CavityParams,
    pub drive: PumpDrive,
    pub warning: Option<String>,
}

/// Checks the drive against the cavity: amplitudes, and that a field drive
/// sits at the right harmonic (first for no bias, second for DC bias).
pub fn validate(cavity: CavityParams, drive: PumpDrive) -> Result<Validated> {
    // CavityParams can only exist in a valid state; the drive may have been
    // built as a bare enum literal.
    drive.check_amplitudes()?;
    match drive {
        PumpDrive::KinematicVelocity { .. } => {}
        PumpDrive::NoBiasField { omega_p, .. } => {
            require_harmonic("no-bias pump must run at the signal frequency", cavity.omega(), omega_p)?;
        }
        PumpDrive::DcBiasField { omega_p, .. } => {
            require_harmonic(
                "DC-bias pump must run at twice the signal frequency",
                2.0 * cavity.omega(),
                omega_p,
            )?;
        }
    }
    Ok(Validated {
        cavity,
        drive,
        warning: drive.validity_warning(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn desk() -> CavityParams {
        CavityParams::new(1e-6, 1e-3, 1e-4, TAU * 1e6, 1e3).unwrap()
    }

    #[test]
    fn valid_pair_passes_through() {
        let cav = desk();
        let drive = PumpDrive::kinematic(1.0, 0.0).unwrap();
        let v = validate(cav, drive).unwrap();
        assert_eq!(v.cavity, cav);
        assert_eq!(v.drive, drive);
        assert!(v.warning.is_none());
    }

    #[test]
    fn zero_gap_is_rejected_by_name() {
        let err = CavityParams::new(1e-6, 0.0, 1e-4, 1.0, 10.0).unwrap_err();
        assert_eq!(err, ParampError::NonPositiveParameter("gap_d0"));
    }

    #[test]
    fn nan_and_sub_unity_quality_rejected() {
        assert!(CavityParams::new(f64::NAN, 1.0, 1.0, 1.0, 10.0).is_err());
        assert!(matches!(
            CavityParams::new(1.0, 1.0, 1.0, 1.0, 0.5),
            Err(ParampError::ConfigError(_))
        ));
    }

    #[test]
    fn dc_bias_at_first_harmonic_is_mismatch() {
        let cav = desk();
        let drive = PumpDrive::dc_bias(1e6, 1e4, cav.omega()).unwrap();
        assert!(matches!(
            validate(cav, drive),
            Err(ParampError::FrequencyMismatch { .. })
        ));
        let ok = PumpDrive::dc_bias(1e6, 1e4, 2.0 * cav.omega()).unwrap();
        assert!(validate(cav, ok).is_ok());
    }

    #[test]
    fn no_bias_needs_first_harmonic() {
        let cav = desk();
        let bad = PumpDrive::no_bias(1e4, 2.0 * cav.omega()).unwrap();
        assert!(validate(cav, bad).is_err());
        let ok = PumpDrive::no_bias(1e4, cav.omega() * (1.0 + 1e-12)).unwrap();
        assert!(validate(cav, ok).is_ok());
    }

    #[test]
    fn dc_bias_regime_guard() {
        assert!(matches!(
            PumpDrive::dc_bias(1e4, 1e4, 1.0),
            Err(ParampError::BiasRegimeViolation { .. })
        ));
        let weak = PumpDrive::dc_bias(5e4, 1e4, 1.0).unwrap();
        assert!(weak.validity_warning().is_some());
        let strong = PumpDrive::dc_bias(1e6, 1e4, 1.0).unwrap();
        assert!(strong.validity_warning().is_none());
    }

    #[test]
    fn literal_enum_values_are_still_checked() {
        let cav = desk();
        let drive = PumpDrive::KinematicVelocity { v_2w: -1.0, phase: 0.0 };
        assert_eq!(
            validate(cav, drive).unwrap_err(),
            ParampError::NonPositiveParameter("v_2w")
        );
    }

    #[test]
    fn raw_cavity_conversion_validates() {
        let raw = RawCavity {
            mass: 1.0,
            gap: -1.0,
            area: 1.0,
            omega: 1.0,
            quality: 2.0,
        };
        assert!(CavityParams::try_from(raw).is_err());
    }
}
