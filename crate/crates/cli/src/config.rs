//! JSON design files. All quantities are SI; every frequency is given as
//! exactly one of `omega_rad_per_s` or `f_Hz` and stored as ω.

use std::f64::consts::TAU;
use std::path::Path;

use paramp_core::dynamics::{build_circuit, LcCircuit, SimConfig, DEFAULT_STEPS_PER_CYCLE};
use paramp_core::{validate, CavityParams, PumpCavityParams, PumpDrive};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawCavity {
    mass_kg: f64,
    gap_m: f64,
    area_m2: f64,
    omega_rad_per_s: Option<f64>,
    f_Hz: Option<f64>,
    Q: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawPump {
    omega_rad_per_s: Option<f64>,
    f_Hz: Option<f64>,
    Q: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
#[allow(non_snake_case)]
enum RawDrive {
    Kinematic {
        v_2w_m_per_s: f64,
        #[serde(default)]
        phase_rad: f64,
    },
    NoBias {
        E_p_V_per_m: f64,
        omega_rad_per_s: Option<f64>,
        f_Hz: Option<f64>,
    },
    DcBias {
        E_dc_V_per_m: f64,
        E_p_V_per_m: f64,
        omega_rad_per_s: Option<f64>,
        f_Hz: Option<f64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawSim {
    n_cycles: usize,
    steps_per_cycle: Option<usize>,
    q0_C: Option<f64>,
    seed_voltage_V: Option<f64>,
    i0_A: Option<f64>,
    x0_m: Option<f64>,
    v0_m_per_s: Option<f64>,
    drive_phase_rad: Option<f64>,
    record_stride: Option<usize>,
    #[serde(default)]
    lossless: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisScale {
    Linear,
    Log,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis: String,
    min: f64,
    max: f64,
    points: usize,
    #[serde(default = "default_scale")]
    scale: AxisScale,
}

fn default_scale() -> AxisScale {
    AxisScale::Linear
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDesign {
    cavity: RawCavity,
    pump: RawPump,
    drive: RawDrive,
    sim: Option<RawSim>,
    sweep: Option<RawSweep>,
}

/// How the initial charge is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Seed {
    Charge(f64),
    Voltage(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSpec {
    pub n_cycles: usize,
    pub steps_per_cycle: usize,
    pub seed: Seed,
    pub initial_current: f64,
    /// Initial plate displacement and velocity; field drives only.
    pub initial_plate: (f64, f64),
    pub drive_phase: Option<f64>,
    pub record_stride: usize,
    pub lossless: bool,
}

impl SimSpec {
    pub fn to_config(&self, circuit: &LcCircuit) -> SimConfig {
        let base = match self.seed {
            Seed::Charge(q) => SimConfig::new(self.n_cycles, q),
            Seed::Voltage(v) => SimConfig::with_seed_voltage(self.n_cycles, circuit, v),
        };
        let cfg = base
            .steps_per_cycle(self.steps_per_cycle)
            .record_stride(self.record_stride)
            .initial_current(self.initial_current)
            .initial_plate(self.initial_plate.0, self.initial_plate.1);
        match self.drive_phase {
            Some(p) => cfg.drive_phase(p),
            None => cfg,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Signal and pump Q together.
    Q,
    QSignal,
    QPump,
    Mass,
    Gap,
    Area,
    EDc,
}

impl SweepAxis {
    pub fn parse(name: &str) -> CliResult<Self> {
        Ok(match name {
            "Q" => SweepAxis::Q,
            "Q_s" => SweepAxis::QSignal,
            "Q_p" => SweepAxis::QPump,
            "mass_kg" => SweepAxis::Mass,
            "gap_m" => SweepAxis::Gap,
            "area_m2" => SweepAxis::Area,
            "E_dc" | "E_dc_V_per_m" => SweepAxis::EDc,
            other => {
                return Err(CliError::Validation(format!(
                    "unknown sweep axis `{other}` (expected Q, Q_s, Q_p, mass_kg, gap_m, area_m2 or E_dc)"
                )))
            }
        })
    }

    /// Column header for the swept value.
    pub fn column(&self) -> &'static str {
        match self {
            SweepAxis::Q => "Q",
            SweepAxis::QSignal => "Q_s",
            SweepAxis::QPump => "Q_p",
            SweepAxis::Mass => "mass_kg",
            SweepAxis::Gap => "gap_m",
            SweepAxis::Area => "area_m2",
            SweepAxis::EDc => "E_dc_V_per_m",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub scale: AxisScale,
}

impl SweepSpec {
    pub fn new(axis: SweepAxis, min: f64, max: f64, points: usize, scale: AxisScale) -> CliResult<Self> {
        let bad = |msg: String| Err(CliError::Validation(msg));
        if points < 2 {
            return bad(format!("sweep.points must be >= 2, got {points}"));
        }
        if !(min.is_finite() && max.is_finite()) || min > max {
            return bad(format!("sweep range must satisfy min <= max, got [{min}, {max}]"));
        }
        if scale == AxisScale::Log && min <= 0.0 {
            return bad(format!("log sweep needs min > 0, got {min}"));
        }
        Ok(Self {
            axis,
            min,
            max,
            points,
            scale,
        })
    }

    /// Grid values in ascending order, endpoints exact.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|k| {
                if k == 0 {
                    return self.min;
                }
                if k == n - 1 {
                    return self.max;
                }
                let s = k as f64 / (n - 1) as f64;
                match self.scale {
                    AxisScale::Linear => self.min + s * (self.max - self.min),
                    AxisScale::Log => (self.min.ln() + s * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignConfig {
    pub cavity: CavityParams,
    pub pump: PumpCavityParams,
    pub drive: PumpDrive,
    pub sim: Option<SimSpec>,
    pub sweep: Option<SweepSpec>,
    pub warnings: Vec<String>,
}

fn invalid(msg: String) -> CliError {
    CliError::Validation(msg)
}

fn positive(field: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(invalid(format!("{field} must be positive and finite, got {v}")))
    }
}

fn non_negative(field: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(invalid(format!("{field} must be non-negative and finite, got {v}")))
    }
}

fn angular(section: &str, omega: Option<f64>, f: Option<f64>) -> CliResult<Option<f64>> {
    match (omega, f) {
        (Some(_), Some(_)) => Err(invalid(format!(
            "{section}: give exactly one of omega_rad_per_s and f_Hz"
        ))),
        (Some(w), None) => positive(&format!("{section}.omega_rad_per_s"), w).map(Some),
        (None, Some(f)) => positive(&format!("{section}.f_Hz"), f).map(|f| Some(TAU * f)),
        (None, None) => Ok(None),
    }
}

fn required_angular(section: &str, omega: Option<f64>, f: Option<f64>) -> CliResult<f64> {
    angular(section, omega, f)?.ok_or_else(|| {
        invalid(format!("{section}: one of omega_rad_per_s or f_Hz is required"))
    })
}

fn quality(field: &str, q: f64) -> CliResult<f64> {
    positive(field, q)?;
    if q < 1.0 {
        return Err(invalid(format!("{field} must be >= 1, got {q}")));
    }
    Ok(q)
}

impl DesignConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let raw: RawDesign =
            serde_json::from_str(text).map_err(|e| invalid(format!("malformed config: {e}")))?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawDesign) -> CliResult<Self> {
        let c = raw.cavity;
        let omega = required_angular("cavity", c.omega_rad_per_s, c.f_Hz)?;
        let cavity = CavityParams::new(
            positive("cavity.mass_kg", c.mass_kg)?,
            positive("cavity.gap_m", c.gap_m)?,
            positive("cavity.area_m2", c.area_m2)?,
            omega,
            quality("cavity.Q", c.Q)?,
        )?;

        let omega_pump = required_angular("pump", raw.pump.omega_rad_per_s, raw.pump.f_Hz)?;
        let pump = PumpCavityParams::new(omega_pump, quality("pump.Q", raw.pump.Q)?)?;

        let drive = match raw.drive {
            RawDrive::Kinematic {
                v_2w_m_per_s,
                phase_rad,
            } => {
                non_negative("drive.v_2w_m_per_s", v_2w_m_per_s)?;
                if !phase_rad.is_finite() {
                    return Err(invalid("drive.phase_rad must be finite".into()));
                }
                PumpDrive::kinematic(v_2w_m_per_s, phase_rad)?
            }
            RawDrive::NoBias {
                E_p_V_per_m,
                omega_rad_per_s,
                f_Hz,
            } => {
                let wp = angular("drive", omega_rad_per_s, f_Hz)?.unwrap_or(omega_pump);
                PumpDrive::no_bias(non_negative("drive.E_p_V_per_m", E_p_V_per_m)?, wp)?
            }
            RawDrive::DcBias {
                E_dc_V_per_m,
                E_p_V_per_m,
                omega_rad_per_s,
                f_Hz,
            } => {
                let wp = angular("drive", omega_rad_per_s, f_Hz)?.unwrap_or(omega_pump);
                PumpDrive::dc_bias(
                    positive("drive.E_dc_V_per_m", E_dc_V_per_m)?,
                    non_negative("drive.E_p_V_per_m", E_p_V_per_m)?,
                    wp,
                )?
            }
        };
        let checked = validate(cavity, drive)?;
        check_pump_frequency(&cavity, &pump, &drive)?;

        let sim = raw.sim.map(sim_spec).transpose()?;
        let sweep = raw
            .sweep
            .map(|s| SweepSpec::new(SweepAxis::parse(&s.axis)?, s.min, s.max, s.points, s.scale))
            .transpose()?;
        if let Some(s) = &sweep {
            check_axis_applies(s.axis, &drive)?;
        }

        Ok(DesignConfig {
            cavity,
            pump,
            drive,
            sim,
            sweep,
            warnings: checked.warning.into_iter().collect(),
        })
    }

    /// Signal circuit, lossless if the sim section asks for it.
    pub fn circuit(&self) -> LcCircuit {
        build_circuit(self.cavity, self.sim.is_some_and(|s| s.lossless))
    }

    pub fn require_sim(&self) -> CliResult<SimSpec> {
        self.sim
            .ok_or_else(|| invalid("this command needs a `sim` section in the config".into()))
    }
}

/// The pump cavity resonates where the pump field lives: at the signal
/// frequency without bias, at twice it with DC bias.
fn check_pump_frequency(cavity: &CavityParams, pump: &PumpCavityParams, drive: &PumpDrive) -> CliResult<()> {
    let (expected, what) = match drive {
        PumpDrive::DcBiasField { omega_p, .. } => (*omega_p, "the DC-bias drive frequency"),
        _ => (cavity.omega(), "the signal frequency"),
    };
    if ((pump.omega_p() - expected) / expected).abs() > paramp_core::model::FREQUENCY_MATCH_TOL {
        return Err(invalid(format!(
            "pump frequency {:.9e} rad/s must equal {what} ({expected:.9e} rad/s)",
            pump.omega_p()
        )));
    }
    Ok(())
}

pub(crate) fn check_axis_applies(axis: SweepAxis, drive: &PumpDrive) -> CliResult<()> {
    if axis == SweepAxis::EDc && !matches!(drive, PumpDrive::DcBiasField { .. }) {
        return Err(invalid("sweep axis E_dc needs a dc_bias drive".into()));
    }
    Ok(())
}

fn sim_spec(raw: RawSim) -> CliResult<SimSpec> {
    let seed = match (raw.q0_C, raw.seed_voltage_V) {
        (Some(_), Some(_)) => {
            return Err(invalid("sim: give at most one of q0_C and seed_voltage_V".into()))
        }
        (Some(q), None) if q.is_finite() => Seed::Charge(q),
        (None, Some(v)) if v.is_finite() => Seed::Voltage(v),
        (None, None) => Seed::Charge(0.0),
        _ => return Err(invalid("sim: initial charge must be finite".into())),
    };
    let finite = |field: &str, v: Option<f64>| -> CliResult<f64> {
        let v = v.unwrap_or(0.0);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(invalid(format!("sim.{field} must be finite")))
        }
    };
    let initial_current = finite("i0_A", raw.i0_A)?;
    let initial_plate = (finite("x0_m", raw.x0_m)?, finite("v0_m_per_s", raw.v0_m_per_s)?);
    if let Some(p) = raw.drive_phase_rad {
        if !p.is_finite() {
            return Err(invalid("sim.drive_phase_rad must be finite".into()));
        }
    }
    let spec = SimSpec {
        n_cycles: raw.n_cycles,
        steps_per_cycle: raw.steps_per_cycle.unwrap_or(DEFAULT_STEPS_PER_CYCLE),
        seed,
        initial_current,
        initial_plate,
        drive_phase: raw.drive_phase_rad,
        record_stride: raw.record_stride.unwrap_or(1),
        lossless: raw.lossless,
    };
    // SimConfig::validate does not depend on the seed scale, so any
    // circuit-free charge works for the check.
    SimConfig::new(spec.n_cycles, 0.0)
        .steps_per_cycle(spec.steps_per_cycle)
        .record_stride(spec.record_stride)
        .validate()
        .map_err(|e| invalid(format!("sim: {e}")))?;
    Ok(spec)
}
