//! Fixed-step RK4 integration of the LC circuit with a moving plate.
//!
//! State is `[q, i, x, v, W_in, Q_diss]`. The work and dissipation ledgers
//! are integrated alongside the circuit so their discretisation error
//! matches that of the stored energy.

use serde::Serialize;

use super::circuit::LcCircuit;
use crate::error::{ParampError, Result};
use crate::model::{validate, LcState, PumpDrive, EPSILON_0};
use crate::thresholds::pressure_on_plate;

pub const DEFAULT_STEPS_PER_CYCLE: usize = 500;
pub const MIN_STEPS_PER_CYCLE: usize = 100;

/// Hard limit on kinematic modulation depth `x_p/d0`.
pub const MAX_MODULATION_DEPTH: f64 = 0.5;
/// Above this depth the first-order analysis is flagged.
pub const WARN_MODULATION_DEPTH: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub steps_per_cycle: usize,
    pub n_cycles: usize,
    pub initial_charge: f64,
    pub initial_current: f64,
    /// Initial plate displacement and velocity for force-driven plates. A
    /// kinematic drive fixes the plate trajectory, so these must be zero
    /// there.
    pub initial_plate_x: f64,
    pub initial_plate_v: f64,
    /// Phase used when this config seeds kinematic drives of its own
    /// (threshold search). A supplied [`PumpDrive`] carries its own phase.
    pub drive_phase: f64,
    pub record_stride: usize,
}

impl SimConfig {
    pub fn new(n_cycles: usize, initial_charge: f64) -> Self {
        SimConfig {
            steps_per_cycle: DEFAULT_STEPS_PER_CYCLE,
            n_cycles,
            initial_charge,
            initial_current: 0.0,
            initial_plate_x: 0.0,
            initial_plate_v: 0.0,
            drive_phase: 0.0,
            record_stride: 1,
        }
    }

    /// Seeds the capacitor with `voltage` across the equilibrium gap.
    pub fn with_seed_voltage(n_cycles: usize, circuit: &LcCircuit, voltage: f64) -> Self {
        Self::new(n_cycles, circuit.charge_for_voltage(voltage))
    }

    pub fn steps_per_cycle(mut self, steps: usize) -> Self {
        self.steps_per_cycle = steps;
        self
    }

    pub fn record_stride(mut self, stride: usize) -> Self {
        self.record_stride = stride;
        self
    }

    pub fn drive_phase(mut self, phase: f64) -> Self {
        self.drive_phase = phase;
        self
    }

    pub fn initial_current(mut self, current: f64) -> Self {
        self.initial_current = current;
        self
    }

    pub fn initial_plate(mut self, x: f64, v: f64) -> Self {
        self.initial_plate_x = x;
        self.initial_plate_v = v;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps_per_cycle < MIN_STEPS_PER_CYCLE {
            return Err(ParampError::ConfigError(format!(
                "steps_per_cycle must be >= {MIN_STEPS_PER_CYCLE}, got {}",
                self.steps_per_cycle
            )));
        }
        if self.n_cycles < 1 {
            return Err(ParampError::ConfigError("n_cycles must be >= 1".into()));
        }
        if self.record_stride < 1 {
            return Err(ParampError::ConfigError("record_stride must be >= 1".into()));
        }
        if !(self.initial_charge.is_finite()
            && self.initial_current.is_finite()
            && self.initial_plate_x.is_finite()
            && self.initial_plate_v.is_finite()
            && self.drive_phase.is_finite())
        {
            return Err(ParampError::ConfigError(
                "initial conditions and phase must be finite".into(),
            ));
        }
        Ok(())
    }

    pub fn total_steps(&self) -> usize {
        self.steps_per_cycle * self.n_cycles
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub state: LcState,
    /// Capacitor energy, J.
    pub u_e: f64,
    /// Inductor energy, J.
    pub u_b: f64,
    /// Cumulative work done on the field by the moving plate, J.
    pub w_in: f64,
    /// Cumulative resistive loss, J.
    pub q_diss: f64,
}

impl Sample {
    pub fn stored_energy(&self) -> f64 {
        self.u_e + self.u_b
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceMeta {
    pub circuit: LcCircuit,
    pub drive: PumpDrive,
    pub config: SimConfig,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    pub samples: Vec<Sample>,
    /// Integration step, s.
    pub dt: f64,
    pub meta: TraceMeta,
}

impl Trace {
    /// Index of the integration step a sample was recorded at.
    pub fn step_of(&self, sample_index: usize) -> usize {
        sample_index * self.meta.config.record_stride
    }

    /// Signal cycle a sample falls into; the final endpoint sample belongs
    /// to the (empty) cycle `n_cycles`.
    pub fn cycle_of(&self, sample_index: usize) -> usize {
        self.step_of(sample_index) / self.meta.config.steps_per_cycle
    }

    pub fn period(&self) -> f64 {
        self.meta.circuit.cavity().period()
    }

    /// Largest stored energy seen anywhere in the run.
    pub fn peak_stored_energy(&self) -> f64 {
        self.samples
            .iter()
            .map(Sample::stored_energy)
            .fold(0.0, f64::max)
    }

    /// Worst violation of `ΔU = W_in − Q_diss`, relative to peak stored energy.
    pub fn ledger_residual(&self) -> f64 {
        let Some(first) = self.samples.first() else {
            return 0.0;
        };
        let u0 = first.stored_energy();
        let peak = self.peak_stored_energy();
        if peak == 0.0 {
            return 0.0;
        }
        self.samples
            .iter()
            .map(|s| (s.stored_energy() - u0 - s.w_in + s.q_diss).abs())
            .fold(0.0, f64::max)
            / peak
    }
}

type StateVec = [f64; 6];

const Q: usize = 0;
const I: usize = 1;
const X: usize = 2;
const V: usize = 3;
const W: usize = 4;
const D: usize = 5;

/// How the plate position evolves.
#[derive(Debug, Clone, Copy)]
enum PlateMotion {
    Prescribed { x_p: f64, omega2: f64, phase: f64 },
    Forced { area_over_mass: f64, field: PumpField },
}

#[derive(Debug, Clone, Copy)]
enum PumpField {
    NoBias { e_p: f64, omega_p: f64 },
    DcBias { e_dc: f64, e_p: f64, omega_p: f64 },
}

impl PumpField {
    fn at(&self, t: f64) -> f64 {
        match *self {
            PumpField::NoBias { e_p, omega_p } => e_p * (omega_p * t).sin(),
            PumpField::DcBias { e_dc, e_p, omega_p } => e_dc - e_p * (omega_p * t).sin(),
        }
    }
}

impl PlateMotion {
    fn prescribed(&self, t: f64) -> Option<(f64, f64)> {
        match *self {
            PlateMotion::Prescribed { x_p, omega2, phase } => {
                let arg = omega2 * t + phase;
                Some((x_p * arg.sin(), x_p * omega2 * arg.cos()))
            }
            PlateMotion::Forced { .. } => None,
        }
    }
}

struct System {
    gap0: f64,
    area: f64,
    inductance: f64,
    resistance: f64,
    motion: PlateMotion,
}

impl System {
    fn plate(&self, t: f64, y: &StateVec) -> (f64, f64) {
        self.motion.prescribed(t).unwrap_or((y[X], y[V]))
    }

    fn derivative(&self, t: f64, y: &StateVec) -> StateVec {
        let (x, v) = self.plate(t, y);
        let q = y[Q];
        let i = y[I];
        let gap = self.gap0 + x;
        let inv_eps_a = 1.0 / (EPSILON_0 * self.area);
        let (dx, dv) = match self.motion {
            PlateMotion::Prescribed { .. } => (0.0, 0.0),
            PlateMotion::Forced {
                area_over_mass,
                field,
            } => (v, pressure_on_plate(field.at(t)) * area_over_mass),
        };
        [
            i,
            (-q * gap * inv_eps_a - self.resistance * i) / self.inductance,
            dx,
            dv,
            0.5 * q * q * inv_eps_a * v,
            self.resistance * i * i,
        ]
    }

    fn step(&self, t: f64, y: &StateVec, dt: f64) -> StateVec {
        let k1 = self.derivative(t, y);
        let k2 = self.derivative(t + 0.5 * dt, &axpy(y, &k1, 0.5 * dt));
        let k3 = self.derivative(t + 0.5 * dt, &axpy(y, &k2, 0.5 * dt));
        let k4 = self.derivative(t + dt, &axpy(y, &k3, dt));
        let mut out = *y;
        for n in 0..6 {
            out[n] += dt / 6.0 * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
        }
        if let Some((x, v)) = self.motion.prescribed(t + dt) {
            out[X] = x;
            out[V] = v;
        }
        out
    }
}

fn axpy(y: &StateVec, k: &StateVec, h: f64) -> StateVec {
    let mut out = *y;
    for n in 0..6 {
        out[n] += h * k[n];
    }
    out
}

/// Integrates circuit and plate for `cfg.n_cycles` signal periods.
///
/// Kinematic drives prescribe `x = (v_2w/2ω) sin(2ωt + phase)`. Field drives
/// push a free plate with the full pump pressure `½ε₀E_pump²`, static part
/// included, so the plate also drifts quadratically.
pub fn simulate(circuit: &LcCircuit, drive: &PumpDrive, cfg: &SimConfig) -> Result<Trace> {
    cfg.validate()?;
    let cavity = *circuit.cavity();
    let validated = validate(cavity, *drive)?;
    let mut warnings: Vec<String> = validated.warning.into_iter().collect();

    let omega = cavity.omega();
    let motion = match *drive {
        PumpDrive::KinematicVelocity { v_2w, phase } => {
            let x_p = v_2w / (2.0 * omega);
            let depth = x_p / cavity.gap();
            if depth >= MAX_MODULATION_DEPTH {
                return Err(ParampError::ConfigError(format!(
                    "modulation depth x_p/d0 = {depth:.3e} must stay below {MAX_MODULATION_DEPTH}"
                )));
            }
            if depth > WARN_MODULATION_DEPTH {
                warnings.push(format!(
                    "modulation depth x_p/d0 = {depth:.3e} exceeds {WARN_MODULATION_DEPTH}; first-order gain formula is approximate"
                ));
            }
            PlateMotion::Prescribed {
                x_p,
                omega2: 2.0 * omega,
                phase,
            }
        }
        PumpDrive::NoBiasField { e_p, omega_p } => PlateMotion::Forced {
            area_over_mass: cavity.area() / cavity.mass(),
            field: PumpField::NoBias { e_p, omega_p },
        },
        PumpDrive::DcBiasField { e_dc, e_p, omega_p } => PlateMotion::Forced {
            area_over_mass: cavity.area() / cavity.mass(),
            field: PumpField::DcBias { e_dc, e_p, omega_p },
        },
    };

    let system = System {
        gap0: cavity.gap(),
        area: cavity.area(),
        inductance: circuit.inductance(),
        resistance: circuit.resistance(),
        motion,
    };

    let dt = cavity.period() / cfg.steps_per_cycle as f64;
    let n_steps = cfg.total_steps();
    let mut y: StateVec = [
        cfg.initial_charge,
        cfg.initial_current,
        cfg.initial_plate_x,
        cfg.initial_plate_v,
        0.0,
        0.0,
    ];
    if let Some((x, v)) = motion.prescribed(0.0) {
        if cfg.initial_plate_x != 0.0 || cfg.initial_plate_v != 0.0 {
            return Err(ParampError::ConfigError(
                "a kinematic drive prescribes the plate; initial plate state must be zero".into(),
            ));
        }
        y[X] = x;
        y[V] = v;
    }
    let gap0 = cavity.gap() + y[X];
    if gap0 <= 0.0 || gap0.is_nan() {
        return Err(ParampError::GapClosure {
            time: 0.0,
            gap: gap0,
        });
    }

    let record = |t: f64, y: &StateVec| {
        let gap = cavity.gap() + y[X];
        Sample {
            state: LcState {
                charge: y[Q],
                current: y[I],
                plate_x: y[X],
                plate_v: y[V],
                time: t,
            },
            u_e: circuit.capacitor_energy(y[Q], gap),
            u_b: circuit.inductor_energy(y[I]),
            w_in: y[W],
            q_diss: y[D],
        }
    };

    let mut samples = Vec::with_capacity(n_steps / cfg.record_stride + 1);
    samples.push(record(0.0, &y));
    for n in 0..n_steps {
        let t = n as f64 * dt;
        y = system.step(t, &y, dt);
        let t_next = (n + 1) as f64 * dt;
        let gap = cavity.gap() + y[X];
        if gap <= 0.0 || gap.is_nan() {
            return Err(ParampError::GapClosure { time: t_next, gap });
        }
        if (n + 1) % cfg.record_stride == 0 {
            samples.push(record(t_next, &y));
        }
    }

    Ok(Trace {
        samples,
        dt,
        meta: TraceMeta {
            circuit: *circuit,
            drive: *drive,
            config: *cfg,
            warnings,
        },
    })
}
