use serde::Serialize;

use crate::model::{CavityParams, EPSILON_0};

/// Series RLC equivalent of the signal cavity. `R = ωL/Q` gives the
/// free-ringing energy decay rate `ω/Q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LcCircuit {
    cavity: CavityParams,
    capacitance0: f64,
    inductance: f64,
    resistance: f64,
    lossless: bool,
}

pub fn build_circuit(cavity: CavityParams, lossless: bool) -> LcCircuit {
    let capacitance0 = EPSILON_0 * cavity.area() / cavity.gap();
    let inductance = 1.0 / (cavity.omega() * cavity.omega() * capacitance0);
    let resistance = if lossless {
        0.0
    } else {
        cavity.omega() * inductance / cavity.quality()
    };
    LcCircuit {
        cavity,
        capacitance0,
        inductance,
        resistance,
        lossless,
    }
}

impl LcCircuit {
    pub fn cavity(&self) -> &CavityParams {
        &self.cavity
    }

    /// Equilibrium capacitance `ε₀A/d0`, F.
    pub fn capacitance0(&self) -> f64 {
        self.capacitance0
    }

    pub fn inductance(&self) -> f64 {
        self.inductance
    }

    pub fn resistance(&self) -> f64 {
        self.resistance
    }

    pub fn is_lossless(&self) -> bool {
        self.lossless
    }

    /// Energy decay rate of the undriven circuit, `R/L`.
    pub fn decay_rate(&self) -> f64 {
        self.resistance / self.inductance
    }

    /// Charge that puts `voltage` across the undisplaced capacitor.
    pub fn charge_for_voltage(&self, voltage: f64) -> f64 {
        self.capacitance0 * voltage
    }

    /// Capacitor energy `q² d / (2ε₀A)` at gap `d`.
    pub fn capacitor_energy(&self, charge: f64, gap: f64) -> f64 {
        charge * charge * gap / (2.0 * EPSILON_0 * self.cavity.area())
    }

    pub fn inductor_energy(&self, current: f64) -> f64 {
        0.5 * self.inductance * current * current
    }
}
