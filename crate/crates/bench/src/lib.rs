//! Shared fixtures for the criterion benches.

use std::f64::consts::TAU;

use paramp_core::dynamics::{build_circuit, LcCircuit};
use paramp_core::{CavityParams, PumpCavityParams, SPEED_OF_LIGHT};

/// 1 MHz, 1 mm gap, Q = 1000 circuit used throughout the simulator tests.
pub fn desk_circuit() -> LcCircuit {
    let cavity = CavityParams::new(1e-6, 1e-3, 1e-4, TAU * 1e6, 1e3).expect("valid desk cavity");
    build_circuit(cavity, false)
}

/// 10 GHz, one-wavelength gap, Q = 1e10 superconducting design.
pub fn reference_design() -> (CavityParams, PumpCavityParams) {
    let omega = TAU * 1e10;
    let cavity =
        CavityParams::new(2e-6, SPEED_OF_LIGHT / 1e10, 1e-2, omega, 1e10).expect("valid cavity");
    let pump = PumpCavityParams::new(omega, 1e10).expect("valid pump");
    (cavity, pump)
}
