//! Energy-balance threshold analysis for a moving-plate degenerate
//! parametric oscillator, with a time-domain LC simulator that checks the
//! closed forms numerically.
//!
//! - [`thresholds`]: gain, loss, threshold velocity/energy/power and the
//!   literature comparisons.
//! - [`pump`]: plate response to a pump field, with and without DC bias.
//! - [`dynamics`]: RK4 simulation of the circuit, growth-rate fitting and
//!   numerical threshold search.

pub mod dynamics;
mod error;
pub mod model;
pub mod pump;
pub mod thresholds;

pub use error::{ParampError, Result};
pub use model::{
    validate, CavityParams, LcState, PhysicalConstants, PumpCavityParams, PumpDrive, Validated,
    EPSILON_0, SPEED_OF_LIGHT,
};
pub use pump::DriveResponse;
pub use thresholds::ThresholdReport;
