//! Time-domain LC circuit with a moving capacitor plate.

mod checks;
mod circuit;
mod growth;
mod search;
mod simulate;

pub use checks::{
    equipartition_of, extract_plate_oscillation, verify_equipartition, verify_time_averages,
    EquipartitionReport, PlateOscillation, TimeAverageReport, MIN_EQUIPARTITION_CYCLES,
};
pub use circuit::{build_circuit, LcCircuit};
pub use growth::{
    cycle_averages, cycle_maxima, estimate_growth_rate, fit_line, GrowthEstimate, GrowthMethod,
    LineFit, MIN_FIT_CYCLES, TRANSIENT_FRACTION,
};
pub use search::{
    even_phases, find_threshold_velocity_numeric, growth_at, phase_scan, NumericThreshold,
    BRACKET_MULTIPLE, ZERO_RATE_PER_CYCLE,
};
pub use simulate::{
    simulate, Sample, SimConfig, Trace, TraceMeta, DEFAULT_STEPS_PER_CYCLE,
    MAX_MODULATION_DEPTH, MIN_STEPS_PER_CYCLE, WARN_MODULATION_DEPTH,
};
