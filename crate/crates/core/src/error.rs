use thiserror::Error;

pub type Result<T> = std::result::Result<T, ParampError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParampError {
    /// A parameter that must be strictly positive (or non-negative, for
    /// amplitudes) was not. Carries the field name.
    #[error("parameter `{0}` must be positive")]
    NonPositiveParameter(&'static str),

    #[error("{what}: expected omega_p = {expected:.9e} rad/s, got {actual:.9e} rad/s")]
    FrequencyMismatch {
        what: &'static str,
        expected: f64,
        actual: f64,
    },

    #[error("DC bias regime requires E_dc > E_p (E_dc = {e_dc:e} V/m, E_p = {e_p:e} V/m)")]
    BiasRegimeViolation { e_dc: f64, e_p: f64 },

    #[error("capacitor gap closed at t = {time:e} s (gap = {gap:e} m)")]
    GapClosure { time: f64, gap: f64 },

    #[error("invalid configuration: {0}")]
    ConfigError(String),

    #[error("trace has no usable energy samples")]
    DegenerateTrace,

    #[error("growth rate does not change sign over [{lo:e}, {hi:e}] m/s (rates {rate_lo:e}, {rate_hi:e} 1/s)")]
    NoSignChange {
        lo: f64,
        hi: f64,
        rate_lo: f64,
        rate_hi: f64,
    },
}
