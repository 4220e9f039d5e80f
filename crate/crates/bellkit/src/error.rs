//! Crate-wide error type.
//!
//! Every fallible operation in the library returns [`Error`]. Variants are
//! grouped by failure class rather than by module: domain violations on
//! physical parameters, numerical solver failures, data-shape problems in
//! the statistics pipeline, and file-format errors.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A physical parameter is outside its allowed domain. Names the field
    /// so a config author can find the offending line.
    #[error("parameter `{field}` = {value} violates: {requirement}")]
    ParamDomain {
        field: String,
        value: f64,
        requirement: &'static str,
    },

    /// A bracketing root solve found no sign change over its interval.
    #[error(
        "root not bracketed on [{lo}, {hi}]: residual {f_lo:.6e} at lo, {f_hi:.6e} at hi"
    )]
    SolverBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// A target value cannot be reached anywhere in the searched domain.
    #[error("target {target:.6e} unattainable: reachable range is [{lo:.6e}, {hi:.6e}]")]
    NoSolution { target: f64, lo: f64, hi: f64 },

    /// An iterative procedure failed to settle. Carries the last few
    /// iterates so the caller can see whether it was oscillating or diverging.
    #[error("{what} did not converge after {iterations} iterations (trail: {trail:?})")]
    Convergence {
        what: &'static str,
        iterations: usize,
        trail: Vec<f64>,
    },

    /// A required companion angle setting is absent from the dataset.
    #[error("missing setting (alice {alpha_deg}°, bob {beta_deg}°) required by {needed_for}")]
    MissingSetting {
        alpha_deg: f64,
        beta_deg: f64,
        needed_for: &'static str,
    },

    /// No recorded analyzer-angle difference close enough to a required one.
    #[error("no f-series point near |phi| = {target_phi_deg}° (nearest is {nearest_deg}° away)")]
    MissingAngle { target_phi_deg: f64, nearest_deg: f64 },

    /// Data that cannot support the requested estimate (all-zero channel,
    /// zero denominator, and so on).
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// Too few points (or too few distinct points) for a fit or test.
    #[error("{what} needs at least {needed} {unit}, got {got}")]
    InsufficientData {
        what: &'static str,
        needed: usize,
        got: usize,
        unit: &'static str,
    },

    /// A requested size exceeds what the implementation will simulate.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A malformed line in a dataset or config file.
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    /// Dataset schema version this build does not understand.
    #[error("{path}: unsupported schema version {found} (this build reads version {supported})")]
    UnsupportedVersion { path: String, found: String, supported: u32 },

    /// Two rows with the same (alice, bob) angle pair.
    #[error("{path}:{line}: duplicate setting (alice {alpha_deg}°, bob {beta_deg}°)")]
    DuplicateSetting { path: String, line: usize, alpha_deg: f64, beta_deg: f64 },

    /// A scan selector that matches no scan in the dataset.
    #[error("no scan at bob = {requested}°; available: {available:?}")]
    UnknownScan { requested: f64, available: Vec<f64> },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
