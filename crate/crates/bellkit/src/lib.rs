//! Toolkit for two-channel polarization correlation experiments.
//!
//! The crate covers the full loop of a parametric-down-conversion Bell-type
//! run: a forward model of the source, analyzers and detectors
//! ([`model`]), a local hidden-variable alternative with a tunable
//! detection-efficiency dependence ([`lhv`]), Monte Carlo generation of
//! synthetic count records ([`sim`]), estimators and model fits over those
//! records ([`stats`]), and file formats plus command drivers ([`io`]).
//!
//! The intended workflow:
//!
//! ```text
//! SetupConfig ──simulate_grid──▶ Vec<CountRecord> ──build_f_series──▶ FSeries
//!                                                        │
//!                                          fit_qm / fit_lhv / compute_nu
//! ```
//!
//! All angles at API boundaries are in degrees (matching lab bookkeeping);
//! internal math is in radians.

pub mod error;
pub mod io;
pub mod lhv;
pub mod model;
pub mod sim;
pub mod stats;

pub use error::{Error, Result};
pub use lhv::LhvParams;
pub use model::{AnalyzerArm, AngleSetting, DetectorBank, DerivedParams, SetupConfig};
pub use sim::{CountRecord, SimulationPlan};
