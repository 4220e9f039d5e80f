//! Estimators and model fits over count records.
//!
//! Records are grouped into scans (one fixed second-arm angle each); the
//! central object is the composite coincidence statistic `f`, built per
//! setting from the two anticorrelated channels and the correlated
//! channels of the 45°-shifted companion setting, each normalized by its
//! own scan's singles averages. Normalizing this way cancels the source
//! asymmetry's first-order distortion of the singles, so the statistic
//! keeps the plain `1 + V cos 2phi` shape it would have for a symmetric
//! source.
//!
//! On top of `f` sit the visibility fit ([`fit_qm`]), the hidden-variable
//! profile fit ([`fit_lhv`]), and the curvature statistic ([`compute_nu`])
//! that separates the two families.

mod fit;
mod nosignalling;
mod series;

pub use fit::{fit_delta, fit_lhv, fit_qm, DeltaFit, LhvFit, QmFit};
pub use nosignalling::{nosignalling_check, ChannelConstancy, NoSignallingReport, ALARM_P};
pub use series::{
    build_f_series, compute_nu, compute_u, estimate_efficiencies, FPoint, FSeries, NuResult,
};

use crate::sim::CountRecord;

/// Two angles closer than this (degrees) are the same grid point.
pub const ANGLE_TOL_DEG: f64 = 1e-6;

/// Efficiency thresholds against which a fitted hidden-variable model is
/// judged: one per detector class under consideration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictThresholds {
    /// Efficiency the first hidden-variable class needs.
    pub lhv1_eta: f64,
    /// Efficiency the second hidden-variable class needs.
    pub lhv2_eta: f64,
}

impl Default for VerdictThresholds {
    fn default() -> Self {
        Self { lhv1_eta: 0.17, lhv2_eta: 0.55 }
    }
}

/// All records sharing one second-arm angle, ordered by the first arm.
#[derive(Debug, Clone)]
pub struct AngleScan {
    pub beta_deg: f64,
    pub rows: Vec<CountRecord>,
}

impl AngleScan {
    /// Scan averages of the four singles channels, order `a+ a- b+ b-`.
    pub fn singles_means(&self) -> [f64; 4] {
        let n = self.rows.len() as f64;
        let mut m = [0.0; 4];
        for r in &self.rows {
            for (slot, s) in m.iter_mut().zip(r.singles()) {
                *slot += s as f64;
            }
        }
        m.map(|x| x / n)
    }
}

/// Group records into per-`beta` scans, both levels sorted ascending.
pub fn group_scans(records: &[CountRecord]) -> Vec<AngleScan> {
    let mut sorted: Vec<CountRecord> = records.to_vec();
    sorted.sort_by(|a, b| {
        (a.beta_deg, a.alpha_deg)
            .partial_cmp(&(b.beta_deg, b.alpha_deg))
            .expect("angles are finite")
    });
    let mut scans: Vec<AngleScan> = Vec::new();
    for rec in sorted {
        match scans.last_mut() {
            Some(scan) if (scan.beta_deg - rec.beta_deg).abs() <= ANGLE_TOL_DEG => {
                scan.rows.push(rec)
            }
            _ => scans.push(AngleScan { beta_deg: rec.beta_deg, rows: vec![rec] }),
        }
    }
    scans
}
