//! Constancy check of each arm's singles against the far arm's angle.

use statrs::function::gamma::gamma_ur;

use super::ANGLE_TOL_DEG;
use crate::error::{Error, Result};
use crate::sim::CountRecord;

/// Worst-case p-value below which the report is flagged.
pub const ALARM_P: f64 = 1e-3;

/// One channel's constancy test at one fixed own-arm angle.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelConstancy {
    /// Singles channel, `a+`/`a-`/`b+`/`b-`.
    pub channel: &'static str,
    /// The own-arm angle held fixed while the far arm varies.
    pub fixed_angle_deg: f64,
    /// Number of far-arm angles pooled.
    pub n_groups: usize,
    pub chi2: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// All constancy tests over a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct NoSignallingReport {
    pub tests: Vec<ChannelConstancy>,
    pub worst_p: f64,
    /// `worst_p < ALARM_P`.
    pub flagged: bool,
}

fn distinct_angles(mut angles: Vec<f64>) -> Vec<f64> {
    angles.sort_by(|a, b| a.partial_cmp(b).expect("finite angle"));
    angles.dedup_by(|a, b| (*a - *b).abs() <= ANGLE_TOL_DEG);
    angles
}

/// Pearson chi-square of counts against a shared exposure-weighted rate.
/// Returns `None` when fewer than two groups or nothing was counted.
fn constancy(counts_and_exposures: &[(u64, f64)]) -> Option<(f64, usize, f64)> {
    if counts_and_exposures.len() < 2 {
        return None;
    }
    let total: f64 = counts_and_exposures.iter().map(|(c, _)| *c as f64).sum();
    let exposure: f64 = counts_and_exposures.iter().map(|(_, n)| n).sum();
    let rate = total / exposure;
    if !(rate > 0.0) {
        return None;
    }
    let chi2: f64 = counts_and_exposures
        .iter()
        .map(|&(c, n)| {
            let expected = rate * n;
            (c as f64 - expected).powi(2) / expected
        })
        .sum();
    let dof = counts_and_exposures.len() - 1;
    // The survival function's implementation rejects x = 0 outright.
    let p = if chi2 > 0.0 { gamma_ur(dof as f64 / 2.0, chi2 / 2.0) } else { 1.0 };
    Some((chi2, dof, p))
}

/// Test every singles channel for dependence on the far arm's angle.
///
/// At each of Alice's angles, her `+` and `-` singles are pooled across
/// Bob's angles and tested against a constant rate (exposure-weighted by
/// the emission counts when the dataset records them); symmetrically for
/// Bob. Any dependence would amount to signalling between the arms.
pub fn nosignalling_check(records: &[CountRecord]) -> Result<NoSignallingReport> {
    let bob_angles = distinct_angles(records.iter().map(|r| r.beta_deg).collect());
    if bob_angles.len() < 2 {
        return Err(Error::InsufficientData {
            what: "far-arm angles for the constancy test",
            needed: 2,
            got: bob_angles.len(),
            unit: "angles",
        });
    }
    let alice_angles = distinct_angles(records.iter().map(|r| r.alpha_deg).collect());

    let mut tests = Vec::new();
    let mut run = |channel: &'static str,
                   fixed: &[f64],
                   own_angle: fn(&CountRecord) -> f64,
                   single: fn(&CountRecord) -> u64| {
        for &angle in fixed {
            let pooled: Vec<(u64, f64)> = records
                .iter()
                .filter(|r| (own_angle(r) - angle).abs() <= ANGLE_TOL_DEG)
                .map(|r| (single(r), r.n_pairs.map_or(1.0, |n| n as f64)))
                .collect();
            if let Some((chi2, dof, p_value)) = constancy(&pooled) {
                tests.push(ChannelConstancy {
                    channel,
                    fixed_angle_deg: angle,
                    n_groups: pooled.len(),
                    chi2,
                    dof,
                    p_value,
                });
            }
        }
    };
    run("a+", &alice_angles, |r| r.alpha_deg, |r| r.s_ap);
    run("a-", &alice_angles, |r| r.alpha_deg, |r| r.s_am);
    run("b+", &bob_angles, |r| r.beta_deg, |r| r.s_bp);
    run("b-", &bob_angles, |r| r.beta_deg, |r| r.s_bm);

    if tests.is_empty() {
        return Err(Error::InsufficientData {
            what: "non-empty singles channels to test",
            needed: 1,
            got: 0,
            unit: "channels",
        });
    }
    let worst_p = tests.iter().map(|t| t.p_value).fold(f64::INFINITY, f64::min);
    Ok(NoSignallingReport { tests, worst_p, flagged: worst_p < ALARM_P })
}
