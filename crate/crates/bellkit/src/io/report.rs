//! Per-scan analysis reports and their on-disk CSV form.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::sim::CountRecord;
use crate::stats::{
    build_f_series, compute_nu, estimate_efficiencies, fit_delta, fit_lhv, fit_qm, group_scans,
    nosignalling_check, DeltaFit, FSeries, LhvFit, NoSignallingReport, NuResult, QmFit,
    VerdictThresholds, ANGLE_TOL_DEG,
};

/// Everything the analysis produced for one far-arm angle.
///
/// Estimators that could not run on this scan are `None`, with the reason
/// recorded in `warnings`; a scan never fails the whole report.
#[derive(Debug, Clone)]
pub struct ScanReport {
    pub beta_deg: f64,
    pub series: Option<FSeries>,
    /// Channel efficiencies, available when every row records its emissions.
    pub efficiencies: Option<[f64; 4]>,
    pub nu: Option<NuResult>,
    pub qm: Option<QmFit>,
    pub lhv: Option<LhvFit>,
    pub delta: Option<DeltaFit>,
    pub warnings: Vec<String>,
}

impl ScanReport {
    /// Verdict tokens for the CSV `flags` cell, fixed order.
    pub fn flags(&self) -> Vec<&'static str> {
        let mut flags = Vec::new();
        if let Some(nu) = &self.nu {
            flags.push(if nu.consistent_with_qm { "qm-consistent" } else { "qm-deviant" });
            flags.push(if nu.lhv1_compatible { "lhv1-compatible" } else { "lhv1-refuted" });
            flags.push(if nu.lhv2_compatible { "lhv2-compatible" } else { "lhv2-refuted" });
            if nu.eta_star_capped {
                flags.push("eta-star-capped");
            }
        }
        if let Some(lhv) = &self.lhv {
            if lhv.epsilon_clamped {
                flags.push("epsilon-clamped");
            }
            if !lhv.hinge_observable {
                flags.push("hinge-unobservable");
            }
        }
        flags
    }
}

/// The full analysis of one dataset: one [`ScanReport`] per far-arm angle,
/// ascending, plus the dataset-wide constancy check.
#[derive(Debug, Clone)]
pub struct ReportBundle {
    pub scans: Vec<ScanReport>,
    pub nosignalling: Option<NoSignallingReport>,
    /// Why the constancy check could not run, when it could not.
    pub nosignalling_note: Option<String>,
}

/// Run every estimator on a validated dataset.
///
/// Fails only when no scan can be analyzed at all; anything recoverable
/// becomes a per-scan warning.
pub fn build_report(
    records: &[CountRecord],
    thresholds: &VerdictThresholds,
) -> Result<ReportBundle> {
    let scans = group_scans(records);
    if scans.is_empty() {
        return Err(Error::InsufficientData {
            what: "measurement settings",
            needed: 1,
            got: 0,
            unit: "rows",
        });
    }
    let series_list = build_f_series(records)?;
    let (nosignalling, nosignalling_note) = match nosignalling_check(records) {
        Ok(report) => (Some(report), None),
        Err(err) => (None, Some(err.to_string())),
    };

    let mut out = Vec::with_capacity(scans.len());
    for scan in &scans {
        let mut warnings = Vec::new();
        let series = series_list
            .iter()
            .find(|s| (s.beta_deg - scan.beta_deg).abs() <= ANGLE_TOL_DEG)
            .cloned();
        if series.is_none() {
            warnings
                .push("no setting in this scan has a 45-degree-shifted companion".to_string());
        }

        let efficiencies = if scan.rows.iter().all(|r| r.n_pairs.is_some()) {
            let total: u64 = scan.rows.iter().map(|r| r.n_pairs.unwrap_or(0)).sum();
            let r0 = total as f64 / scan.rows.len() as f64;
            match estimate_efficiencies(scan, r0) {
                Ok(eta) => Some(eta),
                Err(err) => {
                    warnings.push(format!("efficiency estimate unavailable: {err}"));
                    None
                }
            }
        } else {
            None
        };

        let (nu, qm, lhv) = match &series {
            Some(s) => (
                keep(&mut warnings, "anisotropy statistic", compute_nu(s, thresholds)),
                keep(&mut warnings, "cosine fit", fit_qm(s)),
                keep(&mut warnings, "dead-zone fit", fit_lhv(s)),
            ),
            None => (None, None, None),
        };

        let phi: Vec<f64> = scan.rows.iter().map(|r| r.alpha_deg - scan.beta_deg).collect();
        let rates: Vec<f64> = scan.rows.iter().map(|r| r.c_pm as f64).collect();
        let delta = match fit_delta(&phi, &rates) {
            Ok(d) => Some(d),
            Err(err) => {
                warnings.push(format!("channel anisotropy spread unavailable: {err}"));
                None
            }
        };

        out.push(ScanReport {
            beta_deg: scan.beta_deg,
            series,
            efficiencies,
            nu,
            qm,
            lhv,
            delta,
            warnings,
        });
    }
    Ok(ReportBundle { scans: out, nosignalling, nosignalling_note })
}

/// Unwrap a per-scan estimate, demoting its error to a warning.
fn keep<T>(warnings: &mut Vec<String>, what: &str, result: Result<T>) -> Option<T> {
    match result {
        Ok(v) => Some(v),
        Err(err) => {
            warnings.push(format!("{what} unavailable: {err}"));
            None
        }
    }
}

fn cell(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

/// Hinge correction of the fitted dead-zone model at reduced angle `phi_rad`.
fn hinge_term(lhv: &LhvFit, phi_rad: f64) -> f64 {
    if lhv.epsilon_clamped || lhv.eta <= 0.0 {
        return 0.0;
    }
    let gain = 32.0 * lhv.epsilon.powi(3)
        / (3.0 * std::f64::consts::PI.powi(2) * lhv.eta.powi(2));
    gain * (phi_rad.abs() - std::f64::consts::FRAC_PI_2 * (1.0 - lhv.eta)).max(0.0)
}

impl ReportBundle {
    const REPORT_COLUMNS: &'static str = "beta_deg,n_points,v_prime,sigma_v_prime,nu,sigma_nu,\
         deviation_sigma,eta_star,sigma_eta_star,chi2_qm,dof_qm,chi2_lhv,dof_lhv,eta_fit,\
         sigma_eta_fit,epsilon_fit,delta,sigma_delta,eta_ap,eta_am,eta_bp,eta_bm,flags,warnings";

    /// The summary table, one row per scan in ascending `beta_deg`.
    pub fn report_csv(&self) -> String {
        let mut out = String::from("# schema: 1\n");
        match (&self.nosignalling, &self.nosignalling_note) {
            (Some(ns), _) => {
                let _ = writeln!(out, "# nosignalling_worst_p: {}", ns.worst_p);
                let _ = writeln!(out, "# nosignalling_flagged: {}", ns.flagged);
            }
            (None, Some(note)) => {
                let _ = writeln!(out, "# nosignalling: unavailable ({note})");
            }
            (None, None) => {}
        }
        out.push_str(Self::REPORT_COLUMNS);
        out.push('\n');
        for scan in &self.scans {
            let nu = scan.nu.as_ref();
            let qm = scan.qm.as_ref();
            let lhv = scan.lhv.as_ref();
            let delta = scan.delta.as_ref();
            let eta = scan.efficiencies;
            let cells = [
                scan.beta_deg.to_string(),
                scan.series.as_ref().map_or(0, |s| s.points.len()).to_string(),
                cell(nu.map(|n| n.v_prime)),
                cell(nu.map(|n| n.sigma_v_prime)),
                cell(nu.map(|n| n.nu)),
                cell(nu.map(|n| n.sigma_nu)),
                cell(nu.map(|n| n.deviation_sigma)),
                cell(nu.map(|n| n.eta_star)),
                cell(nu.map(|n| n.sigma_eta_star)),
                cell(qm.map(|q| q.chi2)),
                cell(qm.map(|q| q.dof as f64)),
                cell(lhv.map(|l| l.chi2)),
                cell(lhv.map(|l| l.dof as f64)),
                cell(lhv.map(|l| l.eta)),
                cell(lhv.map(|l| l.sigma_eta)),
                cell(lhv.map(|l| l.epsilon)),
                cell(delta.map(|d| d.delta)),
                cell(delta.map(|d| d.sigma_delta)),
                cell(eta.map(|e| e[0])),
                cell(eta.map(|e| e[1])),
                cell(eta.map(|e| e[2])),
                cell(eta.map(|e| e[3])),
                scan.flags().join(";"),
                format!("\"{}\"", scan.warnings.join("; ").replace('"', "\"\"")),
            ];
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Plot data for one scan: the measured statistic next to both fitted
    /// models, against the reduced analyzer difference. `None` without a
    /// composite series.
    pub fn scan_csv(&self, scan: &ScanReport) -> Option<String> {
        let series = scan.series.as_ref()?;
        let mut out = String::from("# schema: 1\n");
        let _ = writeln!(out, "# beta_deg: {}", scan.beta_deg);
        out.push_str("phi_deg,f,sigma_f,model_qm,model_lhv\n");
        for p in &series.points {
            let phi = p.phi_reduced_deg.to_radians();
            let cos2phi = (2.0 * phi).cos();
            let model_qm = scan.qm.as_ref().map(|q| q.a * (1.0 + q.v * cos2phi));
            let model_lhv = scan
                .lhv
                .as_ref()
                .map(|l| l.a * (1.0 + l.v_prime * cos2phi + hinge_term(l, phi)));
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                p.phi_reduced_deg,
                p.f,
                p.sigma_f,
                cell(model_qm),
                cell(model_lhv)
            );
        }
        Some(out)
    }

    /// Write `report.csv` plus one `scan_<beta>.csv` per analyzable scan.
    /// Returns the written paths, `report.csv` first.
    pub fn write_to_dir(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let report_path = dir.join("report.csv");
        fs::write(&report_path, self.report_csv())?;
        written.push(report_path);
        for scan in &self.scans {
            if let Some(csv) = self.scan_csv(scan) {
                let path = dir.join(format!("scan_{}.csv", scan.beta_deg));
                fs::write(&path, csv)?;
                written.push(path);
            }
        }
        Ok(written)
    }
}
