//! Drivers behind the command-line verbs.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::io::config_file::{config_echo, ConfigFile};
use crate::io::dataset::{parse_dataset, write_dataset, DatasetMeta};
use crate::io::report::{build_report, ReportBundle};
use crate::lhv::LhvParams;
use crate::sim::{simulate_grid, simulate_lhv_grid, SimulationPlan};
use crate::stats::{build_f_series, fit_lhv, fit_qm, FSeries, VerdictThresholds, ANGLE_TOL_DEG};

/// Analyzer grid used when no angles are given: 0° to 220° in 5° steps.
pub const DEFAULT_GRID: &str = "0:220:5";

const MAX_GRID_ANGLES: usize = 10_000;

/// Parse an angle grid, either `start:stop:step` (inclusive) or a comma list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let err = |msg: String| Error::Parse { path: format!("angle grid '{spec}'"), line: 1, msg };
    let number = |s: &str| -> Result<f64> {
        let v: f64 =
            s.trim().parse().map_err(|_| err(format!("invalid number '{}'", s.trim())))?;
        if !v.is_finite() {
            return Err(err(format!("non-finite number '{}'", s.trim())));
        }
        Ok(v)
    };

    let angles = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(err("expected start:stop:step".into()));
        }
        let (start, stop, step) = (number(parts[0])?, number(parts[1])?, number(parts[2])?);
        if step <= 0.0 {
            return Err(err(format!("step must be positive, found {step}")));
        }
        if stop < start {
            return Err(err(format!("stop {stop} is below start {start}")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > MAX_GRID_ANGLES {
            return Err(Error::Capacity(format!(
                "grid '{spec}' spans {count} angles (limit {MAX_GRID_ANGLES})"
            )));
        }
        (0..count).map(|k| start + k as f64 * step).collect()
    } else {
        let angles: Vec<f64> =
            spec.split(',').map(number).collect::<Result<_>>()?;
        if angles.is_empty() {
            return Err(err("empty angle list".into()));
        }
        angles
    };
    for (i, a) in angles.iter().enumerate() {
        if angles[..i].iter().any(|b| (a - b).abs() <= ANGLE_TOL_DEG) {
            return Err(err(format!("duplicate angle {a}")));
        }
    }
    Ok(angles)
}

/// What produces the counts of a synthetic dataset.
#[derive(Debug, Clone, Copy)]
pub enum Generator {
    /// The full source model under a validated setup.
    Quantum(ConfigFile),
    /// The dead-zone hidden-variable model.
    DeadZone(LhvParams),
}

#[derive(Debug, Clone)]
pub struct SimulateOpts {
    pub generator: Generator,
    pub alice_deg: Vec<f64>,
    pub bob_deg: Vec<f64>,
    pub pairs_per_setting: u64,
    pub seed: u64,
    /// Draw each window's emission number from a Poisson law (source model
    /// only; the hidden-variable generator always fluctuates).
    pub poisson_windows: bool,
}

/// Simulate a grid and write the dataset. Returns the number of rows.
pub fn cmd_simulate(opts: &SimulateOpts, out: &Path) -> Result<usize> {
    let plan = SimulationPlan {
        alice_deg: opts.alice_deg.clone(),
        bob_deg: opts.bob_deg.clone(),
        pairs_per_setting: opts.pairs_per_setting,
        master_seed: opts.seed,
        poisson_windows: opts.poisson_windows,
    };
    let mut extra = vec![
        ("pairs_per_setting".to_string(), opts.pairs_per_setting.to_string()),
        ("poisson_windows".to_string(), opts.poisson_windows.to_string()),
    ];
    let (mode, records) = match &opts.generator {
        Generator::Quantum(cfg) => {
            extra.extend(config_echo(&cfg.setup));
            extra.push(("thresholds.lhv1_eta".to_string(), cfg.thresholds.lhv1_eta.to_string()));
            extra.push(("thresholds.lhv2_eta".to_string(), cfg.thresholds.lhv2_eta.to_string()));
            ("quantum", simulate_grid(&cfg.setup, &plan)?)
        }
        Generator::DeadZone(params) => {
            extra.push(("lhv.v_prime".to_string(), params.v_prime.to_string()));
            extra.push(("lhv.eta".to_string(), params.eta.to_string()));
            extra.push(("lhv.epsilon".to_string(), params.epsilon.to_string()));
            ("lhv", simulate_lhv_grid(params, &plan)?)
        }
    };
    let meta = DatasetMeta {
        generator: Some("bellkit".to_string()),
        seed: Some(opts.seed),
        mode: Some(mode.to_string()),
        extra,
    };
    write_dataset(out, &meta, &records)?;
    Ok(records.len())
}

/// Analyze a dataset and write the report files into `out_dir`.
///
/// Verdicts are data, not failures: the command errs only on unreadable
/// or invalid input.
pub fn cmd_analyze(
    dataset: &Path,
    thresholds: &VerdictThresholds,
    out_dir: &Path,
) -> Result<ReportBundle> {
    let (_, records) = parse_dataset(dataset)?;
    let bundle = build_report(&records, thresholds)?;
    bundle.write_to_dir(out_dir)?;
    Ok(bundle)
}

/// Which model family `cmd_fit` fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    Qm,
    Lhv,
    Both,
}

impl FromStr for FitModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qm" => Ok(Self::Qm),
            "lhv" => Ok(Self::Lhv),
            "both" => Ok(Self::Both),
            other => Err(Error::Parse {
                path: "model selector".to_string(),
                line: 1,
                msg: format!("expected qm, lhv or both, found '{other}'"),
            }),
        }
    }
}

fn fit_lines(series: &FSeries, model: FitModel, out: &mut String) -> Result<()> {
    let _ = writeln!(out, "scan beta={}: {} points", series.beta_deg, series.points.len());
    let qm = match model {
        FitModel::Qm | FitModel::Both => Some(fit_qm(series)?),
        FitModel::Lhv => None,
    };
    if let Some(qm) = &qm {
        let _ = writeln!(
            out,
            "  cosine model:    V = {:.6} (sigma {:.6}), R0 = {:.6}, chi2 = {:.4} on {} dof",
            qm.v, qm.sigma_v, qm.r0, qm.chi2, qm.dof
        );
    }
    let lhv = match model {
        FitModel::Lhv | FitModel::Both => Some(fit_lhv(series)?),
        FitModel::Qm => None,
    };
    if let Some(lhv) = &lhv {
        let boundary = if lhv.epsilon_clamped { " (at boundary)" } else { "" };
        let _ = writeln!(
            out,
            "  dead-zone model: eta = {:.6} (sigma {:.6}), epsilon = {:.6}{}, V' = {:.6}, chi2 = {:.4} on {} dof",
            lhv.eta, lhv.sigma_eta, lhv.epsilon, boundary, lhv.v_prime, lhv.chi2, lhv.dof
        );
    }
    if let (Some(qm), Some(lhv)) = (&qm, &lhv) {
        let _ = writeln!(
            out,
            "  chi2 difference (dead-zone minus cosine): {:.4}",
            lhv.chi2 - qm.chi2
        );
    }
    Ok(())
}

/// Fit the requested models, either to one scan (`scan = Some(beta)`) or to
/// every scan, and render a plain-text summary.
pub fn cmd_fit(dataset: &Path, model: FitModel, scan: Option<f64>) -> Result<String> {
    let (_, records) = parse_dataset(dataset)?;
    let series_list = build_f_series(&records)?;
    let selected: Vec<&FSeries> = match scan {
        Some(beta) => {
            let Some(found) =
                series_list.iter().find(|s| (s.beta_deg - beta).abs() <= ANGLE_TOL_DEG)
            else {
                return Err(Error::UnknownScan {
                    requested: beta,
                    available: series_list.iter().map(|s| s.beta_deg).collect(),
                });
            };
            vec![found]
        }
        None => series_list.iter().collect(),
    };
    let mut out = String::new();
    for series in selected {
        fit_lines(series, model, &mut out)?;
    }
    Ok(out)
}
