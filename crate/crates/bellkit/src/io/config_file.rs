//! Flat `key = value` setup files.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{AnalyzerArm, ChannelTransmittance, DetectorBank, SetupConfig};
use crate::stats::VerdictThresholds;

/// Keys a setup file must define, in canonical order.
pub const REQUIRED_KEYS: [&str; 16] = [
    "gamma",
    "mu_a",
    "mu_b",
    "r0",
    "arm_a.T_plus",
    "arm_a.t_plus",
    "arm_a.T_minus",
    "arm_a.t_minus",
    "arm_b.T_plus",
    "arm_b.t_plus",
    "arm_b.T_minus",
    "arm_b.t_minus",
    "det.zeta_ap",
    "det.zeta_am",
    "det.zeta_bp",
    "det.zeta_bm",
];

const OPTIONAL_KEYS: [&str; 2] = ["thresholds.lhv1_eta", "thresholds.lhv2_eta"];

/// A validated setup plus the verdict thresholds to analyze against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfigFile {
    pub setup: SetupConfig,
    pub thresholds: VerdictThresholds,
}

/// Read a setup file; the result has already passed [`SetupConfig::validate`].
pub fn read_config(path: &Path) -> Result<ConfigFile> {
    let content = fs::read_to_string(path)?;
    parse_config(&content, path)
}

/// Parse setup text. `path` only labels error messages.
pub fn parse_config(content: &str, path: &Path) -> Result<ConfigFile> {
    let label = path.display().to_string();
    let mut values: Vec<(&str, f64, usize)> = Vec::new();

    for (idx, raw) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                path: label.clone(),
                line: line_no,
                msg: format!("expected 'key = value', found '{line}'"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(key) = REQUIRED_KEYS
            .iter()
            .chain(OPTIONAL_KEYS.iter())
            .find(|k| **k == key)
        else {
            return Err(Error::Parse {
                path: label.clone(),
                line: line_no,
                msg: format!("unknown key '{key}'"),
            });
        };
        if values.iter().any(|(k, _, _)| k == key) {
            return Err(Error::Parse {
                path: label.clone(),
                line: line_no,
                msg: format!("duplicate key '{key}'"),
            });
        }
        let value: f64 = value.parse().map_err(|_| Error::Parse {
            path: label.clone(),
            line: line_no,
            msg: format!("key '{key}': invalid number '{value}'"),
        })?;
        values.push((key, value, line_no));
    }

    let missing: Vec<&str> = REQUIRED_KEYS
        .iter()
        .filter(|k| !values.iter().any(|(key, _, _)| key == *k))
        .copied()
        .collect();
    if !missing.is_empty() {
        return Err(Error::Parse {
            path: label,
            line: content.lines().count().max(1),
            msg: format!("missing required keys: {}", missing.join(", ")),
        });
    }

    let get = |key: &str| -> f64 {
        values
            .iter()
            .find(|(k, _, _)| *k == key)
            .map(|(_, v, _)| *v)
            .expect("required keys were checked above")
    };
    let opt = |key: &str| values.iter().find(|(k, _, _)| *k == key).map(|(_, v, _)| *v);

    let arm = |prefix: &str| AnalyzerArm {
        plus: ChannelTransmittance {
            principal: get(&format!("{prefix}.T_plus")),
            leak: get(&format!("{prefix}.t_plus")),
        },
        minus: ChannelTransmittance {
            principal: get(&format!("{prefix}.T_minus")),
            leak: get(&format!("{prefix}.t_minus")),
        },
    };
    let setup = SetupConfig {
        gamma: get("gamma"),
        mu_a: get("mu_a"),
        mu_b: get("mu_b"),
        r0: get("r0"),
        arm_a: arm("arm_a"),
        arm_b: arm("arm_b"),
        det: DetectorBank {
            a_plus: get("det.zeta_ap"),
            a_minus: get("det.zeta_am"),
            b_plus: get("det.zeta_bp"),
            b_minus: get("det.zeta_bm"),
        },
    };
    setup.validate()?;

    let defaults = VerdictThresholds::default();
    Ok(ConfigFile {
        setup,
        thresholds: VerdictThresholds {
            lhv1_eta: opt("thresholds.lhv1_eta").unwrap_or(defaults.lhv1_eta),
            lhv2_eta: opt("thresholds.lhv2_eta").unwrap_or(defaults.lhv2_eta),
        },
    })
}

/// The canonical `key: value` echo of a setup, for dataset provenance.
pub fn config_echo(setup: &SetupConfig) -> Vec<(String, String)> {
    let arm = |prefix: &str, a: &AnalyzerArm| {
        vec![
            (format!("{prefix}.T_plus"), a.plus.principal),
            (format!("{prefix}.t_plus"), a.plus.leak),
            (format!("{prefix}.T_minus"), a.minus.principal),
            (format!("{prefix}.t_minus"), a.minus.leak),
        ]
    };
    let mut pairs = vec![
        ("gamma".to_string(), setup.gamma),
        ("mu_a".to_string(), setup.mu_a),
        ("mu_b".to_string(), setup.mu_b),
        ("r0".to_string(), setup.r0),
    ];
    pairs.extend(arm("arm_a", &setup.arm_a));
    pairs.extend(arm("arm_b", &setup.arm_b));
    pairs.extend([
        ("det.zeta_ap".to_string(), setup.det.a_plus),
        ("det.zeta_am".to_string(), setup.det.a_minus),
        ("det.zeta_bp".to_string(), setup.det.b_plus),
        ("det.zeta_bm".to_string(), setup.det.b_minus),
    ]);
    pairs.into_iter().map(|(k, v)| (k, v.to_string())).collect()
}
