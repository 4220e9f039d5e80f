//! The dataset file format: '#' metadata lines over a CSV body.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sim::CountRecord;
use crate::stats::ANGLE_TOL_DEG;

/// Dataset schema version this build reads and writes.
pub const SCHEMA_VERSION: u32 = 1;

const COLUMNS: [&str; 10] = [
    "alice_deg", "bob_deg", "c_pp", "c_pm", "c_mp", "c_mm", "s_ap", "s_am", "s_bp", "s_bm",
];

/// Provenance carried in a dataset's '#' header.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DatasetMeta {
    pub generator: Option<String>,
    pub seed: Option<u64>,
    /// How the counts were produced, e.g. `quantum` or `lhv`.
    pub mode: Option<String>,
    /// Remaining `key: value` lines in written order (config echo).
    pub extra: Vec<(String, String)>,
}

/// Serialize a dataset. The `n_pairs` column appears when every record
/// carries an emission count; a mixture is rejected.
pub fn write_dataset(path: &Path, meta: &DatasetMeta, records: &[CountRecord]) -> Result<()> {
    let with_pairs = match records.iter().filter(|r| r.n_pairs.is_some()).count() {
        0 => false,
        n if n == records.len() => true,
        _ => {
            return Err(Error::DegenerateData(
                "emission counts present on some rows but not all".into(),
            ))
        }
    };
    let mut out = String::new();
    let _ = writeln!(out, "# schema: {SCHEMA_VERSION}");
    if let Some(generator) = &meta.generator {
        let _ = writeln!(out, "# generator: {generator}");
    }
    if let Some(seed) = meta.seed {
        let _ = writeln!(out, "# seed: {seed}");
    }
    if let Some(mode) = &meta.mode {
        let _ = writeln!(out, "# mode: {mode}");
    }
    for (key, value) in &meta.extra {
        let _ = writeln!(out, "# {key}: {value}");
    }
    out.push_str(&COLUMNS.join(","));
    if with_pairs {
        out.push_str(",n_pairs");
    }
    out.push('\n');
    for r in records {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.alpha_deg, r.beta_deg, r.c_pp, r.c_pm, r.c_mp, r.c_mm, r.s_ap, r.s_am, r.s_bp,
            r.s_bm
        );
        if let Some(n) = r.n_pairs {
            let _ = write!(out, ",{n}");
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { path: path.display().to_string(), line, msg: msg.into() }
}

/// Read and validate a dataset file.
pub fn parse_dataset(path: &Path) -> Result<(DatasetMeta, Vec<CountRecord>)> {
    let content = fs::read_to_string(path)?;
    parse_dataset_str(&content, path)
}

fn parse_dataset_str(content: &str, path: &Path) -> Result<(DatasetMeta, Vec<CountRecord>)> {
    let mut meta = DatasetMeta::default();
    let mut saw_schema = false;
    let mut with_pairs = false;
    let mut saw_header = false;
    let mut records: Vec<CountRecord> = Vec::new();

    for (idx, raw) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if saw_header {
                return Err(parse_err(path, line_no, "metadata after the column header"));
            }
            let Some((key, value)) = rest.split_once(':') else {
                continue; // free-form comment
            };
            let (key, value) = (key.trim(), value.trim());
            if !saw_schema {
                if key != "schema" {
                    return Err(parse_err(
                        path,
                        line_no,
                        format!("first metadata line must declare the schema, found '{key}'"),
                    ));
                }
                if value.parse::<u32>() != Ok(SCHEMA_VERSION) {
                    return Err(Error::UnsupportedVersion {
                        path: path.display().to_string(),
                        found: value.to_string(),
                        supported: SCHEMA_VERSION,
                    });
                }
                saw_schema = true;
                continue;
            }
            match key {
                "generator" => meta.generator = Some(value.to_string()),
                "seed" => {
                    meta.seed = Some(value.parse().map_err(|_| {
                        parse_err(path, line_no, format!("invalid seed '{value}'"))
                    })?)
                }
                "mode" => meta.mode = Some(value.to_string()),
                _ => meta.extra.push((key.to_string(), value.to_string())),
            }
            continue;
        }
        if !saw_schema {
            return Err(parse_err(path, line_no, "missing '# schema:' metadata line"));
        }
        if !saw_header {
            let base = COLUMNS.join(",");
            with_pairs = match line {
                l if l == base => false,
                l if l == format!("{base},n_pairs") => true,
                other => {
                    return Err(parse_err(
                        path,
                        line_no,
                        format!("unrecognized column header '{other}'"),
                    ))
                }
            };
            saw_header = true;
            continue;
        }

        let fields: Vec<&str> = line.split(',').collect();
        let expected = COLUMNS.len() + usize::from(with_pairs);
        if fields.len() != expected {
            return Err(parse_err(
                path,
                line_no,
                format!("expected {expected} columns, found {}", fields.len()),
            ));
        }
        let angle = |i: usize| -> Result<f64> {
            let v: f64 = fields[i].parse().map_err(|_| {
                parse_err(path, line_no, format!("column {}: invalid angle '{}'", COLUMNS[i], fields[i]))
            })?;
            if !v.is_finite() {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("column {}: non-finite angle '{}'", COLUMNS[i], fields[i]),
                ));
            }
            Ok(v)
        };
        let count = |i: usize| -> Result<u64> {
            fields[i].parse().map_err(|_| {
                parse_err(
                    path,
                    line_no,
                    format!(
                        "column {}: counts must be non-negative integers, found '{}'",
                        COLUMNS[i], fields[i]
                    ),
                )
            })
        };
        let rec = CountRecord {
            alpha_deg: angle(0)?,
            beta_deg: angle(1)?,
            c_pp: count(2)?,
            c_pm: count(3)?,
            c_mp: count(4)?,
            c_mm: count(5)?,
            s_ap: count(6)?,
            s_am: count(7)?,
            s_bp: count(8)?,
            s_bm: count(9)?,
            n_pairs: if with_pairs {
                Some(fields[10].parse().map_err(|_| {
                    parse_err(
                        path,
                        line_no,
                        format!("column n_pairs: counts must be non-negative integers, found '{}'", fields[10]),
                    )
                })?)
            } else {
                None
            },
        };
        if records.iter().any(|r| {
            (r.alpha_deg - rec.alpha_deg).abs() <= ANGLE_TOL_DEG
                && (r.beta_deg - rec.beta_deg).abs() <= ANGLE_TOL_DEG
        }) {
            return Err(Error::DuplicateSetting {
                path: path.display().to_string(),
                line: line_no,
                alpha_deg: rec.alpha_deg,
                beta_deg: rec.beta_deg,
            });
        }
        records.push(rec);
    }

    if !saw_schema {
        return Err(parse_err(path, 1, "empty file (expected '# schema:' metadata)"));
    }
    if !saw_header {
        return Err(parse_err(path, content.lines().count().max(1), "missing column header"));
    }
    Ok((meta, records))
}
