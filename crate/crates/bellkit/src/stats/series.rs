//! The composite coincidence statistic and the estimators built on it.

use super::{group_scans, AngleScan, VerdictThresholds, ANGLE_TOL_DEG};
use crate::error::{Error, Result};
use crate::lhv::{invert_eta_for_nu, reduce_phi};
use crate::sim::CountRecord;

/// One setting's value of the composite statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FPoint {
    pub alpha_deg: f64,
    pub beta_deg: f64,
    /// Raw angle difference `alpha - beta`, degrees.
    pub phi_deg: f64,
    /// The difference folded into `[-90°, 90°]`.
    pub phi_reduced_deg: f64,
    pub f: f64,
    pub sigma_f: f64,
    /// Setting that contributed the correlated channels.
    pub companion_alpha_deg: f64,
    pub companion_beta_deg: f64,
}

/// The composite statistic over one scan.
#[derive(Debug, Clone, PartialEq)]
pub struct FSeries {
    pub beta_deg: f64,
    pub points: Vec<FPoint>,
}

struct ScanIndex<'a> {
    scans: &'a [AngleScan],
    means: Vec<[f64; 4]>,
}

impl<'a> ScanIndex<'a> {
    fn build(scans: &'a [AngleScan]) -> Self {
        let means = scans.iter().map(AngleScan::singles_means).collect();
        Self { scans, means }
    }

    fn scan_at(&self, beta_deg: f64) -> Option<usize> {
        self.scans.iter().position(|s| (s.beta_deg - beta_deg).abs() <= ANGLE_TOL_DEG)
    }

    fn record_at(&self, alpha_deg: f64, beta_deg: f64) -> Option<(usize, &CountRecord)> {
        let idx = self.scan_at(beta_deg)?;
        let rec = self.scans[idx]
            .rows
            .iter()
            .find(|r| (r.alpha_deg - alpha_deg).abs() <= ANGLE_TOL_DEG)?;
        Some((idx, rec))
    }
}

fn ratio_term(count: u64, mean_a: f64, mean_b: f64, context: &str) -> Result<(f64, f64)> {
    let den = mean_a * mean_b;
    if !(den > 0.0) {
        return Err(Error::DegenerateData(format!(
            "zero singles average normalizing {context}"
        )));
    }
    // Unit variance floor keeps empty channels from claiming certainty.
    Ok((count as f64 / den, (count.max(1)) as f64 / (den * den)))
}

/// Build the composite statistic for every scan that supports it.
///
/// A setting enters with its `+-` and `-+` counts normalized by its own
/// scan's singles averages, plus the `++` and `--` counts of the setting
/// shifted by (+45°, -45°) — or (-45°, +45°) when only that one exists —
/// normalized by that companion scan's averages. Settings without either
/// companion are left out; an error is returned only if nothing remains.
pub fn build_f_series(records: &[CountRecord]) -> Result<Vec<FSeries>> {
    let scans = group_scans(records);
    let index = ScanIndex::build(&scans);

    let mut out = Vec::new();
    let mut first_missing: Option<(f64, f64)> = None;
    for (scan_idx, scan) in scans.iter().enumerate() {
        let mut points = Vec::new();
        for row in &scan.rows {
            let companion = index
                .record_at(row.alpha_deg + 45.0, row.beta_deg - 45.0)
                .or_else(|| index.record_at(row.alpha_deg - 45.0, row.beta_deg + 45.0));
            let Some((comp_idx, comp)) = companion else {
                first_missing
                    .get_or_insert((row.alpha_deg + 45.0, row.beta_deg - 45.0));
                continue;
            };
            let m = &index.means[scan_idx];
            let mc = &index.means[comp_idx];
            let (t1, v1) = ratio_term(row.c_pm, m[0], m[3], "the +- channel")?;
            let (t2, v2) = ratio_term(row.c_mp, m[1], m[2], "the -+ channel")?;
            let (t3, v3) = ratio_term(comp.c_pp, mc[0], mc[2], "the ++ channel")?;
            let (t4, v4) = ratio_term(comp.c_mm, mc[1], mc[3], "the -- channel")?;
            let phi_deg = row.alpha_deg - row.beta_deg;
            points.push(FPoint {
                alpha_deg: row.alpha_deg,
                beta_deg: row.beta_deg,
                phi_deg,
                phi_reduced_deg: reduce_phi(phi_deg.to_radians()).to_degrees(),
                f: t1 + t2 + t3 + t4,
                sigma_f: (v1 + v2 + v3 + v4).sqrt(),
                companion_alpha_deg: comp.alpha_deg,
                companion_beta_deg: comp.beta_deg,
            });
        }
        if !points.is_empty() {
            points.sort_by(|a, b| {
                a.phi_reduced_deg.partial_cmp(&b.phi_reduced_deg).expect("finite")
            });
            out.push(FSeries { beta_deg: scan.beta_deg, points });
        }
    }
    if out.is_empty() {
        let (alpha_deg, beta_deg) = first_missing.unwrap_or((f64::NAN, f64::NAN));
        return Err(Error::MissingSetting {
            alpha_deg,
            beta_deg,
            needed_for: "the composite statistic (no setting has a 45°-shifted companion)",
        });
    }
    Ok(out)
}

/// Correlation of one record's coincidence counts,
/// `(c++ + c-- - c+- - c-+) / total`.
///
/// For the source model this tracks `-V cos 2phi` up to a term of order
/// the squared source asymmetry.
pub fn compute_u(record: &CountRecord) -> Result<f64> {
    let [pp, pm, mp, mm] = record.coincidences().map(|c| c as f64);
    let total = pp + pm + mp + mm;
    if total == 0.0 {
        return Err(Error::DegenerateData(format!(
            "no coincidences at ({}, {})",
            record.alpha_deg, record.beta_deg
        )));
    }
    Ok((pp + mm - pm - mp) / total)
}

/// Curvature verdict for one scan. See [`compute_nu`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuResult {
    pub beta_deg: f64,
    /// Composite statistic interpolated to 0°, 45° and 90°.
    pub f0: f64,
    pub f45: f64,
    pub f90: f64,
    /// Visibility estimate `(f0 - f90) / (f0 + f90)`.
    pub v_prime: f64,
    pub sigma_v_prime: f64,
    /// Curvature `(f0 + f90 - 2 f45) / (f0 + f90 + 2 f45)`: zero for any
    /// plain cosine law.
    pub nu: f64,
    pub sigma_nu: f64,
    /// `nu / sigma_nu`, signed.
    pub deviation_sigma: f64,
    /// Efficiency a hidden-variable model would need to produce the
    /// observed curvature at the observed visibility.
    pub eta_star: f64,
    pub sigma_eta_star: f64,
    /// Set when the curvature exceeds what any such model reaches by
    /// `eta = 1/2`, where `eta_star` is capped.
    pub eta_star_capped: bool,
    /// `|nu| < 3 sigma_nu`.
    pub consistent_with_qm: bool,
    /// `eta_star` reaches the first efficiency threshold within one sigma.
    pub lhv1_compatible: bool,
    /// Same against the second threshold.
    pub lhv2_compatible: bool,
}

/// Widest interpolation window around the target angles, degrees.
const TARGET_WINDOW_DEG: f64 = 1.5;

fn estimate_at(series: &FSeries, target: f64) -> Result<(f64, f64)> {
    let dist = |p: &FPoint| (p.phi_reduced_deg.abs() - target).abs();
    let d_min = series
        .points
        .iter()
        .map(dist)
        .fold(f64::INFINITY, f64::min);
    if d_min <= TARGET_WINDOW_DEG {
        let picked: Vec<&FPoint> = series
            .points
            .iter()
            .filter(|p| dist(p) <= d_min + 1e-9)
            .collect();
        let k = picked.len() as f64;
        let f = picked.iter().map(|p| p.f).sum::<f64>() / k;
        let var = picked.iter().map(|p| p.sigma_f * p.sigma_f).sum::<f64>() / (k * k);
        return Ok((f, var.sqrt()));
    }
    // No point close enough: fall back to the mean of the nearest points
    // on either side, which is first-order exact for a symmetric straddle.
    let below = series
        .points
        .iter()
        .filter(|p| p.phi_reduced_deg.abs() < target)
        .max_by(|a, b| a.phi_reduced_deg.abs().partial_cmp(&b.phi_reduced_deg.abs()).unwrap());
    let above = series
        .points
        .iter()
        .filter(|p| p.phi_reduced_deg.abs() > target)
        .min_by(|a, b| a.phi_reduced_deg.abs().partial_cmp(&b.phi_reduced_deg.abs()).unwrap());
    match (below, above) {
        (Some(b), Some(a)) => {
            let f = 0.5 * (b.f + a.f);
            let sigma = 0.5 * (b.sigma_f * b.sigma_f + a.sigma_f * a.sigma_f).sqrt();
            Ok((f, sigma))
        }
        _ => Err(Error::MissingAngle { target_phi_deg: target, nearest_deg: d_min }),
    }
}

/// Extract the curvature statistic of one scan and judge it against the
/// hidden-variable efficiency thresholds.
pub fn compute_nu(series: &FSeries, thresholds: &VerdictThresholds) -> Result<NuResult> {
    let (f0, s0) = estimate_at(series, 0.0)?;
    let (f45, s45) = estimate_at(series, 45.0)?;
    let (f90, s90) = estimate_at(series, 90.0)?;

    let den_v = f0 + f90;
    if !(den_v > 0.0) {
        return Err(Error::DegenerateData("non-positive composite statistic".into()));
    }
    let v_prime = (f0 - f90) / den_v;
    let dv0 = 2.0 * f90 / (den_v * den_v);
    let dv90 = 2.0 * f0 / (den_v * den_v);
    let sigma_v_prime = ((dv0 * s0).powi(2) + (dv90 * s90).powi(2)).sqrt();

    let den = f0 + f90 + 2.0 * f45;
    let nu = (f0 + f90 - 2.0 * f45) / den;
    let d_outer = 4.0 * f45 / (den * den);
    let d_inner = 4.0 * (f0 + f90) / (den * den);
    let sigma_nu =
        ((d_outer * s0).powi(2) + (d_outer * s90).powi(2) + (d_inner * s45).powi(2)).sqrt();
    if !(sigma_nu > 0.0) {
        return Err(Error::DegenerateData("curvature statistic has zero variance".into()));
    }

    let v_for_inversion = v_prime.clamp(1e-3, 1.0);
    let invert = |target: f64| -> Result<(f64, bool)> {
        match invert_eta_for_nu(target.max(0.0), v_for_inversion) {
            Ok(eta) => Ok((eta, false)),
            Err(Error::NoSolution { .. }) => Ok((0.5, true)),
            Err(e) => Err(e),
        }
    };
    let (eta_star, eta_star_capped) = invert(nu)?;
    let (eta_hi, _) = invert(nu + sigma_nu)?;
    let (eta_lo, _) = invert(nu - sigma_nu)?;
    let sigma_eta_star = 0.5 * (eta_hi - eta_lo);

    Ok(NuResult {
        beta_deg: series.beta_deg,
        f0,
        f45,
        f90,
        v_prime,
        sigma_v_prime,
        nu,
        sigma_nu,
        deviation_sigma: nu / sigma_nu,
        eta_star,
        sigma_eta_star,
        eta_star_capped,
        consistent_with_qm: nu.abs() < 3.0 * sigma_nu,
        lhv1_compatible: eta_star >= thresholds.lhv1_eta - sigma_eta_star,
        lhv2_compatible: eta_star >= thresholds.lhv2_eta - sigma_eta_star,
    })
}

/// Estimate the four arrival efficiencies from one scan's singles,
/// `eta_x = 2 <s_x> / r0`, order `a+ a- b+ b-`.
///
/// Averaging over the scan's angles washes out the `cos 2alpha`
/// modulation when the angles cover a half-turn uniformly.
pub fn estimate_efficiencies(scan: &AngleScan, r0: f64) -> Result<[f64; 4]> {
    if !(r0 > 0.0) {
        return Err(Error::ParamDomain {
            field: "r0".into(),
            value: r0,
            requirement: "> 0",
        });
    }
    if scan.rows.is_empty() {
        return Err(Error::InsufficientData {
            what: "settings in the scan",
            needed: 1,
            got: 0,
            unit: "rows",
        });
    }
    let means = scan.singles_means();
    for (mean, name) in means.iter().zip(["a+", "a-", "b+", "b-"]) {
        if *mean == 0.0 {
            return Err(Error::DegenerateData(format!(
                "singles channel {name} is empty across the whole scan"
            )));
        }
    }
    Ok(means.map(|m| 2.0 * m / r0))
}
