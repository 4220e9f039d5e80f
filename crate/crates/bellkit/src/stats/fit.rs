//! Model fits on composite-statistic series.

use std::f64::consts::{FRAC_PI_2, PI};

use super::{FSeries, ANGLE_TOL_DEG};
use crate::error::{Error, Result};
use crate::lhv::{clamp_boundary_eta, solve_epsilon};

/// Cosine-law fit `f = a (1 + v cos 2phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QmFit {
    pub v: f64,
    pub sigma_v: f64,
    /// Constant term; `4/a` estimates the emissions behind each setting.
    pub a: f64,
    pub sigma_a: f64,
    /// Emissions-per-setting estimate implied by the overall scale.
    pub r0: f64,
    pub chi2: f64,
    pub dof: usize,
}

/// Dead-zone-model fit `f = a [1 + v' cos 2phi + g(eta, eps) hinge(phi)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LhvFit {
    pub eta: f64,
    pub sigma_eta: f64,
    pub epsilon: f64,
    /// The dead zone closed entirely; the fit collapsed to the cosine law
    /// and `eta` marks the boundary efficiency below which that happens.
    pub epsilon_clamped: bool,
    pub v_prime: f64,
    pub a: f64,
    pub chi2: f64,
    pub dof: usize,
    /// Whether any point samples the fitted hinge region at all.
    pub hinge_observable: bool,
}

/// Residual spread of a single channel against its own cosine law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaFit {
    /// Root-mean-square residual relative to the fitted mean rate.
    pub delta: f64,
    pub sigma_delta: f64,
    pub mean_rate: f64,
    pub visibility: f64,
}

/// Points in the shape the fits consume: reduced angle in radians,
/// value, weight.
struct Design {
    phi: Vec<f64>,
    y: Vec<f64>,
    w: Vec<f64>,
}

impl Design {
    fn from_series(series: &FSeries) -> Self {
        let mut d = Design {
            phi: Vec::with_capacity(series.points.len()),
            y: Vec::with_capacity(series.points.len()),
            w: Vec::with_capacity(series.points.len()),
        };
        for p in &series.points {
            d.phi.push(p.phi_reduced_deg.to_radians());
            d.y.push(p.f);
            d.w.push(1.0 / (p.sigma_f * p.sigma_f));
        }
        d
    }

    fn distinct_angles(&self) -> usize {
        let mut sorted: Vec<f64> = self.phi.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite angle"));
        let tol = ANGLE_TOL_DEG.to_radians();
        1 + sorted.windows(2).filter(|p| p[1] - p[0] > tol).count()
    }

    fn max_abs_phi(&self) -> f64 {
        self.phi.iter().fold(0.0, |m, p| m.max(p.abs()))
    }
}

struct Wls2 {
    a: f64,
    b: f64,
    var_a: f64,
    var_b: f64,
    cov_ab: f64,
    chi2: f64,
}

/// Exact two-regressor weighted least squares, `y = a u1 + b u2`.
fn wls2(u1: &[f64], u2: &[f64], y: &[f64], w: &[f64]) -> Result<Wls2> {
    let mut s11 = 0.0;
    let mut s12 = 0.0;
    let mut s22 = 0.0;
    let mut t1 = 0.0;
    let mut t2 = 0.0;
    for i in 0..y.len() {
        s11 += w[i] * u1[i] * u1[i];
        s12 += w[i] * u1[i] * u2[i];
        s22 += w[i] * u2[i] * u2[i];
        t1 += w[i] * u1[i] * y[i];
        t2 += w[i] * u2[i] * y[i];
    }
    let det = s11 * s22 - s12 * s12;
    if !(det > 1e-12 * s11 * s22) {
        return Err(Error::DegenerateData(
            "normal equations are singular (regressors do not separate)".into(),
        ));
    }
    let a = (s22 * t1 - s12 * t2) / det;
    let b = (s11 * t2 - s12 * t1) / det;
    let chi2 = (0..y.len())
        .map(|i| {
            let r = y[i] - a * u1[i] - b * u2[i];
            w[i] * r * r
        })
        .sum();
    Ok(Wls2 { a, b, var_a: s22 / det, var_b: s11 / det, cov_ab: -s12 / det, chi2 })
}

fn fit_qm_design(d: &Design) -> Result<QmFit> {
    let n = d.y.len();
    let distinct = d.distinct_angles();
    if distinct < 3 {
        return Err(Error::InsufficientData {
            what: "distinct angle differences for the cosine fit",
            needed: 3,
            got: distinct,
            unit: "angles",
        });
    }
    let ones = vec![1.0; n];
    let cos2: Vec<f64> = d.phi.iter().map(|p| (2.0 * p).cos()).collect();
    let fit = wls2(&ones, &cos2, &d.y, &d.w)?;
    if !(fit.a > 0.0) {
        return Err(Error::DegenerateData(format!(
            "non-positive mean level {} in the cosine fit",
            fit.a
        )));
    }
    let (a, b) = (fit.a, fit.b);
    let v = b / a;
    let var_v = fit.var_b / (a * a) + b * b * fit.var_a / a.powi(4)
        - 2.0 * b * fit.cov_ab / a.powi(3);
    Ok(QmFit {
        v,
        sigma_v: var_v.max(0.0).sqrt(),
        a,
        sigma_a: fit.var_a.sqrt(),
        r0: 4.0 / a,
        chi2: fit.chi2,
        dof: n - 2,
    })
}

/// Weighted least-squares fit of the cosine law to one series.
pub fn fit_qm(series: &FSeries) -> Result<QmFit> {
    fit_qm_design(&Design::from_series(series))
}

/// Outcome of evaluating one candidate efficiency.
enum Candidate {
    /// The dead-zone equation has no solution at this efficiency.
    Infeasible,
    /// The dead zone closed; the model equals the cosine law here.
    Clamped { chi2: f64 },
    Open { chi2: f64, a: f64, v: f64, epsilon: f64 },
}

impl Candidate {
    fn chi2(&self) -> f64 {
        match self {
            Candidate::Infeasible => f64::INFINITY,
            Candidate::Clamped { chi2 } | Candidate::Open { chi2, .. } => *chi2,
        }
    }
}

const SELF_CONSISTENCY_PROBES: usize = 64;
const FIXED_POINT_TOL: f64 = 1e-8;
const V_FLOOR: f64 = 1e-6;
const ETA_GRID_STEP: f64 = 0.01;
const ETA_REFINE_TOL: f64 = 1e-4;
const INVPHI: f64 = 0.618_033_988_749_894_9;

/// Evaluate the dead-zone model at a fixed efficiency. The two linear
/// parameters come from weighted least squares given an assumed
/// visibility (which sets the dead-zone width), and the visibility they
/// imply must equal the assumed one. Bisection drives that residual to
/// zero: a plain fixed-point pass turns near-neutral where the dead zone
/// is about to close and stalls or cycles, while the residual always
/// changes sign across `[V_FLOOR, 1]` thanks to the clamps at both ends.
fn eval_candidate(d: &Design, eta: f64) -> Result<Candidate> {
    struct Probe {
        fit: Wls2,
        epsilon: f64,
        residual: f64,
    }
    let probe = |v: f64| -> Result<Option<Probe>> {
        let epsilon = match solve_epsilon(v, eta) {
            Ok(e) => e,
            Err(Error::SolverBracket { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let gain = 32.0 * epsilon.powi(3) / (3.0 * PI * PI * eta * eta);
        let u1: Vec<f64> = d
            .phi
            .iter()
            .map(|p| 1.0 + gain * (p.abs() - FRAC_PI_2 + FRAC_PI_2 * eta).max(0.0))
            .collect();
        let cos2: Vec<f64> = d.phi.iter().map(|p| (2.0 * p).cos()).collect();
        let fit = wls2(&u1, &cos2, &d.y, &d.w)?;
        if !(fit.a > 0.0) {
            return Ok(None);
        }
        let residual = (fit.b / fit.a).clamp(V_FLOOR, 1.0) - v;
        Ok(Some(Probe { fit, epsilon, residual }))
    };
    let finish = |p: Probe, v: f64| {
        if p.epsilon == 0.0 {
            Candidate::Clamped { chi2: p.fit.chi2 }
        } else {
            Candidate::Open { chi2: p.fit.chi2, a: p.fit.a, v, epsilon: p.epsilon }
        }
    };

    let (mut lo, mut hi) = (V_FLOOR, 1.0_f64);
    let Some(at_lo) = probe(lo)? else { return Ok(Candidate::Infeasible) };
    if at_lo.residual <= FIXED_POINT_TOL {
        // The data do not support any positive visibility.
        return Ok(finish(at_lo, lo));
    }
    let Some(at_hi) = probe(hi)? else { return Ok(Candidate::Infeasible) };
    if at_hi.residual >= -FIXED_POINT_TOL {
        // Self-consistency pins the visibility at its ceiling.
        return Ok(finish(at_hi, hi));
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..SELF_CONSISTENCY_PROBES {
        mid = 0.5 * (lo + hi);
        let Some(at_mid) = probe(mid)? else { return Ok(Candidate::Infeasible) };
        if at_mid.residual.abs() <= FIXED_POINT_TOL || hi - lo <= 1e-13 {
            return Ok(finish(at_mid, mid));
        }
        if at_mid.residual > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // 64 halvings shrink the bracket below any representable width.
    let at_mid = probe(mid)?.expect("probed twice already");
    Ok(finish(at_mid, mid))
}

/// Where the one-sided chi2(eta) profile crosses `target`, if it does so
/// between `from` (exclusive) and the domain edge.
fn profile_crossing(d: &Design, target: f64, from: f64, step: f64) -> Result<Option<f64>> {
    let edge = if step > 0.0 { 0.99 } else { 0.01 };
    let mut prev = from;
    loop {
        let next = if step > 0.0 { (prev + step).min(edge) } else { (prev + step).max(edge) };
        if (next - prev).abs() < 1e-12 {
            return Ok(None);
        }
        if eval_candidate(d, next)?.chi2() >= target {
            let (mut lo, mut hi) = (prev, next);
            for _ in 0..30 {
                let mid = 0.5 * (lo + hi);
                if eval_candidate(d, mid)?.chi2() >= target {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(Some(0.5 * (lo + hi)));
        }
        prev = next;
    }
}

/// Fit the dead-zone model by a grid-plus-golden-section search over the
/// efficiency, with the dead-zone width tied to the running visibility.
///
/// The cosine law is nested at zero width, so the returned chi2 never
/// exceeds [`fit_qm`]'s. On data with no hinge signature the fit lands on
/// the clamped plateau and reports the boundary efficiency for the fitted
/// visibility. A series whose angles cannot reach any candidate's hinge
/// region skips the search and degenerates to the cosine fit outright.
pub fn fit_lhv(series: &FSeries) -> Result<LhvFit> {
    let d = Design::from_series(series);
    let n = d.y.len();
    let distinct = d.distinct_angles();
    if distinct < 4 {
        return Err(Error::InsufficientData {
            what: "distinct angle differences for the dead-zone fit",
            needed: 4,
            got: distinct,
            unit: "angles",
        });
    }
    let qm = fit_qm_design(&d)?;
    let dof = n.saturating_sub(3);

    // Hinge support at the widest candidate's dead zone.
    if d.max_abs_phi() <= FRAC_PI_2 * (1.0 - 0.99) {
        return Ok(LhvFit {
            eta: 0.0,
            sigma_eta: f64::INFINITY,
            epsilon: 0.0,
            epsilon_clamped: true,
            v_prime: qm.v,
            a: qm.a,
            chi2: qm.chi2,
            dof,
            hinge_observable: false,
        });
    }

    let eval = |eta: f64| eval_candidate(&d, eta);

    let mut best_open: Option<(f64, f64)> = None; // (chi2, eta)
    for k in 1..=99 {
        let eta = ETA_GRID_STEP * k as f64;
        if let Candidate::Open { chi2, .. } = eval(eta)? {
            if best_open.is_none_or(|(c, _)| chi2 < c) {
                best_open = Some((chi2, eta));
            }
        }
    }

    let open_minimum = match best_open {
        Some((chi2, eta)) if chi2 < qm.chi2 => Some((chi2, eta)),
        _ => None,
    };

    let Some((mut best_chi2, mut best_eta)) = open_minimum else {
        // Plateau minimum: every open candidate loses to the plain cosine
        // law, so report the clamp boundary as the representative point.
        let eta = match clamp_boundary_eta(qm.v.min(1.0)) {
            Ok(eta) => eta,
            // Visibility so low the dead zone never opens anywhere.
            Err(Error::NoSolution { .. }) => 0.99,
            Err(e) => return Err(e),
        };
        let up = profile_crossing(&d, qm.chi2 + 1.0, eta, ETA_GRID_STEP)?;
        return Ok(LhvFit {
            eta,
            sigma_eta: up.map_or(f64::INFINITY, |c| c - eta),
            epsilon: 0.0,
            epsilon_clamped: true,
            v_prime: qm.v,
            a: qm.a,
            chi2: qm.chi2,
            dof,
            hinge_observable: d.max_abs_phi() > FRAC_PI_2 * (1.0 - eta),
        });
    };

    // Golden-section refinement in the bracketing grid cells.
    let mut lo = (best_eta - ETA_GRID_STEP).max(0.01);
    let mut hi = (best_eta + ETA_GRID_STEP).min(0.99);
    let mut track = |eta: f64| -> Result<f64> {
        let c = eval(eta)?;
        let chi2 = c.chi2();
        if chi2 < best_chi2 {
            best_chi2 = chi2;
            best_eta = eta;
        }
        Ok(chi2)
    };
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut f1 = track(x1)?;
    let mut f2 = track(x2)?;
    while hi - lo > ETA_REFINE_TOL {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            f1 = track(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            f2 = track(x2)?;
        }
    }

    let Candidate::Open { chi2, a, v, epsilon } = eval(best_eta)? else {
        return Err(Error::Convergence {
            what: "dead-zone profile minimum drifted off the open branch",
            iterations: SELF_CONSISTENCY_PROBES,
            trail: vec![best_eta],
        });
    };

    let target = chi2 + 1.0;
    let up = profile_crossing(&d, target, best_eta, ETA_GRID_STEP)?;
    let down = profile_crossing(&d, target, best_eta, -ETA_GRID_STEP)?;
    let sigma_eta = match (down, up) {
        (Some(l), Some(u)) => 0.5 * ((best_eta - l) + (u - best_eta)),
        (Some(l), None) => best_eta - l,
        (None, Some(u)) => u - best_eta,
        (None, None) => f64::INFINITY,
    };

    Ok(LhvFit {
        eta: best_eta,
        sigma_eta,
        epsilon,
        epsilon_clamped: false,
        v_prime: v,
        a,
        chi2,
        dof,
        hinge_observable: d.max_abs_phi() > FRAC_PI_2 * (1.0 - best_eta),
    })
}

/// Fit one channel's rates to `p + q cos 2phi` (unweighted) and report
/// the root-mean-square relative residual.
///
/// `sigma_delta` propagates Poisson errors (`max(rate, 1)` per point)
/// through the residuals at a frozen fit.
pub fn fit_delta(phi_deg: &[f64], rates: &[f64]) -> Result<DeltaFit> {
    let n = phi_deg.len();
    if n != rates.len() || n < 3 {
        return Err(Error::InsufficientData {
            what: "points for the residual-spread fit",
            needed: 3,
            got: n.min(rates.len()),
            unit: "points",
        });
    }
    let ones = vec![1.0; n];
    let cos2: Vec<f64> = phi_deg.iter().map(|p| (2.0 * p.to_radians()).cos()).collect();
    let w = vec![1.0; n];
    let fit = wls2(&ones, &cos2, rates, &w)?;
    if !(fit.a > 0.0) {
        return Err(Error::DegenerateData(format!(
            "non-positive mean rate {} in the residual-spread fit",
            fit.a
        )));
    }
    let residuals: Vec<f64> = (0..n)
        .map(|i| fit.a + fit.b * cos2[i] - rates[i])
        .collect();
    let mean_sq = residuals.iter().map(|r| r * r).sum::<f64>() / n as f64;
    let delta = mean_sq.sqrt() / fit.a;
    // Below numerical zero the propagated error degenerates to noise.
    let sigma_delta = if delta < 1e-12 {
        0.0
    } else {
        let scale = n as f64 * delta * fit.a * fit.a;
        residuals
            .iter()
            .zip(rates)
            .map(|(r, y)| (r / scale).powi(2) * y.max(1.0))
            .sum::<f64>()
            .sqrt()
    };
    Ok(DeltaFit { delta, sigma_delta, mean_rate: fit.a, visibility: fit.b / fit.a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lhv::{lhv_probability, LhvParams};
    use crate::stats::FPoint;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn series_of(f_of_phi_deg: impl Fn(f64) -> f64, phis: &[f64], sigma: f64) -> FSeries {
        FSeries {
            beta_deg: 0.0,
            points: phis
                .iter()
                .map(|&phi| FPoint {
                    alpha_deg: phi,
                    beta_deg: 0.0,
                    phi_deg: phi,
                    phi_reduced_deg: phi,
                    f: f_of_phi_deg(phi),
                    sigma_f: sigma,
                    companion_alpha_deg: phi + 45.0,
                    companion_beta_deg: -45.0,
                })
                .collect(),
        }
    }

    fn cosine(a: f64, v: f64) -> impl Fn(f64) -> f64 {
        move |phi: f64| a * (1.0 + v * (2.0 * phi.to_radians()).cos())
    }

    #[test]
    fn cosine_fit_recovers_noiseless_inputs_exactly() {
        let phis: Vec<f64> = (0..=6).map(|k| 15.0 * k as f64).collect();
        let fit = fit_qm(&series_of(cosine(0.25, 0.95), &phis, 1e-3)).unwrap();
        assert_relative_eq!(fit.v, 0.95, max_relative = 1e-10);
        assert_relative_eq!(fit.a, 0.25, max_relative = 1e-10);
        assert_relative_eq!(fit.r0, 16.0, max_relative = 1e-10);
        assert!(fit.chi2 < 1e-12);
        assert_eq!(fit.dof, 5);
        assert!(fit.sigma_v > 0.0);
    }

    #[test]
    fn cosine_fit_needs_three_distinct_angles() {
        let fit = fit_qm(&series_of(cosine(0.25, 0.9), &[0.0, 0.0, 90.0], 1e-3));
        assert!(matches!(fit, Err(Error::InsufficientData { got: 2, .. })));
    }

    #[test]
    fn cosine_fit_sigma_scales_with_noise() {
        let phis: Vec<f64> = (0..=6).map(|k| 15.0 * k as f64).collect();
        let f1 = fit_qm(&series_of(cosine(0.25, 0.9), &phis, 1e-3)).unwrap();
        let f2 = fit_qm(&series_of(cosine(0.25, 0.9), &phis, 2e-3)).unwrap();
        assert_relative_eq!(f2.sigma_v, 2.0 * f1.sigma_v, max_relative = 1e-10);
        assert_relative_eq!(f2.v, f1.v, max_relative = 1e-12);
    }

    #[test]
    fn dead_zone_fit_recovers_generating_parameters() {
        let params = LhvParams::new(0.976, 0.225).unwrap();
        let phis: Vec<f64> = (0..=18).map(|k| 5.0 * k as f64).collect();
        let series = series_of(
            |phi| 2.0 * lhv_probability(phi.to_radians(), &params),
            &phis,
            1e-4,
        );
        let fit = fit_lhv(&series).unwrap();
        assert!(!fit.epsilon_clamped);
        assert!(fit.hinge_observable);
        assert_abs_diff_eq!(fit.eta, 0.225, epsilon = 1e-3);
        assert_abs_diff_eq!(fit.epsilon, params.epsilon, epsilon = 1e-3);
        // The efficiency search stops at 1e-4, which leaks into the
        // linear parameters at about that order.
        assert_relative_eq!(fit.v_prime, 0.976, max_relative = 1e-4);
        assert_relative_eq!(fit.a, 0.5, max_relative = 1e-4);
        assert!(fit.chi2 < 1e-2, "chi2 = {}", fit.chi2);
        assert!(fit.sigma_eta > 0.0 && fit.sigma_eta < 0.01);
    }

    #[test]
    fn dead_zone_fit_on_pure_cosine_collapses_to_boundary() {
        let phis: Vec<f64> = (0..=9).map(|k| 10.0 * k as f64).collect();
        let series = series_of(cosine(0.25, 0.95), &phis, 1e-5);
        let qm = fit_qm(&series).unwrap();
        let fit = fit_lhv(&series).unwrap();
        assert!(fit.epsilon_clamped);
        assert_eq!(fit.epsilon, 0.0);
        assert!((fit.chi2 - qm.chi2).abs() <= 1e-9);
        let boundary = clamp_boundary_eta(qm.v).unwrap();
        assert_abs_diff_eq!(fit.eta, boundary, epsilon = 1e-9);
        assert!(fit.sigma_eta > 0.0);
        assert!(fit.hinge_observable);
    }

    #[test]
    fn dead_zone_chi2_never_exceeds_cosine_chi2() {
        // Deterministic pseudo-noise on top of a cosine.
        let phis: Vec<f64> = (0..=12).map(|k| 7.5 * k as f64).collect();
        let bumpy = |phi: f64| {
            let base = cosine(0.25, 0.9)(phi);
            base * (1.0 + 0.01 * (phi * 0.7).sin())
        };
        let series = series_of(bumpy, &phis, 2e-3);
        let qm = fit_qm(&series).unwrap();
        let lhv = fit_lhv(&series).unwrap();
        assert!(lhv.chi2 <= qm.chi2 + 1e-9);
    }

    #[test]
    fn angles_short_of_every_hinge_skip_the_search() {
        let series = series_of(cosine(0.25, 0.9), &[0.0, 0.2, 0.4, 0.6], 1e-3);
        let fit = fit_lhv(&series).unwrap();
        assert!(!fit.hinge_observable);
        assert!(fit.epsilon_clamped);
        assert_eq!(fit.eta, 0.0);
        assert_eq!(fit.sigma_eta, f64::INFINITY);
    }

    #[test]
    fn dead_zone_fit_needs_four_distinct_angles() {
        let series = series_of(cosine(0.25, 0.9), &[0.0, 30.0, 90.0], 1e-3);
        assert!(matches!(
            fit_lhv(&series),
            Err(Error::InsufficientData { needed: 4, .. })
        ));
    }

    #[test]
    fn residual_spread_worked_example() {
        let fit = fit_delta(&[0.0, 45.0, 90.0, 135.0], &[30.0, 20.0, 10.0, 24.0]).unwrap();
        assert_relative_eq!(fit.mean_rate, 21.0, max_relative = 1e-12);
        assert_relative_eq!(fit.visibility, 10.0 / 21.0, max_relative = 1e-12);
        // Residuals (1, 1, 1, -3): RMS sqrt(3), relative to the mean 21.
        assert_relative_eq!(fit.delta, 3.0f64.sqrt() / 21.0, max_relative = 1e-12);
        assert_abs_diff_eq!(fit.sigma_delta, 0.114186464841, epsilon = 1e-9);
    }

    #[test]
    fn exact_cosine_has_zero_spread() {
        let phis = [0.0, 30.0, 60.0, 90.0];
        let rates: Vec<f64> = phis.iter().map(|&p| cosine(100.0, 0.8)(p)).collect();
        let fit = fit_delta(&phis, &rates).unwrap();
        assert_abs_diff_eq!(fit.delta, 0.0, epsilon = 1e-12);
        assert_eq!(fit.sigma_delta, 0.0);
    }

    #[test]
    fn residual_spread_rejects_degenerate_angles() {
        assert!(matches!(
            fit_delta(&[10.0, 10.0, 10.0], &[5.0, 6.0, 7.0]),
            Err(Error::DegenerateData(_))
        ));
        assert!(matches!(
            fit_delta(&[0.0, 45.0], &[5.0, 6.0]),
            Err(Error::InsufficientData { .. })
        ));
    }
}
