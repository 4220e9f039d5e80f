//! Local hidden-variable alternative with detection-window dead zones.
//!
//! The model reproduces a `1 + V' cos 2phi` coincidence law at visibility
//! `V'` while staying local, at the price of a small dead zone of angular
//! half-width `epsilon` in each analyzer's response and a hinge-shaped
//! excess near `|phi| = 90°` whose size is tied to the overall detection
//! efficiency `eta`. Everything here works with the reduced angle
//! difference, folded into `[-90°, 90°]`.
//!
//! `epsilon` is fixed by requiring the distorted response to reach `V'`
//! exactly; [`solve_epsilon`] solves that condition, [`epsilon_approx`]
//! is its small-`epsilon` closed form. The observable separating the two
//! families is `nu`, the curvature of the composite coincidence statistic
//! across 0°, 45° and 90°: exactly zero for any plain cosine law,
//! strictly positive here whenever `epsilon > 0`.

use crate::error::{Error, Result};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Fold an angle difference into `[-pi/2, pi/2]` (radians).
pub fn reduce_phi(phi: f64) -> f64 {
    phi - PI * (phi / PI).round()
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Squared sinc of the half detection window, `sinc^2(pi eta / 2)`:
/// the largest visibility the model reaches without a dead zone.
pub fn window_visibility_limit(eta: f64) -> f64 {
    let s = sinc(FRAC_PI_2 * eta);
    s * s
}

/// Left side of the dead-zone condition, as a function of `epsilon`.
///
/// Equals 1 at `epsilon = 0`, grows monotonically and diverges at
/// `epsilon = pi/4`.
pub fn window_equation_lhs(epsilon: f64) -> f64 {
    let e2 = 2.0 * epsilon;
    let num = PI - e2 + e2.sin() * e2.cos();
    let den = e2.cos() * (PI - e2 + e2.tan());
    num / den
}

/// Right side of the dead-zone condition: `V' / sinc^2(pi eta / 2)`.
pub fn window_equation_rhs(v_prime: f64, eta: f64) -> f64 {
    v_prime / window_visibility_limit(eta)
}

fn check_unit_interval(field: &'static str, x: f64) -> Result<()> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::ParamDomain {
            field: field.to_string(),
            value: x,
            requirement: "0 < value <= 1",
        });
    }
    Ok(())
}

/// Dead-zone half-width needed to reach visibility `v_prime` at detection
/// efficiency `eta`; zero if the window alone already suffices.
pub fn solve_epsilon(v_prime: f64, eta: f64) -> Result<f64> {
    check_unit_interval("v_prime", v_prime)?;
    check_unit_interval("eta", eta)?;
    let rhs = window_equation_rhs(v_prime, eta);
    if rhs <= 1.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0f64, FRAC_PI_4 - 1e-6);
    let (f_lo, f_hi) = (window_equation_lhs(lo) - rhs, window_equation_lhs(hi) - rhs);
    if f_lo > 0.0 || f_hi < 0.0 {
        return Err(Error::SolverBracket { lo, hi, f_lo, f_hi });
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if window_equation_lhs(mid) - rhs <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Leading-order closed form for the dead-zone half-width,
/// `sqrt((V' - sinc^2(pi eta / 2)) / 2)`, clamped at zero.
///
/// Underestimates [`solve_epsilon`] by a relative margin of about
/// `(1 - sinc(pi eta / 2)) + 2 epsilon / pi`: a few percent over the
/// efficiencies and visibilities this crate targets.
pub fn epsilon_approx(v_prime: f64, eta: f64) -> f64 {
    (0.5 * (v_prime - window_visibility_limit(eta))).max(0.0).sqrt()
}

/// Efficiency below which a given visibility needs no dead zone.
///
/// Solves `sinc^2(pi eta / 2) = v_prime`; errors when `v_prime` is below
/// the fully open window's visibility `4/pi^2`, which no `eta <= 1`
/// reaches.
pub fn clamp_boundary_eta(v_prime: f64) -> Result<f64> {
    check_unit_interval("v_prime", v_prime)?;
    if v_prime >= 1.0 {
        return Ok(0.0);
    }
    let floor = window_visibility_limit(1.0);
    if v_prime <= floor {
        return Err(Error::NoSolution { target: v_prime, lo: floor, hi: 1.0 });
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if window_visibility_limit(mid) >= v_prime {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Hidden-variable parameter set. `epsilon` is derived from the other two
/// unless supplied explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LhvParams {
    /// Visibility of the cosine part of the coincidence law.
    pub v_prime: f64,
    /// Overall detection efficiency.
    pub eta: f64,
    /// Dead-zone half-width in radians.
    pub epsilon: f64,
}

impl LhvParams {
    /// Parameters with `epsilon` fixed by the dead-zone condition.
    pub fn new(v_prime: f64, eta: f64) -> Result<Self> {
        let epsilon = solve_epsilon(v_prime, eta)?;
        Ok(Self { v_prime, eta, epsilon })
    }

    /// Parameters with an explicitly chosen `epsilon`.
    pub fn from_parts(v_prime: f64, eta: f64, epsilon: f64) -> Result<Self> {
        check_unit_interval("v_prime", v_prime)?;
        check_unit_interval("eta", eta)?;
        if !(0.0..FRAC_PI_4).contains(&epsilon) {
            return Err(Error::ParamDomain {
                field: "epsilon".to_string(),
                value: epsilon,
                requirement: "0 <= epsilon < pi/4",
            });
        }
        Ok(Self { v_prime, eta, epsilon })
    }

    /// Hinge amplitude `32 epsilon^3 / (3 pi^2 eta^2)`.
    pub fn hinge_gain(&self) -> f64 {
        32.0 * self.epsilon.powi(3) / (3.0 * PI * PI * self.eta * self.eta)
    }
}

/// Normalized composite coincidence statistic of the hidden-variable
/// model at reduced angle difference `phi` (radians):
/// `(1/4) [1 + V' cos 2phi + hinge]`.
pub fn lhv_probability(phi: f64, p: &LhvParams) -> f64 {
    let phi = reduce_phi(phi);
    let hinge = (phi.abs() - FRAC_PI_2 + FRAC_PI_2 * p.eta).max(0.0);
    0.25 * (1.0 + p.v_prime * (2.0 * phi).cos() + p.hinge_gain() * hinge)
}

/// Deviation of the hidden-variable coincidence law from the plain cosine
/// law it shadows, at reduced angle difference `phi` (radians).
///
/// Composed of a cosine part, a uniform offset `-8 epsilon^3 / (3 pi)`,
/// and the hinge that switches on for `|phi| > (pi/2)(1 - eta)`. At
/// `phi = 45°` only the offset survives.
pub fn delta_phi(phi: f64, eta: f64, epsilon: f64) -> f64 {
    let phi = reduce_phi(phi);
    let lead = 8.0 * epsilon.powi(3) / (3.0 * PI);
    let hinge = (eta + 2.0 * phi.abs() / PI - 1.0).max(0.0);
    lead * (2.0 * window_visibility_limit(eta) * (2.0 * phi).cos() - 1.0
        + 2.0 / (eta * eta) * hinge)
}

/// Predicted curvature statistic `nu` of the hidden-variable model.
///
/// For `eta <= 1/2` this reduces to `x / (4 + x)` with
/// `x = 16 epsilon^3 / (3 pi eta)`; above `eta = 1/2` the hinge also
/// reaches the 45° point and the general form applies.
pub fn nu_prediction(eta: f64, epsilon: f64) -> f64 {
    let g = 32.0 * epsilon.powi(3) / (3.0 * PI * PI * eta * eta);
    let h1 = g * (FRAC_PI_2 * eta - FRAC_PI_4).max(0.0);
    let h2 = g * FRAC_PI_2 * eta;
    (h2 - 2.0 * h1) / (4.0 + h2 + 2.0 * h1)
}

/// Efficiency an LHV model would need to produce curvature `nu_target` at
/// visibility `v_prime`, using the closed-form `epsilon`.
///
/// Searches `eta` up to 1/2, where the prediction peaks; targets beyond
/// that peak are reported as unattainable with the reachable range.
pub fn invert_eta_for_nu(nu_target: f64, v_prime: f64) -> Result<f64> {
    check_unit_interval("v_prime", v_prime)?;
    if !(nu_target >= 0.0 && nu_target.is_finite()) {
        return Err(Error::ParamDomain {
            field: "nu_target".to_string(),
            value: nu_target,
            requirement: "finite and >= 0",
        });
    }
    let lo_eta = clamp_boundary_eta(v_prime)?;
    if nu_target == 0.0 {
        return Ok(lo_eta.min(0.5));
    }
    if lo_eta >= 0.5 {
        return Err(Error::NoSolution { target: nu_target, lo: 0.0, hi: 0.0 });
    }
    let pred = |eta: f64| nu_prediction(eta, epsilon_approx(v_prime, eta));
    let max = pred(0.5);
    if nu_target > max {
        return Err(Error::NoSolution { target: nu_target, lo: 0.0, hi: max });
    }
    let (mut lo, mut hi) = (lo_eta, 0.5f64);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if pred(mid) < nu_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
