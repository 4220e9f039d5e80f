//! Forward model of the two-photon source, analyzers and detectors.
//!
//! All probabilities are per source emission: multiply by the number of
//! emissions in a counting window to get expected counts. The joint and
//! singles count formulas keep the polarizer leak transmittances to first
//! order; the event sampler in [`crate::sim`] implements the full process,
//! and the two agree to a few parts in 10^3 of each channel probability
//! for realistic leaks.
//!
//! Angle convention: analyzer angles are given in degrees at every API
//! boundary and converted to radians internally. `phi` always means the
//! difference `alpha - beta`.

use crate::error::{Error, Result};

/// Angle pair for one measurement setting, in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSetting {
    pub alpha_deg: f64,
    pub beta_deg: f64,
}

impl AngleSetting {
    pub fn new(alpha_deg: f64, beta_deg: f64) -> Self {
        Self { alpha_deg, beta_deg }
    }

    /// First-arm analyzer angle in radians.
    pub fn alpha(&self) -> f64 {
        self.alpha_deg.to_radians()
    }

    /// Second-arm analyzer angle in radians.
    pub fn beta(&self) -> f64 {
        self.beta_deg.to_radians()
    }

    /// Analyzer angle difference `alpha - beta` in radians.
    pub fn phi(&self) -> f64 {
        (self.alpha_deg - self.beta_deg).to_radians()
    }
}

/// Principal and leak transmittance of one analyzer output channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelTransmittance {
    /// Transmission for light polarized along the channel's pass axis.
    pub principal: f64,
    /// Transmission for light polarized across the pass axis.
    pub leak: f64,
}

/// Two-channel polarization analyzer of one arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzerArm {
    pub plus: ChannelTransmittance,
    pub minus: ChannelTransmittance,
}

impl AnalyzerArm {
    /// Both channels share one principal and one leak transmittance.
    pub fn uniform(principal: f64, leak: f64) -> Self {
        let t = ChannelTransmittance { principal, leak };
        Self { plus: t, minus: t }
    }

    /// Lossless, leak-free polarizers.
    pub fn ideal() -> Self {
        Self::uniform(1.0, 0.0)
    }

    fn validate(&self, arm: &str) -> Result<()> {
        for (ch, t) in [("plus", self.plus), ("minus", self.minus)] {
            if !(t.principal > 0.0 && t.principal <= 1.0) {
                return Err(Error::ParamDomain {
                    field: format!("{arm}.{ch}.principal"),
                    value: t.principal,
                    requirement: "0 < principal <= 1",
                });
            }
            if !(t.leak >= 0.0 && t.leak < t.principal) {
                return Err(Error::ParamDomain {
                    field: format!("{arm}.{ch}.leak"),
                    value: t.leak,
                    requirement: "0 <= leak < principal",
                });
            }
            if t.principal + t.leak > 1.0 {
                return Err(Error::ParamDomain {
                    field: format!("{arm}.{ch}"),
                    value: t.principal + t.leak,
                    requirement: "principal + leak <= 1",
                });
            }
        }
        // A photon headed for one channel exits it with its principal
        // transmittance or leaks into the other channel with that channel's
        // leak transmittance, so these sums are exit probabilities.
        if self.plus.principal + self.minus.leak > 1.0 {
            return Err(Error::ParamDomain {
                field: format!("{arm}.plus.principal + {arm}.minus.leak"),
                value: self.plus.principal + self.minus.leak,
                requirement: "must not exceed 1 (total exit probability)",
            });
        }
        if self.minus.principal + self.plus.leak > 1.0 {
            return Err(Error::ParamDomain {
                field: format!("{arm}.minus.principal + {arm}.plus.leak"),
                value: self.minus.principal + self.plus.leak,
                requirement: "must not exceed 1 (total exit probability)",
            });
        }
        Ok(())
    }
}

/// Quantum efficiencies of the four detectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorBank {
    pub a_plus: f64,
    pub a_minus: f64,
    pub b_plus: f64,
    pub b_minus: f64,
}

impl DetectorBank {
    pub fn uniform(zeta: f64) -> Self {
        Self { a_plus: zeta, a_minus: zeta, b_plus: zeta, b_minus: zeta }
    }

    pub fn ideal() -> Self {
        Self::uniform(1.0)
    }

    fn validate(&self) -> Result<()> {
        for (name, z) in [
            ("det.zeta_ap", self.a_plus),
            ("det.zeta_am", self.a_minus),
            ("det.zeta_bp", self.b_plus),
            ("det.zeta_bm", self.b_minus),
        ] {
            if !(z > 0.0 && z <= 1.0) {
                return Err(Error::ParamDomain {
                    field: name.to_string(),
                    value: z,
                    requirement: "0 < zeta <= 1",
                });
            }
        }
        Ok(())
    }
}

/// Complete description of a two-channel coincidence setup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetupConfig {
    /// Source asymmetry: the two-photon amplitude ratio is `u = 1 + gamma`.
    /// Zero gives the maximally entangled state.
    pub gamma: f64,
    /// Collection efficiency of the first arm's spatial mode.
    pub mu_a: f64,
    /// Collection efficiency of the second arm's spatial mode.
    pub mu_b: f64,
    /// Source emission rate, used to scale probabilities to rates.
    pub r0: f64,
    pub arm_a: AnalyzerArm,
    pub arm_b: AnalyzerArm,
    pub det: DetectorBank,
}

/// Quantities derived from a [`SetupConfig`], cached for reuse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// Amplitude ratio `1 + gamma`.
    pub u: f64,
    /// State normalization `1 + u^2`.
    pub norm: f64,
    /// First-order asymmetry `(u^2 - 1) / (u^2 + 1)`.
    pub gamma_prime: f64,
    /// Second-order asymmetry `(u - 1)^2 / (u^2 + 1)`.
    pub gamma_double_prime: f64,
    /// Single-channel efficiencies `mu * principal * zeta`.
    pub eta_a_plus: f64,
    pub eta_a_minus: f64,
    pub eta_b_plus: f64,
    pub eta_b_minus: f64,
    /// Arrival efficiencies `mu * (principal + leak) * zeta`: the prefactor
    /// every count formula carries, and what singles-based calibration
    /// actually measures.
    pub kappa_a_plus: f64,
    pub kappa_a_minus: f64,
    pub kappa_b_plus: f64,
    pub kappa_b_minus: f64,
    /// Channel-pair visibilities `(T_a - t_a)(T_b - t_b) / ((T_a + t_a)(T_b + t_b))`.
    pub v_pp: f64,
    pub v_pm: f64,
    pub v_mp: f64,
    pub v_mm: f64,
    /// Effective visibility of the four-channel composite statistic:
    /// the mean of the four pair visibilities minus `gamma_double_prime / 2`.
    pub v_bar: f64,
}

/// Decomposition of one emission into detectable components.
///
/// `pair` means both photons reached their analyzers; the four `single_*`
/// weights cover one collected photon of definite polarization with the
/// partner lost; `vacuum` is everything else. The six weights sum to one
/// exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureWeights {
    pub pair: f64,
    pub single_a_h: f64,
    pub single_a_v: f64,
    pub single_b_h: f64,
    pub single_b_v: f64,
    pub vacuum: f64,
}

impl MixtureWeights {
    pub fn sum(&self) -> f64 {
        self.pair
            + self.single_a_h
            + self.single_a_v
            + self.single_b_h
            + self.single_b_v
            + self.vacuum
    }
}

/// Expected channel counts for a number of emissions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedCounts {
    /// Coincidence channels in the order `++`, `+-`, `-+`, `--`.
    pub coincidences: [f64; 4],
    /// Singles channels in the order `a+`, `a-`, `b+`, `b-`.
    pub singles: [f64; 4],
}

impl SetupConfig {
    /// Lossless setup: perfect analyzers and detectors, full collection.
    pub fn ideal(gamma: f64) -> Self {
        Self {
            gamma,
            mu_a: 1.0,
            mu_b: 1.0,
            r0: 1.0,
            arm_a: AnalyzerArm::ideal(),
            arm_b: AnalyzerArm::ideal(),
            det: DetectorBank::ideal(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma.abs() < 1.0) {
            return Err(Error::ParamDomain {
                field: "gamma".into(),
                value: self.gamma,
                requirement: "|gamma| < 1",
            });
        }
        for (name, mu) in [("mu_a", self.mu_a), ("mu_b", self.mu_b)] {
            if !(0.0..=1.0).contains(&mu) {
                return Err(Error::ParamDomain {
                    field: name.into(),
                    value: mu,
                    requirement: "0 <= mu <= 1",
                });
            }
        }
        if !(self.r0.is_finite() && self.r0 > 0.0) {
            return Err(Error::ParamDomain {
                field: "r0".into(),
                value: self.r0,
                requirement: "r0 > 0",
            });
        }
        self.arm_a.validate("arm_a")?;
        self.arm_b.validate("arm_b")?;
        self.det.validate()
    }

    pub fn derived(&self) -> DerivedParams {
        let u = 1.0 + self.gamma;
        let norm = 1.0 + u * u;
        let gamma_prime = (u * u - 1.0) / norm;
        let gamma_double_prime = self.gamma * self.gamma / norm;

        let eta = |mu: f64, t: ChannelTransmittance, z: f64| mu * t.principal * z;
        let kappa = |mu: f64, t: ChannelTransmittance, z: f64| mu * (t.principal + t.leak) * z;
        let vis = |a: ChannelTransmittance, b: ChannelTransmittance| {
            ((a.principal - a.leak) * (b.principal - b.leak))
                / ((a.principal + a.leak) * (b.principal + b.leak))
        };

        let v_pp = vis(self.arm_a.plus, self.arm_b.plus);
        let v_pm = vis(self.arm_a.plus, self.arm_b.minus);
        let v_mp = vis(self.arm_a.minus, self.arm_b.plus);
        let v_mm = vis(self.arm_a.minus, self.arm_b.minus);

        DerivedParams {
            u,
            norm,
            gamma_prime,
            gamma_double_prime,
            eta_a_plus: eta(self.mu_a, self.arm_a.plus, self.det.a_plus),
            eta_a_minus: eta(self.mu_a, self.arm_a.minus, self.det.a_minus),
            eta_b_plus: eta(self.mu_b, self.arm_b.plus, self.det.b_plus),
            eta_b_minus: eta(self.mu_b, self.arm_b.minus, self.det.b_minus),
            kappa_a_plus: kappa(self.mu_a, self.arm_a.plus, self.det.a_plus),
            kappa_a_minus: kappa(self.mu_a, self.arm_a.minus, self.det.a_minus),
            kappa_b_plus: kappa(self.mu_b, self.arm_b.plus, self.det.b_plus),
            kappa_b_minus: kappa(self.mu_b, self.arm_b.minus, self.det.b_minus),
            v_pp,
            v_pm,
            v_mp,
            v_mm,
            v_bar: 0.25 * (v_pp + v_pm + v_mp + v_mm) - 0.5 * gamma_double_prime,
        }
    }

    /// Weights of the emission components reaching the analyzers.
    pub fn mixture_weights(&self) -> MixtureWeights {
        let u = 1.0 + self.gamma;
        let norm = 1.0 + u * u;
        let (ma, mb) = (self.mu_a, self.mu_b);
        MixtureWeights {
            pair: ma * mb,
            single_a_h: ma * (1.0 - mb) / norm,
            single_a_v: ma * (1.0 - mb) * u * u / norm,
            single_b_h: mb * (1.0 - ma) * u * u / norm,
            single_b_v: mb * (1.0 - ma) / norm,
            vacuum: 1.0 - ma - mb + ma * mb,
        }
    }

    /// Joint outcome probabilities of a collected pair behind perfect
    /// analyzers, in the order `++`, `+-`, `-+`, `--`. Sums to one.
    pub fn ideal_joint_probabilities(&self, s: AngleSetting) -> [f64; 4] {
        let u = 1.0 + self.gamma;
        let norm = 1.0 + u * u;
        let (sa, ca) = s.alpha().sin_cos();
        let (sb, cb) = s.beta().sin_cos();
        let amp = |x: f64| x * x / norm;
        [
            amp(u * sa * cb - ca * sb),
            amp(u * sa * sb + ca * cb),
            amp(u * ca * cb + sa * sb),
            amp(u * ca * sb - sa * cb),
        ]
    }

    /// Coincidence detection probabilities per emission, order `++`, `+-`,
    /// `-+`, `--`, with leak transmittances kept to first order.
    pub fn coincidence_probabilities(&self, s: AngleSetting) -> [f64; 4] {
        let d = self.derived();
        let c2a = (2.0 * s.alpha()).cos();
        let c2b = (2.0 * s.beta()).cos();
        let s2a = (2.0 * s.alpha()).sin();
        let s2b = (2.0 * s.beta()).sin();
        let c2phi = (2.0 * s.phi()).cos();
        let cross = d.gamma_double_prime * s2a * s2b;

        let b_pp = 1.0 - d.v_pp * c2phi + d.gamma_prime * (c2b - c2a) + cross;
        let b_pm = 1.0 + d.v_pm * c2phi - d.gamma_prime * (c2b + c2a) - cross;
        let b_mp = 1.0 + d.v_mp * c2phi + d.gamma_prime * (c2b + c2a) - cross;
        let b_mm = 1.0 - d.v_mm * c2phi - d.gamma_prime * (c2b - c2a) + cross;

        [
            0.25 * d.kappa_a_plus * d.kappa_b_plus * b_pp,
            0.25 * d.kappa_a_plus * d.kappa_b_minus * b_pm,
            0.25 * d.kappa_a_minus * d.kappa_b_plus * b_mp,
            0.25 * d.kappa_a_minus * d.kappa_b_minus * b_mm,
        ]
    }

    /// Singles detection probabilities per emission, order `a+`, `a-`,
    /// `b+`, `b-`.
    pub fn singles_probabilities(&self, s: AngleSetting) -> [f64; 4] {
        let d = self.derived();
        let c2a = (2.0 * s.alpha()).cos();
        let c2b = (2.0 * s.beta()).cos();
        [
            0.5 * d.kappa_a_plus * (1.0 - d.gamma_prime * c2a),
            0.5 * d.kappa_a_minus * (1.0 + d.gamma_prime * c2a),
            0.5 * d.kappa_b_plus * (1.0 + d.gamma_prime * c2b),
            0.5 * d.kappa_b_minus * (1.0 - d.gamma_prime * c2b),
        ]
    }

    /// Expected channel counts after `emissions` source emissions.
    pub fn expected_counts(&self, s: AngleSetting, emissions: f64) -> ExpectedCounts {
        let c = self.coincidence_probabilities(s);
        let sg = self.singles_probabilities(s);
        ExpectedCounts {
            coincidences: c.map(|p| p * emissions),
            singles: sg.map(|p| p * emissions),
        }
    }
}
