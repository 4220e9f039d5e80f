//! Event-level simulation of counting runs.
//!
//! The quantum sampler draws one emission at a time: an emission becomes a
//! collected pair, a lone collected photon of definite polarization, or
//! nothing, per [`crate::model::SetupConfig::mixture_weights`]; a pair picks
//! its joint ideal outcome from the amplitude-squared law, and each photon
//! then exits its ideal channel with that channel's principal transmittance
//! or leaks into the other with the other's leak transmittance, firing the
//! detector behind wherever it lands. Exits that do not fire a detector are
//! not observable and are folded into the per-channel fire probabilities.
//!
//! The hidden-variable sampler needs no event loop: every channel count is
//! Poisson around the closed-form mean, drawn in a fixed channel order.
//!
//! Each grid setting gets its own counter-derived stream seed, so results
//! are byte-identical no matter how the settings are scheduled across
//! threads, and any single setting can be replayed in isolation.

use crate::error::{Error, Result};
use crate::lhv::{reduce_phi, LhvParams};
use crate::model::{AngleSetting, SetupConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use std::f64::consts::FRAC_PI_2;

/// Largest accepted emission count per setting.
pub const MAX_PAIRS_PER_SETTING: u64 = 1_000_000_000_000;

/// Raw counts of one run at one analyzer-angle pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountRecord {
    pub alpha_deg: f64,
    pub beta_deg: f64,
    pub c_pp: u64,
    pub c_pm: u64,
    pub c_mp: u64,
    pub c_mm: u64,
    pub s_ap: u64,
    pub s_am: u64,
    pub s_bp: u64,
    pub s_bm: u64,
    /// Source emissions behind this record, when known.
    pub n_pairs: Option<u64>,
}

impl CountRecord {
    pub fn coincidences(&self) -> [u64; 4] {
        [self.c_pp, self.c_pm, self.c_mp, self.c_mm]
    }

    pub fn singles(&self) -> [u64; 4] {
        [self.s_ap, self.s_am, self.s_bp, self.s_bm]
    }

    pub fn setting(&self) -> AngleSetting {
        AngleSetting::new(self.alpha_deg, self.beta_deg)
    }
}

/// Grid of settings plus run length and seeding for one simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationPlan {
    pub alice_deg: Vec<f64>,
    pub bob_deg: Vec<f64>,
    /// Source emissions per setting (the Poisson mean of the window when
    /// `poisson_windows` is set).
    pub pairs_per_setting: u64,
    pub master_seed: u64,
    /// Draw the emission number of each window from a Poisson law instead
    /// of fixing it.
    pub poisson_windows: bool,
}

impl SimulationPlan {
    pub fn validate(&self) -> Result<()> {
        if self.alice_deg.is_empty() {
            return Err(Error::InsufficientData {
                what: "simulation grid",
                needed: 1,
                got: 0,
                unit: "first-arm angles",
            });
        }
        if self.bob_deg.is_empty() {
            return Err(Error::InsufficientData {
                what: "simulation grid",
                needed: 1,
                got: 0,
                unit: "second-arm angles",
            });
        }
        if self.pairs_per_setting == 0 {
            return Err(Error::ParamDomain {
                field: "pairs_per_setting".into(),
                value: 0.0,
                requirement: "at least one emission per setting",
            });
        }
        if self.pairs_per_setting > MAX_PAIRS_PER_SETTING {
            return Err(Error::Capacity(format!(
                "{} emissions per setting exceeds the {} limit",
                self.pairs_per_setting, MAX_PAIRS_PER_SETTING
            )));
        }
        for &a in self.alice_deg.iter().chain(self.bob_deg.iter()) {
            if !a.is_finite() {
                return Err(Error::ParamDomain {
                    field: "grid angle".into(),
                    value: a,
                    requirement: "finite degrees",
                });
            }
        }
        Ok(())
    }

    /// Settings in emission order: first-arm angles outermost.
    pub fn settings(&self) -> Vec<AngleSetting> {
        let mut out = Vec::with_capacity(self.alice_deg.len() * self.bob_deg.len());
        for &a in &self.alice_deg {
            for &b in &self.bob_deg {
                out.push(AngleSetting::new(a, b));
            }
        }
        out
    }
}

/// Stream seed of one grid setting: a counter hash of the master seed, so
/// neighboring settings get unrelated streams.
pub fn setting_seed(master_seed: u64, setting_index: u64) -> u64 {
    let mut z = master_seed.wrapping_add(setting_index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fire probabilities of the two detectors of one arm, conditioned on a
/// photon's ideal channel (or on its polarization, for lone photons).
#[derive(Clone, Copy)]
struct FireTable {
    plus: f64,
    minus: f64,
}

fn pick(rng: &mut ChaCha8Rng, t: FireTable) -> Option<usize> {
    let r: f64 = rng.gen();
    if r < t.plus {
        Some(0)
    } else if r < t.plus + t.minus {
        Some(1)
    } else {
        None
    }
}

struct SettingTables {
    // Cumulative mixture weights: pair, then the four lone-photon kinds.
    mixture: [f64; 5],
    joint: [f64; 4],
    // Indexed by ideal channel (0 = plus).
    route_a: [FireTable; 2],
    route_b: [FireTable; 2],
    // Indexed by polarization (0 = H).
    lone_a: [FireTable; 2],
    lone_b: [FireTable; 2],
}

impl SettingTables {
    fn build(config: &SetupConfig, s: AngleSetting) -> Self {
        let w = config.mixture_weights();
        let mut mixture = [w.pair, w.single_a_h, w.single_a_v, w.single_b_h, w.single_b_v];
        for k in 1..5 {
            mixture[k] += mixture[k - 1];
        }
        let p = config.ideal_joint_probabilities(s);
        let mut joint = p;
        for k in 1..4 {
            joint[k] += joint[k - 1];
        }

        let route = |arm: &crate::model::AnalyzerArm, za: f64, zb: f64| {
            [
                FireTable { plus: arm.plus.principal * za, minus: arm.minus.leak * zb },
                FireTable { plus: arm.plus.leak * za, minus: arm.minus.principal * zb },
            ]
        };
        let lone = |arm: &crate::model::AnalyzerArm, za: f64, zb: f64, theta: f64| {
            let (c2, s2) = (theta.cos().powi(2), theta.sin().powi(2));
            [
                FireTable {
                    plus: (c2 * arm.plus.principal + s2 * arm.plus.leak) * za,
                    minus: (s2 * arm.minus.principal + c2 * arm.minus.leak) * zb,
                },
                FireTable {
                    plus: (s2 * arm.plus.principal + c2 * arm.plus.leak) * za,
                    minus: (c2 * arm.minus.principal + s2 * arm.minus.leak) * zb,
                },
            ]
        };

        SettingTables {
            mixture,
            joint,
            route_a: route(&config.arm_a, config.det.a_plus, config.det.a_minus),
            route_b: route(&config.arm_b, config.det.b_plus, config.det.b_minus),
            lone_a: lone(&config.arm_a, config.det.a_plus, config.det.a_minus, s.alpha()),
            lone_b: lone(&config.arm_b, config.det.b_plus, config.det.b_minus, s.beta()),
        }
    }
}

/// Simulate one setting for `n_pairs` emissions with its own stream seed.
pub fn simulate_setting(
    config: &SetupConfig,
    setting: AngleSetting,
    n_pairs: u64,
    poisson_window: bool,
    seed: u64,
) -> Result<CountRecord> {
    config.validate()?;
    if n_pairs == 0 || n_pairs > MAX_PAIRS_PER_SETTING {
        return Err(Error::Capacity(format!(
            "{n_pairs} emissions not in 1..={MAX_PAIRS_PER_SETTING}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let emissions = if poisson_window {
        let window = Poisson::new(n_pairs as f64)
            .map_err(|_| Error::Capacity(format!("bad Poisson window mean {n_pairs}")))?;
        window.sample(&mut rng) as u64
    } else {
        n_pairs
    };

    let t = SettingTables::build(config, setting);
    let mut c = [0u64; 4];
    let mut s = [0u64; 4];

    for _ in 0..emissions {
        let r: f64 = rng.gen();
        if r < t.mixture[0] {
            let rj: f64 = rng.gen();
            let joint = t.joint.iter().take(3).filter(|&&edge| rj >= edge).count();
            let fa = pick(&mut rng, t.route_a[joint / 2]);
            let fb = pick(&mut rng, t.route_b[joint % 2]);
            if let Some(x) = fa {
                s[x] += 1;
            }
            if let Some(y) = fb {
                s[2 + y] += 1;
            }
            if let (Some(x), Some(y)) = (fa, fb) {
                c[2 * x + y] += 1;
            }
        } else if r < t.mixture[2] {
            let pol = usize::from(r >= t.mixture[1]);
            if let Some(x) = pick(&mut rng, t.lone_a[pol]) {
                s[x] += 1;
            }
        } else if r < t.mixture[4] {
            let pol = usize::from(r >= t.mixture[3]);
            if let Some(y) = pick(&mut rng, t.lone_b[pol]) {
                s[2 + y] += 1;
            }
        }
    }

    Ok(CountRecord {
        alpha_deg: setting.alpha_deg,
        beta_deg: setting.beta_deg,
        c_pp: c[0],
        c_pm: c[1],
        c_mp: c[2],
        c_mm: c[3],
        s_ap: s[0],
        s_am: s[1],
        s_bp: s[2],
        s_bm: s[3],
        n_pairs: Some(emissions),
    })
}

/// Simulate every setting of the plan. Records come back in plan order
/// regardless of how many threads do the work.
pub fn simulate_grid(config: &SetupConfig, plan: &SimulationPlan) -> Result<Vec<CountRecord>> {
    plan.validate()?;
    config.validate()?;
    plan.settings()
        .par_iter()
        .enumerate()
        .map(|(idx, &setting)| {
            simulate_setting(
                config,
                setting,
                plan.pairs_per_setting,
                plan.poisson_windows,
                setting_seed(plan.master_seed, idx as u64),
            )
        })
        .collect()
}

/// Poisson channel means of the hidden-variable model at one setting,
/// order `++`, `+-`, `-+`, `--` then the four singles.
pub fn lhv_channel_means(params: &LhvParams, setting: AngleSetting, n_pairs: f64) -> [f64; 8] {
    let phi = reduce_phi(setting.phi());
    let c2phi = (2.0 * phi).cos();
    let g = params.hinge_gain();
    let q = 0.25 * params.eta * params.eta * n_pairs;
    // The two anticorrelated channels carry the hinge of the model; the
    // correlated ones carry the complementary hinge a quarter turn away,
    // so the composite statistic sees the same excess at every setting.
    let anti = q * (1.0 + params.v_prime * c2phi
        + g * (phi.abs() - FRAC_PI_2 + FRAC_PI_2 * params.eta).max(0.0));
    let corr = q * (1.0 - params.v_prime * c2phi
        + g * (FRAC_PI_2 * params.eta - phi.abs()).max(0.0));
    let single = 0.5 * params.eta * n_pairs;
    [corr, anti, anti, corr, single, single, single, single]
}

/// Draw the count records of a hidden-variable run over the plan's grid.
///
/// Channel counts are independent Poisson draws around
/// [`lhv_channel_means`] (coincidences clamped to their channels' singles),
/// drawn coincidences first, in channel order.
pub fn simulate_lhv_grid(params: &LhvParams, plan: &SimulationPlan) -> Result<Vec<CountRecord>> {
    plan.validate()?;
    let n = plan.pairs_per_setting;
    plan.settings()
        .par_iter()
        .enumerate()
        .map(|(idx, &setting)| {
            let mut rng = ChaCha8Rng::seed_from_u64(setting_seed(plan.master_seed, idx as u64));
            let means = lhv_channel_means(params, setting, n as f64);
            let mut counts = [0u64; 8];
            for (slot, &mean) in counts.iter_mut().zip(&means) {
                if mean > 0.0 {
                    let dist = Poisson::new(mean)
                        .map_err(|_| Error::Capacity(format!("bad Poisson mean {mean}")))?;
                    *slot = dist.sample(&mut rng) as u64;
                }
            }
            let clamp = |c: u64, sa: u64, sb: u64| c.min(sa).min(sb);
            Ok(CountRecord {
                alpha_deg: setting.alpha_deg,
                beta_deg: setting.beta_deg,
                c_pp: clamp(counts[0], counts[4], counts[6]),
                c_pm: clamp(counts[1], counts[4], counts[7]),
                c_mp: clamp(counts[2], counts[5], counts[6]),
                c_mm: clamp(counts[3], counts[5], counts[7]),
                s_ap: counts[4],
                s_am: counts[5],
                s_bp: counts[6],
                s_bm: counts[7],
                n_pairs: Some(n),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AnalyzerArm, DetectorBank};

    fn bench_config() -> SetupConfig {
        SetupConfig {
            gamma: 0.1,
            mu_a: 0.36,
            mu_b: 0.36,
            r0: 1.0e6,
            arm_a: AnalyzerArm::uniform(0.97, 0.01),
            arm_b: AnalyzerArm::uniform(0.97, 0.01),
            det: DetectorBank::uniform(0.55),
        }
    }

    fn small_plan() -> SimulationPlan {
        SimulationPlan {
            alice_deg: vec![0.0, 45.0],
            bob_deg: vec![30.0],
            pairs_per_setting: 5_000,
            master_seed: 7,
            poisson_windows: false,
        }
    }

    #[test]
    fn grid_keeps_plan_order_and_angle_literals() {
        let records = simulate_grid(&bench_config(), &small_plan()).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!((records[0].alpha_deg, records[0].beta_deg), (0.0, 30.0));
        assert_eq!((records[1].alpha_deg, records[1].beta_deg), (45.0, 30.0));
        assert_eq!(records[0].n_pairs, Some(5_000));
    }

    #[test]
    fn same_seed_reproduces_counts_exactly() {
        let a = simulate_grid(&bench_config(), &small_plan()).unwrap();
        let b = simulate_grid(&bench_config(), &small_plan()).unwrap();
        assert_eq!(a, b);
        let mut other = small_plan();
        other.master_seed = 8;
        let c = simulate_grid(&bench_config(), &other).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn setting_seeds_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for idx in 0..1000 {
            assert!(seen.insert(setting_seed(42, idx)));
        }
        assert_ne!(setting_seed(1, 0), setting_seed(2, 0));
    }

    #[test]
    fn frequencies_track_channel_probabilities() {
        let config = bench_config();
        let setting = AngleSetting::new(20.0, 65.0);
        let n = 200_000u64;
        let rec = simulate_setting(&config, setting, n, false, 99).unwrap();
        let nf = n as f64;

        let cp = config.coincidence_probabilities(setting);
        let sp = config.singles_probabilities(setting);
        let counts = rec.coincidences();
        let singles = rec.singles();
        let all = counts
            .iter()
            .zip(cp.iter())
            .chain(singles.iter().zip(sp.iter()))
            .enumerate();
        for (k, (&count, &p)) in all {
            let freq = count as f64 / nf;
            // statistical band plus the first-order formula's leak bias
            let tol = 5.0 * (p * (1.0 - p) / nf).sqrt() + 0.004 * p;
            eprintln!("channel {k}: freq {freq:.6} vs p {p:.6} (tol {tol:.6})");
            assert!((freq - p).abs() < tol, "channel {k}: {freq} vs {p}");
        }
    }

    #[test]
    fn poisson_windows_vary_the_emission_number() {
        let mut plan = small_plan();
        plan.poisson_windows = true;
        let records = simulate_grid(&bench_config(), &plan).unwrap();
        let drawn: Vec<u64> = records.iter().map(|r| r.n_pairs.unwrap()).collect();
        // Around the mean, not equal to it, and reproducible.
        for &d in &drawn {
            assert!(d > 4_000 && d < 6_000, "window {d}");
        }
        let again = simulate_grid(&bench_config(), &plan).unwrap();
        assert_eq!(records, again);
    }

    #[test]
    fn lhv_counts_track_channel_means() {
        let params = LhvParams::new(0.976, 0.225).unwrap();
        let plan = SimulationPlan {
            alice_deg: vec![0.0, 30.0, 80.0],
            bob_deg: vec![0.0],
            pairs_per_setting: 10_000_000,
            master_seed: 5,
            poisson_windows: false,
        };
        let records = simulate_lhv_grid(&params, &plan).unwrap();
        for (rec, setting) in records.iter().zip(plan.settings()) {
            let means = lhv_channel_means(&params, setting, plan.pairs_per_setting as f64);
            let counts =
                [rec.c_pp, rec.c_pm, rec.c_mp, rec.c_mm, rec.s_ap, rec.s_am, rec.s_bp, rec.s_bm];
            for (k, (&count, &mean)) in counts.iter().zip(&means).enumerate() {
                let sigma = mean.sqrt().max(1.0);
                assert!(
                    (count as f64 - mean).abs() < 5.0 * sigma,
                    "channel {k} at alpha {}: {count} vs {mean}",
                    rec.alpha_deg
                );
            }
        }
    }

    #[test]
    fn lhv_hinge_raises_anticorrelated_channels_near_quarter_turn() {
        use approx::assert_relative_eq;
        let params = LhvParams::new(0.976, 0.225).unwrap();
        // At phi = 90° the hinge is fully on for the anticorrelated pair.
        let means = lhv_channel_means(&params, AngleSetting::new(90.0, 0.0), 1e6);
        let q = 0.25 * params.eta * params.eta * 1e6;
        let base = q * (1.0 - params.v_prime);
        let hinge = q * params.hinge_gain() * FRAC_PI_2 * params.eta;
        assert_relative_eq!(means[1], base + hinge, max_relative = 1e-12);
        assert!(means[1] > base * 1.3, "hinge missing: {} vs {base}", means[1]);
        // The correlated channels see no hinge there.
        assert_relative_eq!(means[0], q * (1.0 + params.v_prime), max_relative = 1e-12);
    }

    #[test]
    fn plan_validation_rejects_degenerate_input() {
        let mut plan = small_plan();
        plan.alice_deg.clear();
        assert!(simulate_grid(&bench_config(), &plan).is_err());

        let mut plan = small_plan();
        plan.pairs_per_setting = 0;
        assert!(simulate_grid(&bench_config(), &plan).is_err());

        let mut plan = small_plan();
        plan.pairs_per_setting = MAX_PAIRS_PER_SETTING + 1;
        assert!(matches!(simulate_grid(&bench_config(), &plan), Err(Error::Capacity(_))));
    }
}
