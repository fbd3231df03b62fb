//! Cross-checks of the closed-form path against the oracles.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::correlations::{concurrence, quantum_discord};
use crate::dynamics::{
    full_evolution_operator, hamiltonian, propagator, CouplingConstants, Drive, ScenarioConfig,
};
use crate::error::Result;
use crate::oracles::{
    discord_bruteforce, ode_trajectory, wootters_concurrence, DiscordOptions, OdeSettings,
};
use crate::states::{off_x_magnitude, random_canonical_xstate, random_xstate, BlochParams, XState};

pub const PROPAGATOR_TOL: f64 = 1e-6;
pub const CONCURRENCE_TOL: f64 = 1e-10;
pub const DISCORD_TOL: f64 = 1e-3;
/// Fraction of discord samples that must fall within [`DISCORD_TOL`].
pub const DISCORD_PASS_FRACTION: f64 = 0.99;
pub const STRUCTURE_TOL: f64 = 1e-10;
/// Spacing of the comparison times on the propagator suite.
pub const PROPAGATOR_SAMPLE_SPACING: f64 = 0.01;
const MAX_LOGGED: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Propagators,
    Discord,
    Concurrence,
    Structure,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 5] =
        ["propagators", "discord", "concurrence", "structure", "all"];

    fn name(self) -> &'static str {
        match self {
            Suite::Propagators => "propagators",
            Suite::Discord => "discord",
            Suite::Concurrence => "concurrence",
            Suite::Structure => "structure",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [
            Suite::Propagators,
            Suite::Discord,
            Suite::Concurrence,
            Suite::Structure,
            Suite::All,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| {
            format!(
                "unknown suite '{s}' (expected one of {})",
                Suite::NAMES.join(", ")
            )
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random states for the concurrence and discord suites.
    pub samples: usize,
    /// Random states evolved in the structure suite.
    pub structure_states: usize,
    /// Span of the `tau+` axis for the propagator and structure suites.
    pub tau_max: f64,
    pub ode: OdeSettings,
    pub discord: DiscordOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 7,
            samples: 1000,
            structure_states: 100,
            tau_max: 10.0,
            ode: OdeSettings::default(),
            discord: DiscordOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: usize,
    pub failures: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub failing_samples: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite, tolerance: f64) -> Self {
        Self {
            suite: suite.to_string(),
            checks: 0,
            failures: 0,
            max_deviation: 0.0,
            tolerance,
            passed: true,
            failing_samples: Vec::new(),
        }
    }

    fn record(&mut self, deviation: f64, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if deviation.is_nan() || deviation > self.max_deviation {
            self.max_deviation = deviation;
        }
        if !(deviation <= self.tolerance) {
            self.failures += 1;
            if self.failing_samples.len() < MAX_LOGGED {
                self.failing_samples.push(describe());
            }
        }
    }

    fn fail(&mut self, message: String) {
        self.checks += 1;
        self.failures += 1;
        if self.failing_samples.len() < MAX_LOGGED {
            self.failing_samples.push(message);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

fn describe_bloch(b: &BlochParams) -> String {
    format!(
        "r={:.6} s={:.6} c1={:.6} c2={:.6} c3={:.6}",
        b.r, b.s, b.c1, b.c2, b.c3
    )
}

/// Scenarios checked by the propagator suite.
pub fn propagator_scenarios() -> Vec<ScenarioConfig> {
    let mut v: Vec<_> = [0.0, 0.1, 3.0, 10.0]
        .into_iter()
        .map(ScenarioConfig::constant_fields)
        .collect();
    v.push(
        ScenarioConfig::constant_fields(3.0)
            .with_couplings(CouplingConstants::standard().with_gzz(0.5)),
    );
    v.extend(ScenarioConfig::sech_scenarios());
    v
}

/// Largest sup-norm gap between the analytic and integrated 4x4 propagators on
/// a `tau+` grid of spacing [`PROPAGATOR_SAMPLE_SPACING`].
pub fn propagator_deviation(cfg: &ScenarioConfig, tau_max: f64, ode: &OdeSettings) -> Result<f64> {
    let n = (tau_max / PROPAGATOR_SAMPLE_SPACING).round() as usize;
    let times: Vec<f64> = (0..=n)
        .map(|k| cfg.time_at_tau_plus(tau_max * k as f64 / n.max(1) as f64))
        .collect();
    let integrated = ode_trajectory(|t| hamiltonian(cfg, t), &times, ode)?;
    Ok(times
        .iter()
        .zip(&integrated)
        .map(|(&t, u)| {
            full_evolution_operator(&propagator(cfg, t), cfg.couplings.gzz, t).max_abs_diff(u)
        })
        .fold(0.0, f64::max))
}

fn propagators(options: &VerifyOptions) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Propagators, PROPAGATOR_TOL);
    let results: Vec<_> = propagator_scenarios()
        .into_par_iter()
        .map(|cfg| {
            (
                cfg,
                propagator_deviation(&cfg, options.tau_max, &options.ode),
            )
        })
        .collect();
    for (cfg, result) in results {
        let label = format!("{} gzz={}", cfg.label(), cfg.couplings.gzz);
        match result {
            Ok(dev) => report.record(dev, || format!("{label}: sup-norm gap {dev:e}")),
            Err(e) => report.fail(format!("{label}: {e}")),
        }
    }
    report
}

fn concurrences(options: &VerifyOptions) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Concurrence, CONCURRENCE_TOL);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let states: Vec<XState> = (0..options.samples)
        .map(|_| random_xstate(&mut rng))
        .collect();
    let results: Vec<_> = states
        .par_iter()
        .map(|x| {
            let b = x.canonicalize().bloch_params()?;
            let closed = concurrence(&b)?;
            let general = wootters_concurrence(&x.to_density())?;
            Ok::<_, crate::Error>((b, (closed - general).abs()))
        })
        .collect();
    for r in results {
        match r {
            Ok((b, dev)) => report.record(dev, || format!("{}: gap {dev:e}", describe_bloch(&b))),
            Err(e) => report.fail(e.to_string()),
        }
    }
    report
}

/// Closed-form discord against the measurement-grid oracle; returns the
/// per-sample absolute gaps alongside the states.
pub fn discord_gaps(
    states: &[XState],
    options: &DiscordOptions,
) -> Vec<Result<(BlochParams, f64)>> {
    states
        .par_iter()
        .map(|x| {
            let b = x.bloch_params()?;
            let closed = quantum_discord(x)?;
            let oracle = discord_bruteforce(&x.to_density(), options)?;
            Ok((b, (closed - oracle).abs()))
        })
        .collect()
}

fn discords(options: &VerifyOptions) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Discord, DISCORD_TOL);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed.wrapping_add(1));
    let states: Vec<XState> = (0..options.samples)
        .map(|_| random_canonical_xstate(&mut rng))
        .collect();
    for r in discord_gaps(&states, &options.discord) {
        match r {
            Ok((b, dev)) => report.record(dev, || format!("{}: gap {dev:e}", describe_bloch(&b))),
            Err(e) => report.fail(e.to_string()),
        }
    }
    // A small fraction of exceedances is tolerated.
    report.passed = report.checks > 0
        && (report.checks - report.failures) as f64 >= DISCORD_PASS_FRACTION * report.checks as f64;
    report
}

/// Scenarios whose 4x4 Hamiltonian the integrator follows accurately over the
/// default window, including one with random couplings and `gzz != 0`.
pub fn structure_scenarios(seed: u64) -> Vec<ScenarioConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = || rng.random_range(-1.0..1.0);
    let random = CouplingConstants {
        gxx: g(),
        gyy: g(),
        gzz: g(),
        gxy: g(),
        gyx: g(),
    };
    vec![
        ScenarioConfig::constant_fields(3.0),
        ScenarioConfig::sech(Drive::SechDouble, Drive::SechDouble),
        ScenarioConfig::new(Drive::SechDouble, Drive::SechDouble, random),
    ]
}

/// Largest off-X entry of `U rho U^dagger` over the trajectory, for each state.
pub fn structure_leakage(
    cfg: &ScenarioConfig,
    states: &[XState],
    t_max: f64,
    ode: &OdeSettings,
) -> Result<Vec<f64>> {
    let times: Vec<f64> = (0..=100).map(|k| t_max * k as f64 / 100.0).collect();
    let us = ode_trajectory(|t| hamiltonian(cfg, t), &times, ode)?;
    Ok(states
        .iter()
        .map(|x| {
            let rho = x.to_matrix();
            us.iter()
                .map(|u| off_x_magnitude(&u.conjugate(&rho)))
                .fold(0.0, f64::max)
        })
        .collect())
}

fn structure(options: &VerifyOptions) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::Structure, STRUCTURE_TOL);
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed.wrapping_add(2));
    let states: Vec<XState> = (0..options.structure_states)
        .map(|_| random_xstate(&mut rng))
        .collect();
    let results: Vec<_> = structure_scenarios(options.seed)
        .into_par_iter()
        .map(|cfg| {
            (
                cfg,
                structure_leakage(&cfg, &states, options.tau_max, &options.ode),
            )
        })
        .collect();
    for (cfg, r) in results {
        match r {
            Ok(leaks) => {
                for (k, dev) in leaks.into_iter().enumerate() {
                    report.record(dev, || {
                        format!("{} state #{k}: leakage {dev:e}", cfg.label())
                    });
                }
            }
            Err(e) => report.fail(format!("{}: {e}", cfg.label())),
        }
    }
    report
}

pub fn verify(suite: Suite, options: &VerifyOptions) -> VerifyReport {
    let suites = match suite {
        Suite::Propagators => vec![propagators(options)],
        Suite::Discord => vec![discords(options)],
        Suite::Concurrence => vec![concurrences(options)],
        Suite::Structure => vec![structure(options)],
        Suite::All => vec![
            propagators(options),
            discords(options),
            concurrences(options),
            structure(options),
        ],
    };
    let mut suites = suites;
    for s in suites.iter_mut().filter(|s| s.suite != "discord") {
        s.passed = s.failures == 0 && s.checks > 0;
    }
    let passed = suites.iter().all(|s| s.passed);
    VerifyReport { suites, passed }
}
