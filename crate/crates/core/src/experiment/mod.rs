//! Parameter sweeps, figure presets and the oracle verification suites.

mod output;
pub mod verify;

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::correlations::full_report;
use crate::dynamics::ScenarioConfig;
use crate::error::{Error, Result};
use crate::states::{BellMixture, MixtureKind};

pub use output::{format_g12, heat_map_svg, line_panels_svg, write_csv, Panel, CSV_HEADER};

/// Default mixing parameters for the line-plot presets.
pub const DEFAULT_P_VALUES: [f64; 6] = [0.0, 0.1, 0.3, 0.5, 0.8, 1.0];
pub const DEFAULT_TAU_MAX: f64 = 10.0;
pub const DEFAULT_POINTS: usize = 2000;
/// Runs of exact zeros at least this long count as a dead interval.
pub const MIN_ZERO_RUN: usize = 5;

/// One `(p, tau+)` sample of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub scenario: String,
    pub mixture: String,
    pub p: f64,
    pub tau_plus: f64,
    pub concurrence: f64,
    pub discord: f64,
    pub mutual_information: f64,
    pub classical_correlations: f64,
    pub purity: f64,
}

/// A `(tau+, p)` sweep of one Bell mixture under one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub scenario: ScenarioConfig,
    pub mixture: MixtureKind,
    pub p_values: Vec<f64>,
    pub tau_max: f64,
    pub n_points: usize,
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        if self.p_values.is_empty() {
            return Err(Error::Domain {
                what: "number of p values",
                value: 0.0,
                expected: "at least one",
            });
        }
        for &p in &self.p_values {
            BellMixture::new(self.mixture, p)?;
        }
        if !(self.tau_max >= 0.0 && self.tau_max.is_finite()) {
            return Err(Error::Domain {
                what: "tau_max",
                value: self.tau_max,
                expected: "[0, inf)",
            });
        }
        if self.n_points == 0 {
            return Err(Error::Domain {
                what: "n_points",
                value: 0.0,
                expected: "[1, inf)",
            });
        }
        if !self.scenario.couplings.is_finite() {
            return Err(Error::Inconsistent("non-finite coupling constant".into()));
        }
        Ok(())
    }

    /// Sample points on the `tau+` axis, endpoints included.
    pub fn tau_grid(&self) -> Vec<f64> {
        tau_grid(self.tau_max, self.n_points)
    }
}

pub fn tau_grid(tau_max: f64, n_points: usize) -> Vec<f64> {
    if n_points == 1 {
        return vec![0.0];
    }
    (0..n_points)
        .map(|k| tau_max * k as f64 / (n_points - 1) as f64)
        .collect()
}

/// Evaluates every `(p, tau+)` point. Rows are ordered by `p`, then `tau+`.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut p_values = spec.p_values.clone();
    p_values.sort_by(f64::total_cmp);
    p_values.dedup();
    let taus = spec.tau_grid();
    let scenario = spec.scenario.label();
    let mixture = spec.mixture.id();

    let points: Vec<(f64, f64)> = p_values
        .iter()
        .flat_map(|&p| taus.iter().map(move |&tau| (p, tau)))
        .collect();
    points
        .par_iter()
        .map(|&(p, tau)| {
            let mix = BellMixture::new(spec.mixture, p)?;
            let t = spec.scenario.time_at_tau_plus(tau);
            let x = crate::dynamics::evolved_mixture_closed_form(&mix, &spec.scenario, t)?;
            let r = full_report(&x)?;
            Ok(SweepRow {
                scenario: scenario.clone(),
                mixture: mixture.to_string(),
                p,
                tau_plus: tau,
                concurrence: r.concurrence,
                discord: r.discord,
                mutual_information: r.mutual_information,
                classical_correlations: r.classical_correlations,
                purity: x.purity(),
            })
        })
        .collect()
}

/// Maximal runs of exact zeros with at least `min_len` samples, as
/// inclusive index ranges.
pub fn zero_intervals(values: &[f64], min_len: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, &v) in values.iter().enumerate() {
        match (v == 0.0, start) {
            (true, None) => start = Some(k),
            (false, Some(s)) => {
                if k - s >= min_len {
                    out.push((s, k - 1));
                }
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        if values.len() - s >= min_len {
            out.push((s, values.len() - 1));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// C and D against `tau+`, one panel per `p`.
    Lines,
    /// D and C over the `(tau+, p)` plane.
    Heat,
}

/// A named figure configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPreset {
    pub name: &'static str,
    pub scenario: ScenarioConfig,
    pub mixtures: Vec<MixtureKind>,
    pub p_values: Vec<f64>,
    pub tau_max: f64,
    pub n_points: usize,
    pub plot: PlotKind,
}

pub const PRESET_NAMES: [&str; 9] = [
    "fig1",
    "fig2",
    "fig3",
    "fig4",
    "fig5",
    "fig6",
    "fig7-mixt6-model1",
    "fig7-mixt6-model2",
    "fig7-mixt5",
];

impl ExperimentPreset {
    pub fn by_name(name: &str) -> Option<Self> {
        use crate::dynamics::Drive::{SechBright, SechDouble};
        use MixtureKind::*;
        let lines = |name, scenario, mixtures: Vec<MixtureKind>| Self {
            name,
            scenario,
            mixtures,
            p_values: DEFAULT_P_VALUES.to_vec(),
            tau_max: DEFAULT_TAU_MAX,
            n_points: DEFAULT_POINTS,
            plot: PlotKind::Lines,
        };
        let heat = |name, scenario, mixture| Self {
            name,
            scenario,
            mixtures: vec![mixture],
            p_values: (0..=100).map(|k| k as f64 / 100.0).collect(),
            tau_max: DEFAULT_TAU_MAX,
            n_points: 201,
            plot: PlotKind::Heat,
        };
        let model1 = ScenarioConfig::sech(SechDouble, SechDouble);
        let model2 = ScenarioConfig::sech(SechDouble, SechBright);
        Some(match name {
            "fig1" => lines(
                "fig1",
                ScenarioConfig::constant_fields(0.0),
                vec![PhiPlusPsiPlus],
            ),
            "fig2" => lines(
                "fig2",
                ScenarioConfig::constant_fields(0.1),
                vec![PhiPlusPsiPlus],
            ),
            "fig3" => lines(
                "fig3",
                ScenarioConfig::constant_fields(3.0),
                vec![PhiPlusPsiPlus],
            ),
            "fig4" => lines(
                "fig4",
                ScenarioConfig::constant_fields(10.0),
                vec![PhiPlusPsiPlus],
            ),
            "fig5" => lines("fig5", model1, vec![PhiPlusPsiPlus, PhiMinusPsiPlus]),
            "fig6" => lines("fig6", model2, vec![PhiPlusPsiPlus, PhiMinusPsiPlus]),
            "fig7-mixt6-model1" => heat("fig7-mixt6-model1", model1, PsiPlusPsiMinus),
            "fig7-mixt6-model2" => heat("fig7-mixt6-model2", model2, PsiPlusPsiMinus),
            // Both models share the plus-block drive, which alone moves this mixture.
            "fig7-mixt5" => heat("fig7-mixt5", model1, PhiPlusPhiMinus),
            _ => return None,
        })
    }

    pub fn sweep_spec(&self, mixture: MixtureKind) -> SweepSpec {
        SweepSpec {
            scenario: self.scenario,
            mixture,
            p_values: self.p_values.clone(),
            tau_max: self.tau_max,
            n_points: self.n_points,
        }
    }
}

/// A run of exact zeros of the concurrence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeadInterval {
    pub mixture: String,
    pub p: f64,
    pub tau_start: f64,
    pub tau_end: f64,
    pub points: usize,
    /// Concurrence becomes positive again after the interval.
    pub revives: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PresetSummary {
    pub preset: String,
    pub files: Vec<PathBuf>,
    pub rows: usize,
    pub dead_intervals: Vec<DeadInterval>,
}

/// Rows for one `p`, grouped in order.
fn by_p(rows: &[SweepRow]) -> Vec<(f64, &[SweepRow])> {
    rows.chunk_by(|a, b| a.p == b.p)
        .map(|chunk| (chunk[0].p, chunk))
        .collect()
}

fn dead_intervals(mixture: MixtureKind, rows: &[SweepRow]) -> Vec<DeadInterval> {
    let mut out = Vec::new();
    for (p, chunk) in by_p(rows) {
        let c: Vec<f64> = chunk.iter().map(|r| r.concurrence).collect();
        for (s, e) in zero_intervals(&c, MIN_ZERO_RUN) {
            out.push(DeadInterval {
                mixture: mixture.id().to_string(),
                p,
                tau_start: chunk[s].tau_plus,
                tau_end: chunk[e].tau_plus,
                points: e - s + 1,
                revives: c[e + 1..].iter().any(|&v| v > 0.0),
            });
        }
    }
    out
}

/// Runs a preset and writes `<name>_<mixture>.csv` plus SVG plots into `dir`.
pub fn run_preset(preset: &ExperimentPreset, dir: &Path) -> Result<PresetSummary> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let mut total = 0;
    let mut dead = Vec::new();
    for &mixture in &preset.mixtures {
        let rows = sweep(&preset.sweep_spec(mixture))?;
        total += rows.len();
        let stem = format!("{}_{}", preset.name, mixture.id());

        let csv_path = dir.join(format!("{stem}.csv"));
        let mut csv = Vec::new();
        write_csv(&rows, &mut csv)?;
        fs::write(&csv_path, csv)?;
        files.push(csv_path);

        match preset.plot {
            PlotKind::Lines => {
                let panels: Vec<_> = by_p(&rows)
                    .into_iter()
                    .map(|(p, chunk)| {
                        let tau: Vec<f64> = chunk.iter().map(|r| r.tau_plus).collect();
                        let c: Vec<f64> = chunk.iter().map(|r| r.concurrence).collect();
                        let d: Vec<f64> = chunk.iter().map(|r| r.discord).collect();
                        (p, tau, c, d)
                    })
                    .collect();
                let title = format!("{} {}: C (red), D (blue)", preset.name, mixture.id());
                let path = dir.join(format!("{stem}.svg"));
                fs::write(&path, line_panels_svg(&title, preset.tau_max, &panels))?;
                files.push(path);
            }
            PlotKind::Heat => {
                let groups = by_p(&rows);
                let p_axis: Vec<f64> = groups.iter().map(|(p, _)| *p).collect();
                for (label, pick) in [
                    (
                        "discord",
                        (|r: &SweepRow| r.discord) as fn(&SweepRow) -> f64,
                    ),
                    ("concurrence", |r: &SweepRow| r.concurrence),
                ] {
                    let grid: Vec<Vec<f64>> = groups
                        .iter()
                        .map(|(_, chunk)| chunk.iter().map(pick).collect())
                        .collect();
                    let title = format!("{} {}: {label}", preset.name, mixture.id());
                    let path = dir.join(format!("{stem}_{label}.svg"));
                    fs::write(&path, heat_map_svg(&title, preset.tau_max, &p_axis, &grid))?;
                    files.push(path);
                }
            }
        }
        dead.extend(dead_intervals(mixture, &rows));
    }
    Ok(PresetSummary {
        preset: preset.name.to_string(),
        files,
        rows: total,
        dead_intervals: dead,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn zero_runs() {
        let v = [1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        assert_eq!(zero_intervals(&v, 3), vec![(1, 3), (5, 9)]);
        assert_eq!(zero_intervals(&v, 4), vec![(5, 9)]);
        assert!(zero_intervals(&[1e-300, 1.0], 1).is_empty());
    }

    #[test]
    fn grid_endpoints() {
        let g = tau_grid(10.0, 2000);
        assert_eq!(g.len(), 2000);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[1999], 10.0);
        assert_eq!(tau_grid(5.0, 1), vec![0.0]);
    }

    #[test]
    fn all_presets_resolve() {
        for name in PRESET_NAMES {
            let p = ExperimentPreset::by_name(name).unwrap();
            assert_eq!(p.name, name);
        }
        assert!(ExperimentPreset::by_name("fig8").is_none());
        let heat = ExperimentPreset::by_name("fig7-mixt5").unwrap();
        assert_eq!((heat.n_points, heat.p_values.len()), (201, 101));
    }

    #[test]
    fn fig1_endpoints() {
        let preset = ExperimentPreset::by_name("fig1").unwrap();
        let rows = sweep(&preset.sweep_spec(MixtureKind::PhiPlusPsiPlus)).unwrap();
        assert_eq!(rows.len(), 6 * 2000);
        for r in rows.iter().filter(|r| r.p == 0.0) {
            assert!((r.concurrence - 1.0).abs() < 1e-9);
            assert!((r.discord - 1.0).abs() < 1e-9);
        }
        for r in rows.iter().filter(|r| r.p == 1.0) {
            assert!((r.concurrence - (2.0 * r.tau_plus).cos().abs()).abs() < 1e-9);
        }
    }

    #[test]
    fn sudden_death_point() {
        let spec = SweepSpec {
            scenario: ScenarioConfig::constant_fields(0.0),
            mixture: MixtureKind::PhiPlusPsiPlus,
            p_values: vec![1.0],
            tau_max: FRAC_PI_4,
            n_points: 2,
        };
        let rows = sweep(&spec).unwrap();
        assert!(rows[1].concurrence < 1e-12);
    }

    #[test]
    fn stationary_mixture_rows() {
        let spec = SweepSpec {
            scenario: ScenarioConfig::constant_fields(3.0),
            mixture: MixtureKind::PhiPlusPhiMinus,
            p_values: vec![0.5],
            tau_max: 10.0,
            n_points: 50,
        };
        let rows = sweep(&spec).unwrap();
        for r in &rows {
            assert_eq!(r.concurrence, rows[0].concurrence);
            assert_eq!(r.discord, rows[0].discord);
        }
    }

    #[test]
    fn rows_sorted_and_invalid_specs_rejected() {
        let mut spec = SweepSpec {
            scenario: ScenarioConfig::constant_fields(3.0),
            mixture: MixtureKind::PhiPlusPsiPlus,
            p_values: vec![0.8, 0.1, 0.8],
            tau_max: 1.0,
            n_points: 3,
        };
        let rows = sweep(&spec).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.p, r.tau_plus)).collect();
        assert_eq!(keys.len(), 6);
        assert!(keys.windows(2).all(|w| w[0] < w[1]));

        spec.p_values.clear();
        assert!(sweep(&spec).is_err());
        spec.p_values = vec![1.5];
        assert!(sweep(&spec).is_err());
        spec.p_values = vec![0.5];
        spec.n_points = 0;
        assert!(sweep(&spec).is_err());
    }
}
