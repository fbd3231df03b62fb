//! `spindiscord`: sweeps, figure presets and oracle checks from the command line.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 invalid input state,
//! 3 verification failure.

mod config;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use spindiscord::experiment::verify::{verify, Suite, VerifyOptions};
use spindiscord::experiment::{
    run_preset, sweep, write_csv, ExperimentPreset, SweepSpec, DEFAULT_POINTS, DEFAULT_P_VALUES,
    DEFAULT_TAU_MAX, PRESET_NAMES,
};
use spindiscord::states::BlochParams;
use spindiscord::{full_report, BellMixture, CorrelationReport, XState};

use config::{check_p, density_json, mixture, read_density, FileConfig, ScenarioArgs};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Validation(String),
    Verification,
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Verification => 3,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "spindiscord",
    version,
    about = "Exact correlation dynamics of two coupled spins"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve a Bell mixture or an X-state and print the state and its correlations.
    Evolve {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Bell mixture id, e.g. phi+psi+.
        #[arg(long)]
        mixture: Option<String>,
        /// Mixing parameter (weight of the first Bell state).
        #[arg(long)]
        p: Option<f64>,
        /// Initial X-state as JSON (4x4 array of [re, im]); overrides --mixture.
        #[arg(long)]
        density: Option<PathBuf>,
        /// Time on the tau+ = |G+| t axis.
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Sweep tau+ and p for one mixture; CSV on stdout or --output.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        mixture: Option<String>,
        /// Comma-separated mixing parameters.
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<f64>>,
        #[arg(long)]
        tau_max: Option<f64>,
        /// Samples on [0, tau_max], endpoints included.
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Reproduce a figure: CSV and SVG files in --out, summary JSON on stdout.
    RunPreset {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(PRESET_NAMES))]
        name: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Cross-check the closed forms against the oracles; JSON report on stdout.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES), default_value = "all")]
        suite: String,
        /// Random states for the concurrence and discord suites.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Span of tau+ for the propagator and structure suites.
        #[arg(long, default_value_t = 10.0)]
        tau_max: f64,
    },
    /// Correlations of a single X-state given as JSON.
    Report {
        /// File with a 4x4 array of [re, im] pairs, or - for stdin.
        #[arg(long)]
        density: PathBuf,
    },
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let mut stdout = io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, value).map_err(usage)?;
    writeln!(stdout).map_err(usage)
}

#[derive(Serialize)]
struct StateReport {
    scenario: String,
    tau_plus: f64,
    t: f64,
    bloch: [f64; 5],
    density: Vec<Vec<[f64; 2]>>,
    correlations: CorrelationReport,
}

fn state_report(
    scenario: String,
    tau_plus: f64,
    t: f64,
    x: &XState,
) -> Result<StateReport, Failure> {
    let correlations = full_report(x).map_err(|e| Failure::Validation(e.to_string()))?;
    let BlochParams { r, s, c1, c2, c3 } = x
        .canonicalize()
        .bloch_params()
        .map_err(|e| Failure::Validation(e.to_string()))?;
    Ok(StateReport {
        scenario,
        tau_plus,
        t,
        bloch: [r, s, c1, c2, c3],
        density: density_json(&x.to_matrix()),
        correlations,
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Evolve {
            scenario,
            mixture: mix,
            p,
            density,
            tau,
            config,
        } => {
            let file = FileConfig::load(config.as_deref())?;
            let cfg = scenario.resolve(&file)?;
            let tau = tau.or(file.tau).unwrap_or(0.0);
            if !(tau >= 0.0 && tau.is_finite()) {
                return Err(Failure::Usage(format!(
                    "--tau: value {tau} must be finite and >= 0"
                )));
            }
            let x0 = match density {
                Some(path) => XState::from_density(&read_density(&path)?)
                    .map_err(|e| Failure::Validation(e.to_string()))?,
                None => {
                    let kind = mixture(mix.as_deref(), &file)?;
                    let p = check_p(
                        p.or_else(|| file.p.as_ref().and_then(|v| v.first().copied()))
                            .unwrap_or(1.0),
                    )?;
                    spindiscord::bell_mixture(&BellMixture::new(kind, p).map_err(usage)?)
                        .map_err(usage)?
                }
            };
            let t = cfg.time_at_tau_plus(tau);
            let x = spindiscord::evolve_xstate(&x0, &spindiscord::propagator(&cfg, t));
            print_json(&state_report(cfg.label(), tau, t, &x)?)
        }
        Command::Sweep {
            scenario,
            mixture: mix,
            p,
            tau_max,
            points,
            config,
            output,
        } => {
            let file = FileConfig::load(config.as_deref())?;
            let p_values = p
                .or(file.p.clone())
                .unwrap_or_else(|| DEFAULT_P_VALUES.to_vec());
            if p_values.is_empty() {
                return Err(Failure::Usage("--p: empty list".into()));
            }
            for &v in &p_values {
                check_p(v)?;
            }
            let tau_max = tau_max.or(file.tau_max).unwrap_or(DEFAULT_TAU_MAX);
            if !(tau_max >= 0.0 && tau_max.is_finite()) {
                return Err(Failure::Usage(format!(
                    "--tau-max: value {tau_max} must be finite and >= 0"
                )));
            }
            let n_points = points.or(file.points).unwrap_or(DEFAULT_POINTS);
            if n_points == 0 {
                return Err(Failure::Usage("--points: must be at least 1".into()));
            }
            let spec = SweepSpec {
                scenario: scenario.resolve(&file)?,
                mixture: mixture(mix.as_deref(), &file)?,
                p_values,
                tau_max,
                n_points,
            };
            let rows = sweep(&spec).map_err(usage)?;
            match output {
                Some(path) => {
                    let f = std::fs::File::create(&path)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    write_csv(&rows, io::BufWriter::new(f)).map_err(usage)
                }
                None => write_csv(&rows, io::stdout().lock()).map_err(usage),
            }
        }
        Command::RunPreset { name, out } => {
            let preset = ExperimentPreset::by_name(&name)
                .ok_or_else(|| Failure::Usage(format!("unknown preset '{name}'")))?;
            let summary = run_preset(&preset, &out).map_err(usage)?;
            print_json(&summary)
        }
        Command::Verify {
            suite,
            samples,
            seed,
            tau_max,
        } => {
            let suite: Suite = suite.parse().map_err(Failure::Usage)?;
            if !(tau_max > 0.0 && tau_max.is_finite()) {
                return Err(Failure::Usage(format!(
                    "--tau-max: value {tau_max} must be finite and > 0"
                )));
            }
            let options = VerifyOptions {
                samples,
                seed,
                tau_max,
                ..VerifyOptions::default()
            };
            let report = verify(suite, &options);
            print_json(&report)?;
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Report { density } => {
            let x = XState::from_density(&read_density(&density)?)
                .map_err(|e| Failure::Validation(e.to_string()))?;
            let correlations = full_report(&x).map_err(|e| Failure::Validation(e.to_string()))?;
            print_json(&correlations)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Validation(m) => eprintln!("invalid state: {m}"),
                Failure::Verification => eprintln!("verification failed"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
