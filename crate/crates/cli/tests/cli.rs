use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spindiscord"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(k).unwrap().parse().unwrap())
        .collect()
}

const BELL_PHI_PLUS: &str = "[[[0.5,0],[0,0],[0,0],[0.5,0]],[[0,0],[0,0],[0,0],[0,0]],\
                             [[0,0],[0,0],[0,0],[0,0]],[[0.5,0],[0,0],[0,0],[0.5,0]]]";

#[test]
fn sweep_hits_sudden_death_point() {
    let o = run(&[
        "sweep",
        "--p",
        "1",
        "--scenario",
        "constant",
        "--omega-plus",
        "0",
        "--mixture",
        "phi+psi+",
        "--tau-max",
        "0.7853981633974483",
        "--points",
        "2",
    ]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(csv.starts_with(
        "scenario,mixture,p,tau_plus,concurrence,discord,mutual_information,classical_correlations,purity\n"
    ));
    let c = column(&csv, "concurrence");
    assert_eq!(c.len(), 2);
    assert_eq!(c[0], 1.0);
    assert!(c[1].abs() < 1e-12);
}

#[test]
fn sweep_output_is_byte_stable() {
    let args = [
        "sweep",
        "--scenario",
        "double-bright",
        "--mixture",
        "phi-psi+",
        "--points",
        "300",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 1 + 6 * 300);
    assert!(!stdout(&a).contains('\r'));
}

#[test]
fn sweep_rows_satisfy_discord_identity() {
    let o = run(&[
        "sweep",
        "--scenario",
        "constant",
        "--omega-plus",
        "3",
        "--points",
        "200",
    ]);
    let csv = stdout(&o);
    let (c, d) = (column(&csv, "concurrence"), column(&csv, "discord"));
    let (i, j) = (
        column(&csv, "mutual_information"),
        column(&csv, "classical_correlations"),
    );
    for k in 0..c.len() {
        assert!((0.0..=1.0).contains(&c[k]) && (0.0..=1.0).contains(&d[k]));
        assert!((d[k] - (i[k] - j[k])).abs() < 1e-9);
    }
}

#[test]
fn stationary_sweep_has_constant_columns() {
    let o = run(&[
        "sweep",
        "--p",
        "0.5",
        "--mixture",
        "phi+phi-",
        "--scenario",
        "double-double",
        "--points",
        "100",
    ]);
    let csv = stdout(&o);
    for name in [
        "concurrence",
        "discord",
        "mutual_information",
        "classical_correlations",
        "purity",
    ] {
        let v = column(&csv, name);
        assert!(v.iter().all(|x| *x == v[0]), "{name}");
    }
}

#[test]
fn usage_errors_exit_one() {
    let o = run(&["sweep", "--p", ""]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--p"));

    let o = run(&["sweep", "--tau-max", "abc"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--tau-max"));

    let o = run(&["sweep", "--p", "0.2,1.5"]);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["sweep", "--mixture", "phi+phi+"]);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["run-preset", "fig9"]);
    assert_eq!(o.status.code(), Some(1));

    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"scenario": "constant", "omega_plus": 0, "mixture": "phi+psi+", "p": [1], "points": 3, "tau_max": 1.0}"#).unwrap();
    let o = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let p = column(&stdout(&o), "p");
    assert_eq!(p, vec![1.0; 3]);

    let o = run(&["sweep", "--config", cfg.to_str().unwrap(), "--p", "0"]);
    let c = column(&stdout(&o), "concurrence");
    assert_eq!(c, vec![1.0; 3]);

    fs::write(&cfg, r#"{"omega": 1}"#).unwrap();
    assert_eq!(
        run(&["sweep", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn sweep_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    let o = run(&["sweep", "--points", "5", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(path).unwrap().lines().count(), 1 + 6 * 5);
}

#[test]
fn report_of_bell_state() {
    let o = run_stdin(&["report", "--density", "-"], BELL_PHI_PLUS);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["concurrence"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((v["discord"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn report_rejects_invalid_states() {
    let not_x = "[[[0.5,0],[0.5,0],[0,0],[0,0]],[[0.5,0],[0.5,0],[0,0],[0,0]],\
                 [[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]";
    assert_eq!(
        run_stdin(&["report", "--density", "-"], not_x)
            .status
            .code(),
        Some(2)
    );
    let bad_trace = "[[[1,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],\
                     [[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]";
    assert_eq!(
        run_stdin(&["report", "--density", "-"], bad_trace)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run_stdin(&["report", "--density", "-"], "[[1, 2]]")
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn evolve_from_density_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rho.json");
    fs::write(&path, BELL_PHI_PLUS).unwrap();
    let o = run(&[
        "evolve",
        "--density",
        path.to_str().unwrap(),
        "--tau",
        "0.5",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let c = v["correlations"]["concurrence"].as_f64().unwrap();
    assert!((c - 1.0_f64.cos().abs()).abs() < 1e-12);
    assert_eq!(v["density"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_suites_report_json() {
    let o = run(&["verify", "concurrence", "--samples", "300"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["passed"].as_bool().unwrap());
    assert!(v["suites"][0]["max_deviation"].as_f64().unwrap() <= 1e-10);

    let o = run(&["verify", "structure"]);
    assert_eq!(o.status.code(), Some(0));

    let o = run(&["verify", "propagators", "--tau-max", "1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_exits_three_on_failure() {
    // Bright-pulse blocks outrun a fixed 1e-4 step long before tau+ = 10.
    let o = run(&["verify", "propagators"]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!v["passed"].as_bool().unwrap());
    assert_eq!(v["suites"][0]["failures"].as_u64().unwrap(), 3);
}

#[test]
fn run_preset_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["run-preset", "fig1", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("fig1_phi+psi+.csv")).unwrap();
    let svg = fs::read_to_string(dir.path().join("fig1_phi+psi+.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    let p = column(&csv, "p");
    let tau = column(&csv, "tau_plus");
    let c = column(&csv, "concurrence");
    let d = column(&csv, "discord");
    for k in 0..p.len() {
        if p[k] == 0.0 {
            assert!((c[k] - 1.0).abs() < 1e-9 && (d[k] - 1.0).abs() < 1e-9);
        }
        if p[k] == 1.0 {
            assert!((c[k] - (2.0 * tau[k]).cos().abs()).abs() < 1e-9);
        }
    }
}

#[test]
fn heat_preset_stationary_row() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "run-preset",
        "fig7-mixt5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["rows"].as_u64().unwrap(), 201 * 101);
    let csv = fs::read_to_string(dir.path().join("fig7-mixt5_phi+phi-.csv")).unwrap();
    assert!(dir.path().join("fig7-mixt5_phi+phi-_discord.svg").exists());
    let p = column(&csv, "p");
    let d = column(&csv, "discord");
    let half: Vec<f64> = p
        .iter()
        .zip(&d)
        .filter(|(p, _)| **p == 0.5)
        .map(|(_, d)| *d)
        .collect();
    assert_eq!(half.len(), 201);
    assert!(half.iter().all(|x| *x == half[0]));
}
