//! End-to-end tests of the `hkpp` binary: exit codes, artifact contents,
//! manifests, and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hkpp"))
}

fn write(path: &Path, content: &str) {
    std::fs::write(path, content).unwrap();
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn run_code(args: &[&str], code: i32) -> Output {
    let out = bin().args(args).output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(code),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const WAVE_CONFIG: &str = r#"
dimension = 3
class = "parabolic"

[reaction]
name = "logistic"
a = 1.0

[wave]
c = 2.0
"#;

#[test]
fn wave_emits_profile_summary_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("wave.toml");
    write(&cfg, WAVE_CONFIG);
    let out = dir.path().join("out");
    run_ok(&["wave", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);

    let summary = json(&out.join("summary.json"));
    let lambda = summary["lambda0_hat"].as_f64().unwrap();
    assert!((lambda - 1.0).abs() < 0.02, "lambda0_hat = {lambda}");

    // manifest lists every artifact with a checksum that matches the bytes
    let manifest = json(&out.join("manifest.json"));
    let artifacts = manifest["artifacts"].as_array().unwrap();
    let names: Vec<&str> = artifacts.iter().map(|a| a["path"].as_str().unwrap()).collect();
    assert!(names.contains(&"profile.csv") && names.contains(&"summary.json"));
    for a in artifacts {
        let data = std::fs::read(out.join(a["path"].as_str().unwrap())).unwrap();
        let digest = {
            use sha2::{Digest, Sha256};
            Sha256::digest(&data).iter().map(|b| format!("{b:02x}")).collect::<String>()
        };
        assert_eq!(digest, a["sha256"].as_str().unwrap());
    }

    // profile CSV is monotone decreasing in U
    let profile = std::fs::read_to_string(out.join("profile.csv")).unwrap();
    let us: Vec<f64> = profile
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(us.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn wave_below_minimal_speed_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("wave.toml");
    write(&cfg, &WAVE_CONFIG.replace("c = 2.0", "c = 1.0"));
    let out = run_code(
        &["wave", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()],
        2,
    );
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("no monotone front"), "stderr: {err}");
}

#[test]
fn missing_reaction_exits_2_with_field_name() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("wave.toml");
    write(&cfg, "dimension = 3\nclass = \"parabolic\"\n\n[wave]\nc = 2.0\n");
    let out = run_code(
        &["wave", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()],
        2,
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("reaction"));
}

#[test]
fn unknown_config_key_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("wave.toml");
    write(&cfg, &format!("{WAVE_CONFIG}\nbogus_key = 1\n"));
    let out = run_code(
        &["wave", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()],
        2,
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus_key"));
}

const SIM_CONFIG: &str = r#"
dimension = 3
class = "elliptic"

[reaction]
name = "logistic"
a = 4.0

[grid]
rho_min = 0.0
rho_max = 40.0
drho = 0.1

[solver]
scheme = "imex_cn"
dt = 0.02
left_bc = "neumann0"
right_bc = "dirichlet0"

[datum]
kind = "indicator"
support = [0.0, 5.0]

[schedule]
t_end = 4.0
snapshot_every = 1.0
"#;

#[test]
fn simulate_zero_datum_gives_zero_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.toml");
    write(&cfg, &SIM_CONFIG.replace("kind = \"indicator\"", "kind = \"zero\""));
    let out = dir.path().join("out");
    run_ok(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--quiet"]);
    for i in 0..4 {
        let text = std::fs::read_to_string(out.join(format!("snapshot_{i:04}.csv"))).unwrap();
        for line in text.lines().skip(1) {
            let u: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
            assert_eq!(u, 0.0);
        }
    }
}

#[test]
fn simulate_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.toml");
    write(&cfg, SIM_CONFIG);
    let (o1, o2) = (dir.path().join("o1"), dir.path().join("o2"));
    run_ok(&["simulate", "--config", cfg.to_str().unwrap(), "--out", o1.to_str().unwrap(), "--quiet"]);
    run_ok(&["simulate", "--config", cfg.to_str().unwrap(), "--out", o2.to_str().unwrap(), "--quiet"]);
    for i in 0..4 {
        let name = format!("snapshot_{i:04}.csv");
        assert_eq!(
            std::fs::read(o1.join(&name)).unwrap(),
            std::fs::read(o2.join(&name)).unwrap(),
            "snapshot {name} differs between identical runs"
        );
    }
    // the manifests agree on every checksum
    let m1 = json(&o1.join("manifest.json"));
    let m2 = json(&o2.join("manifest.json"));
    assert_eq!(m1["artifacts"], m2["artifacts"]);
}

#[test]
fn simulate_cfl_violation_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.toml");
    // explicit euler with dt = 0.02 > 0.4 * 0.1^2 = 0.004
    write(&cfg, &SIM_CONFIG.replace("scheme = \"imex_cn\"", "scheme = \"explicit_euler\""));
    run_code(
        &["simulate", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()],
        2,
    );
}

#[test]
fn front_fit_recovers_planted_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let mut text = String::from("t,m\n");
    for k in 1..=200 {
        let t = k as f64;
        text.push_str(&format!("{t},{}\n", 2.0 * t - 0.75 * t.ln() + 1.0));
    }
    write(&trace, &text);
    let cfg = dir.path().join("ff.toml");
    write(
        &cfg,
        &format!(
            r#"
dimension = 3
class = "parabolic"

[reaction]
name = "logistic"
a = 4.0

[analysis]
front_fit_window = [10.0, 200.0]
trace_csv = "{}"
"#,
            trace.to_str().unwrap()
        ),
    );
    let out = dir.path().join("out");
    run_ok(&["front-fit", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--quiet"]);
    let results = std::fs::read_to_string(out.join("results.csv")).unwrap();
    let row: Vec<&str> = results.lines().nth(1).unwrap().split(',').collect();
    let a_hat: f64 = row[4].parse().unwrap();
    let b_hat: f64 = row[5].parse().unwrap();
    assert!((a_hat - 2.0).abs() < 1e-9, "a_hat = {a_hat}");
    assert!((b_hat + 0.75).abs() < 1e-9, "b_hat = {b_hat}");
}

#[test]
fn front_fit_empty_trace_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    write(&trace, "t,m\n");
    let cfg = dir.path().join("ff.toml");
    write(
        &cfg,
        &format!(
            "dimension = 3\nclass = \"parabolic\"\n\n[reaction]\nname = \"logistic\"\na = 4.0\n\n\
             [analysis]\nfront_fit_window = [10.0, 200.0]\ntrace_csv = \"{}\"\n",
            trace.to_str().unwrap()
        ),
    );
    run_code(
        &["front-fit", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()],
        2,
    );
}

#[test]
fn dipole_phi0_moment_constant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("dipole.toml");
    write(
        &cfg,
        r#"
dimension = 3
class = "parabolic"

[reaction]
name = "logistic"
a = 1.0

[dipole]
tau_end = 1.0
datum = "phi0"
n = 601
dtau = 1e-3
"#,
    );
    let out = dir.path().join("out");
    run_ok(&["dipole", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--quiet"]);
    let text = std::fs::read_to_string(out.join("dipole_trace.csv")).unwrap();
    let target = 2.0 * std::f64::consts::PI.sqrt();
    for line in text.lines().skip(1) {
        let moment: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((moment - target).abs() < 1e-3 * target, "moment {moment} vs {target}");
    }
    assert!(out.join("final_profile.csv").exists());
}

#[test]
fn kernel_normalization_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    run_ok(&["kernel", "--t", "1.0", "--out", out.to_str().unwrap(), "--quiet"]);
    let summary = json(&out.join("summary.json"));
    assert!(summary["mass_error"].as_f64().unwrap() < 1e-6);
    let header = std::fs::read_to_string(out.join("kernel.csv"))
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string();
    assert_eq!(header, "r,P3,h_t,ratio");
}

#[test]
fn dichotomy_sweep_matches_theory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    // d = 3: lambda_1 = 1, so f'(0) = 0.5 vanishes and f'(0) = 4 propagates
    write(
        &cfg,
        r#"
dimension = 3
class = "elliptic"

[reaction]
name = "logistic"
a = 4.0

[datum]
kind = "indicator"
support = [0.0, 5.0]

[schedule]
t_end = 60.0
snapshot_every = 1.0

[sweep]
command = "dichotomy"
a_values = [0.5, 4.0]
"#,
    );
    let out = dir.path().join("out");
    run_ok(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--threads",
        "2",
        "--quiet",
    ]);
    let results = std::fs::read_to_string(out.join("results.csv")).unwrap();
    let rows: Vec<&str> = results.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].ends_with("vanishing"), "{}", rows[0]);
    assert!(rows[1].ends_with("propagation"), "{}", rows[1]);
    // each sub-run left its own manifest in an isolated directory
    assert!(out.join("run-000/manifest.json").exists());
    assert!(out.join("run-001/result.json").exists());
}
