//! Black-box tests of the command-line binary: artifact determinism, the
//! documented exit codes, and cross-command artifact identity.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_polyhom")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polyhom-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_in(dir: &Path, config: &str) -> Output {
    let cfg_path = dir.join("run.cfg");
    fs::write(&cfg_path, config).unwrap();
    Command::new(bin())
        .arg(&cfg_path)
        .current_dir(dir)
        .output()
        .unwrap()
}

const BALL: &str = "\
version = 1
command = iterate
problem.kind = ln_ball
problem.n = 3
problem.k = 10
problem.datum = oracle
output.series = series.json
output.majorant = majorant.csv
";

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = scratch("determinism");
    let out1 = run_in(&dir, BALL);
    assert!(out1.status.success(), "{}", String::from_utf8_lossy(&out1.stderr));
    let series1 = fs::read(dir.join("series.json")).unwrap();
    let majorant1 = fs::read(dir.join("majorant.csv")).unwrap();
    let stdout1 = out1.stdout.clone();

    let out2 = run_in(&dir, BALL);
    assert!(out2.status.success());
    assert_eq!(series1, fs::read(dir.join("series.json")).unwrap());
    assert_eq!(majorant1, fs::read(dir.join("majorant.csv")).unwrap());
    assert_eq!(stdout1, out2.stdout);
}

#[test]
fn match_and_iterate_write_identical_series() {
    let dir = scratch("match-vs-iterate");
    let out = run_in(&dir, BALL);
    assert!(out.status.success());
    let iterated = fs::read(dir.join("series.json")).unwrap();

    let matched_cfg = BALL
        .replace("command = iterate", "command = match")
        .replace("output.series = series.json", "output.series = matched.json")
        .replace("output.majorant = majorant.csv\n", "");
    let out = run_in(&dir, &matched_cfg);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(iterated, fs::read(dir.join("matched.json")).unwrap());
}

#[test]
fn expand_homogeneous_is_a_single_monomial() {
    let dir = scratch("expand");
    let cfg = "\
version = 1
command = expand
problem.kind = homogeneous
problem.m_low = 0
problem.m_high = 3
problem.datum = 1
output.series = seed.json
";
    let out = run_in(&dir, cfg);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("seed.json")).unwrap()).unwrap();
    let terms = json.as_array().unwrap();
    assert_eq!(terms.len(), 1, "seed must be the single term t^3: {terms:?}");
    assert_eq!(terms[0]["i"], 3);
    assert_eq!(terms[0]["j"], 0);
}

#[test]
fn config_errors_exit_2() {
    let dir = scratch("config-errors");
    // unknown key
    let out = run_in(&dir, "version = 1\ncommand = match\nproblem.kind = ln_ball\nnope = 1\n");
    assert_eq!(out.status.code(), Some(2));
    // missing version
    let out = run_in(&dir, "command = match\nproblem.kind = ln_ball\n");
    assert_eq!(out.status.code(), Some(2));
    // nonpositive tolerance
    let out = run_in(
        &dir,
        "version = 1\ncommand = iterate\nproblem.kind = ln_ball\ntolerance.ratio = -1\n",
    );
    assert_eq!(out.status.code(), Some(2));
    // unreadable config path
    let out = Command::new(bin()).arg(dir.join("absent.cfg")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // domain constraint caught at configuration level
    let out = run_in(&dir, "version = 1\ncommand = match\nproblem.kind = ln_ball\nproblem.n = 2\n");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validation_failures_exit_4() {
    let dir = scratch("validation");
    let cfg = "\
version = 1
command = validate
problem.kind = ln_ball
problem.n = 3
problem.k = 8
tolerance.slope = 1e-7
output.grid = grid.csv
output.slopes = slopes.csv
";
    let out = run_in(&dir, cfg);
    assert_eq!(
        out.status.code(),
        Some(4),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    // artifacts are still written before the verdict
    assert!(dir.join("slopes.csv").exists());
}

#[test]
fn exit_code_policy_covers_math_errors() {
    use polyhom::cli::exit_code;
    use polyhom::Error;
    assert_eq!(exit_code(&Error::Config("x".into())), 2);
    assert_eq!(exit_code(&Error::MalformedJson("x".into())), 2);
    assert_eq!(exit_code(&Error::Validation("x".into())), 4);
    assert_eq!(
        exit_code(&Error::NonIntegrable { m: 1, j: 0, mu: 3 }),
        3,
        "math-domain errors map to exit 3"
    );
    assert_eq!(exit_code(&Error::NonStabilization(5)), 3);
}

#[test]
fn validate_passes_on_defaults() {
    let dir = scratch("validate-ok");
    let cfg = "\
version = 1
command = validate
problem.kind = minimal_graph
problem.n = 2
problem.k = 6
output.grid = grid.csv
output.slopes = slopes.csv
";
    let out = run_in(&dir, cfg);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let slopes = fs::read_to_string(dir.join("slopes.csv")).unwrap();
    assert!(slopes.starts_with("k,slope,expected,points"));
    assert_eq!(slopes.lines().count(), 3, "two fitted truncation orders");
}
