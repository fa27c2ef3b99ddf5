use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mobile_anchor::harness::{read_csv, Canonical, CsvRow, ScenarioConfig};

fn exe() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mobile-anchor"))
}

fn run(args: &[&str]) -> Output {
    exe().args(args).output().expect("binary runs")
}

fn write_scenario(dir: &Path, name: &str, cfg: &ScenarioConfig) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, cfg.to_toml_string().unwrap()).unwrap();
    path
}

fn short(variant: Canonical, duration: f64) -> ScenarioConfig {
    ScenarioConfig { duration, ..ScenarioConfig::canonical(variant) }
}

#[test]
fn shipped_scenarios_match_the_built_ins() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    for v in Canonical::ALL {
        let cfg = ScenarioConfig::load(&root.join(format!("{}.toml", v.name()))).unwrap();
        assert_eq!(cfg, ScenarioConfig::canonical(v), "{}", v.name());
    }
}

#[test]
fn print_canonical_round_trips() {
    for v in Canonical::ALL {
        let out = run(&["scenario", "print-canonical", "--variant", v.name()]);
        assert!(out.status.success());
        let cfg = ScenarioConfig::from_toml_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
        assert_eq!(cfg, ScenarioConfig::canonical(v));
    }
    let default = run(&["scenario", "print-canonical"]);
    let cfg = ScenarioConfig::from_toml_str(&String::from_utf8(default.stdout).unwrap()).unwrap();
    assert_eq!(cfg, ScenarioConfig::canonical(Canonical::Mobile));
}

#[test]
fn simulate_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "s.toml", &short(Canonical::Mobile, 1.5));
    let out_dir = dir.path().join("out");
    let out = exe().arg("simulate").arg(&scenario).arg("--out").arg(&out_dir).args(["--seed", "3"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: Vec<CsvRow> = read_csv(&out_dir.join("trajectory.csv")).unwrap();
    assert_eq!(rows.len(), 751);
    let summary = fs::read_to_string(out_dir.join("summary.txt")).unwrap();
    assert!(summary.contains("seed: 3"));
    assert!(summary.contains("attitude [deg]"));
    assert!(out_dir.join("det_trace.csv").exists());
}

#[test]
fn seed_override_changes_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "s.toml", &short(Canonical::Fixed, 0.5));
    let mut csvs = Vec::new();
    for seed in ["1", "2"] {
        let out_dir = dir.path().join(seed);
        let status = exe()
            .arg("simulate")
            .arg(&scenario)
            .arg("--out")
            .arg(&out_dir)
            .args(["--seed", seed])
            .output()
            .unwrap()
            .status;
        assert!(status.success());
        csvs.push(fs::read(out_dir.join("trajectory.csv")).unwrap());
    }
    assert_ne!(csvs[0], csvs[1]);
}

#[test]
fn montecarlo_compare_reports_differences() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_scenario(dir.path(), "a.toml", &short(Canonical::Mobile, 1.0));
    let b = write_scenario(dir.path(), "b.toml", &short(Canonical::Fixed, 1.0));
    let out = exe().arg("montecarlo").arg(&a).args(["--trials", "3", "--compare"]).arg(&b).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("diff [%]"), "{text}");
    assert!(text.contains("3 completed, 0 failed"), "{text}");

    let single = exe().arg("montecarlo").arg(&a).args(["--trials", "2"]).output().unwrap();
    assert!(single.status.success());
    assert!(String::from_utf8(single.stdout).unwrap().contains("2 completed"));
}

#[test]
fn grad_check_passes() {
    let out = run(&["grad-check", "--configs", "200"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("max relative gradient error"));
    assert!(text.contains("PASS"));
}

#[test]
fn configuration_errors_exit_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let good = ScenarioConfig::canonical(Canonical::Mobile).to_toml_string().unwrap();

    let unknown = dir.path().join("unknown.toml");
    fs::write(&unknown, good.replace("[noise]", "[noise]\nbias = 0.1")).unwrap();
    let invalid = dir.path().join("invalid.toml");
    fs::write(&invalid, good.replace("duration = 30.0", "duration = -1.0")).unwrap();
    let missing = dir.path().join("missing.toml");

    for path in [&unknown, &invalid, &missing] {
        let out = exe().arg("simulate").arg(path).arg("--out").arg(dir.path().join("o")).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "{}", path.display());
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["scenario", "print-canonical", "--variant", "bogus"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
