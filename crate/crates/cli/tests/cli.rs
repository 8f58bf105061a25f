use std::fs;
use std::path::Path;
use std::process::Command;

use regfrac_cli::{run_scenario, Report, ScenarioConfig};

const LINEAR: &str = r#"
name = "lin"
pipeline = "solve"
alpha = 0.75
mesh = { m = 32, gamma = 2.0 }
"#;

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn regfrac(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_regfrac")).args(args).output().unwrap()
}

#[test]
fn linear_scenario_reports_constant_solution() {
    let report = run_scenario(&ScenarioConfig::from_toml(LINEAR).unwrap()).unwrap();
    assert!(report.passed());
    assert!(report.value("constant_deviation[u_1]").unwrap() < 1e-9);
    assert_eq!(report.levels.len(), 1);
    assert!((report.levels[0].center - 1.0).abs() < 1e-9);
}

#[test]
fn binary_writes_tables_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "lin.toml", &format!("{LINEAR}problem = {{ levels = [1.0, 3.0] }}\n"));
    let out = dir.path().join("out");
    let o = regfrac(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--seedless"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let profile = fs::read_to_string(out.join("lin/profile.csv")).unwrap();
    assert_eq!(profile.lines().next().unwrap(), "x,rho,u_1,u_3");
    assert_eq!(profile.lines().count(), 33);
    let fits = fs::read_to_string(out.join("lin/fits.csv")).unwrap();
    assert!(fits.starts_with("name,beta,intercept"));

    // The JSON report's scenario echo passes the config validator unchanged.
    let text = fs::read_to_string(out.join("lin/report.json")).unwrap();
    let report: Report = serde_json::from_str(&text).unwrap();
    report.scenario.validate().unwrap();
    assert_eq!(report.scenario, ScenarioConfig::load(&cfg).unwrap());
    assert_eq!(report.version.len(), 16);
}

#[test]
fn output_toggles() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "lin.toml", LINEAR);
    let out = dir.path().join("o");
    let o = regfrac(&["phi", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(out.join("lin/report.json").exists());
    assert!(!out.join("lin/profile.csv").exists());
    let report: Report = serde_json::from_str(&fs::read_to_string(out.join("lin/report.json")).unwrap()).unwrap();
    assert_eq!(report.scenario.pipeline.name(), "phi");
}

#[test]
fn json_scenarios_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ScenarioConfig::from_toml(LINEAR).unwrap();
    let path = write(dir.path(), "lin.json", &serde_json::to_string(&cfg).unwrap());
    assert_eq!(ScenarioConfig::load(&path).unwrap(), cfg);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let out = out.to_str().unwrap();

    let missing = regfrac(&["run", "--config", "/nonexistent/x.toml", "--out", out]);
    assert_eq!(missing.status.code(), Some(1));

    let bad = write(dir.path(), "bad.toml", &LINEAR.replace("alpha = 0.75", "alpha = 1.5"));
    assert_eq!(regfrac(&["run", "--config", bad.to_str().unwrap(), "--out", out]).status.code(), Some(2));

    let low = write(dir.path(), "low.toml", &LINEAR.replace("alpha = 0.75", "alpha = 0.4"));
    let o = regfrac(&["blowup", "--config", low.to_str().unwrap(), "--out", out]);
    assert_eq!(o.status.code(), Some(2));

    let text = format!("{LINEAR}nonlinearity = {{ family = \"power\", p = 3.0 }}\nsolver = {{ max_iter = 1 }}\nproblem = {{ levels = [5.0] }}\n");
    let stuck = write(dir.path(), "stuck.toml", &text);
    let o = regfrac(&["run", "--config", stuck.to_str().unwrap(), "--out", out]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn levels_override() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"
name = "nx"
pipeline = "blowup"
alpha = 0.9
mesh = { m = 48, gamma = 2.0 }
nonlinearity = { family = "power", p = 2.0 }
solver = { b2_policy = "adaptive", levels = 9 }
"#;
    let cfg = write(dir.path(), "nx.toml", text);
    let out = dir.path().join("o");
    let o = regfrac(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--levels", "3", "--csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let header = fs::read_to_string(out.join("nx/profile.csv")).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header, "x,rho,u_1,u_2,u_4");
}
