//! Runs the checked-in scenarios and prints one line per acceptance criterion.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use regfrac_cli::{emit_tables, run_scenario, Outputs, Report, ScenarioConfig};

struct Run {
    report: Report,
    deterministic: bool,
}

fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

fn csv_bytes(report: &Report, dir: &Path) -> Vec<(String, Vec<u8>)> {
    let files = emit_tables(report, dir, Outputs { csv: true, json: false }).expect("write tables");
    files
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect()
}

/// Runs a scenario twice and compares the CSV bytes of both runs.
fn run_twice(name: &str) -> Result<Run, String> {
    let cfg = ScenarioConfig::load(&scenario_dir().join(format!("{name}.toml"))).map_err(|e| e.to_string())?;
    let first = run_scenario(&cfg).map_err(|e| e.to_string())?;
    let second = run_scenario(&cfg).map_err(|e| e.to_string())?;
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let deterministic = csv_bytes(&first, a.path()) == csv_bytes(&second, b.path());
    Ok(Run { report: first, deterministic })
}

struct Suite {
    runs: BTreeMap<String, Result<Run, String>>,
}

impl Suite {
    fn get(&mut self, name: &str) -> Result<&Report, String> {
        self.runs
            .entry(name.to_string())
            .or_insert_with(|| run_twice(name))
            .as_ref()
            .map(|r| &r.report)
            .map_err(|e| format!("{name}: {e}"))
    }
}

fn check<'a>(r: &'a Report, name: &str) -> Result<&'a regfrac_cli::report::Check, String> {
    r.find_check(name).ok_or_else(|| format!("{}: missing check {name}", r.scenario.name))
}

fn value(r: &Report, name: &str) -> Result<f64, String> {
    r.value(name).ok_or_else(|| format!("{}: missing result {name}", r.scenario.name))
}

type Outcome = Result<(bool, String), String>;
type Criterion = (&'static str, fn(&mut Suite) -> Outcome);

fn c1(s: &mut Suite) -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for name in ["assemble_regional_128", "assemble_regional"] {
        let r = s.get(name)?;
        let res = value(r, "constant_residual")?;
        ok &= res <= 1e-8;
        detail.push(format!("M={}: {res:.1e}", r.scenario.mesh.m));
    }
    Ok((ok, format!("residual / max row sum {}", detail.join(", "))))
}

fn c2(s: &mut Suite) -> Outcome {
    let r = s.get("oracle_full")?;
    let err = value(r, "oracle_max_rel_err")?;
    let spread = value(r, "image_spread")?;
    let probes = r.results.iter().filter(|x| x.name.starts_with("oracle[")).count();
    Ok((err <= 5e-3 && spread <= 5e-3 && probes >= 3, format!("max rel err {err:.2e}, spread {spread:.2e}, {probes} probes")))
}

fn c3(s: &mut Suite) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for name in ["phi_06", "phi_075", "phi_09"] {
        let r = s.get(name)?;
        let beta = value(r, "phi_exponent")?;
        let target = -2.0 * r.scenario.alpha;
        ok &= (beta - target).abs() <= 0.05;
        detail.push(format!("α={}: {beta:.4}", r.scenario.alpha));
    }
    Ok((ok, detail.join(", ")))
}

fn c4(s: &mut Suite) -> Outcome {
    let r = s.get("finite_decay")?;
    let beta = value(r, "decay_exponent[u_8]")?;
    Ok(((beta - 0.5).abs() <= 0.1, format!("fitted exponent {beta:.4}")))
}

fn c5(s: &mut Suite) -> Outcome {
    let r = s.get("comparison")?;
    let ordered = check(r, "ordered_in_level")?.pass;
    let monotone = r.checks.iter().filter(|c| c.name.starts_with("monotone_iteration")).all(|c| c.pass);
    let levels: Vec<f64> = r.levels.iter().map(|l| l.n).collect();
    let ok = ordered && monotone && levels == [1.0, 2.0, 4.0, 8.0];
    Ok((ok, format!("levels {levels:?}, ordered {ordered}, monotone iterations {monotone}")))
}

fn c6(s: &mut Suite) -> Outcome {
    let r = s.get("existence_rates")?;
    let beta = value(r, "rate_exponent")?;
    let converged = check(r, "limit_converged")?.pass;
    let mag = -beta;
    let ok = converged && (1.0 / 6.0 - 0.05..=0.5 + 0.05).contains(&mag) && r.scenario.solver.tol_limit == 1e-6;
    let top = value(r, "top_level")?;
    Ok((ok, format!("|β| = {mag:.4}, converged {converged} at n = {top}")))
}

fn c7(s: &mut Suite) -> Outcome {
    let r = s.get("full_rates")?;
    let mag = -value(r, "rate_exponent")?;
    Ok(((mag - 0.5).abs() <= 0.1, format!("|β| = {mag:.4}")))
}

fn c8(s: &mut Suite) -> Outcome {
    let r = s.get("nonexistence")?;
    let centers: Vec<f64> = r.levels.iter().map(|l| l.center).collect();
    let increasing = centers.windows(2).all(|w| w[1] > w[0]);
    let top_n = r.levels.last().map_or(0.0, |l| l.n);
    let signal = check(r, "nonexistence_signal")?.pass;
    let growth = centers.last().unwrap_or(&f64::NAN) / centers.first().unwrap_or(&f64::NAN);
    let c = s.get("existence_contrast")?;
    let ratio = value(c, "top_center_ratio")?;
    let ok = increasing && signal && top_n >= 1024.0 && ratio <= 1.05;
    Ok((
        ok,
        format!("centres increasing {increasing} to n = {top_n} (growth ×{growth:.1}), signal {signal}; contrast ratio {ratio:.6}"),
    ))
}

fn c9(s: &mut Suite) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for name in ["barrier_075", "barrier_09"] {
        let r = s.get(name)?;
        let change = value(r, "barrier_sup_change")?;
        ok &= change < 0.2;
        detail.push(format!("α={}, τ={}: {:.1}%", r.scenario.alpha, r.scenario.analysis.tau, 100.0 * change));
    }
    Ok((ok, detail.join(", ")))
}

fn c10(s: &mut Suite) -> Outcome {
    let r = s.get("supersolution")?;
    let lambda = value(r, "certified_lambda")?;
    let excess = value(r, "limit_minus_barrier")?;
    Ok((lambda <= 1024.0 && excess <= 1e-8, format!("λ = {lambda}, max(u − λV) = {excess:.3e}")))
}

fn c11(s: &mut Suite) -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for name in ["green_075", "green_09"] {
        let r = s.get(name)?;
        let coarse = value(r, "bound_ratio_coarse")?;
        let change = value(r, "bound_ratio_change")?;
        let min = value(r, "min_entry_ratio")?;
        ok &= coarse.is_finite() && change < 0.25 && min >= -1e-10;
        detail.push(format!("α={}: R={coarse:.4}, change {:.1}%, min {min:.1e}", r.scenario.alpha, 100.0 * change));
    }
    Ok((ok, detail.join("; ")))
}

/// ∫ ds/√F converges iff p > 1; ∫ s^{p−1−(1+α)/(1−α)} ds converges iff p < (1+α)/(1−α).
fn analytic(p: f64, alpha: f64) -> (&'static str, &'static str) {
    let ko = if p > 1.0 { "converges" } else { "diverges" };
    let tail = if p < (1.0 + alpha) / (1.0 - alpha) { "converges" } else { "diverges" };
    (ko, tail)
}

fn c12(s: &mut Suite) -> Outcome {
    let r = s.get("ko")?;
    let mut seen = 0;
    let mut wrong = Vec::new();
    for alpha in [0.6, 0.75, 0.9] {
        for p in [0.5, 1.0, 2.0, 5.0, 8.0] {
            let Some(row) = r.ko.iter().find(|k| k.p == p && k.alpha == alpha) else {
                wrong.push(format!("missing p={p}, α={alpha}"));
                continue;
            };
            seen += 1;
            if (row.ko.as_str(), row.tail_condition.as_str()) != analytic(p, alpha) {
                wrong.push(format!("p={p}, α={alpha}"));
            }
        }
    }
    Ok((wrong.is_empty(), format!("{seen}/15 cases classified, mismatches {wrong:?}")))
}

fn c13(s: &mut Suite) -> Outcome {
    let mut names: Vec<String> = fs::read_dir(scenario_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.ok()?.path();
            let stem = p.file_stem()?.to_string_lossy().into_owned();
            (p.extension()? == "toml").then_some(stem)
        })
        .collect();
    names.sort();
    let mut bad = Vec::new();
    for n in &names {
        s.get(n)?;
        if !s.runs[n].as_ref().is_ok_and(|r| r.deterministic) {
            bad.push(n.clone());
        }
    }
    Ok((bad.is_empty(), format!("{} scenarios, differing {bad:?}", names.len())))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("constant annihilation", c1),
        ("full operator oracle", c2),
        ("exterior mass exponent", c3),
        ("finite-level decay", c4),
        ("comparison and monotone iteration", c5),
        ("blow-up sandwich", c6),
        ("full operator rate", c7),
        ("nonexistence signal", c8),
        ("barrier bound", c9),
        ("super-solution certificate", c10),
        ("Green bound", c11),
        ("KO classifiers", c12),
        ("determinism", c13),
    ];
    let mut suite = Suite { runs: BTreeMap::new() };
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let (pass, detail) = f(&mut suite).unwrap_or_else(|e| (false, format!("error: {e}")));
        if !pass {
            failed += 1;
        }
        println!("criterion {:>2} {}: {title}: {detail}", i + 1, if pass { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
