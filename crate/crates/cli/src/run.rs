use std::time::Instant;

use regfrac_core::analysis::{
    decay_check, fit_mesh_values, nonexistence_diagnostics, sandwich_verdict, ExponentCheck, FitWindow,
    LambdaConfig, RateFit, refine_green_bound,
};
use regfrac_core::barriers::{build_barrier, certify_super_solution, ko_classify, refine_barrier_bound, Verdict};
use regfrac_core::geometry::{build_mesh, phi_on_mesh, Domain, FractionalOrder, GradedMesh};
use regfrac_core::operator::oracle::interval_image;
use regfrac_core::operator::{assemble, validate_against_oracle, OperatorKind};
use regfrac_core::solver::{
    blowup_limit, green_matrix, minimality_check, solve_semilinear, BlowupOutcome, LimitStatus, Nonlinearity,
    SolutionField, SolverConfig, SourceField, Trace,
};

use crate::config::{Pipeline, ScenarioConfig};
use crate::error::CliError;
use crate::report::{FitRow, KoRow, LevelRow, Report};

type Core<T> = regfrac_core::Result<T>;

/// Validates the scenario, runs its pipeline and collects the report.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut report = Report::new(cfg.clone());
    run_pipeline(cfg, &mut report).map_err(|e| CliError::core(&cfg.name, e))?;
    report.timing_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

struct Setup {
    domain: Domain<f64>,
    alpha: FractionalOrder<f64>,
    mesh: GradedMesh<f64>,
    f: Nonlinearity<f64>,
    solver: SolverConfig<f64>,
}

fn run_pipeline(cfg: &ScenarioConfig, report: &mut Report) -> Core<()> {
    let domain = cfg.domain.build()?;
    let alpha = FractionalOrder::new(cfg.alpha)?;
    let f = cfg.nonlinearity.build()?;
    if cfg.pipeline == Pipeline::Ko {
        return ko(cfg, &f, report);
    }
    let mesh = build_mesh(domain, cfg.mesh.m, cfg.mesh.gamma)?;
    let solver = cfg.solver.build();
    let s = Setup { domain, alpha, mesh, f, solver };
    report.profile.x = s.mesh.coords().to_vec();
    report.profile.rho = s.mesh.rho().to_vec();
    match cfg.pipeline {
        Pipeline::AssembleCheck => assemble_check(cfg, &s, report),
        Pipeline::Phi => phi(cfg, &s, report),
        Pipeline::Solve => solve(cfg, &s, report),
        Pipeline::Blowup => blowup(cfg, &s, report).map(|_| ()),
        Pipeline::Rates => rates(cfg, &s, report),
        Pipeline::GreenCheck => green(cfg, &s, report),
        Pipeline::BarrierCheck => barrier(cfg, &s, report),
        Pipeline::Ko => unreachable!("handled above"),
    }
}

fn window(cfg: &ScenarioConfig) -> Core<Option<FitWindow<f64>>> {
    cfg.analysis.fit_window.map(|[lo, hi]| FitWindow::new(lo, hi)).transpose()
}

fn fit_row(name: &str, fit: &RateFit<f64>, target: (f64, f64), pass: bool) -> FitRow {
    FitRow {
        name: name.to_string(),
        beta: fit.beta,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        rho_lo: fit.rho_lo,
        rho_hi: fit.rho_hi,
        nodes: fit.node_count,
        target_lo: target.0,
        target_hi: target.1,
        pass,
    }
}

fn exponent_row(name: &str, c: &ExponentCheck<f64>) -> FitRow {
    fit_row(name, &c.fitted, (c.target - c.tolerance, c.target + c.tolerance), c.pass)
}

/// Column label for boundary level n.
pub fn level_label(n: f64) -> String {
    if n.fract() == 0.0 && n.abs() < 1e15 {
        format!("u_{}", n as i64)
    } else {
        format!("u_{n}")
    }
}

fn level_row(u: &SolutionField<f64>) -> Core<LevelRow> {
    Ok(LevelRow {
        n: u.level.unwrap_or(f64::NAN),
        iterations: u.iterations,
        residual: u.residual,
        center: u.center_value()?,
        interior_change: None,
        boundary_growth: None,
    })
}

fn assemble_check(cfg: &ScenarioConfig, s: &Setup, report: &mut Report) -> Core<()> {
    let op = assemble(&s.mesh, s.alpha, cfg.kind.into())?;
    let reg = op.with_kind(OperatorKind::Regional);
    let m = s.mesh.len();
    let ones = reg.apply(&vec![1.0; m], &vec![1.0; s.mesh.boundary_count()])?;
    let scale = reg.max_row_abs_sum();
    let residual = ones.iter().fold(0.0f64, |a, v| a.max(v.abs())) / scale;
    report.result("constant_residual", residual, Some(1e-8), None);
    report.result("max_row_abs_sum", scale, None, None);
    report.check("constants_annihilated", residual <= 1e-8, format!("relative residual {residual:e}"));

    let a = op.matrix();
    let b = op.boundary_coupling();
    let signs = (0..m).all(|i| {
        a[(i, i)] > 0.0 && (0..m).all(|j| i == j || a[(i, j)] <= 0.0) && (0..b.cols()).all(|k| b[(i, k)] <= 0.0)
    });
    report.check("m_matrix_signs", signs, "positive diagonal, nonpositive off-diagonal and coupling");

    if !cfg.analysis.oracle_probes.is_empty() {
        let Domain::Interval { a: lo, b: hi } = s.domain else {
            unreachable!("validated: oracle probes need an interval")
        };
        let al = s.alpha.value();
        let kind = op.kind();
        let test = move |x: f64| ((x - lo) * (hi - x)).max(0.0).powf(al);
        let zero_trace = vec![0.0; s.mesh.boundary_count()];
        let oracle = validate_against_oracle(
            &op,
            |x, _| test(x),
            &zero_trace,
            |x, _| interval_image(test, lo, hi, al, kind, x, &[lo, hi]),
            &cfg.analysis.oracle_probes,
        )?;
        let tol = cfg.analysis.oracle_tolerance;
        for p in &oracle.probes {
            report.result(&format!("oracle[x={}]", p.coord), p.computed, Some(tol), None);
        }
        report.result("oracle_max_rel_err", oracle.max_rel_err, Some(tol), None);
        report.check(
            "oracle_agreement",
            oracle.max_rel_err <= tol,
            format!("max relative error {:e} over {} probes", oracle.max_rel_err, oracle.probes.len()),
        );
        if kind == OperatorKind::Full {
            let vals: Vec<f64> = oracle.probes.iter().map(|p| p.computed).collect();
            let hi_v = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo_v = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let spread = (hi_v - lo_v) / hi_v.abs();
            report.result("image_spread", spread, Some(tol), None);
            report.check("image_constant", spread <= tol, format!("relative spread {spread:e}"));
        }
        let u: Vec<f64> = s.mesh.coords().iter().map(|x| test(*x)).collect();
        report.profile.columns.push(("test".into(), u.clone()));
        report.profile.columns.push(("image".into(), op.apply(&u, &zero_trace)?));
    } else {
        report.profile.columns.push(("constant_image".into(), ones));
    }
    Ok(())
}

fn phi(cfg: &ScenarioConfig, s: &Setup, report: &mut Report) -> Core<()> {
    let values = phi_on_mesh(&s.mesh, s.alpha)?;
    let fit = fit_mesh_values(&s.mesh, &values, window(cfg)?)?;
    let check = ExponentCheck::new(-2.0 * s.alpha.value(), cfg.analysis.phi_tolerance, fit);
    report.result("phi_exponent", fit.beta, Some(check.tolerance), Some([fit.rho_lo, fit.rho_hi]));
    report.fits.push(exponent_row("phi", &check));
    report.check("phi_exponent", check.pass, format!("β = {:.4}, target {}", fit.beta, check.target));
    report.profile.columns.push(("phi".into(), values));
    Ok(())
}

fn solve(cfg: &ScenarioConfig, s: &Setup, report: &mut Report) -> Core<()> {
    let op = assemble(&s.mesh, s.alpha, cfg.kind.into())?;
    let m = s.mesh.len();
    let mut prev: Option<SolutionField<f64>> = None;
    let mut ordered = true;
    for &n in &cfg.problem.levels {
        let src = SourceField::new(vec![cfg.problem.g; m], Trace::Constant(n))?;
        let u = solve_semilinear(&op, &s.f, &src, &s.solver)?;
        report.levels.push(level_row(&u)?);
        let label = level_label(n);
        report.result(&format!("equation_residual[{label}]"), u.equation_residual, None, None);
        report.check(&format!("monotone_iteration[{label}]"), u.monotone, format!("{} iterations", u.iterations));
        if s.f.is_zero() && cfg.problem.g == 0.0 {
            let dev = u.values.iter().fold(0.0f64, |a, v| a.max((v - n).abs()));
            report.result(&format!("constant_deviation[{label}]"), dev, Some(1e-9), None);
            report.check(&format!("constant_solution[{label}]"), dev <= 1e-9 * n.abs().max(1.0), format!("sup |u − n| = {dev:e}"));
        } else if cfg.problem.g == 0.0 && n > 0.0 {
            let c = decay_check(&u, s.alpha, window(cfg)?, cfg.analysis.decay_tolerance)?;
            report.result(&format!("decay_exponent[{label}]"), c.fitted.beta, Some(c.tolerance), Some([c.fitted.rho_lo, c.fitted.rho_hi]));
            report.fits.push(exponent_row(&format!("decay[{label}]"), &c));
            report.check(&format!("decay_exponent[{label}]"), c.pass, format!("β = {:.4}, target {}", c.fitted.beta, c.target));
        }
        if let Some(p) = &prev {
            if p.level.is_some_and(|pn| pn <= n) {
                ordered &= p.values.iter().zip(&u.values).all(|(a, b)| *b >= *a - 1e-10);
            }
        }
        report.profile.columns.push((label, u.values.clone()));
        prev = Some(u);
    }
    if cfg.problem.levels.len() > 1 {
        report.check("ordered_in_level", ordered, "u_n nondecreasing in n within 1e-10");
    }
    Ok(())
}

fn record_outcome(report: &mut Report, out: &BlowupOutcome<f64>) {
    for (s, u) in out.summaries.iter().zip(&out.levels) {
        report.levels.push(LevelRow {
            n: s.n,
            iterations: s.iterations,
            residual: s.residual,
            center: s.center,
            interior_change: s.interior_change,
            boundary_growth: s.boundary_growth,
        });
        report.profile.columns.push((level_label(s.n), u.values.clone()));
    }
    report.result("levels_computed", out.levels.len() as f64, None, None);
    report.result("top_level", out.limit().level.unwrap_or(f64::NAN), None, None);
    if let Some(k) = out.divergence_level {
        report.result("divergence_level", k as f64, None, None);
    }
    report.notes.push(format!("limit status: {:?}", out.status));
    report.notes.extend(out.notes.iter().cloned());
}

fn top_ratio(out: &BlowupOutcome<f64>) -> f64 {
    let c = out.centers();
    match c.len() {
        0 | 1 => f64::NAN,
        k => c[k - 1] / c[k - 2],
    }
}

/// q ≤ 1 + 2α and q < α/(1 − α).
fn nonexistence_regime(alpha: f64, f: &Nonlinearity<f64>) -> bool {
    f.exponents().is_some_and(|(_, q)| q > 1.0 && q <= 1.0 + 2.0 * alpha && q < alpha / (1.0 - alpha))
}

fn blowup(cfg: &ScenarioConfig, s: &Setup, report: &mut Report) -> Core<BlowupOutcome<f64>> {
    let op = assemble(&s.mesh, s.alpha, cfg.kind.into())?;
    let out = blowup_limit(&op, &s.f, &s.solver)?;
    record_outcome(report, &out);
    let ratio = top_ratio(&out);
    report.result("top_center_ratio", ratio, Some(cfg.analysis.center_ratio), None);
    let regional = op.kind() == OperatorKind::Regional;
    if regional && nonexistence_regime(s.alpha.value(), &s.f) {
        let diag = nonexistence_diagnostics(&out.levels, &s.f, s.alpha, LambdaConfig::Fitted)?;
        report.check("nonexistence_signal", out.nonexistence_signal(), format!("status {:?}", out.status));
        report.check(
            "centers_strictly_increasing",
            diag.centers_strictly_increasing,
            format!("{} levels", diag.centers.len()),
        );
        report.result("layer_lambda", diag.lambda, None, None);
        let tol = cfg.analysis.layer_tolerance;
        match diag.layer_slope {
            Some((slope, used)) => {
                report.result("layer_exponent", slope, Some(tol), None);
                report.check(
                    "layer_exponent",
                    (slope - diag.predicted_slope).abs() <= tol,
                    format!("slope {slope:.4} over {used} levels, predicted {:.4}", diag.predicted_slope),
                );
            }
            None => report.check("layer_exponent", false, "layer not resolved on enough levels"),
        }
        let held = diag.samples.iter().filter(|x| x.bound_holds == Some(true)).count();
        let tested = diag.samples.iter().filter(|x| x.bound_holds.is_some()).count();
        report.result("layer_bound_levels_held", held as f64, None, None);
        report.result("layer_bound_levels_tested", tested as f64, None, None);
        report.notes.extend(diag.notes);
    } else {
        report.check("limit_converged", out.status == LimitStatus::Converged, format!("status {:?}", out.status));
        report.check(
            "top_center_ratio",
            ratio <= cfg.analysis.center_ratio,
            format!("u_top(0)/u_prev(0) = {ratio:.6}"),
        );
    }
    Ok(out)
}

fn rates(cfg: &ScenarioConfig, s: &Setup, report: &mut Report) -> Core<()> {
    let op = assemble(&s.mesh, s.alpha, cfg.kind.into())?;
    let out = blowup_limit(&op, &s.f, &s.solver)?;
    record_outcome(report, &out);
    let limit = out.limit();
    let win = window(cfg)?;
    let v = sandwich_verdict(limit, &s.f, s.alpha, win, cfg.analysis.inflation)?;
    let fit = v.fitted;
    report.result("rate_exponent", fit.beta, Some(v.inflation), Some([fit.rho_lo, fit.rho_hi]));
    report.fits.push(fit_row(
        "sandwich",
        &fit,
        (-(v.predicted_upper + v.inflation), -(v.predicted_lower - v.inflation)),
        v.pass,
    ));
    report.check(
        "sandwich",
        v.pass,
        format!("|β| = {:.4} against [{:.4}, {:.4}] ± {}", -fit.beta, v.predicted_lower, v.predicted_upper, v.inflation),
    );
    let base = win.unwrap_or_else(|| FitWindow::default_for(&s.mesh));
    let half = sandwich_verdict(limit, &s.f, s.alpha, Some(base.halved()), cfg.analysis.inflation)?;
    let shift = (half.fitted.beta - fit.beta).abs();
    report.result("window_sensitivity", shift, Some(0.05), Some([half.fitted.rho_lo, half.fitted.rho_hi]));
    report.fits.push(fit_row("sandwich_half_window", &half.fitted, (fit.beta - 0.05, fit.beta + 0.05), shift < 0.05));
    report.check("window_sensitivity", shift < 0.05, format!("halving the window moved β by {shift:.4}"));
    match op.kind() {
        OperatorKind::Regional => {
            report.check("limit_converged", out.status == LimitStatus::Converged, format!("status {:?}", out.status));
        }
        OperatorKind::Full => {
            if let Some((p, q)) = s.f.exponents().filter(|(p, q)| p == q) {
                let target = -2.0 * s.alpha.value() / (p - 1.0);
                let c = ExponentCheck::new(target, 0.1, fit);
                report.fits.push(exponent_row("exact_rate", &c));
                report.check("exact_rate", c.pass, format!("β = {:.4}, target {target:.4} (q = {q})", fit.beta));
            }
        }
    }
    Ok(())
}

fn ko(cfg: &ScenarioConfig, f: &Nonlinearity<f64>, report: &mut Report) -> Core<()> {
    let mut cases: Vec<(Nonlinearity<f64>, f64)> = Vec::new();
    if f.exponents().is_some() {
        cases.push((f.clone(), cfg.alpha));
    }
    let orders = if cfg.analysis.ko_orders.is_empty() { vec![cfg.alpha] } else { cfg.analysis.ko_orders.clone() };
    for &a in &orders {
        for &p in &cfg.analysis.ko_exponents {
            cases.push((Nonlinearity::power(cfg.nonlinearity.c, p)?, a));
        }
    }
    let verdict = |v: Verdict| match v {
        Verdict::Converges => "converges".to_string(),
        Verdict::Diverges => "diverges".to_string(),
    };
    for (g, a) in cases {
        let r = ko_classify(&g, a)?;
        let p = g.exponents().map_or(f64::NAN, |e| e.0);
        if let Some(agree) = r.agrees_with_analytic() {
            report.check(&format!("ko[p={p},alpha={a}]"), agree, format!("ko {:?}, tail {:?}", r.ko, r.tail_condition));
        }
        report.ko.push(KoRow {
            p,
            alpha: a,
            ko: verdict(r.ko),
            tail_condition: verdict(r.tail_condition),
            ko_tails: r.ko_tails,
            tail_condition_tails: r.tail_condition_tails,
            tail_exponent: r.tail_exponent,
        });
    }
    Ok(())
}

fn green(cfg: &ScenarioConfig, s: &Setup, report: &mut Report) -> Core<()> {
    let r = refine_green_bound(s.domain, s.alpha, cfg.mesh.m, cfg.mesh.gamma)?;
    let tol = cfg.analysis.refinement_tolerance;
    report.result("bound_ratio_coarse", r.coarse.ratio, None, None);
    report.result("bound_ratio_fine", r.fine.ratio, None, None);
    report.result("bound_ratio_change", r.relative_change, Some(tol), None);
    report.result("min_entry_ratio", r.min_entry_ratio, Some(-1e-10), None);
    report.result("density_symmetry_defect", r.symmetry_defect, None, None);
    report.check("bound_ratio_finite", r.coarse.ratio.is_finite() && r.fine.ratio.is_finite(), format!("{:?} form", r.coarse.form));
    report.check("bound_ratio_stable", r.relative_change < tol, format!("relative change {:.4}", r.relative_change));
    report.check("nonnegative", r.min_entry_ratio >= -1e-10, format!("min entry / max entry = {:e}", r.min_entry_ratio));
    let op = assemble(&s.mesh, s.alpha, OperatorKind::Regional)?;
    let g = green_matrix(&op)?;
    let c = s.mesh.center_indices()[0];
    let density: Vec<f64> = (0..s.mesh.len()).map(|i| g.density(i, c)).collect();
    report.profile.columns.push(("green_density_center".into(), density));
    Ok(())
}

fn barrier(cfg: &ScenarioConfig, s: &Setup, report: &mut Report) -> Core<()> {
    let tau = cfg.analysis.tau;
    let r = refine_barrier_bound(s.domain, s.alpha, cfg.mesh.m, cfg.mesh.gamma, tau, cfg.analysis.t0)?;
    let tol = cfg.analysis.refinement_tolerance;
    report.result("barrier_sup_coarse", r.coarse.sup, None, None);
    report.result("barrier_sup_fine", r.fine.sup, None, None);
    report.result("barrier_sup_change", r.relative_change, Some(tol), None);
    report.check("barrier_finite", r.coarse.all_finite && r.fine.all_finite, "all weighted images finite");
    report.check("barrier_stable", r.relative_change < tol, format!("relative change {:.4}", r.relative_change));
    let b = build_barrier(&s.mesh, tau, cfg.analysis.t0)?;
    report.profile.columns.push(("barrier".into(), b.values().to_vec()));
    report.profile.columns.push(("weighted_image".into(), r.coarse.profile.clone()));
    if s.f.is_zero() {
        return Ok(());
    }
    let op = assemble(&s.mesh, s.alpha, OperatorKind::Regional)?;
    let cert = certify_super_solution(&op, &b, &s.f, 1.0, cfg.analysis.lambda_cap)?;
    let cap = 2f64.powi(cfg.analysis.lambda_cap as i32);
    report.check(
        "super_solution",
        cert.certified.is_some(),
        match cert.certified {
            Some(l) => format!("λ = {l} certifies λV as a super-solution"),
            None => format!("no λ ≤ {cap} certifies"),
        },
    );
    let Some(lambda) = cert.certified else { return Ok(()) };
    report.result("certified_lambda", lambda, Some(cap), None);
    if !cfg.analysis.compare_limit {
        return Ok(());
    }
    let out = blowup_limit(&op, &s.f, &s.solver)?;
    let limit = out.limit();
    report.notes.push(format!("limit status: {:?} at n = {}", out.status, limit.level.unwrap_or(f64::NAN)));
    let excess = limit
        .values
        .iter()
        .zip(b.values())
        .fold(f64::NEG_INFINITY, |a, (u, v)| a.max(u - lambda * v));
    report.result("limit_minus_barrier", excess, Some(1e-8), None);
    report.check("limit_below_barrier", excess <= 1e-8, format!("max(u − λV) = {excess:e}"));
    let mini = minimality_check(&op, &s.f, &s.solver, limit, &b, lambda)?;
    report.result("minimality_gap", mini.gap, None, None);
    report.check("minimality", mini.gap >= -1e-8, format!("decreasing iteration from λV stays above u; gap {:e}", mini.gap));
    report.profile.columns.push((level_label(limit.level.unwrap_or(f64::NAN)), limit.values.clone()));
    Ok(())
}
