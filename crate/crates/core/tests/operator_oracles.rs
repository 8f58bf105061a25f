use regfrac_core::geometry::{build_mesh, Domain, FractionalOrder};
use regfrac_core::operator::oracle::interval_image;
use regfrac_core::operator::{assemble, validate_against_oracle, OperatorKind, OperatorMatrix};

fn interval_op(m: usize, gamma: f64, alpha: f64, kind: OperatorKind) -> OperatorMatrix<f64> {
    let mesh = build_mesh(Domain::interval(-1.0, 1.0).unwrap(), m, gamma).unwrap();
    assemble(&mesh, FractionalOrder::new(alpha).unwrap(), kind).unwrap()
}

fn full_power(alpha: f64) -> impl Fn(f64, f64) -> f64 {
    // (1 − x²)^α written through the boundary distance, (ρ(2 − ρ))^α.
    move |_x, rho| (rho * (2.0 - rho)).powf(alpha)
}

#[test]
fn constants_are_annihilated() {
    for &m in &[128, 512] {
        let op = interval_op(m, 3.0, 0.75, OperatorKind::Regional);
        let r = op.apply(&vec![1.0; m], &[1.0, 1.0]).unwrap();
        let tol = 1e-8 * op.max_row_abs_sum();
        assert!(r.iter().all(|v| v.abs() <= tol));
    }
}

#[test]
fn full_power_image_matches_quadrature_oracle() {
    let alpha = 0.75;
    let op = interval_op(512, 3.0, alpha, OperatorKind::Full);
    let oracle = |x: f64, _rho: f64| {
        interval_image(|y| (1.0 - y * y).max(0.0).powf(alpha), -1.0, 1.0, alpha, OperatorKind::Full, x, &[-1.0, 1.0])
    };
    let probes = [-0.9, -0.45, 0.0, 0.3, 0.85];
    let report = validate_against_oracle(&op, full_power(alpha), &[0.0, 0.0], oracle, &probes).unwrap();
    assert!(report.max_rel_err <= 5e-3, "max rel err {}", report.max_rel_err);
    // The image is the constant Γ(2α+1)·√π·Γ(1−α)/(α·2^{2α}·Γ(1/2+α)) under this kernel normalization.
    let expect = 1.329_340_388_179_137 * 1.772_453_850_905_516 * 3.625_609_908_221_908
        / (0.75 * 2.828_427_124_746_19 * 0.906_402_477_055_477);
    for p in &report.probes {
        assert!((p.exact - expect).abs() < 1e-6 * expect, "oracle {} vs {}", p.exact, expect);
    }
    let u: Vec<f64> = op.mesh().rho().iter().map(|r| (r * (2.0 - r)).powf(alpha)).collect();
    let img = op.apply(&u, &[0.0, 0.0]).unwrap();
    let vals: Vec<f64> = op.mesh().rho().iter().zip(&img).filter(|(r, _)| **r >= 0.1).map(|(_, v)| *v).collect();
    let (lo, hi) = vals.iter().fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(*v), b.max(*v)));
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    assert!((hi - lo) / mean <= 5e-3, "spread {}", (hi - lo) / mean);
}

#[test]
fn odd_function_vanishes_at_center() {
    let op = interval_op(65, 2.0, 0.75, OperatorKind::Regional);
    let u: Vec<f64> = op.mesh().coords().iter().map(|x| x * x * x + x).collect();
    let r = op.apply(&u, &[-2.0, 2.0]).unwrap();
    let scale = op.max_row_abs_sum();
    assert!(r[32].abs() <= 1e-12 * scale, "{}", r[32]);
}

#[test]
fn full_minus_regional_is_phi_times_u() {
    let reg = interval_op(96, 3.0, 0.6, OperatorKind::Regional);
    let full = reg.with_kind(OperatorKind::Full);
    let u: Vec<f64> = reg.mesh().coords().iter().map(|x| (1.0 - x * x) * (2.0 + x)).collect();
    let a = full.apply(&u, &[0.0, 0.0]).unwrap();
    let b = reg.apply(&u, &[0.0, 0.0]).unwrap();
    for i in 0..96 {
        let expect = reg.phi()[i] * u[i];
        assert!((a[i] - b[i] - expect).abs() <= 1e-8 * expect.abs().max(1e-300) + 1e-12 * a[i].abs());
    }
}

fn bump(x: f64) -> f64 {
    let z = 2.0 * x;
    if z.abs() < 1.0 {
        (-1.0 / (1.0 - z * z)).exp()
    } else {
        0.0
    }
}

/// Trapezoid rule on 10⁶ points of the symmetrized regional integrand, in the
/// variable s = √t so the t^{−1/2} behaviour at the node becomes smooth. Below
/// t = 10⁻⁴ the symmetric difference is replaced by its Taylor term.
fn trapezoid_regional_bump(x: f64, alpha: f64) -> f64 {
    let beta = 1.0 + 2.0 * alpha;
    let near = 1.0 - x.abs();
    let t_head: f64 = 1e-4;
    let h2 = 1e-3;
    let d2 = (bump(x + h2) - 2.0 * bump(x) + bump(x - h2)) / (h2 * h2);
    let head = -d2 * t_head.powf(2.0 - 2.0 * alpha) / (2.0 - 2.0 * alpha);
    let n = 1_000_000;
    let (s0, s1) = (t_head.sqrt(), near.sqrt());
    let h = (s1 - s0) / n as f64;
    let mut acc = 0.0;
    for k in 0..=n {
        let sv = s0 + k as f64 * h;
        let t = sv * sv;
        let w = if k == 0 || k == n { 0.5 } else { 1.0 };
        acc += w * (2.0 * bump(x) - bump(x + t) - bump(x - t)) * t.powf(-beta) * 2.0 * sv;
    }
    let far = 1.0 + x.abs();
    let m = 1_000_000;
    let hf = (far - near) / m as f64;
    let sign = if x >= 0.0 { -1.0 } else { 1.0 };
    let mut o = 0.0;
    for k in 0..=m {
        let t = near + k as f64 * hf;
        let w = if k == 0 || k == m { 0.5 } else { 1.0 };
        o += w * (bump(x) - bump(x + sign * t)) * t.powf(-beta);
    }
    head + acc * h + o * hf
}

#[test]
fn bump_matches_brute_force_and_refines() {
    let alpha = 0.75;
    let probes = [0.0, 0.2, -0.25];
    for &x in &probes {
        let brute = trapezoid_regional_bump(x, alpha);
        let adaptive = interval_image(bump, -1.0, 1.0, alpha, OperatorKind::Regional, x, &[-0.5, 0.5]).unwrap();
        assert!((brute - adaptive).abs() <= 1e-4 * brute.abs(), "x={x}: {brute} vs {adaptive}");
    }
    let mut errs = Vec::new();
    for &m in &[128, 256, 512] {
        let op = interval_op(m, 1.0, alpha, OperatorKind::Regional);
        let rep = validate_against_oracle(
            &op,
            |x, _| bump(x),
            &[0.0, 0.0],
            |x, _| interval_image(bump, -1.0, 1.0, alpha, OperatorKind::Regional, x, &[-0.5, 0.5]),
            &probes,
        )
        .unwrap();
        errs.push(rep.max_rel_err);
    }
    assert!(errs[2] <= 1e-3, "errors {errs:?}");
    assert!(errs[1] <= 2.0 * errs[0] && errs[2] <= 2.0 * errs[1], "errors {errs:?}");
}
