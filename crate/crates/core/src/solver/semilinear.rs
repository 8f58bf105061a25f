use crate::error::{check_len, Error, Result};
use crate::linalg::Lu;
use crate::operator::OperatorMatrix;
use crate::scalar::{max_abs, Real};

use super::{GreenOperator, Nonlinearity, ShiftPolicy, SolutionField, SolverConfig, SourceField};

/// Relative slack allowed when certifying that iterates do not decrease.
pub(crate) const MONOTONE_SLACK: f64 = 1e-10;

/// [`MONOTONE_SLACK`], widened to a few ulps for scalars coarser than f64.
pub(crate) fn monotone_slack<T: Real>() -> T {
    T::lit(MONOTONE_SLACK).max(T::epsilon() * T::lit(64.0))
}

/// Solves A·u + coupling·trace + f(u) = g by the monotone iteration
/// (A + D)v_m = D·v_{m−1} − f(v_{m−1}) + g − coupling·trace started at v₀ = −b₁.
pub fn solve_semilinear<T: Real>(
    op: &OperatorMatrix<T>,
    f: &Nonlinearity<T>,
    src: &SourceField<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolutionField<T>> {
    solve_semilinear_from(op, f, src, cfg, None)
}

/// As [`solve_semilinear`]; `guess` seeds the Newton estimate used by the adaptive shift.
pub fn solve_semilinear_from<T: Real>(
    op: &OperatorMatrix<T>,
    f: &Nonlinearity<T>,
    src: &SourceField<T>,
    cfg: &SolverConfig<T>,
    guess: Option<&[T]>,
) -> Result<SolutionField<T>> {
    cfg.validate()?;
    let m = op.len();
    check_len(m, src.g().len())?;
    let trace = src.trace_values(op.mesh().boundary_count())?;
    let bt = op.trace_term(&trace)?;
    let rhs: Vec<T> = src.g().iter().zip(&bt).map(|(g, b)| *g - *b).collect();

    let green = GreenOperator::new(op)?;
    let g_plus: Vec<T> = src.g().iter().map(|g| g.max(T::zero())).collect();
    let g_minus: Vec<T> = src.g().iter().map(|g| (-*g).max(T::zero())).collect();
    let w_plus = green.apply(&g_plus)?;
    let w_minus = green.apply(&g_minus)?;
    let w_one = green.apply(&vec![T::one(); m])?;
    let n_hi = trace.iter().fold(T::neg_infinity(), |a, v| a.max(*v));
    let n_lo = trace.iter().fold(T::infinity(), |a, v| a.min(*v));
    let f_hi = f.eval(n_hi);
    let upper = n_hi + w_plus.iter().fold(T::neg_infinity(), |a, v| a.max(*v));
    let lower = (0..m).fold(T::infinity(), |a, i| a.min(n_lo - w_minus[i] - f_hi * w_one[i]));
    let b1 = upper.max(lower.abs()).max(n_hi.abs()).max(n_lo.abs());
    if !b1.is_finite() {
        return Err(Error::Divergence(format!("a-priori bound b₁ is not finite (n = {n_hi})")));
    }
    f.check_admissible(-b1, b1)?;

    let shift: Vec<T> = match cfg.b2_policy {
        ShiftPolicy::Uniform => vec![f.lipschitz(b1) + b1; m],
        ShiftPolicy::Adaptive => {
            let start: Vec<T> = match guess {
                Some(g) => {
                    check_len(m, g.len())?;
                    g.to_vec()
                }
                None => w_plus.iter().map(|w| n_hi + *w).collect(),
            };
            let est = newton(op, f, &rhs, start)?;
            est.iter()
                .map(|u| {
                    let top = *u + T::lit(1e-6) * (u.abs() + T::one());
                    f.lipschitz_on(-b1, top)
                })
                .collect()
        }
    };
    if shift.iter().any(|d| !d.is_finite()) {
        return Err(Error::Precondition(format!("{} is not Lipschitz on the a-priori box", f.label())));
    }
    let mut shifted = op.matrix().clone();
    shifted.add_diagonal(&shift)?;
    let lu = Lu::factor(&shifted)?;

    let mut v = vec![-b1; m];
    let slack = monotone_slack::<T>();
    let mut step = T::infinity();
    for it in 1..=cfg.max_iter {
        // Increment form: (A + D)δ = g − B·t − A·v − f(v), so rounding scales with δ rather than v.
        let av = op.matrix().mul_vec(&v)?;
        let r: Vec<T> = (0..m).map(|i| rhs[i] - av[i] - f.eval(v[i])).collect();
        let inc = lu.solve(&r)?;
        let next: Vec<T> = v.iter().zip(&inc).map(|(a, d)| *a + *d).collect();
        let mut delta = T::zero();
        for i in 0..m {
            let d = inc[i];
            if d < -slack * v[i].abs().max(T::one()) {
                return Err(Error::InvariantBreach(format!(
                    "monotone iteration decreased at node {i} in step {it} (by {})",
                    -d
                )));
            }
            delta = delta.max(d.abs());
        }
        v = next;
        step = delta / max_abs(&v).max(T::one());
        if !step.is_finite() {
            return Err(Error::Divergence(format!("iterate became non-finite at step {it}")));
        }
        if step <= cfg.tol_fixed_point {
            let eq = equation_residual(op, f, &v, &rhs)?;
            return Ok(SolutionField {
                mesh: op.shared_mesh(),
                values: v,
                trace,
                kind: op.kind(),
                level: src.level(),
                iterations: it,
                residual: step,
                equation_residual: eq,
                monotone: true,
            });
        }
    }
    Err(Error::NonConvergence { iterations: cfg.max_iter, residual: step.as_f64() })
}

fn equation_residual<T: Real>(op: &OperatorMatrix<T>, f: &Nonlinearity<T>, v: &[T], rhs: &[T]) -> Result<T> {
    let av = op.matrix().mul_vec(v)?;
    let mut worst = T::zero();
    for i in 0..v.len() {
        let fv = f.eval(v[i]);
        let r = av[i] + fv - rhs[i];
        let scale = (op.matrix()[(i, i)] * v[i]).abs() + fv.abs() + rhs[i].abs() + T::min_positive_value();
        worst = worst.max(r.abs() / scale);
    }
    Ok(worst)
}

/// Damped Newton iteration for A·u + f(u) = rhs.
pub(crate) fn newton<T: Real>(op: &OperatorMatrix<T>, f: &Nonlinearity<T>, rhs: &[T], start: Vec<T>) -> Result<Vec<T>> {
    let m = rhs.len();
    let residual = |u: &[T]| -> Result<Vec<T>> {
        let au = op.matrix().mul_vec(u)?;
        Ok((0..m).map(|i| au[i] + f.eval(u[i]) - rhs[i]).collect())
    };
    let mut u = start;
    let mut r = residual(&u)?;
    for _ in 0..200 {
        let mut jac = op.matrix().clone();
        let d: Vec<T> = u.iter().map(|x| f.derivative(*x)).collect();
        jac.add_diagonal(&d)?;
        let step = Lu::factor(&jac)?.solve(&r)?;
        let norm = max_abs(&r);
        let mut lambda = T::one();
        let mut accepted = None;
        for _ in 0..40 {
            let trial: Vec<T> = u.iter().zip(&step).map(|(x, s)| *x - lambda * *s).collect();
            let rt = residual(&trial)?;
            let nt = max_abs(&rt);
            if nt.is_finite() && (nt < norm || nt == T::zero()) {
                accepted = Some((trial, rt));
                break;
            }
            lambda = lambda * T::lit(0.5);
        }
        let Some((trial, rt)) = accepted else {
            break;
        };
        let moved = max_abs(&step) * lambda;
        u = trial;
        r = rt;
        if moved <= T::lit(1e-14) * max_abs(&u).max(T::one()) {
            break;
        }
    }
    Ok(u)
}
