use crate::barriers::Barrier;
use crate::error::{check_len, Error, Result};
use crate::linalg::Lu;
use crate::operator::{OperatorKind, OperatorMatrix};
use crate::scalar::{max_abs, Real};

use super::semilinear::monotone_slack;
use super::{solve_semilinear_from, Nonlinearity, SolutionField, SolverConfig, SourceField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitStatus {
    /// Interior sup-difference between consecutive levels fell below the tolerance.
    Converged,
    /// Centre increments kept growing; the solutions do not saturate.
    Diverging,
    /// The mesh stopped resolving the boundary layer before convergence.
    ResolutionLimited,
    /// The schedule ended without a verdict.
    CapReached,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSummary<T> {
    pub n: T,
    pub iterations: usize,
    pub residual: T,
    pub center: T,
    /// Relative interior sup-difference to the previous level.
    pub interior_change: Option<T>,
    /// Growth exponent of the boundary node value relative to the previous level.
    pub boundary_growth: Option<T>,
}

#[derive(Debug, Clone)]
pub struct BlowupOutcome<T> {
    pub status: LimitStatus,
    /// Solutions at every computed level, in schedule order.
    pub levels: Vec<SolutionField<T>>,
    pub summaries: Vec<LevelSummary<T>>,
    /// Level index at which the divergence proxy fired.
    pub divergence_level: Option<usize>,
    /// Set when (f, kind) lies outside the existence hypotheses.
    pub experimental: bool,
    pub notes: Vec<String>,
}

impl<T: Real> BlowupOutcome<T> {
    /// Solution at the last computed level.
    pub fn limit(&self) -> &SolutionField<T> {
        self.levels.last().expect("blow-up outcome holds at least one level")
    }

    pub fn centers(&self) -> Vec<T> {
        self.summaries.iter().map(|s| s.center).collect()
    }

    /// True when the run reports interior divergence.
    pub fn nonexistence_signal(&self) -> bool {
        self.divergence_level.is_some() && self.status != LimitStatus::Converged
    }
}

/// Solves the problems with boundary level n along the configured schedule (g ≡ 0)
/// and monitors the increasing sequence u_n.
pub fn blowup_limit<T: Real>(
    op: &OperatorMatrix<T>,
    f: &Nonlinearity<T>,
    cfg: &SolverConfig<T>,
) -> Result<BlowupOutcome<T>> {
    cfg.validate()?;
    let alpha = op.alpha();
    if op.kind() == OperatorKind::Regional && !alpha.requires_half_plus() {
        return Err(Error::Precondition(format!(
            "regional blow-up limit needs α > 1/2, got {}",
            alpha.value()
        )));
    }
    if f.is_zero() {
        return Err(Error::Degenerate("f ≡ 0 admits no boundary blow-up solution".into()));
    }
    let mut notes = Vec::new();
    let threshold = T::one() + alpha.value() + alpha.value();
    let experimental = match f.exponents() {
        Some((p, _)) => p <= threshold,
        None => true,
    };
    if experimental {
        notes.push(format!("{} is outside the existence range p > 1 + 2α; run is experimental", f.label()));
    }
    let mesh = op.mesh();
    let window = mesh.inner_window(cfg.interior_window * mesh.domain().inradius());
    let log_factor = cfg.n_factor.ln();

    let mut levels: Vec<SolutionField<T>> = Vec::new();
    let mut summaries: Vec<LevelSummary<T>> = Vec::new();
    let mut divergence_level = None;
    let mut run = 0usize;
    let mut status = LimitStatus::CapReached;
    for (k, n) in cfg.schedule().into_iter().enumerate() {
        let src = SourceField::constant_trace(mesh, n)?;
        let guess = levels.last().map(|u| u.values.as_slice());
        let u = solve_semilinear_from(op, f, &src, cfg, guess)?;
        let center = u.center_value()?;
        let mut summary = LevelSummary {
            n,
            iterations: u.iterations,
            residual: u.residual,
            center,
            interior_change: None,
            boundary_growth: None,
        };
        if let Some(prev) = levels.last() {
            for (i, (a, b)) in u.values.iter().zip(&prev.values).enumerate() {
                if *a < *b - monotone_slack::<T>() * b.abs().max(T::one()) {
                    return Err(Error::InvariantBreach(format!(
                        "u at level {n} fell below the previous level at node {i}"
                    )));
                }
            }
            let diff = window.clone().fold(T::zero(), |m, i| m.max((u.values[i] - prev.values[i]).abs()));
            let size = window.clone().fold(T::zero(), |m, i| m.max(u.values[i].abs()));
            summary.interior_change = Some(diff / size.max(T::min_positive_value()));
            let growth = (u.boundary_node_value() / prev.boundary_node_value()).ln() / log_factor;
            summary.boundary_growth = Some(growth);
            let inc = center - summaries[k - 1].center;
            if k >= 2 {
                let prev_inc = summaries[k - 1].center - summaries[k - 2].center;
                run = if inc >= prev_inc { run + 1 } else { 0 };
                if run >= cfg.divergence_run && divergence_level.is_none() {
                    divergence_level = Some(k);
                    notes.push(format!(
                        "centre increments nondecreasing over {run} consecutive levels up to n = {n}"
                    ));
                }
            }
        }
        let change = summary.interior_change;
        let growth = summary.boundary_growth;
        levels.push(u);
        summaries.push(summary);
        if change.is_some_and(|c| c <= cfg.tol_limit) {
            status = LimitStatus::Converged;
            break;
        }
        if growth.is_some_and(|g| g < cfg.saturation_growth) {
            status = LimitStatus::ResolutionLimited;
            notes.push(format!(
                "boundary node grew like n^{} at n = {n}; mesh no longer resolves the layer",
                growth.unwrap_or(T::zero())
            ));
            break;
        }
    }
    if status != LimitStatus::Converged && divergence_level.is_some() {
        status = LimitStatus::Diverging;
    }
    Ok(BlowupOutcome { status, levels, summaries, divergence_level, experimental, notes })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimalityReport<T> {
    pub lambda: T,
    /// max over nodes of u − λV.
    pub barrier_margin: T,
    /// Limit of the decreasing iteration started at λV.
    pub decreasing_limit: Vec<T>,
    pub iterations: usize,
    /// max over nodes of (decreasing limit − u), relative to max |u|.
    pub gap: T,
}

/// Runs the decreasing iteration from λV with the limit's boundary level and
/// checks that the limit lies below it.
pub fn minimality_check<T: Real>(
    op: &OperatorMatrix<T>,
    f: &Nonlinearity<T>,
    cfg: &SolverConfig<T>,
    limit: &SolutionField<T>,
    barrier: &Barrier<T>,
    lambda: T,
) -> Result<MinimalityReport<T>> {
    let m = op.len();
    check_len(m, limit.values.len())?;
    check_len(m, barrier.values().len())?;
    let n_top = limit.trace.iter().fold(T::neg_infinity(), |a, v| a.max(*v));
    let lowest_trace = barrier.boundary_values().iter().fold(T::infinity(), |a, v| a.min(*v)) * lambda;
    if lowest_trace < n_top {
        return Err(Error::Precondition(format!(
            "λV has boundary value {lowest_trace} below the limit's level {n_top}"
        )));
    }
    let start: Vec<T> = barrier.values().iter().map(|v| *v * lambda).collect();
    let barrier_margin = (0..m).fold(T::neg_infinity(), |a, i| a.max(limit.values[i] - start[i]));
    let bt = op.trace_term(&limit.trace)?;
    let mut w = start;
    let slack = monotone_slack::<T>();
    let mut iterations = 0;
    loop {
        iterations += 1;
        if iterations > cfg.max_iter {
            return Err(Error::NonConvergence { iterations: cfg.max_iter, residual: f64::NAN });
        }
        let shift: Vec<T> = (0..m).map(|i| f.lipschitz_on(limit.values[i].min(w[i]), w[i])).collect();
        let mut shifted = op.matrix().clone();
        shifted.add_diagonal(&shift)?;
        let aw = op.matrix().mul_vec(&w)?;
        let r: Vec<T> = (0..m).map(|i| -bt[i] - aw[i] - f.eval(w[i])).collect();
        let inc = Lu::factor(&shifted)?.solve(&r)?;
        let next: Vec<T> = w.iter().zip(&inc).map(|(a, d)| *a + *d).collect();
        let mut delta = T::zero();
        for i in 0..m {
            let d = inc[i];
            if d > slack * w[i].abs().max(T::one()) {
                return Err(Error::InvariantBreach(format!("decreasing iteration rose at node {i}")));
            }
            delta = delta.max(d.abs());
        }
        w = next;
        if delta <= cfg.tol_fixed_point * max_abs(&w).max(T::one()) {
            break;
        }
    }
    let scale = max_abs(&limit.values).max(T::one());
    let mut gap = T::zero();
    for (i, (u, v)) in limit.values.iter().zip(&w).enumerate() {
        let below = *u - *v;
        if below > T::lit(1e-8) * u.abs().max(T::one()) {
            return Err(Error::InvariantBreach(format!(
                "limit exceeds the λV-started solution at node {i} by {below}"
            )));
        }
        gap = gap.max(-below / scale);
    }
    Ok(MinimalityReport { lambda, barrier_margin, decreasing_limit: w, iterations, gap })
}
