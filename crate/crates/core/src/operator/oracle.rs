//! Checks of assembled operators against independently computed images.

use super::{OperatorKind, OperatorMatrix};
use crate::error::{Error, Result};
use crate::quadrature::integrate_adaptive;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeError<T> {
    pub coord: T,
    pub rho: T,
    pub computed: T,
    pub exact: T,
    pub rel_err: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport<T> {
    pub probes: Vec<ProbeError<T>>,
    pub max_rel_err: T,
}

/// Applies the operator to nodal samples of `test_fn` and compares with `exact`
/// at the nodes nearest to each probe coordinate.
///
/// `test_fn` and `exact` receive `(coordinate, boundary distance)`.
pub fn validate_against_oracle<T, F, E>(
    op: &OperatorMatrix<T>,
    test_fn: F,
    trace: &[T],
    exact: E,
    probes: &[T],
) -> Result<OracleReport<T>>
where
    T: Real,
    F: Fn(T, T) -> T,
    E: Fn(T, T) -> Result<T>,
{
    let mesh = op.mesh();
    let u: Vec<T> = mesh.coords().iter().zip(mesh.rho()).map(|(x, r)| test_fn(*x, *r)).collect();
    let image = op.apply(&u, trace)?;
    let mut out = Vec::with_capacity(probes.len());
    let mut worst = T::zero();
    for &p in probes {
        let idx = mesh
            .coords()
            .iter()
            .enumerate()
            .fold((0, T::infinity()), |best, (i, x)| {
                let d = (*x - p).abs();
                if d < best.1 {
                    (i, d)
                } else {
                    best
                }
            })
            .0;
        let (x, r) = (mesh.coords()[idx], mesh.rho()[idx]);
        let e = exact(x, r)?;
        if !e.is_finite() {
            return Err(Error::Oracle(format!("oracle value at {x} is not finite")));
        }
        let scale = if e.abs() > T::zero() { e.abs() } else { T::one() };
        let rel = (image[idx] - e).abs() / scale;
        worst = worst.max(rel);
        out.push(ProbeError { coord: x, rho: r, computed: image[idx], exact: e, rel_err: rel });
    }
    Ok(OracleReport { probes: out, max_rel_err: worst })
}

/// Principal value ∫ (u(x) − u(y))|x − y|^{−(1+2α)} dy on the interval (a, b) by
/// adaptive quadrature of the symmetrized integrand. The full kind integrates
/// over R with u = 0 outside. `breaks` lists coordinates where u is not smooth.
pub fn interval_image<U: Fn(f64) -> f64>(
    u: U,
    a: f64,
    b: f64,
    alpha: f64,
    kind: OperatorKind,
    x: f64,
    breaks: &[f64],
) -> Result<f64> {
    if !(x > a && x < b) {
        return Err(Error::Domain(format!("oracle point {x} outside ({a}, {b})")));
    }
    let beta = 1.0 + 2.0 * alpha;
    let ux = u(x);
    let near = (x - a).min(b - x);
    let far = (x - a).max(b - x);
    let inside = |y: f64| if y > a && y < b { u(y) } else { 0.0 };
    // Below δ the symmetric difference is replaced by its Taylor term −u''(x)t²,
    // since rounding in 2u(x) − u(x+t) − u(x−t) is amplified by t^{−β}.
    let delta = 1e-4 * near;
    let second = (-u(x + 2.0 * delta) + 16.0 * u(x + delta) - 30.0 * ux + 16.0 * u(x - delta)
        - u(x - 2.0 * delta))
        / (12.0 * delta * delta);
    let mut total = -second * delta.powf(2.0 - 2.0 * alpha) / (2.0 - 2.0 * alpha);
    let mut cuts = vec![delta, near, far];
    for &c in breaks {
        let t = (c - x).abs();
        if t > 0.0 && t < far {
            cuts.push(t);
        }
    }
    cuts.sort_by(|p, q| p.total_cmp(q));
    cuts.retain(|t| *t >= delta);
    cuts.dedup();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let piece = integrate_adaptive(
            |t| {
                let mut s = 0.0;
                for y in [x + t, x - t] {
                    let inside_dom = y > a && y < b;
                    if inside_dom || kind == OperatorKind::Full {
                        s += ux - inside(y);
                    }
                }
                s * t.powf(-beta)
            },
            lo,
            hi,
            1e-12,
            1e-9,
        )?;
        total += piece;
    }
    if kind == OperatorKind::Full {
        // Beyond the far endpoint both directions see u = 0.
        total += 2.0 * ux * far.powf(-2.0 * alpha) / (2.0 * alpha);
    }
    Ok(total)
}
