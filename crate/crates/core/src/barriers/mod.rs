//! The boundary barrier V_τ, checks of its operator bound and of super-solution
//! inequalities, and Keller–Osserman-type integrability classifiers.

mod ko;

pub use ko::{ko_classify, KOReport, Verdict};

use crate::error::{Error, Result};
use crate::geometry::{build_mesh, Domain, FractionalOrder, GradedMesh, Side};
use crate::operator::{assemble, OperatorKind, OperatorMatrix};
use crate::scalar::Real;
use crate::solver::Nonlinearity;

/// V_τ = ρ^τ on the layer {ρ < t0}, continued by a positive cubic in ρ that is
/// C² at t0 and flat at the deepest point.
#[derive(Debug, Clone, PartialEq)]
pub struct Barrier<T> {
    tau: T,
    t0: T,
    rho_max: T,
    coeffs: [T; 4],
    values: Vec<T>,
    boundary: Vec<T>,
}

impl<T: Real> Barrier<T> {
    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn t0(&self) -> T {
        self.t0
    }

    /// Cubic blend coefficients c₀..c₃ in powers of (ρ − t0).
    pub fn blend(&self) -> [T; 4] {
        self.coeffs
    }

    /// Nodal values.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Dirichlet values on the boundary nodes: h^τ(1 − τ)/(1 + τ), h the first
    /// node's boundary distance, so the linear interpolant keeps the cell mean of ρ^τ.
    pub fn boundary_values(&self) -> &[T] {
        &self.boundary
    }

    pub fn eval_rho(&self, rho: T) -> T {
        if rho < self.t0 {
            rho.powf(self.tau)
        } else {
            let s = rho.min(self.rho_max) - self.t0;
            let [c0, c1, c2, c3] = self.coeffs;
            c0 + s * (c1 + s * (c2 + s * c3))
        }
    }
}

/// Builds V_τ on the mesh; `t0` defaults to a quarter of the inradius.
pub fn build_barrier<T: Real>(mesh: &GradedMesh<T>, tau: T, t0: Option<T>) -> Result<Barrier<T>> {
    if !(tau > -T::one() && tau < T::zero()) {
        return Err(Error::Domain(format!("barrier exponent τ = {tau} outside (−1, 0)")));
    }
    let domain = mesh.domain();
    let rho_max = domain.inradius();
    let t0 = t0.unwrap_or(rho_max * T::lit(0.25));
    if !(t0 > T::zero() && t0 < domain.diameter() * T::lit(0.25)) {
        return Err(Error::Config(format!("layer width t0 = {t0} outside (0, diameter/4)")));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let c0 = t0.powf(tau);
    let c1 = tau * t0.powf(tau - one);
    let c2 = tau * (tau - one) * t0.powf(tau - two) / two;
    let d = rho_max - t0;
    let c3 = -(c1 + two * c2 * d) / (T::lit(3.0) * d * d);
    let cubic = |s: T| c0 + s * (c1 + s * (c2 + s * c3));
    // Minimum of the cubic on [0, d]: endpoints and interior critical points.
    let mut low = cubic(T::zero()).min(cubic(d));
    let (qa, qb, qc) = (T::lit(3.0) * c3, two * c2, c1);
    let disc = qb * qb - T::lit(4.0) * qa * qc;
    if qa != T::zero() && disc >= T::zero() {
        for r in [(-qb + disc.sqrt()) / (two * qa), (-qb - disc.sqrt()) / (two * qa)] {
            if r > T::zero() && r < d {
                low = low.min(cubic(r));
            }
        }
    }
    if !(low > T::zero()) {
        return Err(Error::Config(format!("interior blend is not positive for τ = {tau}, t0 = {t0}")));
    }
    let mut barrier = Barrier { tau, t0, rho_max, coeffs: [c0, c1, c2, c3], values: Vec::new(), boundary: Vec::new() };
    barrier.values = mesh.rho().iter().map(|r| barrier.eval_rho(*r)).collect();
    let first = |side: Side| {
        mesh.rho()
            .iter()
            .zip(mesh.sides())
            .filter(|(_, s)| **s == side)
            .fold(T::infinity(), |m, (r, _)| m.min(*r))
    };
    let edge = |h: T| h.powf(tau) * (one - tau) / (one + tau);
    barrier.boundary = if mesh.is_ball() {
        vec![edge(first(Side::Upper))]
    } else {
        vec![edge(first(Side::Lower)), edge(first(Side::Upper))]
    };
    Ok(barrier)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarrierBoundReport<T> {
    /// |(A V)ᵢ|·ρᵢ^{2α−τ} at every interior node.
    pub profile: Vec<T>,
    pub sup: T,
    /// Boundary distance of the node attaining the supremum.
    pub sup_rho: T,
    pub all_finite: bool,
}

/// Evaluates the weighted profile of the regional operator applied to V_τ.
pub fn certify_barrier_bound<T: Real>(op: &OperatorMatrix<T>, barrier: &Barrier<T>) -> Result<BarrierBoundReport<T>> {
    if op.kind() != OperatorKind::Regional {
        return Err(Error::Precondition("barrier bound is stated for the regional operator".into()));
    }
    let image = op.apply(barrier.values(), barrier.boundary_values())?;
    let e = op.alpha().value() + op.alpha().value() - barrier.tau();
    let profile: Vec<T> = image.iter().zip(op.mesh().rho()).map(|(v, r)| v.abs() * r.powf(e)).collect();
    let all_finite = profile.iter().all(|v| v.is_finite());
    let (idx, sup) = profile
        .iter()
        .enumerate()
        .fold((0, T::neg_infinity()), |b, (i, v)| if *v > b.1 { (i, *v) } else { b });
    Ok(BarrierBoundReport { sup, sup_rho: op.mesh().rho()[idx], all_finite, profile })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarrierRefinement<T> {
    pub coarse: BarrierBoundReport<T>,
    pub fine: BarrierBoundReport<T>,
    /// |sup_fine − sup_coarse| / sup_coarse.
    pub relative_change: T,
}

/// Compares the barrier bound on meshes with M and 2M interior nodes.
pub fn refine_barrier_bound<T: Real>(
    domain: Domain<T>,
    alpha: FractionalOrder<T>,
    m: usize,
    gamma: T,
    tau: T,
    t0: Option<T>,
) -> Result<BarrierRefinement<T>> {
    let run = |mm: usize| -> Result<BarrierBoundReport<T>> {
        let mesh = build_mesh(domain, mm, gamma)?;
        let op = assemble(&mesh, alpha, OperatorKind::Regional)?;
        certify_barrier_bound(&op, &build_barrier(&mesh, tau, t0)?)
    };
    let coarse = run(m)?;
    let fine = run(2 * m)?;
    let relative_change = (fine.sup - coarse.sup).abs() / coarse.sup;
    Ok(BarrierRefinement { coarse, fine, relative_change })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperSolutionCertificate<T> {
    pub lambda: T,
    /// Whether A(λV) + f(λV) ≥ 0 at every node for the requested λ.
    pub verdict: bool,
    /// Smallest normalized value of A(λV) + f(λV) at the requested λ.
    pub min_margin: T,
    /// Smallest power of two certifying, if one exists up to the cap.
    pub certified: Option<T>,
}

fn super_margin<T: Real>(op: &OperatorMatrix<T>, barrier: &Barrier<T>, f: &Nonlinearity<T>, lambda: T) -> Result<T> {
    let v: Vec<T> = barrier.values().iter().map(|x| *x * lambda).collect();
    let tr: Vec<T> = barrier.boundary_values().iter().map(|x| *x * lambda).collect();
    let image = op.apply(&v, &tr)?;
    let a = op.matrix();
    let c = op.boundary_coupling();
    let mut worst = T::infinity();
    for i in 0..op.len() {
        let fv = f.eval(v[i]);
        let scale = a.row(i).iter().zip(&v).fold(T::zero(), |s, (x, y)| s + (*x * *y).abs())
            + c.row(i).iter().zip(&tr).fold(T::zero(), |s, (x, y)| s + (*x * *y).abs())
            + fv.abs();
        worst = worst.min((image[i] + fv) / scale);
    }
    Ok(worst)
}

/// Checks A(λV) + f(λV) ≥ 0 and searches λ = 1, 2, 4, … up to `2^cap_exponent`.
pub fn certify_super_solution<T: Real>(
    op: &OperatorMatrix<T>,
    barrier: &Barrier<T>,
    f: &Nonlinearity<T>,
    lambda: T,
    cap_exponent: u32,
) -> Result<SuperSolutionCertificate<T>> {
    if !(lambda > T::zero()) {
        return Err(Error::Config(format!("λ = {lambda} must be positive")));
    }
    // Rounding in the row sums is of relative size ~M·ε.
    let tol = -T::epsilon() * T::from_usize_lossy(op.len() * 16);
    let min_margin = super_margin(op, barrier, f, lambda)?;
    let mut certified = None;
    let mut l = T::one();
    for _ in 0..=cap_exponent {
        if super_margin(op, barrier, f, l)? >= tol {
            certified = Some(l);
            break;
        }
        l = l + l;
    }
    Ok(SuperSolutionCertificate { lambda, verdict: min_margin >= tol, min_margin, certified })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mesh(m: usize) -> GradedMesh<f64> {
        build_mesh(Domain::interval(-1.0, 1.0).unwrap(), m, 3.0).unwrap()
    }

    #[test]
    fn layer_values_and_matching() {
        let b = build_barrier(&mesh(64), -0.5, None).unwrap();
        assert_eq!(b.t0(), 0.25);
        assert!((b.eval_rho(0.04) - 5.0).abs() < 1e-14);
        let t0 = b.t0();
        let eps = 1e-7;
        let left = b.eval_rho(t0 - eps);
        let right = b.eval_rho(t0);
        assert!((left - right).abs() < 1e-5);
        let [c0, c1, c2, _] = b.blend();
        assert!((c0 - t0.powf(-0.5)).abs() < 1e-10);
        assert!((c1 - (-0.5) * t0.powf(-1.5)).abs() < 1e-10);
        assert!((c2 - 0.375 * t0.powf(-2.5)).abs() < 1e-10);
        let top = b.values().iter().fold(0.0f64, |m, v| m.max(*v));
        assert!(b.values().iter().all(|v| *v > 0.0));
        for (v, r) in b.values().iter().zip(mesh(64).rho()) {
            if *r < t0 {
                assert!((v * r.powf(0.5) - 1.0).abs() < 1e-12);
            }
        }
        assert!(top.is_finite());
    }

    #[test]
    fn invalid_exponent_and_width() {
        assert!(matches!(build_barrier(&mesh(16), -1.0, None), Err(Error::Domain(_))));
        assert!(matches!(build_barrier(&mesh(16), 0.1, None), Err(Error::Domain(_))));
        assert!(matches!(build_barrier(&mesh(16), -0.5, Some(0.6)), Err(Error::Config(_))));
    }
}
