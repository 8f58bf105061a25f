//! Collocation matrices of the regional and full fractional Laplacians.
//!
//! Far cells integrate the kernel exactly against the piecewise-linear
//! interpolant. The near field uses the three-point quadratic on the symmetric
//! window [−h_min, h_min] and the linear interpolant on the rest of the longer
//! neighbouring cell. The interpolation error of far cells close to the node is
//! folded back into the curvature coefficient, which is kept nonnegative so every
//! off-diagonal entry and every boundary coupling is ≤ 0.

mod moments;
pub mod oracle;

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{check_len, Error, Result};
use crate::geometry::{phi_on_mesh, FractionalOrder, GradedMesh, RadialKernel};
use crate::linalg::DenseMatrix;
use crate::quadrature::GaussLegendre;
use crate::scalar::Real;
use moments::{cell_moments, power_integral};

pub use oracle::{validate_against_oracle, OracleReport, ProbeError};

/// Identifies the discretization; changes whenever assembled matrices would change.
pub const SCHEME: &str = "pl-far/quadratic-near/curvature-0.5/gl12-log-radial";

/// Far cells closer to the node than this fraction of its boundary distance
/// carry the curvature correction.
const CURVATURE_REACH: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// Integration over the domain only.
    Regional,
    /// Integration over all of R^N for functions vanishing outside the domain.
    Full,
}

#[derive(Debug, Clone)]
pub struct OperatorMatrix<T> {
    kind: OperatorKind,
    alpha: FractionalOrder<T>,
    mesh: Arc<GradedMesh<T>>,
    a: DenseMatrix<T>,
    coupling: DenseMatrix<T>,
    phi: Vec<T>,
}

impl<T: Real> OperatorMatrix<T> {
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn alpha(&self) -> FractionalOrder<T> {
        self.alpha
    }

    pub fn mesh(&self) -> &GradedMesh<T> {
        &self.mesh
    }

    pub fn shared_mesh(&self) -> Arc<GradedMesh<T>> {
        Arc::clone(&self.mesh)
    }

    /// Interior block.
    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.a
    }

    /// Weights multiplying the Dirichlet trace values, one column per boundary node.
    pub fn boundary_coupling(&self) -> &DenseMatrix<T> {
        &self.coupling
    }

    /// φ at the interior nodes.
    pub fn phi(&self) -> &[T] {
        &self.phi
    }

    pub fn len(&self) -> usize {
        self.a.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.a.rows() == 0
    }

    /// Computes `A·u + coupling·trace`.
    pub fn apply(&self, u: &[T], trace: &[T]) -> Result<Vec<T>> {
        check_len(self.len(), u.len())?;
        check_len(self.coupling.cols(), trace.len())?;
        let mut out = self.a.mul_vec(u)?;
        let bt = self.coupling.mul_vec(trace)?;
        for (o, b) in out.iter_mut().zip(bt) {
            *o = *o + b;
        }
        Ok(out)
    }

    /// `coupling·trace` alone.
    pub fn trace_term(&self, trace: &[T]) -> Result<Vec<T>> {
        self.coupling.mul_vec(trace)
    }

    /// Largest absolute row sum of `[A | coupling]`.
    pub fn max_row_abs_sum(&self) -> T {
        (0..self.len())
            .map(|i| {
                self.a.row(i).iter().chain(self.coupling.row(i)).fold(T::zero(), |s, v| s + v.abs())
            })
            .fold(T::zero(), T::max)
    }

    /// The same discretization with the other operator kind.
    pub fn with_kind(&self, kind: OperatorKind) -> Self {
        if kind == self.kind {
            return self.clone();
        }
        let mut a = self.a.clone();
        let sign = if kind == OperatorKind::Full { T::one() } else { -T::one() };
        for (i, p) in self.phi.iter().enumerate() {
            a[(i, i)] = a[(i, i)] + sign * *p;
        }
        Self { kind, a, ..self.clone() }
    }
}

/// Assembles the collocation matrix of the chosen operator kind on `mesh`.
pub fn assemble<T: Real>(
    mesh: &GradedMesh<T>,
    alpha: FractionalOrder<T>,
    kind: OperatorKind,
) -> Result<OperatorMatrix<T>> {
    let m = mesh.len();
    let kernel = if mesh.is_ball() {
        Some(RadialKernel::new(mesh.domain().dimension(), alpha.value(), 64)?)
    } else {
        None
    };
    let rule = GaussLegendre::<T>::new(12);
    let rows: Vec<Vec<T>> = (1..=m)
        .into_par_iter()
        .map(|i| row_weights(mesh, alpha.value(), i, kernel.as_ref(), &rule))
        .collect();
    let phi = phi_on_mesh(mesh, alpha)?;
    let bidx = mesh.boundary_ext_indices();
    let mut a = DenseMatrix::zeros(m, m);
    let mut coupling = DenseMatrix::zeros(m, bidx.len());
    for (r, w) in rows.iter().enumerate() {
        let i = r + 1;
        let mut diag = T::zero();
        for (k, wk) in w.iter().enumerate() {
            if k == i || *wk == T::zero() {
                continue;
            }
            diag = diag + *wk;
            if let Some(b) = bidx.iter().position(|&e| e == k) {
                coupling[(r, b)] = -*wk;
            } else {
                a[(r, k - 1)] = -*wk;
            }
        }
        a[(r, r)] = diag;
        if kind == OperatorKind::Full {
            a[(r, r)] = a[(r, r)] + phi[r];
        }
        if !a.row(r).iter().all(|v| v.is_finite()) {
            return Err(Error::Divergence(format!("non-finite operator entry in row {r}")));
        }
    }
    Ok(OperatorMatrix { kind, alpha, mesh: Arc::new(mesh.clone()), a, coupling, phi })
}

/// Weights w_k with (Lu)_i = Σ_k w_k (u_i − u_k) over extended nodes. For balls
/// the ghost centre weight is folded onto node 1.
fn row_weights<T: Real>(
    mesh: &GradedMesh<T>,
    alpha: T,
    i: usize,
    kernel: Option<&RadialKernel<T>>,
    rule: &GaussLegendre<T>,
) -> Vec<T> {
    let m = mesh.len();
    let n = m + 2;
    let beta = T::one() + alpha + alpha;
    let mut w = vec![T::zero(); n];
    let rho_i = mesh.ext_rho(i);
    let reach = T::lit(CURVATURE_REACH) * rho_i;
    let mut curvature = T::zero();
    let diag_factor = kernel.map_or(T::one(), RadialKernel::diagonal_factor);

    let far_cell = |near: usize, far: usize, w: &mut Vec<T>, curvature: &mut T| {
        let t0 = mesh.gap(i, near);
        let h = mesh.gap(near, far);
        let (wn, wf, wb) = match kernel {
            None => {
                let mo = cell_moments(h / t0, alpha);
                let sc = t0.powf(T::lit(2.0) - beta);
                (sc * mo.near / h, sc * mo.far / h, sc * t0 * mo.bubble)
            }
            Some(k) => kernel_cell(mesh, k, rule, i, near, t0, h),
        };
        w[near] = w[near] + wn;
        w[far] = w[far] + wf;
        if t0 + h <= reach {
            *curvature = *curvature + wb;
        }
    };
    for k in i + 1..=m {
        far_cell(k, k + 1, &mut w, &mut curvature);
    }
    for k in (1..i).rev() {
        far_cell(k, k - 1, &mut w, &mut curvature);
    }

    let h_minus = mesh.gap(i - 1, i);
    let h_plus = mesh.gap(i, i + 1);
    let (hm, hl) = if h_minus <= h_plus { (h_minus, h_plus) } else { (h_plus, h_minus) };
    let span = h_minus + h_plus;
    let two = T::lit(2.0);
    let window = two * hm.powf(two - alpha - alpha) / (two - alpha - alpha);
    let (remainder, remainder_curv) = if hl > hm {
        (
            power_integral(hm, hl, -(alpha + alpha)),
            hl * power_integral(hm, hl, T::one() - beta) - power_integral(hm, hl, two - beta),
        )
    } else {
        (T::zero(), T::zero())
    };
    let long = if h_plus > h_minus { i + 1 } else { i - 1 };
    w[long] = w[long] + diag_factor * remainder / hl;
    if hl <= reach {
        curvature = curvature + diag_factor * remainder_curv;
    }
    let k = (diag_factor * window - curvature).max(T::zero());
    w[i + 1] = w[i + 1] + k / (h_plus * span);
    w[i - 1] = w[i - 1] + k / (h_minus * span);

    if kernel.is_some() {
        w[1] = w[1] + w[0];
        w[0] = T::zero();
    }
    w
}

/// Linear-interpolant and bubble weights of one radial cell against the tabulated kernel.
fn kernel_cell<T: Real>(
    mesh: &GradedMesh<T>,
    kernel: &RadialKernel<T>,
    rule: &GaussLegendre<T>,
    i: usize,
    near: usize,
    t0: T,
    h: T,
) -> (T, T, T) {
    let r = mesh.ext_coord(i);
    let outward = near > i;
    let t1 = t0 + h;
    let v_max = (h / t0).ln_1p();
    let (mut wn, mut wf, mut wb) = (T::zero(), T::zero(), T::zero());
    for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
        let v = (*x + T::one()) * T::lit(0.5) * v_max;
        let t = t0 * v.exp();
        let s = if outward { r + t } else { r - t };
        let kv = kernel.eval_with_gap(r, s.max(T::zero()), t) * t * *wt * T::lit(0.5) * v_max;
        wn = wn + kv * (t1 - t) / h;
        wf = wf + kv * (t - t0) / h;
        wb = wb + kv * (t - t0) * (t1 - t);
    }
    (wn, wf, wb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_mesh, Domain};

    fn interval_op(m: usize, gamma: f64, alpha: f64, kind: OperatorKind) -> OperatorMatrix<f64> {
        let mesh = build_mesh(Domain::interval(-1.0, 1.0).unwrap(), m, gamma).unwrap();
        assemble(&mesh, FractionalOrder::new(alpha).unwrap(), kind).unwrap()
    }

    #[test]
    fn sign_structure_and_row_sums() {
        for &alpha in &[0.3, 0.5, 0.75, 0.95] {
            let op = interval_op(64, 3.0, alpha, OperatorKind::Regional);
            let a = op.matrix();
            for i in 0..64 {
                assert!(a[(i, i)] > 0.0);
                for j in 0..64 {
                    if i != j {
                        assert!(a[(i, j)] <= 0.0, "α={alpha} entry ({i},{j}) = {}", a[(i, j)]);
                    }
                }
                assert!(op.boundary_coupling().row(i).iter().all(|v| *v <= 0.0));
            }
            let r = op.apply(&[1.0; 64], &[1.0, 1.0]).unwrap();
            let tol = 1e-12 * op.max_row_abs_sum();
            assert!(r.iter().all(|v| v.abs() <= tol));
        }
    }

    #[test]
    fn full_kind_row_sums_equal_phi() {
        let op = interval_op(48, 2.0, 0.6, OperatorKind::Full);
        let r = op.apply(&[1.0; 48], &[1.0, 1.0]).unwrap();
        for (v, p) in r.iter().zip(op.phi()) {
            assert!((v - p).abs() <= 1e-10 * p.max(op.max_row_abs_sum() * 1e-4));
        }
    }

    #[test]
    fn apply_is_linear_and_basis_action() {
        let op = interval_op(16, 2.0, 0.75, OperatorKind::Regional);
        let zero = op.apply(&[0.0; 16], &[0.0, 0.0]).unwrap();
        assert!(zero.iter().all(|v| *v == 0.0));
        let mut e = vec![0.0; 16];
        e[5] = 1.0;
        let col = op.apply(&e, &[0.0, 0.0]).unwrap();
        assert_eq!(col, op.matrix().column(5));
        assert!(matches!(op.apply(&[0.0; 15], &[0.0, 0.0]), Err(Error::Shape { .. })));
    }

    #[test]
    fn kind_switch_round_trips() {
        let reg = interval_op(20, 2.0, 0.7, OperatorKind::Regional);
        let full = reg.with_kind(OperatorKind::Full);
        let direct = interval_op(20, 2.0, 0.7, OperatorKind::Full);
        let close = |a: &DenseMatrix<f64>, b: &DenseMatrix<f64>| {
            a.as_slice().iter().zip(b.as_slice()).all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs().max(1.0))
        };
        assert!(close(full.matrix(), direct.matrix()));
        assert!(close(full.with_kind(OperatorKind::Regional).matrix(), reg.matrix()));
    }

    #[test]
    fn ball_operator_annihilates_constants() {
        let mesh = build_mesh(Domain::ball(1.0, 2).unwrap(), 24, 2.0).unwrap();
        let op = assemble(&mesh, FractionalOrder::new(0.75).unwrap(), OperatorKind::Regional).unwrap();
        let r = op.apply(&[2.0; 24], &[2.0]).unwrap();
        let tol = 1e-12 * op.max_row_abs_sum();
        assert!(r.iter().all(|v: &f64| v.abs() <= tol));
        for i in 0..24 {
            for j in 0..24 {
                if i != j {
                    assert!(op.matrix()[(i, j)] <= 0.0);
                }
            }
        }
    }

    #[test]
    fn single_precision_assembly() {
        let mesh = build_mesh(Domain::interval(-1.0f32, 1.0).unwrap(), 32, 2.0).unwrap();
        let op = assemble(&mesh, FractionalOrder::new(0.75f32).unwrap(), OperatorKind::Regional).unwrap();
        let r = op.apply(&[1.0; 32], &[1.0, 1.0]).unwrap();
        let tol = 1e-5 * op.max_row_abs_sum();
        assert!(r.iter().all(|v: &f32| v.abs() <= tol));
    }
}
