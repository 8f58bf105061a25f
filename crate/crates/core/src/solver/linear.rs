use crate::error::{check_len, Result};
use crate::linalg::{DenseMatrix, Lu};
use crate::operator::{OperatorKind, OperatorMatrix};
use crate::scalar::{max_abs, Real};

use super::{SolutionField, SourceField};

/// Factorized interior block; `apply` evaluates the discrete Green potential A⁻¹v.
#[derive(Debug, Clone)]
pub struct GreenOperator<T> {
    lu: Lu<T>,
}

impl<T: Real> GreenOperator<T> {
    pub fn new(op: &OperatorMatrix<T>) -> Result<Self> {
        Ok(Self { lu: Lu::factor(op.matrix())? })
    }

    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        self.lu.solve(v)
    }
}

/// Solves A·u + coupling·trace = g.
pub fn solve_linear_dirichlet<T: Real>(op: &OperatorMatrix<T>, src: &SourceField<T>) -> Result<SolutionField<T>> {
    check_len(op.len(), src.g().len())?;
    let trace = src.trace_values(op.mesh().boundary_count())?;
    let bt = op.trace_term(&trace)?;
    let rhs: Vec<T> = src.g().iter().zip(&bt).map(|(g, b)| *g - *b).collect();
    let green = GreenOperator::new(op)?;
    let u = green.apply(&rhs)?;
    let res = op.apply(&u, &trace)?;
    let scale = max_abs(&bt).max(max_abs(src.g())).max(T::min_positive_value());
    let eq = res.iter().zip(src.g()).fold(T::zero(), |m, (r, g)| m.max((*r - *g).abs())) / scale;
    Ok(SolutionField {
        mesh: op.shared_mesh(),
        values: u,
        trace,
        kind: op.kind(),
        level: src.level(),
        iterations: 1,
        residual: T::zero(),
        equation_residual: eq,
        monotone: true,
    })
}

/// Dense inverse of the interior block. Column j is the discrete Green function
/// with pole at node j; dividing by the cell weight gives the kernel density.
#[derive(Debug, Clone)]
pub struct GreenMatrix<T> {
    pub inverse: DenseMatrix<T>,
    /// Trapezoid cell weights of the nodes.
    pub weights: Vec<T>,
    pub kind: OperatorKind,
    /// max |D − Dᵀ| / max |D| for the density D_ij = G_ij / w_j.
    pub symmetry_defect: T,
    /// Same measure on the raw matrix entries.
    pub raw_symmetry_defect: T,
    /// Smallest entry relative to the largest entry.
    pub min_entry_ratio: T,
    /// Set when α ≤ 1/2, where the boundary decay bounds are not asserted.
    pub warning: Option<String>,
}

impl<T: Real> GreenMatrix<T> {
    pub fn density(&self, i: usize, j: usize) -> T {
        self.inverse[(i, j)] / self.weights[j]
    }

    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        self.inverse.mul_vec(v)
    }
}

pub fn green_matrix<T: Real>(op: &OperatorMatrix<T>) -> Result<GreenMatrix<T>> {
    let inverse = Lu::factor(op.matrix())?.inverse()?;
    let weights = op.mesh().cell_weights();
    let m = op.len();
    let gmax = inverse.max_abs();
    let mut raw = T::zero();
    let mut dens = T::zero();
    let mut dmax = T::zero();
    let mut min = T::infinity();
    for i in 0..m {
        for j in 0..m {
            let g = inverse[(i, j)];
            min = min.min(g);
            raw = raw.max((g - inverse[(j, i)]).abs());
            let d = g / weights[j];
            dmax = dmax.max(d.abs());
            dens = dens.max((d - inverse[(j, i)] / weights[i]).abs());
        }
    }
    let warning = if op.alpha().requires_half_plus() {
        None
    } else {
        Some(format!("α = {} ≤ 1/2: Green decay bounds are not asserted", op.alpha().value()))
    };
    Ok(GreenMatrix {
        symmetry_defect: dens / dmax,
        raw_symmetry_defect: raw / gmax,
        min_entry_ratio: min / gmax,
        inverse,
        weights,
        kind: op.kind(),
        warning,
    })
}
