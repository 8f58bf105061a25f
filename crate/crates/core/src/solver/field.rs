use std::sync::Arc;

use crate::error::Result;
use crate::geometry::GradedMesh;
use crate::operator::OperatorKind;
use crate::scalar::Real;

/// Nodal solution of a Dirichlet problem with convergence metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField<T> {
    pub mesh: Arc<GradedMesh<T>>,
    pub values: Vec<T>,
    pub trace: Vec<T>,
    pub kind: OperatorKind,
    /// Constant boundary level n, when the trace is constant.
    pub level: Option<T>,
    pub iterations: usize,
    /// Last relative fixed-point step.
    pub residual: T,
    /// Relative residual of the discrete equation.
    pub equation_residual: T,
    /// Whether the iterates were nodewise nondecreasing.
    pub monotone: bool,
}

impl<T: Real> SolutionField<T> {
    pub fn center_value(&self) -> Result<T> {
        self.mesh.center_value(&self.values)
    }

    pub fn max(&self) -> T {
        self.values.iter().fold(T::neg_infinity(), |m, v| m.max(*v))
    }

    pub fn min(&self) -> T {
        self.values.iter().fold(T::infinity(), |m, v| m.min(*v))
    }

    /// Value at the node nearest the boundary (first node).
    pub fn boundary_node_value(&self) -> T {
        let idx = self
            .mesh
            .rho()
            .iter()
            .enumerate()
            .fold((0, T::infinity()), |b, (i, r)| if *r < b.1 { (i, *r) } else { b })
            .0;
        self.values[idx]
    }
}
