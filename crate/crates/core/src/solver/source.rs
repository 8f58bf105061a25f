use crate::error::{check_len, Error, Result};
use crate::geometry::GradedMesh;
use crate::scalar::Real;

/// Dirichlet data on the boundary nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum Trace<T> {
    /// The same value n on every boundary node.
    Constant(T),
    /// Boundary values of a function ξ, with its values at the interior nodes
    /// (a smooth extension ξ̃) when available.
    Function { boundary: Vec<T>, extension: Option<Vec<T>> },
}

/// Right-hand side g at the interior nodes together with the boundary trace.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceField<T> {
    g: Vec<T>,
    trace: Trace<T>,
}

impl<T: Real> SourceField<T> {
    pub fn new(g: Vec<T>, trace: Trace<T>) -> Result<Self> {
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("source values must be finite".into()));
        }
        let finite = match &trace {
            Trace::Constant(n) => n.is_finite(),
            Trace::Function { boundary, extension } => {
                boundary.iter().all(|v| v.is_finite())
                    && extension.as_ref().is_none_or(|e| e.iter().all(|v| v.is_finite()))
            }
        };
        if !finite {
            return Err(Error::Config("trace values must be finite".into()));
        }
        if let Trace::Function { extension: Some(e), .. } = &trace {
            check_len(g.len(), e.len())?;
        }
        Ok(Self { g, trace })
    }

    /// g ≡ 0 with constant trace n.
    pub fn constant_trace(mesh: &GradedMesh<T>, n: T) -> Result<Self> {
        Self::new(vec![T::zero(); mesh.len()], Trace::Constant(n))
    }

    /// Samples g(x) at the nodes, constant trace n.
    pub fn sampled(mesh: &GradedMesh<T>, g: impl Fn(T) -> T, n: T) -> Result<Self> {
        Self::new(mesh.coords().iter().map(|x| g(*x)).collect(), Trace::Constant(n))
    }

    /// Trace given by a function ξ, which also supplies the interior extension.
    pub fn with_trace_fn(mesh: &GradedMesh<T>, g: Vec<T>, xi: impl Fn(T) -> T) -> Result<Self> {
        check_len(mesh.len(), g.len())?;
        let boundary = mesh.boundary_nodes().into_iter().map(&xi).collect();
        let extension = Some(mesh.coords().iter().map(|x| xi(*x)).collect());
        Self::new(g, Trace::Function { boundary, extension })
    }

    pub fn g(&self) -> &[T] {
        &self.g
    }

    pub fn trace(&self) -> &Trace<T> {
        &self.trace
    }

    /// Trace values at the `count` boundary nodes.
    pub fn trace_values(&self, count: usize) -> Result<Vec<T>> {
        match &self.trace {
            Trace::Constant(n) => Ok(vec![*n; count]),
            Trace::Function { boundary, .. } => {
                check_len(count, boundary.len())?;
                Ok(boundary.clone())
            }
        }
    }

    /// Constant trace value, if the trace is constant.
    pub fn level(&self) -> Option<T> {
        match self.trace {
            Trace::Constant(n) => Some(n),
            Trace::Function { .. } => None,
        }
    }
}
