//! Discrete regional and full fractional Laplacians on graded meshes, monotone
//! iteration for semilinear Dirichlet problems, boundary blow-up limits and
//! boundary-rate diagnostics.
//!
//! Numerics are generic over [`Real`] (`f32` or `f64`); the type aliases at the
//! crate root fix `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod barriers;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod operator;
pub mod quadrature;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Domain = geometry::Domain<f64>;
pub type Mesh = geometry::GradedMesh<f64>;
pub type Order = geometry::FractionalOrder<f64>;
pub type Operator = operator::OperatorMatrix<f64>;
pub type Field = solver::SolutionField<f64>;
pub type Config = solver::SolverConfig<f64>;
pub type Power = solver::Nonlinearity<f64>;
