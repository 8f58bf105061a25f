//! Linear Dirichlet solves, the monotone iteration for semilinear problems and
//! the blow-up limit along increasing boundary levels.

mod blowup;
mod config;
mod field;
mod linear;
mod nonlinearity;
mod semilinear;
mod source;

pub use blowup::{blowup_limit, minimality_check, BlowupOutcome, LevelSummary, LimitStatus, MinimalityReport};
pub use config::{ShiftPolicy, SolverConfig};
pub use field::SolutionField;
pub use linear::{green_matrix, solve_linear_dirichlet, GreenMatrix, GreenOperator};
pub use nonlinearity::Nonlinearity;
pub use semilinear::{solve_semilinear, solve_semilinear_from};
pub use source::{SourceField, Trace};
