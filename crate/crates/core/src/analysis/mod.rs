//! Boundary-exponent fits, sandwich verdicts, the discrete Green bound and
//! layer diagnostics for the nonexistence regime.

mod fit;
mod green;
mod nonexistence;
mod sandwich;

pub use fit::{fit_mesh_values, fit_power_law, fit_rate, FitWindow, RateFit};
pub use green::{green_bound_check, refine_green_bound, GreenBoundForm, GreenBoundReport, GreenRefinement};
pub use nonexistence::{nonexistence_diagnostics, LambdaConfig, LayerSample, NonexistenceReport};
pub use sandwich::{decay_check, predicted_interval, sandwich_verdict, ExponentCheck, SandwichVerdict};
