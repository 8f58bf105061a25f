use crate::error::{Error, Result};
use crate::scalar::Real;

/// Choice of the shift b₂ in the monotone iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftPolicy {
    /// b₂ = Lip(f on [−b₁, b₁]) + b₁ at every node.
    Uniform,
    /// Nodewise shift Lip(f on [−b₁, ũᵢ]) from a Newton estimate ũ of the solution.
    /// The iteration stays monotone and converges in far fewer steps.
    Adaptive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<T> {
    /// Stop when ‖v_m − v_{m−1}‖_∞ ≤ tol_fixed_point·max(1, ‖v_m‖_∞).
    pub tol_fixed_point: T,
    pub max_iter: usize,
    pub b2_policy: ShiftPolicy,
    /// First boundary level n₀ of the schedule n₀·factorᵏ.
    pub n0: T,
    pub n_factor: T,
    /// Number of levels in the schedule (the cap is n₀·factor^{levels−1}).
    pub levels: usize,
    /// Relative interior sup-difference between levels declaring the limit converged.
    pub tol_limit: T,
    /// Inner region Ω_t used for the limit test, t as a fraction of the inradius.
    pub interior_window: T,
    /// Consecutive nondecreasing centre increments that signal divergence.
    pub divergence_run: usize,
    /// Growth exponent of the boundary node per level below which the mesh no
    /// longer resolves the next level.
    pub saturation_growth: T,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            tol_fixed_point: T::lit(1e-12),
            max_iter: 100_000,
            b2_policy: ShiftPolicy::Uniform,
            n0: T::one(),
            n_factor: T::lit(2.0),
            levels: 15,
            tol_limit: T::lit(1e-6),
            interior_window: T::lit(0.2),
            divergence_run: 4,
            saturation_growth: T::lit(0.75),
        }
    }
}

impl<T: Real> SolverConfig<T> {
    /// Defaults with the adaptive shift, suited to large boundary levels.
    pub fn adaptive() -> Self {
        Self { b2_policy: ShiftPolicy::Adaptive, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("tol_fixed_point", self.tol_fixed_point)?;
        positive("tol_limit", self.tol_limit)?;
        positive("n0", self.n0)?;
        if !(self.n_factor > T::one()) {
            return Err(Error::Config(format!("schedule factor {} must exceed 1", self.n_factor)));
        }
        if self.levels == 0 || self.max_iter == 0 {
            return Err(Error::Config("levels and max_iter must be positive".into()));
        }
        if !(self.interior_window > T::zero() && self.interior_window < T::one()) {
            return Err(Error::Config(format!("interior window {} outside (0, 1)", self.interior_window)));
        }
        if self.divergence_run == 0 {
            return Err(Error::Config("divergence run must be positive".into()));
        }
        Ok(())
    }

    /// Boundary levels n₀·factorᵏ, k = 0..levels.
    pub fn schedule(&self) -> Vec<T> {
        let mut n = self.n0;
        (0..self.levels)
            .map(|_| {
                let v = n;
                n = n * self.n_factor;
                v
            })
            .collect()
    }
}
