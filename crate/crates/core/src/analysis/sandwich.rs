use crate::error::{Error, Result};
use crate::geometry::FractionalOrder;
use crate::operator::OperatorKind;
use crate::scalar::Real;
use crate::solver::{Nonlinearity, SolutionField};

use super::{fit_mesh_values, fit_rate, FitWindow, RateFit};

/// Predicted interval for the blow-up magnitude |β| and its check against a fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichVerdict<T> {
    pub predicted_lower: T,
    pub predicted_upper: T,
    pub fitted: RateFit<T>,
    pub inflation: T,
    pub pass: bool,
}

/// |β| interval: regional [(2α−1)/(q−1), 2α/(p−1)], full [2α/(q−1), 2α/(p−1)].
pub fn predicted_interval<T: Real>(kind: OperatorKind, alpha: FractionalOrder<T>, p: T, q: T) -> Result<(T, T)> {
    let one = T::one();
    if !(p > one && q >= p) {
        return Err(Error::Unsupported(format!("rate prediction needs 1 < p ≤ q, got p = {p}, q = {q}")));
    }
    let two_a = alpha.value() + alpha.value();
    let upper = two_a / (p - one);
    let lower = match kind {
        OperatorKind::Regional => (two_a - one) / (q - one),
        OperatorKind::Full => two_a / (q - one),
    };
    Ok((lower, upper))
}

/// Fits the boundary exponent of a blow-up solution and compares −β with the
/// predicted interval. Default inflation: 0.05 regional, 0.1 full.
pub fn sandwich_verdict<T: Real>(
    u: &SolutionField<T>,
    f: &Nonlinearity<T>,
    alpha: FractionalOrder<T>,
    window: Option<FitWindow<T>>,
    inflation: Option<T>,
) -> Result<SandwichVerdict<T>> {
    let (p, q) = f
        .exponents()
        .ok_or_else(|| Error::Unsupported(format!("{} has no power-law exponents", f.label())))?;
    let (predicted_lower, predicted_upper) = predicted_interval(u.kind, alpha, p, q)?;
    let inflation = inflation.unwrap_or_else(|| match u.kind {
        OperatorKind::Regional => T::lit(0.05),
        OperatorKind::Full => T::lit(0.1),
    });
    let fitted = fit_rate(u, window)?;
    let magnitude = -fitted.beta;
    let pass = predicted_lower - inflation <= magnitude && magnitude <= predicted_upper + inflation;
    Ok(SandwichVerdict { predicted_lower, predicted_upper, fitted, inflation, pass })
}

/// A fitted exponent compared with a target value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentCheck<T> {
    pub target: T,
    pub tolerance: T,
    pub fitted: RateFit<T>,
    pub pass: bool,
}

impl<T: Real> ExponentCheck<T> {
    pub fn new(target: T, tolerance: T, fitted: RateFit<T>) -> Self {
        Self { target, tolerance, fitted, pass: (fitted.beta - target).abs() <= tolerance }
    }
}

/// Exponent of n − u_n against ρ for a finite-level solution; the target is 2α − 1.
pub fn decay_check<T: Real>(
    u: &SolutionField<T>,
    alpha: FractionalOrder<T>,
    window: Option<FitWindow<T>>,
    tolerance: T,
) -> Result<ExponentCheck<T>> {
    let n = u.level.ok_or_else(|| Error::Unsupported("decay fit needs a constant boundary level".into()))?;
    let gap: Vec<T> = u.values.iter().map(|v| n - *v).collect();
    let fitted = fit_mesh_values(&u.mesh, &gap, window)?;
    let target = alpha.value() + alpha.value() - T::one();
    Ok(ExponentCheck::new(target, tolerance, fitted))
}
