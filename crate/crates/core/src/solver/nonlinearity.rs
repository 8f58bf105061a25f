use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Real;

const SAMPLES: usize = 1000;

/// Nondecreasing nonlinearity f with f(0) ≥ 0.
#[derive(Clone)]
pub enum Nonlinearity<T> {
    /// f(s) = c·s₊^p, or c·(s₊^p + s₊^q) when q ≠ p.
    Power { c: T, p: T, q: T },
    Custom { label: String, f: Arc<dyn Fn(T) -> T + Send + Sync> },
}

impl<T: Real> fmt::Debug for Nonlinearity<T> {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Power { c, p, q } => write!(fm, "Power {{ c: {c}, p: {p}, q: {q} }}"),
            Self::Custom { label, .. } => write!(fm, "Custom({label})"),
        }
    }
}

impl<T: Real> Nonlinearity<T> {
    pub fn power(c: T, p: T) -> Result<Self> {
        Self::power_pair(c, p, p)
    }

    /// f(s) = c·(s₊^p + s₊^q), bounded below by c·s^p and above by 2c·s^q for s ≥ 1.
    pub fn power_pair(c: T, p: T, q: T) -> Result<Self> {
        if !(c >= T::zero()) || !c.is_finite() {
            return Err(Error::Config(format!("power coefficient {c} must be finite and ≥ 0")));
        }
        if !(p > T::zero()) || !(q >= p) || !q.is_finite() {
            return Err(Error::Config(format!("power exponents need 0 < p ≤ q, got p = {p}, q = {q}")));
        }
        Ok(Self::Power { c, p, q })
    }

    pub fn zero() -> Self {
        Self::Power { c: T::zero(), p: T::one(), q: T::one() }
    }

    pub fn custom(label: impl Into<String>, f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self::Custom { label: label.into(), f: Arc::new(f) }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Power { c, p, q } if p == q => format!("{c}·s^{p}"),
            Self::Power { c, p, q } => format!("{c}·(s^{p} + s^{q})"),
            Self::Custom { label, .. } => label.clone(),
        }
    }

    /// True when f vanishes identically.
    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Power { c, .. } if *c == T::zero())
    }

    /// Growth exponents (p, q) of the power family.
    pub fn exponents(&self) -> Option<(T, T)> {
        match self {
            Self::Power { p, q, .. } => Some((*p, *q)),
            Self::Custom { .. } => None,
        }
    }

    pub fn eval(&self, s: T) -> T {
        match self {
            Self::Power { c, p, q } => {
                if s <= T::zero() || *c == T::zero() {
                    T::zero()
                } else if p == q {
                    *c * s.powf(*p)
                } else {
                    *c * (s.powf(*p) + s.powf(*q))
                }
            }
            Self::Custom { f, .. } => f(s),
        }
    }

    /// f evaluated in double precision; custom functions go through `T`.
    pub fn eval_f64(&self, s: f64) -> f64 {
        match self {
            Self::Power { c, p, q } => {
                let (c, p, q) = (c.as_f64(), p.as_f64(), q.as_f64());
                if s <= 0.0 || c == 0.0 {
                    0.0
                } else if p == q {
                    c * s.powf(p)
                } else {
                    c * (s.powf(p) + s.powf(q))
                }
            }
            Self::Custom { f, .. } => f(T::lit(s)).as_f64(),
        }
    }

    pub fn derivative(&self, s: T) -> T {
        match self {
            Self::Power { c, p, q } => {
                if *c == T::zero() || s < T::zero() {
                    return T::zero();
                }
                let one = T::one();
                let term = |e: T| {
                    if s == T::zero() {
                        if e > one {
                            T::zero()
                        } else if e == one {
                            one
                        } else {
                            T::infinity()
                        }
                    } else {
                        e * s.powf(e - one)
                    }
                };
                if p == q {
                    *c * term(*p)
                } else {
                    *c * (term(*p) + term(*q))
                }
            }
            Self::Custom { f, .. } => {
                let h = T::lit(1e-6) * s.abs().max(T::one());
                (f(s + h) - f(s - h)) / (h + h)
            }
        }
    }

    /// Upper bound for the Lipschitz constant of f on [lo, hi].
    pub fn lipschitz_on(&self, lo: T, hi: T) -> T {
        match self {
            Self::Power { p, .. } => {
                if *p >= T::one() {
                    // f' is nondecreasing for exponents ≥ 1.
                    self.derivative(hi.max(T::zero()))
                } else if hi > T::zero() {
                    T::infinity()
                } else {
                    T::zero()
                }
            }
            Self::Custom { f, .. } => {
                if hi <= lo {
                    return self.derivative(hi).max(T::zero());
                }
                let n = T::from_usize_lossy(SAMPLES);
                let step = (hi - lo) / n;
                let mut best = T::zero();
                let mut prev = f(lo);
                for k in 1..=SAMPLES {
                    let s = lo + step * T::from_usize_lossy(k);
                    let v = f(s);
                    best = best.max((v - prev) / step);
                    prev = v;
                }
                best = best.max(self.derivative(lo)).max(self.derivative(hi));
                best * T::lit(1.01)
            }
        }
    }

    /// Upper bound for the Lipschitz constant on [−b, b].
    pub fn lipschitz(&self, b: T) -> T {
        self.lipschitz_on(-b, b)
    }

    /// Spot-checks monotonicity on [lo, hi] and the sign condition f(0) ≥ 0.
    pub fn check_admissible(&self, lo: T, hi: T) -> Result<()> {
        let f0 = self.eval(T::zero());
        if !(f0 >= T::zero()) {
            return Err(Error::Precondition(format!("f(0) = {f0} is negative")));
        }
        if let Self::Custom { .. } = self {
            let n = T::from_usize_lossy(SAMPLES);
            let step = (hi - lo) / n;
            let mut prev = self.eval(lo);
            for k in 1..=SAMPLES {
                let s = lo + step * T::from_usize_lossy(k);
                let v = self.eval(s);
                if v < prev || v.is_nan() {
                    return Err(Error::Precondition(format!(
                        "{} is not nondecreasing near s = {s}",
                        self.label()
                    )));
                }
                prev = v;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_family_values() {
        let f = Nonlinearity::power(2.0f64, 3.0).unwrap();
        assert_eq!(f.eval(2.0), 16.0);
        assert_eq!(f.eval(-1.0), 0.0);
        assert_eq!(f.derivative(1.0), 6.0);
        assert_eq!(f.lipschitz(2.0), 24.0);
        assert_eq!(f.exponents(), Some((3.0, 3.0)));
        let g = Nonlinearity::power_pair(1.0f64, 2.0, 4.0).unwrap();
        assert_eq!(g.eval(2.0), 20.0);
        assert!(Nonlinearity::power_pair(1.0f64, 3.0, 2.0).is_err());
        assert!(Nonlinearity::<f64>::zero().is_zero());
    }

    #[test]
    fn custom_lipschitz_bounds_the_slope() {
        let f = Nonlinearity::custom("sinh", |s: f64| s.sinh());
        let l = f.lipschitz(2.0);
        assert!(l >= 2f64.cosh() && l < 2f64.cosh() * 1.05);
        assert!(f.check_admissible(-2.0, 2.0).is_ok());
        let bad = Nonlinearity::custom("cos", |s: f64| s.cos());
        assert!(matches!(bad.check_admissible(0.0, 4.0), Err(Error::Precondition(_))));
        let neg = Nonlinearity::custom("shifted", |s: f64| s - 1.0);
        assert!(neg.check_admissible(-1.0, 1.0).is_err());
    }
}
