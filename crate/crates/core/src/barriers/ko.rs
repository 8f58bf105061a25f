use crate::error::{Error, Result};
use crate::quadrature::integrate_adaptive;
use crate::scalar::Real;
use crate::solver::Nonlinearity;

const CUTOFFS: [f64; 3] = [1e3, 1e6, 1e9];
/// Successive tails must shrink at least by this factor for convergence.
const SHRINK: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converges,
    Diverges,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KOReport {
    /// ∫₁^∞ ds / √(∫₀^s f).
    pub ko: Verdict,
    /// ∫₁^∞ f(s) s^{−1−(1+α)/(1−α)} ds.
    pub tail_condition: Verdict,
    /// Tails of the first integral over [10³, 10⁶] and [10⁶, 10⁹].
    pub ko_tails: [f64; 2],
    pub tail_condition_tails: [f64; 2],
    /// Exponent (1+α)/(1−α) of the second integral.
    pub tail_exponent: f64,
    /// Verdicts from the exponent thresholds p > 1 and q < (1+α)/(1−α) for power families.
    pub analytic: Option<(Verdict, Verdict)>,
}

impl KOReport {
    pub fn agrees_with_analytic(&self) -> Option<bool> {
        self.analytic.map(|(k, t)| k == self.ko && t == self.tail_condition)
    }
}

fn classify(tails: [f64; 2]) -> Verdict {
    if tails[0].is_finite() && tails[1].is_finite() && tails[0] >= SHRINK * tails[1] {
        Verdict::Converges
    } else {
        Verdict::Diverges
    }
}

/// Integral over [a, b] in the variable u = ln s.
fn log_integral(g: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    integrate_adaptive(|u| {
        let s = u.exp();
        g(s) * s
    }, a.ln(), b.ln(), 0.0, 1e-9)
}

pub fn ko_classify<T: Real>(f: &Nonlinearity<T>, alpha: T) -> Result<KOReport> {
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::Domain(format!("fractional order {alpha} outside (0, 1)")));
    }
    f.check_admissible(T::zero(), T::lit(CUTOFFS[0]))?;
    let a = alpha.as_f64();
    let e = (1.0 + a) / (1.0 - a);
    let head = integrate_adaptive(|t| f.eval_f64(t), 0.0, 1.0, 0.0, 1e-12)?;
    let primitive = |s: f64| -> f64 {
        if s <= 1.0 {
            integrate_adaptive(|t| f.eval_f64(t), 0.0, s, 0.0, 1e-12).unwrap_or(f64::NAN)
        } else {
            head + log_integral(|t| f.eval_f64(t), 1.0, s).unwrap_or(f64::NAN)
        }
    };
    let ko_integrand = |s: f64| {
        let big_f = primitive(s);
        if big_f > 0.0 {
            1.0 / big_f.sqrt()
        } else {
            f64::INFINITY
        }
    };
    let tail_integrand = |s: f64| f.eval_f64(s) * s.powf(-1.0 - e);
    let tails = |g: &dyn Fn(f64) -> f64| -> Result<[f64; 2]> {
        let mut out = [0.0; 2];
        for k in 0..2 {
            out[k] = log_integral(g, CUTOFFS[k], CUTOFFS[k + 1]).unwrap_or(f64::INFINITY);
        }
        Ok(out)
    };
    let ko_tails = tails(&ko_integrand)?;
    let tail_condition_tails = tails(&tail_integrand)?;
    let analytic = f.exponents().filter(|_| !f.is_zero()).map(|(p, q)| {
        let ko = if p.as_f64() > 1.0 { Verdict::Converges } else { Verdict::Diverges };
        let tc = if q.as_f64() < e { Verdict::Converges } else { Verdict::Diverges };
        (ko, tc)
    });
    Ok(KOReport {
        ko: classify(ko_tails),
        tail_condition: classify(tail_condition_tails),
        ko_tails,
        tail_condition_tails,
        tail_exponent: e,
        analytic,
    })
}
