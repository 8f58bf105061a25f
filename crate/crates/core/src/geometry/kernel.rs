use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;
use crate::scalar::{gamma_fn, Real};

/// Radial reduction K_N(r, s) = s^{N−1} ∫_{S^{N−1}} |r e₁ − s ω|^{−(N+2α)} dω of the
/// kernel |x − y|^{−(N+2α)}.
#[derive(Debug, Clone)]
pub struct RadialKernel<T> {
    dim: usize,
    alpha: T,
    angular_order: usize,
    rule: GaussLegendre<T>,
    lower_sphere: T,
    full_sphere: T,
    diagonal: T,
}

fn sphere_area(n: usize) -> f64 {
    // Surface area of the unit sphere S^{n−1} ⊂ R^n.
    let h = n as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(h) / gamma_fn(h)
}

impl<T: Real> RadialKernel<T> {
    pub fn new(dim: usize, alpha: T, angular_order: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("dimension must be positive".into()));
        }
        if !(alpha > T::zero() && alpha < T::one()) {
            return Err(Error::Domain(format!("fractional order {alpha} outside (0, 1)")));
        }
        let a = alpha.as_f64();
        let n = dim as f64;
        let diagonal = std::f64::consts::PI.powf((n - 1.0) / 2.0) * gamma_fn(a + 0.5) / gamma_fn(n / 2.0 + a);
        Ok(Self {
            dim,
            alpha,
            angular_order: angular_order.max(2),
            rule: GaussLegendre::new(angular_order.max(2)),
            lower_sphere: T::lit(if dim >= 2 { sphere_area(dim - 1) } else { 0.0 }),
            full_sphere: T::lit(sphere_area(dim)),
            diagonal: T::lit(diagonal),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn angular_order(&self) -> usize {
        self.angular_order
    }

    /// Limit of K_N(r, s)·|r − s|^{1+2α} as s → r.
    pub fn diagonal_factor(&self) -> T {
        self.diagonal
    }

    /// Surface area of the unit sphere S^{N−1}.
    pub fn sphere_area(&self) -> T {
        self.full_sphere
    }

    pub fn eval(&self, r: T, s: T) -> Result<T> {
        if r == s {
            return Err(Error::Singular(format!("radial kernel evaluated on the diagonal r = s = {r}")));
        }
        Ok(self.eval_with_gap(r, s, (r - s).abs()))
    }

    /// Kernel value with the separation |r − s| supplied separately (exact near the boundary).
    pub fn eval_with_gap(&self, r: T, s: T, gap: T) -> T {
        let beta = T::one() + self.alpha + self.alpha;
        if self.dim == 1 {
            return gap.powf(-beta) + (r + s).powf(-beta);
        }
        if s <= T::zero() {
            return T::zero();
        }
        let expo = -(T::from_usize_lossy(self.dim) + self.alpha + self.alpha) * T::lit(0.5);
        if r <= T::zero() {
            return self.full_sphere * s.powf(-beta);
        }
        let rs = r * s;
        let g2 = gap * gap;
        let sin_power = self.dim - 2;
        let integrand = |theta: T| {
            let h = (theta * T::lit(0.5)).sin();
            let base = g2 + T::lit(4.0) * rs * h * h;
            let w = if sin_power == 0 { T::one() } else { theta.sin().powi(sin_power as i32) };
            base.powf(expo) * w
        };
        let delta = gap / rs.sqrt();
        let mut hi = T::PI();
        let mut acc = T::zero();
        for _ in 0..90 {
            let lo = hi * T::lit(0.5);
            if lo <= delta {
                break;
            }
            acc = acc + self.rule.integrate(lo, hi, integrand);
            hi = lo;
        }
        acc = acc + self.rule.integrate(T::zero(), hi, integrand);
        self.lower_sphere * acc * s.powi(self.dim as i32 - 1)
    }
}

/// Evaluates K_N(r, s) with a fixed angular order of 64.
pub fn radial_kernel<T: Real>(dim: usize, alpha: T, r: T, s: T) -> Result<T> {
    RadialKernel::new(dim, alpha, 64)?.eval(r, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_reduction() {
        let k = radial_kernel(1, 0.75f64, 0.3, 0.5).unwrap();
        let beta = 2.5f64;
        let expect = 0.2f64.powf(-beta) + 0.8f64.powf(-beta);
        assert!((k - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn diagonal_is_singular() {
        assert!(matches!(radial_kernel(2, 0.75f64, 0.3, 0.3), Err(Error::Singular(_))));
    }

    #[test]
    fn weighted_symmetry() {
        for &dim in &[2usize, 3, 4] {
            let (r, s) = (0.37f64, 0.81f64);
            let a = radial_kernel(dim, 0.6f64, r, s).unwrap();
            let b = radial_kernel(dim, 0.6f64, s, r).unwrap();
            let expect = b * (s / r).powi(dim as i32 - 1);
            assert!((a - expect).abs() < 1e-10 * a, "dim {dim}: {a} vs {expect}");
        }
    }

    #[test]
    fn three_dimensional_closed_form() {
        // In R^3 the angular integral is elementary:
        // K = 2π s/(r (β−2)) · (|r−s|^{2−β} − (r+s)^{2−β}), β = 3 + 2α.
        let (alpha, r, s): (f64, f64, f64) = (0.75, 0.5, 0.5 + 1e-4);
        let beta = 3.0 + 2.0 * alpha;
        let expect = 2.0 * std::f64::consts::PI * s / (r * (beta - 2.0))
            * ((s - r).abs().powf(2.0 - beta) - (r + s).powf(2.0 - beta));
        let k = radial_kernel(3, alpha, r, s).unwrap();
        assert!((k - expect).abs() < 1e-9 * expect, "{k} vs {expect}");
        let near = k * (s - r).abs().powf(1.0 + 2.0 * alpha);
        let kern = RadialKernel::new(3, alpha, 64).unwrap();
        assert!((near / kern.diagonal_factor() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn planar_value_matches_shell_quadrature() {
        // Independent estimate: average the planar kernel over a thin annulus
        // s ± ε with a uniform polar tensor grid (trapezoid in angle, Simpson in radius).
        let (alpha, r, s) = (0.75f64, 0.5f64, 0.25f64);
        let eps = 1e-3;
        let nt = 20_000;
        let nr = 20;
        let mut total = 0.0;
        for i in 0..=nr {
            let rad = s - eps + 2.0 * eps * i as f64 / nr as f64;
            let wr = if i == 0 || i == nr { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            let mut ang = 0.0;
            for j in 0..nt {
                let t = 2.0 * std::f64::consts::PI * j as f64 / nt as f64;
                let (y1, y2) = (rad * t.cos(), rad * t.sin());
                let d2 = (r - y1).powi(2) + y2 * y2;
                ang += d2.powf(-(2.0 + 2.0 * alpha) / 2.0);
            }
            ang *= 2.0 * std::f64::consts::PI / nt as f64 * rad;
            total += wr * ang;
        }
        let shell = total * (2.0 * eps / nr as f64) / 3.0 / (2.0 * eps);
        let k = radial_kernel(2, alpha, r, s).unwrap();
        assert!((k - shell).abs() < 1e-4 * shell, "{k} vs {shell}");
    }
}
