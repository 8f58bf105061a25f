//! Domains, boundary distance, graded meshes, radial kernels and the exterior mass φ.

mod kernel;
mod mesh;
mod phi;

pub use kernel::{radial_kernel, RadialKernel};
pub use mesh::{build_mesh, GradedMesh, Side};
pub use phi::{phi, phi_on_mesh};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Order α of the fractional operator, 0 < α < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOrder<T>(T);

impl<T: Real> FractionalOrder<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if alpha > T::zero() && alpha < T::one() {
            Ok(Self(alpha))
        } else {
            Err(Error::Domain(format!("fractional order {alpha} outside (0, 1)")))
        }
    }

    pub fn value(self) -> T {
        self.0
    }

    /// True when α > 1/2, where the regional Green function decays like ρ^{2α−1}.
    pub fn requires_half_plus(self) -> bool {
        self.0 > T::lit(0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain<T> {
    Interval { a: T, b: T },
    /// Ball of the given radius centred at the origin of R^dim.
    Ball { radius: T, dim: usize },
}

impl<T: Real> Domain<T> {
    pub fn interval(a: T, b: T) -> Result<Self> {
        if a < b && a.is_finite() && b.is_finite() {
            Ok(Self::Interval { a, b })
        } else {
            Err(Error::Domain(format!("interval ({a}, {b}) is empty or unbounded")))
        }
    }

    pub fn ball(radius: T, dim: usize) -> Result<Self> {
        if radius > T::zero() && radius.is_finite() && dim >= 1 {
            Ok(Self::Ball { radius, dim })
        } else {
            Err(Error::Domain(format!("ball of radius {radius} in dimension {dim}")))
        }
    }

    pub fn dimension(&self) -> usize {
        match *self {
            Self::Interval { .. } => 1,
            Self::Ball { dim, .. } => dim,
        }
    }

    pub fn diameter(&self) -> T {
        match *self {
            Self::Interval { a, b } => b - a,
            Self::Ball { radius, .. } => radius + radius,
        }
    }

    /// Largest boundary distance attained in the domain.
    pub fn inradius(&self) -> T {
        self.diameter() * T::lit(0.5)
    }

    /// Distance from `x` to the complement of the domain.
    pub fn rho(&self, x: &[T]) -> Result<T> {
        let d = match *self {
            Self::Interval { a, b } => {
                if x.len() != 1 {
                    return Err(Error::Shape { expected: 1, got: x.len() });
                }
                (x[0] - a).min(b - x[0])
            }
            Self::Ball { radius, dim } => {
                if x.len() != dim {
                    return Err(Error::Shape { expected: dim, got: x.len() });
                }
                let r = x.iter().fold(T::zero(), |s, v| s + *v * *v).sqrt();
                radius - r
            }
        };
        if d < T::zero() || d.is_nan() {
            Err(Error::Domain(format!("point {x:?} lies outside the closed domain")))
        } else {
            Ok(d)
        }
    }
}

/// Boundary distance of a point, see [`Domain::rho`].
pub fn rho<T: Real>(domain: &Domain<T>, x: &[T]) -> Result<T> {
    domain.rho(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_examples() {
        let d = Domain::interval(-1.0f64, 1.0).unwrap();
        assert_eq!(rho(&d, &[0.0]).unwrap(), 1.0);
        assert_eq!(rho(&d, &[0.75]).unwrap(), 0.25);
        assert_eq!(rho(&d, &[1.0]).unwrap(), 0.0);
        assert!(matches!(rho(&d, &[1.5]), Err(Error::Domain(_))));
        let b = Domain::ball(1.0f64, 3).unwrap();
        assert!((rho(&b, &[0.4, 0.0, 0.0]).unwrap() - 0.6).abs() < 1e-15);
        assert!((rho(&b, &[0.0, 0.24, 0.32]).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn order_validation() {
        assert!(FractionalOrder::new(0.0f64).is_err());
        assert!(FractionalOrder::new(1.0).is_err());
        assert!(FractionalOrder::new(0.75f64).unwrap().requires_half_plus());
        assert!(!FractionalOrder::new(0.5f64).unwrap().requires_half_plus());
    }

    #[test]
    fn invalid_domains() {
        assert!(Domain::interval(1.0, -1.0).is_err());
        assert!(Domain::ball(0.0, 2).is_err());
        assert!(Domain::ball(1.0f64, 0).is_err());
    }
}
