use std::ops::Range;

use super::Domain;
use crate::error::{check_len, Error, Result};
use crate::scalar::Real;

/// Which boundary point a node's distance is measured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

/// Boundary-graded interior nodes.
///
/// Each node stores its boundary distance ρ directly, so node gaps near the
/// boundary are exact even when `coord` rounds to the boundary coordinate.
/// Nodes are addressed either by interior index `0..m` or by extended index
/// `0..=m+1`, where extended `0` and `m+1` are the two interval endpoints. For
/// balls, extended `0` is a ghost node at the centre (mirroring node 1) and
/// extended `m+1` is the sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedMesh<T> {
    domain: Domain<T>,
    gamma: T,
    coords: Vec<T>,
    rho: Vec<T>,
    side: Vec<Side>,
}

/// Builds `m` interior nodes clustered algebraically (exponent `gamma`) at the boundary.
pub fn build_mesh<T: Real>(domain: Domain<T>, m: usize, gamma: T) -> Result<GradedMesh<T>> {
    if m < 8 {
        return Err(Error::Config(format!("mesh needs at least 8 interior nodes, got {m}")));
    }
    if !(gamma >= T::one()) || !gamma.is_finite() {
        return Err(Error::Config(format!("grading exponent {gamma} must be ≥ 1")));
    }
    let denom = T::from_usize_lossy(m + 1);
    let mut coords = Vec::with_capacity(m);
    let mut rho = Vec::with_capacity(m);
    let mut side = Vec::with_capacity(m);
    match domain {
        Domain::Interval { a, b } => {
            let half = (b - a) * T::lit(0.5);
            for j in 1..=m {
                let lower = 2 * j <= m + 1;
                let k = if lower { j } else { m + 1 - j };
                let s = T::from_usize_lossy(2 * k) / denom;
                let r = half * s.powf(gamma);
                rho.push(r);
                if lower {
                    side.push(Side::Lower);
                    coords.push(a + r);
                } else {
                    side.push(Side::Upper);
                    coords.push(b - r);
                }
            }
        }
        Domain::Ball { radius, .. } => {
            for j in 1..=m {
                let s = T::from_usize_lossy(m + 1 - j) / denom;
                let r = radius * s.powf(gamma);
                rho.push(r);
                side.push(Side::Upper);
                coords.push(radius - r);
            }
        }
    }
    if rho.iter().any(|r| !(*r > T::zero())) {
        return Err(Error::Config(format!(
            "grading exponent {gamma} underflows the boundary distance at M = {m}"
        )));
    }
    Ok(GradedMesh { domain, gamma, coords, rho, side })
}

impl<T: Real> GradedMesh<T> {
    pub fn domain(&self) -> &Domain<T> {
        &self.domain
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// Number of interior nodes.
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    /// Ascending node coordinates (interval) or radii (ball).
    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn rho(&self) -> &[T] {
        &self.rho
    }

    pub fn sides(&self) -> &[Side] {
        &self.side
    }

    pub fn is_ball(&self) -> bool {
        matches!(self.domain, Domain::Ball { .. })
    }

    /// Number of Dirichlet trace values (2 for an interval, 1 for a ball).
    pub fn boundary_count(&self) -> usize {
        if self.is_ball() {
            1
        } else {
            2
        }
    }

    /// Boundary locations carrying the Dirichlet trace.
    pub fn boundary_nodes(&self) -> Vec<T> {
        match self.domain {
            Domain::Interval { a, b } => vec![a, b],
            Domain::Ball { radius, .. } => vec![radius],
        }
    }

    /// Extended indices of the boundary nodes, ordered like [`Self::boundary_nodes`].
    pub fn boundary_ext_indices(&self) -> Vec<usize> {
        if self.is_ball() {
            vec![self.len() + 1]
        } else {
            vec![0, self.len() + 1]
        }
    }

    pub(crate) fn ext_rho(&self, k: usize) -> T {
        let m = self.len();
        match (k, self.domain) {
            (0, Domain::Ball { radius, .. }) => radius,
            (0, _) => T::zero(),
            (k, _) if k == m + 1 => T::zero(),
            (k, _) => self.rho[k - 1],
        }
    }

    fn ext_side(&self, k: usize) -> Side {
        let m = self.len();
        if k == 0 {
            if self.is_ball() {
                Side::Upper
            } else {
                Side::Lower
            }
        } else if k == m + 1 {
            Side::Upper
        } else {
            self.side[k - 1]
        }
    }

    /// Coordinate of an extended node.
    pub(crate) fn ext_coord(&self, k: usize) -> T {
        let m = self.len();
        match (k, self.domain) {
            (0, Domain::Interval { a, .. }) => a,
            (0, Domain::Ball { .. }) => T::zero(),
            (k, Domain::Interval { b, .. }) if k == m + 1 => b,
            (k, Domain::Ball { radius, .. }) if k == m + 1 => radius,
            (k, _) => self.coords[k - 1],
        }
    }

    /// Distance between two extended nodes, computed from boundary distances.
    pub fn gap(&self, k: usize, l: usize) -> T {
        let (rk, rl) = (self.ext_rho(k), self.ext_rho(l));
        if self.ext_side(k) == self.ext_side(l) {
            (rk - rl).abs()
        } else {
            (self.domain.diameter() - rk - rl).abs()
        }
    }

    /// Smallest node-to-boundary distance.
    pub fn min_boundary_distance(&self) -> T {
        self.rho.iter().fold(T::infinity(), |m, r| m.min(*r))
    }

    /// Interior indices of the inner region Ω_t = {ρ > t}, a contiguous window.
    pub fn inner_window(&self, t: T) -> Range<usize> {
        let first = self.rho.iter().position(|r| *r > t);
        match first {
            None => 0..0,
            Some(lo) => {
                let hi = self.rho.iter().rposition(|r| *r > t).map_or(lo, |h| h + 1);
                lo..hi
            }
        }
    }

    /// Interior indices attaining the largest boundary distance.
    pub fn center_indices(&self) -> Vec<usize> {
        let top = self.rho.iter().fold(T::zero(), |m, r| m.max(*r));
        let tol = top * T::lit(1e-12);
        (0..self.len()).filter(|&i| (self.rho[i] - top).abs() <= tol).collect()
    }

    /// Value at the deepest point of the domain, averaged over tied nodes.
    pub fn center_value(&self, u: &[T]) -> Result<T> {
        check_len(self.len(), u.len())?;
        let idx = self.center_indices();
        let s = idx.iter().fold(T::zero(), |s, &i| s + u[i]);
        Ok(s / T::from_usize_lossy(idx.len()))
    }

    /// Trapezoid cell weights (x_{i+1} − x_{i−1})/2 of the interior nodes.
    pub fn cell_weights(&self) -> Vec<T> {
        (1..=self.len())
            .map(|k| (self.gap(k - 1, k) + self.gap(k, k + 1)) * T::lit(0.5))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_mesh_without_grading() {
        let d = Domain::interval(-1.0f64, 1.0).unwrap();
        let mesh = build_mesh(d, 9, 1.0).unwrap();
        let expect = [-0.8, -0.6, -0.4, -0.2, 0.0, 0.2, 0.4, 0.6, 0.8];
        for (x, e) in mesh.coords().iter().zip(expect) {
            assert!((x - e).abs() < 1e-14, "{x} vs {e}");
        }
    }

    #[test]
    fn graded_minimum_distance() {
        let d = Domain::interval(-1.0f64, 1.0).unwrap();
        let mesh = build_mesh(d, 128, 3.0).unwrap();
        // Grading map at the extreme index: (L/2)(2/(M+1))^γ.
        let expect = (2.0f64 / 129.0).powi(3);
        assert!((mesh.min_boundary_distance() - expect).abs() < 1e-18);
        let ratio = mesh.min_boundary_distance() / (1.0f64 / 129.0).powi(3);
        assert!((1.0..=8.0).contains(&ratio));
    }

    #[test]
    fn ball_radii_increase() {
        let d = Domain::ball(1.0f64, 2).unwrap();
        let mesh = build_mesh(d, 64, 2.0).unwrap();
        assert!(mesh.coords().windows(2).all(|w| w[0] < w[1]));
        assert!(*mesh.coords().last().unwrap() < 1.0);
        assert_eq!(mesh.boundary_count(), 1);
    }

    #[test]
    fn rejects_bad_parameters() {
        let d = Domain::interval(-1.0f64, 1.0).unwrap();
        assert!(matches!(build_mesh(d, 7, 2.0), Err(Error::Config(_))));
        assert!(matches!(build_mesh(d, 16, 0.5), Err(Error::Config(_))));
    }

    #[test]
    fn gaps_stay_exact_under_strong_grading() {
        let d = Domain::interval(-1.0f64, 1.0).unwrap();
        let mesh = build_mesh(d, 64, 12.0).unwrap();
        let r = mesh.rho();
        assert!((mesh.gap(0, 1) - r[0]).abs() <= r[0] * 1e-15);
        assert!((mesh.gap(1, 2) - (r[1] - r[0])).abs() <= r[1] * 1e-15);
        assert!((mesh.gap(1, 65) - (2.0 - r[0] - r[63])).abs() < 1e-15);
    }

    #[test]
    fn inner_window_is_contiguous() {
        let d = Domain::interval(-1.0f64, 1.0).unwrap();
        let mesh = build_mesh(d, 40, 2.0).unwrap();
        let w = mesh.inner_window(0.2);
        assert!(w.clone().all(|i| mesh.rho()[i] > 0.2));
        assert!((0..40).filter(|i| !w.contains(i)).all(|i| mesh.rho()[i] <= 0.2));
        assert_eq!(mesh.inner_window(0.0), 0..40);
    }
}
