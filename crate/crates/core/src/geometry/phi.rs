use super::{Domain, FractionalOrder, GradedMesh, RadialKernel, Side};
use crate::error::{Error, Result};
use crate::quadrature::integrate_adaptive;
use crate::scalar::Real;

/// Exterior mass φ(x) = ∫_{R^N∖Ω} |x − y|^{−(N+2α)} dy at an interior point.
pub fn phi<T: Real>(domain: &Domain<T>, alpha: FractionalOrder<T>, x: &[T]) -> Result<T> {
    let rho = domain.rho(x)?;
    if rho <= T::zero() {
        return Err(Error::Divergence(format!("φ is infinite on the boundary (x = {x:?})")));
    }
    match *domain {
        Domain::Interval { a, b } => Ok(interval_phi(x[0] - a, b - x[0], alpha.value())),
        Domain::Ball { radius, dim } => ball_phi(radius, dim, alpha.value(), rho),
    }
}

/// φ at every interior node, using the nodes' exact boundary distances.
pub fn phi_on_mesh<T: Real>(mesh: &GradedMesh<T>, alpha: FractionalOrder<T>) -> Result<Vec<T>> {
    let diam = mesh.domain().diameter();
    match *mesh.domain() {
        Domain::Interval { .. } => Ok(mesh
            .rho()
            .iter()
            .zip(mesh.sides())
            .map(|(&r, side)| {
                let other = diam - r;
                match side {
                    Side::Lower => interval_phi(r, other, alpha.value()),
                    Side::Upper => interval_phi(other, r, alpha.value()),
                }
            })
            .collect()),
        Domain::Ball { radius, dim } => {
            mesh.rho().iter().map(|&r| ball_phi(radius, dim, alpha.value(), r)).collect()
        }
    }
}

fn interval_phi<T: Real>(dist_lower: T, dist_upper: T, alpha: T) -> T {
    let e = -(alpha + alpha);
    (dist_lower.powf(e) + dist_upper.powf(e)) / (alpha + alpha)
}

fn ball_phi<T: Real>(radius: T, dim: usize, alpha: T, rho: T) -> Result<T> {
    let (big_r, a, rho) = (radius.as_f64(), alpha.as_f64(), rho.as_f64());
    let r = big_r - rho;
    let kernel = RadialKernel::<f64>::new(dim, a, 64)?;
    // s = r + ρ·e^w maps the exterior radial half-line onto w ≥ 0.
    let cutoff = (1e4 * big_r.max(1.0)) / rho;
    let w_max = cutoff.ln();
    let body = integrate_adaptive(
        |w| {
            let gap = rho * w.exp();
            kernel.eval_with_gap(r, r + gap, gap) * gap
        },
        0.0,
        w_max,
        0.0,
        1e-11,
    )?;
    let s_far = r + rho * w_max.exp();
    let tail = if dim == 1 {
        ((s_far - r).powf(-2.0 * a) + (s_far + r).powf(-2.0 * a)) / (2.0 * a)
    } else {
        kernel.sphere_area() * s_far.powf(-2.0 * a) / (2.0 * a)
    };
    Ok(T::lit(body + tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_mesh;

    #[test]
    fn interval_center_value() {
        let d = Domain::interval(-1.0f64, 1.0).unwrap();
        let al = FractionalOrder::new(0.75f64).unwrap();
        // ∫_{|y|>1} |y|^{−2.5} dy = 2/1.5.
        assert!((phi(&d, al, &[0.0]).unwrap() - 4.0 / 3.0).abs() < 1e-14);
        let p = phi(&d, al, &[0.3]).unwrap();
        let q = phi(&d, al, &[-0.3]).unwrap();
        assert!((p - q).abs() < 1e-14);
        assert!(matches!(phi(&d, al, &[1.0]), Err(Error::Divergence(_))));
    }

    #[test]
    fn ball_path_matches_interval_in_one_dimension() {
        let al = FractionalOrder::new(0.6f64).unwrap();
        let ball = Domain::ball(1.0f64, 1).unwrap();
        let seg = Domain::interval(-1.0f64, 1.0).unwrap();
        for &x in &[0.0, 0.2, 0.5, 0.9, 0.999] {
            let a = phi(&ball, al, &[x]).unwrap();
            let b = phi(&seg, al, &[x]).unwrap();
            assert!((a - b).abs() < 1e-8 * b, "x = {x}: {a} vs {b}");
        }
    }

    #[test]
    fn ball_center_closed_form() {
        // At the centre φ = |S^{N−1}| ∫_R^∞ s^{−1−2α} ds = |S^{N−1}| R^{−2α}/(2α).
        let al = FractionalOrder::new(0.75f64).unwrap();
        let d = Domain::ball(1.0f64, 3).unwrap();
        let v = phi(&d, al, &[0.0, 0.0, 0.0]).unwrap();
        let expect = 4.0 * std::f64::consts::PI / 1.5;
        assert!((v - expect).abs() < 1e-7 * expect, "{v} vs {expect}");
    }

    #[test]
    fn mesh_values_match_pointwise() {
        let d = Domain::interval(-1.0f64, 1.0).unwrap();
        let al = FractionalOrder::new(0.9f64).unwrap();
        let mesh = build_mesh(d, 32, 2.0).unwrap();
        let v = phi_on_mesh(&mesh, al).unwrap();
        for (x, p) in mesh.coords().iter().zip(&v) {
            let q = phi(&d, al, &[*x]).unwrap();
            assert!((p - q).abs() < 1e-9 * q);
        }
    }
}
