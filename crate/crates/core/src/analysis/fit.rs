use crate::error::{Error, Result};
use crate::geometry::{GradedMesh, Side};
use crate::scalar::Real;
use crate::solver::SolutionField;

/// Nodes nearest each boundary left out of fits (the discretization layer).
const EXCLUDED_PER_BOUNDARY: usize = 2;
const MIN_NODES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitWindow<T> {
    pub rho_lo: T,
    pub rho_hi: T,
}

impl<T: Real> FitWindow<T> {
    pub fn new(rho_lo: T, rho_hi: T) -> Result<Self> {
        if rho_lo >= T::zero() && rho_lo < rho_hi {
            Ok(Self { rho_lo, rho_hi })
        } else {
            Err(Error::Fit(format!("fit window [{rho_lo}, {rho_hi}] is empty")))
        }
    }

    /// ρ ∈ [5·h_min, 0.1·diameter].
    pub fn default_for(mesh: &GradedMesh<T>) -> Self {
        Self {
            rho_lo: T::lit(5.0) * mesh.min_boundary_distance(),
            rho_hi: T::lit(0.1) * mesh.domain().diameter(),
        }
    }

    /// Window with the same upper end and a logarithmically halved span.
    pub fn halved(&self) -> Self {
        Self { rho_lo: (self.rho_lo * self.rho_hi).sqrt(), rho_hi: self.rho_hi }
    }

    fn contains(&self, rho: T) -> bool {
        rho >= self.rho_lo && rho <= self.rho_hi
    }
}

/// Least-squares fit of log(value) = intercept + beta·log(ρ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit<T> {
    pub beta: T,
    pub intercept: T,
    pub r_squared: T,
    pub rho_lo: T,
    pub rho_hi: T,
    pub node_count: usize,
}

/// Fits all samples with ρ inside the window.
pub fn fit_power_law<T: Real>(rho: &[T], values: &[T], window: FitWindow<T>) -> Result<RateFit<T>> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (r, v) in rho.iter().zip(values) {
        if !window.contains(*r) {
            continue;
        }
        if !(*v > T::zero()) || !v.is_finite() {
            return Err(Error::Fit(format!("value {v} at ρ = {r} is not positive")));
        }
        xs.push(r.ln());
        ys.push(v.ln());
    }
    let n = xs.len();
    if n < MIN_NODES {
        return Err(Error::Fit(format!(
            "window [{}, {}] holds {n} nodes, need {MIN_NODES}",
            window.rho_lo, window.rho_hi
        )));
    }
    let nf = T::from_usize_lossy(n);
    let mx = xs.iter().copied().sum::<T>() / nf;
    let my = ys.iter().copied().sum::<T>() / nf;
    let (mut sxx, mut sxy, mut syy) = (T::zero(), T::zero(), T::zero());
    for (x, y) in xs.iter().zip(&ys) {
        let (dx, dy) = (*x - mx, *y - my);
        sxx = sxx + dx * dx;
        sxy = sxy + dx * dy;
        syy = syy + dy * dy;
    }
    if sxx <= T::zero() {
        return Err(Error::Fit("window nodes share one boundary distance".into()));
    }
    let beta = sxy / sxx;
    let intercept = my - beta * mx;
    let ss_res = xs.iter().zip(&ys).fold(T::zero(), |s, (x, y)| {
        let e = *y - intercept - beta * *x;
        s + e * e
    });
    let r_squared = if syy > T::zero() { (T::one() - ss_res / syy).max(T::zero()).min(T::one()) } else { T::one() };
    Ok(RateFit { beta, intercept, r_squared, rho_lo: window.rho_lo, rho_hi: window.rho_hi, node_count: n })
}

/// Fits nodal data on a mesh, leaving out the two nodes nearest each boundary.
pub fn fit_mesh_values<T: Real>(mesh: &GradedMesh<T>, values: &[T], window: Option<FitWindow<T>>) -> Result<RateFit<T>> {
    if values.len() != mesh.len() {
        return Err(Error::Shape { expected: mesh.len(), got: values.len() });
    }
    let window = window.unwrap_or_else(|| FitWindow::default_for(mesh));
    let mut keep = vec![true; mesh.len()];
    for side in [Side::Lower, Side::Upper] {
        let mut idx: Vec<usize> = (0..mesh.len()).filter(|&i| mesh.sides()[i] == side).collect();
        idx.sort_by(|&a, &b| mesh.rho()[a].partial_cmp(&mesh.rho()[b]).unwrap_or(std::cmp::Ordering::Equal));
        for &i in idx.iter().take(EXCLUDED_PER_BOUNDARY) {
            keep[i] = false;
        }
    }
    let (rho, vals): (Vec<T>, Vec<T>) = (0..mesh.len())
        .filter(|&i| keep[i])
        .map(|i| (mesh.rho()[i], values[i]))
        .unzip();
    fit_power_law(&rho, &vals, window)
}

/// Boundary exponent of a solution field.
pub fn fit_rate<T: Real>(u: &SolutionField<T>, window: Option<FitWindow<T>>) -> Result<RateFit<T>> {
    fit_mesh_values(&u.mesh, &u.values, window)
}
