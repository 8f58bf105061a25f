use crate::error::{Error, Result};
use crate::geometry::{build_mesh, Domain, FractionalOrder, GradedMesh};
use crate::operator::{assemble, OperatorKind};
use crate::scalar::Real;
use crate::solver::{green_matrix, GreenMatrix};

/// Which form of the near-diagonal term the bound uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenBoundForm {
    /// min{|x−y|^{2α−N}, ρ_x^{2α−1}ρ_y^{2α−1}/|x−y|^{N−2+2α}}.
    Literal,
    /// For N < 2α the first term is max(|x−y|, min(ρ_x, ρ_y))^{2α−N}, which stays
    /// positive on the diagonal.
    Regularized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreenBoundReport<T> {
    /// max over i ≠ j of the Green density divided by the bound.
    pub ratio: T,
    pub argmax: (usize, usize),
    pub pairs: usize,
    pub form: GreenBoundForm,
}

pub fn green_bound_check<T: Real>(
    g: &GreenMatrix<T>,
    mesh: &GradedMesh<T>,
    alpha: FractionalOrder<T>,
) -> Result<GreenBoundReport<T>> {
    if !alpha.requires_half_plus() {
        return Err(Error::Precondition(format!("Green bound needs α > 1/2, got {}", alpha.value())));
    }
    if mesh.is_ball() {
        return Err(Error::Unsupported("Green bound is evaluated on intervals".into()));
    }
    if g.kind != OperatorKind::Regional {
        return Err(Error::Precondition("Green bound is stated for the regional operator".into()));
    }
    let a = alpha.value();
    let two_a = a + a;
    let dim = T::one();
    let form = if dim < two_a { GreenBoundForm::Regularized } else { GreenBoundForm::Literal };
    let m = mesh.len();
    let rho = mesh.rho();
    let mut ratio = T::zero();
    let mut argmax = (0, 0);
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let d = mesh.gap(i + 1, j + 1);
            let near = match form {
                GreenBoundForm::Regularized => d.max(rho[i].min(rho[j])).powf(two_a - dim),
                GreenBoundForm::Literal => d.powf(two_a - dim),
            };
            let decay = (rho[i] * rho[j]).powf(two_a - T::one()) / d.powf(dim - T::lit(2.0) + two_a);
            let r = g.density(i, j) / near.min(decay);
            if r > ratio {
                ratio = r;
                argmax = (i, j);
            }
        }
    }
    Ok(GreenBoundReport { ratio, argmax, pairs: m * (m - 1), form })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreenRefinement<T> {
    pub coarse: GreenBoundReport<T>,
    pub fine: GreenBoundReport<T>,
    pub relative_change: T,
    /// Smallest entry relative to the largest, over both meshes.
    pub min_entry_ratio: T,
    /// Largest density symmetry defect over both meshes.
    pub symmetry_defect: T,
}

/// Green bound ratio on meshes with M and 2M interior nodes.
pub fn refine_green_bound<T: Real>(
    domain: Domain<T>,
    alpha: FractionalOrder<T>,
    m: usize,
    gamma: T,
) -> Result<GreenRefinement<T>> {
    let run = |mm: usize| -> Result<(GreenBoundReport<T>, T, T)> {
        let mesh = build_mesh(domain, mm, gamma)?;
        let op = assemble(&mesh, alpha, OperatorKind::Regional)?;
        let g = green_matrix(&op)?;
        Ok((green_bound_check(&g, &mesh, alpha)?, g.min_entry_ratio, g.symmetry_defect))
    };
    let (coarse, min_c, sym_c) = run(m)?;
    let (fine, min_f, sym_f) = run(2 * m)?;
    let relative_change = (fine.ratio - coarse.ratio).abs() / coarse.ratio;
    Ok(GreenRefinement {
        coarse,
        fine,
        relative_change,
        min_entry_ratio: min_c.min(min_f),
        symmetry_defect: sym_c.max(sym_f),
    })
}
