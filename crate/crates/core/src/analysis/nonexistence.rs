use crate::error::{Error, Result};
use crate::geometry::FractionalOrder;
use crate::scalar::Real;
use crate::solver::{Nonlinearity, SolutionField};

/// How the layer constant λ is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaConfig<T> {
    /// λ = (2^{2α}·c)^{1/(q−1)} with c = max (n − u_n)/(n^q ρ^{2α−1}) over levels and nodes.
    Fitted,
    Fixed(T),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerSample<T> {
    pub n: T,
    /// r_n = (λn)^{−(q−1)/(2α−1)}.
    pub r_n: T,
    /// Minimum of u_n over nodes with r_n < ρ ≤ 2r_n.
    pub layer_min: Option<T>,
    pub nodes: usize,
    /// Whether u_n ≥ (1/2λ)ρ^{−(2α−1)/(q−1)} at every layer node.
    pub bound_holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonexistenceReport<T> {
    /// q ≤ 1 + 2α and q < α/(1−α).
    pub in_regime: bool,
    pub notes: Vec<String>,
    pub c_fit: T,
    pub lambda: T,
    pub samples: Vec<LayerSample<T>>,
    /// Slope of log(layer minimum) against log(r_n) and the number of levels used.
    pub layer_slope: Option<(T, usize)>,
    /// −(2α−1)/(q−1).
    pub predicted_slope: T,
    pub centers: Vec<T>,
    pub centers_strictly_increasing: bool,
}

pub fn nonexistence_diagnostics<T: Real>(
    levels: &[SolutionField<T>],
    f: &Nonlinearity<T>,
    alpha: FractionalOrder<T>,
    lambda_cfg: LambdaConfig<T>,
) -> Result<NonexistenceReport<T>> {
    let (_, q) = f
        .exponents()
        .ok_or_else(|| Error::Unsupported(format!("{} has no power-law exponents", f.label())))?;
    if levels.is_empty() {
        return Err(Error::Config("no levels to analyse".into()));
    }
    let a = alpha.value();
    let one = T::one();
    let two_a = a + a;
    let mut notes = Vec::new();
    let in_regime = q <= one + two_a && q < a / (one - a);
    if !in_regime {
        notes.push(format!("q = {q} is outside q ≤ 1 + 2α, q < α/(1−α): outside the nonexistence regime"));
    }
    let centers: Vec<T> = levels.iter().map(|u| u.center_value()).collect::<Result<_>>()?;
    let centers_strictly_increasing = centers.windows(2).all(|w| w[1] > w[0]);
    let predicted_slope = -(two_a - one) / (q - one);
    if !(q > one) || !alpha.requires_half_plus() {
        notes.push("layer radius is undefined for q ≤ 1 or α ≤ 1/2".into());
        return Ok(NonexistenceReport {
            in_regime,
            notes,
            c_fit: T::nan(),
            lambda: T::nan(),
            samples: Vec::new(),
            layer_slope: None,
            predicted_slope,
            centers,
            centers_strictly_increasing,
        });
    }
    let mut c_fit = T::zero();
    for u in levels {
        let n = u.level.ok_or_else(|| Error::Unsupported("levels need constant boundary data".into()))?;
        for (v, r) in u.values.iter().zip(u.mesh.rho()) {
            c_fit = c_fit.max((n - *v) / (n.powf(q) * r.powf(two_a - one)));
        }
    }
    let lambda = match lambda_cfg {
        LambdaConfig::Fixed(l) => l,
        LambdaConfig::Fitted => (T::lit(2.0).powf(two_a) * c_fit).powf(one / (q - one)),
    };
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return Err(Error::Fit(format!("layer constant λ = {lambda} is not positive")));
    }
    let layer_exp = -(q - one) / (two_a - one);
    let mut samples = Vec::new();
    for u in levels {
        let n = u.level.unwrap_or(T::nan());
        let r_n = (lambda * n).powf(layer_exp);
        let mut layer_min: Option<T> = None;
        let mut holds = true;
        let mut count = 0;
        for (v, r) in u.values.iter().zip(u.mesh.rho()) {
            if *r > r_n && *r <= r_n + r_n {
                count += 1;
                layer_min = Some(layer_min.map_or(*v, |m| m.min(*v)));
                let bound = r.powf(predicted_slope) / (lambda + lambda);
                holds &= *v >= bound;
            }
        }
        samples.push(LayerSample { n, r_n, layer_min, nodes: count, bound_holds: layer_min.map(|_| holds) });
    }
    let pts: Vec<(T, T)> = samples
        .iter()
        .filter_map(|s| s.layer_min.map(|m| (s.r_n.ln(), m.ln())))
        .collect();
    let layer_slope = if pts.len() >= 3 {
        let k = T::from_usize_lossy(pts.len());
        let mx = pts.iter().map(|p| p.0).sum::<T>() / k;
        let my = pts.iter().map(|p| p.1).sum::<T>() / k;
        let sxx = pts.iter().fold(T::zero(), |s, p| s + (p.0 - mx) * (p.0 - mx));
        let sxy = pts.iter().fold(T::zero(), |s, p| s + (p.0 - mx) * (p.1 - my));
        (sxx > T::zero()).then(|| (sxy / sxx, pts.len()))
    } else {
        notes.push("fewer than three levels resolve the layer".into());
        None
    };
    Ok(NonexistenceReport {
        in_regime,
        notes,
        c_fit,
        lambda,
        samples,
        layer_slope,
        predicted_slope,
        centers,
        centers_strictly_increasing,
    })
}
