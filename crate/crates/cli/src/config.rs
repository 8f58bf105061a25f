//! Scenario files. Every field except `name`, `pipeline`, `alpha` and `mesh` has a default.

use std::path::Path;

use regfrac_core::geometry::{self, FractionalOrder};
use regfrac_core::operator::OperatorKind;
use regfrac_core::solver::{Nonlinearity, ShiftPolicy, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    AssembleCheck,
    Phi,
    Solve,
    Blowup,
    Rates,
    Ko,
    GreenCheck,
    BarrierCheck,
}

impl Pipeline {
    pub fn name(self) -> &'static str {
        match self {
            Pipeline::AssembleCheck => "assemble-check",
            Pipeline::Phi => "phi",
            Pipeline::Solve => "solve",
            Pipeline::Blowup => "blowup",
            Pipeline::Rates => "rates",
            Pipeline::Ko => "ko",
            Pipeline::GreenCheck => "green-check",
            Pipeline::BarrierCheck => "barrier-check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DomainSpec {
    Interval { a: f64, b: f64 },
    Ball { radius: f64, dim: usize },
}

impl Default for DomainSpec {
    fn default() -> Self {
        DomainSpec::Interval { a: -1.0, b: 1.0 }
    }
}

impl DomainSpec {
    pub fn build(&self) -> regfrac_core::Result<regfrac_core::Domain> {
        match *self {
            DomainSpec::Interval { a, b } => geometry::Domain::interval(a, b),
            DomainSpec::Ball { radius, dim } => geometry::Domain::ball(radius, dim),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSpec {
    /// Interior node count.
    pub m: usize,
    /// Grading exponent; 1 is uniform.
    #[serde(default = "default_gamma")]
    pub gamma: f64,
}

fn default_gamma() -> f64 {
    2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindSpec {
    #[default]
    Regional,
    Full,
}

impl From<KindSpec> for OperatorKind {
    fn from(k: KindSpec) -> Self {
        match k {
            KindSpec::Regional => OperatorKind::Regional,
            KindSpec::Full => OperatorKind::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    #[default]
    Zero,
    /// c·|s|^{p−1}s, or c·(|s|^{p−1}s + |s|^{q−1}s) when q is given.
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NonlinearitySpec {
    pub family: Family,
    pub c: f64,
    pub p: f64,
    pub q: Option<f64>,
}

impl Default for NonlinearitySpec {
    fn default() -> Self {
        Self { family: Family::Zero, c: 1.0, p: 1.0, q: None }
    }
}

impl NonlinearitySpec {
    pub fn build(&self) -> regfrac_core::Result<Nonlinearity<f64>> {
        match (self.family, self.q) {
            (Family::Zero, _) => Ok(Nonlinearity::zero()),
            (Family::Power, None) => Nonlinearity::power(self.c, self.p),
            (Family::Power, Some(q)) => Nonlinearity::power_pair(self.c, self.p, q),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemSpec {
    /// Constant source g.
    pub g: f64,
    /// Boundary levels n; `solve` runs one problem per entry.
    pub levels: Vec<f64>,
}

impl Default for ProblemSpec {
    fn default() -> Self {
        Self { g: 0.0, levels: vec![1.0] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicySpec {
    #[default]
    Uniform,
    Adaptive,
}

/// Mirrors the solver configuration; defaults match the library defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSpec {
    pub tol_fixed_point: f64,
    pub max_iter: usize,
    pub b2_policy: PolicySpec,
    pub n0: f64,
    pub n_factor: f64,
    pub levels: usize,
    pub tol_limit: f64,
    pub interior_window: f64,
    pub divergence_run: usize,
    pub saturation_growth: f64,
}

impl Default for SolverSpec {
    fn default() -> Self {
        let d = SolverConfig::<f64>::default();
        Self {
            tol_fixed_point: d.tol_fixed_point,
            max_iter: d.max_iter,
            b2_policy: PolicySpec::Uniform,
            n0: d.n0,
            n_factor: d.n_factor,
            levels: d.levels,
            tol_limit: d.tol_limit,
            interior_window: d.interior_window,
            divergence_run: d.divergence_run,
            saturation_growth: d.saturation_growth,
        }
    }
}

impl SolverSpec {
    pub fn build(&self) -> SolverConfig<f64> {
        SolverConfig {
            tol_fixed_point: self.tol_fixed_point,
            max_iter: self.max_iter,
            b2_policy: match self.b2_policy {
                PolicySpec::Uniform => ShiftPolicy::Uniform,
                PolicySpec::Adaptive => ShiftPolicy::Adaptive,
            },
            n0: self.n0,
            n_factor: self.n_factor,
            levels: self.levels,
            tol_limit: self.tol_limit,
            interior_window: self.interior_window,
            divergence_run: self.divergence_run,
            saturation_growth: self.saturation_growth,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSpec {
    /// Fit window [ρ_lo, ρ_hi]; defaults to [5·h_min, 0.1·diameter].
    pub fit_window: Option<[f64; 2]>,
    /// Slack on the predicted rate interval; defaults by operator kind.
    pub inflation: Option<f64>,
    /// Tolerance on the finite-level decay exponent 2α − 1.
    pub decay_tolerance: f64,
    /// Tolerance on the φ exponent −2α.
    pub phi_tolerance: f64,
    /// Barrier exponent τ ∈ (−1, 0).
    pub tau: f64,
    /// Barrier layer width; defaults to a quarter of the inradius.
    pub t0: Option<f64>,
    /// Largest λ tried by the super-solution search is 2^lambda_cap.
    pub lambda_cap: u32,
    /// barrier-check: also compute the blow-up limit and compare it with λV.
    pub compare_limit: bool,
    /// Allowed relative change of refined quantities (barrier and Green bounds).
    pub refinement_tolerance: f64,
    /// ko: exponents and orders classified in addition to the configured f.
    pub ko_exponents: Vec<f64>,
    pub ko_orders: Vec<f64>,
    /// blowup: tolerance on the layer exponent of the nonexistence diagnostics.
    pub layer_tolerance: f64,
    /// Largest accepted ratio of the top two centre values for a converged limit.
    pub center_ratio: f64,
    /// assemble-check, full kind: oracle probes and tolerance.
    pub oracle_probes: Vec<f64>,
    pub oracle_tolerance: f64,
}

impl Default for AnalysisSpec {
    fn default() -> Self {
        Self {
            fit_window: None,
            inflation: None,
            decay_tolerance: 0.1,
            phi_tolerance: 0.05,
            tau: -0.5,
            t0: None,
            lambda_cap: 10,
            compare_limit: false,
            refinement_tolerance: 0.2,
            ko_exponents: Vec::new(),
            ko_orders: Vec::new(),
            layer_tolerance: 0.15,
            center_ratio: 1.05,
            oracle_probes: Vec::new(),
            oracle_tolerance: 5e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: Option<String>,
    pub csv: bool,
    pub json: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: None, csv: true, json: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub pipeline: Pipeline,
    #[serde(default)]
    pub domain: DomainSpec,
    pub alpha: f64,
    pub mesh: MeshSpec,
    #[serde(default)]
    pub kind: KindSpec,
    #[serde(default)]
    pub nonlinearity: NonlinearitySpec,
    #[serde(default)]
    pub problem: ProblemSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub analysis: AnalysisSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ScenarioConfig {
    /// Parses TOML, or JSON when the path ends in `.json`.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        let cfg = if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)?
        } else {
            Self::from_toml(&text)?
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Parse(e.to_string()))
    }

    /// Checks every module precondition the pipeline relies on.
    pub fn validate(&self) -> Result<(), CliError> {
        let invalid = |msg: String| Err(CliError::Validation(format!("{}: {msg}", self.name)));
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return invalid("name must be nonempty ASCII letters, digits, '-' or '_'".into());
        }
        let core = |r: regfrac_core::Result<()>| r.map_err(|e| CliError::Validation(format!("{}: {e}", self.name)));
        let domain = self.domain.build().map_err(|e| CliError::Validation(format!("{}: {e}", self.name)))?;
        let alpha = FractionalOrder::new(self.alpha).map_err(|e| CliError::Validation(format!("{}: {e}", self.name)))?;
        if self.mesh.m < 8 || !(self.mesh.gamma >= 1.0) {
            return invalid(format!("mesh needs M ≥ 8 and γ ≥ 1, got M = {}, γ = {}", self.mesh.m, self.mesh.gamma));
        }
        let f = self.nonlinearity.build().map_err(|e| CliError::Validation(format!("{}: {e}", self.name)))?;
        core(self.solver.build().validate())?;
        if let Some([lo, hi]) = self.analysis.fit_window {
            if !(lo > 0.0 && hi > lo) {
                return invalid(format!("fit window [{lo}, {hi}] is empty"));
            }
        }
        if !self.problem.g.is_finite() || self.problem.levels.iter().any(|n| !n.is_finite()) {
            return invalid("source and levels must be finite".into());
        }
        let regional = self.kind == KindSpec::Regional;
        let interval = matches!(domain, geometry::Domain::Interval { .. });
        match self.pipeline {
            Pipeline::Solve if self.problem.levels.is_empty() => return invalid("solve needs at least one level".into()),
            Pipeline::Blowup | Pipeline::Rates => {
                if f.is_zero() {
                    return invalid("blow-up needs a nonzero nonlinearity".into());
                }
                if regional && !alpha.requires_half_plus() {
                    return invalid(format!("regional blow-up needs α > 1/2, got {}", self.alpha));
                }
                if self.pipeline == Pipeline::Rates && f.exponents().is_none_or(|(p, _)| p <= 1.0) {
                    return invalid("rates need a power nonlinearity with p > 1".into());
                }
            }
            Pipeline::Ko => {
                if f.exponents().is_none() && self.analysis.ko_exponents.is_empty() {
                    return invalid("ko needs a power nonlinearity or ko_exponents".into());
                }
                for a in &self.analysis.ko_orders {
                    core(FractionalOrder::new(*a).map(|_| ()))?;
                }
            }
            Pipeline::GreenCheck => {
                if !regional || !interval || !alpha.requires_half_plus() {
                    return invalid("green-check needs the regional kind on an interval with α > 1/2".into());
                }
            }
            Pipeline::BarrierCheck => {
                if !regional {
                    return invalid("barrier-check needs the regional kind".into());
                }
                if !(self.analysis.tau > -1.0 && self.analysis.tau < 0.0) {
                    return invalid(format!("τ = {} outside (−1, 0)", self.analysis.tau));
                }
                if self.analysis.compare_limit && (f.is_zero() || !alpha.requires_half_plus()) {
                    return invalid("compare_limit needs a nonzero f and α > 1/2".into());
                }
            }
            Pipeline::AssembleCheck if !self.analysis.oracle_probes.is_empty() && !interval => {
                return invalid("oracle probes are evaluated on intervals".into());
            }
            _ => {}
        }
        Ok(())
    }
}
