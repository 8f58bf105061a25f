use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;

/// A scalar outcome with the tolerance and fit window it was judged against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericResult {
    pub name: String,
    pub value: f64,
    pub tolerance: Option<f64>,
    pub window: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub n: f64,
    pub iterations: usize,
    pub residual: f64,
    pub center: f64,
    pub interior_change: Option<f64>,
    pub boundary_growth: Option<f64>,
}

/// A fitted exponent β in u ≈ C·ρ^β with the interval it was compared with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub name: String,
    pub beta: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub rho_lo: f64,
    pub rho_hi: f64,
    pub nodes: usize,
    pub target_lo: f64,
    pub target_hi: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KoRow {
    pub p: f64,
    pub alpha: f64,
    pub ko: String,
    pub tail_condition: String,
    pub ko_tails: [f64; 2],
    pub tail_condition_tails: [f64; 2],
    pub tail_exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Nodal columns written to the profile table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Profile {
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: ScenarioConfig,
    pub results: Vec<NumericResult>,
    pub levels: Vec<LevelRow>,
    pub fits: Vec<FitRow>,
    pub ko: Vec<KoRow>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub timing_ms: u64,
    pub version: String,
    #[serde(skip)]
    pub profile: Profile,
}

impl Report {
    pub fn new(scenario: ScenarioConfig) -> Self {
        Self {
            scenario,
            results: Vec::new(),
            levels: Vec::new(),
            fits: Vec::new(),
            ko: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            timing_ms: 0,
            version: scheme_version(),
            profile: Profile::default(),
        }
    }

    pub fn result(&mut self, name: &str, value: f64, tolerance: Option<f64>, window: Option<[f64; 2]>) {
        self.results.push(NumericResult { name: name.to_string(), value, tolerance, window });
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.to_string(), pass, detail: detail.into() });
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.results.iter().find(|r| r.name == name).map(|r| r.value)
    }

    pub fn find_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// FNV-1a hash of the library version and the discretization identifier.
pub fn scheme_version() -> String {
    use std::hash::Hasher;
    let mut h = fnv::FnvHasher::default();
    h.write(regfrac_core::operator::SCHEME.as_bytes());
    h.write(b"|");
    h.write(env!("CARGO_PKG_VERSION").as_bytes());
    format!("{:016x}", h.finish())
}
