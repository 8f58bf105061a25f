use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;
use crate::report::Report;

/// Which artifacts to write.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outputs {
    pub csv: bool,
    pub json: bool,
}

/// Writes `profile.csv`, `fits.csv` and `report.json` under `dir/<scenario name>/`.
pub fn emit_tables(report: &Report, dir: &Path, outputs: Outputs) -> Result<Vec<PathBuf>, CliError> {
    let base = dir.join(&report.scenario.name);
    fs::create_dir_all(&base).map_err(|e| CliError::Io(base.display().to_string(), e))?;
    let mut written = Vec::new();
    if outputs.csv {
        let profile = base.join("profile.csv");
        write_profile(report, &profile)?;
        written.push(profile);
        let fits = base.join("fits.csv");
        write_fits(report, &fits)?;
        written.push(fits);
    }
    if outputs.json {
        let path = base.join("report.json");
        let text = serde_json::to_string_pretty(report)?;
        fs::write(&path, text).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        written.push(path);
    }
    Ok(written)
}

fn write_profile(report: &Report, path: &Path) -> Result<(), CliError> {
    let p = &report.profile;
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["x".to_string(), "rho".to_string()];
    header.extend(p.columns.iter().map(|(name, _)| name.clone()));
    w.write_record(&header)?;
    for i in 0..p.x.len() {
        let mut row = vec![p.x[i].to_string(), p.rho[i].to_string()];
        row.extend(p.columns.iter().map(|(_, v)| v[i].to_string()));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| CliError::Io(path.display().to_string(), e))?;
    Ok(())
}

fn write_fits(report: &Report, path: &Path) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["name", "beta", "intercept", "r_squared", "rho_lo", "rho_hi", "nodes", "target_lo", "target_hi", "pass"])?;
    for f in &report.fits {
        w.write_record([
            f.name.clone(),
            f.beta.to_string(),
            f.intercept.to_string(),
            f.r_squared.to_string(),
            f.rho_lo.to_string(),
            f.rho_hi.to_string(),
            f.nodes.to_string(),
            f.target_lo.to_string(),
            f.target_hi.to_string(),
            f.pass.to_string(),
        ])?;
    }
    w.flush().map_err(|e| CliError::Io(path.display().to_string(), e))?;
    Ok(())
}
