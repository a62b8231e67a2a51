//! JSON run configuration.

use anyhow::{Context, Result};
use fracbvp::problem::{DEFAULT_LATTICE_SAMPLES, DEFAULT_T_HORIZON};
use fracbvp::{CertificateOptions, Grid, ProblemSpec, SolverConfig};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSettings {
    pub s_max: f64,
    pub n: usize,
    #[serde(default = "default_grading")]
    pub grading: f64,
}

fn default_grading() -> f64 {
    2.0
}

impl Default for GridSettings {
    fn default() -> Self {
        Self {
            s_max: 20.0,
            n: 512,
            grading: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSettings {
    pub omega: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            omega: 1.0,
            tol: 1e-10,
            max_iter: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CertificateSettings {
    /// Pins `J` instead of computing it on the grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_override: Option<f64>,
    pub t_horizon: f64,
    pub lattice_samples: usize,
}

impl Default for CertificateSettings {
    fn default() -> Self {
        Self {
            j_override: None,
            t_horizon: DEFAULT_T_HORIZON,
            lattice_samples: DEFAULT_LATTICE_SAMPLES,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Outputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    #[serde(default)]
    pub grid: GridSettings,
    #[serde(default)]
    pub solver: SolverSettings,
    /// Radius of the weighted ball; when absent the smallest certifiable radius is searched for.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default)]
    pub certificate: CertificateSettings,
    #[serde(default)]
    pub outputs: Outputs,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).context("malformed configuration")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    /// Range checks for every section. H1 is deliberately not checked here
    /// so that `check` can report it as a hypothesis failure.
    pub fn validate(&self) -> Result<()> {
        self.problem.validate().context("invalid problem")?;
        self.grid().context("invalid grid")?;
        self.solver_config()?.validate().context("invalid solver settings")?;
        if let Some(d) = self.delta {
            anyhow::ensure!(d.is_finite() && d > 0.0, "delta must be positive, got {d}");
        }
        let c = &self.certificate;
        anyhow::ensure!(c.t_horizon > 0.0, "certificate.t_horizon must be positive");
        anyhow::ensure!(c.lattice_samples >= 100, "certificate.lattice_samples must be at least 100");
        if let Some(j) = c.j_override {
            anyhow::ensure!(j.is_finite() && j >= 0.0, "certificate.j_override must be nonnegative");
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Arc<Grid>> {
        let g = &self.grid;
        Ok(Arc::new(Grid::graded(g.s_max, g.n, g.grading)?))
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let mut cfg = SolverConfig::new(self.grid()?);
        cfg.omega = self.solver.omega;
        cfg.tol = self.solver.tol;
        cfg.max_iter = self.solver.max_iter;
        Ok(cfg)
    }

    pub fn certificate_options(&self) -> CertificateOptions {
        CertificateOptions {
            j_override: self.certificate.j_override,
            t_horizon: self.certificate.t_horizon,
            samples: self.certificate.lattice_samples,
            ..CertificateOptions::default()
        }
    }
}
