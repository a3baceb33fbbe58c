use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use dicke_core::dicke::{DickeParams, DEFAULT_N_ATOMS, DEFAULT_SINGULARITY_WINDOW};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Everything a sweep needs. Missing fields fall back to the defaults
/// below; a config file and command-line flags are merged in that order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub omega: f64,
    pub omega0: f64,
    pub n_atoms: u64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub points: usize,
    /// Grid points with `|λ − λc|` below this are dropped.
    pub exclusion: f64,
    pub phi: Vec<f64>,
    pub format: Format,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            omega: 1.0,
            omega0: 1.0,
            n_atoms: DEFAULT_N_ATOMS,
            lambda_min: 0.0,
            lambda_max: 1.0,
            points: 101,
            exclusion: 1e-3,
            phi: vec![0.0],
            format: Format::Csv,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct SweepArgs {
    /// JSON or TOML file with sweep settings
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Radiation frequency
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Atomic transition frequency
    #[arg(long, allow_negative_numbers = true)]
    pub omega0: Option<f64>,
    /// Single coupling instead of a grid
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda_max: Option<f64>,
    /// Number of grid points (before exclusion)
    #[arg(long)]
    pub points: Option<usize>,
    /// Half-width of the excluded region around the critical coupling
    #[arg(long)]
    pub exclusion: Option<f64>,
    #[arg(long)]
    pub n_atoms: Option<u64>,
    /// Local-oscillator phases, comma separated
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub phi: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

pub fn load_file(path: &Path) -> Result<SweepConfig, ConfigError> {
    let text = fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    let is_toml = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("toml"));
    if is_toml {
        toml::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    } else {
        serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }
}

/// A validated sweep: model parameters and the λ grid.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub config: SweepConfig,
    pub grid: Vec<f64>,
}

impl Sweep {
    pub fn params(&self, lam: f64) -> DickeParams {
        DickeParams {
            omega: self.config.omega,
            omega0: self.config.omega0,
            lam,
            n_atoms: self.config.n_atoms,
            window: DEFAULT_SINGULARITY_WINDOW,
        }
    }
}

impl SweepArgs {
    pub fn resolve(&self) -> Result<Sweep, ConfigError> {
        let mut c = match &self.config {
            Some(path) => load_file(path)?,
            None => SweepConfig::default(),
        };
        if let Some(v) = self.omega {
            c.omega = v;
        }
        if let Some(v) = self.omega0 {
            c.omega0 = v;
        }
        if let Some(v) = self.n_atoms {
            c.n_atoms = v;
        }
        if let Some(v) = self.lambda_min {
            c.lambda_min = v;
        }
        if let Some(v) = self.lambda_max {
            c.lambda_max = v;
        }
        if let Some(v) = self.points {
            c.points = v;
        }
        if let Some(v) = self.exclusion {
            c.exclusion = v;
        }
        if let Some(v) = &self.phi {
            c.phi = v.clone();
        }
        if let Some(v) = self.format {
            c.format = v;
        }
        let single = self.lambda;
        if let Some(l) = single {
            c.lambda_min = l;
            c.lambda_max = l;
            c.points = 1;
        }
        validate(&c, single.is_some())?;
        let probe = DickeParams {
            omega: c.omega,
            omega0: c.omega0,
            lam: 0.0,
            n_atoms: c.n_atoms,
            window: DEFAULT_SINGULARITY_WINDOW,
        };
        probe.validate().map_err(|e| ConfigError(e.to_string()))?;
        let lc = probe.lambda_c();
        let half_width = c.exclusion.max(DEFAULT_SINGULARITY_WINDOW);
        let grid: Vec<f64> = if single.is_some() {
            vec![c.lambda_min]
        } else {
            let n = c.points;
            (0..n)
                .map(|i| c.lambda_min + (c.lambda_max - c.lambda_min) * i as f64 / (n - 1) as f64)
                .filter(|l| (l - lc).abs() > half_width)
                .collect()
        };
        if grid.is_empty() {
            return err("the λ grid is empty after excluding the critical region");
        }
        Ok(Sweep { config: c, grid })
    }
}

fn validate(c: &SweepConfig, single: bool) -> Result<(), ConfigError> {
    for (name, v) in [
        ("omega", c.omega),
        ("omega0", c.omega0),
        ("lambda_min", c.lambda_min),
        ("lambda_max", c.lambda_max),
        ("exclusion", c.exclusion),
    ] {
        if !v.is_finite() {
            return err(format!("{name} must be finite"));
        }
    }
    if c.lambda_min < 0.0 {
        return err(format!("lambda_min must be >= 0, got {}", c.lambda_min));
    }
    if !single {
        if c.points < 2 {
            return err(format!("points must be >= 2, got {}", c.points));
        }
        if c.lambda_max <= c.lambda_min {
            return err("lambda_max must exceed lambda_min");
        }
    }
    if c.exclusion < 0.0 {
        return err("exclusion must be >= 0");
    }
    if c.phi.is_empty() || c.phi.iter().any(|p| !p.is_finite()) {
        return err("phi must be a non-empty list of finite angles");
    }
    Ok(())
}
