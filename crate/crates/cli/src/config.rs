use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use nhosc_core::hamiltonian::{omega_u_zero, omega_v_zero, omega_variational};
use nhosc_core::perturbation::DEFAULT_ORDER;
use nhosc_core::position_space::{default_half_width, DEFAULT_GRID_POINTS};
use nhosc_core::{Error, TransformParams};
use serde::Deserialize;

use crate::error::{invalid, CliError, CliResult};

pub const DEFAULT_DIM: usize = 64;

/// Relative `--output` paths are resolved against this directory when set.
pub const OUTPUT_DIR_VAR: &str = "NHOSC_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// U = 0 at omega1 (lower triangular)
    U0,
    /// V = 0 at omega2 (upper triangular)
    V0,
    /// stationary point of h_d
    Variational,
    /// user-supplied --omega
    Custom,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::U0 => "u0",
            Branch::V0 => "v0",
            Branch::Variational => "variational",
            Branch::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl OutputArgs {
    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn path(&self) -> Option<PathBuf> {
        self.output.as_deref().map(resolve_output)
    }
}

fn resolve_output(path: &Path) -> PathBuf {
    match env::var_os(OUTPUT_DIR_VAR) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Oscillator level
    #[arg(long)]
    pub n: Option<usize>,
    /// Perturbation / series order K
    #[arg(long)]
    pub order: Option<usize>,
    /// Fock truncation N (must be at least n + 2K + 3)
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, value_enum)]
    pub branch: Option<Branch>,
    /// Frequency for the custom branch
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub grid_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub grid_max: Option<f64>,
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// key = value file; flags given on the command line take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    lambda: Option<f64>,
    beta: Option<f64>,
    n: Option<usize>,
    order: Option<usize>,
    dim: Option<usize>,
    branch: Option<Branch>,
    omega: Option<f64>,
    grid_min: Option<f64>,
    grid_max: Option<f64>,
    grid_points: Option<usize>,
}

fn load_file(path: &Path) -> CliResult<FileConfig> {
    let text = fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
        path: path.to_path_buf(),
        source,
    })?;
    toml::from_str(&text).map_err(|source| CliError::ConfigParse {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: TransformParams,
    pub n: usize,
    pub order: usize,
    pub dim: usize,
    pub branch: Branch,
    pub omega: f64,
    pub grid: Grid,
}

impl RunConfig {
    /// Flags, then config file, then defaults.
    pub fn resolve(args: &RunArgs) -> CliResult<Self> {
        let file = match &args.config {
            Some(path) => load_file(path)?,
            None => FileConfig::default(),
        };
        let lambda = args.lambda.or(file.lambda).unwrap_or(0.0);
        let beta = args.beta.or(file.beta).unwrap_or(0.0);
        let params = TransformParams::new(lambda, beta)?;

        let n = args.n.or(file.n).unwrap_or(0);
        let order = args.order.or(file.order).unwrap_or(DEFAULT_ORDER);
        if order == 0 {
            return Err(Error::ZeroOrder.into());
        }
        let dim = args.dim.or(file.dim).unwrap_or(DEFAULT_DIM);
        let needed = n + 2 * order + 3;
        if dim < needed {
            return Err(invalid(format!(
                "dim {dim} too small: require N >= n + 2K + 3 = {needed}"
            )));
        }

        let omega_arg = args.omega.or(file.omega);
        let branch = match (args.branch.or(file.branch), omega_arg) {
            (Some(b), _) => b,
            (None, Some(_)) => Branch::Custom,
            (None, None) => Branch::U0,
        };
        let omega = match (branch, omega_arg) {
            (Branch::Custom, Some(w)) => w,
            (Branch::Custom, None) => return Err(invalid("custom branch requires --omega")),
            (_, Some(_)) => {
                return Err(invalid(format!(
                    "--omega only applies to the custom branch (branch is {})",
                    branch.as_str()
                )))
            }
            (Branch::U0, None) => omega_u_zero(&params),
            (Branch::V0, None) => omega_v_zero(&params),
            (Branch::Variational, None) => omega_variational(&params),
        };
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::NonPositiveOmega(omega).into());
        }

        let half = default_half_width(omega);
        let grid = Grid {
            min: args.grid_min.or(file.grid_min).unwrap_or(-half),
            max: args.grid_max.or(file.grid_max).unwrap_or(half),
            points: args.grid_points.or(file.grid_points).unwrap_or(DEFAULT_GRID_POINTS),
        };
        if grid.points < 2 || !(grid.min < grid.max) || !grid.min.is_finite() || !grid.max.is_finite() {
            return Err(Error::InvalidGrid.into());
        }

        Ok(Self {
            params,
            n,
            order,
            dim,
            branch,
            omega,
            grid,
        })
    }
}
