//! Run configuration: command-line flags, an optional TOML config file
//! supplying the same fields, and defaults. Flags win over the file.

use std::fs;
use std::path::PathBuf;

use clap::Parser;
use serde::Deserialize;

use crate::CliError;

/// Command-line interface. Every option may instead come from a TOML
/// file passed via `--config`; explicit flags take precedence.
#[derive(Parser, Debug, Default)]
#[command(
    name = "brink",
    version,
    about = "Boundary-proximity diagnostic for logistic regression"
)]
pub struct Cli {
    /// TOML file supplying any of the run options below
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// CSV input with a header row
    #[arg(long, value_name = "FILE")]
    pub input_path: Option<PathBuf>,

    /// Name of the 0/1 response column
    #[arg(long, value_name = "NAME")]
    pub response_column: Option<String>,

    /// Covariate column names, comma-separated (exactly one is supported)
    #[arg(long, value_name = "NAMES", value_delimiter = ',', num_args = 1..)]
    pub covariate_columns: Option<Vec<String>>,

    /// Mean-center covariates before fitting [default: true]
    #[arg(long, value_name = "BOOL")]
    pub center: Option<bool>,

    /// Confidence level for the chi-square threshold [default: 0.99]
    #[arg(long, value_name = "P")]
    pub level: Option<f64>,

    /// Monte-Carlo replicates; 0 skips the sampling study [default: 10000]
    #[arg(long, value_name = "N")]
    pub reps: Option<usize>,

    /// Seed for the counter-based sampling streams [default: 0]
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,

    /// Density grid points per axis [default: 101]
    #[arg(long, value_name = "N")]
    pub grid_resolution: Option<usize>,

    /// Density grid half-width in marginal sigma units [default: 4]
    #[arg(long, value_name = "W")]
    pub grid_half_width: Option<f64>,

    /// Directory for report.json and the plot-data files [default: .]
    #[arg(long, value_name = "DIR")]
    pub output_dir: Option<PathBuf>,
}

/// TOML mirror of the command-line options.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    input_path: Option<PathBuf>,
    response_column: Option<String>,
    covariate_columns: Option<Vec<String>>,
    center: Option<bool>,
    level: Option<f64>,
    reps: Option<usize>,
    seed: Option<u64>,
    grid_resolution: Option<usize>,
    grid_half_width: Option<f64>,
    output_dir: Option<PathBuf>,
}

/// Fully resolved run options.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input_path: PathBuf,
    pub response_column: String,
    pub covariate_columns: Vec<String>,
    pub center: bool,
    pub level: f64,
    pub reps: usize,
    pub seed: u64,
    pub grid_resolution: usize,
    pub grid_half_width: f64,
    pub output_dir: PathBuf,
}

impl RunConfig {
    /// Merges flags over the optional config file, fills defaults, and
    /// validates ranges.
    pub fn resolve(cli: Cli) -> Result<Self, CliError> {
        let file = match &cli.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::ReadInput {
                    path: path.clone(),
                    source,
                })?;
                toml::from_str::<FileConfig>(&text).map_err(|e| CliError::ConfigSyntax {
                    path: path.clone(),
                    message: e.to_string(),
                })?
            }
            None => FileConfig::default(),
        };

        let config = RunConfig {
            input_path: cli
                .input_path
                .or(file.input_path)
                .ok_or(CliError::MissingOption { name: "input-path" })?,
            response_column: cli.response_column.or(file.response_column).ok_or(
                CliError::MissingOption {
                    name: "response-column",
                },
            )?,
            covariate_columns: cli.covariate_columns.or(file.covariate_columns).ok_or(
                CliError::MissingOption {
                    name: "covariate-columns",
                },
            )?,
            center: cli.center.or(file.center).unwrap_or(true),
            level: cli.level.or(file.level).unwrap_or(0.99),
            reps: cli.reps.or(file.reps).unwrap_or(10_000),
            seed: cli.seed.or(file.seed).unwrap_or(0),
            grid_resolution: cli.grid_resolution.or(file.grid_resolution).unwrap_or(101),
            grid_half_width: cli.grid_half_width.or(file.grid_half_width).unwrap_or(4.0),
            output_dir: cli
                .output_dir
                .or(file.output_dir)
                .unwrap_or_else(|| PathBuf::from(".")),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(CliError::LevelOutOfRange { got: self.level });
        }
        if self.covariate_columns.len() != 1 {
            return Err(CliError::CovariateCount {
                got: self.covariate_columns.len(),
            });
        }
        if self.grid_resolution < 2 {
            return Err(CliError::GridResolution {
                got: self.grid_resolution,
            });
        }
        if !(self.grid_half_width.is_finite() && self.grid_half_width > 0.0) {
            return Err(CliError::GridHalfWidth {
                got: self.grid_half_width,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use std::io::Write;

    use super::*;

    fn cli_with_required() -> Cli {
        Cli {
            input_path: Some(PathBuf::from("data.csv")),
            response_column: Some("y".into()),
            covariate_columns: Some(vec!["x".into()]),
            ..Cli::default()
        }
    }

    #[test]
    fn defaults_fill_unset_options() {
        let c = RunConfig::resolve(cli_with_required()).unwrap();
        assert!(c.center);
        assert_eq!(c.level, 0.99);
        assert_eq!(c.reps, 10_000);
        assert_eq!(c.seed, 0);
        assert_eq!(c.grid_resolution, 101);
        assert_eq!(c.grid_half_width, 4.0);
        assert_eq!(c.output_dir, PathBuf::from("."));
    }

    #[test]
    fn flags_override_config_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(
            f,
            "input_path = \"file.csv\"\nresponse_column = \"y\"\n\
             covariate_columns = [\"x\"]\nlevel = 0.5\nseed = 7"
        )
        .unwrap();
        let cli = Cli {
            config: Some(f.path().to_path_buf()),
            level: Some(0.9),
            ..Cli::default()
        };
        let c = RunConfig::resolve(cli).unwrap();
        assert_eq!(c.level, 0.9);
        assert_eq!(c.seed, 7);
        assert_eq!(c.input_path, PathBuf::from("file.csv"));
    }

    #[test]
    fn missing_input_path_is_reported() {
        let cli = Cli {
            response_column: Some("y".into()),
            covariate_columns: Some(vec!["x".into()]),
            ..Cli::default()
        };
        match RunConfig::resolve(cli) {
            Err(CliError::MissingOption { name: "input-path" }) => {}
            other => panic!("expected missing input-path, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_level_is_rejected() {
        for level in [0.0, 1.0, -0.3, f64::NAN] {
            let cli = Cli {
                level: Some(level),
                ..cli_with_required()
            };
            match RunConfig::resolve(cli) {
                Err(CliError::LevelOutOfRange { .. }) => {}
                other => panic!("level {level} should be rejected, got {other:?}"),
            }
        }
    }

    #[test]
    fn two_covariates_are_rejected() {
        let cli = Cli {
            covariate_columns: Some(vec!["a".into(), "b".into()]),
            ..cli_with_required()
        };
        match RunConfig::resolve(cli) {
            Err(CliError::CovariateCount { got: 2 }) => {}
            other => panic!("expected covariate-count error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_config_key_is_a_syntax_error() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "input_path = \"a.csv\"\nrepz = 3").unwrap();
        let cli = Cli {
            config: Some(f.path().to_path_buf()),
            ..cli_with_required()
        };
        match RunConfig::resolve(cli) {
            Err(CliError::ConfigSyntax { .. }) => {}
            other => panic!("expected config-syntax error, got {other:?}"),
        }
    }
}
