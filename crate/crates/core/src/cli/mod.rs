//! Command-line front end: `orbits`, `resonances`, `residue-map`, `compare`.

mod commands;
mod config;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use commands::{
    cmd_compare, cmd_orbits, cmd_residue_map, cmd_resonances, load_or_build_orbits, Selector,
};
pub use config::{
    parse_complex_pair, parse_grid, parse_region, parse_sigma, resolve, FileConfig, Overrides,
    RunConfig, SigmaRule, CACHE_ENV,
};

use crate::billiard::BilliardError;
use crate::ruelle_map::{GridSpec, RuelleError};
use crate::spectra_io::{SpectraError, DEFAULT_RADIUS};
use crate::zeta::{Representation, ZetaError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("unknown resonance: {0}")]
    UnknownResonance(String),
    #[error(transparent)]
    Billiard(#[from] BilliardError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Ruelle(#[from] RuelleError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
}

#[derive(Debug, Parser)]
#[command(
    name = "pinball",
    version,
    about = "Ruelle resonances of the symmetric 3-disk billiard"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OnOff {
    On,
    Off,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// TOML file with any of the run settings.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Center separation over disk radius.
    #[arg(long = "d-over-r", global = true, value_name = "X")]
    pub d_over_r: Option<f64>,
    #[arg(long, global = true, value_name = "A1|A2")]
    pub rep: Option<Representation>,
    /// Factor −1 per reflection.
    #[arg(long, global = true, value_enum)]
    pub maslov: Option<OnOff>,
    /// Longest symbol word, also the truncation order.
    #[arg(long = "max-len", global = true, value_name = "N")]
    pub max_len: Option<usize>,
    #[arg(long, global = true, value_name = "K")]
    pub band: Option<u32>,
    /// Search rectangle in the k-plane.
    #[arg(long, global = true, value_name = "RE0,RE1,IM0,IM1", value_parser = parse_region, allow_hyphen_values = true)]
    pub region: Option<[f64; 4]>,
    /// Newton seed spacing in k.
    #[arg(long = "seed-spacing", global = true, value_name = "H")]
    pub seed_spacing: Option<f64>,
    #[arg(long, global = true, value_name = "NQxNP", value_parser = parse_grid)]
    pub grid: Option<GridSpec>,
    #[arg(long, global = true, value_name = "auto|VALUE", value_parser = parse_sigma)]
    pub sigma: Option<SigmaRule>,
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "DIR")]
    pub cache: Option<PathBuf>,
    /// Also write a PGM heatmap of the residue map.
    #[arg(long, global = true)]
    pub pgm: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve and cache the prime periodic orbits and print their statistics.
    Orbits,
    /// Find zeros of the cycle expansion in the search region.
    Resonances,
    /// Evaluate the smoothed residue distribution of one resonance.
    ResidueMap {
        /// Row of the resonance CSV, counting from 0.
        #[arg(long, conflicts_with = "k")]
        index: Option<usize>,
        /// Resonance closest to this k.
        #[arg(long, value_name = "RE,IM", value_parser = parse_complex_pair, allow_hyphen_values = true)]
        k: Option<[f64; 2]>,
        /// Resonance CSV to select from; defaults to the output directory's.
        #[arg(long, value_name = "PATH")]
        resonances: Option<PathBuf>,
    },
    /// Match the classical resonances against a quantum resonance CSV.
    Compare {
        #[arg(long, value_name = "PATH")]
        quantum: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: f64,
        #[arg(long, value_name = "PATH")]
        resonances: Option<PathBuf>,
    },
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            d_over_r: self.d_over_r,
            representation: self.rep,
            maslov: self.maslov.map(|m| m == OnOff::On),
            max_len: self.max_len,
            band: self.band,
            region: self.region,
            seed_spacing: self.seed_spacing,
            grid: self.grid,
            sigma: self.sigma,
            out_dir: self.out.clone(),
            cache_dir: self.cache.clone(),
        }
    }
}

/// Resolves the configuration of a parsed command line.
pub fn config_for(cli: &Cli) -> Result<RunConfig, CliError> {
    let file = cli
        .common
        .config
        .as_deref()
        .map(FileConfig::load)
        .transpose()?;
    let env_cache = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    resolve(file.as_ref(), env_cache, &cli.common.overrides())
}

/// Runs one command and returns the summary it prints.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let cfg = config_for(cli)?;
    match &cli.command {
        Command::Orbits => cmd_orbits(&cfg),
        Command::Resonances => cmd_resonances(&cfg),
        Command::ResidueMap {
            index,
            k,
            resonances,
        } => {
            let selector = match (index, k) {
                (Some(i), _) => Selector::Index(*i),
                (None, Some(k)) => Selector::Nearest(*k),
                (None, None) => Selector::Index(0),
            };
            cmd_residue_map(&cfg, selector, resonances.as_deref(), cli.common.pgm)
        }
        Command::Compare {
            quantum,
            radius,
            resonances,
        } => {
            if radius.is_nan() || *radius <= 0.0 {
                return Err(CliError::Config(format!(
                    "--radius must be positive, got {radius}"
                )));
            }
            cmd_compare(&cfg, quantum, *radius, resonances.as_deref())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_parse_after_subcommand() {
        let cli = Cli::try_parse_from([
            "pinball",
            "resonances",
            "--d-over-r",
            "6",
            "--rep",
            "A2",
            "--maslov",
            "off",
            "--region",
            "-1,2,-0.5,0",
            "--grid",
            "40x20",
            "--sigma",
            "auto",
        ])
        .unwrap();
        let o = cli.common.overrides();
        assert_eq!(o.maslov, Some(false));
        assert_eq!(o.region, Some([-1.0, 2.0, -0.5, 0.0]));
        assert_eq!(o.grid, Some(GridSpec { nq: 40, np: 20 }));
    }

    #[test]
    fn residue_map_selectors() {
        let cli =
            Cli::try_parse_from(["pinball", "residue-map", "--k", "10000.983,-0.207"]).unwrap();
        assert!(matches!(
            cli.command,
            Command::ResidueMap {
                k: Some(_),
                index: None,
                ..
            }
        ));
        assert!(
            Cli::try_parse_from(["pinball", "residue-map", "--k", "1,0", "--index", "2"]).is_err()
        );
    }

    #[test]
    fn bad_values_are_rejected_by_the_parser() {
        assert!(Cli::try_parse_from(["pinball", "orbits", "--rep", "B1"]).is_err());
        assert!(Cli::try_parse_from(["pinball", "orbits", "--grid", "4by2"]).is_err());
    }
}
