use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::CliError;
use crate::ruelle_map::GridSpec;
use crate::zeta::{CycleWeightSpec, KRegion, Representation};

/// Environment variable overriding the cache directory of the config file.
pub const CACHE_ENV: &str = "PINBALL_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaRule {
    /// `σ = 1/Re k` of the selected resonance.
    OneOverReK,
    Fixed(f64),
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub d_over_r: f64,
    pub representation: Representation,
    pub maslov: bool,
    pub max_len: usize,
    pub band: u32,
    pub region: [f64; 4],
    pub seed_spacing: Option<f64>,
    pub grid: GridSpec,
    pub sigma: SigmaRule,
    pub out_dir: PathBuf,
    pub cache_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            d_over_r: 6.0,
            representation: Representation::A2,
            maslov: true,
            max_len: 8,
            band: 0,
            region: [100.0, 110.0, -1.0, 0.0],
            seed_spacing: None,
            grid: GridSpec::default(),
            sigma: SigmaRule::OneOverReK,
            out_dir: PathBuf::from("out"),
            cache_dir: PathBuf::from("cache"),
        }
    }
}

impl RunConfig {
    pub fn weight_spec(&self) -> CycleWeightSpec {
        CycleWeightSpec::new(self.representation, self.maslov, self.band)
    }

    pub fn k_region(&self) -> KRegion {
        let [re0, re1, im0, im1] = self.region;
        KRegion::new(re0, re1, im0, im1).expect("validated region")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.d_over_r.is_finite() && self.d_over_r > 2.0) {
            return bad(format!(
                "d_over_r must be a finite number above 2 (disks may not touch), got {}",
                self.d_over_r
            ));
        }
        if self.max_len == 0 {
            return bad("max_len must be at least 1; try --max-len 8".into());
        }
        let [re0, re1, im0, im1] = self.region;
        if !self.region.iter().all(|v| v.is_finite()) || re0 >= re1 || im0 >= im1 {
            return bad(format!("region must satisfy re0 < re1 and im0 < im1 with finite bounds, got {re0},{re1},{im0},{im1}"));
        }
        if let Some(h) = self.seed_spacing {
            if !(h.is_finite() && h > 0.0) {
                return bad(format!("seed_spacing must be positive, got {h}"));
            }
        }
        if self.grid.nq == 0 || self.grid.np == 0 {
            return bad(format!(
                "grid dimensions must be at least 1, got {}x{}",
                self.grid.nq, self.grid.np
            ));
        }
        if let SigmaRule::Fixed(s) = self.sigma {
            if !(s.is_finite() && s > 0.0) {
                return bad(format!("a fixed sigma must be positive, got {s}"));
            }
        }
        Ok(())
    }
}

/// Flat TOML config file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub d_over_r: Option<f64>,
    pub representation: Option<String>,
    pub maslov: Option<bool>,
    pub max_len: Option<usize>,
    pub band: Option<u32>,
    pub region: Option<[f64; 4]>,
    pub seed_spacing: Option<f64>,
    pub grid: Option<[usize; 2]>,
    pub sigma: Option<toml::Value>,
    pub out_dir: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Command-line overrides, already split into typed values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub d_over_r: Option<f64>,
    pub representation: Option<Representation>,
    pub maslov: Option<bool>,
    pub max_len: Option<usize>,
    pub band: Option<u32>,
    pub region: Option<[f64; 4]>,
    pub seed_spacing: Option<f64>,
    pub grid: Option<GridSpec>,
    pub sigma: Option<SigmaRule>,
    pub out_dir: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
}

pub fn parse_region(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected re0,re1,im0,im1, got {s:?}"));
    }
    let mut out = [0.0; 4];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| format!("not a number: {part:?}"))?;
    }
    Ok(out)
}

pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NQxNP, got {s:?}"))?;
    let nq = a
        .trim()
        .parse()
        .map_err(|_| format!("not a count: {a:?}"))?;
    let np = b
        .trim()
        .parse()
        .map_err(|_| format!("not a count: {b:?}"))?;
    GridSpec::new(nq, np).map_err(|e| e.to_string())
}

pub fn parse_sigma(s: &str) -> Result<SigmaRule, String> {
    match s.trim() {
        "auto" => Ok(SigmaRule::OneOverReK),
        v => v
            .parse()
            .map(SigmaRule::Fixed)
            .map_err(|_| format!("expected auto or a number, got {s:?}")),
    }
}

pub fn parse_complex_pair(s: &str) -> Result<[f64; 2], String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected RE,IM, got {s:?}"))?;
    let re = a
        .trim()
        .parse()
        .map_err(|_| format!("not a number: {a:?}"))?;
    let im = b
        .trim()
        .parse()
        .map_err(|_| format!("not a number: {b:?}"))?;
    Ok([re, im])
}

fn file_sigma(value: &toml::Value) -> Result<SigmaRule, CliError> {
    match value {
        toml::Value::String(s) => {
            parse_sigma(s).map_err(|e| CliError::Config(format!("sigma: {e}")))
        }
        toml::Value::Float(f) => Ok(SigmaRule::Fixed(*f)),
        toml::Value::Integer(i) => Ok(SigmaRule::Fixed(*i as f64)),
        other => Err(CliError::Config(format!(
            "sigma: expected \"auto\" or a number, got {other}"
        ))),
    }
}

/// Layers defaults, then the file, then the cache environment variable, then
/// the flags, and validates the result.
pub fn resolve(
    file: Option<&FileConfig>,
    env_cache: Option<PathBuf>,
    flags: &Overrides,
) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(f) = file {
        if let Some(v) = f.d_over_r {
            cfg.d_over_r = v;
        }
        if let Some(v) = &f.representation {
            cfg.representation = v
                .parse()
                .map_err(|e| CliError::Config(format!("representation: {e}")))?;
        }
        if let Some(v) = f.maslov {
            cfg.maslov = v;
        }
        if let Some(v) = f.max_len {
            cfg.max_len = v;
        }
        if let Some(v) = f.band {
            cfg.band = v;
        }
        if let Some(v) = f.region {
            cfg.region = v;
        }
        if f.seed_spacing.is_some() {
            cfg.seed_spacing = f.seed_spacing;
        }
        if let Some([nq, np]) = f.grid {
            cfg.grid = GridSpec { nq, np };
        }
        if let Some(v) = &f.sigma {
            cfg.sigma = file_sigma(v)?;
        }
        if let Some(v) = &f.out_dir {
            cfg.out_dir = v.clone();
        }
        if let Some(v) = &f.cache_dir {
            cfg.cache_dir = v.clone();
        }
    }
    if let Some(dir) = env_cache.filter(|d| !d.as_os_str().is_empty()) {
        cfg.cache_dir = dir;
    }
    let o = flags.clone();
    cfg.d_over_r = o.d_over_r.unwrap_or(cfg.d_over_r);
    cfg.representation = o.representation.unwrap_or(cfg.representation);
    cfg.maslov = o.maslov.unwrap_or(cfg.maslov);
    cfg.max_len = o.max_len.unwrap_or(cfg.max_len);
    cfg.band = o.band.unwrap_or(cfg.band);
    cfg.region = o.region.unwrap_or(cfg.region);
    cfg.seed_spacing = o.seed_spacing.or(cfg.seed_spacing);
    cfg.grid = o.grid.unwrap_or(cfg.grid);
    cfg.sigma = o.sigma.unwrap_or(cfg.sigma);
    cfg.out_dir = o.out_dir.unwrap_or(cfg.out_dir);
    cfg.cache_dir = o.cache_dir.unwrap_or(cfg.cache_dir);
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = resolve(None, None, &Overrides::default()).unwrap();
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn precedence_flags_env_file() {
        let file = FileConfig::parse(
            "d_over_r = 3.0\nmax_len = 10\ncache_dir = \"from-file\"\nsigma = \"auto\"\ngrid = [40, 20]\n",
        )
        .unwrap();
        let flags = Overrides {
            max_len: Some(6),
            ..Default::default()
        };
        let cfg = resolve(Some(&file), Some(PathBuf::from("from-env")), &flags).unwrap();
        assert_eq!(cfg.d_over_r, 3.0);
        assert_eq!(cfg.max_len, 6);
        assert_eq!(cfg.cache_dir, PathBuf::from("from-env"));
        assert_eq!(cfg.grid, GridSpec { nq: 40, np: 20 });
        let flags = Overrides {
            cache_dir: Some(PathBuf::from("from-flag")),
            ..Default::default()
        };
        let cfg = resolve(Some(&file), Some(PathBuf::from("from-env")), &flags).unwrap();
        assert_eq!(cfg.cache_dir, PathBuf::from("from-flag"));
    }

    #[test]
    fn validation_messages() {
        let flags = Overrides {
            max_len: Some(0),
            ..Default::default()
        };
        let err = resolve(None, None, &flags).unwrap_err().to_string();
        assert!(err.contains("max_len"), "{err}");
        let flags = Overrides {
            region: Some([5.0, 1.0, -1.0, 0.0]),
            ..Default::default()
        };
        assert!(resolve(None, None, &flags).is_err());
        let flags = Overrides {
            sigma: Some(SigmaRule::Fixed(-1.0)),
            ..Default::default()
        };
        assert!(resolve(None, None, &flags).is_err());
        let flags = Overrides {
            d_over_r: Some(2.0),
            ..Default::default()
        };
        assert!(resolve(None, None, &flags).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(FileConfig::parse("radius = 3\n").is_err());
        assert!(FileConfig::parse("sigma = true\n").is_ok());
        let file = FileConfig::parse("sigma = true\n").unwrap();
        assert!(resolve(Some(&file), None, &Overrides::default()).is_err());
    }

    #[test]
    fn flag_value_parsers() {
        assert_eq!(parse_region("1, 2,-3,0").unwrap(), [1.0, 2.0, -3.0, 0.0]);
        assert!(parse_region("1,2,3").is_err());
        assert_eq!(
            parse_grid("400x200").unwrap(),
            GridSpec { nq: 400, np: 200 }
        );
        assert!(parse_grid("0x3").is_err());
        assert_eq!(parse_sigma("auto").unwrap(), SigmaRule::OneOverReK);
        assert_eq!(parse_sigma("0.5").unwrap(), SigmaRule::Fixed(0.5));
        assert_eq!(
            parse_complex_pair("10000.983,-0.207").unwrap(),
            [10000.983, -0.207]
        );
    }
}
