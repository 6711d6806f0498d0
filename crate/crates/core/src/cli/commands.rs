use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use super::{CliError, RunConfig, SigmaRule};
use crate::billiard::{hyperbolicity_stats, solve_all, DiskSystem, OrbitRecord};
use crate::ruelle_map::{default_sigma, residue_map};
use crate::spectra_io::{
    g12, load_orbit_db, load_quantum_csv, load_resonances, match_spectra, orbit_db_file_name,
    save_map, save_orbit_db, save_pgm, save_report, save_resonances,
};
use crate::zeta::{
    band0_validity, build_expansion, find_resonances, refine_zero, Resonance, SearchOptions,
};

/// How `residue-map` picks its resonance from the CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Selector {
    Index(usize),
    /// The listed resonance nearest to this `k`, within `1e-6·max(1, |k|)`.
    Nearest([f64; 2]),
}

/// Orbit records for the configured system, from the cache when present.
/// Returns the records, the cache path and whether the cache was used.
pub fn load_or_build_orbits(
    cfg: &RunConfig,
) -> Result<(Vec<OrbitRecord>, PathBuf, bool), CliError> {
    let path = cfg
        .cache_dir
        .join(orbit_db_file_name(cfg.d_over_r, cfg.max_len));
    if path.exists() {
        let (_, records) = load_orbit_db(&path, Some((cfg.d_over_r, cfg.max_len)))?;
        return Ok((records, path, true));
    }
    let system = DiskSystem::new(cfg.d_over_r)?;
    let records: Vec<OrbitRecord> = solve_all(&system, cfg.max_len)?
        .iter()
        .map(OrbitRecord::from)
        .collect();
    save_orbit_db(&path, cfg.d_over_r, cfg.max_len, &records)?;
    Ok((records, path, false))
}

pub fn cmd_orbits(cfg: &RunConfig) -> Result<String, CliError> {
    let (records, path, cached) = load_or_build_orbits(cfg)?;
    let stats = hyperbolicity_stats(&records)?;
    let mut out = String::new();
    let source = if cached { "cached" } else { "written" };
    writeln!(out, "orbit db {source}: {}", path.display()).unwrap();
    writeln!(out, "d/r = {}, N = {}", g12(cfg.d_over_r), cfg.max_len).unwrap();
    writeln!(out, "primes: {}", stats.prime_count).unwrap();
    writeln!(out, "beta_min: {}", g12(stats.beta_min)).unwrap();
    writeln!(out, "beta_max: {}", g12(stats.beta_max)).unwrap();
    writeln!(
        out,
        "h_top: {} ({} closed orbits below L = {})",
        g12(stats.h_top),
        stats.orbit_count,
        g12(stats.count_length)
    )
    .unwrap();
    writeln!(out, "pinching spread: {}%", g12(100.0 * stats.ratio_spread)).unwrap();
    writeln!(
        out,
        "band-0 validity: Re lambda >= {}",
        g12(band0_validity(&stats))
    )
    .unwrap();
    Ok(out)
}

fn resonances_path(cfg: &RunConfig, explicit: Option<&Path>) -> PathBuf {
    explicit.map_or_else(|| cfg.out_dir.join("resonances.csv"), Path::to_owned)
}

pub fn cmd_resonances(cfg: &RunConfig) -> Result<String, CliError> {
    let (records, _, _) = load_or_build_orbits(cfg)?;
    let threshold = band0_validity(&hyperbolicity_stats(&records)?);
    let expansion = build_expansion(&records, cfg.weight_spec(), cfg.max_len)?;
    let options = SearchOptions {
        seed_spacing: cfg.seed_spacing,
        reliability_threshold: threshold,
        ..Default::default()
    };
    let zeros = find_resonances(&expansion, &cfg.k_region(), &options);
    let path = resonances_path(cfg, None);
    save_resonances(&path, &zeros)?;
    let reliable = zeros.iter().filter(|z| z.reliable).count();
    Ok(format!(
        "{} resonances ({reliable} band-0 reliable) written to {}\n",
        zeros.len(),
        path.display()
    ))
}

fn select(list: &[Resonance], selector: Selector) -> Result<Resonance, CliError> {
    match selector {
        Selector::Index(i) => list.get(i).copied().ok_or_else(|| {
            CliError::UnknownResonance(format!("index {i}, the list has {} entries", list.len()))
        }),
        Selector::Nearest([re, im]) => {
            let k = Complex64::new(re, im);
            let tol = 1e-6 * k.norm().max(1.0);
            list.iter()
                .filter(|r| (r.k - k).norm() <= tol)
                .min_by(|a, b| (a.k - k).norm().total_cmp(&(b.k - k).norm()))
                .copied()
                .ok_or_else(|| {
                    CliError::UnknownResonance(format!(
                        "no listed resonance within {tol:e} of k = {re}{im:+}i"
                    ))
                })
        }
    }
}

pub fn cmd_residue_map(
    cfg: &RunConfig,
    selector: Selector,
    resonance_csv: Option<&Path>,
    pgm: bool,
) -> Result<String, CliError> {
    let listed = load_resonances(&resonances_path(cfg, resonance_csv))?;
    let chosen = select(&listed, selector)?;
    let (records, _, _) = load_or_build_orbits(cfg)?;
    let expansion = build_expansion(&records, cfg.weight_spec(), cfg.max_len)?;
    // The CSV holds 12 significant digits; polish back to full precision.
    let resonance = refine_zero(&expansion, chosen.k, f64::NEG_INFINITY)
        .map(|r| Resonance {
            reliable: chosen.reliable,
            ..r
        })
        .unwrap_or(chosen);
    let sigma = match cfg.sigma {
        SigmaRule::OneOverReK => default_sigma(&resonance)?,
        SigmaRule::Fixed(s) => s,
    };
    let map = residue_map(&expansion, &resonance, cfg.grid, sigma, cfg.d_over_r)?;
    let csv = cfg.out_dir.join("residue_map.csv");
    let meta = save_map(&csv, &map)?;
    let mut out = format!(
        "map of k = ({}, {}) on {}x{} nodes, sigma = {}, max |t| = {}\nwritten to {}\n",
        g12(resonance.k.re),
        g12(resonance.k.im),
        cfg.grid.nq,
        cfg.grid.np,
        g12(sigma),
        g12(meta.max_abs),
        csv.display()
    );
    if pgm {
        let path = cfg.out_dir.join("residue_map.pgm");
        save_pgm(&path, &map)?;
        writeln!(out, "heatmap written to {}", path.display()).unwrap();
    }
    Ok(out)
}

pub fn cmd_compare(
    cfg: &RunConfig,
    quantum: &Path,
    radius: f64,
    resonance_csv: Option<&Path>,
) -> Result<String, CliError> {
    let classical: Vec<Complex64> = load_resonances(&resonances_path(cfg, resonance_csv))?
        .iter()
        .map(|r| r.k)
        .collect();
    let quantum: Vec<Complex64> = load_quantum_csv(quantum)?.iter().map(|q| q.k).collect();
    let report = match_spectra(&classical, &quantum, radius);
    let path = cfg.out_dir.join("comparison.json");
    save_report(&path, &report)?;
    let s = &report.stats;
    let max = s.max_dist.map_or_else(|| "-".to_owned(), g12);
    Ok(format!(
        "matched {} of {} classical and {} quantum resonances (max distance {max})\nwritten to {}\n",
        s.matched,
        s.classical,
        s.quantum,
        path.display()
    ))
}
