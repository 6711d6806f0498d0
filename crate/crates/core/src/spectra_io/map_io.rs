use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{g12, parse_f64, read_text, write_bytes, SpectraError, SCHEMA_VERSION};
use crate::ruelle_map::{GridSpec, ResidueMap};
use crate::zeta::{convert, Representation, Resonance};

const MAP_HEADER: &str = "q,p,re,im,abs";

/// Metadata written next to a map CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSidecar {
    pub schema: u32,
    pub nq: usize,
    pub np: usize,
    pub sigma: f64,
    /// Largest `abs` in the CSV; the PGM scale maps it to 255.
    pub max_abs: f64,
    pub d_over_r: f64,
    pub representation: Representation,
    pub order: usize,
    pub band: u32,
    pub k: [f64; 2],
    pub lambda: [f64; 2],
    pub residual: f64,
    pub reliable: bool,
}

pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Values as written: real and imaginary parts rounded to `%.12g`.
fn written_values(map: &ResidueMap) -> Vec<(String, String, f64)> {
    map.values
        .iter()
        .map(|v| {
            let (re, im) = (g12(v.re), g12(v.im));
            let rounded = Complex64::new(
                re.parse().unwrap_or(f64::NAN),
                im.parse().unwrap_or(f64::NAN),
            );
            (re, im, rounded.norm())
        })
        .collect()
}

fn sidecar(map: &ResidueMap, max_abs: f64) -> MapSidecar {
    let r = &map.resonance;
    MapSidecar {
        schema: SCHEMA_VERSION,
        nq: map.grid.nq,
        np: map.grid.np,
        sigma: map.sigma,
        max_abs,
        d_over_r: map.d_over_r,
        representation: map.representation,
        order: map.order,
        band: r.band,
        k: [r.k.re, r.k.im],
        lambda: [r.lambda.re, r.lambda.im],
        residual: r.residual,
        reliable: r.reliable,
    }
}

/// Writes the long-format CSV and its JSON sidecar. `abs` is computed from the
/// rounded parts, so saving a loaded map reproduces the files byte for byte.
pub fn save_map(csv_path: &Path, map: &ResidueMap) -> Result<MapSidecar, SpectraError> {
    let written = written_values(map);
    let mut out = String::from(MAP_HEADER);
    out.push('\n');
    for (node, (re, im, abs)) in map.grid.nodes().iter().zip(&written) {
        out.push_str(&format!(
            "{},{},{re},{im},{}\n",
            g12(node.q),
            g12(node.p),
            g12(*abs)
        ));
    }
    write_bytes(csv_path, out.as_bytes())?;
    let max_abs = written.iter().map(|w| w.2).fold(0.0, f64::max);
    let meta = sidecar(map, max_abs);
    let mut json = serde_json::to_string_pretty(&meta).expect("sidecar serializes");
    json.push('\n');
    write_bytes(&sidecar_path(csv_path), json.as_bytes())?;
    Ok(meta)
}

/// Binary 8-bit PGM of `|value|` scaled by the maximum, largest `p` on top.
pub fn save_pgm(path: &Path, map: &ResidueMap) -> Result<(), SpectraError> {
    let written = written_values(map);
    let max_abs = written.iter().map(|w| w.2).fold(0.0, f64::max);
    let GridSpec { nq, np } = map.grid;
    let mut bytes = format!("P5\n{nq} {np}\n255\n").into_bytes();
    for j in (0..np).rev() {
        for i in 0..nq {
            let abs = written[j * nq + i].2;
            let level = if max_abs > 0.0 {
                (255.0 * abs / max_abs).round()
            } else {
                0.0
            };
            bytes.push(level.clamp(0.0, 255.0) as u8);
        }
    }
    write_bytes(path, &bytes)
}

/// Reads a map CSV and its sidecar.
pub fn load_map(csv_path: &Path) -> Result<ResidueMap, SpectraError> {
    let meta_text = read_text(&sidecar_path(csv_path))?;
    let text = read_text(csv_path)?;
    parse_map(&text, &meta_text)
}

/// Parses the contents of a map CSV and of its JSON sidecar.
pub fn parse_map(text: &str, meta_text: &str) -> Result<ResidueMap, SpectraError> {
    let value: serde_json::Value = serde_json::from_str(meta_text)
        .map_err(|e| SpectraError::parse(e.line() as u64, e.to_string()))?;
    if value.get("schema").and_then(serde_json::Value::as_u64) != Some(u64::from(SCHEMA_VERSION)) {
        return Err(SpectraError::SchemaMismatch(format!(
            "map sidecar schema must be {SCHEMA_VERSION}"
        )));
    }
    let meta: MapSidecar =
        serde_json::from_value(value).map_err(|e| SpectraError::parse(1, e.to_string()))?;
    let grid =
        GridSpec::new(meta.nq, meta.np).map_err(|e| SpectraError::parse(1, e.to_string()))?;

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| SpectraError::parse(1, e.to_string()))?;
    if headers.iter().collect::<Vec<_>>().join(",") != MAP_HEADER {
        return Err(SpectraError::parse(
            1,
            format!("expected header {MAP_HEADER:?}"),
        ));
    }
    let mut values = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            SpectraError::parse(e.position().map_or(0, |p| p.line()), e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        values.push(Complex64::new(
            parse_f64(&row[2], line, "re")?,
            parse_f64(&row[3], line, "im")?,
        ));
    }
    if values.len() != grid.len() {
        return Err(SpectraError::parse(
            1,
            format!(
                "expected {} rows for a {}x{} grid, found {}",
                grid.len(),
                grid.nq,
                grid.np,
                values.len()
            ),
        ));
    }
    let lambda = Complex64::new(meta.lambda[0], meta.lambda[1]);
    let (k, energy) = convert(lambda);
    let resonance = Resonance {
        lambda,
        k,
        energy,
        residual: meta.residual,
        order: meta.order,
        band: meta.band,
        reliable: meta.reliable,
    };
    Ok(ResidueMap {
        resonance,
        sigma: meta.sigma,
        grid,
        values,
        d_over_r: meta.d_over_r,
        representation: meta.representation,
        order: meta.order,
    })
}
