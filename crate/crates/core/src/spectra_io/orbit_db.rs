use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{g12, read_text, write_bytes, SpectraError, SCHEMA_VERSION};
use crate::billiard::OrbitRecord;

/// First line of an orbit database file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitDbHeader {
    pub schema: u32,
    pub d_over_r: f64,
    pub max_len: usize,
    pub count: usize,
}

/// Cache file name for a geometry and word length, e.g. `orbits_dR6_N12.jsonl`.
pub fn orbit_db_file_name(d_over_r: f64, max_len: usize) -> String {
    format!("orbits_dR{}_N{max_len}.jsonl", g12(d_over_r))
}

/// JSON-lines text: the header, then one record per line. Floats are written
/// in shortest round-trip form, so loading restores them bit for bit.
pub fn write_orbit_db(d_over_r: f64, max_len: usize, records: &[OrbitRecord]) -> String {
    let header = OrbitDbHeader {
        schema: SCHEMA_VERSION,
        d_over_r,
        max_len,
        count: records.len(),
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn save_orbit_db(
    path: &Path,
    d_over_r: f64,
    max_len: usize,
    records: &[OrbitRecord],
) -> Result<(), SpectraError> {
    write_bytes(path, write_orbit_db(d_over_r, max_len, records).as_bytes())
}

/// Parses an orbit database. With `expected = Some((d_over_r, max_len))` the
/// header must describe exactly that system.
pub fn parse_orbit_db(
    text: &str,
    expected: Option<(f64, usize)>,
) -> Result<(OrbitDbHeader, Vec<OrbitRecord>), SpectraError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i as u64 + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines
        .next()
        .ok_or_else(|| SpectraError::parse(1, "missing header"))?;
    let value: serde_json::Value =
        serde_json::from_str(first).map_err(|e| SpectraError::parse(1, format!("header: {e}")))?;
    match value.get("schema").and_then(serde_json::Value::as_u64) {
        Some(v) if v == u64::from(SCHEMA_VERSION) => {}
        Some(v) => {
            return Err(SpectraError::SchemaMismatch(format!(
                "orbit db schema {v}, expected {SCHEMA_VERSION}"
            )))
        }
        None => {
            return Err(SpectraError::SchemaMismatch(
                "orbit db header has no schema field".into(),
            ))
        }
    }
    let header: OrbitDbHeader = serde_json::from_value(value)
        .map_err(|e| SpectraError::parse(1, format!("header: {e}")))?;
    if let Some((d_over_r, max_len)) = expected {
        if header.d_over_r.to_bits() != d_over_r.to_bits() || header.max_len != max_len {
            return Err(SpectraError::SchemaMismatch(format!(
                "orbit db is for d/r = {}, N = {}; requested d/r = {}, N = {max_len}",
                header.d_over_r, header.max_len, d_over_r
            )));
        }
    }
    let records = lines
        .map(|(n, l)| {
            serde_json::from_str::<OrbitRecord>(l)
                .map_err(|e| SpectraError::parse(n, e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if records.len() != header.count {
        return Err(SpectraError::parse(
            1,
            format!(
                "header announces {} records, found {}",
                header.count,
                records.len()
            ),
        ));
    }
    Ok((header, records))
}

pub fn load_orbit_db(
    path: &Path,
    expected: Option<(f64, usize)>,
) -> Result<(OrbitDbHeader, Vec<OrbitRecord>), SpectraError> {
    parse_orbit_db(&read_text(path)?, expected)
}
