//! Persistence of orbit, resonance and map artifacts, ingestion of quantum
//! resonance lists and classical-versus-quantum matching reports.

mod compare;
mod format;
mod map_io;
mod orbit_db;
mod quantum;
mod resonance_csv;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use compare::{
    load_report, match_spectra, save_report, ComparisonReport, MatchStats, MatchedPair,
    DEFAULT_RADIUS,
};
pub use format::{format_g, g12};
pub use map_io::{load_map, parse_map, save_map, save_pgm, sidecar_path, MapSidecar};
pub use orbit_db::{
    load_orbit_db, orbit_db_file_name, parse_orbit_db, save_orbit_db, write_orbit_db, OrbitDbHeader,
};
pub use quantum::{load_quantum_csv, parse_quantum_csv, QuantumRecord};
pub use resonance_csv::{
    load_resonances, parse_resonances, save_resonances, write_resonances, RESONANCE_HEADER,
};

/// Version written into every artifact that carries a header.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SpectraError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("file not found: {}", .0.display())]
    MissingFile(PathBuf),
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("line {line}: {message}")]
    ParseError { line: u64, message: String },
}

impl SpectraError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        if source.kind() == std::io::ErrorKind::NotFound {
            SpectraError::MissingFile(path.to_owned())
        } else {
            SpectraError::Io {
                path: path.to_owned(),
                source,
            }
        }
    }

    pub(crate) fn parse(line: u64, message: impl Into<String>) -> Self {
        SpectraError::ParseError {
            line,
            message: message.into(),
        }
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String, SpectraError> {
    std::fs::read_to_string(path).map_err(|e| SpectraError::io(path, e))
}

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), SpectraError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| SpectraError::io(parent, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| SpectraError::io(path, e))
}

pub(crate) fn parse_f64(field: &str, line: u64, column: &str) -> Result<f64, SpectraError> {
    field
        .trim()
        .parse()
        .map_err(|_| SpectraError::parse(line, format!("{column}: not a number: {field:?}")))
}
