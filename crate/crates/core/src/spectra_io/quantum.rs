use std::path::{Path, PathBuf};

use num_complex::Complex64;

use super::{parse_f64, read_text, SpectraError};

/// An externally computed quantum resonance.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumRecord {
    pub k: Complex64,
    pub husimi_path: Option<PathBuf>,
    pub label: Option<String>,
}

/// Parses `re_k,im_k[,husimi_path,label]` rows. Line numbers in errors count
/// the header as line 1.
pub fn parse_quantum_csv(text: &str) -> Result<Vec<QuantumRecord>, SpectraError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| SpectraError::parse(1, e.to_string()))?
        .clone();
    let names: Vec<&str> = headers.iter().map(str::trim).collect();
    let allowed = ["re_k", "im_k", "husimi_path", "label"];
    if names.len() < 2 || names.len() > 4 || names.iter().zip(allowed).any(|(n, a)| *n != a) {
        return Err(SpectraError::parse(
            1,
            "expected header re_k,im_k[,husimi_path,label]",
        ));
    }
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            SpectraError::parse(e.position().map_or(0, |p| p.line()), e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() < 2 || row.len() > names.len() {
            return Err(SpectraError::parse(
                line,
                format!("expected 2 to {} fields, found {}", names.len(), row.len()),
            ));
        }
        let k = Complex64::new(
            parse_f64(&row[0], line, "re_k")?,
            parse_f64(&row[1], line, "im_k")?,
        );
        if !k.re.is_finite() || !k.im.is_finite() {
            return Err(SpectraError::parse(line, "k must be finite"));
        }
        if k.im > 0.0 {
            return Err(SpectraError::parse(
                line,
                "scattering resonances need im_k <= 0",
            ));
        }
        let optional = |i: usize| {
            row.get(i)
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_owned)
        };
        out.push(QuantumRecord {
            k,
            husimi_path: optional(2).map(PathBuf::from),
            label: optional(3),
        });
    }
    Ok(out)
}

pub fn load_quantum_csv(path: &Path) -> Result<Vec<QuantumRecord>, SpectraError> {
    parse_quantum_csv(&read_text(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row() {
        let recs = parse_quantum_csv("re_k,im_k\n10.5,-0.2\n").unwrap();
        assert_eq!(
            recs,
            vec![QuantumRecord {
                k: Complex64::new(10.5, -0.2),
                husimi_path: None,
                label: None
            }]
        );
    }

    #[test]
    fn empty_data_section() {
        assert!(parse_quantum_csv("re_k,im_k\n").unwrap().is_empty());
    }

    #[test]
    fn bad_number_reports_line_two() {
        match parse_quantum_csv("re_k,im_k\nabc,0\n") {
            Err(SpectraError::ParseError { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn optional_columns() {
        let recs =
            parse_quantum_csv("re_k,im_k,husimi_path,label\n1,-0.5,maps/h1.csv,first\n2,-0.1,,\n")
                .unwrap();
        assert_eq!(
            recs[0].husimi_path.as_deref(),
            Some(Path::new("maps/h1.csv"))
        );
        assert_eq!(recs[0].label.as_deref(), Some("first"));
        assert_eq!(recs[1].husimi_path, None);
    }

    #[test]
    fn rejects_growing_states_and_non_finite() {
        assert!(parse_quantum_csv("re_k,im_k\n1,0.5\n").is_err());
        assert!(parse_quantum_csv("re_k,im_k\nnan,-1\n").is_err());
        assert!(parse_quantum_csv("k,im\n1,-1\n").is_err());
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            load_quantum_csv(Path::new("/nonexistent/q.csv")),
            Err(SpectraError::MissingFile(_))
        ));
    }
}
