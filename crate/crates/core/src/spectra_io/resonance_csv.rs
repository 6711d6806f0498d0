use std::path::Path;

use num_complex::Complex64;

use super::{g12, parse_f64, read_text, write_bytes, SpectraError};
use crate::zeta::{convert, Resonance};

pub const RESONANCE_HEADER: &str = "re_k,im_k,re_lambda,im_lambda,residual,order,band,reliable";

/// CSV text with all floats in `%.12g`.
pub fn write_resonances(resonances: &[Resonance]) -> String {
    let mut out = String::from(RESONANCE_HEADER);
    out.push('\n');
    for r in resonances {
        let row = [
            g12(r.k.re),
            g12(r.k.im),
            g12(r.lambda.re),
            g12(r.lambda.im),
            g12(r.residual),
            r.order.to_string(),
            r.band.to_string(),
            u8::from(r.reliable).to_string(),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn save_resonances(path: &Path, resonances: &[Resonance]) -> Result<(), SpectraError> {
    write_bytes(path, write_resonances(resonances).as_bytes())
}

/// Parses a resonance CSV. `k` and `E` are recomputed from the stored `λ`; a
/// stored `k` that disagrees with `iλ` is rejected.
pub fn parse_resonances(text: &str) -> Result<Vec<Resonance>, SpectraError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| SpectraError::parse(1, e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>().join(",") != RESONANCE_HEADER {
        return Err(SpectraError::parse(
            1,
            format!("expected header {RESONANCE_HEADER:?}"),
        ));
    }
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            SpectraError::parse(e.position().map_or(0, |p| p.line()), e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        let num = |i: usize| parse_f64(&row[i], line, &headers[i]);
        let int = |i: usize| {
            row[i].trim().parse::<u64>().map_err(|_| {
                SpectraError::parse(line, format!("{}: not a count: {:?}", &headers[i], &row[i]))
            })
        };
        let lambda = Complex64::new(num(2)?, num(3)?);
        let (k, energy) = convert(lambda);
        let stored_k = Complex64::new(num(0)?, num(1)?);
        if stored_k != k {
            return Err(SpectraError::parse(line, "k does not equal i·λ"));
        }
        let reliable = match row[7].trim() {
            "0" => false,
            "1" => true,
            other => {
                return Err(SpectraError::parse(
                    line,
                    format!("reliable: expected 0 or 1, got {other:?}"),
                ))
            }
        };
        let band =
            u32::try_from(int(6)?).map_err(|_| SpectraError::parse(line, "band out of range"))?;
        out.push(Resonance {
            lambda,
            k,
            energy,
            residual: num(4)?,
            order: int(5)? as usize,
            band,
            reliable,
        });
    }
    Ok(out)
}

pub fn load_resonances(path: &Path) -> Result<Vec<Resonance>, SpectraError> {
    parse_resonances(&read_text(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<Resonance> {
        vec![
            Resonance::from_lambda(
                Complex64::new(-0.198414708389, -10000.991896328),
                2.4e-11,
                8,
                0,
                -0.73,
            ),
            Resonance::from_lambda(
                Complex64::new(-0.9, -std::f64::consts::PI),
                1.0 / 3.0,
                10,
                1,
                -0.73,
            ),
        ]
    }

    #[test]
    fn header_and_flags() {
        let text = write_resonances(&sample());
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(RESONANCE_HEADER));
        assert_eq!(
            lines.next(),
            Some("10000.9918963,-0.198414708389,-0.198414708389,-10000.9918963,2.4e-11,8,0,1")
        );
        assert!(lines.next().unwrap().ends_with(",10,1,0"));
    }

    #[test]
    fn save_load_save_is_byte_identical() {
        let first = write_resonances(&sample());
        let loaded = parse_resonances(&first).unwrap();
        assert_eq!(write_resonances(&loaded), first);
        for (l, s) in loaded.iter().zip(sample()) {
            assert_eq!(l.lambda.re, g12(s.lambda.re).parse::<f64>().unwrap());
            assert_eq!(l.k, Complex64::i() * l.lambda);
            assert_eq!(l.reliable, s.reliable);
        }
    }

    #[test]
    fn rejects_inconsistent_k() {
        let text = format!("{RESONANCE_HEADER}\n1,2,3,4,0,8,0,1\n");
        assert!(matches!(
            parse_resonances(&text),
            Err(SpectraError::ParseError { line: 2, .. })
        ));
    }

    #[test]
    fn empty_list_round_trips() {
        let text = write_resonances(&[]);
        assert!(parse_resonances(&text).unwrap().is_empty());
    }
}
