use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{read_text, write_bytes, SpectraError, SCHEMA_VERSION};

pub const DEFAULT_RADIUS: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub ck: [f64; 2],
    pub qk: [f64; 2],
    pub dist: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchStats {
    pub matched: usize,
    pub classical: usize,
    pub quantum: usize,
    pub max_dist: Option<f64>,
    pub mean_dist: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub schema: u32,
    pub radius: f64,
    pub pairs: Vec<MatchedPair>,
    pub unmatched_classical: Vec<[f64; 2]>,
    pub unmatched_quantum: Vec<[f64; 2]>,
    pub stats: MatchStats,
}

fn canonical(ks: &[Complex64]) -> Vec<Complex64> {
    let mut v = ks.to_vec();
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

/// Greedy one-to-one matching by ascending distance; pairs farther apart than
/// `radius` stay unmatched. Both inputs are sorted first, so the report does
/// not depend on their order.
pub fn match_spectra(
    classical: &[Complex64],
    quantum: &[Complex64],
    radius: f64,
) -> ComparisonReport {
    let (c, q) = (canonical(classical), canonical(quantum));
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, ck) in c.iter().enumerate() {
        for (j, qk) in q.iter().enumerate() {
            let d = (ck - qk).norm();
            if d <= radius {
                candidates.push((d, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut partner_c = vec![None; c.len()];
    let mut used_q = vec![false; q.len()];
    for (d, i, j) in candidates {
        if partner_c[i].is_none() && !used_q[j] {
            partner_c[i] = Some((j, d));
            used_q[j] = true;
        }
    }
    let pair = |k: Complex64| [k.re, k.im];
    let pairs: Vec<MatchedPair> = partner_c
        .iter()
        .enumerate()
        .filter_map(|(i, m)| {
            m.map(|(j, d)| MatchedPair {
                ck: pair(c[i]),
                qk: pair(q[j]),
                dist: d,
            })
        })
        .collect();
    let unmatched_classical = c
        .iter()
        .zip(&partner_c)
        .filter(|(_, m)| m.is_none())
        .map(|(k, _)| pair(*k))
        .collect();
    let unmatched_quantum = q
        .iter()
        .zip(&used_q)
        .filter(|(_, u)| !**u)
        .map(|(k, _)| pair(*k))
        .collect();
    let dists: Vec<f64> = pairs.iter().map(|p| p.dist).collect();
    let stats = MatchStats {
        matched: pairs.len(),
        classical: c.len(),
        quantum: q.len(),
        max_dist: dists.iter().copied().reduce(f64::max),
        mean_dist: (!dists.is_empty()).then(|| dists.iter().sum::<f64>() / dists.len() as f64),
    };
    ComparisonReport {
        schema: SCHEMA_VERSION,
        radius,
        pairs,
        unmatched_classical,
        unmatched_quantum,
        stats,
    }
}

pub fn save_report(path: &Path, report: &ComparisonReport) -> Result<(), SpectraError> {
    let mut json = serde_json::to_string_pretty(report).expect("report serializes");
    json.push('\n');
    write_bytes(path, json.as_bytes())
}

pub fn load_report(path: &Path) -> Result<ComparisonReport, SpectraError> {
    let report: ComparisonReport = serde_json::from_str(&read_text(path)?)
        .map_err(|e| SpectraError::parse(e.line() as u64, e.to_string()))?;
    if report.schema != SCHEMA_VERSION {
        return Err(SpectraError::SchemaMismatch(format!(
            "report schema {}, expected {SCHEMA_VERSION}",
            report.schema
        )));
    }
    Ok(report)
}
