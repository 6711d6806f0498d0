use std::fs;
use std::path::PathBuf;

use pinball::billiard::Word;
use pinball::cli::{
    parse_complex_pair, parse_grid, parse_region, parse_sigma, resolve, FileConfig, Overrides,
};
use pinball::spectra_io::{
    parse_map, parse_orbit_db, parse_quantum_csv, parse_resonances, write_resonances,
};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fuzz/corpus")
        .join(target);
    let mut out: Vec<(PathBuf, String)> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds in {}", dir.display());
    out
}

#[test]
fn quantum_seeds_parse() {
    for (path, text) in seeds("quantum_csv") {
        assert!(
            !parse_quantum_csv(&text).unwrap().is_empty(),
            "{}",
            path.display()
        );
    }
}

#[test]
fn orbit_db_seeds_parse() {
    for (path, text) in seeds("orbit_db") {
        let (header, records) = parse_orbit_db(&text, None).unwrap();
        assert_eq!(header.count, records.len(), "{}", path.display());
    }
}

#[test]
fn resonance_seeds_reserialize_identically() {
    for (path, text) in seeds("resonance_csv") {
        assert_eq!(
            write_resonances(&parse_resonances(&text).unwrap()),
            text,
            "{}",
            path.display()
        );
    }
}

#[test]
fn residue_map_seeds_parse() {
    for (path, text) in seeds("residue_map") {
        let (csv, sidecar) = text.split_once('\0').unwrap();
        let map = parse_map(csv, sidecar).unwrap();
        assert_eq!(map.values.len(), map.grid.len(), "{}", path.display());
    }
}

#[test]
fn oversized_map_header_is_rejected_without_allocating() {
    let sidecar = r#"{"schema":1,"nq":18446744073709551615,"np":2,"sigma":1.0,"max_abs":0.0,"d_over_r":6.0,
        "representation":"A2","order":1,"band":0,"k":[1.0,0.0],"lambda":[0.0,-1.0],"residual":0.0,"reliable":true}"#;
    assert!(parse_map("q,p,re,im,abs\n", sidecar).is_err());
}

#[test]
fn config_seeds_resolve_to_valid_runs() {
    for (path, text) in seeds("run_config") {
        let file = FileConfig::parse(&text).unwrap();
        let cfg = resolve(Some(&file), None, &Overrides::default()).unwrap();
        cfg.validate()
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn cli_value_seeds_parse() {
    for (path, text) in seeds("cli_values") {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        match name.as_str() {
            "seed_region" => assert!(parse_region(&text).is_ok()),
            "seed_grid" => assert!(parse_grid(&text).is_ok()),
            "seed_sigma" => assert!(parse_sigma(&text).is_ok()),
            "seed_k" => assert!(parse_complex_pair(&text).is_ok()),
            "seed_word" => assert_eq!(Word::try_from(text.clone()).unwrap().to_string(), text),
            other => panic!("unexpected seed {other}"),
        }
    }
}
