#![no_main]

use libfuzzer_sys::fuzz_target;
use pinball::spectra_io::parse_map;

// Input is the map CSV and its JSON sidecar separated by a NUL byte.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let (csv, sidecar) = text.split_once('\0').unwrap_or((text, "{}"));
    if let Ok(map) = parse_map(csv, sidecar) {
        assert_eq!(map.values.len(), map.grid.len());
    }
});
