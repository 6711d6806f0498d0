#![no_main]

use libfuzzer_sys::fuzz_target;
use pinball::spectra_io::parse_quantum_csv;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(records) = parse_quantum_csv(text) {
            for r in records {
                assert!(r.k.re.is_finite() && r.k.im.is_finite() && r.k.im <= 0.0);
            }
        }
    }
});
