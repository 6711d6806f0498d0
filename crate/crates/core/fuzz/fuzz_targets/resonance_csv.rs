#![no_main]

use libfuzzer_sys::fuzz_target;
use pinball::spectra_io::{parse_resonances, write_resonances};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(resonances) = parse_resonances(text) {
        let once = write_resonances(&resonances);
        let twice = write_resonances(&parse_resonances(&once).unwrap());
        assert_eq!(once, twice);
    }
});
