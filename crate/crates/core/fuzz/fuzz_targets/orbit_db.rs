#![no_main]

use libfuzzer_sys::fuzz_target;
use pinball::spectra_io::{parse_orbit_db, write_orbit_db};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((header, records)) = parse_orbit_db(text, None) {
        let again = write_orbit_db(header.d_over_r, header.max_len, &records);
        let (_, reparsed) =
            parse_orbit_db(&again, Some((header.d_over_r, header.max_len))).unwrap();
        assert_eq!(reparsed, records);
    }
});
