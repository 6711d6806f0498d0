#![no_main]

use libfuzzer_sys::fuzz_target;
use pinball::cli::{resolve, FileConfig, Overrides};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = FileConfig::parse(text) {
        if let Ok(cfg) = resolve(Some(&file), None, &Overrides::default()) {
            let _ = cfg.validate();
        }
    }
});
