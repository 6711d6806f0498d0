#![no_main]

use libfuzzer_sys::fuzz_target;
use pinball::billiard::Word;
use pinball::cli::{parse_complex_pair, parse_grid, parse_region, parse_sigma};

fuzz_target!(|text: &str| {
    let _ = parse_region(text);
    let _ = parse_complex_pair(text);
    let _ = parse_sigma(text);
    if let Ok(grid) = parse_grid(text) {
        assert!(grid.nq > 0 && grid.np > 0);
    }
    if let Ok(word) = Word::try_from(text.to_owned()) {
        assert_eq!(word.to_string(), text);
    }
});
