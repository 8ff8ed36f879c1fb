#![no_main]

use greenseq::io::{parse_dims_sequence, parse_sequence};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(ks) = parse_sequence(text, 9) {
            assert!(ks.iter().all(|&k| k < 9));
        }
        if let Ok(ds) = parse_dims_sequence(text, 3) {
            assert!(ds.iter().all(|d| d.len() == 3));
        }
    }
});
