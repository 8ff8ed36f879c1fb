#![no_main]

use greenseq::rational::{format_rational, parse_point, parse_rational};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(x) = parse_rational(text) {
            assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
        }
        let _ = parse_point(text);
    }
});
