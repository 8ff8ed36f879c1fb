#![no_main]

use greenseq::io::parse_problem;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(p) = parse_problem(text) {
            let _ = p.qp.jacobian_relations();
        }
    }
});
