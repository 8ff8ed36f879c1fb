#![no_main]

use std::sync::{Arc, OnceLock};

use greenseq::algebra::BoundQuiver;
use greenseq::field::PrimeField;
use greenseq::io::{parse_module, ModuleJson};
use greenseq::named;
use libfuzzer_sys::fuzz_target;

fn algebra() -> &'static Arc<BoundQuiver> {
    static A: OnceLock<Arc<BoundQuiver>> = OnceLock::new();
    A.get_or_init(|| Arc::new(named::a5_example().algebra().unwrap()))
}

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let field = PrimeField::new(3).unwrap();
        if let Ok(m) = parse_module(text, algebra(), field) {
            let back = ModuleJson::from_module(&m).to_module(algebra(), field).unwrap();
            assert_eq!(back.dims(), m.dims());
        }
    }
});
