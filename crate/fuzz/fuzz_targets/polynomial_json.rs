#![no_main]

use libfuzzer_sys::fuzz_target;
use pcurv::guess::PolynomialJson;

fuzz_target!(|data: &[u8]| {
    let Ok(json) = serde_json::from_slice::<PolynomialJson>(data) else {
        return;
    };
    if let Ok(poly) = json.to_polynomial() {
        // canonicalization is idempotent across a JSON round trip
        let back = poly.to_json().to_polynomial().expect("canonical form loads");
        assert_eq!(back, poly);
    }
});
