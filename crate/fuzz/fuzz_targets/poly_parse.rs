#![no_main]

use libfuzzer_sys::fuzz_target;
use pcurv::formats::{parse_poly, parse_ratfun, parse_rational, poly_to_string};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(poly) = parse_poly(text) {
        let rendered = poly_to_string(&poly);
        let back = parse_poly(&rendered).expect("rendered polynomial must re-parse");
        assert_eq!(back, poly, "round trip through {rendered}");
    }
    let _ = parse_ratfun(text);
    let _ = parse_rational(text);
});
