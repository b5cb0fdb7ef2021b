#![no_main]

use libfuzzer_sys::fuzz_target;
use pcurv::seqcore::FactorialRatioSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = text.parse::<FactorialRatioSpec>() {
        let rendered = spec.to_string();
        let back: FactorialRatioSpec = rendered.parse().expect("display must re-parse");
        assert_eq!(back, spec, "round trip through {rendered}");
    }
});
