#![no_main]

use libfuzzer_sys::fuzz_target;
use pcurv::formats::SeriesFile;

fuzz_target!(|data: &[u8]| {
    let Ok(file) = serde_json::from_slice::<SeriesFile>(data) else {
        return;
    };
    if let Ok(series) = file.to_series() {
        let rewritten = SeriesFile::from_series(&series);
        let back = rewritten.to_series().expect("rewritten file must load");
        assert_eq!(back.precision(), series.precision());
        assert_eq!(back.coeffs(), series.coeffs());
    }
});
