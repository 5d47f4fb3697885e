#![no_main]

use libfuzzer_sys::fuzz_target;
use treefit::DistanceMatrix;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(d) = DistanceMatrix::from_csv_str(text) {
        // Anything accepted must survive a write/read cycle unchanged.
        let back = DistanceMatrix::from_csv_str(&d.to_csv_string()).expect("re-parse");
        assert_eq!(d, back);
    }
});
