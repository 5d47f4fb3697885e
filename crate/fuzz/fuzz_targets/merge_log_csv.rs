#![no_main]

use libfuzzer_sys::fuzz_target;
use treefit::MergeLog;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(log) = MergeLog::from_csv_str(text) {
        let back = MergeLog::from_csv_str(&log.to_csv_string()).expect("re-parse");
        assert_eq!(log, back);
        let _ = log.leaf_sets();
    }
});
