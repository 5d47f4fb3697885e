#![no_main]

use libfuzzer_sys::fuzz_target;
use treefit::graphs::parse_edge_list;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_edge_list(text) {
        assert!(g.edges().iter().all(|&(u, v, w)| u < g.n() && v < g.n() && u != v && w > 0.0));
        let back = parse_edge_list(&g.to_edge_list()).expect("re-parse");
        assert_eq!(back.edges().len(), g.edges().len());
    }
});
