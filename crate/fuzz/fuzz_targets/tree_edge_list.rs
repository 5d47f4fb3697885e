#![no_main]

use libfuzzer_sys::fuzz_target;
use treefit::WeightedTree;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = WeightedTree::from_edge_list_str(text) {
        let back = WeightedTree::from_edge_list_str(&t.to_edge_list_string()).expect("re-parse");
        assert_eq!(back.edges(), t.edges());
        // Bounded so a tiny input cannot demand a huge matrix.
        if t.n() <= 64 && t.num_nodes() <= 256 {
            let _ = t.path_metric();
        }
    }
});
