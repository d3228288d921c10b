#![no_main]
use chordcolor::CircleGraph;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(g) = CircleGraph::parse_edge_list(s) {
            let again =
                CircleGraph::parse_edge_list(&g.to_edge_list()).expect("rendered edge list parses");
            assert_eq!(again.edge_count(), g.edge_count());
        }
    }
});
