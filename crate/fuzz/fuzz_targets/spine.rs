#![no_main]
use chordcolor::diagram::conflict_graph_from_book;
use chordcolor::SpineInstance;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(inst) = SpineInstance::parse(s) {
            let g = conflict_graph_from_book(&inst);
            assert_eq!(g.vertex_count(), inst.edges().len());
        }
    }
});
