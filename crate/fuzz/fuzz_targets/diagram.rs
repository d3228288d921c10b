#![no_main]
use chordcolor::ChordDiagram;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(d) = ChordDiagram::parse(s) {
            let again = ChordDiagram::parse(&d.to_string()).expect("rendered diagram parses");
            assert_eq!(again.to_graph().edges(), d.to_graph().edges());
            let _ = d.levels();
        }
    }
});
