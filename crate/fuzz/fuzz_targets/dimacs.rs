#![no_main]
use chordcolor::formula::parse_dimacs;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(phi) = parse_dimacs(s) {
            let back = parse_dimacs(&phi.export_dimacs_raw()).expect("exported formula parses");
            assert_eq!(back.clauses(), phi.clauses());
        }
    }
});
