#![no_main]
use chordcolor_cli::bench::{read_csv, write_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(records) = read_csv(s) {
            let mut out = Vec::new();
            write_csv(&mut out, &records).unwrap();
            let again = read_csv(std::str::from_utf8(&out).unwrap()).unwrap();
            assert_eq!(again, records);
        }
    }
});
