#![no_main]
use chordcolor::generator::InstanceFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(f) = InstanceFile::parse(s) {
            let again = InstanceFile::parse(&f.render()).expect("rendered instance parses");
            assert_eq!(again, f);
        }
    }
});
