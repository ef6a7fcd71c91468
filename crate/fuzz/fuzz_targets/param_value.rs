#![no_main]

use libfuzzer_sys::fuzz_target;
use qseries::ParamValue;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(p) = text.parse::<ParamValue>() else { return };
    assert_eq!(p.to_string().parse::<ParamValue>().expect("display parses"), p);
    assert!(p.times(&p.inv()).is_one());
});
