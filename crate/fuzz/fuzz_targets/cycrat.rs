#![no_main]

use libfuzzer_sys::fuzz_target;
use qseries::CycRat;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(c) = text.parse::<CycRat>() else { return };
    assert_eq!(c.to_string().parse::<CycRat>().expect("display parses"), c);
    if !c.is_zero() {
        assert!((&c * &c.inv().expect("nonzero inverts")).is_one());
    }
});
