#![no_main]

use libfuzzer_sys::fuzz_target;
use qseries::LaurentSeries;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(s) = text.parse::<LaurentSeries>() else { return };
    assert_eq!(s.to_string().parse::<LaurentSeries>().expect("display parses"), s);
});
