#![no_main]

use libfuzzer_sys::fuzz_target;
use qseries::combinat::{parse_pairs, render_pairs};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(pairs) = parse_pairs(text) else { return };
    for p in &pairs {
        let _ = p.weight();
        let _ = p.is_a_pair();
    }
    // canonical rendering must parse back to the same pairs
    let again = parse_pairs(&render_pairs(&pairs)).expect("rendered pairs parse");
    assert_eq!(again, pairs);
});
