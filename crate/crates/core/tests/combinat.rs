use std::collections::BTreeSet;

use qseries::catalog::Status;
use qseries::combinat::{
    count_check, enumerate_pairs_a, gf_check_adblprime, gf_check_aprime, parse_pairs, render_pairs, Family,
    OverpartitionPair,
};

const GOLDEN_A5: &str = include_str!("golden/a5_printed.txt");

fn golden() -> Vec<OverpartitionPair> {
    parse_pairs(GOLDEN_A5).unwrap()
}

#[test]
fn golden_table_differs_in_one_transposed_pair() {
    let printed: BTreeSet<_> = golden().into_iter().collect();
    let ours: BTreeSet<_> = enumerate_pairs_a(5).unwrap().into_iter().collect();
    assert_eq!(printed.len(), 14);
    assert_eq!(ours.len(), 14);
    let only_printed: Vec<String> = printed.difference(&ours).map(ToString::to_string).collect();
    let only_ours: Vec<String> = ours.difference(&printed).map(ToString::to_string).collect();
    assert_eq!(only_printed, ["2~,1~|2"]);
    assert_eq!(only_ours, ["2,1~|2~"]);
    // a plain 2 in the second component is not a multiple of 3
    let bad: OverpartitionPair = "2~,1~|2".parse().unwrap();
    assert!(!bad.is_a_pair());
    assert!(golden().iter().filter(|p| **p != bad).all(OverpartitionPair::is_a_pair));
}

#[test]
fn golden_table_has_the_same_statistics() {
    // the swap keeps the number of parts and of plain parts, so every count agrees
    let stats = |ps: &[OverpartitionPair]| {
        let even_plain = ps.iter().filter(|p| p.num_plain() % 2 == 0).count();
        let even_parts = ps.iter().filter(|p| p.num_parts() % 2 == 0).count();
        (ps.len(), even_plain, even_parts)
    };
    assert_eq!(stats(&golden()), stats(&enumerate_pairs_a(5).unwrap()));
    assert_eq!(stats(&golden()), (14, 7, 7));
}

#[test]
fn rendered_table_parses_back() {
    for n in 1..=9 {
        let pairs = enumerate_pairs_a(n).unwrap();
        assert_eq!(parse_pairs(&render_pairs(&pairs)).unwrap(), pairs);
    }
}

#[test]
fn generating_functions_to_weight_20() {
    for r in [gf_check_aprime(21).unwrap(), gf_check_adblprime(21).unwrap()] {
        assert_eq!(r.status, Status::Equal, "{} {:?}", r.id, r.first_mismatch);
    }
    for f in Family::ALL {
        let r = count_check(f, 15).unwrap();
        assert_eq!(r.status, Status::Equal, "{} {:?}", r.id, r.first_mismatch);
    }
}

#[test]
fn huge_parts_are_rejected_not_overflowed() {
    assert!("4294967295~|".parse::<OverpartitionPair>().is_err());
    let big: OverpartitionPair = "2000000000~|2000000000~".parse().unwrap();
    assert_eq!(big.weight(), 4_000_000_000);
    // 3 * s does not fit in u32
    let wide: OverpartitionPair = "1500000000~|3".parse().unwrap();
    assert!(wide.is_a_pair());
}
