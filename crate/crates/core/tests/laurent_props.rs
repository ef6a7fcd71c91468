mod common;

use common::props::{agree, cube_factorization, cube_param, inverse_round_trip, ring_axioms};
use common::{series, unit_series};
use proptest::prelude::*;
use qseries::LaurentSeries;

const ORDER: i64 = 30;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms_hold(a in series(ORDER), b in series(ORDER), c in series(ORDER)) {
        ring_axioms(&a, &b, &c)?;
    }

    #[test]
    fn inverse_round_trips(f in unit_series(ORDER), g in series(ORDER)) {
        inverse_round_trip(&f, &g)?;
    }

    #[test]
    fn truncation_commutes_with_ring_ops(a in series(ORDER), b in series(ORDER), lo in 5i64..ORDER) {
        let (ta, tb) = (a.clone().truncated(lo), b.clone().truncated(lo));
        prop_assert!((&ta * &tb).order() <= (&a * &b).order());
        agree(&(&ta * &tb), &(&a * &b))?;
        agree(&(&ta + &tb), &(&a + &b))?;
        for e in -3..lo {
            prop_assert_eq!(ta.coeff(e).unwrap(), a.coeff(e).unwrap());
        }
        prop_assert!(ta.coeff(lo).is_err());
    }

    #[test]
    fn cube_base_factorization(x in cube_param(), n in 0usize..=10) {
        cube_factorization(&x, n, ORDER)?;
    }

    #[test]
    fn display_round_trips(a in series(ORDER)) {
        prop_assert_eq!(a.to_string().parse::<LaurentSeries>().unwrap(), a);
    }
}

proptest! {
    #[test]
    fn param_value_display_round_trips(c in common::nonzero_cycrat(), e in -50i64..=50) {
        let p = qseries::ParamValue::new(c, e).unwrap();
        prop_assert_eq!(p.to_string().parse::<qseries::ParamValue>().unwrap(), p);
    }
}

#[test]
fn extreme_exponents_are_rejected() {
    let text = format!("1*q^{} + 1*q^{} + O(q^{})", i64::MIN, i64::MAX - 1, i64::MAX);
    assert!(text.parse::<LaurentSeries>().is_err());
}
