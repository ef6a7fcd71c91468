mod common;

use common::{bilateral_by_recurrence, bilateral_oracle, first_diff, param_tuple, params, pv};
use proptest::prelude::*;
use qseries::vwp::{self, ParamVector};
use qseries::ParamValue;

const ORDER: i64 = 30;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn multisum_identity_random_tuples(items in (1usize..=3).prop_flat_map(param_tuple)) {
        let p = params(items);
        let lhs = vwp::lhs_multisum(&p, ORDER).unwrap();
        let rhs = vwp::rhs_products(&p, ORDER).unwrap();
        prop_assert_eq!(first_diff(&lhs, &rhs), None);
        prop_assert!(lhs.order() >= ORDER);
    }

    #[test]
    fn bilateral_matches_a_coefficients(items in (1usize..=4).prop_flat_map(param_tuple)) {
        let p = params(items);
        let f = vwp::f_bilateral(&p, ORDER).unwrap();
        prop_assert_eq!(first_diff(&f, &bilateral_oracle(&p, ORDER).unwrap()), None);
    }

    #[test]
    fn bilateral_recurrence(items in (2usize..=4).prop_flat_map(param_tuple)) {
        let f = vwp::f_bilateral(&params(items.clone()), ORDER).unwrap();
        prop_assert_eq!(first_diff(&f, &bilateral_by_recurrence(&items, ORDER).unwrap()), None);
    }

    #[test]
    fn finite_n_is_stable(items in (1usize..=3).prop_flat_map(param_tuple), big_n in 20usize..=30) {
        let p = params(items);
        let lim = vwp::l_limit(&p, 20).unwrap();
        prop_assert_eq!(first_diff(&vwp::l_finite_n(&p, big_n, 20).unwrap(), &lim), None);
    }

    #[test]
    fn corollaries_agree_with_the_multisum(items in param_tuple(3)) {
        let q = ParamValue::q();
        let (x, y, z) = (&items[0], &items[1], &items[2]);
        let (l2, r2) = vwp::corollary_k2(y, z, &q, ORDER).unwrap();
        let m2 = vwp::lhs_multisum(&params(vec![y.clone(), z.clone()]), ORDER).unwrap();
        prop_assert_eq!(first_diff(&l2, &m2), None);
        prop_assert_eq!(first_diff(&r2, &m2), None);
        let (l3, r3) = vwp::corollary_k3(x, y, z, &q, 20).unwrap();
        let m3 = vwp::lhs_multisum(&params(items.clone()), 20).unwrap();
        prop_assert_eq!(first_diff(&l3, &m3), None);
        prop_assert_eq!(first_diff(&r3, &m3), None);
    }
}

#[test]
fn base_q_squared_identity() {
    let p = ParamVector::with_base(vec![pv("1"), pv("q"), pv("w")], ParamValue::q_pow(2)).unwrap();
    assert_eq!(first_diff(&vwp::lhs_multisum(&p, ORDER).unwrap(), &vwp::rhs_products(&p, ORDER).unwrap()), None);
}
