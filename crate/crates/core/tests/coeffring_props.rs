mod common;

use common::props::field_axioms;
use common::{cycrat, nonzero_cycrat, rat};
use proptest::prelude::*;
use qseries::{CycRat, Rat};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms_hold(a in cycrat(), b in cycrat(), c in cycrat()) {
        field_axioms(&a, &b, &c)?;
    }

    #[test]
    fn powers_and_inverses(a in nonzero_cycrat()) {
        let inv = a.inv().unwrap();
        prop_assert_eq!(a.pow(-3).unwrap(), inv.pow(3).unwrap());
        prop_assert_eq!(&a.pow(2).unwrap() * &a, a.pow(3).unwrap());
    }

    #[test]
    fn norm_is_multiplicative(a in cycrat(), b in cycrat()) {
        prop_assert_eq!((&a * &b).norm(), &a.norm() * &b.norm());
        prop_assert_eq!(CycRat::from_rat(a.norm()), &a * &a.conj());
        prop_assert!(!a.norm().is_negative());
    }

    #[test]
    fn display_round_trips(a in cycrat(), r in rat()) {
        prop_assert_eq!(a.to_string().parse::<CycRat>().unwrap(), a.clone());
        prop_assert_eq!(r.to_string().parse::<Rat>().unwrap(), r);
    }
}

#[test]
fn omega_is_a_primitive_cube_root() {
    let w = CycRat::omega();
    let w2 = &w * &w;
    assert_eq!(&(&w2 + &w) + &CycRat::one(), CycRat::zero());
    assert_eq!(&w2 * &w, CycRat::one());
    assert_ne!(w, CycRat::one());
    assert_eq!(w2, CycRat::omega_inv());
}

#[test]
fn zero_has_no_inverse() {
    assert!(CycRat::zero().inv().is_err());
    assert!(Rat::zero().inv().is_err());
}
