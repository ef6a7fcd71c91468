//! Property bodies shared by the proptest suites and the acceptance target.

use proptest::prelude::*;
use qseries::{poch_finite, CycRat, LaurentSeries, ParamValue, Rat};

pub fn agree(a: &LaurentSeries, b: &LaurentSeries) -> Result<(), TestCaseError> {
    let upto = a.order().min(b.order());
    prop_assert!(a.first_difference(b, upto).is_none(), "{:?} vs {:?} below q^{}", a, b, upto);
    Ok(())
}

pub fn field_axioms(a: &CycRat, b: &CycRat, c: &CycRat) -> Result<(), TestCaseError> {
    prop_assert_eq!(&(a + b) + c, a + &(b + c));
    prop_assert_eq!(a + b, b + a);
    prop_assert_eq!(a + &CycRat::zero(), a.clone());
    prop_assert_eq!(a + &(-a), CycRat::zero());
    prop_assert_eq!(&(a * b) * c, a * &(b * c));
    prop_assert_eq!(a * b, b * a);
    prop_assert_eq!(a * &CycRat::one(), a.clone());
    prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
    if !a.is_zero() {
        let inv = a.inv().unwrap();
        prop_assert_eq!(a * &inv, CycRat::one());
        prop_assert_eq!(&(b / a).unwrap() * a, b.clone());
    }
    Ok(())
}

pub fn ring_axioms(a: &LaurentSeries, b: &LaurentSeries, c: &LaurentSeries) -> Result<(), TestCaseError> {
    let order = a.order();
    agree(&(&(a + b) + c), &(a + &(b + c)))?;
    agree(&(a + b), &(b + a))?;
    agree(&(a + &(-a)), &LaurentSeries::zero(order))?;
    agree(&(&(a * b) * c), &(a * &(b * c)))?;
    agree(&(a * b), &(b * a))?;
    agree(&(a * &(b + c)), &(&(a * b) + &(a * c)))?;
    agree(&(a * &LaurentSeries::one(order)), a)
}

/// `f` must have a nonzero lowest coefficient.
pub fn inverse_round_trip(f: &LaurentSeries, g: &LaurentSeries) -> Result<(), TestCaseError> {
    let prod = f * &f.inv().unwrap();
    prop_assert!(prod.order() > 0);
    agree(&prod, &LaurentSeries::one(f.order()))?;
    agree(&(&g.div(f).unwrap() * f), g)
}

/// `(x^3; q^3)_n = (x, x w, x w^2; q)_n`.
pub fn cube_factorization(x: &ParamValue, n: usize, order: i64) -> Result<(), TestCaseError> {
    let q = ParamValue::q();
    let lhs = poch_finite(&x.pow(3), &ParamValue::q_pow(3), n, order).unwrap();
    let rhs = &(&poch_finite(x, &q, n, order).unwrap() * &poch_finite(&x.times(&ParamValue::omega()), &q, n, order).unwrap())
        * &poch_finite(&x.times(&ParamValue::omega_inv()), &q, n, order).unwrap();
    agree(&lhs, &rhs)
}

pub fn cube_param() -> impl Strategy<Value = ParamValue> {
    (-3i64..=3, -3i64..=3, 0i64..=2)
        .prop_filter("nonzero", |&(a, b, _)| a != 0 || b != 0)
        .prop_map(|(a, b, e)| ParamValue::new(CycRat::new(Rat::from_int(a), Rat::from_int(b)), e).unwrap())
}
