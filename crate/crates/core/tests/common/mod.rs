#![allow(dead_code)]

pub mod props;

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;
use qseries::vwp::ParamVector;
use qseries::{CycRat, LaurentSeries, ParamValue, Rat};

pub fn rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rat::new(n, d))
}

pub fn cycrat() -> impl Strategy<Value = CycRat> {
    (rat(), rat()).prop_map(|(a, b)| CycRat::new(a, b))
}

pub fn nonzero_cycrat() -> impl Strategy<Value = CycRat> {
    cycrat().prop_filter("nonzero", |c| !c.is_zero())
}

/// Small coefficients keep the order-30 products cheap.
fn small_cycrat() -> impl Strategy<Value = CycRat> {
    (-3i64..=3, -3i64..=3, 1i64..=2).prop_map(|(a, b, d)| CycRat::new(Rat::new(a, d), Rat::new(b, d)))
}

/// Series with valuation in `-3..=3`, exact to `order`.
pub fn series(order: i64) -> impl Strategy<Value = LaurentSeries> {
    (-3i64..=3, prop::collection::vec(small_cycrat(), 0..8))
        .prop_map(move |(offset, coeffs)| LaurentSeries::from_coeffs(offset, coeffs, order))
}

/// Series whose lowest coefficient is nonzero, hence invertible.
pub fn unit_series(order: i64) -> impl Strategy<Value = LaurentSeries> {
    (-3i64..=3, small_cycrat().prop_filter("nonzero", |c| !c.is_zero()), prop::collection::vec(small_cycrat(), 0..6))
        .prop_map(move |(offset, lead, rest)| {
            let mut coeffs = vec![lead];
            coeffs.extend(rest);
            LaurentSeries::from_coeffs(offset, coeffs, order)
        })
}

pub fn pv(s: &str) -> ParamValue {
    s.parse().unwrap_or_else(|e| panic!("{s}: {e:?}"))
}

/// Parameter pool for random tuples. None is `1` or a power of `q`, so every
/// pairwise `C` and every bilateral factor is defined once duplicates and
/// reciprocal pairs are excluded.
pub const POOL: &[&str] = &[
    "-1", "w", "-w", "-1-w", "1+w", "2", "-2", "1/2", "3", "-1/3", "2*w", "-q", "2*q", "w*q", "-w*q^-1", "3*q^-1",
];

fn clashes(a: &ParamValue, b: &ParamValue) -> bool {
    a == b || *a == b.inv()
}

/// A random tuple of `k` pool values, pairwise distinct up to inversion.
pub fn param_tuple(k: usize) -> impl Strategy<Value = Vec<ParamValue>> {
    prop::sample::subsequence((0..POOL.len()).collect::<Vec<_>>(), k)
        .prop_shuffle()
        .prop_map(|idx| idx.into_iter().map(|i| pv(POOL[i])).collect::<Vec<_>>())
        .prop_filter("pairwise nondegenerate", |v| {
            v.iter().enumerate().all(|(i, a)| v[..i].iter().all(|b| !clashes(a, b)))
        })
}

pub fn params(items: Vec<ParamValue>) -> ParamVector {
    ParamVector::new(items).expect("pool values are admissible")
}

/// `count` tuples with `k` cycling through `ks`, from a fixed seed.
pub fn fixed_tuples(count: usize, ks: &[usize]) -> Vec<Vec<ParamValue>> {
    let mut runner = TestRunner::deterministic();
    (0..count)
        .map(|i| param_tuple(ks[i % ks.len()]).new_tree(&mut runner).expect("strategy yields").current())
        .collect()
}

/// `(q;q)_inf^2 * sum_i A_{k,i} / (b_i, 1/b_i; q)_inf`, assembled from the
/// recursion rather than summed.
pub fn bilateral_oracle(p: &ParamVector, order: i64) -> qseries::Result<LaurentSeries> {
    let q = ParamValue::q();
    let qq = qseries::poch_infinite(&q, &q, order)?;
    let mut acc = LaurentSeries::zero(order);
    for (i, b) in p.items().iter().enumerate() {
        let a = qseries::vwp::a_coeff(p.k(), i + 1, p, order)?;
        acc = &acc + &a.div_poch_inf(b, &q)?.div_poch_inf(&b.inv(), &q)?;
    }
    Ok(&(&qq * &qq) * &acc)
}

/// `C(b_k, b_{k-1}) (F_{k-1}(.., b_k) - F_{k-1}(.., b_{k-1}))`.
pub fn bilateral_by_recurrence(items: &[ParamValue], order: i64) -> qseries::Result<LaurentSeries> {
    let k = items.len();
    let (last, prev) = (&items[k - 1], &items[k - 2]);
    let drop = |j: usize| {
        let v: Vec<ParamValue> = items.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, b)| b.clone()).collect();
        qseries::vwp::f_bilateral(&params(v), order)
    };
    let c = qseries::vwp::c_helper(last, prev, order)?;
    Ok(&c * &(&drop(k - 2)? - &drop(k - 1)?))
}

/// First exponent below both orders where `a` and `b` differ.
pub fn first_diff(a: &LaurentSeries, b: &LaurentSeries) -> Option<i64> {
    a.first_difference(b, a.order().min(b.order())).map(|d| d.0)
}
