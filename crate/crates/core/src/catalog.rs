//! Registry of the named identities and the coefficient-level verifier.
//!
//! Every left side is summed literally from its statement
//! with the [`crate::sums`] walkers; right sides are products built in
//! [`crate::laurent`]. Neither side goes through the [`crate::vwp`] engine,
//! which is only used by [`derivation_check`] to replay the proof route.
//!
//! An entry may carry more than one reading of its right side. The first is
//! the statement as printed; later ones are corrections. The verifier reports
//! which reading held.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::coeffring::{CycRat, Rat};
use crate::error::{QsError, Result};
use crate::laurent::{poch_infinite, LaurentSeries, ParamValue};
use crate::sums::{double_sum, single_sum, with_headroom, Poch, Summand};
use crate::vwp;

/// A series built at a requested order.
pub type Builder = Arc<dyn Fn(i64) -> Result<LaurentSeries> + Send + Sync>;

#[derive(Clone)]
pub struct Reading {
    pub label: &'static str,
    pub rhs: Builder,
}

/// How the proof obtains the left side from the corollaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// `prefactor * (F(y, z) - 1)`: the `n >= 1` part of the single sum.
    Single,
    /// `prefactor * (K(x, y, z) - F(y, z))`: the `m >= 1` part of the double sum.
    Double,
}

#[derive(Clone)]
pub struct Specialization {
    pub shape: Shape,
    pub x: Option<ParamValue>,
    pub y: ParamValue,
    pub z: ParamValue,
    pub base: ParamValue,
    pub prefactor: Builder,
}

#[derive(Clone)]
pub struct IdentityEntry {
    pub id: &'static str,
    pub reference: &'static str,
    pub lhs: Builder,
    pub readings: Vec<Reading>,
    pub specialization: Option<Specialization>,
}

impl IdentityEntry {
    /// The printed right side.
    pub fn rhs(&self) -> &Builder {
        &self.readings[0].rhs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Equal,
    Mismatch,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub exponent: i64,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub id: String,
    pub order: i64,
    pub status: Status,
    pub first_mismatch: Option<Mismatch>,
    pub elapsed_ms: u64,
    /// Label of the reading that held, when one did.
    pub reading: Option<String>,
    pub message: Option<String>,
}

impl VerifyReport {
    fn error(id: &str, order: i64, start: Instant, err: &QsError) -> Self {
        VerifyReport {
            id: id.to_string(),
            order,
            status: Status::Error,
            first_mismatch: None,
            elapsed_ms: start.elapsed().as_millis() as u64,
            reading: None,
            message: Some(err.to_string()),
        }
    }
}

// ---- series helpers -------------------------------------------------------

fn pv(c: i64, e: i64) -> ParamValue {
    ParamValue::new(CycRat::from_int(c), e).expect("nonzero coefficient")
}

/// `(c q^e; q^b)_inf`
fn inf(c: i64, e: i64, b: i64, w: i64) -> Result<LaurentSeries> {
    poch_infinite(&pv(c, e), &ParamValue::q_pow(b), w)
}

fn frac(n: i64, d: i64, w: i64) -> LaurentSeries {
    LaurentSeries::constant(CycRat::from_rat(Rat::new(n, d)), w)
}

/// `sum c_i q^{e_i}` from `(e, c)` pairs.
fn poly(terms: &[(i64, i64)], w: i64) -> LaurentSeries {
    LaurentSeries::from_terms(terms.iter().map(|&(e, c)| (e, CycRat::from_int(c))), w)
}

fn dv(a: LaurentSeries, b: LaurentSeries) -> Result<LaurentSeries> {
    a.div(&b)
}

fn build<F>(f: F) -> Builder
where
    F: Fn(i64) -> Result<LaurentSeries> + Send + Sync + 'static,
{
    Arc::new(f)
}

/// Factor of a single sum over `n`.
#[derive(Clone, Copy)]
enum G {
    /// `(c q^e; q^b)_{n + off}`
    P(i64, i64, i64, i64),
    /// `(c q^{e + b n}; q^b)_inf`
    T(i64, i64, i64),
}

fn g_poch(g: G) -> Poch {
    match g {
        G::P(c, e, b, off) => Poch::finite(pv(c, e), ParamValue::q_pow(b), off),
        G::T(c, e, b) => Poch::tail(pv(c, e), ParamValue::q_pow(b)),
    }
}

/// `sum_{n >= 1} q^{pre + step n} prod(num) / prod(den)`.
fn single(pre: i64, step: i64, num: &[G], den: &[G]) -> Builder {
    let mut s = Summand::new(ParamValue::q_pow(pre), ParamValue::q_pow(step));
    for &g in num {
        s = s.num(g_poch(g));
    }
    for &g in den {
        s = s.den(g_poch(g));
    }
    build(move |w| single_sum(&s, 1, w))
}

/// Factor of a double sum over `m >= 1, n >= 0`.
#[derive(Clone, Copy)]
enum F {
    /// `(c q^e; q^b)_{m + off}`
    U(i64, i64, i64, i64),
    /// `(c q^e; q^b)_{m + n + off}`
    V(i64, i64, i64, i64),
}

fn f_poch(f: F, m: i64) -> Poch {
    match f {
        F::U(c, e, b, off) => Poch::fixed(pv(c, e), ParamValue::q_pow(b), (m + off) as usize),
        F::V(c, e, b, off) => Poch::finite(pv(c, e), ParamValue::q_pow(b), m + off),
    }
}

/// `sum_{m >= 1, n >= 0} q^{pre m + step n} prod(num) / prod(den)`.
fn double(pre: i64, step: i64, num: &[F], den: &[F]) -> Builder {
    let (num, den) = (num.to_vec(), den.to_vec());
    build(move |w| {
        let row = |m: i64| {
            let mut s = Summand::new(ParamValue::q_pow(pre * m), ParamValue::q_pow(step));
            for &f in &num {
                s = s.num(f_poch(f, m));
            }
            for &f in &den {
                s = s.den(f_poch(f, m));
            }
            s
        };
        double_sum(row, 1, w)
    })
}

fn printed(rhs: Builder) -> Vec<Reading> {
    vec![Reading { label: "printed", rhs }]
}

fn c(s: &str) -> ParamValue {
    s.parse().expect("valid parameter literal")
}

fn spec1(y: &str, z: &str, base: i64, prefactor: Builder) -> Option<Specialization> {
    Some(Specialization {
        shape: Shape::Single,
        x: None,
        y: c(y),
        z: c(z),
        base: ParamValue::q_pow(base),
        prefactor,
    })
}

fn spec2(x: &str, y: &str, z: &str, base: i64, prefactor: Builder) -> Option<Specialization> {
    Some(Specialization {
        shape: Shape::Double,
        x: Some(c(x)),
        y: c(y),
        z: c(z),
        base: ParamValue::q_pow(base),
        prefactor,
    })
}

fn konst(n: i64, d: i64) -> Builder {
    build(move |w| Ok(frac(n, d, w)))
}

use F::{U, V};
use G::{P, T};

// ---- registry -------------------------------------------------------------

/// The registered identities, sorted by id.
pub fn registry() -> Vec<IdentityEntry> {
    let mut out = vec![corollary_a(), corollary_b(), kl_entry(), bailey_entry()];
    out.extend(family_a1());
    out.extend(family_a2());
    out.extend(family_bprime());
    out.extend(family_ds123());
    out.extend(family_ds4());
    out.sort_by(|a, b| a.id.cmp(b.id));
    out
}

fn corollary_a() -> IdentityEntry {
    let (y, z, q) = (c("-1"), c("w"), ParamValue::q());
    let (y2, z2, q2) = (y.clone(), z.clone(), q.clone());
    IdentityEntry {
        id: "Cor-a",
        reference: "k = 2 corollary at (z, y) = (w, -1)",
        lhs: build(move |w| vwp::f_sum(&y, &z, &q, w)),
        readings: printed(build(move |w| vwp::corollary_k2_rhs(&y2, &z2, &q2, w))),
        specialization: None,
    }
}

fn corollary_b() -> IdentityEntry {
    let (x, y, z, q) = (c("1"), c("w"), c("-w"), ParamValue::q());
    let (x2, y2, z2, q2) = (x.clone(), y.clone(), z.clone(), q.clone());
    IdentityEntry {
        id: "Cor-b",
        reference: "k = 3 corollary at (x, y, z) = (1, w, -w)",
        lhs: build(move |w| vwp::k_sum(&x, &y, &z, &q, w)),
        readings: printed(build(move |w| vwp::corollary_k3_rhs(&x2, &y2, &z2, &q2, w))),
        specialization: None,
    }
}

fn kl_entry() -> IdentityEntry {
    let args = (c("1"), c("-1"), c("w"));
    let args2 = args.clone();
    IdentityEntry {
        id: "KL-relation",
        reference: "K = F(x,y) F(y,z) - L + diagonal, at (x, y, z) = (1, -1, w)",
        lhs: build(move |w| Ok(vwp::kl_relation_check(&args.0, &args.1, &args.2, w)?.lhs())),
        readings: printed(build(move |w| Ok(vwp::kl_relation_check(&args2.0, &args2.1, &args2.2, w)?.rhs()))),
        specialization: None,
    }
}

fn bailey_entry() -> IdentityEntry {
    IdentityEntry {
        id: "Bailey-3psi3",
        reference: "Bailey's well-poised 3psi3 at d -> inf, c = 1/b, b = w",
        lhs: build(|w| Ok(vwp::bailey_3psi3_check(&c("w"), w)?.0)),
        readings: printed(build(|w| Ok(vwp::bailey_3psi3_check(&c("w"), w)?.1))),
        specialization: None,
    }
}

fn family_a1() -> Vec<IdentityEntry> {
    vec![
        IdentityEntry {
            id: "A1-a",
            reference: "A1 family (a), (q^2;q^2)/(q;q^2)_inf - (q^3;q^3)_inf",
            lhs: single(0, 1, &[T(1, 0, 1), T(-1, 1, 1), T(-1, 1, 1), P(1, 3, 3, -1)], &[]),
            readings: printed(build(|w| Ok(dv(inf(1, 2, 2, w)?, inf(1, 1, 2, w)?)? - inf(1, 3, 3, w)?))),
            specialization: spec1(
                "-1",
                "w",
                1,
                build(|w| Ok(frac(1, 3, w) * inf(1, 1, 1, w)? * inf(-1, 1, 1, w)?.pow(2))),
            ),
        },
        IdentityEntry {
            id: "A1-b",
            reference: "A1 family (b), (1/3)((q^3;q^3)_inf - (q;q)_inf^3)",
            lhs: single(0, 1, &[T(1, 0, 1), T(1, 1, 1), T(1, 1, 1), P(1, 3, 3, -1)], &[]),
            readings: printed(build(|w| Ok(frac(1, 3, w) * (inf(1, 3, 3, w)? - inf(1, 1, 1, w)?.pow(3))))),
            specialization: spec1("1", "w", 1, build(|w| Ok(frac(1, 3, w) * inf(1, 1, 1, w)?.pow(3)))),
        },
        IdentityEntry {
            id: "A1-c",
            reference: "A1 family (c), (1/3)((-q;q)_inf^3 - (-q^3;q^3)_inf)",
            lhs: single(0, 1, &[T(-1, 0, 1), T(-1, 1, 1), T(-1, 1, 1), P(-1, 3, 3, -1)], &[]),
            readings: printed(build(|w| Ok(frac(1, 3, w) * (inf(-1, 1, 1, w)?.pow(3) - inf(-1, 3, 3, w)?)))),
            specialization: spec1("-1", "-w", 1, build(|w| Ok(inf(-1, 1, 1, w)?.pow(3)))),
        },
        IdentityEntry {
            id: "A1-d",
            reference: "A1 family (d), (-q^3;q^3)_inf - (-q;q)_inf (q;q)_inf^2",
            lhs: single(0, 1, &[T(-1, 0, 1), T(1, 1, 1), T(1, 1, 1), P(-1, 3, 3, -1)], &[]),
            readings: printed(build(|w| Ok(inf(-1, 3, 3, w)? - inf(-1, 1, 1, w)? * inf(1, 1, 1, w)?.pow(2)))),
            specialization: spec1("1", "-w", 1, build(|w| Ok(inf(-1, 1, 1, w)? * inf(1, 1, 1, w)?.pow(2)))),
        },
    ]
}

fn family_a2() -> Vec<IdentityEntry> {
    vec![
        IdentityEntry {
            id: "A2-a",
            reference: "A2 family (a), 1/(q^3;q^3)_inf - (q;q^2)_inf/(q^2;q^2)_inf",
            lhs: single(0, 1, &[], &[T(1, 1, 1), T(-1, 0, 1), T(-1, 0, 1), P(1, 3, 3, 0)]),
            readings: printed(build(|w| {
                Ok(dv(LaurentSeries::one(w), inf(1, 3, 3, w)?)? - dv(inf(1, 1, 2, w)?, inf(1, 2, 2, w)?)?)
            })),
            specialization: spec1(
                "w",
                "-1",
                1,
                build(|w| dv(frac(1, 4, w), inf(1, 1, 1, w)? * inf(-1, 1, 1, w)?.pow(2))),
            ),
        },
        IdentityEntry {
            id: "A2-b",
            reference: "A2 family (b), (1/3)(1/(-q^3;q^3)_inf - 1/(-q;q)_inf)",
            lhs: single(0, 1, &[], &[T(-1, 1, 1), T(-1, 0, 1), T(-1, 0, 1), P(-1, 3, 3, 0)]),
            readings: vec![
                Reading {
                    label: "printed",
                    rhs: build(|w| {
                        let one = LaurentSeries::one(w);
                        Ok(frac(1, 3, w) * (dv(one.clone(), inf(-1, 3, 3, w)?)? - dv(one, inf(-1, 1, 1, w)?)?))
                    }),
                },
                Reading {
                    label: "cubed (-q;q)_inf in the second term",
                    rhs: build(|w| {
                        let one = LaurentSeries::one(w);
                        Ok(frac(1, 3, w) * (dv(one.clone(), inf(-1, 3, 3, w)?)? - dv(one, inf(-1, 1, 1, w)?.pow(3))?))
                    }),
                },
            ],
            specialization: spec1("-w", "-1", 1, build(|w| dv(frac(1, 4, w), inf(-1, 1, 1, w)?.pow(3)))),
        },
        IdentityEntry {
            id: "A2-c",
            reference: "A2 family (c), (1/2)((q^3;q^3)/(-q^3;q^3) - (q;q)/(-q;q))",
            lhs: single(0, 1, &[T(1, 0, 1), P(1, 3, 3, -1)], &[T(-1, 1, 1), P(-1, 3, 3, 0)]),
            readings: printed(build(|w| {
                Ok(frac(1, 2, w) * (dv(inf(1, 3, 3, w)?, inf(-1, 3, 3, w)?)? - dv(inf(1, 1, 1, w)?, inf(-1, 1, 1, w)?)?))
            })),
            specialization: spec1("-w", "w", 1, build(|w| dv(frac(1, 3, w) * inf(1, 1, 1, w)?, inf(-1, 1, 1, w)?))),
        },
        IdentityEntry {
            id: "A2-d",
            reference: "A2 family (d), (-1/2)((-q^3;q^3)/(q^3;q^3) - (-q;q)/(q;q))",
            lhs: single(0, 1, &[T(-1, 0, 1), P(-1, 3, 3, -1)], &[T(1, 1, 1), P(1, 3, 3, 0)]),
            readings: printed(build(|w| {
                Ok(frac(-1, 2, w) * (dv(inf(-1, 3, 3, w)?, inf(1, 3, 3, w)?)? - dv(inf(-1, 1, 1, w)?, inf(1, 1, 1, w)?)?))
            })),
            specialization: spec1("w", "-w", 1, build(|w| dv(inf(-1, 1, 1, w)?, inf(1, 1, 1, w)?))),
        },
    ]
}

fn family_bprime() -> Vec<IdentityEntry> {
    vec![
        IdentityEntry {
            id: "Bprime-a",
            reference: "Bprime family (a), (q^6;q^6)/(1+q+q^2) - (q^2;q^2)(q;q^2)^2/(1-q^3)",
            lhs: single(-1, 2, &[T(1, 1, 2), T(1, 0, 2), T(1, 3, 2), P(1, 6, 6, -1)], &[]),
            readings: vec![
                Reading {
                    label: "printed",
                    rhs: build(|w| {
                        let a = dv(inf(1, 6, 6, w)?, poly(&[(0, 1), (1, 1), (2, 1)], w))?;
                        let b = dv(inf(1, 2, 2, w)? * inf(1, 1, 2, w)?.pow(2), poly(&[(0, 1), (3, -1)], w))?;
                        Ok(a - b)
                    }),
                },
                Reading {
                    label: "proof final line, -q/(1-q^3) form",
                    rhs: build(|w| {
                        // q^-1 (q;q^2)^2 (q^2;q^2) / (3(1-q)) * (C(w,q)((1-q)(1-1/q) - (w,1/w;q^2)/(q^3,q;q^2)) - 1)
                        let pref = dv(inf(1, 2, 2, w + 2)? * inf(1, 1, 2, w + 2)?.pow(2), poly(&[(1, 3), (2, -3)], w + 2))?;
                        let cor = vwp::corollary_k2_rhs(&c("q"), &c("w"), &ParamValue::q_pow(2), w + 2)?;
                        Ok((pref * (cor - LaurentSeries::one(w + 2))).truncated(w))
                    }),
                },
            ],
            specialization: spec1(
                "q",
                "w",
                2,
                build(|w| dv(inf(1, 1, 2, w)?.pow(2) * inf(1, 2, 2, w)?, poly(&[(1, 3), (2, -3)], w))),
            ),
        },
        IdentityEntry {
            id: "Bprime-b",
            reference: "Bprime family (b), ((-q^6;q^6) - (-q^2,q^3,q;q^2))/(1-q+q^2)",
            lhs: single(-1, 2, &[T(1, 1, 2), T(-1, 0, 2), T(1, 3, 2), P(-1, 6, 6, -1)], &[]),
            readings: printed(build(|w| {
                let t = inf(-1, 6, 6, w)? - inf(-1, 2, 2, w)? * inf(1, 3, 2, w)? * inf(1, 1, 2, w)?;
                dv(t, poly(&[(0, 1), (1, -1), (2, 1)], w))
            })),
            specialization: spec1(
                "q",
                "-w",
                2,
                build(|w| dv(inf(1, 1, 2, w)?.pow(2) * inf(-1, 2, 2, w)?, poly(&[(1, 1), (2, -1)], w))),
            ),
        },
        IdentityEntry {
            id: "Bprime-c",
            reference: "Bprime family (c), ((1-q)/((q;q^2)^2 (q^2;q^2)) - 1/(q^6;q^6))/(1+q+q^2)",
            lhs: single(-1, 2, &[], &[T(1, -1, 2), T(1, 1, 2), T(1, 2, 2), P(1, 6, 6, 0)]),
            readings: printed(build(|w| {
                let a = dv(poly(&[(0, 1), (1, -1)], w), inf(1, 1, 2, w)?.pow(2) * inf(1, 2, 2, w)?)?;
                let t = a - dv(LaurentSeries::one(w), inf(1, 6, 6, w)?)?;
                dv(t, poly(&[(0, 1), (1, 1), (2, 1)], w))
            })),
            specialization: spec1(
                "w",
                "q",
                2,
                build(|w| dv(frac(-1, 1, w), poly(&[(0, 1), (1, -1)], w) * inf(1, 1, 2, w)?.pow(2) * inf(1, 2, 2, w)?)),
            ),
        },
        IdentityEntry {
            id: "Bprime-d",
            reference: "Bprime family (d), (1/(-q^2,q^3,q;q^2) - 1/(-q^6;q^6))/(1-q+q^2)",
            lhs: single(-1, 2, &[], &[T(1, -1, 2), T(1, 1, 2), T(-1, 2, 2), P(-1, 6, 6, 0)]),
            readings: printed(build(|w| {
                let one = LaurentSeries::one(w);
                let a = dv(one.clone(), inf(-1, 2, 2, w)? * inf(1, 3, 2, w)? * inf(1, 1, 2, w)?)?;
                let t = a - dv(one, inf(-1, 6, 6, w)?)?;
                dv(t, poly(&[(0, 1), (1, -1), (2, 1)], w))
            })),
            specialization: spec1(
                "-w",
                "q",
                2,
                build(|w| dv(frac(-1, 1, w), poly(&[(0, 1), (1, -1)], w) * inf(1, 1, 2, w)?.pow(2) * inf(-1, 2, 2, w)?)),
            ),
        },
    ]
}

/// `a/6 X + b Y + c` style right sides: sum of `coeff * product` plus a constant.
fn combo(terms: Vec<(i64, i64, Builder)>, konst: (i64, i64)) -> Builder {
    build(move |w| {
        let mut acc = frac(konst.0, konst.1, w);
        for (n, d, t) in &terms {
            acc = acc + frac(*n, *d, w) * t(w)?;
        }
        Ok(acc)
    })
}

/// Quotient of infinite products `prod num / prod den`, each `(c, e, b, power)`.
fn ratio(num: &[(i64, i64, i64, u32)], den: &[(i64, i64, i64, u32)]) -> Builder {
    let (num, den) = (num.to_vec(), den.to_vec());
    build(move |w| {
        let mut n = LaurentSeries::one(w);
        for &(c, e, b, k) in &num {
            n = n * inf(c, e, b, w)?.pow(k);
        }
        let mut d = LaurentSeries::one(w);
        for &(c, e, b, k) in &den {
            d = d * inf(c, e, b, w)?.pow(k);
        }
        dv(n, d)
    })
}

fn family_ds123() -> Vec<IdentityEntry> {
    // shorthands for the q-products (c q^e; q^b)_inf with power
    const Q1: (i64, i64, i64, u32) = (1, 1, 1, 1);
    const M1: (i64, i64, i64, u32) = (-1, 1, 1, 1);
    const Q3: (i64, i64, i64, u32) = (1, 3, 3, 1);
    const M3: (i64, i64, i64, u32) = (-1, 3, 3, 1);
    const Q2: (i64, i64, i64, u32) = (1, 2, 2, 1);
    const fn pw(p: (i64, i64, i64, u32), k: u32) -> (i64, i64, i64, u32) {
        (p.0, p.1, p.2, k)
    }
    vec![
        IdentityEntry {
            id: "DS1-a",
            reference: "DS1 family (a), double sum over m >= 1, n >= 0",
            lhs: double(
                2,
                1,
                &[U(1, 3, 3, -1), V(1, 1, 1, 0), V(-1, 3, 3, -1)],
                &[U(1, 1, 1, -1), U(1, 1, 1, 0), U(1, 1, 1, 0), V(-1, 1, 1, -1), V(1, 3, 3, 0)],
            ),
            readings: printed(combo(
                vec![(1, 3, ratio(&[M3], &[M1, pw(Q1, 2)])), (1, 6, ratio(&[M3, Q1], &[Q3, M1]))],
                (-1, 2),
            )),
            specialization: spec2("1", "w", "-w", 1, konst(1, 3)),
        },
        IdentityEntry {
            id: "DS1-b",
            reference: "DS1 family (b), double sum over m >= 1, n >= 0",
            lhs: double(
                2,
                1,
                &[U(-1, 3, 3, -1), V(-1, 1, 1, 0), V(1, 3, 3, -1)],
                &[U(-1, 1, 1, -1), U(1, 1, 1, 0), U(1, 1, 1, 0), V(1, 1, 1, -1), V(-1, 3, 3, 0)],
            ),
            readings: printed(combo(
                vec![(1, 3, ratio(&[Q3], &[pw(Q1, 3)])), (-1, 2, ratio(&[Q3, M1], &[M3, Q1]))],
                (1, 6),
            )),
            specialization: spec2("1", "-w", "w", 1, konst(1, 3)),
        },
        IdentityEntry {
            id: "DS1-c",
            reference: "DS1 family (c), double sum over m >= 1, n >= 0",
            lhs: double(
                2,
                1,
                &[U(1, 3, 3, -1), V(1, 1, 1, 0), V(-1, 3, 3, -1)],
                &[U(1, 1, 1, -1), U(-1, 1, 1, 0), U(-1, 1, 1, 0), V(-1, 1, 1, -1), V(1, 3, 3, 0)],
            ),
            readings: printed(combo(
                vec![(1, 3, ratio(&[M3], &[pw(M1, 3)])), (-1, 2, ratio(&[M3, Q1], &[Q3, M1]))],
                (1, 6),
            )),
            specialization: spec2("-1", "w", "-w", 1, konst(1, 3)),
        },
        IdentityEntry {
            id: "DS1-d",
            reference: "DS1 family (d), double sum over m >= 1, n >= 0",
            lhs: double(
                2,
                1,
                &[U(-1, 3, 3, -1), V(-1, 1, 1, 0), V(1, 3, 3, -1)],
                &[U(-1, 1, 1, -1), U(-1, 1, 1, 0), U(-1, 1, 1, 0), V(1, 1, 1, -1), V(-1, 3, 3, 0)],
            ),
            readings: printed(combo(
                vec![(1, 3, ratio(&[Q3], &[M1, Q2])), (1, 6, ratio(&[Q3, M1], &[M3, Q1]))],
                (-1, 2),
            )),
            specialization: spec2("-1", "-w", "w", 1, konst(1, 3)),
        },
        IdentityEntry {
            id: "DS2-a",
            reference: "DS2 family (a), double sum over m >= 1, n >= 0",
            lhs: double(
                2,
                1,
                &[U(-1, 1, 1, 0), U(-1, 1, 1, -1), U(-1, 1, 1, -1), V(1, 3, 3, -1)],
                &[U(-1, 3, 3, 0), V(1, 1, 1, -1), V(-1, 1, 1, 0), V(-1, 1, 1, 0)],
            ),
            readings: printed(combo(
                vec![(1, 6, ratio(&[M1, Q3], &[Q1, M3])), (1, 3, ratio(&[Q3], &[M1, Q2]))],
                (-1, 2),
            )),
            specialization: spec2("-w", "-1", "w", 1, konst(1, 12)),
        },
        IdentityEntry {
            id: "DS2-b",
            reference: "DS2 family (b), double sum over m >= 1, n >= 0",
            lhs: double(
                2,
                1,
                &[U(1, 1, 1, 0), U(-1, 1, 1, -1), U(-1, 1, 1, -1), V(-1, 3, 3, -1)],
                &[U(1, 3, 3, 0), V(-1, 1, 1, -1), V(-1, 1, 1, 0), V(-1, 1, 1, 0)],
            ),
            readings: printed(combo(
                vec![(-1, 2, ratio(&[Q1, M3], &[M1, Q3])), (1, 3, ratio(&[M3], &[pw(M1, 3)]))],
                (1, 6),
            )),
            specialization: spec2("w", "-1", "-w", 1, konst(1, 4)),
        },
        IdentityEntry {
            id: "DS2-c",
            reference: "DS2 family (c), double sum over m >= 1, n >= 0",
            lhs: double(
                2,
                1,
                &[U(1, 3, 3, -1), U(-1, 1, 1, 0), V(-1, 1, 1, -1), V(-1, 1, 1, -1), V(1, 1, 1, 0)],
                &[U(1, 1, 1, -1), U(-1, 3, 3, 0), V(1, 3, 3, 0)],
            ),
            readings: printed(combo(
                vec![(1, 6, ratio(&[pw(M1, 3)], &[M3])), (-1, 2, ratio(&[M1, Q2], &[Q3]))],
                (1, 3),
            )),
            specialization: spec2("-w", "w", "-1", 1, konst(1, 12)),
        },
        IdentityEntry {
            id: "DS2-d",
            reference: "DS2 family (d), double sum over m >= 1, n >= 0",
            lhs: double(
                2,
                1,
                &[U(-1, 3, 3, -1), U(1, 1, 1, 0), V(-1, 1, 1, -1), V(-1, 1, 1, -1), V(-1, 1, 1, 0)],
                &[U(-1, 1, 1, -1), U(1, 3, 3, 0), V(-1, 3, 3, 0)],
            ),
            readings: printed(combo(
                vec![(-1, 2, ratio(&[M1, Q2], &[Q3])), (1, 6, ratio(&[pw(M1, 3)], &[M3]))],
                (1, 3),
            )),
            specialization: spec2("w", "-w", "-1", 1, konst(1, 4)),
        },
        IdentityEntry {
            id: "DS3-a",
            reference: "DS3 family (a), double sum over m >= 1, n >= 0",
            lhs: double(
                2,
                1,
                &[U(-1, 1, 1, -1), U(-1, 1, 1, -1), V(1, 3, 3, -1)],
                &[U(1, 1, 1, 0), U(1, 1, 1, 0), V(-1, 1, 1, 0), V(-1, 1, 1, 0), V(1, 1, 1, -1)],
            ),
            readings: printed(combo(
                vec![(1, 12, ratio(&[Q3], &[pw(Q1, 3)])), (1, 4, ratio(&[Q3], &[Q1, pw(M1, 2)]))],
                (-1, 3),
            )),
            specialization: spec2("1", "-1", "w", 1, konst(1, 12)),
        },
        IdentityEntry {
            id: "DS3-b",
            reference: "DS3 family (b), double sum over m >= 1, n >= 0",
            lhs: double(
                2,
                1,
                &[U(1, 3, 3, -1), V(-1, 1, 1, -1), V(-1, 1, 1, -1), V(1, 1, 1, 0)],
                &[U(1, 1, 1, -1), U(1, 1, 1, 0), U(1, 1, 1, 0), V(1, 3, 3, 0)],
            ),
            readings: printed(combo(
                vec![(1, 12, ratio(&[pw(M1, 2)], &[pw(Q1, 2)])), (-1, 3, ratio(&[pw(M1, 2), Q1], &[Q3]))],
                (1, 4),
            )),
            specialization: spec2("1", "w", "-1", 1, konst(1, 12)),
        },
        IdentityEntry {
            id: "DS3-c",
            reference: "DS3 family (c), double sum over m >= 1, n >= 0",
            lhs: double(
                2,
                1,
                &[U(-1, 1, 1, -1), U(-1, 1, 1, -1), V(-1, 3, 3, -1)],
                &[U(1, 1, 1, 0), U(1, 1, 1, 0), V(-1, 1, 1, 0), V(-1, 1, 1, 0), V(-1, 1, 1, -1)],
            ),
            readings: printed(combo(
                vec![(1, 4, ratio(&[M3], &[M1, pw(Q1, 2)])), (1, 12, ratio(&[M3], &[pw(M1, 3)]))],
                (-1, 3),
            )),
            specialization: spec2("1", "-1", "-w", 1, konst(1, 4)),
        },
        IdentityEntry {
            id: "DS3-d",
            reference: "DS3 family (d), double sum over m >= 1, n >= 0",
            lhs: double(
                2,
                1,
                &[U(-1, 3, 3, -1), V(-1, 1, 1, -1), V(-1, 1, 1, -1), V(-1, 1, 1, 0)],
                &[U(-1, 1, 1, -1), U(1, 1, 1, 0), U(1, 1, 1, 0), V(-1, 3, 3, 0)],
            ),
            readings: printed(combo(
                vec![(1, 4, ratio(&[pw(M1, 2)], &[pw(Q1, 2)])), (-1, 3, ratio(&[pw(M1, 3)], &[M3]))],
                (1, 12),
            )),
            specialization: spec2("1", "-w", "-1", 1, konst(1, 4)),
        },
    ]
}

fn family_ds4() -> Vec<IdentityEntry> {
    // (q, 1/q; q^2)_m and (q^3, q; q^2)_{m+n}
    let qq_m = [U(1, 1, 2, 0), U(1, -1, 2, 0)];
    let third = |w: i64| -> Result<LaurentSeries> { dv(frac(1, 3, w) * inf(1, 6, 6, w)?, inf(1, 2, 2, w)?.pow(3)) };
    let one_pm = |s: i64, w: i64| poly(&[(0, 1), (1, s), (2, 1)], w);
    vec![
        IdentityEntry {
            id: "DS4-a",
            reference: "DS4 family (a), double sum over m >= 1, n >= 0",
            lhs: double(
                4,
                2,
                &[qq_m[0], qq_m[1], V(1, 6, 6, -1)],
                &[U(1, 2, 2, 0), U(1, 2, 2, 0), V(1, 2, 2, -1), V(1, 3, 2, 0), V(1, 1, 2, 0)],
            ),
            readings: vec![
                Reading {
                    label: "printed",
                    rhs: build(move |w| {
                        let mid = dv(
                            poly(&[(1, 1)], w) * inf(1, 6, 6, w)?,
                            poly(&[(0, 1), (3, 1)], w) * inf(1, 2, 2, w)? * inf(1, 3, 2, w)?.pow(2),
                        )?;
                        let tail = dv(poly(&[(0, 1), (1, -2), (2, 1)], w), poly(&[(0, 3), (1, 3), (2, 3)], w))?;
                        Ok(third(w)? + mid - tail)
                    }),
                },
                Reading {
                    label: "minus sign and (1-q^3) in the middle term",
                    rhs: build(move |w| {
                        let mid = dv(
                            poly(&[(1, 1)], w) * inf(1, 6, 6, w)?,
                            poly(&[(0, 1), (3, -1)], w) * inf(1, 2, 2, w)? * inf(1, 3, 2, w)?.pow(2),
                        )?;
                        let tail = dv(poly(&[(0, 1), (1, -2), (2, 1)], w), poly(&[(0, 3), (1, 3), (2, 3)], w))?;
                        Ok(third(w)? - mid - tail)
                    }),
                },
            ],
            specialization: spec2("1", "q", "w", 2, konst(1, 3)),
        },
        IdentityEntry {
            id: "DS4-b",
            reference: "DS4 family (b), double sum over m >= 1, n >= 0",
            lhs: double(
                4,
                2,
                &[qq_m[0], qq_m[1], V(-1, 6, 6, -1)],
                &[U(1, 2, 2, 0), U(1, 2, 2, 0), V(-1, 2, 2, -1), V(1, 3, 2, 0), V(1, 1, 2, 0)],
            ),
            readings: vec![
                Reading {
                    label: "printed",
                    rhs: build(move |w| {
                        let first = dv(inf(-1, 6, 6, w)?, inf(-1, 2, 2, w)? * inf(1, 4, 4, w)?)?;
                        ds4b_rest(first, w)
                    }),
                },
                Reading {
                    label: "(q^2;q^2)_inf^2 in place of (q^4;q^4)_inf",
                    rhs: build(move |w| {
                        let first = dv(inf(-1, 6, 6, w)?, inf(-1, 2, 2, w)? * inf(1, 2, 2, w)?.pow(2))?;
                        ds4b_rest(first, w)
                    }),
                },
            ],
            specialization: spec2("1", "q", "-w", 2, konst(1, 1)),
        },
        IdentityEntry {
            id: "DS4-c",
            reference: "DS4 family (c), double sum over m >= 1, n >= 0",
            lhs: double(
                4,
                2,
                &[U(-1, 6, 6, -1), V(1, 1, 2, 0), V(1, -1, 2, 0), V(-1, 2, 2, 0)],
                &[U(-1, 2, 2, -1), U(1, 2, 2, 0), U(1, 2, 2, 0), V(-1, 6, 6, 0)],
            ),
            readings: printed(build(move |w| {
                let a = dv(inf(1, 1, 2, w)? * inf(1, 3, 2, w)?, inf(1, 2, 2, w)?.pow(2))?;
                let b = dv(
                    poly(&[(1, 1)], w) * inf(-1, 2, 2, w)? * inf(1, 1, 2, w)? * inf(1, -1, 2, w)?,
                    one_pm(-1, w) * inf(-1, 6, 6, w)?,
                )?;
                Ok(a + b - dv(poly(&[(1, 1)], w), one_pm(-1, w))?)
            })),
            specialization: spec2("1", "-w", "q", 2, konst(1, 1)),
        },
        IdentityEntry {
            id: "DS4-d",
            reference: "DS4 family (d), double sum over m >= 1, n >= 0",
            lhs: double(
                4,
                2,
                &[U(1, 6, 6, -1), V(1, 1, 2, 0), V(1, -1, 2, 0), V(1, 2, 2, 0)],
                &[U(1, 2, 2, -1), U(1, 2, 2, 0), U(1, 2, 2, 0), V(1, 6, 6, 0)],
            ),
            readings: vec![
                Reading {
                    label: "product: q(q;q)(q^-1;q^2) times (1+q+q^2)(q^6;q^6)",
                    rhs: build(move |w| {
                        let mid = frac(1, 3, w)
                            * poly(&[(1, 1)], w)
                            * inf(1, 1, 1, w)?
                            * inf(1, -1, 2, w)?
                            * one_pm(1, w)
                            * inf(1, 6, 6, w)?;
                        Ok(third(w)? + mid - dv(poly(&[(1, 1)], w), one_pm(1, w))?)
                    }),
                },
                Reading {
                    label: "quotient: q(q;q)(q^-1;q^2) over (1+q+q^2)(q^6;q^6)",
                    rhs: build(move |w| Ok(third(w)? + ds4d_mid(w)? - dv(poly(&[(1, 1)], w), one_pm(1, w))?)),
                },
                Reading {
                    label: "quotient, with (q,q^3;q^2)/(q^2;q^2)^2 as the first term",
                    rhs: build(move |w| {
                        let first = dv(frac(1, 3, w) * inf(1, 1, 2, w)? * inf(1, 3, 2, w)?, inf(1, 2, 2, w)?.pow(2))?;
                        Ok(first + ds4d_mid(w)? - dv(poly(&[(1, 1)], w), one_pm(1, w))?)
                    }),
                },
            ],
            specialization: spec2("1", "w", "q", 2, konst(1, 3)),
        },
    ]
}

fn ds4b_rest(first: LaurentSeries, w: i64) -> Result<LaurentSeries> {
    let one_m = poly(&[(0, 1), (1, -1), (2, 1)], w);
    let mid = dv(
        poly(&[(1, 1)], w) * inf(-1, 6, 6, w)?,
        one_m.clone() * inf(-1, 2, 2, w)? * inf(1, 3, 2, w)? * inf(1, 1, 2, w)?,
    )?;
    let tail = dv(poly(&[(0, 1), (1, -2), (2, 1)], w), one_m)?;
    Ok(first - mid - tail)
}

fn ds4d_mid(w: i64) -> Result<LaurentSeries> {
    dv(
        frac(1, 3, w) * poly(&[(1, 1)], w) * inf(1, 1, 1, w)? * inf(1, -1, 2, w)?,
        poly(&[(0, 1), (1, 1), (2, 1)], w) * inf(1, 6, 6, w)?,
    )
}

// ---- verification ---------------------------------------------------------

pub fn find<'a>(entries: &'a [IdentityEntry], id: &str) -> Result<&'a IdentityEntry> {
    entries
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| QsError::UnknownIdentity(id.to_string()))
}

fn exact(b: &Builder, order: i64) -> Result<LaurentSeries> {
    with_headroom(order, |w| b(w))
}

fn compare(id: &str, order: i64, start: Instant, lhs: &LaurentSeries, readings: &[(String, Result<LaurentSeries>)]) -> VerifyReport {
    let mut first = None;
    let mut err = None;
    for (label, rhs) in readings {
        match rhs {
            Ok(rhs) => match lhs.first_difference(rhs, order) {
                None => {
                    return VerifyReport {
                        id: id.to_string(),
                        order,
                        status: Status::Equal,
                        first_mismatch: None,
                        elapsed_ms: start.elapsed().as_millis() as u64,
                        reading: Some(label.clone()),
                        message: None,
                    }
                }
                Some((e, a, b)) => {
                    first.get_or_insert(Mismatch { exponent: e, lhs: a.to_string(), rhs: b.to_string() });
                }
            },
            Err(e) => {
                err.get_or_insert(e.clone());
            }
        }
    }
    match (first, err) {
        (Some(m), _) => VerifyReport {
            id: id.to_string(),
            order,
            status: Status::Mismatch,
            first_mismatch: Some(m),
            elapsed_ms: start.elapsed().as_millis() as u64,
            reading: None,
            message: None,
        },
        (None, Some(e)) => VerifyReport::error(id, order, start, &e),
        (None, None) => VerifyReport::error(id, order, start, &QsError::InvalidArgument("no readings".into())),
    }
}

/// Checks one entry; errors in the builders become `status = error`.
pub fn verify_entry(entry: &IdentityEntry, order: i64) -> VerifyReport {
    let start = Instant::now();
    let lhs = match exact(&entry.lhs, order) {
        Ok(l) => l,
        Err(e) => return VerifyReport::error(entry.id, order, start, &e),
    };
    let readings: Vec<(String, Result<LaurentSeries>)> = entry
        .readings
        .iter()
        .map(|r| (r.label.to_string(), exact(&r.rhs, order)))
        .collect();
    compare(entry.id, order, start, &lhs, &readings)
}

/// Only the printed reading, for documenting where the statement fails.
pub fn verify_printed(id: &str, order: i64) -> Result<VerifyReport> {
    let reg = registry();
    let entry = find(&reg, id)?;
    let start = Instant::now();
    let lhs = exact(&entry.lhs, order)?;
    let rhs = vec![(entry.readings[0].label.to_string(), exact(entry.rhs(), order))];
    Ok(compare(entry.id, order, start, &lhs, &rhs))
}

pub fn verify(id: &str, order: i64) -> Result<VerifyReport> {
    check_order(order)?;
    let reg = registry();
    Ok(verify_entry(find(&reg, id)?, order))
}

fn check_order(order: i64) -> Result<()> {
    if order < 1 {
        return Err(QsError::InvalidArgument(format!("order must be >= 1, got {order}")));
    }
    Ok(())
}

/// Verifies `entries`, reports sorted by id whether or not run in parallel.
pub fn verify_entries(entries: &[IdentityEntry], order: i64, parallel: bool) -> Vec<VerifyReport> {
    let mut out: Vec<VerifyReport> = if parallel {
        entries.par_iter().map(|e| verify_entry(e, order)).collect()
    } else {
        entries.iter().map(|e| verify_entry(e, order)).collect()
    };
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

pub fn verify_all(order: i64, parallel: bool) -> Result<Vec<VerifyReport>> {
    check_order(order)?;
    Ok(verify_entries(&registry(), order, parallel))
}

/// Replays the proof: the left side rebuilt from the corollaries' product
/// sides at the recorded specialization, against the literal left side.
pub fn derivation_entry(entry: &IdentityEntry, order: i64) -> Result<VerifyReport> {
    let path = entry
        .specialization
        .clone()
        .ok_or_else(|| QsError::MissingSpecialization(entry.id.to_string()))?;
    let start = Instant::now();
    let lhs = match exact(&entry.lhs, order) {
        Ok(l) => l,
        Err(e) => return Ok(VerifyReport::error(entry.id, order, start, &e)),
    };
    let derived = with_headroom(order, |w| {
        let f = vwp::corollary_k2_rhs(&path.y, &path.z, &path.base, w)?;
        let inner = match (&path.shape, &path.x) {
            (Shape::Single, _) => f - LaurentSeries::one(w),
            (Shape::Double, Some(x)) => vwp::corollary_k3_rhs(x, &path.y, &path.z, &path.base, w)? - f,
            (Shape::Double, None) => return Err(QsError::MissingSpecialization(entry.id.to_string())),
        };
        Ok((path.prefactor)(w)? * inner)
    });
    Ok(compare(entry.id, order, start, &lhs, &[("derivation".to_string(), derived)]))
}

pub fn derivation_check(id: &str, order: i64) -> Result<VerifyReport> {
    check_order(order)?;
    let reg = registry();
    derivation_entry(find(&reg, id)?, order)
}

/// Test fixture: the registry with `id`'s right sides shifted by `q^exponent`.
pub fn with_corrupted_rhs(mut entries: Vec<IdentityEntry>, id: &str, exponent: i64) -> Vec<IdentityEntry> {
    for e in entries.iter_mut().filter(|e| e.id == id) {
        for r in e.readings.iter_mut() {
            let inner = r.rhs.clone();
            r.rhs = build(move |w| Ok(inner(w)? + LaurentSeries::monomial(CycRat::one(), exponent, w)));
        }
    }
    entries
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_shape() {
        let reg = registry();
        assert_eq!(reg.len(), 32);
        let mut ids: Vec<&str> = reg.iter().map(|e| e.id).collect();
        ids.dedup();
        assert_eq!(ids.len(), 32);
        let a1 = find(&reg, "A1-a").unwrap();
        assert!(a1.reference.contains("A1 family"));
        assert!(matches!(find(&reg, "nope"), Err(QsError::UnknownIdentity(_))));
    }

    #[test]
    fn a1_b_leading_coefficient() {
        let reg = registry();
        let rhs = (find(&reg, "A1-b").unwrap().rhs())(5).unwrap();
        assert_eq!(rhs.coeff(1).unwrap(), CycRat::one());
    }

    #[test]
    fn every_entry_holds_at_order_20() {
        for r in verify_all(20, true).unwrap() {
            assert_eq!(r.status, Status::Equal, "{} {:?} {:?}", r.id, r.first_mismatch, r.message);
        }
    }

    #[test]
    fn printed_typos_fail() {
        for id in ["A2-b", "DS4-a", "DS4-b"] {
            let r = verify_printed(id, 20).unwrap();
            assert_eq!(r.status, Status::Mismatch, "{id}");
        }
        let r = verify("DS4-d", 20).unwrap();
        assert_eq!(r.reading.as_deref(), Some("quotient, with (q,q^3;q^2)/(q^2;q^2)^2 as the first term"));
        let r = verify("Bprime-a", 20).unwrap();
        assert_eq!(r.reading.as_deref(), Some("printed"));
    }

    #[test]
    fn derivations_hold() {
        let reg = registry();
        for e in reg.iter().filter(|e| e.specialization.is_some()) {
            let r = derivation_entry(e, 20).unwrap();
            assert_eq!(r.status, Status::Equal, "{} {:?} {:?}", r.id, r.first_mismatch, r.message);
        }
        assert!(matches!(derivation_check("Bailey-3psi3", 10), Err(QsError::MissingSpecialization(_))));
    }

    #[test]
    fn fault_injection_yields_one_mismatch() {
        let entries = with_corrupted_rhs(registry(), "A1-c", 7);
        let reports = verify_entries(&entries, 12, false);
        let bad: Vec<_> = reports.iter().filter(|r| r.status != Status::Equal).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].id, "A1-c");
        assert_eq!(bad[0].first_mismatch.as_ref().unwrap().exponent, 7);
    }
}
