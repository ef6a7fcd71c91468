//! Term generators for hypergeometric-type sums.
//!
//! A [`Summand`] describes `t -> pre * step^t * prod(num) / prod(den)` where
//! every factor is a q-Pochhammer symbol whose length or starting point moves
//! with `t`. [`TermSeq`] walks `t = t0, t0 + 1, ...` updating the current term
//! with one binomial per factor, and knows a lower bound on the valuation of
//! every later term, which is what makes truncated sums exact.

use crate::error::{QsError, Result};
use crate::laurent::{LaurentSeries, ParamValue};

/// A Pochhammer factor of a summand.
#[derive(Clone, Debug)]
pub enum Poch {
    /// `(a; base)_{t + shift}`
    Finite { a: ParamValue, base: ParamValue, shift: i64 },
    /// `(a * base^t; base)_inf`
    Tail { a: ParamValue, base: ParamValue },
    /// `(a; base)_len`, independent of `t`
    Fixed { a: ParamValue, base: ParamValue, len: usize },
}

impl Poch {
    pub fn finite(a: ParamValue, base: ParamValue, shift: i64) -> Self {
        Poch::Finite { a, base, shift }
    }

    pub fn tail(a: ParamValue, base: ParamValue) -> Self {
        Poch::Tail { a, base }
    }

    pub fn fixed(a: ParamValue, base: ParamValue, len: usize) -> Self {
        Poch::Fixed { a, base, len }
    }

    fn parts(&self) -> (&ParamValue, &ParamValue) {
        match self {
            Poch::Finite { a, base, .. } | Poch::Tail { a, base } | Poch::Fixed { a, base, .. } => (a, base),
        }
    }

    /// Sum of the negative exponents among all binomials this factor can
    /// ever contain (a lower bound on its valuation for every `t >= 0`).
    fn negative_budget(&self) -> i64 {
        let (a, base) = self.parts();
        let mut total = 0;
        let mut e = a.exp;
        while e < 0 {
            total += e;
            e += base.exp;
        }
        total
    }

    /// Binomial `c q^e` gained (finite) or lost (tail) when moving from `t` to `t + 1`.
    fn step_factor(&self, t: i64) -> Option<ParamValue> {
        match self {
            Poch::Finite { a, base, shift } => Some(a.times(&base.pow(t + shift))),
            Poch::Tail { a, base } => Some(a.times(&base.pow(t))),
            Poch::Fixed { .. } => None,
        }
    }
}

/// `pre * step^t * prod(num) / prod(den)`.
#[derive(Clone, Debug)]
pub struct Summand {
    pub pre: ParamValue,
    pub step: ParamValue,
    pub num: Vec<Poch>,
    pub den: Vec<Poch>,
}

impl Summand {
    pub fn new(pre: ParamValue, step: ParamValue) -> Self {
        Summand { pre, step, num: Vec::new(), den: Vec::new() }
    }

    pub fn num(mut self, p: Poch) -> Self {
        self.num.push(p);
        self
    }

    pub fn den(mut self, p: Poch) -> Self {
        self.den.push(p);
        self
    }

    /// Lower bound on the valuation of the term at index `t`.
    ///
    /// Denominator binomials never lower the valuation: `1/(1 - c q^e)` has
    /// valuation `0` for `e >= 0` and `-e > 0` otherwise.
    pub fn valuation_bound(&self, t: i64) -> i64 {
        self.pre.exp + self.step.exp * t + self.num.iter().map(Poch::negative_budget).sum::<i64>()
    }

    /// Smallest `t >= t0` from which every term vanishes below `order`.
    pub fn cutoff(&self, t0: i64, order: i64) -> i64 {
        let at0 = self.valuation_bound(t0);
        if at0 >= order {
            return t0;
        }
        let w = self.step.exp;
        t0 + (order - at0 + w - 1) / w
    }

    fn check(&self) -> Result<()> {
        if self.step.exp < 1 {
            return Err(QsError::InvalidArgument(format!(
                "summation step {} does not raise the q-exponent",
                self.step
            )));
        }
        for p in self.num.iter().chain(&self.den) {
            let base = p.parts().1;
            if base.exp < 1 {
                return Err(QsError::InvalidBase(base.exp));
            }
        }
        Ok(())
    }
}

/// Iterator-like walk over the terms of a [`Summand`].
pub struct TermSeq<'a> {
    summand: &'a Summand,
    t: i64,
    order: i64,
    term: LaurentSeries,
}

impl<'a> TermSeq<'a> {
    pub fn new(summand: &'a Summand, t0: i64, order: i64) -> Result<Self> {
        summand.check()?;
        let mut term = LaurentSeries::one(order);
        for p in &summand.num {
            term = match p {
                Poch::Finite { a, base, shift } => term.mul_poch(a, base, finite_len(t0, *shift)?)?,
                Poch::Tail { a, base } => term.mul_poch_inf(&a.times(&base.pow(t0)), base)?,
                Poch::Fixed { a, base, len } => term.mul_poch(a, base, *len)?,
            };
        }
        for p in &summand.den {
            term = match p {
                Poch::Finite { a, base, shift } => term.div_poch(a, base, finite_len(t0, *shift)?)?,
                Poch::Tail { a, base } => term.div_poch_inf(&a.times(&base.pow(t0)), base)?,
                Poch::Fixed { a, base, len } => term.div_poch(a, base, *len)?,
            };
        }
        let term = term
            .mul_monomial(&summand.pre.times(&summand.step.pow(t0)))
            .truncated(order);
        Ok(TermSeq { summand, t: t0, order, term })
    }

    pub fn index(&self) -> i64 {
        self.t
    }

    pub fn term(&self) -> &LaurentSeries {
        &self.term
    }

    pub fn advance(&mut self) -> Result<()> {
        let t = self.t;
        let mut term = self.term.mul_monomial(&self.summand.step);
        for p in &self.summand.num {
            let Some(f) = p.step_factor(t) else { continue };
            term = match p {
                Poch::Tail { .. } => term.div_binomial(&f.coeff, f.exp)?,
                _ => term.mul_binomial(&f.coeff, f.exp),
            };
        }
        for p in &self.summand.den {
            let Some(f) = p.step_factor(t) else { continue };
            term = match p {
                Poch::Finite { .. } | Poch::Fixed { .. } => {
                    if f.is_one() {
                        return Err(QsError::ZeroFactor { index: (t + 1) as usize, factor: f.to_string() });
                    }
                    term.div_binomial(&f.coeff, f.exp)?
                }
                Poch::Tail { .. } => term.mul_binomial(&f.coeff, f.exp),
            };
        }
        self.term = term.truncated(self.order);
        self.t += 1;
        Ok(())
    }
}

fn finite_len(t: i64, shift: i64) -> Result<usize> {
    usize::try_from(t + shift)
        .map_err(|_| QsError::InvalidArgument(format!("negative Pochhammer length {}", t + shift)))
}

/// Terms `t0, t0+1, ...` up to the cutoff, as a vector.
pub fn terms(summand: &Summand, t0: i64, order: i64) -> Result<Vec<LaurentSeries>> {
    let end = summand.cutoff(t0, order);
    let mut out = Vec::with_capacity((end - t0).max(0) as usize);
    if end <= t0 {
        return Ok(out);
    }
    let mut seq = TermSeq::new(summand, t0, order)?;
    loop {
        out.push(seq.term().clone());
        if seq.index() + 1 >= end {
            break;
        }
        seq.advance()?;
    }
    Ok(out)
}

/// `sum_{t >= t0}` of the summand, exact below `order` (up to precision
/// lost to negative valuations, which the result's order reports).
pub fn single_sum(summand: &Summand, t0: i64, order: i64) -> Result<LaurentSeries> {
    let mut acc = LaurentSeries::zero(order);
    for term in terms(summand, t0, order)? {
        acc = &acc + &term;
    }
    Ok(acc)
}

/// `sum_{m >= m0} sum_{n >= 0} row(m)(n)`, one [`Summand`] per row.
///
/// Rows are visited until `row(m).valuation_bound(0)` reaches `order`; the
/// caller's rows must have that bound nondecreasing in `m`.
pub fn double_sum<F>(row: F, m0: i64, order: i64) -> Result<LaurentSeries>
where
    F: Fn(i64) -> Summand,
{
    let mut acc = LaurentSeries::zero(order);
    for m in m0.. {
        let s = row(m);
        if s.valuation_bound(0) >= order {
            break;
        }
        acc = &acc + &single_sum(&s, 0, order)?;
    }
    Ok(acc)
}

/// Terms `t0 .. end` (at least one).
pub fn terms_to(summand: &Summand, t0: i64, end: i64, order: i64) -> Result<Vec<LaurentSeries>> {
    let mut out = Vec::new();
    let mut seq = TermSeq::new(summand, t0, order)?;
    loop {
        out.push(seq.term().clone());
        if seq.index() + 1 >= end {
            break;
        }
        seq.advance()?;
    }
    Ok(out)
}

/// Runs `build` at increasing working orders until its result is exact to
/// `order`; precision lost to negative valuations is recovered this way.
pub fn with_headroom<F>(order: i64, build: F) -> Result<LaurentSeries>
where
    F: Fn(i64) -> Result<LaurentSeries>,
{
    let mut pad = 4;
    loop {
        match build(order + pad)?.exact_to(order) {
            Err(QsError::PrecisionLoss { got, .. }) if pad < 1 << 12 => {
                pad = (2 * pad).max(order + pad - got + pad);
            }
            other => return other,
        }
    }
}
