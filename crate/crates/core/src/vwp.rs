//! The very-well-poised multisum engine.
//!
//! For parameters `b_1..b_k` and a base `p` the multisum
//!
//! ```text
//! sum_{m_1..m_{k-1} >= 0} p^{sum (k-i) m_i}
//!     prod_{j=1}^{k-1} (b_{j+1}, 1/b_{j+1}; p)_{s_j} / (p b_j, p/b_j; p)_{s_j},
//!     s_j = m_1 + ... + m_j
//! ```
//!
//! equals `(p b_k, p/b_k; p)_inf prod_i (1-b_i)(1-1/b_i) sum_i A_{k,i} / (b_i, 1/b_i; p)_inf`
//! where the `A_{k,i}` are rational functions of the `b_i` built from
//! `C(z, y) = 1/(z + 1/z - y - 1/y)`. This module evaluates both sides and the
//! bilateral and finite-N sums used to cross-check them.

use std::collections::HashMap;

use crate::coeffring::CycRat;
use crate::error::{QsError, Result};
use crate::laurent::{poch_infinite, LaurentSeries, ParamValue};
use crate::sums::{double_sum, single_sum, terms_to, with_headroom, Poch, Summand};

/// Specialized parameters `b_1..b_k` together with the Pochhammer base.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamVector {
    items: Vec<ParamValue>,
    base: ParamValue,
}

impl ParamVector {
    /// Parameters over the base `q`.
    pub fn new(items: Vec<ParamValue>) -> Result<Self> {
        Self::with_base(items, ParamValue::q())
    }

    /// Rejects any `b` with `b p^n = 1` or `p^n / b = 1` for some `n >= 1`,
    /// since `(p b, p/b; p)` sits in every denominator.
    pub fn with_base(items: Vec<ParamValue>, base: ParamValue) -> Result<Self> {
        if items.is_empty() {
            return Err(QsError::InvalidArgument("parameter vector must be nonempty".into()));
        }
        if base.exp < 1 {
            return Err(QsError::InvalidBase(base.exp));
        }
        for (i, b) in items.iter().enumerate() {
            for v in [b.clone(), b.inv()] {
                if let Some(n) = hits_one(&v, &base) {
                    return Err(QsError::ZeroFactor {
                        index: i + 1,
                        factor: v.times(&base.pow(n)).to_string(),
                    });
                }
            }
        }
        Ok(ParamVector { items, base })
    }

    pub fn k(&self) -> usize {
        self.items.len()
    }

    pub fn items(&self) -> &[ParamValue] {
        &self.items
    }

    pub fn base(&self) -> &ParamValue {
        &self.base
    }
}

/// The `n >= 1` with `v * base^n = 1`, if any.
fn hits_one(v: &ParamValue, base: &ParamValue) -> Option<i64> {
    if v.exp % base.exp != 0 {
        return None;
    }
    let n = -v.exp / base.exp;
    (n >= 1 && v.times(&base.pow(n)).is_one()).then_some(n)
}

/// `z + 1/z` as an exact Laurent polynomial.
fn sym(z: &ParamValue, order: i64) -> LaurentSeries {
    &z.to_series(order) + &z.inv().to_series(order)
}

/// `C(z, y) = 1/(z + 1/z - y - 1/y)`, exact below `order`.
pub fn c_helper(z: &ParamValue, y: &ParamValue, order: i64) -> Result<LaurentSeries> {
    let span = z.exp.abs().max(y.exp.abs()) + 1;
    let den = &sym(z, span) - &sym(y, span);
    if den.is_zero() {
        return Err(QsError::DegenerateC { z: z.to_string(), y: y.to_string() });
    }
    with_headroom(order, |w| {
        let den = &sym(z, w + 2 * span) - &sym(y, w + 2 * span);
        den.truncated(w + 2 * span).inv().map(|s| s.truncated(w))
    })
}

/// `(1-y)(1-1/y)(1-z)(1-1/z)`, exact below `order`.
pub fn d_helper(z: &ParamValue, y: &ParamValue, order: i64) -> LaurentSeries {
    let pad = z.exp.abs() + y.exp.abs();
    let w = order + pad;
    let mut s = LaurentSeries::one(w);
    for v in [y.clone(), y.inv(), z.clone(), z.inv()] {
        s = s.mul_binomial(&v.coeff, v.exp);
    }
    s.truncated(order)
}

/// `(1 - b)(1 - 1/b)`, exact.
fn well_poised_pair(b: &ParamValue, order: i64) -> LaurentSeries {
    let w = order + b.exp.abs();
    LaurentSeries::one(w)
        .mul_binomial(&b.coeff, b.exp)
        .mul_binomial(&b.inv().coeff, -b.exp)
        .truncated(order)
}

/// Memoized `A_{k,i}` values, keyed by the parameter list they were taken at.
///
/// Confined to one evaluation; not shared across threads.
pub struct ACoeffTable {
    order: i64,
    c: HashMap<(ParamValue, ParamValue), LaurentSeries>,
    entries: HashMap<(Vec<ParamValue>, usize), LaurentSeries>,
}

impl ACoeffTable {
    pub fn new(order: i64) -> Self {
        ACoeffTable { order, c: HashMap::new(), entries: HashMap::new() }
    }

    fn c(&mut self, z: &ParamValue, y: &ParamValue) -> Result<LaurentSeries> {
        let key = (z.clone(), y.clone());
        if let Some(v) = self.c.get(&key) {
            return Ok(v.clone());
        }
        let v = c_helper(z, y, self.order)?;
        self.c.insert(key, v.clone());
        Ok(v)
    }

    /// `A_{k,i}(b)` with `k = b.len()` and `1 <= i <= k`.
    pub fn get(&mut self, b: &[ParamValue], i: usize) -> Result<LaurentSeries> {
        let k = b.len();
        if i == 0 || i > k {
            return Err(QsError::InvalidArgument(format!("A_{{{k},{i}}} needs 1 <= i <= k")));
        }
        if k == 1 {
            return Ok(LaurentSeries::one(self.order));
        }
        let key = (b.to_vec(), i);
        if let Some(v) = self.entries.get(&key) {
            return Ok(v.clone());
        }
        let c = self.c(&b[k - 1], &b[k - 2])?;
        let head = &b[..k - 1];
        let mut swapped = b[..k - 2].to_vec();
        swapped.push(b[k - 1].clone());
        let v = if i == k {
            &c * &self.get(&swapped, k - 1)?
        } else if i == k - 1 {
            -(&c * &self.get(head, k - 1)?)
        } else {
            let diff = &self.get(&swapped, i)? - &self.get(head, i)?;
            &c * &diff
        };
        self.entries.insert(key, v.clone());
        Ok(v)
    }
}

/// `A_{k,i}(b_1..b_k)`, exact below `order`.
pub fn a_coeff(k: usize, i: usize, params: &ParamVector, order: i64) -> Result<LaurentSeries> {
    if k != params.k() {
        return Err(QsError::InvalidArgument(format!("k = {k} but {} parameters given", params.k())));
    }
    with_headroom(order, |w| ACoeffTable::new(w).get(params.items(), i))
}

/// The `j`-th factor `p^s (b_{j+1}, 1/b_{j+1}; p)_s / (p b_j, p/b_j; p)_s` (1-based `j`).
fn level_summand(params: &ParamVector, j: usize) -> Summand {
    let p = params.base().clone();
    let (lo, hi) = (&params.items[j - 1], &params.items[j]);
    Summand::new(ParamValue::q_pow(0), p.clone())
        .num(Poch::finite(hi.clone(), p.clone(), 0))
        .num(Poch::finite(hi.inv(), p.clone(), 0))
        .den(Poch::finite(p.times(lo), p.clone(), 0))
        .den(Poch::finite(p.times(&lo.inv()), p.clone(), 0))
}

/// Left side of the multisum identity.
///
/// Summing over the nondecreasing partial sums `s_1 <= ... <= s_{k-1}`
/// factorizes the summand, so suffix sums give the whole multisum level by
/// level: `H_{k-1}(t) = sum_{s>=t} g_{k-1}(s)`, `H_j(t) = sum_{s>=t} g_j(s) H_{j+1}(s)`.
pub fn lhs_multisum(params: &ParamVector, order: i64) -> Result<LaurentSeries> {
    with_headroom(order, |w| multisum_at(params, w))
}

fn multisum_at(params: &ParamVector, w: i64) -> Result<LaurentSeries> {
    let k = params.k();
    if k == 1 {
        return Ok(LaurentSeries::one(w));
    }
    let levels: Vec<Summand> = (1..k).map(|j| level_summand(params, j)).collect();
    // every tuple with s_1 >= t has valuation >= t*e + budget
    let budget: i64 = levels.iter().map(|s| s.valuation_bound(0)).sum();
    let e = params.base().exp;
    let end = if budget >= w { 0 } else { (w - budget + e - 1) / e };
    if end == 0 {
        return Ok(LaurentSeries::zero(w));
    }
    let mut suffix: Option<Vec<LaurentSeries>> = None;
    for g in levels.iter().rev() {
        let terms = terms_to(g, 0, end, w)?;
        let mut h = vec![LaurentSeries::zero(w); terms.len() + 1];
        for s in (0..terms.len()).rev() {
            let t = match &suffix {
                Some(inner) => &terms[s] * &inner[s],
                None => terms[s].clone(),
            };
            h[s] = &t + &h[s + 1];
        }
        suffix = Some(h);
    }
    Ok(suffix.map(|h| h[0].clone()).unwrap_or_else(|| LaurentSeries::zero(w)))
}

/// Right side of the multisum identity.
///
/// `(b, 1/b; p)_inf = (1-b)(1-1/b)(p b, p/b; p)_inf` cancels against the
/// prefactor, which keeps `b_i = 1` finite.
pub fn rhs_products(params: &ParamVector, order: i64) -> Result<LaurentSeries> {
    with_headroom(order, |w| {
        let p = params.base();
        let b = params.items();
        let k = b.len();
        let mut table = ACoeffTable::new(w);
        let pairs: Vec<LaurentSeries> = b.iter().map(|x| well_poised_pair(x, w)).collect();
        let mut total = LaurentSeries::zero(w);
        for i in 0..k {
            let mut t = table.get(b, i + 1)?;
            for (j, pair) in pairs.iter().enumerate() {
                if j != i {
                    t = &t * pair;
                }
            }
            t = t.div_poch_inf(&p.times(&b[i]), p)?.div_poch_inf(&p.times(&b[i].inv()), p)?;
            total = &total + &t;
        }
        total
            .mul_poch_inf(&p.times(&b[k - 1]), p)?
            .mul_poch_inf(&p.times(&b[k - 1].inv()), p)
    })
}

fn sign(n: i64) -> CycRat {
    CycRat::from_int(if n % 2 == 0 { 1 } else { -1 })
}

/// Bilateral sum `F_k = sum_{n in Z} (-1)^n p^{n(n+1)/2 + (k-1)n} / prod_i (1 - b_i p^n)(1 - p^n/b_i)`.
///
/// Denominator factors never lower the valuation, so term `n` is dropped
/// once `e * (n(n+1)/2 + (k-1)n) >= order`, checked on both tails.
pub fn f_bilateral(params: &ParamVector, order: i64) -> Result<LaurentSeries> {
    let p = params.base();
    let k = params.k() as i64;
    let weight = |n: i64| p.exp * (n * (n + 1) / 2 + (k - 1) * n);
    let term = |n: i64| -> Result<LaurentSeries> {
        let mono = p.pow(n * (n + 1) / 2 + (k - 1) * n);
        let mut t = LaurentSeries::monomial(&sign(n) * &mono.coeff, mono.exp, order);
        for (i, b) in params.items().iter().enumerate() {
            for v in [b.times(&p.pow(n)), b.inv().times(&p.pow(n))] {
                if v.is_one() {
                    return Err(QsError::ZeroFactor { index: i + 1, factor: v.to_string() });
                }
                t = t.div_binomial(&v.coeff, v.exp)?;
            }
        }
        Ok(t.truncated(order))
    };
    let mut acc = LaurentSeries::zero(order);
    let mut n = 0;
    while weight(n) < order {
        acc = &acc + &term(n)?;
        n += 1;
    }
    // weight is a convex quadratic; it stays below `order` until past its minimum
    let mut n = -1;
    while weight(n) < order || n > -k {
        acc = &acc + &term(n)?;
        n -= 1;
    }
    Ok(acc)
}

/// Finite-N sum `L_{k,N}` at `a = 1`.
///
/// Uses `p^{Nn} (p^{-N}; p)_n = (-1)^n p^{n(n-1)/2} (p^{N-n+1}; p)_n`, which
/// keeps every factor at nonnegative exponent.
pub fn l_finite_n(params: &ParamVector, big_n: usize, order: i64) -> Result<LaurentSeries> {
    let n_max = Some(big_n as i64);
    l_sum(params, n_max, order)
}

/// Limit of `L_{k,N}` as `N` grows: `1 + prod_i (1-b_i)(1-1/b_i) * sum_{n>=1} (1+p^n) (-1)^n p^{n(n+1)/2+(k-1)n} / prod_i (...)`.
pub fn l_limit(params: &ParamVector, order: i64) -> Result<LaurentSeries> {
    l_sum(params, None, order)
}

fn l_sum(params: &ParamVector, big_n: Option<i64>, order: i64) -> Result<LaurentSeries> {
    with_headroom(order, |w| {
        let p = params.base();
        let k = params.k() as i64;
        let mut acc = LaurentSeries::zero(w);
        let mut n = 1i64;
        loop {
            if big_n.is_some_and(|bn| n > bn) || p.exp * (n * (n + 1) / 2 + (k - 1) * n) >= w {
                break;
            }
            let mono = p.pow(n * (n + 1) / 2 + (k - 1) * n);
            let mut t = LaurentSeries::monomial(&sign(n) * &mono.coeff, mono.exp, w);
            let pn = p.pow(n);
            t = t.mul_binomial(&(-&pn.coeff), pn.exp);
            for (i, b) in params.items().iter().enumerate() {
                for v in [b.times(&pn), b.inv().times(&pn)] {
                    if v.is_one() {
                        return Err(QsError::ZeroFactor { index: i + 1, factor: v.to_string() });
                    }
                    t = t.div_binomial(&v.coeff, v.exp)?;
                }
            }
            if let Some(bn) = big_n {
                t = t.mul_poch(&p.pow(bn - n + 1), p, n as usize)?;
                t = t.div_poch(&p.pow(bn + 1), p, n as usize)?;
            }
            acc = &acc + &t;
            n += 1;
        }
        for b in params.items() {
            acc = &acc * &well_poised_pair(b, w);
        }
        Ok(&acc + &LaurentSeries::one(w))
    })
}

fn poch_pair_inf(u: &ParamValue, p: &ParamValue, order: i64) -> Result<LaurentSeries> {
    Ok(&poch_infinite(&p.times(u), p, order)? * &poch_infinite(&p.times(&u.inv()), p, order)?)
}

/// `(p u, p/u; p)_inf` for `num` over the same for `den`.
fn pair_ratio(num: &ParamValue, den: &ParamValue, p: &ParamValue, order: i64) -> Result<LaurentSeries> {
    poch_pair_inf(num, p, order)?
        .div_poch_inf(&p.times(den), p)?
        .div_poch_inf(&p.times(&den.inv()), p)
}

/// `sum_{n>=0} p^n (z, 1/z; p)_n / (p y, p/y; p)_n`, summed directly.
pub fn f_sum(y: &ParamValue, z: &ParamValue, base: &ParamValue, order: i64) -> Result<LaurentSeries> {
    let s = Summand::new(ParamValue::q_pow(0), base.clone())
        .num(Poch::finite(z.clone(), base.clone(), 0))
        .num(Poch::finite(z.inv(), base.clone(), 0))
        .den(Poch::finite(base.times(y), base.clone(), 0))
        .den(Poch::finite(base.times(&y.inv()), base.clone(), 0));
    with_headroom(order, |w| single_sum(&s, 0, w))
}

/// `sum_{m,n>=0} p^{2m+n} (y,1/y;p)_m (z,1/z;p)_{m+n} / ((p x, p/x;p)_m (p y, p/y;p)_{m+n})`, summed directly.
pub fn k_sum(x: &ParamValue, y: &ParamValue, z: &ParamValue, base: &ParamValue, order: i64) -> Result<LaurentSeries> {
    let p = base.clone();
    let row = |m: i64| {
        let len = m as usize;
        Summand::new(p.pow(2 * m), p.clone())
            .num(Poch::fixed(y.clone(), p.clone(), len))
            .num(Poch::fixed(y.inv(), p.clone(), len))
            .num(Poch::finite(z.clone(), p.clone(), m))
            .num(Poch::finite(z.inv(), p.clone(), m))
            .den(Poch::fixed(p.times(x), p.clone(), len))
            .den(Poch::fixed(p.times(&x.inv()), p.clone(), len))
            .den(Poch::finite(p.times(y), p.clone(), m))
            .den(Poch::finite(p.times(&y.inv()), p.clone(), m))
    };
    with_headroom(order, |w| double_sum(row, 0, w))
}

/// Both sides of the `k = 2` case with `q` replaced by `base`:
/// `F(y, z) = C(z, y) ((1-y)(1-1/y) - (z, 1/z; p)_inf / (p y, p/y; p)_inf)`.
pub fn corollary_k2(
    y: &ParamValue,
    z: &ParamValue,
    base: &ParamValue,
    order: i64,
) -> Result<(LaurentSeries, LaurentSeries)> {
    let rhs = corollary_k2_rhs(y, z, base, order)?;
    Ok((f_sum(y, z, base, order)?, rhs))
}

/// Product side of [`corollary_k2`].
pub fn corollary_k2_rhs(y: &ParamValue, z: &ParamValue, base: &ParamValue, order: i64) -> Result<LaurentSeries> {
    c_helper(z, y, 1)?;
    with_headroom(order, |w| {
        let c = c_helper(z, y, w)?;
        let ratio = poch_infinite(z, base, w)?
            .mul_poch_inf(&z.inv(), base)?
            .div_poch_inf(&base.times(y), base)?
            .div_poch_inf(&base.times(&y.inv()), base)?;
        Ok(&c * &(&well_poised_pair(y, w) - &ratio))
    })
}

/// Both sides of the `k = 3` case with `q` replaced by `base`.
pub fn corollary_k3(
    x: &ParamValue,
    y: &ParamValue,
    z: &ParamValue,
    base: &ParamValue,
    order: i64,
) -> Result<(LaurentSeries, LaurentSeries)> {
    let rhs = corollary_k3_rhs(x, y, z, base, order)?;
    Ok((k_sum(x, y, z, base, order)?, rhs))
}

/// Product side of [`corollary_k3`].
pub fn corollary_k3_rhs(
    x: &ParamValue,
    y: &ParamValue,
    z: &ParamValue,
    base: &ParamValue,
    order: i64,
) -> Result<LaurentSeries> {
    for (a, b) in [(z, y), (z, x), (y, x)] {
        c_helper(a, b, 1)?;
    }
    with_headroom(order, |w| {
        let (czy, czx, cyx) = (c_helper(z, y, w)?, c_helper(z, x, w)?, c_helper(y, x, w)?);
        let t1 = &(&d_helper(x, y, w) * &czy) * &czx;
        let t2 = &(&(&d_helper(x, z, w) * &czy) * &cyx) * &pair_ratio(z, y, base, w)?;
        let t3 = &(&(&d_helper(y, z, w) * &czy) * &(&cyx - &czx)) * &pair_ratio(z, x, base, w)?;
        Ok(&(&t1 - &t2) + &t3)
    })
}

/// `sum_{n in Z} (b, 1/b; q)_n / (b q, q/b; q)_n (-1)^n q^{n(n+1)/2}` and
/// `(q; q)_inf^2 / (q b, q/b; q)_inf`.
///
/// Negative lengths use `(a; q)_{-m} = 1/(a q^{-m}; q)_m`.
pub fn bailey_3psi3_check(b: &ParamValue, order: i64) -> Result<(LaurentSeries, LaurentSeries)> {
    let q = ParamValue::q();
    if hits_one(b, &q).is_some() || hits_one(&b.inv(), &q).is_some() || b.is_one() {
        return Err(QsError::ZeroFactor { index: 0, factor: b.to_string() });
    }
    // the ratio equals (1-b)(1-1/b) / ((1-b q^n)(1-q^n/b)), of valuation >= -|b.exp|
    let slack = b.exp.abs();
    let weight = |n: i64| n * (n + 1) / 2 - slack;
    let (bi, bq, qbi) = (b.inv(), q.times(b), q.times(&b.inv()));
    let term = |n: i64, w: i64| -> Result<LaurentSeries> {
        let mut t = LaurentSeries::monomial(sign(n), n * (n + 1) / 2, w);
        if n >= 0 {
            let len = n as usize;
            t = t.mul_poch(b, &q, len)?.mul_poch(&bi, &q, len)?;
            t = t.div_poch(&bq, &q, len)?.div_poch(&qbi, &q, len)?;
        } else {
            let (len, back) = ((-n) as usize, q.pow(n));
            t = t.div_poch(&b.times(&back), &q, len)?.div_poch(&bi.times(&back), &q, len)?;
            t = t.mul_poch(&bq.times(&back), &q, len)?.mul_poch(&qbi.times(&back), &q, len)?;
        }
        Ok(t)
    };
    let lhs = with_headroom(order, |w| {
        let mut acc = LaurentSeries::zero(w);
        let mut n = 0;
        while weight(n) < w {
            acc = &acc + &term(n, w)?;
            n += 1;
        }
        let mut n = -1;
        while weight(n) < w {
            acc = &acc + &term(n, w)?;
            n -= 1;
        }
        Ok(acc)
    })?;
    let rhs = with_headroom(order, |w| {
        let qq = poch_infinite(&q, &q, w)?;
        (&qq * &qq).div_poch_inf(&bq, &q)?.div_poch_inf(&qbi, &q)
    })?;
    Ok((lhs, rhs))
}

/// The five series of the `K = F(x,y) F(y,z) - L + diagonal` relation.
#[derive(Clone, Debug)]
pub struct KlReport {
    pub order: i64,
    pub k: LaurentSeries,
    pub l: LaurentSeries,
    pub f_xy: LaurentSeries,
    pub f_yz: LaurentSeries,
    pub diagonal: LaurentSeries,
}

impl KlReport {
    pub fn lhs(&self) -> LaurentSeries {
        self.k.clone()
    }

    pub fn rhs(&self) -> LaurentSeries {
        &(&(&self.f_xy * &self.f_yz) - &self.l) + &self.diagonal
    }

    /// First exponent below the common order where the two sides differ.
    pub fn first_mismatch(&self) -> Option<i64> {
        let (lhs, rhs) = (self.lhs(), self.rhs());
        let order = lhs.order().min(rhs.order());
        lhs.first_difference(&rhs, order).map(|(e, _, _)| e)
    }

    pub fn holds(&self) -> bool {
        self.rhs().order() >= self.order && self.first_mismatch().is_none()
    }
}

/// Builds every piece of the K/L relation in base `q` from its own sum.
pub fn kl_relation_check(x: &ParamValue, y: &ParamValue, z: &ParamValue, order: i64) -> Result<KlReport> {
    let q = ParamValue::q();
    let pad = order + 8;
    let k = k_sum(x, y, z, &q, order)?;
    // L swaps the roles: outer factor in (z; y), inner in (y; x)
    let row = |n: i64| {
        let len = n as usize;
        Summand::new(q.pow(2 * n), q.clone())
            .num(Poch::fixed(z.clone(), q.clone(), len))
            .num(Poch::fixed(z.inv(), q.clone(), len))
            .num(Poch::finite(y.clone(), q.clone(), n))
            .num(Poch::finite(y.inv(), q.clone(), n))
            .den(Poch::fixed(q.times(y), q.clone(), len))
            .den(Poch::fixed(q.times(&y.inv()), q.clone(), len))
            .den(Poch::finite(q.times(x), q.clone(), n))
            .den(Poch::finite(q.times(&x.inv()), q.clone(), n))
    };
    let l = with_headroom(order, |w| double_sum(row, 0, w))?;
    let diag = Summand::new(ParamValue::q_pow(0), q.pow(2))
        .num(Poch::finite(y.clone(), q.clone(), 0))
        .num(Poch::finite(y.inv(), q.clone(), 0))
        .num(Poch::finite(z.clone(), q.clone(), 0))
        .num(Poch::finite(z.inv(), q.clone(), 0))
        .den(Poch::finite(q.times(x), q.clone(), 0))
        .den(Poch::finite(q.times(&x.inv()), q.clone(), 0))
        .den(Poch::finite(q.times(y), q.clone(), 0))
        .den(Poch::finite(q.times(&y.inv()), q.clone(), 0));
    let diagonal = with_headroom(order, |w| single_sum(&diag, 0, w))?;
    // the product loses precision if either factor has negative valuation
    let f_xy = f_sum(x, y, &q, pad)?;
    let f_yz = f_sum(y, z, &q, pad)?;
    Ok(KlReport { order, k, l, f_xy, f_yz, diagonal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Rat;

    fn pv(s: &str) -> ParamValue {
        s.parse().unwrap()
    }

    fn konst(n: i64, d: i64) -> LaurentSeries {
        LaurentSeries::constant(CycRat::from_rat(Rat::new(n, d)), 30)
    }

    fn params(s: &[&str]) -> ParamVector {
        ParamVector::new(s.iter().map(|x| pv(x)).collect()).unwrap()
    }

    #[test]
    fn c_and_d_constants() {
        assert_eq!(c_helper(&pv("w"), &pv("-1"), 30).unwrap(), konst(1, 1));
        assert_eq!(c_helper(&pv("w"), &pv("1"), 30).unwrap(), konst(-1, 3));
        assert_eq!(d_helper(&pv("w"), &pv("-1"), 30), konst(12, 1));
        assert_eq!(d_helper(&pv("-w"), &pv("-1"), 30), konst(4, 1));
        assert!(d_helper(&pv("w"), &pv("1"), 30).is_zero());
        assert!(d_helper(&pv("q"), &pv("1"), 30).is_zero());
    }

    #[test]
    fn c_with_q_round_trips() {
        let c = c_helper(&pv("w"), &pv("q"), 30).unwrap();
        let den = LaurentSeries::from_terms([(-1, CycRat::from_int(-1)), (0, CycRat::from_int(-1)), (1, CycRat::from_int(-1))], 40);
        assert_eq!((&c * &den).exact_to(29).unwrap(), LaurentSeries::one(29));
        assert_eq!(c.order(), 30);
    }

    #[test]
    fn degenerate_c() {
        for (z, y) in [("w", "w"), ("w", "-1-w"), ("q", "q^-1"), ("-1", "-1")] {
            assert!(matches!(c_helper(&pv(z), &pv(y), 10), Err(QsError::DegenerateC { .. })), "{z} {y}");
        }
    }

    #[test]
    fn param_vector_rejects_zero_factors() {
        assert!(matches!(ParamVector::new(vec![pv("q^-2")]), Err(QsError::ZeroFactor { index: 1, .. })));
        assert!(matches!(ParamVector::new(vec![pv("w"), pv("q^3")]), Err(QsError::ZeroFactor { index: 2, .. })));
        assert!(ParamVector::with_base(vec![pv("q")], ParamValue::q_pow(2)).is_ok());
        assert!(ParamVector::new(vec![pv("1"), pv("w*q^-1")]).is_ok());
    }

    #[test]
    fn a_coeff_small_cases() {
        let one = params(&["w*q"]);
        assert_eq!(a_coeff(1, 1, &one, 20).unwrap(), LaurentSeries::one(20));
        let yz = params(&["-1", "w"]);
        let c = c_helper(&pv("w"), &pv("-1"), 20).unwrap();
        assert_eq!(a_coeff(2, 2, &yz, 20).unwrap(), c);
        assert_eq!(a_coeff(2, 1, &yz, 20).unwrap(), -c);
        assert!(a_coeff(3, 1, &yz, 20).is_err());
    }

    #[test]
    fn multisum_k1_and_k2() {
        let p = params(&["-1"]);
        assert_eq!(lhs_multisum(&p, 20).unwrap(), LaurentSeries::one(20));
        assert_eq!(rhs_products(&p, 20).unwrap(), LaurentSeries::one(20));
        // sum q^n (w, 1/w; q)_n / (-q, -q; q)_n = 1 + 3q - 3q^2 + ...
        let p = params(&["-1", "w"]);
        let got = lhs_multisum(&p, 4).unwrap();
        let want = f_sum(&pv("-1"), &pv("w"), &ParamValue::q(), 4).unwrap();
        assert_eq!(got, want);
        assert_eq!(got.coeff(0).unwrap(), CycRat::one());
        assert_eq!(got.coeff(1).unwrap(), CycRat::from_int(3));
        assert_eq!(got.coeff(2).unwrap(), CycRat::from_int(-3));
        assert_eq!(rhs_products(&p, 20).unwrap(), lhs_multisum(&p, 20).unwrap());
    }

    #[test]
    fn multisum_k3_matches_double_sum() {
        let p = params(&["1", "w", "-w"]);
        let lhs = lhs_multisum(&p, 30).unwrap();
        let k = k_sum(&pv("1"), &pv("w"), &pv("-w"), &ParamValue::q(), 30).unwrap();
        assert_eq!(lhs, k);
        assert_eq!(rhs_products(&p, 30).unwrap(), lhs);
    }

    #[test]
    fn multisum_k4_and_q_params() {
        let p = params(&["-1", "w", "1", "-w"]);
        assert_eq!(lhs_multisum(&p, 20).unwrap(), rhs_products(&p, 20).unwrap());
        let p = ParamVector::with_base(vec![pv("1"), pv("q"), pv("w")], ParamValue::q_pow(2)).unwrap();
        assert_eq!(lhs_multisum(&p, 25).unwrap(), rhs_products(&p, 25).unwrap());
    }

    #[test]
    fn corollaries_hold() {
        let q = ParamValue::q();
        let (l, r) = corollary_k2(&pv("-1"), &pv("w"), &q, 40).unwrap();
        assert_eq!(l, r);
        let (l, r) = corollary_k2(&pv("q"), &pv("w"), &ParamValue::q_pow(2), 40).unwrap();
        assert_eq!(l, r);
        assert!(matches!(corollary_k2(&pv("w"), &pv("w"), &q, 10), Err(QsError::DegenerateC { .. })));
        let (l, r) = corollary_k3(&pv("1"), &pv("w"), &pv("-w"), &q, 30).unwrap();
        assert_eq!(l, r);
        let (l, r) = corollary_k3(&pv("1"), &pv("q"), &pv("w"), &ParamValue::q_pow(2), 30).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn bilateral_basic_and_recurrence() {
        let q = ParamValue::q();
        let f1 = f_bilateral(&params(&["-1"]), 30).unwrap();
        let qq = poch_infinite(&q, &q, 30).unwrap();
        let want = (&qq * &qq).div_poch_inf(&pv("-1"), &q).unwrap().div_poch_inf(&pv("-1"), &q).unwrap();
        assert_eq!(f1, want);
        let f2 = f_bilateral(&params(&["w", "-1"]), 30).unwrap();
        let fw = f_bilateral(&params(&["w"]), 30).unwrap();
        let c = c_helper(&pv("-1"), &pv("w"), 30).unwrap();
        assert_eq!(f2, &c * &(&f1 - &fw));
    }

    #[test]
    fn finite_n_stabilizes() {
        let p = params(&["-1", "w"]);
        assert_eq!(l_finite_n(&p, 0, 20).unwrap(), LaurentSeries::one(20));
        let lim = l_limit(&p, 20).unwrap();
        for n in 20..=24 {
            assert_eq!(l_finite_n(&p, n, 20).unwrap(), lim);
        }
        let f = f_bilateral(&p, 20).unwrap();
        let pairs = &well_poised_pair(&pv("-1"), 20) * &well_poised_pair(&pv("w"), 20);
        assert_eq!(lim, &pairs * &f);
    }

    #[test]
    fn bailey_pairs() {
        for b in ["-1", "w", "-w"] {
            let (l, r) = bailey_3psi3_check(&pv(b), 40).unwrap();
            assert_eq!(l, r, "b = {b}");
        }
    }

    #[test]
    fn kl_relation() {
        for (x, y, z) in [("1", "-1", "w"), ("-1", "w", "-w")] {
            let rep = kl_relation_check(&pv(x), &pv(y), &pv(z), 30).unwrap();
            assert!(rep.holds(), "{x} {y} {z}: {:?}", rep.first_mismatch());
        }
    }
}
