//! Truncated Laurent series in `q` with coefficients in Q(w), plus
//! q-Pochhammer products over arbitrary monomial bases.
//!
//! A series carries an `order`: every coefficient of `q^e` with `e < order`
//! is exact, everything at or above `order` is unknown and discarded.
//! Arithmetic tracks this precision honestly, so a product with a factor of
//! negative valuation comes back with a lower order instead of silently
//! wrong high coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::coeffring::{CycRat, Rat};
use crate::error::{QsError, Result};

/// Dense truncated Laurent series `sum coeffs[i] * q^(offset + i) + O(q^order)`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    offset: i64,
    coeffs: Vec<CycRat>,
    order: i64,
}

impl LaurentSeries {
    pub fn zero(order: i64) -> Self {
        LaurentSeries { offset: 0, coeffs: Vec::new(), order }
    }

    pub fn one(order: i64) -> Self {
        Self::constant(CycRat::one(), order)
    }

    pub fn constant(c: CycRat, order: i64) -> Self {
        Self::monomial(c, 0, order)
    }

    /// `c * q^e`, truncated to `order`.
    pub fn monomial(c: CycRat, e: i64, order: i64) -> Self {
        Self::from_coeffs(e, vec![c], order)
    }

    /// Builds `sum coeffs[i] q^(offset+i)`, dropping terms at or above `order`.
    pub fn from_coeffs(offset: i64, coeffs: Vec<CycRat>, order: i64) -> Self {
        let mut s = LaurentSeries { offset, coeffs, order };
        s.normalize();
        s
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I>(terms: I, order: i64) -> Self
    where
        I: IntoIterator<Item = (i64, CycRat)>,
    {
        let terms: Vec<(i64, CycRat)> = terms.into_iter().filter(|(e, _)| *e < order).collect();
        let Some(lo) = terms.iter().map(|(e, _)| *e).min() else {
            return Self::zero(order);
        };
        let hi = terms.iter().map(|(e, _)| *e).max().unwrap_or(lo);
        let mut coeffs = vec![CycRat::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::from_coeffs(lo, coeffs, order)
    }

    fn normalize(&mut self) {
        let keep = (self.order - self.offset).clamp(0, self.coeffs.len() as i64) as usize;
        self.coeffs.truncate(keep);
        while self.coeffs.last().is_some_and(CycRat::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.offset = 0;
            }
            Some(0) => {}
            Some(k) => {
                self.coeffs.drain(..k);
                self.offset += k as i64;
            }
        }
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Lowest exponent with a nonzero coefficient; `None` for the zero series.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.offset)
    }

    /// Valuation, or the order for a series that is zero to its precision.
    fn val_or_order(&self) -> i64 {
        self.valuation().unwrap_or(self.order)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent one past the highest stored term.
    pub fn degree_bound(&self) -> i64 {
        self.offset + self.coeffs.len() as i64
    }

    pub fn coeff(&self, e: i64) -> Result<CycRat> {
        if e >= self.order {
            return Err(QsError::OrderExceeded { exponent: e, order: self.order });
        }
        Ok(self.coeff_ref(e).cloned().unwrap_or_default())
    }

    fn coeff_ref(&self, e: i64) -> Option<&CycRat> {
        let i = e - self.offset;
        if i < 0 {
            return None;
        }
        self.coeffs.get(i as usize)
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &CycRat)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.offset + i as i64, c))
    }

    /// Lowers the order to `order` (no-op if already lower).
    pub fn truncated(mut self, order: i64) -> Self {
        if order < self.order {
            self.order = order;
            self.normalize();
        }
        self
    }

    /// Truncates to exactly `order`, failing if the series is not known that far.
    pub fn exact_to(self, order: i64) -> Result<Self> {
        if self.order < order {
            return Err(QsError::PrecisionLoss { wanted: order, got: self.order });
        }
        Ok(self.truncated(order))
    }

    /// First exponent below `order` where the two series differ.
    pub fn first_difference(&self, other: &Self, order: i64) -> Option<(i64, CycRat, CycRat)> {
        let lo = self.offset.min(other.offset);
        let hi = self.degree_bound().max(other.degree_bound()).min(order);
        (lo..hi).find_map(|e| {
            let a = self.coeff_ref(e).cloned().unwrap_or_default();
            let b = other.coeff_ref(e).cloned().unwrap_or_default();
            (a != b).then_some((e, a, b))
        })
    }

    pub fn scale(&self, c: &CycRat) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        LaurentSeries {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            order: self.order,
        }
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(&CycRat::from_rat(r.clone()))
    }

    /// Exact multiplication by `q^e`; the order moves with the terms.
    pub fn shift(&self, e: i64) -> Self {
        LaurentSeries {
            offset: if self.is_zero() { 0 } else { self.offset + e },
            coeffs: self.coeffs.clone(),
            order: self.order + e,
        }
    }

    /// Multiplication by the monomial `p`.
    pub fn mul_monomial(&self, p: &ParamValue) -> Self {
        self.scale(&p.coeff).shift(p.exp)
    }

    /// `self * (1 - c q^e)` in O(len).
    pub fn mul_binomial(&self, c: &CycRat, e: i64) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        if e == 0 {
            return self.scale(&(CycRat::one() - c));
        }
        // valuation of the binomial is min(e, 0)
        let order = self.order + e.min(0);
        if self.is_zero() {
            return Self::zero(order);
        }
        let n = self.coeffs.len();
        let (offset, len) = if e > 0 {
            (self.offset, n + e as usize)
        } else {
            (self.offset + e, n + (-e) as usize)
        };
        let mut out = vec![CycRat::zero(); len];
        let (plain_at, shifted_at) = if e > 0 { (0, e as usize) } else { ((-e) as usize, 0) };
        for (i, x) in self.coeffs.iter().enumerate() {
            out[plain_at + i] += x;
            let t = x * c;
            out[shifted_at + i] -= t;
        }
        Self::from_coeffs(offset, out, order)
    }

    /// `self / (1 - c q^e)` in O(len); fails when the binomial is exactly zero.
    pub fn div_binomial(&self, c: &CycRat, e: i64) -> Result<Self> {
        if c.is_zero() {
            return Ok(self.clone());
        }
        if e == 0 {
            let d = CycRat::one() - c;
            if d.is_zero() {
                return Err(QsError::ZeroFactor { index: 0, factor: format!("{c}") });
            }
            return Ok(self.scale(&d.inv()?));
        }
        if e < 0 {
            // 1 - c q^e = -c q^e (1 - c^-1 q^-e)
            let ci = c.inv()?;
            return Ok(self.div_binomial(&ci, -e)?.scale(&-&ci).shift(-e));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let step = e as usize;
        let len = (self.order - self.offset).max(0) as usize;
        let mut out: Vec<CycRat> = Vec::with_capacity(len);
        for k in 0..len {
            let mut v = self.coeffs.get(k).cloned().unwrap_or_default();
            if k >= step && !out[k - step].is_zero() {
                v += &out[k - step] * c;
            }
            out.push(v);
        }
        Ok(Self::from_coeffs(self.offset, out, self.order))
    }

    /// Multiplicative inverse; the zero series has none.
    pub fn inv(&self) -> Result<Self> {
        let Some(v) = self.valuation() else {
            return Err(QsError::DivisionByZero);
        };
        // self = q^v (u + O(q^(order - v)))  =>  1/self = q^-v (1/u + O(q^(order - v)))
        let rel = self.order - v;
        let order = self.order.min(self.order - 2 * v);
        let n = (rel.min(order + v)).max(0) as usize;
        let lead_inv = self.coeffs[0].inv()?;
        let mut h: Vec<CycRat> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                h.push(lead_inv.clone());
                continue;
            }
            let mut acc = CycRat::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                let (cj, hk) = (&self.coeffs[j], &h[k - j]);
                if !cj.is_zero() && !hk.is_zero() {
                    acc += cj * hk;
                }
            }
            h.push(-(acc * &lead_inv));
        }
        Ok(Self::from_coeffs(-v, h, order))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `self * (a; base)_n`, one binomial at a time.
    pub fn mul_poch(&self, a: &ParamValue, base: &ParamValue, n: usize) -> Result<Self> {
        check_base(base)?;
        let mut acc = self.clone();
        let mut f = a.clone();
        for _ in 0..n {
            acc = acc.mul_binomial(&f.coeff, f.exp);
            f = f.times(base);
        }
        Ok(acc)
    }

    /// `self / (a; base)_n`; a vanishing factor is a `ZeroFactor`.
    pub fn div_poch(&self, a: &ParamValue, base: &ParamValue, n: usize) -> Result<Self> {
        check_base(base)?;
        let mut acc = self.clone();
        let mut f = a.clone();
        for j in 0..n {
            if f.is_one() {
                return Err(zero_factor(j, &f));
            }
            acc = acc.div_binomial(&f.coeff, f.exp)?;
            f = f.times(base);
        }
        Ok(acc)
    }

    /// `self * (a; base)_inf`, keeping only factors that reach below the order.
    pub fn mul_poch_inf(&self, a: &ParamValue, base: &ParamValue) -> Result<Self> {
        check_base(base)?;
        let mut acc = self.clone();
        let mut f = a.clone();
        for j in 0.. {
            if f.exp + acc.val_or_order().min(0) >= acc.order {
                break;
            }
            if f.is_one() {
                return Err(zero_factor(j, &f));
            }
            acc = acc.mul_binomial(&f.coeff, f.exp);
            f = f.times(base);
        }
        Ok(acc)
    }

    /// `self / (a; base)_inf`.
    pub fn div_poch_inf(&self, a: &ParamValue, base: &ParamValue) -> Result<Self> {
        check_base(base)?;
        let mut acc = self.clone();
        let mut f = a.clone();
        for j in 0.. {
            // 1/(1 - c q^e) = 1 + O(q^e) for e > 0
            if f.exp > 0 && f.exp + acc.val_or_order() >= acc.order {
                break;
            }
            if f.is_one() {
                return Err(zero_factor(j, &f));
            }
            acc = acc.div_binomial(&f.coeff, f.exp)?;
            f = f.times(base);
        }
        Ok(acc)
    }
}

fn check_base(base: &ParamValue) -> Result<()> {
    if base.exp < 1 {
        return Err(QsError::InvalidBase(base.exp));
    }
    Ok(())
}

fn zero_factor(index: usize, f: &ParamValue) -> QsError {
    QsError::ZeroFactor { index, factor: f.to_string() }
}

/// `(a; base)_n` truncated to `order`.
pub fn poch_finite(a: &ParamValue, base: &ParamValue, n: usize, order: i64) -> Result<LaurentSeries> {
    LaurentSeries::one(order).mul_poch(a, base, n)
}

/// `(a; base)_inf` truncated to `order`; a factor equal to zero is reported
/// as `ZeroFactor` rather than returned as a zero series.
pub fn poch_infinite(a: &ParamValue, base: &ParamValue, order: i64) -> Result<LaurentSeries> {
    LaurentSeries::one(order).mul_poch_inf(a, base)
}

/// Sum of finitely many series; the result has the smallest order.
pub fn sum_series<'a, I>(items: I, order: i64) -> LaurentSeries
where
    I: IntoIterator<Item = &'a LaurentSeries>,
{
    items.into_iter().fold(LaurentSeries::zero(order), |acc, s| &acc + s)
}

impl<'b> Add<&'b LaurentSeries> for &LaurentSeries {
    type Output = LaurentSeries;

    fn add(self, rhs: &'b LaurentSeries) -> LaurentSeries {
        let order = self.order.min(rhs.order);
        if rhs.is_zero() {
            return self.clone().truncated(order);
        }
        if self.is_zero() {
            return rhs.clone().truncated(order);
        }
        let lo = self.offset.min(rhs.offset);
        let hi = self.degree_bound().max(rhs.degree_bound()).min(order);
        if hi <= lo {
            return LaurentSeries::zero(order);
        }
        let mut out = vec![CycRat::zero(); (hi - lo) as usize];
        for s in [self, rhs] {
            for (i, c) in s.coeffs.iter().enumerate() {
                let k = s.offset + i as i64 - lo;
                if k < out.len() as i64 {
                    out[k as usize] += c;
                }
            }
        }
        LaurentSeries::from_coeffs(lo, out, order)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;

    fn neg(self) -> LaurentSeries {
        LaurentSeries {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }
}

impl<'b> Sub<&'b LaurentSeries> for &LaurentSeries {
    type Output = LaurentSeries;

    fn sub(self, rhs: &'b LaurentSeries) -> LaurentSeries {
        self + &(-rhs)
    }
}

impl<'b> Mul<&'b LaurentSeries> for &LaurentSeries {
    type Output = LaurentSeries;

    /// Cauchy product. The order is capped at the smaller input order and
    /// drops further when a factor has negative valuation.
    fn mul(self, rhs: &'b LaurentSeries) -> LaurentSeries {
        let order = self
            .order
            .min(rhs.order)
            .min(self.order + rhs.val_or_order())
            .min(rhs.order + self.val_or_order());
        if self.is_zero() || rhs.is_zero() {
            return LaurentSeries::zero(order);
        }
        let offset = self.offset + rhs.offset;
        let len = ((order - offset).max(0) as usize)
            .min(self.coeffs.len() + rhs.coeffs.len() - 1);
        let mut out = vec![CycRat::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        LaurentSeries::from_coeffs(offset, out, order)
    }
}

macro_rules! owned_ops {
    ($trait:ident, $method:ident) => {
        impl $trait<LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $method(self, rhs: LaurentSeries) -> LaurentSeries {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $method(self, rhs: &'a LaurentSeries) -> LaurentSeries {
                (&self).$method(rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        -&self
    }
}

fn fmt_coeff(c: &CycRat) -> String {
    if !c.a.is_zero() && !c.b.is_zero() {
        format!("({c})")
    } else {
        c.to_string()
    }
}

impl fmt::Display for LaurentSeries {
    /// `c0*q^e0 + c1*q^e1 + ... + O(q^order)`; two-part coefficients are
    /// parenthesised, e.g. `(1+2*w)*q^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in self.terms() {
            write!(f, "{}*q^{} + ", fmt_coeff(c), e)?;
        }
        write!(f, "O(q^{})", self.order)
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_exp(s: &str) -> Result<i64> {
    s.trim()
        .parse::<i64>()
        .map_err(|e| QsError::Parse(format!("bad exponent `{s}`: {e}")))
}

impl FromStr for LaurentSeries {
    type Err = QsError;

    /// Parses the `Display` rendering back into a series.
    fn from_str(s: &str) -> Result<Self> {
        let mut terms = Vec::new();
        let mut order = None;
        for part in s.split(" + ") {
            let part = part.trim();
            if let Some(rest) = part.strip_prefix("O(q^") {
                let Some(exp) = rest.strip_suffix(')') else {
                    return Err(QsError::Parse(format!("unterminated order term `{part}`")));
                };
                if order.replace(parse_exp(exp)?).is_some() {
                    return Err(QsError::Parse("more than one order term".into()));
                }
                continue;
            }
            if order.is_some() {
                return Err(QsError::Parse("terms after the order term".into()));
            }
            let Some((c, e)) = part.rsplit_once("*q^") else {
                return Err(QsError::Parse(format!("term `{part}` is not of the form c*q^e")));
            };
            let c = c.strip_prefix('(').and_then(|c| c.strip_suffix(')')).unwrap_or(c);
            let e = parse_exp(e)?;
            if terms.last().is_some_and(|&(prev, _)| prev >= e) {
                return Err(QsError::Parse("exponents must increase".into()));
            }
            terms.push((e, c.parse::<CycRat>()?));
        }
        let Some(order) = order else {
            return Err(QsError::Parse("missing O(q^N) term".into()));
        };
        if terms.last().is_some_and(|&(e, _)| e >= order) {
            return Err(QsError::Parse("term at or above the order".into()));
        }
        if let (Some(&(lo, _)), Some(&(hi, _))) = (terms.first(), terms.last()) {
            if hi.checked_sub(lo).is_none_or(|d| d > 1 << 20) {
                return Err(QsError::Parse("exponent range too large".into()));
            }
        }
        Ok(LaurentSeries::from_terms(terms, order))
    }
}

/// A specialization value `coeff * q^exp` for a parameter or a Pochhammer base.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamValue {
    pub coeff: CycRat,
    pub exp: i64,
}

impl ParamValue {
    pub fn new(coeff: CycRat, exp: i64) -> Result<Self> {
        if coeff.is_zero() {
            return Err(QsError::InvalidArgument("parameter coefficient must be nonzero".into()));
        }
        Ok(ParamValue { coeff, exp })
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        ParamValue { coeff: CycRat::one(), exp: e }
    }

    /// A constant; panics on zero.
    pub fn constant(c: CycRat) -> Self {
        Self::new(c, 0).expect("nonzero constant")
    }

    pub fn int(n: i64) -> Self {
        Self::constant(CycRat::from_int(n))
    }

    pub fn omega() -> Self {
        Self::constant(CycRat::omega())
    }

    pub fn omega_inv() -> Self {
        Self::constant(CycRat::omega_inv())
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0 && self.coeff.is_one()
    }

    pub fn times(&self, other: &ParamValue) -> ParamValue {
        ParamValue { coeff: &self.coeff * &other.coeff, exp: self.exp + other.exp }
    }

    pub fn inv(&self) -> ParamValue {
        ParamValue {
            coeff: self.coeff.inv().expect("nonzero by construction"),
            exp: -self.exp,
        }
    }

    pub fn neg(&self) -> ParamValue {
        ParamValue { coeff: -&self.coeff, exp: self.exp }
    }

    pub fn pow(&self, n: i64) -> ParamValue {
        ParamValue {
            coeff: self.coeff.pow(n).expect("nonzero by construction"),
            exp: self.exp * n,
        }
    }

    pub fn to_series(&self, order: i64) -> LaurentSeries {
        LaurentSeries::monomial(self.coeff.clone(), self.exp, order)
    }

    /// `1 - self` as a series.
    pub fn one_minus(&self, order: i64) -> LaurentSeries {
        LaurentSeries::one(order).mul_binomial(&self.coeff, self.exp)
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*q^{}", fmt_coeff(&self.coeff), self.exp)
    }
}

impl fmt::Debug for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ParamValue {
    type Err = QsError;

    /// Accepts `c*q^e`, `c*q`, `q^e`, `q`, `-q^e` or a bare coefficient `c`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (coeff, exp) = if let Some((c, e)) = s.rsplit_once("q^") {
            (c, parse_exp(e)?)
        } else if let Some(c) = s.strip_suffix('q') {
            (c, 1)
        } else {
            (s.as_str(), 0)
        };
        let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
        let coeff = match coeff {
            "" | "+" if s.contains('q') => CycRat::one(),
            "-" if s.contains('q') => CycRat::from_int(-1),
            c => {
                let c = c.strip_prefix('(').and_then(|c| c.strip_suffix(')')).unwrap_or(c);
                c.parse::<CycRat>()?
            }
        };
        ParamValue::new(coeff, exp).map_err(|e| QsError::Parse(e.to_string()))
    }
}
