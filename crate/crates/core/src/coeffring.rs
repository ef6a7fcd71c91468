//! Exact coefficients: arbitrary-precision rationals and the quadratic field
//! Q(w), where w is a primitive cube root of unity (w^2 + w + 1 = 0).
//!
//! Elements of Q(w) are kept in the basis {1, w}, so equality is
//! component-wise equality of two reduced rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{QsError, Result};

/// A reduced rational number with arbitrary-precision numerator and a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`; panics when `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(QsError::DivisionByZero);
        }
        Ok(Rat(BigRational::new(num, den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(QsError::DivisionByZero);
        }
        Ok(Rat(self.0.recip()))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut acc = Rat::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        Ok(acc)
    }

    /// Converts to an `i64` when the value is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.is_integer() {
            return None;
        }
        i64::try_from(self.0.numer()).ok()
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = QsError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt> {
            let t = t.trim();
            let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(QsError::Parse(format!("not an integer: `{t}`")));
            }
            t.parse::<BigInt>()
                .map_err(|e| QsError::Parse(format!("`{t}`: {e}")))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let den = parse_int(d)?;
                if den.is_zero() {
                    return Err(QsError::Parse("zero denominator".into()));
                }
                Rat::from_big(parse_int(n)?, den)
            }
            None => Ok(Rat::from(parse_int(s)?)),
        }
    }
}

macro_rules! forward_binop {
    ($ty:ident, $trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl $trait<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a $ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<$ty> for &'a $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                self.$method(&rhs)
            }
        }
        impl<'a> $assign_trait<&'a $ty> for $ty {
            fn $assign_method(&mut self, rhs: &'a $ty) {
                *self = (&*self).$method(rhs);
            }
        }
        impl $assign_trait<$ty> for $ty {
            fn $assign_method(&mut self, rhs: $ty) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

impl<'b> Add<&'b Rat> for &Rat {
    type Output = Rat;
    fn add(self, rhs: &'b Rat) -> Rat {
        Rat(&self.0 + &rhs.0)
    }
}

impl<'b> Sub<&'b Rat> for &Rat {
    type Output = Rat;
    fn sub(self, rhs: &'b Rat) -> Rat {
        Rat(&self.0 - &rhs.0)
    }
}

impl<'b> Mul<&'b Rat> for &Rat {
    type Output = Rat;
    fn mul(self, rhs: &'b Rat) -> Rat {
        Rat(&self.0 * &rhs.0)
    }
}

forward_binop!(Rat, Add, add, AddAssign, add_assign);
forward_binop!(Rat, Sub, sub, SubAssign, sub_assign);
forward_binop!(Rat, Mul, mul, MulAssign, mul_assign);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

/// An element `a + b*w` of Q(w).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CycRat {
    pub a: Rat,
    pub b: Rat,
}

impl CycRat {
    pub fn new(a: Rat, b: Rat) -> Self {
        CycRat { a, b }
    }

    pub fn zero() -> Self {
        CycRat::new(Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        CycRat::new(Rat::one(), Rat::zero())
    }

    /// The cube root of unity `w`.
    pub fn omega() -> Self {
        CycRat::new(Rat::zero(), Rat::one())
    }

    /// `w^2 = w^-1 = -1 - w`.
    pub fn omega_inv() -> Self {
        CycRat::new(Rat::from_int(-1), Rat::from_int(-1))
    }

    pub fn from_int(n: i64) -> Self {
        CycRat::new(Rat::from_int(n), Rat::zero())
    }

    pub fn from_rat(r: Rat) -> Self {
        CycRat::new(r, Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The Galois conjugate `w -> w^2`: `(a - b) - b*w`.
    pub fn conj(&self) -> Self {
        CycRat::new(&self.a - &self.b, -&self.b)
    }

    /// `x * conj(x) = a^2 - ab + b^2`.
    pub fn norm(&self) -> Rat {
        &(&self.a * &self.a) - &(&(&self.a * &self.b) - &(&self.b * &self.b))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(QsError::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(CycRat::from_rat(self.a.inv()?));
        }
        let n = self.norm().inv()?;
        let c = self.conj();
        Ok(CycRat::new(&c.a * &n, &c.b * &n))
    }

    pub fn scale(&self, r: &Rat) -> Self {
        CycRat::new(&self.a * r, &self.b * r)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = CycRat::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }
}

impl From<Rat> for CycRat {
    fn from(r: Rat) -> Self {
        CycRat::from_rat(r)
    }
}

impl From<i64> for CycRat {
    fn from(n: i64) -> Self {
        CycRat::from_int(n)
    }
}

impl<'b> Add<&'b CycRat> for &CycRat {
    type Output = CycRat;
    fn add(self, rhs: &'b CycRat) -> CycRat {
        CycRat::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'b> Sub<&'b CycRat> for &CycRat {
    type Output = CycRat;
    fn sub(self, rhs: &'b CycRat) -> CycRat {
        CycRat::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'b> Mul<&'b CycRat> for &CycRat {
    type Output = CycRat;
    fn mul(self, rhs: &'b CycRat) -> CycRat {
        // (a + bw)(c + dw) = (ac - bd) + (ad + bc - bd)w
        if self.b.is_zero() {
            return rhs.scale(&self.a);
        }
        if rhs.b.is_zero() {
            return self.scale(&rhs.a);
        }
        let bd = &self.b * &rhs.b;
        let a = &(&self.a * &rhs.a) - &bd;
        let b = &(&(&self.a * &rhs.b) + &(&self.b * &rhs.a)) - &bd;
        CycRat::new(a, b)
    }
}

impl<'b> Div<&'b CycRat> for &CycRat {
    type Output = Result<CycRat>;
    // division is multiplication by the inverse
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &'b CycRat) -> Result<CycRat> {
        Ok(self * &rhs.inv()?)
    }
}

forward_binop!(CycRat, Add, add, AddAssign, add_assign);
forward_binop!(CycRat, Sub, sub, SubAssign, sub_assign);
forward_binop!(CycRat, Mul, mul, MulAssign, mul_assign);

impl Neg for CycRat {
    type Output = CycRat;
    fn neg(self) -> CycRat {
        CycRat::new(-self.a, -self.b)
    }
}

impl Neg for &CycRat {
    type Output = CycRat;
    fn neg(self) -> CycRat {
        CycRat::new(-&self.a, -&self.b)
    }
}

impl fmt::Display for CycRat {
    /// Renders as `a`, `b*w` or `a+b*w` (`a-b*w` for negative `b`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*w", self.b),
            (false, false) if self.b.is_negative() => write!(f, "{}-{}*w", self.a, self.b.abs()),
            (false, false) => write!(f, "{}+{}*w", self.a, self.b),
        }
    }
}

impl fmt::Debug for CycRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for CycRat {
    type Err = QsError;

    /// Parses the forms produced by `Display`: `a`, `b*w`, `w`, `-w`, `a+b*w`, `a-b*w`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(QsError::Parse("empty coefficient".into()));
        }
        let Some(body) = s.strip_suffix('w') else {
            return Ok(CycRat::from_rat(s.parse()?));
        };
        // split off the w-term: find the last sign that is not at position 0
        let split = body
            .char_indices()
            .rev()
            .find(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i);
        let (a_part, w_part) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let w_coeff = match w_part.strip_suffix('*') {
            Some(c) => {
                let c = c.strip_prefix('+').unwrap_or(c);
                if c.is_empty() || c == "-" {
                    return Err(QsError::Parse(format!("missing coefficient before `*w` in `{s}`")));
                }
                c.parse::<Rat>()?
            }
            None => match w_part {
                "" | "+" => Rat::one(),
                "-" => Rat::from_int(-1),
                _ => return Err(QsError::Parse(format!("malformed w-term in `{s}`"))),
            },
        };
        let a = if a_part.is_empty() { Rat::zero() } else { a_part.parse()? };
        Ok(CycRat::new(a, w_coeff))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(a: (i64, i64), b: (i64, i64)) -> CycRat {
        CycRat::new(Rat::new(a.0, a.1), Rat::new(b.0, b.1))
    }

    #[test]
    fn add_examples() {
        assert_eq!(CycRat::one() + CycRat::omega(), c((1, 1), (1, 1)));
        let w = CycRat::omega();
        let w2 = &w * &w;
        assert_eq!(&w + &w2, CycRat::from_int(-1));
        assert_eq!(c((1, 2), (1, 3)) + c((1, 2), (-1, 3)), CycRat::one());
    }

    #[test]
    fn mul_examples() {
        let w = CycRat::omega();
        assert_eq!(&w * &w, c((-1, 1), (-1, 1)));
        assert_eq!(&w * &(&w * &w), CycRat::one());
        let one_minus_w = CycRat::one() - &w;
        let one_minus_winv = CycRat::one() - CycRat::omega_inv();
        assert_eq!(one_minus_w * one_minus_winv, CycRat::from_int(3));
    }

    #[test]
    fn inv_examples() {
        assert_eq!(CycRat::omega().inv().unwrap(), CycRat::omega_inv());
        assert_eq!(CycRat::from_int(2).inv().unwrap(), c((1, 2), (0, 1)));
        let x = CycRat::one() - CycRat::omega();
        assert_eq!(x.inv().unwrap(), c((2, 3), (1, 3)));
        assert_eq!(CycRat::zero().inv(), Err(QsError::DivisionByZero));
    }

    #[test]
    fn cube_root_relations() {
        let w = CycRat::omega();
        assert_eq!(w.pow(3).unwrap(), CycRat::one());
        assert!((CycRat::one() + &w + w.pow(2).unwrap()).is_zero());
        assert_eq!(w.pow(-1).unwrap(), CycRat::omega_inv());
    }

    #[test]
    fn display_and_parse() {
        for (v, s) in [
            (c((1, 1), (1, 1)), "1+1*w"),
            (c((-1, 2), (-3, 1)), "-1/2-3*w"),
            (c((0, 1), (2, 3)), "2/3*w"),
            (c((7, 1), (0, 1)), "7"),
        ] {
            assert_eq!(v.to_string(), s);
            assert_eq!(s.parse::<CycRat>().unwrap(), v);
        }
        assert_eq!("w".parse::<CycRat>().unwrap(), CycRat::omega());
        assert_eq!("-1-w".parse::<CycRat>().unwrap(), CycRat::omega_inv());
        assert!("1/0".parse::<CycRat>().is_err());
        assert!("*w".parse::<CycRat>().is_err());
        assert!("1+".parse::<CycRat>().is_err());
    }
}
