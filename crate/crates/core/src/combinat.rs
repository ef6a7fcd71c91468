//! Overpartitions and overpartition pairs by brute force, with the A(n)
//! statistics and the generating functions they are checked against.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::catalog::{Mismatch, Status, VerifyReport};
use crate::coeffring::CycRat;
use crate::error::{QsError, Result};
use crate::laurent::{poch_infinite, LaurentSeries, ParamValue};
use crate::sums::{single_sum, Poch, Summand};

/// Enumeration stops here; larger weights are reported from series only.
pub const MAX_N: u32 = 30;
/// Largest weight of a single overpartition.
pub const MAX_WEIGHT: u32 = u32::MAX / 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Part {
    pub value: u32,
    pub overlined: bool,
}

impl Part {
    pub fn plain(value: u32) -> Self {
        Part { value, overlined: false }
    }

    pub fn over(value: u32) -> Self {
        Part { value, overlined: true }
    }
}

/// Parts kept in canonical order: descending, overlined before plain at equal value.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Overpartition {
    parts: Vec<Part>,
}

impl Overpartition {
    /// Fails if an overlined value repeats, or if the weight exceeds
    /// [`MAX_WEIGHT`] (so a pair's weight always fits in `u32`).
    pub fn new(mut parts: Vec<Part>) -> Result<Self> {
        if parts.iter().any(|p| p.value == 0) {
            return Err(QsError::InvalidArgument("parts must be positive".into()));
        }
        if parts.iter().map(|p| u64::from(p.value)).sum::<u64>() > u64::from(MAX_WEIGHT) {
            return Err(QsError::InvalidArgument(format!("weight exceeds {MAX_WEIGHT}")));
        }
        parts.sort_by(|a, b| b.value.cmp(&a.value).then(b.overlined.cmp(&a.overlined)));
        if parts.windows(2).any(|w| w[0] == w[1] && w[0].overlined) {
            return Err(QsError::InvalidArgument("overlined parts must be distinct".into()));
        }
        Ok(Overpartition { parts })
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().map(|p| p.value).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Non-overlined parts distinct as well.
    pub fn has_distinct_parts(&self) -> bool {
        !self.parts.windows(2).any(|w| w[0] == w[1])
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn num_plain(&self) -> usize {
        self.parts.iter().filter(|p| !p.overlined).count()
    }

    /// Smallest part, reported overlined if any copy of it is.
    pub fn smallest(&self) -> Option<Part> {
        let v = self.parts.last()?.value;
        Some(Part { value: v, overlined: self.parts.iter().any(|p| p.value == v && p.overlined) })
    }
}

impl fmt::Display for Overpartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self
            .parts
            .iter()
            .map(|p| if p.overlined { format!("{}~", p.value) } else { p.value.to_string() })
            .collect();
        f.write_str(&s.join(","))
    }
}

impl FromStr for Overpartition {
    type Err = QsError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Overpartition::default());
        }
        let parts = s
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                let (digits, overlined) = match tok.strip_suffix('~') {
                    Some(d) => (d, true),
                    None => (tok, false),
                };
                let value: u32 = digits.parse().map_err(|_| QsError::Parse(format!("bad part `{tok}`")))?;
                Ok(Part { value, overlined })
            })
            .collect::<Result<Vec<_>>>()?;
        Overpartition::new(parts).map_err(|e| QsError::Parse(e.to_string()))
    }
}

/// `(lambda_1, lambda_2)`, rendered as `first|second`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OverpartitionPair {
    pub first: Overpartition,
    pub second: Overpartition,
}

impl OverpartitionPair {
    pub fn weight(&self) -> u32 {
        self.first.weight() + self.second.weight()
    }

    pub fn num_parts(&self) -> usize {
        self.first.num_parts() + self.second.num_parts()
    }

    pub fn num_plain(&self) -> usize {
        self.first.num_plain() + self.second.num_plain()
    }

    /// Membership in the class counted by `A(n)`.
    pub fn is_a_pair(&self) -> bool {
        let Some(s) = self.first.smallest() else {
            return false;
        };
        s.overlined
            && self.first.has_distinct_parts()
            && self.second.has_distinct_parts()
            && self.second.parts().iter().all(|p| {
                if p.overlined {
                    p.value > s.value
                } else {
                    p.value % 3 == 0 && u64::from(p.value) < 3 * u64::from(s.value)
                }
            })
    }
}

impl fmt::Display for OverpartitionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.first, self.second)
    }
}

impl FromStr for OverpartitionPair {
    type Err = QsError;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .trim()
            .split_once('|')
            .ok_or_else(|| QsError::Parse(format!("missing `|` in `{s}`")))?;
        if b.contains('|') {
            return Err(QsError::Parse(format!("more than one `|` in `{s}`")));
        }
        Ok(OverpartitionPair { first: a.parse()?, second: b.parse()? })
    }
}

/// Parses one pair per nonblank line.
pub fn parse_pairs(text: &str) -> Result<Vec<OverpartitionPair>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(str::parse).collect()
}

/// One pair per line in canonical order.
pub fn render_pairs(pairs: &[OverpartitionPair]) -> String {
    pairs.iter().map(|p| format!("{p}\n")).collect()
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(QsError::InvalidArgument("n must be >= 1".into()));
    }
    if n > MAX_N {
        return Err(QsError::InvalidArgument(format!("enumeration is capped at n = {MAX_N}")));
    }
    Ok(())
}

/// Distinct subsets of `cands` (ascending) with sum at most `budget`, with their sums.
fn subsets(cands: &[u32], budget: u32) -> Vec<(Vec<u32>, u32)> {
    fn go(cands: &[u32], budget: u32, cur: &mut Vec<u32>, sum: u32, out: &mut Vec<(Vec<u32>, u32)>) {
        out.push((cur.clone(), sum));
        for (i, &c) in cands.iter().enumerate() {
            if sum + c > budget {
                break;
            }
            cur.push(c);
            go(&cands[i + 1..], budget, cur, sum + c, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(cands, budget, &mut Vec::new(), 0, &mut out);
    out
}

fn tag(values: &[u32], overlined: bool) -> impl Iterator<Item = Part> + '_ {
    values.iter().map(move |&value| Part { value, overlined })
}

/// All pairs counted by `A(n)`, sorted canonically.
///
/// `lambda_1` is the overlined minimum `s` plus overlined parts `> s` and
/// plain parts `>= s`; `lambda_2` has overlined parts `> s` and plain parts
/// among `3, 6, .. < 3s`. The four sets are chosen independently.
pub fn enumerate_pairs_a(n: u32) -> Result<Vec<OverpartitionPair>> {
    check_n(n)?;
    let mut out = Vec::new();
    for s in 1..=n {
        let rest = n - s;
        let above: Vec<u32> = (s + 1..=rest).collect();
        let from_s: Vec<u32> = (s..=rest).collect();
        let threes: Vec<u32> = (1..s).map(|k| 3 * k).filter(|&v| v <= rest).collect();
        let o1 = subsets(&above, rest);
        let n1 = subsets(&from_s, rest);
        let o2 = subsets(&above, rest);
        let n2 = subsets(&threes, rest);
        for (a, sa) in &o1 {
            for (b, sb) in n1.iter().filter(|(_, x)| sa + x <= rest) {
                for (c, sc) in o2.iter().filter(|(_, x)| sa + sb + x <= rest) {
                    for (d, _) in n2.iter().filter(|(_, x)| sa + sb + sc + x == rest) {
                        let first = Overpartition::new(
                            std::iter::once(Part::over(s)).chain(tag(a, true)).chain(tag(b, false)).collect(),
                        )?;
                        let second = Overpartition::new(tag(c, true).chain(tag(d, false)).collect())?;
                        out.push(OverpartitionPair { first, second });
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AStats {
    pub n: u32,
    pub a: u64,
    /// Even number of non-overlined parts, both components together.
    pub a0: u64,
    pub a1: u64,
    /// Even number of parts, both components together.
    pub a2: u64,
    pub a3: u64,
    pub aprime: i64,
    pub adblprime: i64,
}

pub fn a_stats(n: u32) -> Result<AStats> {
    let pairs = enumerate_pairs_a(n)?;
    let a0 = pairs.iter().filter(|p| p.num_plain() % 2 == 0).count() as u64;
    let a2 = pairs.iter().filter(|p| p.num_parts() % 2 == 0).count() as u64;
    let a = pairs.len() as u64;
    let (a1, a3) = (a - a0, a - a2);
    Ok(AStats { n, a, a0, a1, a2, a3, aprime: a0 as i64 - a1 as i64, adblprime: a3 as i64 - a2 as i64 })
}

/// `sum_{n>=1} q^n (q^n;q)_inf (sign q^{n+1};q)_inf^2 (q^3;q^3)_{n-1}`.
fn a_series(sign: i64, order: i64) -> Result<LaurentSeries> {
    let q = ParamValue::q();
    let s = ParamValue::new(CycRat::from_int(sign), 1)?;
    let summand = Summand::new(ParamValue::q_pow(0), q.clone())
        .num(Poch::tail(ParamValue::q_pow(0), q.clone()))
        .num(Poch::tail(s.clone(), q.clone()))
        .num(Poch::tail(s, q.clone()))
        .num(Poch::finite(ParamValue::q_pow(3), ParamValue::q_pow(3), -1));
    single_sum(&summand, 1, order)
}

fn enumerated_check(id: &str, order: i64, count: impl Fn(u32) -> Result<i64>, series: LaurentSeries) -> Result<VerifyReport> {
    let start = Instant::now();
    let mut first_mismatch = None;
    for n in 1..order {
        let got = CycRat::from_int(count(n as u32)?);
        let want = series.coeff(n)?;
        if got != want {
            first_mismatch = Some(Mismatch { exponent: n, lhs: got.to_string(), rhs: want.to_string() });
            break;
        }
    }
    Ok(VerifyReport {
        id: id.to_string(),
        order,
        status: if first_mismatch.is_some() { Status::Mismatch } else { Status::Equal },
        first_mismatch,
        elapsed_ms: start.elapsed().as_millis() as u64,
        reading: None,
        message: None,
    })
}

fn check_gf_order(order: i64) -> Result<()> {
    if !(2..=MAX_N as i64 + 1).contains(&order) {
        return Err(QsError::InvalidArgument(format!("order must lie in 2..={}", MAX_N + 1)));
    }
    Ok(())
}

/// Enumerated `A'(n)` against its generating function for `1 <= n < order`.
pub fn gf_check_aprime(order: i64) -> Result<VerifyReport> {
    check_gf_order(order)?;
    enumerated_check("gen-Aprime", order, |n| Ok(a_stats(n)?.aprime), a_series(-1, order)?)
}

/// Enumerated `A''(n)` against its generating function for `1 <= n < order`.
pub fn gf_check_adblprime(order: i64) -> Result<VerifyReport> {
    check_gf_order(order)?;
    enumerated_check("gen-Adblprime", order, |n| Ok(a_stats(n)?.adblprime), a_series(1, order)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Overpartitions,
    OverpartitionsDistinct,
    Pairs,
    PairsDistinct,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Overpartitions,
        Family::OverpartitionsDistinct,
        Family::Pairs,
        Family::PairsDistinct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Overpartitions => "overpartitions",
            Family::OverpartitionsDistinct => "overpartitions_distinct",
            Family::Pairs => "pairs",
            Family::PairsDistinct => "pairs_distinct",
        }
    }

    fn distinct(self) -> bool {
        matches!(self, Family::OverpartitionsDistinct | Family::PairsDistinct)
    }

    fn paired(self) -> bool {
        matches!(self, Family::Pairs | Family::PairsDistinct)
    }
}

impl FromStr for Family {
    type Err = QsError;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| QsError::Parse(format!("unknown family `{s}`")))
    }
}

/// Generating function of `family` to `order`.
pub fn count_series(family: Family, order: i64) -> Result<LaurentSeries> {
    let q = ParamValue::q();
    let minus_q = q.neg();
    let num = poch_infinite(&minus_q, &q, order)?;
    let single = if family.distinct() { &num * &num } else { num.div_poch_inf(&q, &q)? };
    Ok(if family.paired() { &single * &single } else { single })
}

/// All overpartitions of `n` (distinct-parts ones only if `distinct`).
pub fn overpartitions(n: u32, distinct: bool) -> Vec<Overpartition> {
    fn go(n: u32, max: u32, distinct: bool, cur: &mut Vec<Part>, out: &mut Vec<Overpartition>) {
        if n == 0 {
            out.push(Overpartition { parts: cur.clone() });
            return;
        }
        for v in (1..=max.min(n)).rev() {
            for k in 1..=n / v {
                // k copies of v; the first one may be overlined
                for over in [true, false] {
                    let plain = k - u32::from(over);
                    if distinct && plain > 1 {
                        continue;
                    }
                    let len = cur.len();
                    if over {
                        cur.push(Part::over(v));
                    }
                    cur.extend(std::iter::repeat_n(Part::plain(v), plain as usize));
                    go(n - k * v, v - 1, distinct, cur, out);
                    cur.truncate(len);
                }
            }
        }
    }
    let mut out = Vec::new();
    go(n, n, distinct, &mut Vec::new(), &mut out);
    out
}

/// Count of `family` objects of weight `n`, by enumeration.
pub fn enumerate_count(family: Family, n: u32) -> Result<u64> {
    if n > MAX_N {
        return Err(QsError::InvalidArgument(format!("enumeration is capped at n = {MAX_N}")));
    }
    let d = family.distinct();
    if !family.paired() {
        return Ok(overpartitions(n, d).len() as u64);
    }
    let sizes: Vec<u64> = (0..=n).map(|k| overpartitions(k, d).len() as u64).collect();
    Ok((0..=n as usize).map(|k| sizes[k] * sizes[n as usize - k]).sum())
}

/// Enumeration against [`count_series`] for `0 <= n < min(order, 15)`.
pub fn count_check(family: Family, order: i64) -> Result<VerifyReport> {
    let start = Instant::now();
    let series = count_series(family, order)?;
    let mut first_mismatch = None;
    for n in 0..order.min(15) {
        let got = CycRat::from_int(enumerate_count(family, n as u32)? as i64);
        let want = series.coeff(n)?;
        if got != want {
            first_mismatch = Some(Mismatch { exponent: n, lhs: got.to_string(), rhs: want.to_string() });
            break;
        }
    }
    Ok(VerifyReport {
        id: format!("count-{}", family.name()),
        order,
        status: if first_mismatch.is_some() { Status::Mismatch } else { Status::Equal },
        first_mismatch,
        elapsed_ms: start.elapsed().as_millis() as u64,
        reading: None,
        message: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_of_one_and_five() {
        let p = enumerate_pairs_a(1).unwrap();
        assert_eq!(render_pairs(&p), "1~|\n");
        let s = a_stats(5).unwrap();
        assert_eq!((s.a, s.a0, s.a1, s.a2, s.a3, s.aprime, s.adblprime), (14, 7, 7, 7, 7, 0, 0));
        let s = a_stats(1).unwrap();
        assert_eq!((s.a, s.a0, s.a1, s.aprime), (1, 1, 0, 1));
        assert!(enumerate_pairs_a(0).is_err());
        assert!(enumerate_pairs_a(MAX_N + 1).is_err());
    }

    #[test]
    fn enumeration_is_duplicate_free_and_valid() {
        for n in 1..=12 {
            let pairs = enumerate_pairs_a(n).unwrap();
            let mut d = pairs.clone();
            d.dedup();
            assert_eq!(d.len(), pairs.len());
            assert!(pairs.iter().all(|p| p.is_a_pair() && p.weight() == n));
        }
    }

    #[test]
    fn stats_partition_the_count() {
        for n in 1..=20 {
            let s = a_stats(n).unwrap();
            assert_eq!(s.a, s.a0 + s.a1);
            assert_eq!(s.a, s.a2 + s.a3);
        }
    }

    #[test]
    fn generating_functions() {
        assert_eq!(gf_check_aprime(15).unwrap().status, Status::Equal);
        assert_eq!(gf_check_adblprime(15).unwrap().status, Status::Equal);
        assert_eq!(a_series(-1, 15).unwrap().coeff(5).unwrap(), CycRat::zero());
    }

    #[test]
    fn family_counts() {
        let s = count_series(Family::Overpartitions, 4).unwrap();
        let c: Vec<CycRat> = (0..4).map(|e| s.coeff(e).unwrap()).collect();
        assert_eq!(c, [1, 2, 4, 8].map(CycRat::from_int));
        assert_eq!(count_series(Family::PairsDistinct, 3).unwrap().coeff(0).unwrap(), CycRat::one());
        assert_eq!(enumerate_count(Family::Pairs, 1).unwrap(), 4);
        for f in Family::ALL {
            assert_eq!(count_check(f, 15).unwrap().status, Status::Equal, "{f:?}");
        }
    }

    #[test]
    fn pair_text_round_trip() {
        let p: OverpartitionPair = "2~,2,1~|".parse().unwrap();
        assert_eq!(p.to_string(), "2~,2,1~|");
        let p: OverpartitionPair = "1,3,1~|2~".parse().unwrap();
        assert_eq!(p.to_string(), "3,1~,1|2~");
        assert!("1~,1~|".parse::<OverpartitionPair>().is_err());
        assert!("1~".parse::<OverpartitionPair>().is_err());
        assert!("0|".parse::<OverpartitionPair>().is_err());
    }
}
