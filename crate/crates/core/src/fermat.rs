//! Canonical elements of the ring of Fermat reals.
//!
//! A [`FermatReal`] stands for the class of the nilpotent function
//!
//! ```text
//! x(t) = r₀ + Σ r_q·|t|^q        0 < q ≤ 1, q rational
//! ```
//!
//! modulo functions that are `o(t)`. Every product term whose exponent sum
//! exceeds one is `o(t)` and is dropped, which is what makes the arithmetic
//! exact and the ring non-reduced: `|t|·|t| = 0`, `|t|^(1/2)·|t|^(1/2) = |t|`.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::exponent::ExponentQ;
use crate::format::format_significant;

/// An extended real in canonical form: standard part plus the nonzero
/// coefficients of `|t|^q`, sorted by ascending exponent.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FermatReal {
    std: f64,
    terms: Vec<(ExponentQ, f64)>,
}

impl FermatReal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(1.0)
    }

    pub fn real(r: f64) -> Self {
        FermatReal {
            std: normalize_zero(r),
            terms: Vec::new(),
        }
    }

    /// `coef·|t|^q`.
    pub fn monomial(coef: f64, q: ExponentQ) -> Self {
        let terms = if coef == 0.0 { Vec::new() } else { vec![(q, coef)] };
        FermatReal { std: 0.0, terms }
    }

    /// The canonical witness `|t|^(1/k)` of the ideal `D_k`.
    ///
    /// # Panics
    ///
    /// Panics if `k == 0`.
    pub fn witness(k: u32) -> Self {
        let q = ExponentQ::reciprocal(k).expect("D_k witness requires k >= 1");
        Self::monomial(1.0, q)
    }

    /// Builds a canonical element from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms<I>(std: f64, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentQ, f64)>,
    {
        let mut map: BTreeMap<ExponentQ, f64> = BTreeMap::new();
        for (q, c) in terms {
            *map.entry(q).or_insert(0.0) += c;
        }
        FermatReal {
            std: normalize_zero(std),
            terms: map.into_iter().filter(|&(_, c)| c != 0.0).collect(),
        }
    }

    /// The standard part `st(x) = x(0)`.
    pub fn standard_part(&self) -> f64 {
        self.std
    }

    /// Nonzero terms `(q, r_q)` in ascending exponent order.
    pub fn terms(&self) -> &[(ExponentQ, f64)] {
        &self.terms
    }

    pub fn coefficient(&self, q: ExponentQ) -> f64 {
        self.terms
            .binary_search_by(|(e, _)| e.cmp(&q))
            .map(|i| self.terms[i].1)
            .unwrap_or(0.0)
    }

    /// The term with the smallest exponent.
    pub fn leading_term(&self) -> Option<(ExponentQ, f64)> {
        self.terms.first().copied()
    }

    /// `x − st(x)`.
    pub fn nilpotent_part(&self) -> Self {
        FermatReal {
            std: 0.0,
            terms: self.terms.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.std == 0.0 && self.terms.is_empty()
    }

    /// True when `x` is a standard real.
    pub fn is_real(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when `st(x) = 0`, i.e. `x` lies in the ideal `I₀` of infinitesimals.
    pub fn is_infinitesimal(&self) -> bool {
        self.std == 0.0
    }

    /// Membership in `D_k = { h | h^k ∈ D }`; `k = 1` decides `D` and `k = 0` gives `{0}`.
    pub fn in_ideal(&self, k: u32) -> bool {
        if self.std != 0.0 {
            return false;
        }
        match (k, self.leading_term()) {
            (_, None) => true,
            (0, Some(_)) => false,
            (k, Some((q, _))) => q.as_ratio() * Ratio::from_integer(i64::from(k)) >= Ratio::from_integer(1),
        }
    }

    /// Least `N` with `x^N = 0`; `None` if `x` is not infinitesimal.
    pub fn nilpotency_index(&self) -> Option<u32> {
        if self.std != 0.0 {
            return None;
        }
        Some(self.leading_term().map_or(1, |(q, _)| q.nilpotency_index()))
    }

    /// Multiplies every coefficient by a real.
    pub fn scale(&self, r: f64) -> Self {
        self.map_coefficients(|c| c * r)
    }

    pub(crate) fn map_coefficients(&self, f: impl Fn(f64) -> f64) -> Self {
        FermatReal {
            std: normalize_zero(f(self.std)),
            terms: self
                .terms
                .iter()
                .map(|&(q, c)| (q, f(c)))
                .filter(|&(_, c)| c != 0.0)
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = FermatReal::one();
        for _ in 0..n {
            if acc.is_zero() {
                break;
            }
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse, defined exactly when `st(x) ≠ 0`.
    ///
    /// Writing `x = a·(1 + n/a)` with `n` nilpotent, the inverse is the
    /// finite geometric series `a⁻¹·Σ_{m<N} (−n/a)^m`.
    pub fn invert(&self) -> Result<Self> {
        let a = self.std;
        if a == 0.0 {
            return Err(Error::NotInvertible);
        }
        let ratio = self.nilpotent_part().map_coefficients(|c| -c / a);
        let order = ratio.nilpotency_index().unwrap_or(1);
        let mut sum = FermatReal::one();
        let mut power = FermatReal::one();
        for _ in 1..order {
            power = &power * &ratio;
            sum += &power;
        }
        Ok(sum.map_coefficients(|c| c / a))
    }

    /// The unique real `r` with `self = r·k`, if there is one.
    ///
    /// Uniqueness needs `k ≠ 0` (cancellation law), so `k = 0` always yields `None`.
    pub fn try_ratio(&self, k: &FermatReal) -> Option<f64> {
        if k.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(0.0);
        }
        let lhs = self.graded();
        let rhs = k.graded();
        if lhs.len() != rhs.len() {
            return None;
        }
        let r = lhs[0].1 / rhs[0].1;
        let consistent = lhs.iter().zip(&rhs).all(|(&(p, a), &(q, b))| {
            p == q && (a == r * b || a / b == r)
        });
        consistent.then_some(r)
    }

    /// All nonzero coefficients with the standard part at exponent 0.
    pub(crate) fn graded(&self) -> Vec<(Ratio<i64>, f64)> {
        let mut out = Vec::with_capacity(self.terms.len() + 1);
        if self.std != 0.0 {
            out.push((Ratio::from_integer(0), self.std));
        }
        out.extend(self.terms.iter().map(|&(q, c)| (q.as_ratio(), c)));
        out
    }

    /// Value of the canonical representative `r₀ + Σ r_q·|t|^q` at `t`.
    pub fn sample(&self, t: f64) -> f64 {
        let abs_t = t.abs();
        self.std
            + self
                .terms
                .iter()
                .map(|&(q, c)| c * abs_t.powf(q.to_f64()))
                .sum::<f64>()
    }

    /// Absolute value: `x` when `0 ⪯ x`, otherwise `−x`.
    pub fn abs(&self) -> Self {
        match crate::order::weak_order(&FermatReal::zero(), self) {
            crate::order::OrderOutcome::WeaklyGreater => -self,
            _ => self.clone(),
        }
    }
}

fn normalize_zero(r: f64) -> f64 {
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn add_impl(x: &FermatReal, y: &FermatReal, sign: f64) -> FermatReal {
    let mut terms = Vec::with_capacity(x.terms.len() + y.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < x.terms.len() || j < y.terms.len() {
        let next = match (x.terms.get(i), y.terms.get(j)) {
            (Some(&(p, a)), Some(&(q, b))) if p == q => {
                i += 1;
                j += 1;
                (p, a + sign * b)
            }
            (Some(&(p, a)), Some(&(q, _))) if p < q => {
                i += 1;
                (p, a)
            }
            (Some(&(p, a)), None) => {
                i += 1;
                (p, a)
            }
            (_, Some(&(q, b))) => {
                j += 1;
                (q, sign * b)
            }
            (None, None) => unreachable!(),
        };
        if next.1 != 0.0 {
            terms.push(next);
        }
    }
    FermatReal {
        std: normalize_zero(x.std + sign * y.std),
        terms,
    }
}

fn mul_impl(x: &FermatReal, y: &FermatReal) -> FermatReal {
    let xs = x.graded();
    let ys = y.graded();
    let one = Ratio::from_integer(1);
    let mut buckets: BTreeMap<Ratio<i64>, Vec<f64>> = BTreeMap::new();
    for &(p, a) in &xs {
        for &(q, b) in &ys {
            let e = p + q;
            if e <= one {
                buckets.entry(e).or_default().push(a * b);
            }
        }
    }
    let mut std = 0.0;
    let mut terms = Vec::with_capacity(buckets.len());
    for (e, mut parts) in buckets {
        // Summing in value order makes the product bitwise commutative.
        parts.sort_by(f64::total_cmp);
        let c: f64 = parts.iter().sum();
        match ExponentQ::from_ratio(e) {
            Some(q) if c != 0.0 => terms.push((q, c)),
            Some(_) => {}
            None => std = c,
        }
    }
    FermatReal {
        std: normalize_zero(std),
        terms,
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident, $body:expr) => {
        impl $Trait<&FermatReal> for &FermatReal {
            type Output = FermatReal;
            fn $method(self, rhs: &FermatReal) -> FermatReal {
                $body(self, rhs)
            }
        }
        impl $Trait<FermatReal> for FermatReal {
            type Output = FermatReal;
            fn $method(self, rhs: FermatReal) -> FermatReal {
                $body(&self, &rhs)
            }
        }
        impl $Trait<&FermatReal> for FermatReal {
            type Output = FermatReal;
            fn $method(self, rhs: &FermatReal) -> FermatReal {
                $body(&self, rhs)
            }
        }
        impl $Trait<FermatReal> for &FermatReal {
            type Output = FermatReal;
            fn $method(self, rhs: FermatReal) -> FermatReal {
                $body(self, &rhs)
            }
        }
        impl $Trait<f64> for FermatReal {
            type Output = FermatReal;
            fn $method(self, rhs: f64) -> FermatReal {
                $body(&self, &FermatReal::real(rhs))
            }
        }
        impl $Trait<f64> for &FermatReal {
            type Output = FermatReal;
            fn $method(self, rhs: f64) -> FermatReal {
                $body(self, &FermatReal::real(rhs))
            }
        }
    };
}

forward_binop!(Add, add, |x, y| add_impl(x, y, 1.0));
forward_binop!(Sub, sub, |x, y| add_impl(x, y, -1.0));
forward_binop!(Mul, mul, mul_impl);

impl AddAssign<&FermatReal> for FermatReal {
    fn add_assign(&mut self, rhs: &FermatReal) {
        *self = add_impl(self, rhs, 1.0);
    }
}

impl SubAssign<&FermatReal> for FermatReal {
    fn sub_assign(&mut self, rhs: &FermatReal) {
        *self = add_impl(self, rhs, -1.0);
    }
}

impl MulAssign<&FermatReal> for FermatReal {
    fn mul_assign(&mut self, rhs: &FermatReal) {
        *self = mul_impl(self, rhs);
    }
}

impl Neg for &FermatReal {
    type Output = FermatReal;
    fn neg(self) -> FermatReal {
        self.map_coefficients(|c| -c)
    }
}

impl Neg for FermatReal {
    type Output = FermatReal;
    fn neg(self) -> FermatReal {
        -&self
    }
}

impl From<f64> for FermatReal {
    fn from(r: f64) -> Self {
        FermatReal::real(r)
    }
}

impl Sum for FermatReal {
    fn sum<I: Iterator<Item = FermatReal>>(iter: I) -> Self {
        iter.fold(FermatReal::zero(), |acc, x| acc + x)
    }
}

impl Product for FermatReal {
    fn product<I: Iterator<Item = FermatReal>>(iter: I) -> Self {
        iter.fold(FermatReal::one(), |acc, x| acc * x)
    }
}

/// Text form `1 + 0.5·t^(1/2) − 0.125·t^1`, six significant digits.
impl fmt::Display for FermatReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pieces: Vec<(bool, String)> = Vec::new();
        if self.std != 0.0 || self.terms.is_empty() {
            pieces.push((self.std < 0.0, format_significant(self.std.abs(), 6)));
        }
        for &(q, c) in &self.terms {
            pieces.push((c < 0.0, format!("{}·t^{}", format_significant(c.abs(), 6), q)));
        }
        for (i, (negative, body)) in pieces.iter().enumerate() {
            match (i, negative) {
                (0, true) => write!(f, "−{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " − {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// Parses the text form produced by `Display`, e.g. `3 − 2·t^(1/2) + t^1`.
///
/// ASCII `-` and `*` are accepted in place of `−` and `·`, and `|t|` in place of `t`.
impl FromStr for FermatReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LiteralParser::new(s).parse()
    }
}

struct LiteralParser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> LiteralParser<'a> {
    fn new(src: &'a str) -> Self {
        LiteralParser {
            chars: src.char_indices().collect(),
            pos: 0,
            src,
        }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.src.len(), |&(i, _)| i)
    }

    fn peek(&mut self) -> Option<char> {
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if c.is_whitespace() {
                self.pos += 1;
            } else {
                return Some(c);
            }
        }
        None
    }

    fn error(&mut self, expected: &[&str]) -> Error {
        let found = match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of input".to_string(),
        };
        Error::Syntax {
            position: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn eat(&mut self, options: &[char]) -> Option<char> {
        let c = self.peek()?;
        if options.contains(&c) {
            self.pos += 1;
            Some(c)
        } else {
            None
        }
    }

    fn parse(mut self) -> Result<FermatReal> {
        let mut std = 0.0;
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let sign = match self.eat(&['+', '-', '−']) {
                Some('+') => 1.0,
                Some(_) => -1.0,
                None if first => 1.0,
                None if self.peek().is_none() => break,
                None => return Err(self.error(&["`+`", "`-`", "end of input"])),
            };
            first = false;
            let (coef, exponent) = self.term()?;
            match exponent {
                Some(q) => terms.push((q, sign * coef)),
                None => std += sign * coef,
            }
        }
        Ok(FermatReal::from_terms(std, terms))
    }

    fn term(&mut self) -> Result<(f64, Option<ExponentQ>)> {
        match self.peek() {
            Some('t') | Some('|') => Ok((1.0, Some(self.power()?))),
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let coef = self.number()?;
                if self.eat(&['·', '*']).is_some() {
                    Ok((coef, Some(self.power()?)))
                } else {
                    Ok((coef, None))
                }
            }
            _ => Err(self.error(&["number", "`t`"])),
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.peek();
        let start = self.pos;
        let mut end = start;
        while let Some(&(_, c)) = self.chars.get(end) {
            let exponent_sign = matches!(c, '+' | '-')
                && end > start
                && matches!(self.chars[end - 1].1, 'e' | 'E');
            if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || exponent_sign {
                end += 1;
            } else {
                break;
            }
        }
        let lo = self.chars[start].0;
        let hi = self.chars.get(end).map_or(self.src.len(), |&(i, _)| i);
        let value = self.src[lo..hi].parse::<f64>().map_err(|_| self.error(&["number"]))?;
        self.pos = end;
        Ok(value)
    }

    fn power(&mut self) -> Result<ExponentQ> {
        let bars = self.eat(&['|']).is_some();
        if self.eat(&['t']).is_none() {
            return Err(self.error(&["`t`"]));
        }
        if bars && self.eat(&['|']).is_none() {
            return Err(self.error(&["`|`"]));
        }
        if self.eat(&['^']).is_none() {
            return Ok(ExponentQ::ONE);
        }
        let paren = self.eat(&['(']).is_some();
        let num = self.integer()?;
        let den = if self.eat(&['/']).is_some() { self.integer()? } else { 1 };
        if paren && self.eat(&[')']).is_none() {
            return Err(self.error(&["`)`"]));
        }
        ExponentQ::new(num, den)
    }

    fn integer(&mut self) -> Result<i64> {
        self.peek();
        let start = self.pos;
        while matches!(self.chars.get(self.pos), Some(&(_, c)) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(&["integer"]));
        }
        let lo = self.chars[start].0;
        let hi = self.offset();
        self.src[lo..hi].parse().map_err(|_| self.error(&["integer"]))
    }
}
