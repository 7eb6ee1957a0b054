//! Rational exponents of the canonical infinitesimals `|t|^q`.

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// A reduced rational exponent `q` with `0 < q <= 1`.
///
/// The term `c·|t|^q` of a [`FermatReal`](crate::FermatReal) is keyed by its
/// exponent. Exponents above one are never stored: they describe functions
/// that are `o(t)` and therefore equal to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentQ(Ratio<i64>);

impl ExponentQ {
    pub const ONE: ExponentQ = ExponentQ(Ratio::new_raw(1, 1));

    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidExponent { num, den });
        }
        Self::from_ratio(Ratio::new(num, den)).ok_or(Error::InvalidExponent { num, den })
    }

    /// `1/k`, the exponent of the canonical witness of `D_k`.
    pub fn reciprocal(k: u32) -> Result<Self> {
        Self::new(1, i64::from(k))
    }

    pub(crate) fn from_ratio(r: Ratio<i64>) -> Option<Self> {
        (r > Ratio::from_integer(0) && r <= Ratio::from_integer(1)).then_some(ExponentQ(r))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn as_ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// Sum of two exponents, or `None` when it exceeds one (the product term vanishes).
    pub fn checked_add(self, other: ExponentQ) -> Option<ExponentQ> {
        Self::from_ratio(self.0 + other.0)
    }

    /// `n·q`, or `None` when it exceeds one.
    pub fn checked_mul_int(self, n: u32) -> Option<ExponentQ> {
        Self::from_ratio(self.0 * Ratio::from_integer(i64::from(n)))
    }

    /// Least `N` with `N·q > 1`.
    pub fn nilpotency_index(&self) -> u32 {
        (self.denom() / self.numer() + 1) as u32
    }
}

impl fmt::Display for ExponentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "({}/{})", self.numer(), self.denom())
        }
    }
}
