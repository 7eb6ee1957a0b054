//! The order relations `⪯` and `≤` on canonical Fermat reals.

use std::fmt;

use crate::fermat::FermatReal;

/// Outcome of comparing two extended reals with `⪯`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderOutcome {
    Equal,
    WeaklyLess,
    WeaklyGreater,
    /// Never produced on canonical representatives, where `⪯` is total;
    /// kept for classes such as `t·sin(1/t)` that the model cannot express.
    IncomparableByModel,
}

impl fmt::Display for OrderOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderOutcome::Equal => "equal",
            OrderOutcome::WeaklyLess => "weakly-less",
            OrderOutcome::WeaklyGreater => "weakly-greater",
            OrderOutcome::IncomparableByModel => "incomparable-by-model",
        })
    }
}

/// Weak trichotomy for `≤`: exactly one of `x ≃ y`, `x < y`, `y < x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Trichotomy {
    /// Equal standard parts (`x − y ∈ I₀`).
    Similar,
    Less,
    Greater,
}

impl fmt::Display for Trichotomy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Trichotomy::Similar => "similar",
            Trichotomy::Less => "strict-less",
            Trichotomy::Greater => "strict-greater",
        })
    }
}

/// Decides `x ⪯ y` from the sign of the leading coefficient of `y − x`,
/// with the standard part counted as the exponent-zero term.
pub fn weak_order(x: &FermatReal, y: &FermatReal) -> OrderOutcome {
    let d = y - x;
    match d.graded().first() {
        None => OrderOutcome::Equal,
        Some(&(_, c)) if c > 0.0 => OrderOutcome::WeaklyLess,
        Some(_) => OrderOutcome::WeaklyGreater,
    }
}

/// `x ⪯ y`.
pub fn weakly_le(x: &FermatReal, y: &FermatReal) -> bool {
    matches!(weak_order(x, y), OrderOutcome::Equal | OrderOutcome::WeaklyLess)
}

/// `x ≤ y`: `x = y`, or `x ⪯ y` with `y − x` invertible.
pub fn le(x: &FermatReal, y: &FermatReal) -> bool {
    match weak_order(x, y) {
        OrderOutcome::Equal => true,
        OrderOutcome::WeaklyLess => (y - x).standard_part() != 0.0,
        _ => false,
    }
}

/// `x < y`: `x ≤ y` and `x ≠ y`.
pub fn lt(x: &FermatReal, y: &FermatReal) -> bool {
    x != y && le(x, y)
}

/// `x ≃ y`: equal standard parts.
pub fn similar(x: &FermatReal, y: &FermatReal) -> bool {
    x.standard_part() == y.standard_part()
}

/// `x ≈ y` on canonical forms: `x − y ∈ D`.
pub fn close(x: &FermatReal, y: &FermatReal) -> bool {
    (x - y).in_ideal(1)
}

/// Places `(x, y)` in the weak trichotomy of `≤`.
pub fn strict_order(x: &FermatReal, y: &FermatReal) -> Trichotomy {
    if lt(x, y) {
        Trichotomy::Less
    } else if lt(y, x) {
        Trichotomy::Greater
    } else {
        Trichotomy::Similar
    }
}
