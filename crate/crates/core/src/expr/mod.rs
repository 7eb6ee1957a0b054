//! Expression trees for elementary smooth functions.
//!
//! Expressions are built from real literals, named variables, the four
//! arithmetic operations, powers with a literal exponent, and the functions
//! `exp log sin cos tan atan sqrt`. The same tree is evaluated on reals,
//! lifted to Fermat reals and Weil algebras, and differentiated symbolically.

mod diff;
mod eval;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

pub use diff::{differentiate, partial};
pub use eval::{eval_real, RealEnv};
pub(crate) use eval::{apply_real, real_pow};
pub use parse::parse;

/// Elementary functions available in the grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Atan,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 7] = [Func::Exp, Func::Log, Func::Sin, Func::Cos, Func::Tan, Func::Atan, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Atan => "atan",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    /// True for functions whose argument must have a strictly positive standard part.
    pub fn needs_positive(self) -> bool {
        matches!(self, Func::Log | Func::Sqrt)
    }
}

/// A smooth expression.
#[derive(Clone, Debug, PartialEq)]
pub enum SmoothExpr {
    Const(f64),
    Var(String),
    Add(Box<SmoothExpr>, Box<SmoothExpr>),
    Sub(Box<SmoothExpr>, Box<SmoothExpr>),
    Mul(Box<SmoothExpr>, Box<SmoothExpr>),
    Div(Box<SmoothExpr>, Box<SmoothExpr>),
    Neg(Box<SmoothExpr>),
    /// `base^p` with a literal real exponent.
    Pow(Box<SmoothExpr>, f64),
    Apply(Func, Box<SmoothExpr>),
}

impl SmoothExpr {
    pub fn var(name: impl Into<String>) -> Self {
        SmoothExpr::Var(name.into())
    }

    pub fn constant(c: f64) -> Self {
        SmoothExpr::Const(c)
    }

    pub fn apply(f: Func, arg: SmoothExpr) -> Self {
        SmoothExpr::Apply(f, Box::new(arg))
    }

    pub fn powf(self, p: f64) -> Self {
        SmoothExpr::Pow(Box::new(self), p)
    }

    pub fn as_const(&self) -> Option<f64> {
        match *self {
            SmoothExpr::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Variables occurring in the expression, sorted.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            SmoothExpr::Const(_) => {}
            SmoothExpr::Var(name) => {
                out.insert(name.clone());
            }
            SmoothExpr::Add(a, b) | SmoothExpr::Sub(a, b) | SmoothExpr::Mul(a, b) | SmoothExpr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            SmoothExpr::Neg(a) | SmoothExpr::Pow(a, _) | SmoothExpr::Apply(_, a) => a.collect_vars(out),
        }
    }

    /// Replaces every occurrence of `name` with `replacement`.
    pub fn substitute(&self, name: &str, replacement: &SmoothExpr) -> SmoothExpr {
        let sub = |e: &SmoothExpr| Box::new(e.substitute(name, replacement));
        match self {
            SmoothExpr::Var(v) if v == name => replacement.clone(),
            SmoothExpr::Const(_) | SmoothExpr::Var(_) => self.clone(),
            SmoothExpr::Add(a, b) => SmoothExpr::Add(sub(a), sub(b)),
            SmoothExpr::Sub(a, b) => SmoothExpr::Sub(sub(a), sub(b)),
            SmoothExpr::Mul(a, b) => SmoothExpr::Mul(sub(a), sub(b)),
            SmoothExpr::Div(a, b) => SmoothExpr::Div(sub(a), sub(b)),
            SmoothExpr::Neg(a) => SmoothExpr::Neg(sub(a)),
            SmoothExpr::Pow(a, p) => SmoothExpr::Pow(sub(a), *p),
            SmoothExpr::Apply(f, a) => SmoothExpr::Apply(*f, sub(a)),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            SmoothExpr::Const(_) | SmoothExpr::Var(_) => 1,
            SmoothExpr::Add(a, b) | SmoothExpr::Sub(a, b) | SmoothExpr::Mul(a, b) | SmoothExpr::Div(a, b) => {
                1 + a.node_count() + b.node_count()
            }
            SmoothExpr::Neg(a) | SmoothExpr::Pow(a, _) | SmoothExpr::Apply(_, a) => 1 + a.node_count(),
        }
    }
}

// Smart constructors with constant folding and unit elimination. They are
// the only simplification performed anywhere.

pub(crate) fn add(a: SmoothExpr, b: SmoothExpr) -> SmoothExpr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => SmoothExpr::Const(x + y),
        (Some(0.0), _) => b,
        (_, Some(0.0)) => a,
        _ => SmoothExpr::Add(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn sub(a: SmoothExpr, b: SmoothExpr) -> SmoothExpr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => SmoothExpr::Const(x - y),
        (Some(0.0), _) => neg(b),
        (_, Some(0.0)) => a,
        _ => SmoothExpr::Sub(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn mul(a: SmoothExpr, b: SmoothExpr) -> SmoothExpr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) => SmoothExpr::Const(x * y),
        (Some(x), _) | (_, Some(x)) if x == 0.0 => SmoothExpr::Const(0.0),
        (Some(1.0), _) => b,
        (_, Some(1.0)) => a,
        _ => SmoothExpr::Mul(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn div(a: SmoothExpr, b: SmoothExpr) -> SmoothExpr {
    match (a.as_const(), b.as_const()) {
        (Some(x), Some(y)) if y != 0.0 => SmoothExpr::Const(x / y),
        (Some(0.0), _) => SmoothExpr::Const(0.0),
        (_, Some(1.0)) => a,
        _ => SmoothExpr::Div(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn neg(a: SmoothExpr) -> SmoothExpr {
    match a {
        SmoothExpr::Const(x) => SmoothExpr::Const(-x),
        SmoothExpr::Neg(inner) => *inner,
        other => SmoothExpr::Neg(Box::new(other)),
    }
}

pub(crate) fn pow(a: SmoothExpr, p: f64) -> SmoothExpr {
    if p == 0.0 {
        return SmoothExpr::Const(1.0);
    }
    if p == 1.0 {
        return a;
    }
    SmoothExpr::Pow(Box::new(a), p)
}

/// Fully parenthesized text that [`parse`] reads back to an equivalent tree.
impl fmt::Display for SmoothExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmoothExpr::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => write!(f, "(-{})", -c),
            SmoothExpr::Const(c) => write!(f, "{c}"),
            SmoothExpr::Var(name) => f.write_str(name),
            SmoothExpr::Add(a, b) => write!(f, "({a} + {b})"),
            SmoothExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            SmoothExpr::Mul(a, b) => write!(f, "({a} * {b})"),
            SmoothExpr::Div(a, b) => write!(f, "({a} / {b})"),
            SmoothExpr::Neg(a) => write!(f, "(-{a})"),
            SmoothExpr::Pow(a, p) if *p < 0.0 => write!(f, "({a}^(-{}))", -p),
            SmoothExpr::Pow(a, p) => write!(f, "({a}^{p})"),
            SmoothExpr::Apply(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl std::str::FromStr for SmoothExpr {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        parse(s)
    }
}
