use std::collections::BTreeMap;

use super::{Func, SmoothExpr};
use crate::error::{Error, Result};

/// Variable bindings for real evaluation.
pub type RealEnv = BTreeMap<String, f64>;

/// IEEE evaluation with domain checks.
pub fn eval_real(e: &SmoothExpr, env: &RealEnv) -> Result<f64> {
    use SmoothExpr::*;
    let value = match e {
        Const(c) => *c,
        Var(name) => *env.get(name).ok_or_else(|| Error::UnboundVariable(name.clone()))?,
        Add(a, b) => eval_real(a, env)? + eval_real(b, env)?,
        Sub(a, b) => eval_real(a, env)? - eval_real(b, env)?,
        Mul(a, b) => eval_real(a, env)? * eval_real(b, env)?,
        Div(a, b) => {
            let num = eval_real(a, env)?;
            let den = eval_real(b, env)?;
            if den == 0.0 {
                return Err(Error::Domain(format!("division by zero in `{e}`")));
            }
            num / den
        }
        Neg(a) => -eval_real(a, env)?,
        Pow(a, p) => real_pow(eval_real(a, env)?, *p)?,
        Apply(f, a) => apply_real(*f, eval_real(a, env)?)?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("`{e}` is not finite")))
    }
}

pub(crate) fn real_pow(base: f64, p: f64) -> Result<f64> {
    let integral = p.fract() == 0.0;
    if base == 0.0 && p < 0.0 {
        return Err(Error::Domain(format!("0 raised to negative power {p}")));
    }
    if base < 0.0 && !integral {
        return Err(Error::Domain(format!("negative base {base} raised to non-integer power {p}")));
    }
    if integral && p.abs() <= i32::MAX as f64 {
        Ok(base.powi(p as i32))
    } else {
        Ok(base.powf(p))
    }
}

pub(crate) fn apply_real(f: Func, x: f64) -> Result<f64> {
    Ok(match f {
        Func::Exp => x.exp(),
        Func::Log if x > 0.0 => x.ln(),
        Func::Log => return Err(Error::Domain(format!("log of non-positive {x}"))),
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Tan => x.tan(),
        Func::Atan => x.atan(),
        Func::Sqrt if x >= 0.0 => x.sqrt(),
        Func::Sqrt => return Err(Error::Domain(format!("sqrt of negative {x}"))),
    })
}
