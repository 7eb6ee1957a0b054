use super::{add, div, mul, neg, pow, sub, Func, SmoothExpr};

/// Symbolic derivative with respect to `var`.
///
/// Only constant folding and unit elimination are applied; the result is
/// correct by evaluation, not in any normal form.
pub fn differentiate(e: &SmoothExpr, var: &str) -> SmoothExpr {
    use SmoothExpr::*;
    match e {
        Const(_) => Const(0.0),
        Var(name) => Const(if name == var { 1.0 } else { 0.0 }),
        Add(a, b) => add(differentiate(a, var), differentiate(b, var)),
        Sub(a, b) => sub(differentiate(a, var), differentiate(b, var)),
        Mul(a, b) => add(
            mul(differentiate(a, var), (**b).clone()),
            mul((**a).clone(), differentiate(b, var)),
        ),
        Div(a, b) => {
            let da = differentiate(a, var);
            let db = differentiate(b, var);
            if db.as_const() == Some(0.0) {
                return div(da, (**b).clone());
            }
            div(
                sub(mul(da, (**b).clone()), mul((**a).clone(), db)),
                pow((**b).clone(), 2.0),
            )
        }
        Neg(a) => neg(differentiate(a, var)),
        Pow(a, p) => mul(
            mul(Const(*p), pow((**a).clone(), p - 1.0)),
            differentiate(a, var),
        ),
        Apply(f, a) => {
            let inner = differentiate(a, var);
            if inner.as_const() == Some(0.0) {
                return Const(0.0);
            }
            let u = (**a).clone();
            let outer = match f {
                Func::Exp => SmoothExpr::apply(Func::Exp, u),
                Func::Log => return div(inner, u),
                Func::Sin => SmoothExpr::apply(Func::Cos, u),
                Func::Cos => neg(SmoothExpr::apply(Func::Sin, u)),
                Func::Tan => return div(inner, pow(SmoothExpr::apply(Func::Cos, u), 2.0)),
                Func::Atan => return div(inner, add(Const(1.0), pow(u, 2.0))),
                Func::Sqrt => return div(inner, mul(Const(2.0), SmoothExpr::apply(Func::Sqrt, u))),
            };
            mul(outer, inner)
        }
    }
}

/// Mixed partial derivative `∂^{orders} e`, differentiating in the order the
/// variables are listed.
pub fn partial(e: &SmoothExpr, vars: &[&str], orders: &[u32]) -> SmoothExpr {
    let mut out = e.clone();
    for (var, &k) in vars.iter().zip(orders) {
        for _ in 0..k {
            out = differentiate(&out, var);
        }
    }
    out
}
