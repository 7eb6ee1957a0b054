//! Plain floating-point reference computations used to check the exact
//! machinery: finite differences, adaptive quadrature and brute-force
//! truncation of polynomials. Nothing here touches the lifting code.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{eval_real, RealEnv, SmoothExpr};
use crate::weil::{MultiIndex, WeilAlgebraSpec, WeilElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StencilScheme {
    /// The symmetric `n`-th difference, error `O(h²)`.
    CentralFirst,
    /// Richardson extrapolation of the symmetric difference, error `O(h⁴)`.
    CentralSecond,
    /// Four-point cross stencil for mixed second derivatives.
    CrossMixed,
}

impl fmt::Display for StencilScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StencilScheme::CentralFirst => "central-1st",
            StencilScheme::CentralSecond => "central-2nd",
            StencilScheme::CrossMixed => "cross-mixed",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StencilConfig {
    step: f64,
    scheme: StencilScheme,
}

impl StencilConfig {
    pub const MIN_STEP: f64 = 1e-8;
    pub const MAX_STEP: f64 = 1e-2;

    pub fn new(step: f64, scheme: StencilScheme) -> Result<Self> {
        if !(Self::MIN_STEP..=Self::MAX_STEP).contains(&step) {
            return Err(Error::InvalidStencil(format!(
                "step {step} outside [{}, {}]",
                Self::MIN_STEP,
                Self::MAX_STEP
            )));
        }
        Ok(StencilConfig { step, scheme })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn scheme(&self) -> StencilScheme {
        self.scheme
    }
}

fn eval_at(e: &SmoothExpr, var: &str, x: f64) -> Result<f64> {
    let env: RealEnv = [(var.to_string(), x)].into_iter().collect();
    eval_real(e, &env)
}

fn binomial(n: u32, i: u32) -> f64 {
    (0..i).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

/// `h⁻ⁿ Σ_i (−1)^i C(n,i) f(x + (n/2 − i)h)`.
fn central(e: &SmoothExpr, var: &str, x0: f64, order: u32, h: f64) -> Result<f64> {
    let mut sum = 0.0;
    for i in 0..=order {
        let offset = (f64::from(order) / 2.0 - f64::from(i)) * h;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binomial(order, i) * eval_at(e, var, x0 + offset)?;
    }
    Ok(sum / h.powi(order as i32))
}

/// Finite-difference estimate of the `order`-th derivative, `order ≤ 4`.
pub fn fd_derivative(e: &SmoothExpr, var: &str, x0: f64, order: u32, cfg: &StencilConfig) -> Result<f64> {
    if order > 4 {
        return Err(Error::InvalidStencil(format!("order {order} above 4")));
    }
    if order == 0 {
        return eval_at(e, var, x0);
    }
    let h = cfg.step;
    match cfg.scheme {
        StencilScheme::CentralFirst => central(e, var, x0, order, h),
        StencilScheme::CentralSecond => {
            let coarse = central(e, var, x0, order, h)?;
            let fine = central(e, var, x0, order, h / 2.0)?;
            Ok((4.0 * fine - coarse) / 3.0)
        }
        StencilScheme::CrossMixed => Err(Error::InvalidStencil(
            "the cross stencil computes mixed partials only".into(),
        )),
    }
}

/// Cross-stencil estimate of `∂_u∂_v f(x₀)`:
/// `[f(x+hu+hv) − f(x+hu−hv) − f(x−hu+hv) + f(x−hu−hv)] / 4h²`.
pub fn fd_mixed_partial(
    e: &SmoothExpr,
    vars: &[&str],
    u: &[f64],
    v: &[f64],
    x0: &[f64],
    cfg: &StencilConfig,
) -> Result<f64> {
    if cfg.scheme != StencilScheme::CrossMixed {
        return Err(Error::InvalidStencil(format!("mixed partials need cross-mixed, not {}", cfg.scheme)));
    }
    let h = cfg.step;
    let at = |su: f64, sv: f64| -> Result<f64> {
        let env: RealEnv = vars
            .iter()
            .enumerate()
            .map(|(i, name)| (name.to_string(), x0[i] + su * h * u[i] + sv * h * v[i]))
            .collect();
        eval_real(e, &env)
    };
    Ok((at(1.0, 1.0)? - at(1.0, -1.0)? - at(-1.0, 1.0)? + at(-1.0, -1.0)?) / (4.0 * h * h))
}

/// `∫_a^b e d(var)` by adaptive Simpson to absolute tolerance `10⁻¹⁰`.
pub fn quadrature(e: &SmoothExpr, var: &str, a: f64, b: f64) -> Result<f64> {
    const TOLERANCE: f64 = 1e-10;
    const MAX_DEPTH: u32 = 50;
    let f = |x: f64| eval_at(e, var, x);
    let (fa, fb, fm) = (f(a)?, f(b)?, f((a + b) / 2.0)?);
    let whole = simpson(a, b, fa, fm, fb);
    refine(&f, a, b, fa, fm, fb, whole, TOLERANCE, MAX_DEPTH)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = (a + b) / 2.0;
    let (lm, rm) = ((a + m) / 2.0, (m + b) / 2.0);
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(refine(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
        + refine(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
}

/// A polynomial in `n` variables as a map from exponents to coefficients.
pub type Poly = BTreeMap<MultiIndex, f64>;

/// The untruncated product of two polynomials.
pub fn naive_poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ra, ca) in a {
        for (rb, cb) in b {
            *out.entry(ra.add(rb)).or_insert(0.0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0.0);
    out
}

/// True when `β ≠ 0` and every `α_i` is exceeded by `β` in some component.
pub fn brute_killed(alphas: &[MultiIndex], beta: &MultiIndex) -> bool {
    !beta.is_zero()
        && alphas.iter().all(|alpha| {
            beta.components().iter().zip(alpha.components()).any(|(b, a)| b > a)
        })
}

/// Reduces `poly` modulo the monomial ideal of the algebra by checking each
/// monomial against the defining family directly.
pub fn brute_truncate(spec: &WeilAlgebraSpec, poly: &Poly) -> WeilElement {
    let algebra = std::sync::Arc::new(WeilAlgebraSpec::new(spec.alphas().to_vec()).expect("valid algebra"));
    let kept: Vec<(MultiIndex, f64)> = poly
        .iter()
        .filter(|(r, _)| !brute_killed(spec.alphas(), r))
        .map(|(r, &c)| (r.clone(), c))
        .collect();
    WeilElement::from_coeffs(&algebra, 0.0, kept).expect("brute-force survivors belong to the algebra")
}
