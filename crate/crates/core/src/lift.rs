//! Lifting smooth expressions to Fermat reals and Weil algebras.
//!
//! An elementary function `g` applied to `a + n`, with `a` standard and `n`
//! nilpotent of index `N`, is replaced by its Taylor sum
//!
//! ```text
//! g(a + n) = Σ_{m<N} g⁽ᵐ⁾(a)/m! · nᵐ
//! ```
//!
//! which is exact, not an approximation, because `nᴺ = 0`. Reading off the
//! coefficients of a lift at `x₀ + |t|^(1/k)` gives the Taylor jet of `f` at
//! `x₀`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::ExponentQ;
use crate::expr::{apply_real, differentiate, eval_real, real_pow, Func, RealEnv, SmoothExpr};
use crate::fermat::FermatReal;
use crate::weil::{make_algebra, MultiIndex, WeilAlgebra, WeilElement};

pub type FermatEnv = BTreeMap<String, FermatReal>;
pub type WeilEnv = BTreeMap<String, WeilElement>;

/// The operations the Taylor-sum evaluator needs from a number system with
/// nilpotents. Implemented for [`FermatReal`] and [`WeilElement`].
pub trait Nilpotent: Clone {
    /// A standard constant living alongside `self`.
    fn constant_like(&self, r: f64) -> Self;
    fn standard(&self) -> f64;
    fn nilpotent(&self) -> Self;
    fn is_standard(&self) -> bool;
    /// Least `N` with `nᴺ = 0` for the nilpotent part `n`.
    fn nil_index(&self) -> u32;
    fn plus(&self, other: &Self) -> Result<Self>;
    fn minus(&self, other: &Self) -> Result<Self>;
    fn times(&self, other: &Self) -> Result<Self>;
    fn negated(&self) -> Self;
    fn scaled(&self, r: f64) -> Self;
    fn divided(&self, r: f64) -> Self;
    fn inverse(&self) -> Result<Self>;
    fn power(&self, n: u32) -> Self;
}

impl Nilpotent for FermatReal {
    fn constant_like(&self, r: f64) -> Self {
        FermatReal::real(r)
    }
    fn standard(&self) -> f64 {
        self.standard_part()
    }
    fn nilpotent(&self) -> Self {
        self.nilpotent_part()
    }
    fn is_standard(&self) -> bool {
        self.is_real()
    }
    fn nil_index(&self) -> u32 {
        self.nilpotent_part().nilpotency_index().unwrap_or(1)
    }
    fn plus(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }
    fn minus(&self, other: &Self) -> Result<Self> {
        Ok(self - other)
    }
    fn times(&self, other: &Self) -> Result<Self> {
        Ok(self * other)
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, r: f64) -> Self {
        self.scale(r)
    }
    fn divided(&self, r: f64) -> Self {
        self.map_coefficients(|c| c / r)
    }
    fn inverse(&self) -> Result<Self> {
        self.invert()
    }
    fn power(&self, n: u32) -> Self {
        self.pow(n)
    }
}

impl Nilpotent for WeilElement {
    fn constant_like(&self, r: f64) -> Self {
        WeilElement::constant(self.algebra(), r)
    }
    fn standard(&self) -> f64 {
        self.standard_part()
    }
    fn nilpotent(&self) -> Self {
        self.nilpotent_part()
    }
    fn is_standard(&self) -> bool {
        self.coeffs().is_empty()
    }
    fn nil_index(&self) -> u32 {
        self.nilpotent_part().nilpotency_index().unwrap_or(1)
    }
    fn plus(&self, other: &Self) -> Result<Self> {
        self.checked_add(other)
    }
    fn minus(&self, other: &Self) -> Result<Self> {
        self.checked_sub(other)
    }
    fn times(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, r: f64) -> Self {
        self.scale(r)
    }
    fn divided(&self, r: f64) -> Self {
        self.map_coefficients(|c| c / r)
    }
    fn inverse(&self) -> Result<Self> {
        self.invert()
    }
    fn power(&self, n: u32) -> Self {
        self.pow(n)
    }
}

type Tower = RwLock<HashMap<(Func, usize), Arc<SmoothExpr>>>;

fn tower() -> &'static Tower {
    static TOWER: OnceLock<Tower> = OnceLock::new();
    TOWER.get_or_init(Default::default)
}

/// `g⁽ᵐ⁾(u)` as an expression in the variable `u`, memoized per `(g, m)`.
pub fn elementary_derivative(g: Func, m: usize) -> Arc<SmoothExpr> {
    if let Some(e) = tower().read().expect("tower lock").get(&(g, m)) {
        return Arc::clone(e);
    }
    let e = if m == 0 {
        SmoothExpr::apply(g, SmoothExpr::var("u"))
    } else {
        differentiate(&elementary_derivative(g, m - 1), "u")
    };
    let mut map = tower().write().expect("tower lock");
    Arc::clone(map.entry((g, m)).or_insert_with(|| Arc::new(e)))
}

fn factorial(m: u32) -> f64 {
    (1..=m).map(f64::from).product()
}

/// `Σ_{m<N} coeff(m) · nᵐ` where `x = a + n` and `N` is the index of `n`.
fn taylor<T: Nilpotent>(x: &T, coeff: impl Fn(u32) -> Result<f64>) -> Result<T> {
    let n = x.nilpotent();
    let order = x.nil_index();
    let mut out = x.constant_like(coeff(0)?);
    let mut power = n.clone();
    for m in 1..order {
        out = out.plus(&power.scaled(coeff(m)?))?;
        if m + 1 < order {
            power = power.times(&n)?;
        }
    }
    Ok(out)
}

fn apply<T: Nilpotent>(g: Func, x: &T) -> Result<T> {
    let a = x.standard();
    if x.is_standard() {
        return Ok(x.constant_like(apply_real(g, a)?));
    }
    if g.needs_positive() && a <= 0.0 {
        return Err(Error::Domain(format!(
            "{} needs a strictly positive standard part, got {a}",
            g.name()
        )));
    }
    if g == Func::Tan && a.cos() == 0.0 {
        return Err(Error::Domain(format!("tan is not defined at {a}")));
    }
    taylor(x, |m| {
        if m == 0 {
            return apply_real(g, a);
        }
        let env: RealEnv = [("u".to_string(), a)].into_iter().collect();
        Ok(eval_real(&elementary_derivative(g, m as usize), &env)? / factorial(m))
    })
}

fn power<T: Nilpotent>(x: &T, p: f64) -> Result<T> {
    let a = x.standard();
    if x.is_standard() {
        return Ok(x.constant_like(real_pow(a, p)?));
    }
    if p.fract() == 0.0 && p.abs() <= f64::from(u32::MAX) {
        let n = p.abs() as u32;
        return if p >= 0.0 { Ok(x.power(n)) } else { Ok(x.inverse()?.power(n)) };
    }
    if a <= 0.0 {
        return Err(Error::Domain(format!(
            "non-integer power {p} needs a strictly positive standard part, got {a}"
        )));
    }
    // Binomial series: the m-th coefficient is p(p−1)…(p−m+1)/m! · a^(p−m).
    taylor(x, |m| {
        let falling: f64 = (0..m).map(|i| p - f64::from(i)).product();
        Ok(falling / factorial(m) * real_pow(a, p - f64::from(m))?)
    })
}

fn lift<T: Nilpotent>(e: &SmoothExpr, unit: &T, lookup: &dyn Fn(&str) -> Option<T>) -> Result<T> {
    use SmoothExpr::*;
    let rec = |e: &SmoothExpr| lift(e, unit, lookup);
    match e {
        Const(c) => Ok(unit.constant_like(*c)),
        Var(name) => lookup(name).ok_or_else(|| Error::UnboundVariable(name.clone())),
        Add(a, b) => rec(a)?.plus(&rec(b)?),
        Sub(a, b) => rec(a)?.minus(&rec(b)?),
        Mul(a, b) => rec(a)?.times(&rec(b)?),
        Div(a, b) => {
            let num = rec(a)?;
            let den = rec(b)?;
            if den.is_standard() {
                let d = den.standard();
                if d == 0.0 {
                    return Err(Error::NotInvertible);
                }
                return Ok(num.divided(d));
            }
            num.times(&den.inverse()?)
        }
        Neg(a) => Ok(rec(a)?.negated()),
        Pow(a, p) => power(&rec(a)?, *p),
        Apply(g, a) => apply(*g, &rec(a)?),
    }
}

/// Evaluates the lift of `e` with variables bound to Fermat reals.
pub fn lift_eval(e: &SmoothExpr, env: &FermatEnv) -> Result<FermatReal> {
    lift(e, &FermatReal::one(), &|name| env.get(name).cloned())
}

/// Evaluates the lift of `e` in the Weil algebra `algebra`.
pub fn lift_eval_weil(e: &SmoothExpr, algebra: &WeilAlgebra, env: &WeilEnv) -> Result<WeilElement> {
    let same = |x: &WeilElement| Arc::ptr_eq(x.algebra(), algebra) || x.algebra() == algebra;
    if !env.values().all(same) {
        return Err(Error::AlgebraMismatch);
    }
    lift(e, &WeilElement::constant(algebra, 1.0), &|name| env.get(name).cloned())
}

/// The coefficients `c_i = f⁽ⁱ⁾(x₀)/i!` for `i = 0..=k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JetRepr", into = "JetRepr")]
pub struct TaylorJet {
    x0: f64,
    k: u32,
    coeffs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct JetRepr {
    x0: f64,
    k: u32,
    coeffs: Vec<f64>,
}

impl TryFrom<JetRepr> for TaylorJet {
    type Error = String;

    fn try_from(r: JetRepr) -> std::result::Result<Self, String> {
        TaylorJet::new(r.x0, r.coeffs).map_err(|e| e.to_string()).and_then(|jet| {
            if jet.k == r.k {
                Ok(jet)
            } else {
                Err(format!("order {} does not match {} coefficients", r.k, jet.coeffs.len()))
            }
        })
    }
}

impl From<TaylorJet> for JetRepr {
    fn from(j: TaylorJet) -> Self {
        JetRepr { x0: j.x0, k: j.k, coeffs: j.coeffs }
    }
}

impl TaylorJet {
    /// A jet of order `coeffs.len() − 1`; needs at least two coefficients.
    pub fn new(x0: f64, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Domain("a Taylor jet has order at least 1".into()));
        }
        let k = (coeffs.len() - 1) as u32;
        Ok(TaylorJet { x0, k, coeffs })
    }

    pub fn basepoint(&self) -> f64 {
        self.x0
    }

    pub fn order(&self) -> u32 {
        self.k
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// `f⁽ⁱ⁾(x₀) = i!·c_i`.
    pub fn derivatives(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * factorial(i as u32))
            .collect()
    }
}

/// Taylor jet of order `k` of the single-variable expression `e` at `x0`.
pub fn derive(e: &SmoothExpr, var: &str, x0: f64, k: u32) -> Result<TaylorJet> {
    derive_with(e, var, x0, k, &RealEnv::new())
}

/// Like [`derive`], with the remaining variables bound to reals from `env`.
///
/// Binds `var` to `x₀ + |t|^(1/k)` and reads `c_i` at the exponent `i/k`.
pub fn derive_with(e: &SmoothExpr, var: &str, x0: f64, k: u32, env: &RealEnv) -> Result<TaylorJet> {
    if k == 0 {
        return Err(Error::Domain("derivative order must be at least 1".into()));
    }
    let mut fenv: FermatEnv = env.iter().map(|(n, &v)| (n.clone(), FermatReal::real(v))).collect();
    fenv.insert(var.to_string(), FermatReal::real(x0) + FermatReal::witness(k));
    let y = lift_eval(e, &fenv)?;
    let mut coeffs = vec![y.standard_part()];
    for i in 1..=k {
        coeffs.push(y.coefficient(ExponentQ::new(i64::from(i), i64::from(k))?));
    }
    TaylorJet::new(x0, coeffs)
}

/// Values of the symbolic partials `∂ᵐf(x₀)`, computed on demand.
struct Partials<'a> {
    vars: &'a [&'a str],
    point: RealEnv,
    exprs: HashMap<Vec<u32>, SmoothExpr>,
    values: HashMap<Vec<u32>, f64>,
}

impl<'a> Partials<'a> {
    fn new(e: &SmoothExpr, vars: &'a [&'a str], x0: &[f64]) -> Self {
        let point = vars.iter().zip(x0).map(|(v, &x)| (v.to_string(), x)).collect();
        let mut exprs = HashMap::new();
        exprs.insert(vec![0; vars.len()], e.clone());
        Partials { vars, point, exprs, values: HashMap::new() }
    }

    // Differentiates in variable order, so each multi-index has one expression.
    fn expr(&mut self, m: &[u32]) -> SmoothExpr {
        if let Some(e) = self.exprs.get(m) {
            return e.clone();
        }
        let last = m.iter().rposition(|&c| c > 0).expect("zero multi-index is seeded");
        let mut parent = m.to_vec();
        parent[last] -= 1;
        let e = differentiate(&self.expr(&parent), self.vars[last]);
        self.exprs.insert(m.to_vec(), e.clone());
        e
    }

    fn value(&mut self, m: &[u32]) -> Result<f64> {
        if let Some(&v) = self.values.get(m) {
            return Ok(v);
        }
        let v = eval_real(&self.expr(m), &self.point)?;
        self.values.insert(m.to_vec(), v);
        Ok(v)
    }
}

/// Multi-indices of length `n` with total degree below `bound`, graded then lexicographic.
fn multi_indices(n: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for degree in 0..bound {
        let mut current = vec![0; n];
        fill(&mut current, 0, degree, &mut out);
    }
    out
}

fn fill(current: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<Vec<u32>>) {
    if i + 1 == current.len() {
        current[i] = left;
        out.push(current.clone());
        return;
    }
    if current.is_empty() {
        out.push(Vec::new());
        return;
    }
    for c in (0..=left).rev() {
        current[i] = c;
        fill(current, i + 1, left - c, out);
    }
    current[i] = 0;
}

/// `Σ_{|m|<N} ∂ᵐf(x₀)/m! · nᵐ` for a vector increment `n` in one algebra.
fn multivariate_taylor(partials: &mut Partials, algebra: &WeilAlgebra, n: &[WeilElement]) -> Result<WeilElement> {
    let bound = algebra.max_degree() + 1;
    let mut out = WeilElement::zero(algebra);
    for m in multi_indices(n.len(), bound) {
        if m.iter().zip(n).any(|(&c, x)| c > 0 && x.is_zero()) {
            continue;
        }
        let mut mono = WeilElement::constant(algebra, 1.0);
        for (&c, x) in m.iter().zip(n) {
            mono = mono.checked_mul(&x.pow(c))?;
        }
        if mono.is_zero() {
            continue;
        }
        let coeff = partials.value(&m)? / MultiIndex::from(m.clone()).factorial();
        out = out.checked_add(&mono.scale(coeff))?;
    }
    Ok(out)
}

/// The mixed second derivative `∂_u∂_v f(x₀)`.
///
/// With `h = j = |t|^(1/4)` and `k = |t|^(1/2)`, so that `jkh = |t|`, the real
/// `∂_u∂_v f(x₀)` is the unique ratio of
/// `j·[f(x₀+hu+kv) − f(x₀+hu) − f(x₀+kv) + f(x₀)]` to `jkh`. The four lifts are
/// computed in the Weil algebra on `h, k` with `h⁴ = k² = h²k = 0`-bounded
/// monomials, which is exactly the subalgebra of Fermat reals these two
/// elements generate, and then mapped into the Fermat reals.
pub fn mixed_partial(e: &SmoothExpr, vars: &[&str], u: &[f64], v: &[f64], x0: &[f64]) -> Result<f64> {
    if u.len() != vars.len() || v.len() != vars.len() || x0.len() != vars.len() {
        return Err(Error::Domain(format!(
            "{} variables but directions of length {} and {} at a point of length {}",
            vars.len(),
            u.len(),
            v.len(),
            x0.len()
        )));
    }
    if let Some(free) = e.free_vars().into_iter().find(|name| !vars.contains(&name.as_str())) {
        return Err(Error::UnboundVariable(free));
    }
    let algebra = make_algebra([[4, 0], [0, 2], [2, 1]])?;
    let h = WeilElement::generator(&algebra, 0)?;
    let k = WeilElement::generator(&algebra, 1)?;
    let increment = |hu: bool, kv: bool| -> Result<Vec<WeilElement>> {
        (0..vars.len())
            .map(|i| {
                let a = if hu { h.scale(u[i]) } else { WeilElement::zero(&algebra) };
                let b = if kv { k.scale(v[i]) } else { WeilElement::zero(&algebra) };
                a.checked_add(&b)
            })
            .collect()
    };
    let mut partials = Partials::new(e, vars, x0);
    let both = multivariate_taylor(&mut partials, &algebra, &increment(true, true)?)?;
    let along_u = multivariate_taylor(&mut partials, &algebra, &increment(true, false)?)?;
    let along_v = multivariate_taylor(&mut partials, &algebra, &increment(false, true)?)?;
    let base = multivariate_taylor(&mut partials, &algebra, &increment(false, false)?)?;
    let bracket = both.checked_sub(&along_u)?.checked_sub(&along_v)?.checked_add(&base)?;

    let quarter = FermatReal::witness(4);
    let half = FermatReal::witness(2);
    let j = quarter.clone();
    let lhs = &j * &bracket.evaluate_at(&[quarter.clone(), half.clone()])?;
    let jkh = &(&j * &half) * &quarter;
    lhs.try_ratio(&jkh)
        .ok_or_else(|| Error::RatioUndefined(format!("{lhs} is not a real multiple of {jkh}")))
}

/// `∫_x^{x+h} f = h·f(x)` for `h ∈ D`.
pub fn infinitesimal_integral(e: &SmoothExpr, var: &str, x: f64, h: &FermatReal) -> Result<FermatReal> {
    if !h.in_ideal(1) {
        return Err(Error::NotFirstOrder);
    }
    let env: RealEnv = [(var.to_string(), x)].into_iter().collect();
    Ok(h.scale(eval_real(e, &env)?))
}

/// Checks `k·f(x+h) = k·f(x) + kh·f'(x)` exactly, for `hk ∈ D`.
///
/// `f'(x)` is read from the first-order jet.
pub fn second_derivation_check(e: &SmoothExpr, var: &str, x: f64, h: &FermatReal, k: &FermatReal) -> Result<bool> {
    let hk = h * k;
    if !hk.in_ideal(1) {
        return Err(Error::NotFirstOrder);
    }
    let env: FermatEnv = [(var.to_string(), FermatReal::real(x) + h.clone())].into_iter().collect();
    let lhs = k * &lift_eval(e, &env)?;
    let fx = eval_real(e, &[(var.to_string(), x)].into_iter().collect())?;
    let fprime = derive(e, var, x, 1)?.coefficients()[1];
    let rhs = k.scale(fx) + hk.scale(fprime);
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn q(n: i64, d: i64) -> ExponentQ {
        ExponentQ::new(n, d).unwrap()
    }

    fn env(pairs: &[(&str, FermatReal)]) -> FermatEnv {
        pairs.iter().map(|(n, x)| (n.to_string(), x.clone())).collect()
    }

    #[test]
    fn sqrt_of_one_minus_first_order() {
        let h = FermatReal::monomial(1.0, q(4, 5));
        let y = lift_eval(&parse("sqrt(1 - x)").unwrap(), &env(&[("x", h.clone())])).unwrap();
        assert_eq!(y, FermatReal::one() - h.scale(0.5));
    }

    #[test]
    fn lorentz_factor() {
        let v = FermatReal::witness(2);
        let e = parse("1/sqrt(1 - v^2/c^2)").unwrap();
        let y = lift_eval(&e, &env(&[("v", v.clone()), ("c", FermatReal::one())])).unwrap();
        assert_eq!(y, FermatReal::one() + v.pow(2).scale(0.5));
    }

    #[test]
    fn sine_and_cosine_on_second_order() {
        let h = FermatReal::witness(2);
        for c in [1.0, 3.0, 0.5, -2.0] {
            let b = env(&[("h", h.clone()), ("c", FermatReal::real(c))]);
            let s = lift_eval(&parse("sin(c*h)").unwrap(), &b).unwrap();
            let co = lift_eval(&parse("cos(c*h)").unwrap(), &b).unwrap();
            assert_eq!(s, h.scale(c));
            assert_eq!(co, FermatReal::one() - h.pow(2).scale(c * c / 2.0));
        }
    }

    #[test]
    fn standard_inputs_agree_with_real_evaluation() {
        let e = parse("exp(x)/(1 + x^3) - atan(x/3)").unwrap();
        for x in [-0.7, 0.1, 2.5] {
            let lifted = lift_eval(&e, &env(&[("x", FermatReal::real(x))])).unwrap();
            let real = eval_real(&e, &[("x".to_string(), x)].into_iter().collect()).unwrap();
            assert_eq!(lifted, FermatReal::real(real));
        }
    }

    #[test]
    fn domain_errors() {
        let d = env(&[("x", FermatReal::witness(1))]);
        assert!(matches!(lift_eval(&parse("sqrt(x)").unwrap(), &d), Err(Error::Domain(_))));
        assert!(matches!(lift_eval(&parse("log(x)").unwrap(), &d), Err(Error::Domain(_))));
        assert!(matches!(lift_eval(&parse("x^0.5").unwrap(), &d), Err(Error::Domain(_))));
        assert_eq!(lift_eval(&parse("1/x").unwrap(), &d), Err(Error::NotInvertible));
        assert_eq!(lift_eval(&parse("x^(-2)").unwrap(), &d), Err(Error::NotInvertible));
        assert_eq!(lift_eval(&parse("1/(x-x)").unwrap(), &d), Err(Error::NotInvertible));
        assert_eq!(lift_eval(&parse("y").unwrap(), &d), Err(Error::UnboundVariable("y".into())));
    }

    #[test]
    fn integer_powers_of_infinitesimals() {
        let v = FermatReal::witness(2);
        let y = lift_eval(&parse("v^2 + v^3").unwrap(), &env(&[("v", v)])).unwrap();
        assert_eq!(y, FermatReal::witness(1));
    }

    #[test]
    fn weil_exponential_of_sum() {
        let b = make_algebra([[1, 0], [0, 1], [1, 1]]).unwrap();
        let x = WeilElement::generator(&b, 0).unwrap();
        let y = WeilElement::generator(&b, 1).unwrap();
        let wenv: WeilEnv = [("x".to_string(), x), ("y".to_string(), y)].into_iter().collect();
        let got = lift_eval_weil(&parse("exp(x+y)").unwrap(), &b, &wenv).unwrap();
        let expected = WeilElement::from_coeffs(
            &b,
            1.0,
            [(MultiIndex::from([1, 0]), 1.0), (MultiIndex::from([0, 1]), 1.0), (MultiIndex::from([1, 1]), 1.0)],
        )
        .unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn weil_product_vanishes_on_d_times_d() {
        let dd = make_algebra([[1, 0], [0, 1]]).unwrap();
        let wenv: WeilEnv = [
            ("a".to_string(), WeilElement::generator(&dd, 0).unwrap()),
            ("b".to_string(), WeilElement::generator(&dd, 1).unwrap()),
        ]
        .into_iter()
        .collect();
        assert!(lift_eval_weil(&parse("a*b").unwrap(), &dd, &wenv).unwrap().is_zero());
        let c = lift_eval_weil(&parse("2.5").unwrap(), &dd, &wenv).unwrap();
        assert_eq!(c, WeilElement::constant(&dd, 2.5));
    }

    #[test]
    fn weil_algebra_mismatch() {
        let a = make_algebra([[1]]).unwrap();
        let b = make_algebra([[2]]).unwrap();
        let wenv: WeilEnv = [("x".to_string(), WeilElement::generator(&b, 0).unwrap())].into_iter().collect();
        assert_eq!(lift_eval_weil(&parse("x").unwrap(), &a, &wenv), Err(Error::AlgebraMismatch));
    }

    #[test]
    fn jets() {
        let jet = derive(&parse("x^2").unwrap(), "x", 1.0, 1).unwrap();
        assert_eq!(jet.coefficients(), &[1.0, 2.0]);
        let jet = derive(&parse("exp(x)").unwrap(), "x", 0.0, 3).unwrap();
        assert_eq!(jet.coefficients(), &[1.0, 1.0, 0.5, 1.0 / 6.0]);
        assert_eq!(jet.derivatives(), vec![1.0, 1.0, 1.0, 1.0]);
        let jet = derive(&parse("1/sqrt(1-x)").unwrap(), "x", 0.0, 2).unwrap();
        for (got, want) in jet.coefficients().iter().zip([1.0, 0.5, 0.375]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!(derive(&parse("x").unwrap(), "x", 0.0, 0).is_err());
    }

    #[test]
    fn mixed_partials() {
        let xy = parse("x*y").unwrap();
        let got = mixed_partial(&xy, &["x", "y"], &[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]).unwrap();
        assert_eq!(got, 1.0);
        let e = parse("sin(x)*cos(y)").unwrap();
        let (u, v, p) = ([0.3, -1.2], [0.7, 0.4], [0.9, -0.2]);
        let uv = mixed_partial(&e, &["x", "y"], &u, &v, &p).unwrap();
        let vu = mixed_partial(&e, &["x", "y"], &v, &u, &p).unwrap();
        assert_eq!(uv, vu);
        let (c0, s0, c1, s1) = (p[0].cos(), p[0].sin(), p[1].cos(), p[1].sin());
        let hessian = [[-s0 * c1, -c0 * s1], [-c0 * s1, -s0 * c1]];
        let exact: f64 = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| u[i] * hessian[i][j] * v[j]).sum();
        assert!((uv - exact).abs() < 1e-14);
    }

    #[test]
    fn multi_index_enumeration() {
        assert_eq!(multi_indices(2, 3).len(), 6);
        assert_eq!(multi_indices(3, 5).len(), 35);
        assert_eq!(multi_indices(2, 2), vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn integral_corollary() {
        let cos = parse("cos(x)").unwrap();
        let t = FermatReal::witness(1);
        assert_eq!(infinitesimal_integral(&cos, "x", 0.0, &t).unwrap(), t);
        assert!(infinitesimal_integral(&cos, "x", 0.0, &FermatReal::zero()).unwrap().is_zero());
        let exp = parse("exp(x)").unwrap();
        let got = infinitesimal_integral(&exp, "x", 1.0, &t.scale(2.0)).unwrap();
        assert_eq!(got, t.scale(2.0 * std::f64::consts::E));
        assert_eq!(
            infinitesimal_integral(&exp, "x", 1.0, &FermatReal::witness(2)),
            Err(Error::NotFirstOrder)
        );
    }

    #[test]
    fn second_derivation_formula() {
        let sin = parse("sin(x)").unwrap();
        let h = FermatReal::witness(2);
        assert!(second_derivation_check(&sin, "x", 0.0, &h, &h).unwrap());
        assert!(second_derivation_check(&sin, "x", 0.4, &FermatReal::zero(), &h).unwrap());
        let exp = parse("exp(x)").unwrap();
        let h = FermatReal::monomial(1.0, q(2, 3));
        let k = FermatReal::monomial(1.0, q(1, 3));
        assert!(second_derivation_check(&exp, "x", 1.0, &h, &k).unwrap());
        let k = FermatReal::witness(3);
        assert_eq!(second_derivation_check(&exp, "x", 1.0, &k, &k), Err(Error::NotFirstOrder));
    }

    #[test]
    fn tower_is_memoized() {
        let a = elementary_derivative(Func::Tan, 3);
        let b = elementary_derivative(Func::Tan, 3);
        assert!(Arc::ptr_eq(&a, &b));
    }
}
