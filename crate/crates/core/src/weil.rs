//! Weil algebras `R^{D_α}` presented as polynomial rings modulo monomial ideals.
//!
//! For a family `α = (α_1, …, α_c)` of multi-indices in `Nⁿ`, the object
//! `D_α = { h ∈ ⋅Rⁿ | h^{α_i} ∈ D for all i }` carries a Taylor formula whose
//! monomials are exactly the `r` with `r ≤ α_i` (componentwise) for some `i`.
//! Those monomials span the algebra; every other monomial is zero.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fermat::FermatReal;
use crate::format::format_significant;

/// A multi-index `r = (r^1, …, r^n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(components: Vec<u32>) -> Self {
        MultiIndex(components)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The exponent of the `j`-th generator.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[j] = 1;
        MultiIndex(v)
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `r! = r^1!·…·r^n!`.
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&c| (1..=c).map(f64::from).product::<f64>())
            .product()
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(v: &[u32]) -> Self {
        MultiIndex(v.to_vec())
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        MultiIndex(v.to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A normalized family `α` together with its surviving monomials.
#[derive(Debug, PartialEq, Eq)]
pub struct WeilAlgebraSpec {
    alphas: Vec<MultiIndex>,
    surviving: BTreeSet<MultiIndex>,
}

/// Shared handle to an algebra; elements keep one of these.
pub type WeilAlgebra = Arc<WeilAlgebraSpec>;

/// Builds the algebra of `D_α`.
///
/// The first `n` entries must be the diagonal bounds `k_j·e_j` with `k_j ≥ 1`
/// and every further entry must satisfy `α_i^j ≤ k_j`.
pub fn make_algebra<I, M>(alphas: I) -> Result<WeilAlgebra>
where
    I: IntoIterator<Item = M>,
    M: Into<MultiIndex>,
{
    WeilAlgebraSpec::new(alphas.into_iter().map(Into::into).collect()).map(Arc::new)
}

/// The monomials carrying a coefficient in the Taylor formula on `D_α`,
/// including the constant monomial.
pub fn weil_taylor_monomials(spec: &WeilAlgebraSpec) -> BTreeSet<MultiIndex> {
    let mut out = spec.surviving.clone();
    out.insert(MultiIndex::zero(spec.generators()));
    out
}

impl WeilAlgebraSpec {
    pub fn new(alphas: Vec<MultiIndex>) -> Result<Self> {
        let n = alphas
            .first()
            .map(MultiIndex::len)
            .ok_or_else(|| Error::MalformedAlpha("empty family".into()))?;
        if n == 0 {
            return Err(Error::MalformedAlpha("multi-indices must have at least one component".into()));
        }
        if let Some(bad) = alphas.iter().find(|a| a.len() != n) {
            return Err(Error::MalformedAlpha(format!("{bad} has length {} but expected {n}", bad.len())));
        }
        if alphas.len() < n {
            return Err(Error::MalformedAlpha(format!(
                "{} multi-indices given but the first {n} must be diagonal",
                alphas.len()
            )));
        }
        let mut bounds = Vec::with_capacity(n);
        for (j, alpha) in alphas.iter().take(n).enumerate() {
            let k = alpha.0[j];
            let diagonal = k >= 1 && alpha.0.iter().enumerate().all(|(i, &c)| i == j || c == 0);
            if !diagonal {
                return Err(Error::MalformedAlpha(format!(
                    "entry {j} is {alpha}, expected k·e_{j} with k ≥ 1"
                )));
            }
            bounds.push(k);
        }
        for alpha in &alphas[n..] {
            if alpha.0.iter().zip(&bounds).any(|(a, k)| a > k) {
                return Err(Error::MalformedAlpha(format!(
                    "{alpha} exceeds the diagonal bounds {}",
                    MultiIndex(bounds.clone())
                )));
            }
        }

        // Every surviving monomial lies in the box bounded by the diagonal entries.
        let mut surviving = BTreeSet::new();
        let mut r = vec![0u32; n];
        loop {
            let mono = MultiIndex(r.clone());
            if !mono.is_zero() && alphas.iter().any(|a| mono.le(a)) {
                surviving.insert(mono);
            }
            let mut j = 0;
            loop {
                if j == n {
                    return Ok(WeilAlgebraSpec { alphas, surviving });
                }
                if r[j] < bounds[j] {
                    r[j] += 1;
                    break;
                }
                r[j] = 0;
                j += 1;
            }
        }
    }

    /// Number of generators `n`.
    pub fn generators(&self) -> usize {
        self.alphas[0].len()
    }

    pub fn alphas(&self) -> &[MultiIndex] {
        &self.alphas
    }

    /// Nonzero monomials that are not killed by the ideal.
    pub fn surviving(&self) -> &BTreeSet<MultiIndex> {
        &self.surviving
    }

    /// `dim_R = 1 + |surviving|`.
    pub fn dimension(&self) -> usize {
        1 + self.surviving.len()
    }

    pub fn survives(&self, r: &MultiIndex) -> bool {
        self.surviving.contains(r)
    }

    pub fn max_degree(&self) -> u32 {
        self.surviving.iter().map(MultiIndex::total_degree).max().unwrap_or(0)
    }
}

/// An element `std + Σ c_r·x^r` of a Weil algebra.
#[derive(Clone, Debug)]
pub struct WeilElement {
    algebra: WeilAlgebra,
    std: f64,
    coeffs: BTreeMap<MultiIndex, f64>,
}

impl PartialEq for WeilElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.std == other.std && self.coeffs == other.coeffs
    }
}

impl WeilElement {
    pub fn constant(algebra: &WeilAlgebra, r: f64) -> Self {
        WeilElement {
            algebra: Arc::clone(algebra),
            std: if r == 0.0 { 0.0 } else { r },
            coeffs: BTreeMap::new(),
        }
    }

    pub fn zero(algebra: &WeilAlgebra) -> Self {
        Self::constant(algebra, 0.0)
    }

    /// The generator `x_j`.
    pub fn generator(algebra: &WeilAlgebra, j: usize) -> Result<Self> {
        let n = algebra.generators();
        if j >= n {
            return Err(Error::NotInAlgebra(format!("generator {j} of an algebra with {n} generators")));
        }
        Self::from_coeffs(algebra, 0.0, [(MultiIndex::unit(n, j), 1.0)])
    }

    /// Builds an element from explicit coefficients; the zero monomial adds to the standard part.
    pub fn from_coeffs<I>(algebra: &WeilAlgebra, std: f64, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, f64)>,
    {
        let mut out = Self::constant(algebra, std);
        for (mono, c) in coeffs {
            if mono.is_zero() && mono.len() == algebra.generators() {
                out.std += c;
            } else if algebra.survives(&mono) {
                *out.coeffs.entry(mono).or_insert(0.0) += c;
            } else {
                return Err(Error::NotInAlgebra(mono.to_string()));
            }
        }
        out.canonicalize();
        Ok(out)
    }

    fn canonicalize(&mut self) {
        if self.std == 0.0 {
            self.std = 0.0;
        }
        self.coeffs.retain(|_, c| *c != 0.0);
    }

    pub fn algebra(&self) -> &WeilAlgebra {
        &self.algebra
    }

    pub fn same_algebra(&self, other: &WeilElement) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra.alphas == other.algebra.alphas
    }

    pub fn standard_part(&self) -> f64 {
        self.std
    }

    /// Nonzero coefficients keyed by surviving monomial, in lexicographic order.
    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, f64> {
        &self.coeffs
    }

    pub fn coefficient(&self, r: &MultiIndex) -> f64 {
        if r.is_zero() {
            self.std
        } else {
            self.coeffs.get(r).copied().unwrap_or(0.0)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.std == 0.0 && self.coeffs.is_empty()
    }

    pub fn nilpotent_part(&self) -> Self {
        WeilElement {
            algebra: Arc::clone(&self.algebra),
            std: 0.0,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, r: f64) -> Self {
        self.map_coefficients(|c| c * r)
    }

    pub(crate) fn map_coefficients(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut out = WeilElement {
            algebra: Arc::clone(&self.algebra),
            std: f(self.std),
            coeffs: self.coeffs.iter().map(|(r, &c)| (r.clone(), f(c))).collect(),
        };
        out.canonicalize();
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coefficients(|c| -c)
    }

    fn check(&self, other: &WeilElement) -> Result<()> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn checked_add(&self, other: &WeilElement) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        out.std += other.std;
        for (r, &c) in &other.coeffs {
            *out.coeffs.entry(r.clone()).or_insert(0.0) += c;
        }
        out.canonicalize();
        Ok(out)
    }

    pub fn checked_sub(&self, other: &WeilElement) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    /// Product in `R[x₁,…,xₙ]/I`: monomials outside the surviving set are deleted.
    pub fn checked_mul(&self, other: &WeilElement) -> Result<Self> {
        self.check(other)?;
        let n = self.algebra.generators();
        let zero = MultiIndex::zero(n);
        let lhs: Vec<(&MultiIndex, f64)> = std::iter::once((&zero, self.std))
            .chain(self.coeffs.iter().map(|(r, &c)| (r, c)))
            .filter(|&(_, c)| c != 0.0)
            .collect();
        let rhs: Vec<(&MultiIndex, f64)> = std::iter::once((&zero, other.std))
            .chain(other.coeffs.iter().map(|(r, &c)| (r, c)))
            .filter(|&(_, c)| c != 0.0)
            .collect();
        let mut buckets: BTreeMap<MultiIndex, Vec<f64>> = BTreeMap::new();
        for &(r, a) in &lhs {
            for &(s, b) in &rhs {
                let m = r.add(s);
                if m.is_zero() || self.algebra.survives(&m) {
                    buckets.entry(m).or_default().push(a * b);
                }
            }
        }
        let mut out = Self::zero(&self.algebra);
        for (m, mut parts) in buckets {
            parts.sort_by(f64::total_cmp);
            let c: f64 = parts.iter().sum();
            if m.is_zero() {
                out.std = c;
            } else {
                out.coeffs.insert(m, c);
            }
        }
        out.canonicalize();
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(&self.algebra, 1.0);
        for _ in 0..n {
            if acc.is_zero() {
                break;
            }
            acc = acc.checked_mul(self).expect("same algebra");
        }
        acc
    }

    /// Least `N` with `x^N = 0`, or `None` when the standard part is nonzero.
    pub fn nilpotency_index(&self) -> Option<u32> {
        if self.std != 0.0 {
            return None;
        }
        let bound = self.algebra.max_degree() + 1;
        let mut power = self.clone();
        let mut n = 1;
        while !power.is_zero() && n < bound {
            power = power.checked_mul(self).expect("same algebra");
            n += 1;
        }
        Some(n)
    }

    /// Inverse via the finite geometric series; requires a nonzero standard part.
    pub fn invert(&self) -> Result<Self> {
        let a = self.std;
        if a == 0.0 {
            return Err(Error::NotInvertible);
        }
        let ratio = self.nilpotent_part().map_coefficients(|c| -c / a);
        let order = ratio.nilpotency_index().unwrap_or(1);
        let mut sum = Self::constant(&self.algebra, 1.0);
        let mut power = sum.clone();
        for _ in 1..order {
            power = power.checked_mul(&ratio)?;
            sum = sum.checked_add(&power)?;
        }
        Ok(sum.map_coefficients(|c| c / a))
    }

    /// Image under the homomorphism sending `x_j` to `images[j]`.
    ///
    /// The map is a ring homomorphism only when the images satisfy the
    /// algebra's relations, i.e. `images^β = 0` for every killed `β`.
    pub fn evaluate_at(&self, images: &[FermatReal]) -> Result<FermatReal> {
        if images.len() != self.algebra.generators() {
            return Err(Error::AlgebraMismatch);
        }
        let mut out = FermatReal::real(self.std);
        for (r, &c) in &self.coeffs {
            let term: FermatReal = r
                .components()
                .iter()
                .zip(images)
                .map(|(&e, x)| x.pow(e))
                .product();
            out += &term.scale(c);
        }
        Ok(out)
    }

    /// Text form using the given generator names, monomials in graded order.
    pub fn render(&self, names: &[String]) -> String {
        let mut monos: Vec<(&MultiIndex, f64)> = self.coeffs.iter().map(|(r, &c)| (r, c)).collect();
        monos.sort_by(|(a, _), (b, _)| a.total_degree().cmp(&b.total_degree()).then_with(|| b.cmp(a)));
        let mut pieces: Vec<(bool, String)> = Vec::new();
        if self.std != 0.0 || monos.is_empty() {
            pieces.push((self.std < 0.0, format_significant(self.std.abs(), 6)));
        }
        for (r, c) in monos {
            let factors: Vec<String> = r
                .components()
                .iter()
                .enumerate()
                .filter(|&(_, &e)| e > 0)
                .map(|(j, &e)| {
                    let name = names.get(j).cloned().unwrap_or_else(|| format!("x{}", j + 1));
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            pieces.push((c < 0.0, format!("{}·{}", format_significant(c.abs(), 6), factors.join("·"))));
        }
        let mut out = String::new();
        for (i, (negative, body)) in pieces.into_iter().enumerate() {
            let sep = match (i, negative) {
                (0, true) => "−",
                (0, false) => "",
                (_, true) => " − ",
                (_, false) => " + ",
            };
            out.push_str(sep);
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for WeilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}
