//! JSON forms of the value types.
//!
//! Reals are written with 17 significant digits in scientific notation so
//! that output is byte-stable and round-trips exactly; non-finite values
//! become `null`.

use std::io;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exponent::ExponentQ;
use crate::fermat::FermatReal;
use crate::weil::{MultiIndex, WeilAlgebra, WeilAlgebraSpec, WeilElement};

/// Formatter writing every `f64` as `{:.16e}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FixedFloatFormatter;

impl serde_json::ser::Formatter for FixedFloatFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Compact JSON with fixed float formatting.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloatFormatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    num: i64,
    den: i64,
    coef: f64,
}

#[derive(Serialize, Deserialize)]
struct FermatRepr {
    std: f64,
    terms: Vec<TermRepr>,
}

impl Serialize for FermatReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FermatRepr {
            std: self.standard_part(),
            terms: self
                .terms()
                .iter()
                .map(|&(q, coef)| TermRepr { num: q.numer(), den: q.denom(), coef })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FermatReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FermatRepr::deserialize(d)?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            terms.push((ExponentQ::new(t.num, t.den).map_err(D::Error::custom)?, t.coef));
        }
        Ok(FermatReal::from_terms(repr.std, terms))
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.components().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Vec::<u32>::deserialize(d).map(MultiIndex::new)
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraRepr {
    alphas: Vec<MultiIndex>,
}

impl Serialize for WeilAlgebraSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraRepr { alphas: self.alphas().to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeilAlgebraSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = AlgebraRepr::deserialize(d)?;
        WeilAlgebraSpec::new(repr.alphas).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct MonoRepr {
    mono: MultiIndex,
    coef: f64,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    std: f64,
    coeffs: Vec<MonoRepr>,
}

impl Serialize for WeilElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr {
            std: self.standard_part(),
            coeffs: self
                .coeffs()
                .iter()
                .map(|(r, &coef)| MonoRepr { mono: r.clone(), coef })
                .collect(),
        }
        .serialize(s)
    }
}

/// Reads an element of `algebra`; the JSON form does not carry the algebra.
pub fn weil_element_from_json(algebra: &WeilAlgebra, text: &str) -> Result<WeilElement> {
    let repr: ElementRepr = serde_json::from_str(text)?;
    let n = algebra.generators();
    if let Some(bad) = repr.coeffs.iter().find(|m| m.mono.len() != n) {
        return Err(Error::NotInAlgebra(format!("monomial {} has the wrong arity for {n} generators", bad.mono)));
    }
    WeilElement::from_coeffs(algebra, repr.std, repr.coeffs.into_iter().map(|m| (m.mono, m.coef)))
}

/// Reads a Fermat real.
pub fn fermat_from_json(text: &str) -> Result<FermatReal> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil::make_algebra;

    #[test]
    fn fermat_schema() {
        let x: FermatReal = "1 + 0.5·t^(1/2) − 0.125·t^1".parse().unwrap();
        let text = to_json(&x).unwrap();
        assert_eq!(
            text,
            r#"{"std":1.0000000000000000e0,"terms":[{"num":1,"den":2,"coef":5.0000000000000000e-1},{"num":1,"den":1,"coef":-1.2500000000000000e-1}]}"#
        );
        assert_eq!(fermat_from_json(&text).unwrap(), x);
    }

    #[test]
    fn input_is_canonicalized() {
        let text = r#"{"std":0,"terms":[{"num":2,"den":4,"coef":1},{"num":1,"den":2,"coef":-1},{"num":1,"den":3,"coef":2}]}"#;
        assert_eq!(fermat_from_json(text).unwrap(), FermatReal::monomial(2.0, ExponentQ::new(1, 3).unwrap()));
        assert!(fermat_from_json(r#"{"std":0,"terms":[{"num":3,"den":2,"coef":1}]}"#).is_err());
        assert!(fermat_from_json(r#"{"std":0}"#).is_err());
    }

    #[test]
    fn non_finite_is_null() {
        assert_eq!(to_json(&[f64::NAN, 1.0]).unwrap(), "[null,1.0000000000000000e0]");
    }

    #[test]
    fn weil_schema() {
        let b = make_algebra([[1, 0], [0, 1], [1, 1]]).unwrap();
        assert_eq!(to_json(&*b).unwrap(), r#"{"alphas":[[1,0],[0,1],[1,1]]}"#);
        let x = WeilElement::generator(&b, 0).unwrap();
        let y = WeilElement::generator(&b, 1).unwrap();
        let xy = x.checked_mul(&y).unwrap().checked_add(&x).unwrap();
        let text = to_json(&xy).unwrap();
        assert_eq!(
            text,
            r#"{"std":0.0000000000000000e0,"coeffs":[{"mono":[1,0],"coef":1.0000000000000000e0},{"mono":[1,1],"coef":1.0000000000000000e0}]}"#
        );
        assert_eq!(weil_element_from_json(&b, &text).unwrap(), xy);
        let bad = r#"{"std":0,"coeffs":[{"mono":[2,0],"coef":1}]}"#;
        assert!(matches!(weil_element_from_json(&b, bad), Err(Error::NotInAlgebra(_))));
        let spec: WeilAlgebraSpec = serde_json::from_str(r#"{"alphas":[[1,0],[0,1],[1,1]]}"#).unwrap();
        assert_eq!(&spec, &*b);
        assert!(serde_json::from_str::<WeilAlgebraSpec>(r#"{"alphas":[[0,1],[1,0]]}"#).is_err());
    }
}
