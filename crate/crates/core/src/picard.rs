//! Integer arithmetic in the Picard lattice of a blow-up of the plane.
//!
//! A class on the blow-up at `r` points is stored as `(d; m1, ..., mr)` and
//! means `dH - m1 E1 - ... - mr Er`. With this convention curve
//! multiplicities are stored positive, the canonical class is
//! `(-3; -1, ..., -1)`, and the intersection product reads
//! `a.d * b.d - sum a.mi * b.mi`.
//!
//! Every quantity is an unbounded [`BigInt`]; nothing here touches floating
//! point.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PicardError {
    #[error("dimension mismatch: class on {left} points against class on {right} points")]
    DimensionMismatch { left: usize, right: usize },
    #[error("malformed class text {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// `dH - sum mi Ei` on the blow-up at `m.len()` points.
///
/// Ordering is lexicographic on `(d, m1, ..., mr)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    d: BigInt,
    m: Vec<BigInt>,
}

impl DivisorClass {
    pub fn new(d: impl Into<BigInt>, m: Vec<BigInt>) -> Self {
        Self { d: d.into(), m }
    }

    pub fn from_i64(d: i64, m: &[i64]) -> Self {
        Self {
            d: BigInt::from(d),
            m: m.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn zero(r: usize) -> Self {
        Self { d: BigInt::zero(), m: vec![BigInt::zero(); r] }
    }

    /// Pullback of a general line.
    pub fn hyperplane(r: usize) -> Self {
        Self { d: BigInt::one(), m: vec![BigInt::zero(); r] }
    }

    /// The exceptional class `Ei` (0-based `index`), stored as `(0; .., -1, ..)`.
    pub fn exceptional(r: usize, index: usize) -> Self {
        assert!(index < r, "exceptional index {index} out of range for r = {r}");
        let mut m = vec![BigInt::zero(); r];
        m[index] = -BigInt::one();
        Self { d: BigInt::zero(), m }
    }

    /// `(d; n, ..., n)` on `r` points.
    pub fn uniform(d: impl Into<BigInt>, n: impl Into<BigInt>, r: usize) -> Self {
        Self { d: d.into(), m: vec![n.into(); r] }
    }

    pub fn r(&self) -> usize {
        self.m.len()
    }

    pub fn degree(&self) -> &BigInt {
        &self.d
    }

    pub fn multiplicities(&self) -> &[BigInt] {
        &self.m
    }

    pub fn self_intersection(&self) -> BigInt {
        dot(&self.d, &self.m, &self.d, &self.m)
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        Self {
            d: &self.d * k,
            m: self.m.iter().map(|x| x * k).collect(),
        }
    }

    /// Greatest common divisor of all coefficients (zero for the zero class).
    pub fn content(&self) -> BigInt {
        self.m.iter().fold(self.d.abs(), |g, x| g.gcd(x))
    }

    /// Class with the same slots as `i64`, if every coefficient fits.
    pub fn to_i64s(&self) -> Option<(i64, Vec<i64>)> {
        let d = self.d.to_i64()?;
        let m = self.m.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>()?;
        Some((d, m))
    }

    /// Append one more slot, producing a class on `r + 1` points.
    pub fn extend(&self, t: impl Into<BigInt>) -> ExtendedClass {
        ExtendedClass { base: self.clone(), t: t.into() }
    }

    fn check_same_r(&self, other: &Self) -> Result<(), PicardError> {
        if self.r() == other.r() {
            Ok(())
        } else {
            Err(PicardError::DimensionMismatch { left: self.r(), right: other.r() })
        }
    }
}

fn dot(ad: &BigInt, am: &[BigInt], bd: &BigInt, bm: &[BigInt]) -> BigInt {
    let mut acc = ad * bd;
    for (x, y) in am.iter().zip(bm) {
        acc -= x * y;
    }
    acc
}

/// Intersection product `a.d * b.d - sum a.mi * b.mi`.
pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> Result<BigInt, PicardError> {
    a.check_same_r(b)?;
    Ok(dot(&a.d, &a.m, &b.d, &b.m))
}

/// `K = -3H + E1 + ... + Er`, stored as `(-3; -1, ..., -1)`.
pub fn canonical_class(r: usize) -> DivisorClass {
    DivisorClass::uniform(-3, -1, r)
}

/// `K . D` for a class on `D.r()` points.
pub fn canonical_dot(d: &DivisorClass) -> BigInt {
    // K.D = -3d + sum mi
    let mut acc = BigInt::from(-3) * &d.d;
    for x in &d.m {
        acc += x;
    }
    acc
}

/// `-K . L`.
pub fn anticanonical_dot(l: &DivisorClass) -> BigInt {
    -canonical_dot(l)
}

/// Riemann–Roch: `(D^2 - K.D)/2 + 1`.
pub fn euler_characteristic(d: &DivisorClass) -> BigInt {
    let num = d.self_intersection() - canonical_dot(d);
    debug_assert!(num.is_even());
    num / 2 + 1
}

/// Adjunction: `(D^2 + K.D)/2 + 1`.
pub fn arithmetic_genus(d: &DivisorClass) -> BigInt {
    let num = d.self_intersection() + canonical_dot(d);
    debug_assert!(num.is_even());
    num / 2 + 1
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: Self) -> DivisorClass {
        assert_eq!(self.r(), rhs.r(), "adding classes on different lattices");
        DivisorClass {
            d: &self.d + &rhs.d,
            m: self.m.iter().zip(&rhs.m).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: Self) -> DivisorClass {
        self + &(-rhs)
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass { d: -&self.d, m: self.m.iter().map(|x| -x).collect() }
    }
}

impl Mul<&DivisorClass> for &BigInt {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scaled(self)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.d)?;
        for (i, x) in self.m.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

fn parse_int(field: &str, whole: &str) -> Result<BigInt, PicardError> {
    let s = field.trim();
    BigInt::from_str(s).map_err(|_| PicardError::Parse {
        text: whole.to_string(),
        reason: format!("{s:?} is not an integer"),
    })
}

fn parse_list(text: &str, list: &str) -> Result<Vec<BigInt>, PicardError> {
    if list.trim().is_empty() {
        return Ok(Vec::new());
    }
    list.split(',').map(|x| parse_int(x, text)).collect()
}

/// Parses the canonical text form `d;m1,m2,...,mr` (`d;` when r = 0).
impl FromStr for DivisorClass {
    type Err = PicardError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (d, rest) = text.split_once(';').ok_or_else(|| PicardError::Parse {
            text: text.to_string(),
            reason: "expected `d;m1,...,mr`".into(),
        })?;
        if rest.contains(';') {
            return Err(PicardError::Parse {
                text: text.to_string(),
                reason: "unexpected extra `;` (extended classes use `d;m1,...,mr;t`)".into(),
            });
        }
        Ok(Self { d: parse_int(d, text)?, m: parse_list(text, rest)? })
    }
}

/// A class on the blow-up of `X_r` at one further point `x`: the last slot is
/// the coefficient `t` of `E_x`, i.e. the class `dH - sum mi Ei - t E_x`.
///
/// Every lattice operation delegates to the `(r + 1)`-point [`DivisorClass`]
/// returned by [`ExtendedClass::as_divisor`]. Enumerations over the
/// `(r + 1)`-point lattice can produce `t < 0` (for instance `E_x` itself); such
/// classes are never strict transforms of curves through `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtendedClass {
    pub base: DivisorClass,
    pub t: BigInt,
}

impl ExtendedClass {
    pub fn new(base: DivisorClass, t: impl Into<BigInt>) -> Self {
        Self { base, t: t.into() }
    }

    pub fn from_i64(d: i64, m: &[i64], t: i64) -> Self {
        Self { base: DivisorClass::from_i64(d, m), t: BigInt::from(t) }
    }

    /// Number of blown-up points, not counting `x`.
    pub fn r(&self) -> usize {
        self.base.r()
    }

    pub fn as_divisor(&self) -> DivisorClass {
        let mut m = self.base.m.clone();
        m.push(self.t.clone());
        DivisorClass { d: self.base.d.clone(), m }
    }

    /// Splits the last slot off an `(r + 1)`-point class.
    pub fn from_divisor(c: &DivisorClass) -> Self {
        assert!(c.r() >= 1, "need at least one slot to distinguish");
        let mut m = c.m.clone();
        let t = m.pop().expect("non-empty");
        Self { base: DivisorClass { d: c.d.clone(), m }, t }
    }

    pub fn self_intersection(&self) -> BigInt {
        self.base.self_intersection() - &self.t * &self.t
    }

    /// `K . c` on the blow-up at `x`, where `K = (-3; -1, ..., -1, -1)`.
    pub fn canonical_dot(&self) -> BigInt {
        canonical_dot(&self.base) + &self.t
    }

    pub fn euler_characteristic(&self) -> BigInt {
        euler_characteristic(&self.as_divisor())
    }

    pub fn arithmetic_genus(&self) -> BigInt {
        arithmetic_genus(&self.as_divisor())
    }

    /// `L . C` for `L` pulled back from `X_r` (it has no `E_x` component), which
    /// is the intersection with the image curve `C` on `X_r`.
    pub fn dot_pullback(&self, l: &DivisorClass) -> Result<BigInt, PicardError> {
        intersect(l, &self.base)
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        Self { base: self.base.scaled(k), t: &self.t * k }
    }

    pub fn is_negative(&self) -> bool {
        self.self_intersection().is_negative()
    }
}

pub fn intersect_extended(a: &ExtendedClass, b: &ExtendedClass) -> Result<BigInt, PicardError> {
    Ok(intersect(&a.base, &b.base)? - &a.t * &b.t)
}

impl fmt::Display for ExtendedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.base, self.t)
    }
}

/// Parses `d;m1,...,mr;t`.
impl FromStr for ExtendedClass {
    type Err = PicardError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (head, t) = text.rsplit_once(';').ok_or_else(|| PicardError::Parse {
            text: text.to_string(),
            reason: "expected `d;m1,...,mr;t`".into(),
        })?;
        if !head.contains(';') {
            return Err(PicardError::Parse {
                text: text.to_string(),
                reason: "expected `d;m1,...,mr;t`".into(),
            });
        }
        let base = DivisorClass::from_str(head).map_err(|e| match e {
            PicardError::Parse { reason, .. } => PicardError::Parse { text: text.to_string(), reason },
            other => other,
        })?;
        Ok(Self { base, t: parse_int(t, text)? })
    }
}

// JSON: integers that fit in i64 are emitted as numbers, larger ones as
// decimal strings; both are accepted on input.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonInt;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
                Ok(JsonInt(BigInt::from(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
                Ok(JsonInt(BigInt::from(v)))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
                BigInt::from_str(v).map(JsonInt).map_err(|_| E::custom(format!("bad integer {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassJson {
    h: JsonInt,
    e: Vec<JsonInt>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtendedJson {
    h: JsonInt,
    e: Vec<JsonInt>,
    t: JsonInt,
}

/// JSON form `{"h": d, "e": [m1, ..., mr]}`.
impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ClassJson {
            h: JsonInt(self.d.clone()),
            e: self.m.iter().cloned().map(JsonInt).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ClassJson::deserialize(d)?;
        Ok(Self { d: j.h.0, m: j.e.into_iter().map(|x| x.0).collect() })
    }
}

/// JSON form `{"h": d, "e": [m1, ..., mr], "t": t}`.
impl Serialize for ExtendedClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ExtendedJson {
            h: JsonInt(self.base.d.clone()),
            e: self.base.m.iter().cloned().map(JsonInt).collect(),
            t: JsonInt(self.t.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExtendedClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ExtendedJson::deserialize(d)?;
        Ok(Self {
            base: DivisorClass { d: j.h.0, m: j.e.into_iter().map(|x| x.0).collect() },
            t: j.t.0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(d: i64, m: &[i64]) -> DivisorClass {
        DivisorClass::from_i64(d, m)
    }

    #[test]
    fn basis_products() {
        assert_eq!(intersect(&c(1, &[]), &c(1, &[])).unwrap(), BigInt::from(1));
        assert_eq!(intersect(&c(0, &[1, 0]), &c(0, &[0, 1])).unwrap(), BigInt::zero());
        let e1 = DivisorClass::exceptional(3, 0);
        assert_eq!(e1.self_intersection(), BigInt::from(-1));
        assert_eq!(intersect(&DivisorClass::hyperplane(3), &e1).unwrap(), BigInt::zero());
    }

    #[test]
    fn mismatched_lattices_are_rejected() {
        let err = intersect(&c(1, &[1]), &c(1, &[1, 1])).unwrap_err();
        assert_eq!(err, PicardError::DimensionMismatch { left: 1, right: 2 });
    }

    #[test]
    fn canonical_class_examples() {
        assert_eq!(canonical_class(3), c(-3, &[-1, -1, -1]));
        assert_eq!(canonical_class(0), c(-3, &[]));
        let k8 = canonical_class(8);
        assert_eq!(k8.self_intersection(), BigInt::from(1));
        assert_eq!(anticanonical_dot(&c(3, &[1; 8])), BigInt::from(1));
    }

    #[test]
    fn canonical_square_is_nine_minus_r() {
        for r in 0..=12usize {
            assert_eq!(canonical_class(r).self_intersection(), BigInt::from(9 - r as i64));
        }
    }

    #[test]
    fn euler_characteristic_examples() {
        for r in 0..5 {
            assert_eq!(euler_characteristic(&DivisorClass::zero(r)), BigInt::one());
        }
        assert_eq!(euler_characteristic(&c(3, &[1; 8])), BigInt::from(2));
        // E_i: square -1, K.E = -1.
        assert_eq!(euler_characteristic(&DivisorClass::exceptional(4, 2)), BigInt::one());
    }

    #[test]
    fn arithmetic_genus_examples() {
        assert_eq!(arithmetic_genus(&c(3, &[1; 8])), BigInt::one());
        let nodal = ExtendedClass::from_i64(3, &[1; 8], 2);
        assert_eq!(nodal.self_intersection(), BigInt::from(-3));
        assert_eq!(nodal.canonical_dot(), BigInt::from(1));
        assert_eq!(nodal.arithmetic_genus(), BigInt::zero());
        assert_eq!(arithmetic_genus(&c(1, &[])), BigInt::zero());
    }

    #[test]
    fn text_form_round_trips() {
        let cls: DivisorClass = "3;1,1,1,1,1,1,1,1".parse().unwrap();
        assert_eq!(cls, c(3, &[1; 8]));
        assert_eq!(cls.to_string(), "3;1,1,1,1,1,1,1,1");
        let p2: DivisorClass = "1;".parse().unwrap();
        assert_eq!(p2.r(), 0);
        assert_eq!(p2.to_string(), "1;");
        let ext: ExtendedClass = "3;1,1,1,1,1,1,1,1;2".parse().unwrap();
        assert_eq!(ext, ExtendedClass::from_i64(3, &[1; 8], 2));
        assert_eq!(ext.to_string(), "3;1,1,1,1,1,1,1,1;2");
    }

    #[test]
    fn malformed_text_is_rejected() {
        for bad in ["", "3", "3;1,x", "a;1", "3;1;2;4", "3;1,,1"] {
            assert!(bad.parse::<DivisorClass>().is_err(), "{bad:?}");
        }
        assert!("3;1,1".parse::<ExtendedClass>().is_err());
    }

    #[test]
    fn json_form() {
        let cls = c(3, &[1, 1, 1, 1, 1, 1, 1, 1]);
        let s = serde_json::to_string(&cls).unwrap();
        assert_eq!(s, r#"{"h":3,"e":[1,1,1,1,1,1,1,1]}"#);
        let back: DivisorClass = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cls);
        let big = DivisorClass::new(BigInt::from(10).pow(30), vec![BigInt::from(-2)]);
        let s = serde_json::to_string(&big).unwrap();
        assert_eq!(s, r#"{"h":"1000000000000000000000000000000","e":[-2]}"#);
        assert_eq!(serde_json::from_str::<DivisorClass>(&s).unwrap(), big);
        let ext = ExtendedClass::from_i64(3, &[1; 8], 2);
        assert_eq!(
            serde_json::to_string(&ext).unwrap(),
            r#"{"h":3,"e":[1,1,1,1,1,1,1,1],"t":2}"#
        );
    }

    #[test]
    fn extended_view_delegates() {
        let e = ExtendedClass::from_i64(2, &[1, 1, 1], 1);
        let flat = e.as_divisor();
        assert_eq!(flat, c(2, &[1, 1, 1, 1]));
        assert_eq!(ExtendedClass::from_divisor(&flat), e);
        assert_eq!(e.self_intersection(), flat.self_intersection());
        assert_eq!(e.canonical_dot(), canonical_dot(&flat));
    }

    #[test]
    fn content_and_scaling() {
        let k = canonical_class(8);
        let two_k = k.scaled(&BigInt::from(-2));
        assert_eq!(two_k, c(6, &[2; 8]));
        assert_eq!(two_k.content(), BigInt::from(2));
        assert_eq!(DivisorClass::zero(3).content(), BigInt::zero());
    }
}
