//! Expected dimension of fat-point linear systems and the non-reducedness
//! predicates of the SHGH family of conjectures.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::picard::{DivisorClass, ExtendedClass, JsonInt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShghError {
    #[error("conjecture predicates need d >= 1 (got d = {0})")]
    DegreeTooSmall(BigInt),
    #[error("predicate needs t >= {min} (got t = {got})")]
    MultiplicityTooSmall { min: u32, got: BigInt },
    #[error("multiplicities must be non-negative")]
    NegativeMultiplicity,
}

/// The system `|dH - sum mi Ei|` together with an extra point of
/// multiplicity `t`.
///
/// `t` is kept apart from `m` so the same value feeds both the predicates and
/// the [`ExtendedClass`] view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FatPointSystem {
    pub d: BigInt,
    pub m: Vec<BigInt>,
    pub t: BigInt,
}

impl FatPointSystem {
    pub fn new(d: impl Into<BigInt>, m: Vec<BigInt>, t: impl Into<BigInt>) -> Self {
        Self { d: d.into(), m, t: t.into() }
    }

    pub fn from_i64(d: i64, m: &[i64], t: i64) -> Self {
        Self::new(d, m.iter().map(|&x| BigInt::from(x)).collect(), t)
    }

    pub fn from_extended(c: &ExtendedClass) -> Self {
        Self {
            d: c.base.degree().clone(),
            m: c.base.multiplicities().to_vec(),
            t: c.t.clone(),
        }
    }

    pub fn to_extended(&self) -> ExtendedClass {
        ExtendedClass::new(DivisorClass::new(self.d.clone(), self.m.clone()), self.t.clone())
    }

    fn check_entries(&self) -> Result<(), ShghError> {
        if self.m.iter().any(Signed::is_negative) || self.t.is_negative() {
            return Err(ShghError::NegativeMultiplicity);
        }
        Ok(())
    }

    /// `C(d+2, 2) - sum C(mi+1, 2)`, the number of conditions left over
    /// after imposing the points `p1, ..., pr` (the `t`-point is excluded).
    pub fn virtual_sections(&self) -> BigInt {
        let mut v = binomial2(&(&self.d + 2));
        for mi in &self.m {
            v -= binomial2(&(mi + 1));
        }
        v
    }
}

/// `C(n, 2)` with the convention `C(n, 2) = 0` for `n < 2`.
pub fn binomial2(n: &BigInt) -> BigInt {
    if n < &BigInt::from(2) {
        BigInt::zero()
    } else {
        n * (n - 1) / 2
    }
}

/// `max{ C(d+2,2) - sum C(mi+1,2) - 1, -1 }`, counting `t` as one more
/// multiplicity when `t > 0`.
pub fn expected_dim(sys: &FatPointSystem) -> BigInt {
    let mut v: BigInt = sys.virtual_sections() - 1;
    if sys.t.is_positive() {
        v -= binomial2(&(&sys.t + 1));
    }
    v.max(-BigInt::one())
}

fn check_predicate(sys: &FatPointSystem, min_t: u32) -> Result<(), ShghError> {
    if sys.d < BigInt::one() {
        return Err(ShghError::DegreeTooSmall(sys.d.clone()));
    }
    if sys.t < BigInt::from(min_t) {
        return Err(ShghError::MultiplicityTooSmall { min: min_t, got: sys.t.clone() });
    }
    sys.check_entries()
}

/// True when Strong SHGH declares every curve in the system with a point of
/// multiplicity `t` non-reduced:
/// `C(d+2,2) - sum C(mi+1,2) <= max{ C(t+1,2) - 2, 0 }`.
pub fn strong_shgh_forces_nonreduced(sys: &FatPointSystem) -> Result<bool, ShghError> {
    check_predicate(sys, 1)?;
    let threshold = (binomial2(&(&sys.t + 1)) - BigInt::from(2)).max(BigInt::zero());
    Ok(sys.virtual_sections() <= threshold)
}

/// The weakened variant: `C(d+2,2) - sum C(mi+1,2) <= C(t,2)` for `t >= 2`.
pub fn ncon_forces_nonreduced(sys: &FatPointSystem) -> Result<bool, ShghError> {
    check_predicate(sys, 2)?;
    Ok(sys.virtual_sections() <= binomial2(&sys.t))
}

/// Small-integer form of the Strong SHGH test used by the box scans:
/// returns `virtual_sections - max{C(t+1,2) - 2, 0}`; the system survives
/// (may contain reduced curves) iff this is positive.
pub(crate) fn strong_margin(d: i64, m: &[i64], t: i64) -> i64 {
    let b2 = |n: i64| if n < 2 { 0 } else { n * (n - 1) / 2 };
    let mut v = b2(d + 2);
    for &x in m {
        v -= b2(x + 1);
    }
    v - (b2(t + 1) - 2).max(0)
}

/// CLI-facing JSON: `{"d": 3, "m": [1,1,1,1,1,1,1,1], "t": 2}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemJson {
    d: JsonInt,
    m: Vec<JsonInt>,
    #[serde(default = "zero_json")]
    t: JsonInt,
}

fn zero_json() -> JsonInt {
    JsonInt(BigInt::zero())
}

impl Serialize for FatPointSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SystemJson {
            d: JsonInt(self.d.clone()),
            m: self.m.iter().cloned().map(JsonInt).collect(),
            t: JsonInt(self.t.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FatPointSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = SystemJson::deserialize(d)?;
        Ok(Self { d: j.d.0, m: j.m.into_iter().map(|x| x.0).collect(), t: j.t.0 })
    }
}
