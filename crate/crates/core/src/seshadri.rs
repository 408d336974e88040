//! Seshadri constants `epsilon(X_r, L, x)`: exact values from the finite
//! candidate set for r <= 7, the anticanonical dichotomy at r = 8, theorem-
//! backed intervals for r >= 9, and the replays behind them.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{
    classify_negative_class, distinct_permutations, fixed_components, gamma_set, minus_curves_shared, shapes,
    Completeness, CurvesError, MinusKind, NegativeClassType, DEFAULT_GAMMA_CAP,
};
use crate::picard::{anticanonical_dot, canonical_class, intersect, DivisorClass, ExtendedClass, JsonInt, PicardError};
use crate::positivity::{check_ample, on_curve_lower_bound, PositivityCertificate, PositivityError, Verdict};
use crate::shgh::strong_margin;
use crate::surfaceconfig::{
    assess_unchecked, cremona_reduces_to_exceptional, Assumption, ConfigError, ExistenceStatus, PointSpec, Position,
    SurfaceConfig,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeshadriError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error(transparent)]
    Curves(#[from] CurvesError),
    #[error(transparent)]
    Positivity(#[from] PositivityError),
    #[error("{class} is not certified ample: {verdict}")]
    NotAmple { class: String, verdict: String },
    #[error("r = {0}: the candidate set is infinite; pass a degree cap")]
    Unbounded(usize),
    #[error("{0}")]
    Domain(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("box of {0} classes exceeds the scan budget")]
    Resource(u128),
    #[error("inconsistent bounds: {0}")]
    Inconsistent(String),
}

/// A Seshadri value: a reduced rational or the symbolic cap `sqrt(n)`.
///
/// `sqrt(n)` with `n` a perfect square is always stored as a rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SeshadriValue {
    Rational(BigRational),
    SqrtCap(BigInt),
}

impl SeshadriValue {
    pub fn rational(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        SeshadriValue::Rational(BigRational::new(p.into(), q.into()))
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        SeshadriValue::Rational(BigRational::from_integer(n.into()))
    }

    /// `sqrt(n)` for `n >= 0`.
    pub fn sqrt(n: BigInt) -> Self {
        assert!(!n.is_negative(), "square root of a negative number");
        let root = n.sqrt();
        if &root * &root == n {
            SeshadriValue::Rational(BigRational::from_integer(root))
        } else {
            SeshadriValue::SqrtCap(n)
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            SeshadriValue::Rational(q) => Some(q),
            SeshadriValue::SqrtCap(_) => None,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.as_rational().is_some_and(BigRational::is_integer)
    }

    /// `k * self` for `k >= 1`.
    pub fn scaled(&self, k: &BigInt) -> Self {
        match self {
            SeshadriValue::Rational(q) => SeshadriValue::Rational(q * BigRational::from_integer(k.clone())),
            SeshadriValue::SqrtCap(n) => SeshadriValue::SqrtCap(n * k * k),
        }
    }

    /// Sign and square, for exact comparison.
    fn signed_square(&self) -> (Ordering, BigRational) {
        match self {
            SeshadriValue::Rational(q) => (q.numer().sign().cmp(&num_bigint::Sign::NoSign), q * q),
            SeshadriValue::SqrtCap(n) => (
                if n.is_zero() { Ordering::Equal } else { Ordering::Greater },
                BigRational::from_integer(n.clone()),
            ),
        }
    }
}

impl Ord for SeshadriValue {
    fn cmp(&self, other: &Self) -> Ordering {
        if let (SeshadriValue::Rational(a), SeshadriValue::Rational(b)) = (self, other) {
            return a.cmp(b);
        }
        let (sa, qa) = self.signed_square();
        let (sb, qb) = other.signed_square();
        match sa.cmp(&sb) {
            Ordering::Equal => match sa {
                Ordering::Less => qb.cmp(&qa),
                Ordering::Equal => Ordering::Equal,
                Ordering::Greater => qa.cmp(&qb),
            },
            unequal => unequal,
        }
    }
}

impl PartialOrd for SeshadriValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SeshadriValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeshadriValue::Rational(q) => write!(f, "{q}"),
            SeshadriValue::SqrtCap(n) => write!(f, "sqrt({n})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ValueJson {
    Rational { p: JsonInt, q: JsonInt },
    Sqrt { sqrt: JsonInt },
}

impl Serialize for SeshadriValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SeshadriValue::Rational(q) => {
                ValueJson::Rational { p: JsonInt(q.numer().clone()), q: JsonInt(q.denom().clone()) }.serialize(s)
            }
            SeshadriValue::SqrtCap(n) => ValueJson::Sqrt { sqrt: JsonInt(n.clone()) }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for SeshadriValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match ValueJson::deserialize(d)? {
            ValueJson::Rational { p, q } => {
                if !q.0.is_positive() {
                    return Err(D::Error::custom("denominator must be positive"));
                }
                Ok(SeshadriValue::Rational(BigRational::new(p.0, q.0)))
            }
            ValueJson::Sqrt { sqrt } => {
                if sqrt.0.is_negative() {
                    return Err(D::Error::custom("square root of a negative number"));
                }
                Ok(SeshadriValue::sqrt(sqrt.0))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SeshadriResult {
    pub lower: SeshadriValue,
    pub upper: SeshadriValue,
    pub exact: bool,
    /// A curve through `x` whose ratio `L.C / t` equals `upper`.
    pub witness: Option<ExtendedClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_ratio: Option<SeshadriValue>,
    pub assumptions: Vec<Assumption>,
    pub completeness: Completeness,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

const NO_CURVE_AT_CAP: &str = "no candidate curve computes a ratio at or below sqrt(L^2); equality is not certified";

impl SeshadriResult {
    fn build(
        lower: SeshadriValue,
        upper: SeshadriValue,
        witness: Option<ExtendedClass>,
        assumptions: BTreeSet<Assumption>,
        completeness: Completeness,
    ) -> Self {
        // an upper bound with no curve behind it is only the Hodge cap
        let exact = lower == upper && witness.is_some();
        let note = witness.is_none().then(|| NO_CURVE_AT_CAP.to_string());
        let witness_ratio = witness.as_ref().map(|_| upper.clone());
        Self { lower, upper, exact, witness, witness_ratio, assumptions: assumptions.into_iter().collect(), completeness, note }
    }

    /// The result for `k L`: both bounds scale, the witness is unchanged.
    pub fn scaled(&self, k: &BigInt) -> Self {
        Self {
            lower: self.lower.scaled(k),
            upper: self.upper.scaled(k),
            exact: self.exact,
            witness: self.witness.clone(),
            witness_ratio: self.witness_ratio.as_ref().map(|v| v.scaled(k)),
            assumptions: self.assumptions.clone(),
            completeness: self.completeness,
            note: self.note.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result serializes")
    }
}

fn ratio(l: &DivisorClass, c: &ExtendedClass) -> BigRational {
    let lc = c.dot_pullback(l).expect("same lattice");
    BigRational::new(lc, c.t.clone())
}

/// Running minimum of `L.C / t` with the lexicographically least class on ties.
#[derive(Default)]
struct Best {
    value: Option<(BigRational, ExtendedClass)>,
    assumption: Option<Assumption>,
}

impl Best {
    fn offer(&mut self, q: BigRational, c: &ExtendedClass, assumption: Option<Assumption>) {
        let better = match &self.value {
            None => true,
            Some((v, w)) => q < *v || (q == *v && c < w),
        };
        if better {
            self.value = Some((q, c.clone()));
            self.assumption = assumption;
        }
    }
}

/// Curves through `x` that never shape the lower bound but may lower the
/// upper one: the general line and anticanonical member through `x`, the
/// `Ei - E_x`, and configuration curves.
fn explicit_upper_classes(config: &SurfaceConfig, x: &PointSpec) -> Vec<ExtendedClass> {
    let r = config.r;
    let mut out = vec![DivisorClass::hyperplane(r).extend(1), DivisorClass::uniform(3, 1, r).extend(1)];
    for i in 0..r {
        out.push(DivisorClass::exceptional(r, i).extend(1));
    }
    out.extend(fixed_components(config, x).into_iter().filter(|c| c.t.is_positive()));
    out
}

/// Lower bounds that come from theorems rather than from a curve scan.
fn theorem_lower_bounds(
    l: &DivisorClass,
    cert: &PositivityCertificate,
    config: &SurfaceConfig,
    x: &PointSpec,
) -> Result<Vec<(SeshadriValue, Assumption)>, SeshadriError> {
    let mut out = Vec::new();
    let one = SeshadriValue::integer(1);
    let half = SeshadriValue::rational(1, 2);
    if matches!(x, PointSpec::GenericOnSurface) {
        out.push((one.clone(), Assumption::EinLazarsfeld));
    }
    if config.is_anticanonical() && cert.is_ample() && anticanonical_dot(l) >= BigInt::from(2) {
        out.push((one.clone(), Assumption::HarbourneBpf));
    }
    if config.curve_spec().is_some() && cert.is_ample() {
        let (v, _) = on_curve_lower_bound(l, config)?;
        out.push((SeshadriValue::Rational(v), Assumption::HarbourneBpf));
    }
    if config.position == Position::VeryGeneral {
        if config.assumes(Assumption::StrongShgh) {
            // A value below 1 is 1/2, computed by C with t = 2 and L.C = 1;
            // then 1 >= L^2 C^2 with C^2 >= 1 forces L^2 = 1.
            let v = if l.self_intersection() >= BigInt::from(2) { one.clone() } else { half.clone() };
            out.push((v, Assumption::StrongShgh));
        }
        if config.assumes(Assumption::NCon) || config.assumes(Assumption::StrongShgh) {
            out.push((half, Assumption::NCon));
        }
    }
    Ok(out)
}

fn certify_ample(l: &DivisorClass, config: &SurfaceConfig) -> Result<PositivityCertificate, SeshadriError> {
    let cert = check_ample(l, config)?;
    if !cert.is_ample() {
        return Err(SeshadriError::NotAmple { class: l.to_string(), verdict: format!("{:?}", cert.verdict) });
    }
    Ok(cert)
}

/// `epsilon(X_r, L, x)` as an exact interval.
///
/// Works on the primitive class `L / content(L)` and scales the result, so
/// `compute(kL) = k compute(L)` with the same witness.
pub fn compute(l: &DivisorClass, config: &SurfaceConfig, x: &PointSpec, cap: Option<u32>) -> Result<SeshadriResult, SeshadriError> {
    config.validate()?;
    config.validate_point(x)?;
    if l.r() != config.r {
        return Err(PicardError::DimensionMismatch { left: l.r(), right: config.r }.into());
    }
    if config.r >= 9 && cap.is_none() {
        return Err(SeshadriError::Unbounded(config.r));
    }
    let g = l.content();
    if g.is_zero() {
        return Err(SeshadriError::NotAmple { class: l.to_string(), verdict: "zero class".into() });
    }
    let primitive = DivisorClass::new(l.degree() / &g, l.multiplicities().iter().map(|m| m / &g).collect());
    let result = compute_primitive(&primitive, config, x, cap)?;
    Ok(result.scaled(&g))
}

fn compute_primitive(l: &DivisorClass, config: &SurfaceConfig, x: &PointSpec, cap: Option<u32>) -> Result<SeshadriResult, SeshadriError> {
    let cert = certify_ample(l, config)?;
    let sqrt_cap = SeshadriValue::sqrt(l.self_intersection());
    let mut assumptions: BTreeSet<Assumption> = cert.assumptions.iter().copied().collect();
    let mut upper = Best::default();

    // Lower bound from a complete scan (r <= 7) or from the dichotomy (r = 8).
    let mut scan_lower: Option<SeshadriValue> = None;
    let completeness;
    if config.r <= 8 {
        let gamma = gamma_set(config, x, cap.or(Some(DEFAULT_GAMMA_CAP)))?;
        completeness = gamma.completeness;
        let mut lower = Best::default();
        let mut used = BTreeSet::new();
        for c in gamma.classes.iter().filter(|c| c.t.is_positive()) {
            let a = assess_unchecked(config, x, c);
            if a.status == ExistenceStatus::CannotExist {
                used.extend(a.assumption);
                continue;
            }
            let q = ratio(l, c);
            lower.offer(q.clone(), c, a.assumption);
            if a.status == ExistenceStatus::Exists {
                used.extend(a.assumption);
                upper.offer(q, c, a.assumption);
            }
        }
        if config.r <= 7 {
            assumptions.extend(used);
            assumptions.insert(Assumption::FixedComponentsFromConfig);
            let v = lower.value.map_or(sqrt_cap.clone(), |(q, _)| SeshadriValue::Rational(q));
            scan_lower = Some(v.min(sqrt_cap.clone()));
        } else {
            let (v, extra) = dichotomy_lower(l, config, x)?;
            assumptions.extend(extra);
            scan_lower = Some(v);
        }
    } else {
        let cap = cap.expect("checked by caller");
        completeness = Completeness::UpToDegree(cap);
        large_upper_scan(l, config, x, cap, &mut upper);
    }
    for c in explicit_upper_classes(config, x) {
        let a = assess_unchecked(config, x, &c);
        if a.status == ExistenceStatus::Exists {
            upper.offer(ratio(l, &c), &c, a.assumption);
        }
    }

    let mut lower = scan_lower.unwrap_or_else(|| SeshadriValue::integer(0));
    for (v, a) in theorem_lower_bounds(l, &cert, config, x)? {
        if v > lower {
            lower = v;
            assumptions.insert(a);
        }
    }
    let lower = lower.min(sqrt_cap.clone());

    let (upper_value, witness) = match upper.value {
        Some((q, w)) if SeshadriValue::Rational(q.clone()) <= sqrt_cap => {
            assumptions.extend(upper.assumption);
            (SeshadriValue::Rational(q), Some(w))
        }
        _ => (sqrt_cap, None),
    };
    if lower > upper_value {
        return Err(SeshadriError::Inconsistent(format!(
            "lower {lower} exceeds upper {upper_value} for {l} at {x}"
        )));
    }
    Ok(SeshadriResult::build(lower, upper_value, witness, assumptions, completeness))
}

/// Lower bound at r = 8: `L.(-K) >= 2` gives 1 by base-point-freeness,
/// otherwise `L = -K` and the value hinges on whether the anticanonical
/// member through `x` is singular there.
fn dichotomy_lower(l: &DivisorClass, config: &SurfaceConfig, x: &PointSpec) -> Result<(SeshadriValue, Vec<Assumption>), SeshadriError> {
    let k = anticanonical_dot(l);
    if k >= BigInt::from(2) {
        return Ok((SeshadriValue::integer(1), vec![Assumption::HarbourneBpf]));
    }
    let minus_k = -&canonical_class(8);
    if l != &minus_k {
        return Err(SeshadriError::Inconsistent(format!("ample {l} with L.(-K) = {k} is not -K")));
    }
    let nodal = minus_k.extend(2);
    let a = assess_unchecked(config, x, &nodal);
    let v = match a.status {
        ExistenceStatus::CannotExist => SeshadriValue::integer(1),
        _ => SeshadriValue::rational(1, 2),
    };
    Ok((v, a.assumption.into_iter().collect()))
}

/// Upper bound on nine or more very general points: (-1)-curves of the
/// `(r + 1)`-point lattice through `x`, one arrangement per shape and
/// choice of `t`. The arrangement minimizing `L.C` pairs the largest `ni`
/// with the largest `mi`; among those, the lexicographically least one is
/// kept.
fn large_upper_scan(l: &DivisorClass, config: &SurfaceConfig, x: &PointSpec, cap: u32, upper: &mut Best) {
    if config.position != Position::VeryGeneral || !matches!(x, PointSpec::GenericOnSurface | PointSpec::Custom { .. }) {
        return;
    }
    let r = config.r;
    let Some((_, n)) = l.to_i64s() else {
        return;
    };
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| n[b].cmp(&n[a]).then(a.cmp(&b)));
    let per_degree: Vec<Vec<ExtendedClass>> = (1..=i64::from(cap))
        .into_par_iter()
        .map(|d| {
            let mut found = Vec::new();
            for shape in shapes(r + 1, d, 3 * d - 1, d * d + 1) {
                if !cremona_reduces_to_exceptional(&DivisorClass::from_i64(d, &shape)) {
                    continue;
                }
                let mut seen = BTreeSet::new();
                for (pos, &t) in shape.iter().enumerate() {
                    if t < 1 || !seen.insert(t) {
                        continue;
                    }
                    let mut rest = shape.clone();
                    rest.remove(pos);
                    found.push(ExtendedClass::new(arrange(&rest, &order, &n, d), t));
                }
            }
            found
        })
        .collect();
    for c in per_degree.into_iter().flatten() {
        let a = assess_unchecked(config, x, &c);
        if a.status == ExistenceStatus::Exists {
            upper.offer(ratio(l, &c), &c, a.assumption);
        }
    }
}

/// Places the descending values `rest` so that `sum ni mi` is maximal and
/// the resulting vector is lexicographically least among such placements.
fn arrange(rest: &[i64], order: &[usize], n: &[i64], d: i64) -> DivisorClass {
    let mut m = vec![0i64; rest.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && n[order[j]] == n[order[i]] {
            j += 1;
        }
        // slots with equal ni share values; smallest value to smallest index
        let mut slots: Vec<usize> = order[i..j].to_vec();
        slots.sort_unstable();
        let mut vals: Vec<i64> = rest[i..j].to_vec();
        vals.sort_unstable();
        for (s, v) in slots.into_iter().zip(vals) {
            m[s] = v;
        }
        i = j;
    }
    DivisorClass::from_i64(d, &m)
}

/// The r = 8 computation: requires r = 8 and uses the default degree cap
/// for the upper bound.
pub fn x8_dichotomy(l: &DivisorClass, config: &SurfaceConfig, x: &PointSpec) -> Result<SeshadriResult, SeshadriError> {
    if config.r != 8 {
        return Err(SeshadriError::Domain(format!("dichotomy needs r = 8 (got {})", config.r)));
    }
    compute(l, config, x, None)
}

/// Numerically ample `L = (e; n1, ..., n8)` on eight points in del Pezzo
/// general position with `e <= bound_e` and `L.(-K) = 1`.
pub fn degree_one_ample_classes(bound_e: u32) -> Result<Vec<DivisorClass>, SeshadriError> {
    let config = SurfaceConfig::del_pezzo_general(8)?;
    let mut found = Vec::new();
    for e in 1..=i64::from(bound_e) {
        let total = 3 * e - 1;
        // ni >= 1 (L.Ei > 0) and ni <= e - 1 (L.(H - Ei) > 0)
        for shape in bounded_partitions(8, total, e - 1) {
            let square = e * e - shape.iter().map(|v| v * v).sum::<i64>();
            if square <= 0 {
                continue;
            }
            let rep = DivisorClass::from_i64(e, &shape);
            if !check_ample(&rep, &config)?.is_ample() {
                continue;
            }
            found.extend(distinct_permutations(&shape).into_iter().map(|p| DivisorClass::from_i64(e, &p)));
        }
    }
    found.sort();
    Ok(found)
}

/// Non-increasing `k`-tuples of integers in `1..=max` summing to `total`.
fn bounded_partitions(k: usize, total: i64, max: i64) -> Vec<Vec<i64>> {
    fn go(k: usize, total: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let k64 = k as i64;
        if total < k64 || total > k64 * max {
            return;
        }
        for v in (1..=max.min(total)).rev() {
            cur.push(v);
            go(k - 1, total - v, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if max >= 1 {
        go(k, total, max, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// The closing step of the classification: with `L^2 = 1` forced,
/// Cauchy-Schwarz gives `(3e - 1)^2 <= 8(e^2 - 1)`, i.e. `(e - 3)^2 <= 0`.
/// Checks that both inequalities hold exactly at `e = 3` for `1 <= e <= max_e`;
/// returns the first `e` where they disagree.
pub fn degree_one_chain(max_e: u64) -> Result<(), u64> {
    for e in 1..=max_e {
        let v = i128::from(e);
        let cauchy = (3 * v - 1).pow(2) <= 8 * (v * v - 1);
        let square = v * v - 6 * v + 9 <= 0;
        if cauchy != square || square != (e == 3) {
            return Err(e);
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanBox {
    pub max_degree: u32,
    pub max_multiplicity: u32,
    pub max_t: u32,
}

/// Classes in a box scan above which [`half_bound_certificate`] refuses to run.
pub const MAX_BOX_CLASSES: u128 = 200_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Violation {
    pub class: ExtendedClass,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HalfBoundReport {
    pub r: usize,
    #[serde(rename = "box")]
    pub scan_box: ScanBox,
    pub sample: DivisorClass,
    /// Extended classes examined (multiplicity vectors up to order).
    pub scanned: u64,
    /// Negative classes that survive the Strong SHGH and adjunction filters.
    pub survivors: u64,
    /// Survivor counts for T1..T6.
    pub by_type: [u64; 6],
    /// Survivor arrangements with `t >= 2` and ratio below 1.
    pub below_one: u64,
    pub violations: Vec<Violation>,
}

impl HalfBoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn type_index(t: NegativeClassType) -> Option<usize> {
    use NegativeClassType::*;
    match t {
        T1 => Some(0),
        T2 => Some(1),
        T3 => Some(2),
        T4 => Some(3),
        T5 => Some(4),
        T6 => Some(5),
        OutOfRange => None,
    }
}

/// Scans the box of extended classes on `r` very general points under
/// Strong SHGH: every negative survivor must be of one of the six types,
/// and every survivor with `t >= 2` whose ratio against `sample` drops
/// below 1 must have `t = 2` and ratio exactly 1/2.
pub fn half_bound_certificate(r: usize, scan_box: ScanBox, sample: &DivisorClass) -> Result<HalfBoundReport, SeshadriError> {
    if sample.r() != r {
        return Err(PicardError::DimensionMismatch { left: sample.r(), right: r }.into());
    }
    let config = SurfaceConfig::very_general(r).with_assumptions([Assumption::StrongShgh]);
    let cert = check_ample(sample, &config)?;
    if matches!(cert.verdict, Verdict::NotNef(_) | Verdict::NotAmple(_)) || !sample.self_intersection().is_positive() {
        return Err(SeshadriError::NotAmple { class: sample.to_string(), verdict: format!("{:?}", cert.verdict) });
    }
    let m_max = i64::from(scan_box.max_multiplicity);
    let multisets = binomial(r as u128 + m_max as u128, m_max as u128);
    let total = multisets * (u128::from(scan_box.max_degree) + 1) * (u128::from(scan_box.max_t) + 1);
    if total > MAX_BOX_CLASSES {
        return Err(SeshadriError::Resource(total));
    }
    let Some((e, n)) = sample.to_i64s() else {
        return Err(SeshadriError::Domain("sample class too large".into()));
    };
    let mut n_desc = n.clone();
    n_desc.sort_unstable_by(|a, b| b.cmp(a));
    let vectors = multiplicity_multisets(r, m_max);

    let mut report = HalfBoundReport {
        r,
        scan_box,
        sample: sample.clone(),
        scanned: 0,
        survivors: 0,
        by_type: [0; 6],
        below_one: 0,
        violations: Vec::new(),
    };
    // d = 0: Ei and Ei - E_x are the only curves.
    for t in 0..=1i64 {
        let c = DivisorClass::exceptional(r, 0).extend(t);
        tally(&mut report, classify_negative_class(&c)?, &c);
        report.survivors += 1;
    }

    let shells: Vec<HalfBoundReport> = (1..=i64::from(scan_box.max_degree))
        .into_par_iter()
        .map(|d| {
            let mut part = HalfBoundReport { violations: Vec::new(), ..report.clone() };
            part.scanned = 0;
            part.survivors = 0;
            part.by_type = [0; 6];
            for m in &vectors {
                let sum_sq: i64 = m.iter().map(|v| v * v).sum();
                let sum: i64 = m.iter().sum();
                for t in 0..=i64::from(scan_box.max_t) {
                    part.scanned += 1;
                    let square = d * d - sum_sq - t * t;
                    if square >= 0 {
                        continue;
                    }
                    if strong_margin(d, m, t.max(1)) <= 0 {
                        continue;
                    }
                    let kdot = -3 * d + sum + t;
                    if square + kdot < -2 {
                        // negative arithmetic genus: not a reduced irreducible curve
                        continue;
                    }
                    part.survivors += 1;
                    let c = ExtendedClass::from_i64(d, m, t);
                    tally(&mut part, NegativeClassType::from_invariants(square, kdot), &c);
                    if t >= 2 {
                        check_ratios(&mut part, e, &n, &n_desc, d, m, t);
                    }
                }
            }
            part
        })
        .collect();
    for part in shells {
        report.scanned += part.scanned;
        report.survivors += part.survivors;
        for (a, b) in report.by_type.iter_mut().zip(part.by_type) {
            *a += b;
        }
        report.below_one += part.below_one;
        report.violations.extend(part.violations);
    }
    Ok(report)
}

fn tally(report: &mut HalfBoundReport, kind: NegativeClassType, c: &ExtendedClass) {
    match type_index(kind) {
        Some(i) => report.by_type[i] += 1,
        None => report.violations.push(Violation { class: c.clone(), reason: "outside the six types".into() }),
    }
}

#[allow(clippy::too_many_arguments)]
fn check_ratios(report: &mut HalfBoundReport, e: i64, n: &[i64], n_desc: &[i64], d: i64, m: &[i64], t: i64) {
    // smallest L.C over arrangements: pair largest ni with largest mi
    let lowest = e * d - n_desc.iter().zip(m).map(|(a, b)| a * b).sum::<i64>();
    if lowest >= t {
        return;
    }
    for p in distinct_permutations(m) {
        let lc = e * d - n.iter().zip(&p).map(|(a, b)| a * b).sum::<i64>();
        // L.C <= 0 is impossible for a curve when L is ample
        if lc < 1 || lc >= t {
            continue;
        }
        report.below_one += 1;
        let c = ExtendedClass::from_i64(d, &p, t);
        if t != 2 {
            report.violations.push(Violation { class: c, reason: format!("ratio {lc}/{t} below 1 with t != 2") });
        } else if 2 * lc < t {
            report.violations.push(Violation { class: c, reason: format!("ratio {lc}/{t} below 1/2") });
        }
    }
}

fn multiplicity_multisets(r: usize, max: i64) -> Vec<Vec<i64>> {
    fn go(left: usize, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in (0..=max).rev() {
            cur.push(v);
            go(left - 1, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(r, max, &mut Vec::with_capacity(r), &mut out);
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Certifies `(2 pi*L - E_x) . C >= 0` for a curve class `C` through `x`.
///
/// The two inputs are `L.C >= 1` (ampleness) and `L.C - (t - 1) >= 0` (the
/// Ein-Lazarsfeld bound at a very general point, applied to a curve through
/// it with multiplicity `t - 1`, which NCon supplies); their sum is
/// `2 L.C - t >= 0`. A violated input is reported by name.
pub fn curve_nef_certificate(l: &DivisorClass, c: &ExtendedClass) -> Result<bool, SeshadriError> {
    let lc = intersect(l, &c.base)?;
    nef_sum_certificate(&lc, &c.t)
}

/// [`curve_nef_certificate`] on the numbers `L.C` and `t` alone.
pub fn nef_sum_certificate(lc: &BigInt, t: &BigInt) -> Result<bool, SeshadriError> {
    if !t.is_positive() {
        return Err(SeshadriError::Domain(format!("t = {t}: the curve does not pass through x")));
    }
    if lc < &BigInt::one() {
        return Err(SeshadriError::Hypothesis(format!("ampleness: L.C = {lc} < 1")));
    }
    let el: BigInt = lc - (t - BigInt::one());
    if el.is_negative() {
        return Err(SeshadriError::Hypothesis(format!("Ein-Lazarsfeld: L.C - (t - 1) = {el} < 0")));
    }
    let sum = (lc - BigInt::one()) + el;
    debug_assert_eq!(sum, BigInt::from(2) * lc - t);
    Ok(!sum.is_negative())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IntegralityReport {
    pub r: usize,
    pub classes_checked: usize,
    /// (-1)- and (-2)-classes with `t >= 2` (expected: none).
    pub singular_candidates: Vec<ExtendedClass>,
    /// `(3; 1^r, 2)^2`, expected non-negative.
    pub nodal_cubic_square: i64,
}

impl IntegralityReport {
    pub fn passed(&self) -> bool {
        self.singular_candidates.is_empty() && self.nodal_cubic_square >= 0
    }
}

/// For r <= 5 every candidate Seshadri curve is smooth at `x`, so every
/// ratio `L.C / t` is an integer.
///
/// An irreducible cubic has no triple point, so among anticanonical members
/// only `t = 2` needs checking.
pub fn integrality_check(r: usize) -> Result<IntegralityReport, SeshadriError> {
    if r > 5 {
        return Err(SeshadriError::Domain(format!("integrality holds for r <= 5 (got {r})")));
    }
    let mut checked = 0;
    let mut singular = Vec::new();
    for kind in [MinusKind::Minus1, MinusKind::Minus2] {
        for c in &minus_curves_shared(r + 1, kind, None)?.classes {
            checked += 1;
            let e = ExtendedClass::from_divisor(c);
            if e.t >= BigInt::from(2) {
                singular.push(e);
            }
        }
    }
    let nodal = DivisorClass::uniform(3, 1, r).extend(2);
    Ok(IntegralityReport { r, classes_checked: checked, singular_candidates: singular, nodal_cubic_square: nodal.self_intersection().to_i64().expect("small") })
}

/// `epsilon(X_r, L, x) = g` for `L = g(d; 1^r)` very ample up to the
/// factor `g` and `x` on `Ei`: very ampleness gives 1 from below and
/// `Ei` gives `L.Ei / 1` from above.
pub fn exceptional_point_value(config: &SurfaceConfig, l: &DivisorClass, i: usize) -> Result<SeshadriResult, SeshadriError> {
    config.validate()?;
    let r = config.r;
    if l.r() != r {
        return Err(PicardError::DimensionMismatch { left: l.r(), right: r }.into());
    }
    if i == 0 || i > r {
        return Err(SeshadriError::Domain(format!("exceptional index {i} outside 1..={r}")));
    }
    let m = l.multiplicities();
    let g = m[0].clone();
    if !g.is_positive() || m.iter().any(|v| v != &g) || !l.degree().is_multiple_of(&g) || l.degree() <= &g {
        return Err(SeshadriError::Domain(format!("{l} is not a multiple of (d; 1, ..., 1)")));
    }
    let witness = DivisorClass::exceptional(r, i - 1).extend(1);
    let value = SeshadriValue::integer(g);
    Ok(SeshadriResult::build(
        value.clone(),
        value,
        Some(witness),
        BTreeSet::from([Assumption::GgpVeryAmple]),
        Completeness::Complete,
    ))
}
