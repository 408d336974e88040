//! Enumeration of (-1)- and (-2)-classes with certified degree bounds, the
//! six-type classification of negative classes, and the candidate set `Γ`
//! of possible Seshadri curves.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::picard::{DivisorClass, ExtendedClass};
use crate::surfaceconfig::{config_curve_class, ConfigError, PointSpec, Position, SurfaceConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurvesError {
    #[error("point count must be at least 1")]
    NoPoints,
    #[error("enumeration on {n} points is unbounded; pass a degree cap")]
    Unbounded { n: usize },
    #[error("class {0} has non-negative self-intersection")]
    NotNegative(String),
    #[error("candidate set needs r <= 8 (got r = {0})")]
    TooManyPoints(usize),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum MinusKind {
    Minus1,
    Minus2,
}

impl MinusKind {
    /// `(C^2, K.C)`.
    pub fn invariants(self) -> (i64, i64) {
        match self {
            MinusKind::Minus1 => (-1, -1),
            MinusKind::Minus2 => (-2, 0),
        }
    }
}

impl FromStr for MinusKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "minus1" => Ok(MinusKind::Minus1),
            "minus2" => Ok(MinusKind::Minus2),
            other => Err(format!("unknown kind '{other}' (expected minus1 or minus2)")),
        }
    }
}

impl fmt::Display for MinusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MinusKind::Minus1 => "minus1",
            MinusKind::Minus2 => "minus2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Completeness {
    Complete,
    UpToDegree(u32),
}

impl Completeness {
    pub fn is_complete(self) -> bool {
        self == Completeness::Complete
    }
}

/// Canonically ordered, duplicate-free list of classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSet<C> {
    pub classes: Vec<C>,
    pub completeness: Completeness,
}

impl<C: Ord> CandidateSet<C> {
    pub fn new(classes: impl IntoIterator<Item = C>, completeness: Completeness) -> Self {
        let set: BTreeSet<C> = classes.into_iter().collect();
        Self { classes: set.into_iter().collect(), completeness }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, c: &C) -> bool {
        self.classes.binary_search(c).is_ok()
    }
}

/// Largest degree of a `kind` class with `d >= 1` on `n` points.
///
/// A (-1)-class satisfies `sum mi = 3d - 1` and `sum mi^2 = d^2 + 1`, so
/// Cauchy-Schwarz gives `(3d - 1)^2 <= n (d^2 + 1)`, i.e.
/// `(9 - n) d^2 - 6d + 1 - n <= 0`. For (-2)-classes the same argument on
/// `sum mi = 3d`, `sum mi^2 = d^2 + 2` gives `9 d^2 <= n (d^2 + 2)`.
/// For `n <= 8` the leading coefficient is positive and the admissible
/// degrees form a bounded interval: d <= 7 (minus1) and d <= 4 (minus2) at
/// n = 8. For `n >= 9` the inequality holds for every d.
pub fn proven_degree_bound(n: usize, kind: MinusKind) -> Option<u32> {
    if n >= 9 {
        return None;
    }
    let n = n as i64;
    let admissible = |d: i64| match kind {
        MinusKind::Minus1 => (3 * d - 1).pow(2) <= n * (d * d + 1),
        MinusKind::Minus2 => 9 * d * d <= n * (d * d + 2),
    };
    // Both quadratics are convex and non-positive at d = 0, so the
    // admissible degrees form an interval starting at 0.
    let mut best = 0;
    let mut d = 1;
    while admissible(d) {
        best = d;
        d += 1;
    }
    Some(best as u32)
}

/// Non-increasing multiplicity vectors of length `n` with entries in
/// `0..=max` and prescribed sum and sum of squares.
pub(crate) fn shapes(n: usize, max: i64, sum: i64, sumsq: i64) -> Vec<Vec<i64>> {
    fn fill(left: i64, max: i64, sum: i64, sq: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            if sum == 0 && sq == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if sum < 0 || sq < 0 || sum > left * max || sum * sum > left * sq || sq > sum * max {
            return;
        }
        for v in (0..=max).rev() {
            if v * v > sq || v > sum {
                continue;
            }
            cur.push(v);
            fill(left - 1, v, sum - v, sq - v * v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    fill(n as i64, max, sum, sumsq, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Distinct rearrangements of `v`, in lexicographic order.
pub(crate) fn distinct_permutations(v: &[i64]) -> Vec<Vec<i64>> {
    let mut cur = v.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Plane-class solutions (`d >= 1`) as small integers.
pub(crate) fn plane_solutions(n: usize, kind: MinusKind, d_max: u32) -> Vec<(i64, Vec<i64>)> {
    let (sq, k) = kind.invariants();
    let mut shells: Vec<Vec<(i64, Vec<i64>)>> = (1..=i64::from(d_max))
        .into_par_iter()
        .map(|d| {
            // d^2 - sum mi^2 = sq and -3d + sum mi = k
            let sum = 3 * d + k;
            let sumsq = d * d - sq;
            let mut shell = Vec::new();
            for shape in shapes(n, d, sum, sumsq) {
                for p in distinct_permutations(&shape) {
                    shell.push((d, p));
                }
            }
            shell
        })
        .collect();
    let mut all: Vec<_> = shells.drain(..).flatten().collect();
    all.sort();
    all
}

fn degree_zero_classes(n: usize, kind: MinusKind) -> Vec<DivisorClass> {
    match kind {
        MinusKind::Minus1 => (0..n).map(|i| DivisorClass::exceptional(n, i)).collect(),
        MinusKind::Minus2 => {
            let mut out = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    // Ei - Ej with the first nonzero entry -1
                    let mut m = vec![0i64; n];
                    m[i] = -1;
                    m[j] = 1;
                    out.push(DivisorClass::from_i64(0, &m));
                }
            }
            out
        }
    }
}

type CacheKey = (usize, MinusKind, Option<u32>);

fn cache() -> &'static Mutex<HashMap<CacheKey, Arc<CandidateSet<DivisorClass>>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<CandidateSet<DivisorClass>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All classes with `C^2 = -1, K.C = -1` (minus1) or `C^2 = -2, K.C = 0`
/// (minus2) on `n` points, with `d >= 0` and `mi >= 0` once `d >= 1`.
///
/// Degree-zero classes are the `Ei` (minus1) and `Ei - Ej`, `i < j`
/// (minus2). Complete whenever [`proven_degree_bound`] applies and the cap
/// (if any) reaches it.
pub fn enumerate_minus_curves(n: usize, kind: MinusKind, cap: Option<u32>) -> Result<CandidateSet<DivisorClass>, CurvesError> {
    minus_curves_shared(n, kind, cap).map(|s| (*s).clone())
}

pub(crate) fn minus_curves_shared(n: usize, kind: MinusKind, cap: Option<u32>) -> Result<Arc<CandidateSet<DivisorClass>>, CurvesError> {
    if n == 0 {
        return Err(CurvesError::NoPoints);
    }
    let bound = proven_degree_bound(n, kind);
    let (d_max, completeness) = match (bound, cap) {
        (None, None) => return Err(CurvesError::Unbounded { n }),
        (None, Some(c)) => (c, Completeness::UpToDegree(c)),
        (Some(b), None) => (b, Completeness::Complete),
        (Some(b), Some(c)) if c >= b => (b, Completeness::Complete),
        (Some(_), Some(c)) => (c, Completeness::UpToDegree(c)),
    };
    let key = (n, kind, if completeness.is_complete() { None } else { Some(d_max) });
    if let Some(hit) = cache().lock().expect("cache lock").get(&key) {
        return Ok(Arc::clone(hit));
    }
    let mut classes = degree_zero_classes(n, kind);
    classes.extend(plane_solutions(n, kind, d_max).into_iter().map(|(d, m)| DivisorClass::from_i64(d, &m)));
    let set = Arc::new(CandidateSet::new(classes, completeness));
    cache().lock().expect("cache lock").insert(key, Arc::clone(&set));
    Ok(set)
}

/// The six admissible `(C^2, K.C)` pairs for a reduced irreducible curve
/// with negative square that survives the Strong SHGH filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NegativeClassType {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    OutOfRange,
}

impl NegativeClassType {
    pub fn is_in_range(self) -> bool {
        self != NegativeClassType::OutOfRange
    }

    pub fn from_invariants(square: i64, kdot: i64) -> Self {
        match (square, kdot) {
            (-1, -1) => NegativeClassType::T1,
            (-1, 1) => NegativeClassType::T2,
            (-1, 3) => NegativeClassType::T3,
            (-2, 0) => NegativeClassType::T4,
            (-2, 2) => NegativeClassType::T5,
            (-3, 1) => NegativeClassType::T6,
            _ => NegativeClassType::OutOfRange,
        }
    }
}

pub fn classify_negative_class(c: &ExtendedClass) -> Result<NegativeClassType, CurvesError> {
    let s = c.self_intersection();
    if !s.is_negative() {
        return Err(CurvesError::NotNegative(c.to_string()));
    }
    let k = c.canonical_dot();
    Ok(match (s.to_i64(), k.to_i64()) {
        (Some(s), Some(k)) => NegativeClassType::from_invariants(s, k),
        _ => NegativeClassType::OutOfRange,
    })
}

/// Degree cap used for the nine-point lattice when the caller gives none.
pub const DEFAULT_GAMMA_CAP: u32 = 6;

/// Candidate Seshadri curves through `x`: (-1)- and (-2)-classes of the
/// `(r + 1)`-point lattice (with `x` as the last point), the members
/// `(3; 1^r, t)` of the anticanonical system with negative square, and
/// curves named by the configuration.
///
/// Classes with `t < 0` are dropped: none of them passes through `x`.
/// `cap` bounds the nine-point enumeration at r = 8 and is ignored below.
pub fn gamma_set(config: &SurfaceConfig, x: &PointSpec, cap: Option<u32>) -> Result<CandidateSet<ExtendedClass>, CurvesError> {
    let r = config.r;
    if r > 8 {
        return Err(CurvesError::TooManyPoints(r));
    }
    config.validate()?;
    config.validate_point(x)?;
    let n = r + 1;
    let cap = if n >= 9 { Some(cap.unwrap_or(DEFAULT_GAMMA_CAP)) } else { None };
    let mut completeness = Completeness::Complete;
    let mut classes = Vec::new();
    for kind in [MinusKind::Minus1, MinusKind::Minus2] {
        let set = minus_curves_shared(n, kind, cap)?;
        if let Completeness::UpToDegree(c) = set.completeness {
            completeness = Completeness::UpToDegree(c);
        }
        classes.extend(set.classes.iter().map(ExtendedClass::from_divisor).filter(|c| !c.t.is_negative()));
    }
    for t in [1i64, 2] {
        let c = DivisorClass::uniform(3, 1, r).extend(t);
        if c.self_intersection().is_negative() {
            classes.push(c);
        }
    }
    classes.extend(fixed_components(config, x));
    Ok(CandidateSet::new(classes, completeness))
}

/// Curves supplied by configuration data rather than by enumeration.
pub(crate) fn fixed_components(config: &SurfaceConfig, x: &PointSpec) -> Vec<ExtendedClass> {
    let mut out = Vec::new();
    if let Some(c) = config_curve_class(config, x) {
        out.push(c);
    }
    if let Position::Custom { known_classes } = &config.position {
        out.extend(known_classes.iter().map(|k| k.class.clone()));
    }
    if let PointSpec::Custom { extra_classes } = x {
        out.extend(extra_classes.iter().map(|k| k.class.clone()));
    }
    out
}
