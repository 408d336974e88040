//! Ampleness certificates, base-point-freeness and global-generation
//! criteria, and the Hodge-index inequality.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{distinct_permutations, fixed_components, minus_curves_shared, shapes, Completeness, CurvesError, MinusKind};
use crate::picard::{anticanonical_dot, intersect, DivisorClass, PicardError};
use crate::surfaceconfig::{assess_unchecked, Assumption, ConfigError, ExistenceStatus, PointSpec, Position, SurfaceConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PositivityError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error(transparent)]
    Curves(#[from] CurvesError),
    #[error("{0}")]
    Domain(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Verdict {
    Ample,
    Nef,
    /// A curve class with negative product, or `None` when only `L^2 < 0`
    /// is known.
    NotNef(Option<DivisorClass>),
    /// A curve class with product zero, or `None` when only `L^2 = 0` is known.
    NotAmple(Option<DivisorClass>),
    Unknown,
}

/// What the verdict was checked against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckedAgainst {
    /// Number of candidate curve classes tested (after existence filtering).
    pub classes: usize,
    /// Largest plane degree among enumerated candidates.
    pub max_degree: u32,
    pub completeness: Completeness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PositivityCertificate {
    pub verdict: Verdict,
    pub checked_against: CheckedAgainst,
    pub assumptions: Vec<Assumption>,
}

impl PositivityCertificate {
    pub fn is_ample(&self) -> bool {
        self.verdict == Verdict::Ample
    }
}

/// Plane degree above which the Hodge-bounded scan for `r >= 9` gives up.
pub const MAX_HODGE_DEGREE: u32 = 60;

/// Degree searched for a witness when `L^2 <= 0` on nine or more points.
const WITNESS_SEARCH_DEGREE: u32 = 6;

struct Scan {
    first_negative: Option<DivisorClass>,
    first_zero: Option<DivisorClass>,
    classes: usize,
    max_degree: u32,
    assumptions: BTreeSet<Assumption>,
}

impl Scan {
    fn new() -> Self {
        Self { first_negative: None, first_zero: None, classes: 0, max_degree: 0, assumptions: BTreeSet::new() }
    }

    fn offer(&mut self, config: &SurfaceConfig, l: &DivisorClass, c: &DivisorClass) {
        let a = assess_unchecked(config, &PointSpec::GenericOnSurface, &c.extend(0));
        if a.status < ExistenceStatus::MayExist {
            return;
        }
        self.classes += 1;
        if let Some(d) = c.degree().to_u32() {
            self.max_degree = self.max_degree.max(d);
        }
        let p = intersect(l, c).expect("same lattice");
        let slot = if p.is_negative() {
            &mut self.first_negative
        } else if p.is_zero() {
            &mut self.first_zero
        } else {
            return;
        };
        if slot.as_ref().is_none_or(|w| c < w) {
            *slot = Some(c.clone());
            self.assumptions.extend(a.assumption);
        }
    }
}

/// `H`, the `Ei`, the `H - Ei` and curves named by the configuration.
fn basic_curves(config: &SurfaceConfig) -> Vec<DivisorClass> {
    let r = config.r;
    let h = DivisorClass::hyperplane(r);
    let mut out = vec![h.clone()];
    for i in 0..r {
        let e = DivisorClass::exceptional(r, i);
        out.push(&h - &e);
        out.push(e);
    }
    for c in fixed_components(config, &PointSpec::GenericOnSurface) {
        if c.t.is_zero() {
            out.push(c.base);
        }
    }
    out
}

/// Largest `d` with `d^2 L^2 <= i (e^2 - L^2)`: by the Hodge index theorem
/// any class `E` with `E^2 = -i` and `L.E <= 0` has degree at most this.
///
/// Write `E = aL + E'` and `H = bL + H'` with `E', H'` orthogonal to `L`.
/// Then `d = H.E = a e + H'.E'` with `a = L.E / L^2 <= 0`, and
/// Cauchy-Schwarz on the negative definite complement bounds `H'.E'` by
/// `sqrt((e^2/L^2 - 1)(i + a^2 L^2))`; the right side minus `|a| e` is
/// decreasing in `|a|`, so `a = 0` is the worst case.
pub fn hodge_degree_bound(l: &DivisorClass, i: u32) -> Option<BigInt> {
    let l2 = l.self_intersection();
    if !l2.is_positive() {
        return None;
    }
    let e = l.degree();
    let q = BigInt::from(i) * (e * e - &l2) / &l2;
    Some(q.sqrt())
}

/// Decides whether `L` is ample on the configured surface.
///
/// `L` is ample iff `L^2 > 0` and `L.C > 0` for every curve in a generating
/// set of the cone of curves. For `r <= 8` that set is the (-1)- and
/// (-2)-curves, the fixed components of `|-K|` and the boundary classes
/// `H`, `H - Ei`. For `r >= 9`, once `L^2 > 0` and `L.H > 0`, only negative
/// curves can fail, and [`hodge_degree_bound`] limits their degree whenever
/// their self-intersection is bounded below: by -2 on anticanonical
/// surfaces (a curve other than the anticanonical curve meets `-K`
/// non-negatively) and by -1 at very general points under Weak SHGH.
pub fn check_ample(l: &DivisorClass, config: &SurfaceConfig) -> Result<PositivityCertificate, PositivityError> {
    config.validate()?;
    if l.r() != config.r {
        return Err(PicardError::DimensionMismatch { left: l.r(), right: config.r }.into());
    }
    let mut scan = Scan::new();
    for c in basic_curves(config) {
        scan.offer(config, l, &c);
    }
    let mut config_assumptions = Vec::new();
    let completeness = if config.r <= 8 {
        for kind in [MinusKind::Minus1, MinusKind::Minus2] {
            for c in &minus_curves_shared(config.r.max(1), kind, None)?.classes {
                if c.r() == config.r {
                    scan.offer(config, l, c);
                }
            }
        }
        if config.is_del_pezzo_general() {
            config_assumptions.push(Assumption::DemazureAmple);
        } else {
            config_assumptions.push(Assumption::FixedComponentsFromConfig);
        }
        Completeness::Complete
    } else {
        large_lattice_scan(l, config, &mut scan, &mut config_assumptions)
    };
    let l2 = l.self_intersection();
    let verdict = if let Some(w) = scan.first_negative.clone() {
        Verdict::NotNef(Some(w))
    } else if l2.is_negative() {
        Verdict::NotNef(None)
    } else if let Some(w) = scan.first_zero.clone() {
        Verdict::NotAmple(Some(w))
    } else if !completeness.is_complete() {
        Verdict::Unknown
    } else if l2.is_positive() {
        Verdict::Ample
    } else {
        Verdict::Nef
    };
    let mut assumptions: BTreeSet<Assumption> = scan.assumptions;
    if matches!(verdict, Verdict::Ample | Verdict::Nef) {
        assumptions.extend(config_assumptions);
    }
    Ok(PositivityCertificate {
        verdict,
        checked_against: CheckedAgainst { classes: scan.classes, max_degree: scan.max_degree, completeness },
        assumptions: assumptions.into_iter().collect(),
    })
}

fn large_lattice_scan(
    l: &DivisorClass,
    config: &SurfaceConfig,
    scan: &mut Scan,
    assumptions: &mut Vec<Assumption>,
) -> Completeness {
    let (kinds, index, decided): (&[MinusKind], u32, bool) = match &config.position {
        Position::OnCurve(_) => {
            assumptions.push(Assumption::FixedComponentsFromConfig);
            (&[MinusKind::Minus1, MinusKind::Minus2], 2, true)
        }
        Position::VeryGeneral => {
            assumptions.push(Assumption::WeakShgh);
            (&[MinusKind::Minus1], 1, config.assumes_weak_shgh())
        }
        _ => (&[], 0, false),
    };
    let Some(bound) = hodge_degree_bound(l, index.max(1)) else {
        // L^2 <= 0: not ample whatever the curves; look for a witness.
        for &kind in kinds {
            scan_shapes(l, config, kind, WITNESS_SEARCH_DEGREE, scan);
        }
        return Completeness::UpToDegree(WITNESS_SEARCH_DEGREE);
    };
    let cap = bound.to_u32().map_or(MAX_HODGE_DEGREE, |b| b.min(MAX_HODGE_DEGREE));
    for &kind in kinds {
        scan_shapes(l, config, kind, cap, scan);
    }
    let reached = bound <= BigInt::from(MAX_HODGE_DEGREE);
    if decided && reached {
        Completeness::Complete
    } else {
        Completeness::UpToDegree(cap)
    }
}

/// Walks multiplicity shapes; a shape's permutations are expanded only
/// when the smallest product over its orbit is non-positive. That minimum
/// pairs the largest `ni` with the largest `mi`.
fn scan_shapes(l: &DivisorClass, config: &SurfaceConfig, kind: MinusKind, cap: u32, scan: &mut Scan) {
    let r = config.r;
    let (sq, k) = kind.invariants();
    let e = l.degree();
    let mut n_sorted: Vec<BigInt> = l.multiplicities().to_vec();
    n_sorted.sort_by(|a, b| b.cmp(a));
    for d in 1..=i64::from(cap) {
        for shape in shapes(r, d, 3 * d + k, d * d - sq) {
            let mut min = e * BigInt::from(d);
            for (n, m) in n_sorted.iter().zip(&shape) {
                min -= n * BigInt::from(*m);
            }
            if min.is_positive() {
                continue;
            }
            for p in distinct_permutations(&shape) {
                scan.offer(config, l, &DivisorClass::from_i64(d, &p));
            }
        }
    }
}

/// Ample `L` with `L.(-K) >= 2` on an anticanonical surface is base point
/// free, which gives `epsilon(X, L, x) >= 1` at every point.
pub fn bpf_seshadri_one(l: &DivisorClass, config: &SurfaceConfig) -> Result<bool, PositivityError> {
    if !config.is_anticanonical() {
        return Err(PositivityError::Domain(format!(
            "configuration with r = {} is not anticanonical",
            config.r
        )));
    }
    let cert = check_ample(l, config)?;
    Ok(cert.is_ample() && anticanonical_dot(l) >= BigInt::from(2))
}

/// `(L.C)^2 >= L^2 C^2`.
pub fn hodge_gap(l: &DivisorClass, c: &DivisorClass) -> Result<bool, PositivityError> {
    let l2 = l.self_intersection();
    if !l2.is_positive() {
        return Err(PositivityError::Domain(format!("hodge_gap needs L^2 > 0 (got {l2})")));
    }
    let lc = intersect(l, c)?;
    Ok(&lc * &lc >= l2 * c.self_intersection())
}

/// For `L = eH - n(E1 + ... + Er)` with points on a smooth curve of degree
/// `d`: `(re + 3)d > r(rn + 1)` certifies that `rL` is globally generated.
pub fn curve_multiple_globally_generated(e: &BigInt, n: &BigInt, d: &BigInt, r: &BigInt) -> Result<bool, PositivityError> {
    let one = BigInt::one();
    if e < &one || n < &one || d < &one {
        return Err(PositivityError::Domain("e, n and d must be positive".into()));
    }
    if r < &(d * d + 1) {
        return Err(PositivityError::Domain(format!("needs r >= d^2 + 1 (r = {r}, d = {d})")));
    }
    if e * d - r * n < one {
        return Err(PositivityError::Domain(format!("needs L.C = ed - rn >= 1 (got {})", e * d - r * n)));
    }
    Ok((r * e + 3) * d > r * (r * n + 1))
}

/// The same inequality after expanding: `r(ed - rn) > r - 3d`.
pub fn global_generation_rearranged(e: &BigInt, n: &BigInt, d: &BigInt, r: &BigInt) -> bool {
    r * (e * d - r * n) > r - BigInt::from(3) * d
}

/// Lower bound on `epsilon(X, L, x)` for ample `L` with the points on a
/// curve of degree `d <= 3`: 1, except 1/2 when `d = 3` and `L.(-K) = 1`.
pub fn on_curve_lower_bound(l: &DivisorClass, config: &SurfaceConfig) -> Result<(BigRational, Vec<Assumption>), PositivityError> {
    let spec = config
        .curve_spec()
        .ok_or_else(|| PositivityError::Domain("needs points on a curve of degree at most 3".into()))?;
    let cert = check_ample(l, config)?;
    if !cert.is_ample() {
        return Err(PositivityError::Domain(format!("{l} is not certified ample ({:?})", cert.verdict)));
    }
    let k = anticanonical_dot(l);
    let one = BigRational::one();
    let mut assumptions = cert.assumptions;
    assumptions.push(Assumption::HarbourneBpf);
    assumptions.sort();
    let value = if spec.degree < 3 {
        // -K = C + (3 - d)H with L.C >= 1 and L.H >= 1.
        if k < BigInt::from(2) {
            return Err(PositivityError::Domain(format!("ample {l} has L.(-K) = {k} < 2")));
        }
        one
    } else if k >= BigInt::from(2) {
        one
    } else {
        BigRational::new(BigInt::one(), BigInt::from(2))
    };
    Ok((value, assumptions))
}

/// Draws `count` ample bundles `(e; n1, ..., nr)` with `1 <= e <= 30` and
/// `1 <= ni <= 10` by rejection, deterministically from `seed`.
pub fn sample_ample_bundles(config: &SurfaceConfig, count: usize, seed: u64) -> Result<Vec<DivisorClass>, PositivityError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    let fixed: Vec<_> = fixed_components(config, &PointSpec::GenericOnSurface).into_iter().filter(|c| c.t.is_zero()).collect();
    while out.len() < count {
        attempts += 1;
        if attempts > count * 10_000 + 100_000 {
            return Err(PositivityError::Domain(format!(
                "found only {} ample bundles in {attempts} draws",
                out.len()
            )));
        }
        let e: i64 = rng.gen_range(1..=30);
        let n: Vec<i64> = (0..config.r).map(|_| rng.gen_range(1..=10)).collect();
        let l = DivisorClass::from_i64(e, &n);
        // cheap necessary conditions before the full check
        if !l.self_intersection().is_positive() {
            continue;
        }
        if config.r <= 8 && !anticanonical_dot(&l).is_positive() {
            continue;
        }
        if fixed.iter().any(|c| !c.dot_pullback(&l).is_ok_and(|v| v.is_positive())) {
            continue;
        }
        if check_ample(&l, config)?.is_ample() {
            out.push(l);
        }
    }
    Ok(out)
}
