//! Declarative point configurations and the curve-existence oracle.
//!
//! No point coordinates are ever represented. A [`SurfaceConfig`] names the
//! generality hypotheses satisfied by `p1, ..., pr`, a [`PointSpec`] names
//! where the evaluation point `x` sits, and [`existence`] answers whether a
//! lattice class on the blow-up at `x` is the strict transform of a reduced
//! irreducible curve with multiplicity exactly `t` at `x`.
//!
//! Answers are three-valued. `Exists` feeds upper bounds, while both `Exists`
//! and `MayExist` feed lower bounds, so `MayExist` is always the safe answer.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::picard::{canonical_class, intersect_extended, DivisorClass, ExtendedClass, PicardError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("point spec {point} is not valid for this configuration: {reason}")]
    InvalidPoint { point: String, reason: String },
    #[error("class {class} lives on {got} points, configuration has r = {expected}")]
    ClassDimension { class: String, expected: usize, got: usize },
    #[error(transparent)]
    Picard(#[from] PicardError),
    #[error("malformed configuration document: {0}")]
    Document(String),
}

/// Merging order is `Exists > MayExist > CannotExist`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ExistenceStatus {
    CannotExist,
    MayExist,
    Exists,
}

/// Conjectures a caller may allow (`assume` in the configuration document)
/// and facts a result may have consumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Assumption {
    #[serde(rename = "weakSHGH")]
    WeakShgh,
    #[serde(rename = "SHGH")]
    Shgh,
    #[serde(rename = "strongSHGH")]
    StrongShgh,
    #[serde(rename = "NCon")]
    NCon,
    /// Generality of the configured points (del Pezzo general or very general).
    #[serde(rename = "configGenerality")]
    ConfigGenerality,
    /// Ampleness of `-K` (and the shape of the Mori cone) for points in
    /// del Pezzo general position.
    #[serde(rename = "demazureAmple")]
    DemazureAmple,
    /// Fixed components of `|-K|` on the blow-up at `x` are taken only from
    /// configuration data.
    #[serde(rename = "fixedComponentsFromConfig")]
    FixedComponentsFromConfig,
    /// Ample `L` with `L.(-K) >= 2` on an anticanonical rational surface is
    /// base point free.
    #[serde(rename = "harbourneBpf")]
    HarbourneBpf,
    /// Global generation criterion for `rL` with points on a smooth curve.
    #[serde(rename = "hanumanthuGlobalGeneration")]
    HanumanthuGlobalGeneration,
    /// `epsilon(X, L, y) >= 1` at very general `y`.
    #[serde(rename = "einLazarsfeld")]
    EinLazarsfeld,
    /// `dH - E1 - ... - Er` is very ample for suitable `d`.
    #[serde(rename = "ggpVeryAmple")]
    GgpVeryAmple,
    /// An existence answer came from registered (custom) classes.
    #[serde(rename = "customExistenceData")]
    CustomExistenceData,
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_string(self).expect("unit variant");
        f.write_str(s.trim_matches('"'))
    }
}

/// A class together with what is known about it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownClass {
    pub class: ExtendedClass,
    pub status: ExistenceStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CurveSpec {
    pub degree: u8,
    pub singular: bool,
    pub points_smooth: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Position {
    VeryGeneral,
    /// No three collinear, no six on a conic and (r = 8) no cubic through all
    /// points singular at one of them.
    DelPezzoGeneral,
    /// Points general on an irreducible curve of the given degree.
    OnCurve(CurveSpec),
    #[serde(rename_all = "camelCase")]
    Custom { known_classes: Vec<KnownClass> },
}

/// Where the evaluation point `x` sits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum PointSpec {
    /// A very general point of `X_r`.
    GenericOnSurface,
    /// A general point of the exceptional curve `Ei` (1-based index).
    OnExceptional(usize),
    /// The singular point of the configured cubic.
    NodeOfConfigCurve,
    /// A point off the exceptional curves that behaves like a general point
    /// except for the registered classes.
    #[serde(rename_all = "camelCase")]
    Custom { extra_classes: Vec<KnownClass> },
}

impl fmt::Display for PointSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointSpec::GenericOnSurface => f.write_str("genericOnSurface"),
            PointSpec::OnExceptional(i) => write!(f, "onExceptional({i})"),
            PointSpec::NodeOfConfigCurve => f.write_str("nodeOfConfigCurve"),
            PointSpec::Custom { extra_classes } => write!(f, "custom({} classes)", extra_classes.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceConfig {
    pub r: usize,
    pub position: Position,
    pub assume: Vec<Assumption>,
}

impl SurfaceConfig {
    pub fn new(r: usize, position: Position) -> Result<Self, ConfigError> {
        let cfg = Self { r, position, assume: Vec::new() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn very_general(r: usize) -> Self {
        Self { r, position: Position::VeryGeneral, assume: Vec::new() }
    }

    pub fn del_pezzo_general(r: usize) -> Result<Self, ConfigError> {
        Self::new(r, Position::DelPezzoGeneral)
    }

    pub fn on_curve(r: usize, degree: u8, singular: bool, points_smooth: bool) -> Result<Self, ConfigError> {
        Self::new(r, Position::OnCurve(CurveSpec { degree, singular, points_smooth }))
    }

    /// Eight points on an irreducible nodal cubic, smooth on it and otherwise
    /// general.
    pub fn nodal_cubic(r: usize) -> Result<Self, ConfigError> {
        Self::on_curve(r, 3, true, true)
    }

    pub fn with_assumptions(mut self, assume: impl IntoIterator<Item = Assumption>) -> Self {
        for a in assume {
            if !self.assume.contains(&a) {
                self.assume.push(a);
            }
        }
        self
    }

    pub fn assumes(&self, a: Assumption) -> bool {
        self.assume.contains(&a)
    }

    /// SHGH, directly or through its multiplicity-`t` strengthening.
    pub fn assumes_shgh(&self) -> bool {
        self.assumes(Assumption::Shgh) || self.assumes(Assumption::StrongShgh)
    }

    /// Negative curves at very general points are (-1)-curves. SHGH implies
    /// this: a negative class with positive Euler characteristic and
    /// non-negative arithmetic genus is a (-1)-class.
    pub fn assumes_weak_shgh(&self) -> bool {
        self.assumes(Assumption::WeakShgh) || self.assumes_shgh()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match &self.position {
            Position::VeryGeneral => {}
            Position::DelPezzoGeneral => {
                if self.r > 8 {
                    return Err(ConfigError::Invalid(format!(
                        "del Pezzo general position needs r <= 8 (got {})",
                        self.r
                    )));
                }
            }
            Position::OnCurve(spec) => {
                if !(1..=3).contains(&spec.degree) {
                    return Err(ConfigError::Invalid(format!(
                        "configured curve degree must be 1, 2 or 3 (got {})",
                        spec.degree
                    )));
                }
                if spec.singular && spec.degree != 3 {
                    return Err(ConfigError::Invalid(
                        "only an irreducible cubic can be singular".into(),
                    ));
                }
                if spec.singular && !spec.points_smooth {
                    return Err(ConfigError::Invalid(
                        "points on a singular cubic must be smooth points of it".into(),
                    ));
                }
            }
            Position::Custom { known_classes } => check_known(self.r, known_classes)?,
        }
        if self.assume.iter().collect::<BTreeSet<_>>().len() != self.assume.len() {
            return Err(ConfigError::Invalid("duplicate assumption".into()));
        }
        Ok(())
    }

    pub fn validate_point(&self, x: &PointSpec) -> Result<(), ConfigError> {
        let bad = |reason: &str| ConfigError::InvalidPoint { point: x.to_string(), reason: reason.into() };
        match x {
            PointSpec::GenericOnSurface => Ok(()),
            PointSpec::OnExceptional(i) => {
                if *i == 0 || *i > self.r {
                    Err(bad("exceptional index must be in 1..=r"))
                } else {
                    Ok(())
                }
            }
            PointSpec::NodeOfConfigCurve => match &self.position {
                Position::OnCurve(spec) if spec.singular => Ok(()),
                _ => Err(bad("configuration has no singular curve")),
            },
            PointSpec::Custom { extra_classes } => check_known(self.r, extra_classes),
        }
    }

    pub fn curve_spec(&self) -> Option<CurveSpec> {
        match self.position {
            Position::OnCurve(spec) => Some(spec),
            _ => None,
        }
    }

    /// Whether the points are in del Pezzo general position: either declared
    /// so, or general points on a curve along which no general-position
    /// condition can fail.
    pub fn is_del_pezzo_general(&self) -> bool {
        match &self.position {
            Position::DelPezzoGeneral => true,
            Position::VeryGeneral => self.r <= 8,
            Position::OnCurve(spec) => match spec.degree {
                1 => self.r <= 2,
                2 => self.r <= 5,
                _ => self.r <= 8,
            },
            Position::Custom { .. } => false,
        }
    }

    /// `-K` is effective: points on a curve of degree <= 3, or few enough
    /// points for a cubic to pass through them.
    pub fn is_anticanonical(&self) -> bool {
        matches!(self.position, Position::OnCurve(_)) || self.r <= 8
    }
}

fn check_known(r: usize, known: &[KnownClass]) -> Result<(), ConfigError> {
    let mut seen = BTreeSet::new();
    for k in known {
        if k.class.r() != r {
            return Err(ConfigError::ClassDimension {
                class: k.class.to_string(),
                expected: r,
                got: k.class.r(),
            });
        }
        if !seen.insert(&k.class) {
            return Err(ConfigError::Invalid(format!("duplicate registered class {}", k.class)));
        }
    }
    Ok(())
}

/// The JSON configuration document:
/// `{"r": 8, "position": {...}, "x": "nodeOfConfigCurve", "assume": ["weakSHGH"]}`.
/// An optional leading `"version"` field is accepted and preserved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<u32>,
    pub r: usize,
    pub position: Position,
    #[serde(default = "default_point")]
    pub x: PointSpec,
    #[serde(default)]
    pub assume: Vec<Assumption>,
}

fn default_point() -> PointSpec {
    PointSpec::GenericOnSurface
}

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

impl ConfigDocument {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let doc: Self = serde_json::from_str(text).map_err(|e| ConfigError::Document(e.to_string()))?;
        if let Some(v) = doc.version {
            if v != CONFIG_SCHEMA_VERSION {
                return Err(ConfigError::Document(format!("unsupported schema version {v}")));
            }
        }
        doc.split()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("configuration serializes")
    }

    /// Validated configuration and point.
    pub fn split(&self) -> Result<(SurfaceConfig, PointSpec), ConfigError> {
        let cfg = SurfaceConfig { r: self.r, position: self.position.clone(), assume: self.assume.clone() };
        cfg.validate()?;
        cfg.validate_point(&self.x)?;
        Ok((cfg, self.x.clone()))
    }

    pub fn from_parts(config: &SurfaceConfig, x: &PointSpec) -> Self {
        Self {
            version: None,
            r: config.r,
            position: config.position.clone(),
            x: x.clone(),
            assume: config.assume.clone(),
        }
    }
}

/// Outcome of the oracle together with the conjecture (if any) the answer
/// rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Assessment {
    pub status: ExistenceStatus,
    pub assumption: Option<Assumption>,
}

/// Decides whether `c` is realized by a reduced irreducible curve with
/// multiplicity exactly `t` at `x`.
pub fn existence(config: &SurfaceConfig, x: &PointSpec, c: &ExtendedClass) -> Result<ExistenceStatus, ConfigError> {
    assess(config, x, c).map(|a| a.status)
}

pub fn assess(config: &SurfaceConfig, x: &PointSpec, c: &ExtendedClass) -> Result<Assessment, ConfigError> {
    config.validate()?;
    config.validate_point(x)?;
    if c.r() != config.r {
        return Err(ConfigError::ClassDimension { class: c.to_string(), expected: config.r, got: c.r() });
    }
    Ok(assess_unchecked(config, x, c))
}

/// [`assess`] without re-validating `config` and `x`; callers scanning many
/// classes validate once up front.
pub(crate) fn assess_unchecked(config: &SurfaceConfig, x: &PointSpec, c: &ExtendedClass) -> Assessment {
    let (base, assumption) = base_status(config, x, c);
    let registered = registered_status(config, x, c);
    match (base, registered) {
        (Some(b), Some(reg)) if reg > b => {
            Assessment { status: reg, assumption: Some(Assumption::CustomExistenceData) }
        }
        (Some(b), _) => Assessment { status: b, assumption },
        (None, Some(reg)) => Assessment { status: reg, assumption: Some(Assumption::CustomExistenceData) },
        (None, None) => Assessment { status: ExistenceStatus::MayExist, assumption },
    }
}

fn registered_status(config: &SurfaceConfig, x: &PointSpec, c: &ExtendedClass) -> Option<ExistenceStatus> {
    let from_config = match &config.position {
        Position::Custom { known_classes } => known_classes.iter().find(|k| &k.class == c).map(|k| k.status),
        _ => None,
    };
    let from_point = match x {
        PointSpec::Custom { extra_classes } => extra_classes.iter().find(|k| &k.class == c).map(|k| k.status),
        _ => None,
    };
    from_config.max(from_point)
}

/// Strict transform of the configured curve on the blow-up at `x`.
pub fn config_curve_class(config: &SurfaceConfig, x: &PointSpec) -> Option<ExtendedClass> {
    let spec = config.curve_spec()?;
    let t = match x {
        PointSpec::NodeOfConfigCurve if spec.singular => 2,
        _ => 0,
    };
    Some(DivisorClass::uniform(i64::from(spec.degree), 1, config.r).extend(t))
}

/// Which single exceptional class a `d = 0` class is, if any:
/// `Some((i, t))` for `Ei - t E_x` with `t` in {0, 1}.
fn exceptional_shape(c: &ExtendedClass) -> Option<(usize, i64)> {
    if !c.base.degree().is_zero() {
        return None;
    }
    let mut found = None;
    for (i, mi) in c.base.multiplicities().iter().enumerate() {
        if mi.is_zero() {
            continue;
        }
        if found.is_some() || *mi != -BigInt::one() {
            return None;
        }
        found = Some(i);
    }
    let t = c.t.to_i64()?;
    match (found, t) {
        (Some(i), 0 | 1) => Some((i, t)),
        _ => None,
    }
}

fn point_is_generic_like(x: &PointSpec) -> bool {
    matches!(x, PointSpec::GenericOnSurface | PointSpec::Custom { .. })
}

type Base = (Option<ExistenceStatus>, Option<Assumption>);

fn hard(status: ExistenceStatus) -> Base {
    (Some(status), None)
}

fn base_status(config: &SurfaceConfig, x: &PointSpec, c: &ExtendedClass) -> Base {
    use ExistenceStatus::*;
    let d = c.base.degree();
    if c.t.is_negative() || d.is_negative() {
        return hard(CannotExist);
    }
    if d.is_zero() {
        return match exceptional_shape(c) {
            Some((i, 0)) => match x {
                PointSpec::OnExceptional(j) if *j == i + 1 => hard(CannotExist),
                _ => hard(Exists),
            },
            Some((i, _)) => match x {
                PointSpec::OnExceptional(j) if *j == i + 1 => hard(Exists),
                _ => hard(CannotExist),
            },
            None => hard(CannotExist),
        };
    }
    if c.base.multiplicities().iter().any(Signed::is_negative) {
        return hard(CannotExist);
    }
    if let PointSpec::OnExceptional(i) = x {
        // (Ei - E_x) is an irreducible curve; c . (Ei - E_x) = mi - t.
        if c.t > c.base.multiplicities()[i - 1] {
            return hard(CannotExist);
        }
    }
    if point_is_generic_like(x) && c == &DivisorClass::hyperplane(config.r).extend(1) {
        // a general line through x
        return hard(Exists);
    }
    if let Some(curve) = config_curve_class(config, x) {
        if &curve == c {
            return hard(Exists);
        }
        let product = intersect_extended(c, &curve).expect("same lattice");
        if product.is_negative() {
            return hard(CannotExist);
        }
    }
    if config.is_del_pezzo_general() {
        return del_pezzo_policy(config, x, c);
    }
    match &config.position {
        Position::VeryGeneral => very_general_policy(config, x, c),
        _ => (None, None),
    }
}

fn minus_kind(c: &ExtendedClass) -> Option<i64> {
    let s = c.self_intersection();
    let k = c.canonical_dot();
    if s == BigInt::from(-1) && k == BigInt::from(-1) {
        Some(1)
    } else if s == BigInt::from(-2) && k.is_zero() {
        Some(2)
    } else {
        None
    }
}

/// Image of `c` on `X_r` has negative square while `c` passes through `x`:
/// a general point avoids the countably many negative curves of `X_r`.
fn through_generic_point_on_negative_curve(c: &ExtendedClass) -> bool {
    c.t.is_positive() && c.base.self_intersection().is_negative()
}

fn del_pezzo_policy(config: &SurfaceConfig, x: &PointSpec, c: &ExtendedClass) -> Base {
    use ExistenceStatus::*;
    let generality = Some(Assumption::ConfigGenerality);
    let negative = c.self_intersection().is_negative();
    if c.t.is_zero() {
        // A curve on X_r; X_r is del Pezzo, whose only negative curves are
        // the (-1)-curves, all of which exist.
        if !c.base.self_intersection().is_negative() {
            return (None, None);
        }
        return match minus_kind(c) {
            Some(1) if point_is_generic_like(x) => (Some(Exists), generality),
            Some(1) => (None, None),
            _ => (Some(CannotExist), generality),
        };
    }
    if let PointSpec::OnExceptional(_) = x {
        // A general point of Ei: the blow-up at x is a weak del Pezzo surface
        // whose only (-2)-curve is Ei - E_x, so a (-1)-class is a curve iff it
        // meets Ei - E_x non-negatively, which base_status already enforced.
        if !negative || config.r + 1 > 8 {
            return (None, None);
        }
        return match minus_kind(c) {
            Some(1) => (Some(Exists), generality),
            _ => (Some(CannotExist), generality),
        };
    }
    if !point_is_generic_like(x) {
        return (None, None);
    }
    if through_generic_point_on_negative_curve(c) {
        return (Some(CannotExist), generality);
    }
    if c == &DivisorClass::uniform(3, 1, config.r).extend(1) {
        // The cubics through the points and x form a system whose general
        // member is irreducible and smooth at x.
        return (Some(Exists), generality);
    }
    if !negative {
        return (None, None);
    }
    if config.r < 8 {
        // x general: the r + 1 points are again in del Pezzo general position.
        return match minus_kind(c) {
            Some(1) => (Some(Exists), generality),
            _ => (Some(CannotExist), generality),
        };
    }
    // r = 8: the blow-up at x is no longer del Pezzo.
    let nodal_cubic = DivisorClass::uniform(3, 1, 8).extend(2);
    if c == &nodal_cubic {
        // A general point is not the node of a cubic of the pencil.
        return (Some(CannotExist), generality);
    }
    match minus_kind(c) {
        // c.t = 1 and the image is a conic-bundle fibre through x.
        Some(1) if c.t == BigInt::one() => (Some(Exists), generality),
        _ => (None, None),
    }
}

fn very_general_policy(config: &SurfaceConfig, x: &PointSpec, c: &ExtendedClass) -> Base {
    use ExistenceStatus::*;
    if !point_is_generic_like(x) {
        return (None, None);
    }
    let generality = Some(Assumption::ConfigGenerality);
    if through_generic_point_on_negative_curve(c) {
        return (Some(CannotExist), generality);
    }
    if !c.self_intersection().is_negative() {
        return (None, None);
    }
    if minus_kind(c) == Some(1) {
        // (-1)-curves at very general points form the Cremona orbit of E1.
        let status = if cremona_reduces_to_exceptional(&c.as_divisor()) { Exists } else { CannotExist };
        return (Some(status), generality);
    }
    let points = config.r + usize::from(c.t.is_positive());
    if c.euler_characteristic() <= BigInt::zero() {
        // A reduced irreducible curve in a special system. Known for at most
        // nine points.
        if points <= 9 {
            return (Some(CannotExist), generality);
        }
        if config.assumes_shgh() {
            return (Some(CannotExist), Some(Assumption::Shgh));
        }
    }
    if config.assumes_weak_shgh() {
        return (Some(CannotExist), Some(Assumption::WeakShgh));
    }
    (None, None)
}

/// Runs quadratic Cremona reductions on a class; true when it lands on an
/// exceptional class `Ei`. Such classes are (-1)-curves on the blow-up at
/// general points.
pub fn cremona_reduces_to_exceptional(c: &DivisorClass) -> bool {
    let Some((mut d, mut m)) = c.to_i64s() else {
        return false;
    };
    if d < 0 {
        return false;
    }
    while m.len() < 3 {
        m.push(0);
    }
    loop {
        if d == 0 {
            let ones = m.iter().filter(|&&x| x == -1).count();
            let zeros = m.iter().filter(|&&x| x == 0).count();
            return ones == 1 && zeros == m.len() - 1;
        }
        if m.iter().any(|&x| x < 0) {
            return false;
        }
        m.sort_unstable_by(|a, b| b.cmp(a));
        let excess = m[0] + m[1] + m[2] - d;
        if excess <= 0 {
            return false;
        }
        let (a, b, e) = (m[0], m[1], m[2]);
        m[0] = d - b - e;
        m[1] = d - a - e;
        m[2] = d - a - b;
        d -= excess;
    }
}

/// `(-K)^2 = 9 - r` together with `-K = C + (3 - d) H` for the configured
/// curve `C` of degree `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnticanonicalDecomposition {
    pub degree: BigInt,
    pub curve: DivisorClass,
    pub hyperplane_multiple: u8,
}

pub fn anticanonical_degree(config: &SurfaceConfig) -> Result<AnticanonicalDecomposition, ConfigError> {
    let spec = config
        .curve_spec()
        .ok_or_else(|| ConfigError::Invalid("anticanonical decomposition needs an OnCurve configuration".into()))?;
    let k = canonical_class(config.r);
    let curve = DivisorClass::uniform(i64::from(spec.degree), 1, config.r);
    let h = DivisorClass::hyperplane(config.r);
    let rebuilt = &curve + &h.scaled(&BigInt::from(3 - spec.degree));
    debug_assert_eq!(rebuilt, -&k);
    Ok(AnticanonicalDecomposition {
        degree: k.self_intersection(),
        curve,
        hyperplane_multiple: 3 - spec.degree,
    })
}
