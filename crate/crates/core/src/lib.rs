//! Exact lattice arithmetic on blow-ups of the projective plane at points,
//! certified enumeration of negative curves, positivity certificates and
//! Seshadri-constant bounds.
//!
//! Everything is exact: classes carry arbitrary-precision integers and the
//! square-root cap `sqrt(L^2)` stays symbolic.

pub mod curves;
pub mod picard;
pub mod positivity;
pub mod seshadri;
pub mod shgh;
pub mod surfaceconfig;

pub use curves::{
    classify_negative_class, enumerate_minus_curves, gamma_set, proven_degree_bound, CandidateSet, Completeness,
    CurvesError, MinusKind, NegativeClassType,
};
pub use picard::{
    anticanonical_dot, arithmetic_genus, canonical_class, canonical_dot, euler_characteristic, intersect,
    intersect_extended, DivisorClass, ExtendedClass, JsonInt, PicardError,
};
pub use positivity::{
    bpf_seshadri_one, check_ample, hodge_gap, curve_multiple_globally_generated, sample_ample_bundles, on_curve_lower_bound,
    PositivityCertificate, PositivityError, Verdict,
};
pub use seshadri::{
    compute, half_bound_certificate, integrality_check, degree_one_ample_classes, degree_one_chain, nef_sum_certificate, curve_nef_certificate,
    exceptional_point_value, x8_dichotomy, HalfBoundReport, IntegralityReport, ScanBox, SeshadriError, SeshadriResult,
    SeshadriValue,
};
pub use shgh::{expected_dim, ncon_forces_nonreduced, strong_shgh_forces_nonreduced, FatPointSystem, ShghError};
pub use surfaceconfig::{
    existence, Assumption, ConfigDocument, ConfigError, ExistenceStatus, KnownClass, PointSpec, Position,
    SurfaceConfig,
};
