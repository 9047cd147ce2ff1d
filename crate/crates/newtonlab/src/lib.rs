//! Exact-arithmetic toolkit for Newton polygons of degree-p cyclic covers
//! of curves: polygon calculus, moduli-space codimension counts, cover
//! constructions with predicted polygons, and an independent brute-force
//! zeta-function oracle over small finite fields.

// Error enums carry exact rationals and full report payloads.
#![allow(clippy::result_large_err)]

pub mod cli;
pub mod covers;
pub mod families;
pub mod fp;
pub mod polygon;
pub mod report;
pub mod strata;
pub mod zeta;

pub use covers::{
    ds_prank, exactness_class, hodge_lower_bound, reduce_artin_schreier, rh_genus,
    swan_conductors, BranchDatum, CoverError, CoverSpec, ExactnessClass,
};
pub use families::{
    construct_theorem4, construct_theorem5, frequency_report, max_admissible_k, oort_witness,
    FamilyError, FamilyMember, FamilySource,
};
pub use polygon::{BasicGraph, LatticeCount, NewtonPolygon, PolygonError, Slope};
pub use strata::{
    is_unlikely_polygon, moduli_dims, unlikely_family_report, ModuliDims, StrataError,
    UnlikelyReport,
};
pub use zeta::{
    count_points, l_polynomial, newton_polygon_of_l, verify_prediction, CurveOverP1, LPolynomial,
    Verdict, VerificationReport, ZetaError, DEFAULT_FIELD_GUARD,
};
