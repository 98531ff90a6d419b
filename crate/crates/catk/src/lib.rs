//! catk — curvature-comparison analysis toolkit.
//!
//! The crate decides curvature conditions on finite distance data. Its
//! primitive is the curvature-weighted cosine of a pair of bound vectors
//! (directed point pairs), computed from six pairwise distances at a fixed
//! nonzero curvature `K`. On top of that sit:
//!
//! * [`modelspace`] — the constant-curvature model surfaces and spaces
//!   (sphere, hyperboloid sheet, flat plane/space): distances, geodesics,
//!   point reflections, triangle trigonometry, and seeded point sampling.
//!   These provide independent geometric ground truth for everything the
//!   distance-level routines claim.
//! * [`cosq`] — the weighted cosine itself, the twelve-case enumeration
//!   over a labeled quadruple, and midpoint halving of vector pairs.
//! * [`conditions`] — scans over finite semimetric spaces: the upper,
//!   lower, and one-sided bound-vector conditions, curvature-class
//!   membership by explicit product-form inequalities, the quadrilateral
//!   cosine inequality, and weak convexity.
//! * [`spaces`] — constructions of the small example spaces the checkers
//!   are calibrated against, plus a registry of named examples with their
//!   published reference values.
//!
//! Distances are plain `f64` values in the same units as `1/sqrt(|K|)`;
//! nothing is ever silently clamped — out-of-domain data is reported
//! through typed errors.

pub mod conditions;
pub mod cosq;
pub mod modelspace;
pub mod spaces;
