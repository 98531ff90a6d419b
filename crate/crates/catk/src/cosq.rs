//! The curvature-weighted cosine of a pair of bound vectors.
//!
//! A bound vector is an ordered pair of points (tail, head). Given nonzero
//! curvature `K` and the six pairwise distances between the endpoints of two
//! bound vectors `(A -> P)` and `(B -> Q)`:
//!
//! ```text
//! x = |AP|   y = |BQ|   a = |AB|   b = |PQ|   d = |PB|   f = |AQ|
//! ```
//!
//! the weighted cosine is, with `k = sqrt(|K|)`,
//!
//! ```text
//! K > 0:  (cos kb + cos kx cos ky) / (sin kx sin ky)
//!         - (cos kx + cos kd)(cos ky + cos kf) / ((1 + cos ka) sin kx sin ky)
//! K < 0:  (cosh kx + cosh kd)(cosh ky + cosh kf) / ((1 + cosh ka) sinh kx sinh ky)
//!         - (cosh kb + cosh kx cosh ky) / (sinh kx sinh ky)
//! ```
//!
//! For vectors realized in the model space of the same curvature this equals
//! the cosine of the angle between them after parallel transport along the
//! tail geodesic (see [`crate::modelspace::angle_and_transport_oracle`]), but
//! the formula itself is defined for arbitrary distance data and its value
//! may then leave `[-1, 1]` — that excess is exactly what the condition
//! checkers in [`crate::conditions`] look for. Raw values are never clamped.

use crate::modelspace::{
    geodesic_interpolate, model_distance, Curvature, ModelError, ModelPoint, Regime,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CosqError {
    #[error("the weighted cosine requires nonzero curvature")]
    ZeroCurvature,
    #[error("distance {name} = {value} must be finite and {req}")]
    BadDistance {
        name: &'static str,
        value: f64,
        req: &'static str,
    },
    #[error("undefined at this curvature: {name} = {value} reaches pi/kappa = {limit}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        limit: f64,
    },
    #[error("evaluation overflowed for these distances")]
    Overflow,
    #[error("not a valid distance matrix: {0}")]
    InvalidMatrix(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The six distances defining a pair of bound vectors `(A -> P)`, `(B -> Q)`:
/// `x = |AP|`, `y = |BQ|`, `a = |AB|`, `b = |PQ|`, `d = |PB|`, `f = |AQ|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadDistances {
    pub x: f64,
    pub y: f64,
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub f: f64,
}

impl QuadDistances {
    pub fn new(x: f64, y: f64, a: f64, b: f64, d: f64, f: f64) -> Self {
        Self { x, y, a, b, d, f }
    }

    /// The same pair with the two vectors listed in the other order.
    pub fn swapped(&self) -> Self {
        Self {
            x: self.y,
            y: self.x,
            a: self.a,
            b: self.b,
            d: self.f,
            f: self.d,
        }
    }
}

/// Raw evaluation without domain validation. Callers guarantee `K != 0`,
/// `x, y > 0`, and in the positive regime `x, y, a < pi/kappa`.
pub(crate) fn cosq_raw(c: Curvature, x: f64, y: f64, a: f64, b: f64, d: f64, f: f64) -> f64 {
    let sxy = c.sn(x) * c.sn(y);
    let direct = (c.cs(b) + c.cs(x) * c.cs(y)) / sxy;
    let cross = (c.cs(x) + c.cs(d)) * (c.cs(y) + c.cs(f)) / ((1.0 + c.cs(a)) * sxy);
    match c.regime() {
        Regime::Negative => cross - direct,
        _ => direct - cross,
    }
}

/// Weighted cosine of a pair of bound vectors at nonzero curvature.
///
/// Requires `x, y > 0` and all six distances finite and nonnegative; in the
/// positive regime additionally `x, y, a < pi/kappa` (the trigonometric
/// denominators vanish there). The result is reported unclamped.
pub fn cosq_k(c: Curvature, q: &QuadDistances) -> Result<f64, CosqError> {
    if c.regime() == Regime::Zero {
        return Err(CosqError::ZeroCurvature);
    }
    for (name, v) in [("x", q.x), ("y", q.y)] {
        if !v.is_finite() || v <= 0.0 {
            return Err(CosqError::BadDistance {
                name,
                value: v,
                req: "positive",
            });
        }
    }
    for (name, v) in [("a", q.a), ("b", q.b), ("d", q.d), ("f", q.f)] {
        if !v.is_finite() || v < 0.0 {
            return Err(CosqError::BadDistance {
                name,
                value: v,
                req: "nonnegative",
            });
        }
    }
    if c.regime() == Regime::Positive {
        let limit = c.diameter();
        for (name, v) in [("x", q.x), ("y", q.y), ("a", q.a)] {
            if v >= limit {
                return Err(CosqError::OutOfDomain {
                    name,
                    value: v,
                    limit,
                });
            }
        }
    }
    let v = cosq_raw(c, q.x, q.y, q.a, q.b, q.d, q.f);
    if !v.is_finite() {
        return Err(CosqError::Overflow);
    }
    Ok(v)
}

/// Weighted cosine of the bound vectors `(a -> p)` and `(b -> q)` realized
/// by model points, computed from their six pairwise distances.
pub fn cosq_k_points(
    a: &ModelPoint,
    p: &ModelPoint,
    b: &ModelPoint,
    q: &ModelPoint,
) -> Result<f64, CosqError> {
    let qd = QuadDistances::new(
        model_distance(a, p)?,
        model_distance(b, q)?,
        model_distance(a, b)?,
        model_distance(p, q)?,
        model_distance(p, b)?,
        model_distance(a, q)?,
    );
    cosq_k(a.curvature(), &qd)
}

/// The twelve vector pairs over a labeled quadruple, as (tail, head) role
/// indices with `0 = A`, `1 = P`, `2 = B`, `3 = Q`. Unordered pairs of
/// bound vectors whose endpoints cover all four points, listed in the
/// conventional order I..XII.
pub const CASE_VECTORS: [((usize, usize), (usize, usize)); 12] = [
    ((0, 1), (2, 3)),
    ((0, 1), (3, 2)),
    ((0, 2), (1, 3)),
    ((0, 2), (3, 1)),
    ((0, 3), (1, 2)),
    ((0, 3), (2, 1)),
    ((1, 0), (2, 3)),
    ((1, 0), (3, 2)),
    ((1, 2), (3, 0)),
    ((1, 3), (2, 0)),
    ((2, 0), (3, 1)),
    ((2, 1), (3, 0)),
];

pub const CASE_LABELS: [&str; 12] = [
    "I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI", "XII",
];

/// Extracts the six distances of one case from a 4x4 distance matrix in
/// role order `(A, P, B, Q)`.
pub(crate) fn case_distances(
    m: &[[f64; 4]; 4],
    case: ((usize, usize), (usize, usize)),
) -> QuadDistances {
    let ((t1, h1), (t2, h2)) = case;
    QuadDistances::new(
        m[t1][h1],
        m[t2][h2],
        m[t1][t2],
        m[h1][h2],
        m[h1][t2],
        m[t1][h2],
    )
}

/// One slot of a twelve-case table: either an evaluated weighted cosine or
/// a case whose distances leave the positive-regime domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CaseSlot {
    Evaluated(f64),
    Inadmissible,
}

/// Weighted cosines of all twelve cases over one labeled quadruple.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseTable {
    pub slots: [CaseSlot; 12],
}

impl CaseTable {
    pub fn value(&self, i: usize) -> Option<f64> {
        match self.slots[i] {
            CaseSlot::Evaluated(v) => Some(v),
            CaseSlot::Inadmissible => None,
        }
    }

    pub fn evaluated(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.slots.iter().enumerate().filter_map(|(i, s)| match s {
            CaseSlot::Evaluated(v) => Some((i, *v)),
            CaseSlot::Inadmissible => None,
        })
    }

    pub fn max(&self) -> Option<f64> {
        self.evaluated().map(|(_, v)| v).reduce(f64::max)
    }

    pub fn min(&self) -> Option<f64> {
        self.evaluated().map(|(_, v)| v).reduce(f64::min)
    }
}

/// Evaluates all twelve cases over a quadruple given as a symmetric 4x4
/// distance matrix in role order `(A, P, B, Q)`: zero diagonal, positive
/// finite off-diagonal entries.
///
/// In the positive regime, cases whose `x`, `y`, or `a` reach `pi/kappa`
/// are reported as [`CaseSlot::Inadmissible`] rather than as errors.
pub fn twelve_cases(c: Curvature, m: &[[f64; 4]; 4]) -> Result<CaseTable, CosqError> {
    if c.regime() == Regime::Zero {
        return Err(CosqError::ZeroCurvature);
    }
    let mut scale: f64 = 0.0;
    for i in 0..4 {
        if m[i][i] != 0.0 {
            return Err(CosqError::InvalidMatrix(format!(
                "diagonal entry [{i}][{i}] = {} is not zero",
                m[i][i]
            )));
        }
        for j in 0..4 {
            if !m[i][j].is_finite() {
                return Err(CosqError::InvalidMatrix(format!(
                    "entry [{i}][{j}] is not finite"
                )));
            }
            scale = scale.max(m[i][j].abs());
        }
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            if (m[i][j] - m[j][i]).abs() > 1e-12 * scale.max(1.0) {
                return Err(CosqError::InvalidMatrix(format!(
                    "entries [{i}][{j}] and [{j}][{i}] differ"
                )));
            }
            if m[i][j] <= 0.0 {
                return Err(CosqError::InvalidMatrix(format!(
                    "off-diagonal entry [{i}][{j}] = {} is not positive",
                    m[i][j]
                )));
            }
        }
    }
    let limit = c.diameter();
    let mut slots = [CaseSlot::Inadmissible; 12];
    for (i, case) in CASE_VECTORS.iter().enumerate() {
        let q = case_distances(m, *case);
        if c.regime() == Regime::Positive && (q.x >= limit || q.y >= limit || q.a >= limit) {
            continue;
        }
        slots[i] = CaseSlot::Evaluated(cosq_k(c, &q)?);
    }
    Ok(CaseTable { slots })
}

/// Midpoints of the two bound vectors `(a -> p)` and `(b -> q)` realized by
/// model points: the halved pair `(a -> m1)`, `(b -> m2)`. Replacing the
/// vectors by their halves preserves the weighted cosine for configurations
/// in the model space of the matching curvature.
pub fn halve_in_model(
    a: &ModelPoint,
    p: &ModelPoint,
    b: &ModelPoint,
    q: &ModelPoint,
) -> Result<(ModelPoint, ModelPoint), CosqError> {
    if model_distance(a, p)? == 0.0 {
        return Err(CosqError::Model(ModelError::ZeroVector("first")));
    }
    if model_distance(b, q)? == 0.0 {
        return Err(CosqError::Model(ModelError::ZeroVector("second")));
    }
    let m1 = geodesic_interpolate(a, p, 0.5)?;
    let m2 = geodesic_interpolate(b, q, 0.5)?;
    Ok((m1, m2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modelspace::{from_polar, sample_model_points, ModelDim};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn curv(k: f64) -> Curvature {
        Curvature::new(k).unwrap()
    }

    #[test]
    fn identical_vectors_give_plus_one() {
        for k in [1.0, -1.0, 0.3, -2.5] {
            let c = curv(k);
            for len in [0.2, 0.9, 1.7] {
                let q = QuadDistances::new(len, len, 0.0, 0.0, len, len);
                assert_abs_diff_eq!(cosq_k(c, &q).unwrap(), 1.0, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn reversed_vector_gives_minus_one() {
        for k in [1.0, -1.0, 0.3, -2.5] {
            let c = curv(k);
            for len in [0.2, 0.9, 1.7] {
                let q = QuadDistances::new(len, len, len, len, 0.0, 0.0);
                assert_abs_diff_eq!(cosq_k(c, &q).unwrap(), -1.0, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn zero_curvature_and_domain_violations_error() {
        let q = QuadDistances::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0);
        assert!(matches!(
            cosq_k(curv(0.0), &q),
            Err(CosqError::ZeroCurvature)
        ));
        let c = curv(1.0);
        let bad = QuadDistances::new(PI, 1.0, 1.0, 1.0, 1.0, 1.0);
        assert!(matches!(cosq_k(c, &bad), Err(CosqError::OutOfDomain { .. })));
        let neg = QuadDistances::new(1.0, 1.0, -0.1, 1.0, 1.0, 1.0);
        assert!(matches!(cosq_k(c, &neg), Err(CosqError::BadDistance { .. })));
        let zero = QuadDistances::new(0.0, 1.0, 1.0, 1.0, 1.0, 1.0);
        assert!(matches!(
            cosq_k(c, &zero),
            Err(CosqError::BadDistance { .. })
        ));
        // hyperbolic overflow is reported, not returned as inf/NaN
        let huge = QuadDistances::new(800.0, 800.0, 800.0, 800.0, 800.0, 800.0);
        assert!(matches!(cosq_k(curv(-1.0), &huge), Err(CosqError::Overflow)));
    }

    #[test]
    fn flat_limit_is_approached_linearly_in_k() {
        // fixed admissible six-distance data
        let (x, y, a, b, d, f) = (0.8, 1.1, 0.9, 1.3, 1.2, 1.4);
        let flat = (d * d + f * f - a * a - b * b) / (2.0 * x * y);
        for sign in [1.0, -1.0] {
            let mut prev = f64::INFINITY;
            for mag in [1e-2, 1e-3, 1e-4] {
                let c = curv(sign * mag);
                let q = QuadDistances::new(x, y, a, b, d, f);
                let gap = (cosq_k(c, &q).unwrap() - flat).abs();
                assert!(
                    gap < 0.2 * prev,
                    "gap {gap} at K = {} did not shrink from {prev}",
                    sign * mag
                );
                prev = gap;
            }
        }
    }

    #[test]
    fn twelve_cases_validates_the_matrix() {
        let c = curv(1.0);
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    m[i][j] = 1.0;
                }
            }
        }
        assert!(twelve_cases(c, &m).is_ok());
        let mut asym = m;
        asym[0][1] = 1.5;
        assert!(matches!(
            twelve_cases(c, &asym),
            Err(CosqError::InvalidMatrix(_))
        ));
        let mut diag = m;
        diag[2][2] = 0.1;
        assert!(matches!(
            twelve_cases(c, &diag),
            Err(CosqError::InvalidMatrix(_))
        ));
    }

    #[test]
    fn oversized_entries_mark_cases_inadmissible() {
        let c = curv(1.0);
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    m[i][j] = 1.0;
                }
            }
        }
        // |PQ| beyond pi only matters where it appears as x, y, or a
        m[1][3] = 3.2;
        m[3][1] = 3.2;
        let t = twelve_cases(c, &m).unwrap();
        let inadmissible: Vec<usize> = (0..12).filter(|&i| t.value(i).is_none()).collect();
        // exactly the cases using (P,Q) or (Q,P) as a vector or as the tail pair
        let expected: Vec<usize> = CASE_VECTORS
            .iter()
            .enumerate()
            .filter(|(_, ((t1, h1), (t2, h2)))| {
                let uses = |(u, v): (usize, usize)| (u == 1 && v == 3) || (u == 3 && v == 1);
                uses((*t1, *h1)) || uses((*t2, *h2)) || uses((*t1, *t2))
            })
            .map(|(i, _)| i)
            .collect();
        assert_eq!(inadmissible, expected);
        assert!(!inadmissible.is_empty());
        assert!(t.max().is_some());
    }

    #[test]
    fn t_graph_closed_form_spot_value() {
        // five-point tree: two points on one branch, bar endpoints on the
        // other two; the stretched case value has a closed form
        let eps: f64 = 0.1;
        let (x, y) = (PI / 2.0 + 2.0 * eps, eps);
        let a = PI / 2.0 + 2.0 * eps;
        let b = PI / 2.0 + eps;
        let d = PI / 2.0 + 2.0 * eps;
        let f = PI / 2.0 + eps;
        let v = cosq_k(curv(1.0), &QuadDistances::new(x, y, a, b, d, f)).unwrap();
        let closed = (1.0 + (2.0 * eps).sin()) / (1.0 - (2.0 * eps).sin());
        assert_abs_diff_eq!(v, closed, epsilon = 1e-12);
    }

    #[test]
    fn halving_preserves_the_weighted_cosine_on_the_sphere() {
        let c = curv(1.0);
        for seed in 0..40u64 {
            let pts = sample_model_points(c, ModelDim::Three, 4, seed, None).unwrap();
            let (a, p, b, q) = (&pts[0], &pts[1], &pts[2], &pts[3]);
            let before = cosq_k_points(a, p, b, q).unwrap();
            let (m1, m2) = halve_in_model(a, p, b, q).unwrap();
            let after = cosq_k_points(a, &m1, b, &m2).unwrap();
            assert_abs_diff_eq!(before, after, epsilon = 1e-11);
        }
    }

    #[test]
    fn halving_also_holds_on_the_hyperboloid() {
        let c = curv(-1.0);
        for seed in 0..40u64 {
            let pts = sample_model_points(c, ModelDim::Three, 4, seed, Some(3.0)).unwrap();
            let (a, p, b, q) = (&pts[0], &pts[1], &pts[2], &pts[3]);
            let before = cosq_k_points(a, p, b, q).unwrap();
            let (m1, m2) = halve_in_model(a, p, b, q).unwrap();
            let after = cosq_k_points(a, &m1, b, &m2).unwrap();
            assert_abs_diff_eq!(before, after, epsilon = 1e-11);
        }
    }

    #[test]
    fn collinear_tail_pair_evaluates_to_one_exactly() {
        // vectors (A -> O) and (B -> Q) on a tree where O sits between A and B
        let c = curv(1.0);
        let q = QuadDistances::new(
            PI / 4.0,          // x = |AO|
            PI / 2.0,          // y = |BQ|
            PI / 2.0,          // a = |AB|
            PI / 4.0,          // b = |OQ|
            PI / 4.0,          // d = |OB|
            PI / 2.0,          // f = |AQ|
        );
        assert_eq!(cosq_k(c, &q).unwrap(), 1.0);
    }

    proptest! {
        #[test]
        fn listing_order_of_the_pair_is_immaterial(
            k in prop_oneof![Just(1.0), Just(-1.0), Just(0.4), Just(-1.7)],
            x in 0.1f64..1.4,
            y in 0.1f64..1.4,
            a in 0.0f64..1.4,
            b in 0.0f64..2.0,
            d in 0.0f64..2.0,
            f in 0.0f64..2.0,
        ) {
            let c = curv(k);
            let q = QuadDistances::new(x, y, a, b, d, f);
            let v1 = cosq_k(c, &q).unwrap();
            let v2 = cosq_k(c, &q.swapped()).unwrap();
            // algebraically identical term by term
            prop_assert!((v1 - v2).abs() <= 1e-12);
        }

        #[test]
        fn model_configurations_stay_bounded(
            k in prop_oneof![Just(1.0), Just(-1.0)],
            seed in 0u64..300,
        ) {
            let c = curv(k);
            let pts = sample_model_points(c, ModelDim::Three, 4, seed, None).unwrap();
            let v = cosq_k_points(&pts[0], &pts[1], &pts[2], &pts[3]);
            if let Ok(v) = v {
                prop_assert!(v.abs() <= 1.0 + 1e-9, "cosq {v} escapes [-1,1]");
            }
        }

        #[test]
        fn matches_transport_oracle(
            k in prop_oneof![Just(1.0), Just(-1.0)],
            seed in 0u64..200,
        ) {
            let c = curv(k);
            let cap = if k > 0.0 { None } else { Some(3.0) };
            let pts = sample_model_points(c, ModelDim::Three, 4, seed, cap).unwrap();
            let (a, p, b, q) = (&pts[0], &pts[1], &pts[2], &pts[3]);
            let dist_route = cosq_k_points(a, p, b, q);
            let geo_route = crate::modelspace::angle_and_transport_oracle(a, p, b, q);
            if let (Ok(v1), Ok(v2)) = (dist_route, geo_route) {
                prop_assert!((v1 - v2).abs() <= 1e-9, "routes disagree: {v1} vs {v2}");
            }
        }
    }

    #[test]
    fn polar_square_on_the_sphere() {
        // a geodesic "square" straddling the base point: vectors along the
        // same meridian point the same way after transport
        let c = curv(1.0);
        let a = from_polar(c, 0.3, 0.0).unwrap();
        let p = from_polar(c, 0.6, 0.0).unwrap();
        let b = from_polar(c, 0.3, PI).unwrap();
        let q = from_polar(c, 0.6, PI).unwrap();
        // (A -> P) runs away from the pole, (B -> Q) also away but on the
        // opposite side: after transport they are anti-aligned
        let v = cosq_k_points(&a, &p, &b, &q).unwrap();
        assert_abs_diff_eq!(v, -1.0, epsilon = 1e-12);
    }
}
