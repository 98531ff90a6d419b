//! Constructors for reference configurations and a registry of worked
//! examples with their expected values.
//!
//! The constructors build the concrete finite spaces the rest of the crate
//! is exercised on: T-shaped graph metrics, explicit four-point spaces,
//! centrally symmetric spherical quadruples with a stretched cross
//! distance, and transported-segment quadruples whose weighted cosine is
//! exactly `+1` or `-1` by construction. [`registry`] packages the frozen
//! reference examples together with their expected case tables, closed-form
//! values, and verdict patterns; [`evaluate_example`] recomputes everything
//! and reports one pass/fail line per expectation.

use crate::conditions::{check_lower, check_upper, ConditionsError, SemimetricSpace, Verdict};
use crate::cosq::{cosq_k, twelve_cases, CosqError, QuadDistances, CASE_LABELS};
use crate::modelspace::{
    from_polar, geodesic_interpolate, geodesic_reflect, model_distance, point_on_side_distance,
    Curvature, ModelError, ModelPoint, Regime,
};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpacesError {
    #[error("parameter {name} = {value} out of range: {requirement}")]
    BadParam {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("construction requires nonzero curvature")]
    ZeroCurvature,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Conditions(#[from] ConditionsError),
    #[error(transparent)]
    Cosq(#[from] CosqError),
}

fn require(
    ok: bool,
    name: &'static str,
    value: f64,
    requirement: &'static str,
) -> Result<(), SpacesError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(SpacesError::BadParam {
            name,
            value,
            requirement,
        })
    }
}

/// Graph metric of a T shape: a stem of length `arm` glued at junction `O`
/// to the middle of a crossbar of length `bar`.
///
/// Points: `A` at the free end of the stem, optionally `P` on the stem at
/// distance `p_offset` from `A`, the junction `O`, and the crossbar ends
/// `B`, `Q` at `bar / 2` from `O`. Distances are path lengths through the
/// junction. Labels in order `[A, P, O, B, Q]` (or without `P`).
pub fn t_graph(
    arm: f64,
    bar: f64,
    p_offset: Option<f64>,
) -> Result<SemimetricSpace, SpacesError> {
    require(arm > 0.0, "arm", arm, "positive")?;
    require(bar > 0.0, "bar", bar, "positive")?;
    // branch coordinates: (branch id, distance from the junction)
    let mut pts: Vec<(&str, u8, f64)> = vec![("A", 0, arm)];
    if let Some(off) = p_offset {
        require(off > 0.0 && off < arm, "p_offset", off, "within (0, arm)")?;
        pts.push(("P", 0, arm - off));
    }
    pts.push(("O", 0, 0.0));
    pts.push(("B", 1, 0.5 * bar));
    pts.push(("Q", 2, 0.5 * bar));
    let n = pts.len();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let (_, bi, ri) = pts[i];
            let (_, bj, rj) = pts[j];
            dist[i * n + j] = if bi == bj { (ri - rj).abs() } else { ri + rj };
        }
    }
    let labels = pts.iter().map(|(l, _, _)| l.to_string()).collect();
    Ok(SemimetricSpace::new(labels, dist)?)
}

/// Four labeled points from their six pairwise distances. With labels
/// `[A, P, B, Q]` the arguments are `|AP|, |BQ|, |AB|, |PQ|, |PB|, |AQ|`.
/// Only semimetric validity is enforced; metricity is the caller's question.
pub fn four_point_space(
    labels: [&str; 4],
    ap: f64,
    bq: f64,
    ab: f64,
    pq: f64,
    pb: f64,
    aq: f64,
) -> Result<SemimetricSpace, SpacesError> {
    let rows = [
        [0.0, ap, ab, aq],
        [ap, 0.0, pb, pq],
        [ab, pb, 0.0, bq],
        [aq, pq, bq, 0.0],
    ];
    Ok(SemimetricSpace::new(
        labels.iter().map(|l| l.to_string()).collect(),
        rows.concat(),
    )?)
}

/// Centrally symmetric spherical quadruple with the cross distance
/// stretched: embeds `A`, `B` at distance `ab` on the positive-curvature
/// model surface, places `P` at distance `ap` from `A` at angle `theta` to
/// the `AB` direction, reflects it through the midpoint of `AB` to get `Q`,
/// then reports the six distances with `|PQ|` increased by `eps`.
///
/// At `eps = 0` the pair `(A->P, B->Q)` has weighted cosine exactly `-1`.
pub fn symmetric_spherical_quad(
    c: Curvature,
    ab: f64,
    ap: f64,
    theta: f64,
    eps: f64,
) -> Result<SemimetricSpace, SpacesError> {
    if c.regime() != Regime::Positive {
        return Err(SpacesError::BadParam {
            name: "curvature",
            value: c.k(),
            requirement: "positive",
        });
    }
    let diam = c.diameter();
    require(ab > 0.0 && ab < diam, "ab", ab, "within (0, pi/kappa)")?;
    require(ap > 0.0 && ap < diam, "ap", ap, "within (0, pi/kappa)")?;
    require(theta.is_finite(), "theta", theta, "finite")?;
    require(eps >= 0.0, "eps", eps, "nonnegative")?;
    let a = from_polar(c, 0.0, 0.0)?;
    let b = from_polar(c, ab, 0.0)?;
    let p = from_polar(c, ap, theta)?;
    let o = geodesic_interpolate(&a, &b, 0.5)?;
    let q = geodesic_reflect(&p, &o)?;
    four_point_space(
        ["A", "P", "B", "Q"],
        model_distance(&a, &p)?,
        model_distance(&b, &q)?,
        model_distance(&a, &b)?,
        model_distance(&p, &q)? + eps,
        model_distance(&p, &b)?,
        model_distance(&a, &q)?,
    )
}

/// Which way the transported segment points relative to the original.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `B -> Q` is the parallel transport of `A -> P`: weighted cosine `+1`.
    Same,
    /// `B -> Q` is the reversed transport: weighted cosine `-1`.
    Opposite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapezoidParams {
    /// Distance `|AB|` between the two tails.
    pub base: f64,
    /// Segment length `|AP|`.
    pub arm: f64,
    /// Angle at `A` between the `AB` direction and the segment.
    pub angle: f64,
    pub orientation: Orientation,
}

/// Builds four model points `[A, P, B, Q]` whose induced distances give a
/// weighted cosine of exactly `+1` or `-1` for the pair `(A->P, B->Q)`:
/// `P` is reflected through the midpoint of `AB` (central symmetry carries
/// the segment at `A` to its reversal at `B`), and for [`Orientation::Same`]
/// reflected once more through `B`.
///
/// Requires nonzero curvature; in the positive regime the reflections
/// require their inputs within `pi/(2 kappa)` of the centers, which bounds
/// admissible `base` and `arm` (violations surface as reflection errors).
pub fn levi_civita_trapezoid(
    c: Curvature,
    params: &TrapezoidParams,
) -> Result<[ModelPoint; 4], SpacesError> {
    if c.regime() == Regime::Zero {
        return Err(SpacesError::ZeroCurvature);
    }
    require(params.base > 0.0, "base", params.base, "positive")?;
    require(params.arm > 0.0, "arm", params.arm, "positive")?;
    require(params.angle.is_finite(), "angle", params.angle, "finite")?;
    let a = from_polar(c, 0.0, 0.0)?;
    let b = from_polar(c, params.base, 0.0)?;
    let p = from_polar(c, params.arm, params.angle)?;
    let o = geodesic_interpolate(&a, &b, 0.5)?;
    let reflected = geodesic_reflect(&p, &o)?;
    let q = match params.orientation {
        Orientation::Opposite => reflected,
        Orientation::Same => geodesic_reflect(&reflected, &b)?,
    };
    Ok([a, p, b, q])
}

/// Random quadrangle with intersecting diagonals on a 2D model surface:
/// two geodesics through a common center at an angle in `(0.3, pi - 0.3)`,
/// one vertex on each of the four rays. Returns `[A, B, C, D]` in cyclic
/// order, so the diagonals are `AC` and `BD` and they cross at the center.
///
/// Vertex distances from the center are drawn from `(0.1, 0.6) / kappa` in
/// the positive regime (keeping everything deep inside the model) and
/// `(0.1, 0.9) / kappa` otherwise (`kappa = 1` for the flat case).
pub fn convex_model_quadrangle(c: Curvature, seed: u64) -> Result<[ModelPoint; 4], SpacesError> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let scale = match c.regime() {
        Regime::Zero => 1.0,
        _ => 1.0 / c.kappa(),
    };
    let hi = if c.regime() == Regime::Positive {
        0.6
    } else {
        0.9
    };
    let mut radii = [0.0; 4];
    for r in &mut radii {
        *r = rng.gen_range(0.1..hi) * scale;
    }
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let gap: f64 = rng.gen_range(0.3..(std::f64::consts::PI - 0.3));
    let pi = std::f64::consts::PI;
    Ok([
        from_polar(c, radii[0], theta)?,
        from_polar(c, radii[1], theta + gap)?,
        from_polar(c, radii[2], theta + pi)?,
        from_polar(c, radii[3], theta + gap + pi)?,
    ])
}

/// Semimetric space of pairwise model distances between labeled points.
pub fn space_from_points(
    labels: &[&str],
    points: &[ModelPoint],
) -> Result<SemimetricSpace, SpacesError> {
    if labels.len() != points.len() {
        return Err(SpacesError::BadParam {
            name: "labels",
            value: labels.len() as f64,
            requirement: "one label per point",
        });
    }
    let n = points.len();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = model_distance(&points[i], &points[j])?;
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    Ok(SemimetricSpace::new(
        labels.iter().map(|l| l.to_string()).collect(),
        dist,
    )?)
}

/// One expected fact about a registry example.
#[derive(Debug, Clone, PartialEq)]
pub enum Expectation {
    /// The twelve case values of the space's four points (in label order)
    /// match reference values printed to the given number of decimals.
    CaseValues {
        curvature: f64,
        printed: [(f64, u8); 12],
    },
    /// One vector pair, named by labels `[tail1, head1, tail2, head2]`,
    /// evaluates to a closed-form value.
    VectorValue {
        curvature: f64,
        vectors: [&'static str; 4],
        expected: f64,
        tol: f64,
    },
    /// Full-scan verdicts of the upper and lower conditions.
    VerdictPattern {
        curvature: f64,
        upper: Verdict,
        lower: Verdict,
        tol: f64,
    },
    /// Distance from the triangle apex to the point dividing the opposite
    /// side (sides `[a, b, cc]`, fraction `t`) matches a reference value.
    MedianValue {
        curvature: f64,
        sides: [f64; 3],
        t: f64,
        expected: f64,
        tol: f64,
    },
}

/// A frozen reference configuration with everything it is expected to
/// reproduce.
#[derive(Debug, Clone)]
pub struct NamedExample {
    pub name: &'static str,
    pub description: &'static str,
    /// Principal curvature the example is about (expectations may add more).
    pub curvature: f64,
    pub space: SemimetricSpace,
    pub expected: Vec<Expectation>,
}

/// One recomputed expectation, ready to print.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckLine {
    pub example: String,
    pub detail: String,
    pub computed: String,
    pub expected: String,
    pub pass: bool,
}

/// Every frozen reference example.
pub fn registry() -> Vec<NamedExample> {
    let fail = "registry parameters are frozen and valid";
    let arm = std::f64::consts::FRAC_PI_4 + 0.1;
    let bar = std::f64::consts::FRAC_PI_2 + 0.2;
    let (s01, c01) = (0.1f64.sin(), 0.1f64.cos());
    let (s02, c02) = (0.2f64.sin(), 0.2f64.cos());
    let one = Curvature::new(1.0).expect(fail);

    vec![
        NamedExample {
            name: "ex_counter_1",
            description: "T-shaped graph metric with both arms extended past the \
                          quarter-circumference sizes; both curvature bounds fail at K = 1",
            curvature: 1.0,
            space: t_graph(arm, bar, Some(0.1)).expect(fail),
            expected: vec![
                Expectation::VectorValue {
                    curvature: 1.0,
                    vectors: ["B", "Q", "A", "P"],
                    expected: (1.0 + s02) / (1.0 - s02),
                    tol: 1e-12,
                },
                Expectation::VectorValue {
                    curvature: 1.0,
                    vectors: ["B", "Q", "P", "A"],
                    expected: -(1.0 + s02) * c01 / ((1.0 - s01) * c02),
                    tol: 1e-12,
                },
                Expectation::VerdictPattern {
                    curvature: 1.0,
                    upper: Verdict::Fails,
                    lower: Verdict::Fails,
                    tol: 1e-3,
                },
            ],
        },
        NamedExample {
            name: "exfpc_pos_a",
            description: "four points of the extended T-shaped graph (stem end, junction, \
                          crossbar ends); the upper bound fails and the lower holds at K = 1",
            curvature: 1.0,
            space: four_point_space(
                ["A", "P", "B", "Q"],
                arm,
                bar,
                arm + 0.5 * bar,
                0.5 * bar,
                0.5 * bar,
                arm + 0.5 * bar,
            )
            .expect(fail),
            expected: vec![
                Expectation::CaseValues {
                    curvature: 1.0,
                    printed: [
                        (1.496, 3),
                        (1.496, 3),
                        (-0.58, 2),
                        (1.496, 3),
                        (-0.58, 2),
                        (1.496, 3),
                        (-0.58, 2),
                        (-0.58, 2),
                        (-0.58, 2),
                        (-0.58, 2),
                        (1.496, 3),
                        (1.496, 3),
                    ],
                },
                Expectation::VerdictPattern {
                    curvature: 1.0,
                    upper: Verdict::Fails,
                    lower: Verdict::Holds,
                    tol: 1e-3,
                },
            ],
        },
        NamedExample {
            name: "exfpc_pos_b_qualitative",
            description: "centrally symmetric spherical quadruple with the cross distance \
                          stretched by 0.02; the upper bound holds and the lower fails at K = 1",
            curvature: 1.0,
            space: symmetric_spherical_quad(one, 1.2, 0.8, 1.1, 0.02).expect(fail),
            expected: vec![Expectation::VerdictPattern {
                curvature: 1.0,
                upper: Verdict::Holds,
                lower: Verdict::Fails,
                tol: 1e-3,
            }],
        },
        NamedExample {
            name: "exfpc_neg_a",
            description: "four-point space with the cross diagonal pulled inward; the upper \
                          bound fails and the lower holds at K = -1",
            curvature: -1.0,
            space: four_point_space(["A", "P", "B", "Q"], 1.0, 1.0, 2.0, 2.697, 2.44, 2.44)
                .expect(fail),
            expected: vec![
                Expectation::CaseValues {
                    curvature: -1.0,
                    printed: [
                        (1.0347, 4),
                        (-0.8133, 4),
                        (0.7495, 4),
                        (-0.9998, 4),
                        (0.4534, 4),
                        (-0.9133, 4),
                        (-0.8133, 4),
                        (0.1465, 4),
                        (-0.9511, 4),
                        (-0.9998, 4),
                        (0.7495, 4),
                        (0.4534, 4),
                    ],
                },
                Expectation::VerdictPattern {
                    curvature: -1.0,
                    upper: Verdict::Fails,
                    lower: Verdict::Holds,
                    tol: 1e-3,
                },
            ],
        },
        NamedExample {
            name: "exfpc_neg_b",
            description: "four-point space with the cross diagonal stretched outward; the \
                          upper bound holds and the lower fails at K = -1",
            curvature: -1.0,
            space: four_point_space(["A", "P", "B", "Q"], 1.0, 1.0, 2.0, 3.027, 2.43, 2.43)
                .expect(fail),
            expected: vec![
                Expectation::CaseValues {
                    curvature: -1.0,
                    printed: [
                        (-1.184, 3),
                        (0.922, 3),
                        (0.522, 3),
                        (-0.944, 3),
                        (0.807, 3),
                        (-1.008, 3),
                        (0.922, 3),
                        (-1.077, 3),
                        (-1.003, 3),
                        (-0.944, 3),
                        (0.522, 3),
                        (0.807, 3),
                    ],
                },
                Expectation::VerdictPattern {
                    curvature: -1.0,
                    upper: Verdict::Holds,
                    lower: Verdict::Fails,
                    tol: 1e-3,
                },
            ],
        },
        NamedExample {
            name: "concl_remarks",
            description: "four-point metric space built from two crossing segments whose \
                          midpoint surrogate sits off-center; both bounds hold at K = 1 and \
                          K = -1, and the apex-to-midpoint distances match closed forms",
            curvature: 1.0,
            space: four_point_space(["A", "B", "O", "C"], 0.8, 0.95, 0.4, 1.0, 0.4, 1.0)
                .expect(fail),
            expected: vec![
                Expectation::CaseValues {
                    curvature: 1.0,
                    printed: [
                        (0.0012, 4),
                        (0.2048, 4),
                        (-0.2865, 4),
                        (0.6466, 4),
                        (-0.2865, 4),
                        (0.2841, 4),
                        (0.0012, 4),
                        (0.2048, 4),
                        (0.6466, 4),
                        (0.2841, 4),
                        (-0.4756, 4),
                        (-0.4756, 4),
                    ],
                },
                Expectation::CaseValues {
                    curvature: -1.0,
                    printed: [
                        (-0.0106, 4),
                        (-0.1647, 4),
                        (-0.6208, 4),
                        (0.3287, 4),
                        (-0.6208, 4),
                        (0.6406, 4),
                        (-0.0106, 4),
                        (-0.1647, 4),
                        (0.3287, 4),
                        (0.6406, 4),
                        (-0.4887, 4),
                        (-0.4887, 4),
                    ],
                },
                Expectation::VerdictPattern {
                    curvature: 1.0,
                    upper: Verdict::Holds,
                    lower: Verdict::Holds,
                    tol: 1e-3,
                },
                Expectation::VerdictPattern {
                    curvature: -1.0,
                    upper: Verdict::Holds,
                    lower: Verdict::Holds,
                    tol: 1e-3,
                },
                // distance from the apex of the isoceles triangle (sides
                // 1, 1 over base 0.8) to the base midpoint, both regimes
                Expectation::MedianValue {
                    curvature: 1.0,
                    sides: [1.0, 1.0, 0.8],
                    t: 0.5,
                    expected: 0.9439,
                    tol: 5e-5,
                },
                Expectation::MedianValue {
                    curvature: -1.0,
                    sides: [1.0, 1.0, 0.8],
                    t: 0.5,
                    expected: 0.8944,
                    tol: 5e-5,
                },
            ],
        },
        NamedExample {
            name: "ex_to_extr_th",
            description: "T-shaped graph at the exact quarter-circumference sizes; one \
                          vector pair attains the upper bound exactly at K = 1",
            curvature: 1.0,
            space: t_graph(std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_2, None)
                .expect(fail),
            expected: vec![Expectation::VectorValue {
                curvature: 1.0,
                vectors: ["A", "O", "B", "Q"],
                expected: 1.0,
                tol: 1e-12,
            }],
        },
    ]
}

/// Looks up a registry example by name.
pub fn find_example(name: &str) -> Option<NamedExample> {
    registry().into_iter().find(|e| e.name == name)
}

fn label_index(s: &SemimetricSpace, label: &str) -> Result<usize, SpacesError> {
    s.labels()
        .iter()
        .position(|l| l == label)
        .ok_or(SpacesError::BadParam {
            name: "vectors",
            value: f64::NAN,
            requirement: "labels must exist in the example space",
        })
}

/// Recomputes every expectation of one example; one line per check.
pub fn evaluate_example(ex: &NamedExample) -> Result<Vec<CheckLine>, SpacesError> {
    let mut lines = Vec::new();
    for exp in &ex.expected {
        match exp {
            Expectation::CaseValues { curvature, printed } => {
                let c = Curvature::new(*curvature)?;
                let table = twelve_cases(c, &ex.space.matrix4([0, 1, 2, 3]))?;
                for (i, &(want, decimals)) in printed.iter().enumerate() {
                    let half = 0.5 * 10f64.powi(-i32::from(decimals));
                    let (computed, pass) = match table.value(i) {
                        Some(v) => (format!("{v:.6}"), (v - want).abs() <= half),
                        None => ("inadmissible".to_string(), false),
                    };
                    lines.push(CheckLine {
                        example: ex.name.to_string(),
                        detail: format!("case {} at K = {curvature}", CASE_LABELS[i]),
                        computed,
                        expected: format!("{want} within {half}"),
                        pass,
                    });
                }
            }
            Expectation::VectorValue {
                curvature,
                vectors,
                expected,
                tol,
            } => {
                let c = Curvature::new(*curvature)?;
                let [t1, h1, t2, h2] = {
                    let mut idx = [0usize; 4];
                    for (slot, label) in idx.iter_mut().zip(vectors.iter()) {
                        *slot = label_index(&ex.space, label)?;
                    }
                    idx
                };
                let s = &ex.space;
                let q = QuadDistances::new(
                    s.dist(t1, h1),
                    s.dist(t2, h2),
                    s.dist(t1, t2),
                    s.dist(h1, h2),
                    s.dist(h1, t2),
                    s.dist(t1, h2),
                );
                let v = cosq_k(c, &q)?;
                lines.push(CheckLine {
                    example: ex.name.to_string(),
                    detail: format!(
                        "weighted cosine of ({}->{}, {}->{}) at K = {curvature}",
                        vectors[0], vectors[1], vectors[2], vectors[3]
                    ),
                    computed: format!("{v:.15}"),
                    expected: format!("{expected:.15} within {tol}"),
                    pass: (v - expected).abs() <= *tol,
                });
            }
            Expectation::VerdictPattern {
                curvature,
                upper,
                lower,
                tol,
            } => {
                let c = Curvature::new(*curvature)?;
                let up = check_upper(c, &ex.space, *tol)?;
                let lo = check_lower(c, &ex.space, *tol)?;
                lines.push(CheckLine {
                    example: ex.name.to_string(),
                    detail: format!("scan verdicts at K = {curvature} (tol {tol})"),
                    computed: format!("upper {:?} / lower {:?}", up.verdict, lo.verdict),
                    expected: format!("upper {upper:?} / lower {lower:?}"),
                    pass: up.verdict == *upper && lo.verdict == *lower,
                });
            }
            Expectation::MedianValue {
                curvature,
                sides,
                t,
                expected,
                tol,
            } => {
                let c = Curvature::new(*curvature)?;
                let v = point_on_side_distance(c, sides[0], sides[1], sides[2], *t)?;
                lines.push(CheckLine {
                    example: ex.name.to_string(),
                    detail: format!(
                        "distance to the side point at fraction {t} of the base at K = {curvature}"
                    ),
                    computed: format!("{v:.6}"),
                    expected: format!("{expected} within {tol}"),
                    pass: (v - expected).abs() <= *tol,
                });
            }
        }
    }
    Ok(lines)
}
