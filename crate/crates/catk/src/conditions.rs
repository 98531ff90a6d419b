//! Condition checkers over finite semimetric spaces.
//!
//! A [`SemimetricSpace`] is a finite labeled point set with a symmetric,
//! zero-diagonal, positive-off-diagonal distance table — no triangle
//! inequality assumed. The checkers decide:
//!
//! * [`check_metric`] — whether the data is actually a metric;
//! * [`check_upper`] / [`check_lower`] — the upper (`cosq <= 1`) and lower
//!   (`cosq >= -1`) bound-vector conditions at a fixed nonzero curvature,
//!   scanned over every unordered pair of bound vectors spanning at least
//!   three distinct points;
//! * [`check_one_sided`] — their disjunction;
//! * [`gromov_membership`] / [`check_gromov_class`] — membership of labeled
//!   quadruples in the curvature classes defined by explicit product-form
//!   trigonometric inequalities (an independent route that never divides by
//!   the sine factors);
//! * [`check_k_euler`] — the quadrilateral cosine inequality over all
//!   cyclic orderings of every quadruple;
//! * [`weak_convexity_scan`] — approximate midpoints for every pair.
//!
//! Scans exclude the two vector-pair classes that are constant by algebra
//! alone (a vector paired with itself evaluates to `+1`, with its reversal
//! to `-1`, for any distance data), so reported extremes always reflect the
//! actual configuration. Pairs whose hyperbolic evaluation overflows `f64`
//! are counted as skipped rather than aborting the scan.

use crate::cosq::{cosq_raw, CASE_LABELS, CASE_VECTORS};
use crate::modelspace::{Curvature, Regime};
use rayon::prelude::*;
use serde::Serialize;

/// Default tolerance for distance data produced by model-space arithmetic.
pub const DEFAULT_MODEL_TOL: f64 = 1e-9;

/// Default tolerance when comparing against published reference tables
/// (printed to three or four decimal places).
pub const DEFAULT_TABLE_TOL: f64 = 1e-3;

/// Triangle deficits up to this slack are treated as rounding noise.
const METRIC_SLACK: f64 = 1e-11;

/// Relative slack for validating matrix symmetry.
const SYMMETRY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConditionsError {
    #[error("this check requires nonzero curvature")]
    ZeroCurvature,
    #[error("tolerance must be finite and nonnegative, got {0}")]
    BadTolerance(f64),
    #[error("not a valid semimetric: {0}")]
    Malformed(String),
    #[error("weak convexity is only defined for metric inputs")]
    NotMetric,
}

/// Finite semimetric space: labeled points with symmetric positive distances
/// and zero diagonal. Stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SemimetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
    n: usize,
}

impl SemimetricSpace {
    /// Validates and wraps a flat row-major `n x n` distance table.
    /// Symmetry is enforced to a relative `1e-12`; the two halves are
    /// averaged so lookups are exactly symmetric afterwards.
    pub fn new(labels: Vec<String>, dist: Vec<f64>) -> Result<Self, ConditionsError> {
        let n = labels.len();
        if n == 0 {
            return Err(ConditionsError::Malformed("no points".into()));
        }
        if dist.len() != n * n {
            return Err(ConditionsError::Malformed(format!(
                "expected {} entries for {} labels, got {}",
                n * n,
                n,
                dist.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(ConditionsError::Malformed(format!("label {i} is empty")));
            }
            if labels[..i].contains(l) {
                return Err(ConditionsError::Malformed(format!("duplicate label {l:?}")));
            }
        }
        let mut scale: f64 = 1.0;
        for (idx, v) in dist.iter().enumerate() {
            if !v.is_finite() {
                return Err(ConditionsError::Malformed(format!(
                    "entry [{}][{}] is not finite",
                    idx / n,
                    idx % n
                )));
            }
            scale = scale.max(v.abs());
        }
        let mut sym = dist;
        for i in 0..n {
            if sym[i * n + i] != 0.0 {
                return Err(ConditionsError::Malformed(format!(
                    "diagonal entry for {:?} is {}, not zero",
                    labels[i],
                    sym[i * n + i]
                )));
            }
            for j in (i + 1)..n {
                let (u, v) = (sym[i * n + j], sym[j * n + i]);
                if (u - v).abs() > SYMMETRY_SLACK * scale {
                    return Err(ConditionsError::Malformed(format!(
                        "entries for ({:?}, {:?}) are not symmetric: {} vs {}",
                        labels[i], labels[j], u, v
                    )));
                }
                let avg = 0.5 * (u + v);
                if avg <= 0.0 {
                    return Err(ConditionsError::Malformed(format!(
                        "distance between distinct points {:?} and {:?} is {}, not positive",
                        labels[i], labels[j], avg
                    )));
                }
                sym[i * n + j] = avg;
                sym[j * n + i] = avg;
            }
        }
        Ok(Self {
            labels,
            dist: sym,
            n,
        })
    }

    /// Convenience constructor from explicit rows.
    pub fn from_rows(labels: Vec<String>, rows: &[Vec<f64>]) -> Result<Self, ConditionsError> {
        let n = labels.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(ConditionsError::Malformed(format!(
                "expected {n} rows of {n} entries"
            )));
        }
        SemimetricSpace::new(labels, rows.concat())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Distance sub-table of four points, in the given order.
    pub fn matrix4(&self, idx: [usize; 4]) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for (r, &i) in idx.iter().enumerate() {
            for (cidx, &j) in idx.iter().enumerate() {
                m[r][cidx] = self.dist(i, j);
            }
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Fails,
    Vacuous,
}

/// A configuration that violates the condition being checked.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    /// Point labels in the configuration's own order (for vector pairs:
    /// tail1, head1, tail2, head2; repeats mark shared points).
    pub points: Vec<String>,
    /// Case tag: one of the twelve Roman labels, or `shared`, `triangle`,
    /// `cycle`, `labeling`, `diameter`.
    pub case: String,
    /// For vector-pair scans the weighted cosine itself; for other checks
    /// the violation margin in the check's own units.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub verdict: Verdict,
    /// Positive means violated by that much, negative means satisfied with
    /// that much room; `None` when nothing was admissible.
    pub worst_margin: Option<f64>,
    /// All violating configurations, worst first (ties broken by labels).
    pub witnesses: Vec<Witness>,
    pub admissible: u64,
    pub skipped: u64,
}

impl ConditionReport {
    fn vacuous() -> Self {
        Self {
            verdict: Verdict::Vacuous,
            worst_margin: None,
            witnesses: Vec::new(),
            admissible: 0,
            skipped: 0,
        }
    }
}

/// Whether the distance table satisfies all triangle inequalities (within a
/// fixed slack of `1e-11` for rounding). Witness values are triangle
/// deficits; fewer than three points is vacuous.
pub fn check_metric(s: &SemimetricSpace) -> ConditionReport {
    let n = s.len();
    let mut admissible = 0u64;
    let mut worst = f64::NEG_INFINITY;
    let mut witnesses = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                admissible += 1;
                let (ab, ac, bc) = (s.dist(i, j), s.dist(i, k), s.dist(j, k));
                let deficit = (ab - ac - bc).max(ac - ab - bc).max(bc - ab - ac);
                worst = worst.max(deficit);
                if deficit > METRIC_SLACK {
                    witnesses.push(Witness {
                        points: vec![
                            s.label(i).to_string(),
                            s.label(j).to_string(),
                            s.label(k).to_string(),
                        ],
                        case: "triangle".into(),
                        value: deficit,
                    });
                }
            }
        }
    }
    if admissible == 0 {
        return ConditionReport::vacuous();
    }
    sort_witnesses(&mut witnesses);
    ConditionReport {
        verdict: if witnesses.is_empty() {
            Verdict::Holds
        } else {
            Verdict::Fails
        },
        worst_margin: Some(worst),
        witnesses,
        admissible,
        skipped: 0,
    }
}

fn sort_witnesses(w: &mut [Witness]) {
    w.sort_by(|a, b| {
        b.value
            .partial_cmp(&a.value)
            .unwrap()
            .then_with(|| a.points.cmp(&b.points))
            .then_with(|| a.case.cmp(&b.case))
    });
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Upper,
    Lower,
}

/// Case tag of a vector pair: a Roman numeral when the four endpoints are
/// distinct (roles assigned by ascending point index), `shared` otherwise.
fn classify_case(t1: usize, h1: usize, t2: usize, h2: usize) -> &'static str {
    let mut pts = [t1, h1, t2, h2];
    pts.sort_unstable();
    if pts.windows(2).any(|w| w[0] == w[1]) {
        return "shared";
    }
    let rank = |p: usize| pts.iter().position(|&x| x == p).unwrap();
    let rv = ((rank(t1), rank(h1)), (rank(t2), rank(h2)));
    for (i, &(va, vb)) in CASE_VECTORS.iter().enumerate() {
        if rv == (va, vb) || rv == (vb, va) {
            return CASE_LABELS[i];
        }
    }
    unreachable!("two disjoint vectors over four points always match a case")
}

struct ScanAcc {
    extreme: f64,
    admissible: u64,
    skipped: u64,
    violations: Vec<(f64, [usize; 4])>,
}

impl ScanAcc {
    fn empty(side: Side) -> Self {
        Self {
            extreme: match side {
                Side::Upper => f64::NEG_INFINITY,
                Side::Lower => f64::INFINITY,
            },
            admissible: 0,
            skipped: 0,
            violations: Vec::new(),
        }
    }

    fn merge(mut self, mut other: Self, side: Side) -> Self {
        self.extreme = match side {
            Side::Upper => self.extreme.max(other.extreme),
            Side::Lower => self.extreme.min(other.extreme),
        };
        self.admissible += other.admissible;
        self.skipped += other.skipped;
        self.violations.append(&mut other.violations);
        self
    }
}

fn scan_bound_vectors(
    c: Curvature,
    s: &SemimetricSpace,
    side: Side,
    tol: f64,
) -> ConditionReport {
    let n = s.len();
    let mut vecs = Vec::with_capacity(n * (n - 1));
    for t in 0..n {
        for h in 0..n {
            if t != h {
                vecs.push((t, h));
            }
        }
    }
    let limit = c.diameter();
    let acc = (0..vecs.len())
        .into_par_iter()
        .map(|i| {
            let mut acc = ScanAcc::empty(side);
            let (t1, h1) = vecs[i];
            let x = s.dist(t1, h1);
            for &(t2, h2) in &vecs[i + 1..] {
                // a vector against its own reversal is -1 by algebra alone
                if t2 == h1 && h2 == t1 {
                    continue;
                }
                let y = s.dist(t2, h2);
                let a = s.dist(t1, t2);
                if x >= limit || y >= limit || a >= limit {
                    acc.skipped += 1;
                    continue;
                }
                let v = cosq_raw(c, x, y, a, s.dist(h1, h2), s.dist(h1, t2), s.dist(t1, h2));
                if !v.is_finite() {
                    acc.skipped += 1;
                    continue;
                }
                acc.admissible += 1;
                match side {
                    Side::Upper => {
                        acc.extreme = acc.extreme.max(v);
                        if v - 1.0 > tol {
                            acc.violations.push((v, [t1, h1, t2, h2]));
                        }
                    }
                    Side::Lower => {
                        acc.extreme = acc.extreme.min(v);
                        if -1.0 - v > tol {
                            acc.violations.push((v, [t1, h1, t2, h2]));
                        }
                    }
                }
            }
            acc
        })
        .reduce(|| ScanAcc::empty(side), |a, b| a.merge(b, side));

    if acc.admissible == 0 {
        return ConditionReport {
            skipped: acc.skipped,
            ..ConditionReport::vacuous()
        };
    }
    let mut witnesses: Vec<Witness> = acc
        .violations
        .into_iter()
        .map(|(v, [t1, h1, t2, h2])| Witness {
            points: vec![
                s.label(t1).to_string(),
                s.label(h1).to_string(),
                s.label(t2).to_string(),
                s.label(h2).to_string(),
            ],
            case: classify_case(t1, h1, t2, h2).to_string(),
            value: v,
        })
        .collect();
    match side {
        Side::Upper => sort_witnesses(&mut witnesses),
        Side::Lower => {
            // most negative first
            witnesses.sort_by(|a, b| {
                a.value
                    .partial_cmp(&b.value)
                    .unwrap()
                    .then_with(|| a.points.cmp(&b.points))
                    .then_with(|| a.case.cmp(&b.case))
            });
        }
    }
    let worst_margin = match side {
        Side::Upper => acc.extreme - 1.0,
        Side::Lower => -1.0 - acc.extreme,
    };
    ConditionReport {
        verdict: if worst_margin > tol {
            Verdict::Fails
        } else {
            Verdict::Holds
        },
        worst_margin: Some(worst_margin),
        witnesses,
        admissible: acc.admissible,
        skipped: acc.skipped,
    }
}

fn check_scan_args(c: Curvature, tol: f64) -> Result<(), ConditionsError> {
    if c.regime() == Regime::Zero {
        return Err(ConditionsError::ZeroCurvature);
    }
    if !tol.is_finite() || tol < 0.0 {
        return Err(ConditionsError::BadTolerance(tol));
    }
    Ok(())
}

/// Upper bound-vector condition at nonzero curvature: every admissible pair
/// of bound vectors spanning at least three distinct points has weighted
/// cosine at most `1 + tol`.
///
/// In the positive regime, pairs whose `x`, `y`, or tail distance reach
/// `pi/kappa` are counted as skipped. `worst_margin` is `max(cosq) - 1`.
pub fn check_upper(
    c: Curvature,
    s: &SemimetricSpace,
    tol: f64,
) -> Result<ConditionReport, ConditionsError> {
    check_scan_args(c, tol)?;
    Ok(scan_bound_vectors(c, s, Side::Upper, tol))
}

/// Lower bound-vector condition: mirror of [`check_upper`] with
/// `cosq >= -1 - tol`; `worst_margin` is `-1 - min(cosq)`.
pub fn check_lower(
    c: Curvature,
    s: &SemimetricSpace,
    tol: f64,
) -> Result<ConditionReport, ConditionsError> {
    check_scan_args(c, tol)?;
    Ok(scan_bound_vectors(c, s, Side::Lower, tol))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneSidedOutcome {
    pub upper: ConditionReport,
    pub lower: ConditionReport,
    /// Holds when either side holds.
    pub verdict: Verdict,
}

/// One-sided condition: the disjunction of the upper and lower conditions.
pub fn check_one_sided(
    c: Curvature,
    s: &SemimetricSpace,
    tol: f64,
) -> Result<OneSidedOutcome, ConditionsError> {
    let upper = check_upper(c, s, tol)?;
    let lower = check_lower(c, s, tol)?;
    let verdict = match (upper.verdict, lower.verdict) {
        (Verdict::Vacuous, Verdict::Vacuous) => Verdict::Vacuous,
        (Verdict::Holds, _) | (_, Verdict::Holds) => Verdict::Holds,
        _ => Verdict::Fails,
    };
    Ok(OneSidedOutcome {
        upper,
        lower,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GromovSign {
    Plus,
    Minus,
}

/// Signed margin of the product-form class inequality for one labeled
/// quadruple (`<= 0` means the inequality holds). Entries indexed
/// `a_ij = m[i-1][j-1]`.
fn gromov_margin(c: Curvature, sign: GromovSign, m: &[[f64; 4]; 4]) -> f64 {
    let (a12, a34, a14) = (m[0][1], m[2][3], m[0][3]);
    let (a23, a24, a13) = (m[1][2], m[1][3], m[0][2]);
    let core = match c.regime() {
        Regime::Positive => {
            (c.cs(a23) + c.cs(a12) * c.cs(a34)) * (1.0 + c.cs(a14))
                - (c.cs(a12) + c.cs(a24)) * (c.cs(a34) + c.cs(a13))
        }
        _ => {
            (c.cs(a12) + c.cs(a24)) * (c.cs(a34) + c.cs(a13))
                - (c.cs(a23) + c.cs(a12) * c.cs(a34)) * (1.0 + c.cs(a14))
        }
    };
    let signed = match sign {
        GromovSign::Plus => core,
        GromovSign::Minus => -core,
    };
    signed - c.sn(a12) * c.sn(a34) * (1.0 + c.cs(a14))
}

fn validate_gromov_matrix(m: &[[f64; 4]; 4]) -> Result<(), ConditionsError> {
    let mut scale: f64 = 1.0;
    for row in m {
        for v in row {
            if !v.is_finite() {
                return Err(ConditionsError::Malformed("non-finite entry".into()));
            }
            scale = scale.max(v.abs());
        }
    }
    for i in 0..4 {
        if m[i][i] != 0.0 {
            return Err(ConditionsError::Malformed(format!(
                "diagonal entry [{i}][{i}] is not zero"
            )));
        }
        for j in (i + 1)..4 {
            if (m[i][j] - m[j][i]).abs() > SYMMETRY_SLACK * scale {
                return Err(ConditionsError::Malformed(format!(
                    "entries [{i}][{j}] and [{j}][{i}] differ"
                )));
            }
            if m[i][j] < 0.0 {
                return Err(ConditionsError::Malformed(format!(
                    "entry [{i}][{j}] is negative"
                )));
            }
        }
    }
    Ok(())
}

/// Whether one labeled 4x4 distance matrix belongs to the curvature class
/// of the given sign at curvature `K = c.k()`:
///
/// * positive `K`: the trigonometric product inequality holds **and** every
///   entry is at most `pi/(2 kappa)` (an oversized entry alone makes
///   membership false);
/// * negative `K`: the hyperbolic product inequality holds (no entry bound).
///
/// The inequality is evaluated in its product form — it never divides by
/// the sine factors, so zero entries are fine.
pub fn gromov_membership(
    c: Curvature,
    sign: GromovSign,
    m: &[[f64; 4]; 4],
) -> Result<bool, ConditionsError> {
    if c.regime() == Regime::Zero {
        return Err(ConditionsError::ZeroCurvature);
    }
    validate_gromov_matrix(m)?;
    if c.regime() == Regime::Positive {
        let bound = 0.5 * c.diameter(); // pi/(2 kappa)
        for i in 0..4 {
            for j in (i + 1)..4 {
                if m[i][j] > bound {
                    return Ok(false);
                }
            }
        }
    }
    Ok(gromov_margin(c, sign, m) <= 0.0)
}

/// Scans every ordered quadruple of distinct points for membership of its
/// labeled distance matrix in the curvature class, exactly (no tolerance).
///
/// Witness values are product-form margins (case `labeling`); in the
/// positive regime, point pairs beyond `pi/(2 kappa)` are reported with
/// case `diameter` and their excess as the value. `worst_margin` is the
/// largest product-form margin over all labelings.
pub fn check_gromov_class(
    c: Curvature,
    sign: GromovSign,
    s: &SemimetricSpace,
) -> Result<ConditionReport, ConditionsError> {
    if c.regime() == Regime::Zero {
        return Err(ConditionsError::ZeroCurvature);
    }
    let n = s.len();
    let mut diameter_witnesses = Vec::new();
    if c.regime() == Regime::Positive {
        let bound = 0.5 * c.diameter();
        for i in 0..n {
            for j in (i + 1)..n {
                if s.dist(i, j) > bound {
                    diameter_witnesses.push(Witness {
                        points: vec![s.label(i).to_string(), s.label(j).to_string()],
                        case: "diameter".into(),
                        value: s.dist(i, j) - bound,
                    });
                }
            }
        }
    }
    if n < 4 {
        let mut report = ConditionReport::vacuous();
        if !diameter_witnesses.is_empty() {
            sort_witnesses(&mut diameter_witnesses);
            report.verdict = Verdict::Fails;
            report.witnesses = diameter_witnesses;
        }
        return Ok(report);
    }
    let acc = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = ScanAcc::empty(Side::Upper);
            for j in 0..n {
                if j == i {
                    continue;
                }
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    for l in 0..n {
                        if l == i || l == j || l == k {
                            continue;
                        }
                        let m = s.matrix4([i, j, k, l]);
                        let margin = gromov_margin(c, sign, &m);
                        if !margin.is_finite() {
                            acc.skipped += 1;
                            continue;
                        }
                        acc.admissible += 1;
                        acc.extreme = acc.extreme.max(margin);
                        if margin > 0.0 {
                            acc.violations.push((margin, [i, j, k, l]));
                        }
                    }
                }
            }
            acc
        })
        .reduce(|| ScanAcc::empty(Side::Upper), |a, b| a.merge(b, Side::Upper));

    let mut witnesses: Vec<Witness> = acc
        .violations
        .into_iter()
        .map(|(v, idx)| Witness {
            points: idx.iter().map(|&p| s.label(p).to_string()).collect(),
            case: "labeling".into(),
            value: v,
        })
        .collect();
    witnesses.extend(diameter_witnesses);
    sort_witnesses(&mut witnesses);
    let verdict = if acc.admissible == 0 {
        Verdict::Vacuous
    } else if witnesses.is_empty() {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    Ok(ConditionReport {
        verdict,
        worst_margin: if acc.admissible > 0 {
            Some(acc.extreme)
        } else {
            None
        },
        witnesses,
        admissible: acc.admissible,
        skipped: acc.skipped,
    })
}

/// Both sides of the quadrilateral cosine relation for explicit side data:
/// consecutive sides `a, b, cc, dd`, diagonals `e, f`, and distance `g`
/// between the diagonal midpoints. Returns `(lhs, rhs)` where
///
/// ```text
/// lhs = cs(a) + cs(b) + cs(cc) + cs(dd)
/// rhs = 4 cs(e/2) cs(f/2) cs(g)
/// ```
///
/// with `cs` the cosine (positive regime) or hyperbolic cosine (negative).
/// For quadrangles with intersecting diagonals the two sides are equal.
pub fn k_euler_equality_sides(
    c: Curvature,
    a: f64,
    b: f64,
    cc: f64,
    dd: f64,
    e: f64,
    f: f64,
    g: f64,
) -> Result<(f64, f64), ConditionsError> {
    if c.regime() == Regime::Zero {
        return Err(ConditionsError::ZeroCurvature);
    }
    for v in [a, b, cc, dd, e, f, g] {
        if !v.is_finite() || v < 0.0 {
            return Err(ConditionsError::Malformed(format!(
                "side {v} is not a nonnegative finite distance"
            )));
        }
    }
    let lhs = c.cs(a) + c.cs(b) + c.cs(cc) + c.cs(dd);
    let rhs = 4.0 * c.cs(e / 2.0) * c.cs(f / 2.0) * c.cs(g);
    Ok((lhs, rhs))
}

/// Quadrilateral cosine inequality over every cyclic ordering of every
/// quadruple of distinct points: with sides `AB, BC, CD, DA` and diagonals
/// `AC, BD`,
///
/// ```text
/// K > 0:  cs(AB) + cs(BC) + cs(CD) + cs(DA) <= 4 cs(AC/2) cs(BD/2)
/// K < 0:  the mirror inequality with hyperbolic cosines and >=
/// ```
///
/// Each unordered quadruple contributes its three essentially different
/// cyclic orderings. Witness values are violation margins (case `cycle`).
pub fn check_k_euler(
    c: Curvature,
    s: &SemimetricSpace,
    tol: f64,
) -> Result<ConditionReport, ConditionsError> {
    check_scan_args(c, tol)?;
    let n = s.len();
    if n < 4 {
        return Ok(ConditionReport::vacuous());
    }
    let acc = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = ScanAcc::empty(Side::Upper);
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for l in (k + 1)..n {
                        // the three pairings of {i,j,k,l} into a 4-cycle
                        for cyc in [[i, j, k, l], [i, j, l, k], [i, k, j, l]] {
                            let [p, q, r, t] = cyc;
                            let lhs = c.cs(s.dist(p, q))
                                + c.cs(s.dist(q, r))
                                + c.cs(s.dist(r, t))
                                + c.cs(s.dist(t, p));
                            let rhs =
                                4.0 * c.cs(s.dist(p, r) / 2.0) * c.cs(s.dist(q, t) / 2.0);
                            let margin = match c.regime() {
                                Regime::Positive => lhs - rhs,
                                _ => rhs - lhs,
                            };
                            if !margin.is_finite() {
                                acc.skipped += 1;
                                continue;
                            }
                            acc.admissible += 1;
                            acc.extreme = acc.extreme.max(margin);
                            if margin > tol {
                                acc.violations.push((margin, [p, q, r, t]));
                            }
                        }
                    }
                }
            }
            acc
        })
        .reduce(|| ScanAcc::empty(Side::Upper), |a, b| a.merge(b, Side::Upper));

    if acc.admissible == 0 {
        return Ok(ConditionReport {
            skipped: acc.skipped,
            ..ConditionReport::vacuous()
        });
    }
    let mut witnesses: Vec<Witness> = acc
        .violations
        .into_iter()
        .map(|(v, idx)| Witness {
            points: idx.iter().map(|&p| s.label(p).to_string()).collect(),
            case: "cycle".into(),
            value: v,
        })
        .collect();
    sort_witnesses(&mut witnesses);
    Ok(ConditionReport {
        verdict: if acc.extreme > tol {
            Verdict::Fails
        } else {
            Verdict::Holds
        },
        worst_margin: Some(acc.extreme),
        witnesses,
        admissible: acc.admissible,
        skipped: acc.skipped,
    })
}

/// How well the best midpoint surrogate for one pair fits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairMidpointFit {
    pub a: String,
    pub b: String,
    /// The point minimizing the midpoint deviation (may be an endpoint).
    pub best: String,
    /// `max(|d(a,c) - L/2|, |d(b,c) - L/2|)` for the best `c`.
    pub deviation: f64,
    /// Where the best point actually sits: `d(a, c) / L`.
    pub lambda: f64,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakConvexityReport {
    pub eps: f64,
    /// One entry per unordered pair, in label order.
    pub pairs: Vec<PairMidpointFit>,
}

impl WeakConvexityReport {
    pub fn holds(&self) -> bool {
        self.pairs.iter().all(|p| p.passes)
    }

    pub fn worst(&self) -> Option<&PairMidpointFit> {
        let mut best: Option<&PairMidpointFit> = None;
        for p in &self.pairs {
            if best.is_none_or(|b| p.deviation > b.deviation) {
                best = Some(p);
            }
        }
        best
    }
}

/// For every pair, finds the point of the space that best approximates a
/// midpoint and reports its deviation against `eps`. Requires metric input.
///
/// The deviation of candidate `c` for pair `(a, b)` at distance `L` is
/// `max(|d(a,c) - L/2|, |d(b,c) - L/2|)`; candidates range over **all**
/// points including the endpoints themselves, so an isolated pair is still
/// scored (by the endpoint, at deviation `L/2`) rather than skipped.
pub fn weak_convexity_scan(
    s: &SemimetricSpace,
    eps: f64,
) -> Result<WeakConvexityReport, ConditionsError> {
    if !eps.is_finite() || eps < 0.0 {
        return Err(ConditionsError::BadTolerance(eps));
    }
    if s.len() >= 3 && check_metric(s).verdict == Verdict::Fails {
        return Err(ConditionsError::NotMetric);
    }
    let n = s.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let l = s.dist(i, j);
            let half = 0.5 * l;
            let mut best = i;
            let mut best_dev = f64::INFINITY;
            for cand in 0..n {
                let dev = (s.dist(i, cand) - half)
                    .abs()
                    .max((s.dist(j, cand) - half).abs());
                if dev < best_dev {
                    best_dev = dev;
                    best = cand;
                }
            }
            pairs.push(PairMidpointFit {
                a: s.label(i).to_string(),
                b: s.label(j).to_string(),
                best: s.label(best).to_string(),
                deviation: best_dev,
                lambda: s.dist(i, best) / l,
                passes: best_dev <= eps,
            });
        }
    }
    Ok(WeakConvexityReport { eps, pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn curv(k: f64) -> Curvature {
        Curvature::new(k).unwrap()
    }

    fn labels(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    /// Four points with the six distances (|AP|, |BQ|, |AB|, |PQ|, |PB|, |AQ|),
    /// labeled in role order A, P, B, Q.
    fn quad_space(ap: f64, bq: f64, ab: f64, pq: f64, pb: f64, aq: f64) -> SemimetricSpace {
        let rows = vec![
            vec![0.0, ap, ab, aq],
            vec![ap, 0.0, pb, pq],
            vec![ab, pb, 0.0, bq],
            vec![aq, pq, bq, 0.0],
        ];
        SemimetricSpace::from_rows(labels(&["A", "P", "B", "Q"]), &rows).unwrap()
    }

    /// Collinear pair of vectors sharing geometry with a cross point.
    fn collinear_example() -> SemimetricSpace {
        // distances: AB = 0.8, AO = BO = 0.4, AC = BC = 1, OC = 0.95
        let rows = vec![
            vec![0.0, 0.8, 0.4, 1.0],
            vec![0.8, 0.0, 0.4, 1.0],
            vec![0.4, 0.4, 0.0, 0.95],
            vec![1.0, 1.0, 0.95, 0.0],
        ];
        SemimetricSpace::from_rows(labels(&["A", "B", "O", "C"]), &rows).unwrap()
    }

    #[test]
    fn semimetric_validation() {
        assert!(SemimetricSpace::new(labels(&["A", "B"]), vec![0.0, 1.0, 1.0, 0.0]).is_ok());
        // asymmetric
        assert!(SemimetricSpace::new(labels(&["A", "B"]), vec![0.0, 1.0, 2.0, 0.0]).is_err());
        // nonzero diagonal
        assert!(SemimetricSpace::new(labels(&["A", "B"]), vec![0.1, 1.0, 1.0, 0.0]).is_err());
        // coincident distinct points
        assert!(SemimetricSpace::new(labels(&["A", "B"]), vec![0.0, 0.0, 0.0, 0.0]).is_err());
        // duplicate labels
        assert!(SemimetricSpace::new(labels(&["A", "A"]), vec![0.0, 1.0, 1.0, 0.0]).is_err());
        // wrong size
        assert!(SemimetricSpace::new(labels(&["A", "B"]), vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn metric_check_finds_violations() {
        let s = SemimetricSpace::from_rows(
            labels(&["A", "B", "C"]),
            &[
                vec![0.0, 3.0, 1.0],
                vec![3.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0],
            ],
        )
        .unwrap();
        let rep = check_metric(&s);
        assert_eq!(rep.verdict, Verdict::Fails);
        assert_eq!(rep.witnesses.len(), 1);
        assert_abs_diff_eq!(rep.witnesses[0].value, 1.0, epsilon = 1e-15);
        assert_eq!(rep.worst_margin, Some(1.0));
        // two points: vacuous
        let two = SemimetricSpace::new(labels(&["A", "B"]), vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(check_metric(&two).verdict, Verdict::Vacuous);
    }

    #[test]
    fn bounded_example_holds_both_sides() {
        let s = collinear_example();
        for k in [1.0, -1.0] {
            let c = curv(k);
            let up = check_upper(c, &s, DEFAULT_TABLE_TOL).unwrap();
            let lo = check_lower(c, &s, DEFAULT_TABLE_TOL).unwrap();
            assert_eq!(up.verdict, Verdict::Holds, "upper at K = {k}");
            assert_eq!(lo.verdict, Verdict::Holds, "lower at K = {k}");
            assert_eq!(up.admissible, 60);
            assert_eq!(up.skipped, 0);
            assert!(up.witnesses.is_empty());
        }
    }

    #[test]
    fn stretched_diagonal_fails_lower_only() {
        // hyperbolic quadruple with the cross diagonal pushed outward
        let s = quad_space(1.0, 1.0, 2.0, 3.027, 2.43, 2.43);
        let c = curv(-1.0);
        let up = check_upper(c, &s, DEFAULT_TABLE_TOL).unwrap();
        let lo = check_lower(c, &s, DEFAULT_TABLE_TOL).unwrap();
        assert_eq!(up.verdict, Verdict::Holds);
        assert_eq!(lo.verdict, Verdict::Fails);
        assert!(!lo.witnesses.is_empty());
        // worst witness is the stretched case, most negative value first
        assert_abs_diff_eq!(lo.witnesses[0].value, -1.1839, epsilon = 5e-5);
        assert_eq!(lo.witnesses[0].case, "I");
        let one = check_one_sided(c, &s, DEFAULT_TABLE_TOL).unwrap();
        assert_eq!(one.verdict, Verdict::Holds);
    }

    #[test]
    fn vacuous_on_tiny_spaces() {
        let two = SemimetricSpace::new(labels(&["A", "B"]), vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let rep = check_upper(curv(1.0), &two, 0.0).unwrap();
        assert_eq!(rep.verdict, Verdict::Vacuous);
        assert_eq!(rep.admissible, 0);
        assert_eq!(rep.worst_margin, None);
        let one = check_one_sided(curv(1.0), &two, 0.0).unwrap();
        assert_eq!(one.verdict, Verdict::Vacuous);
    }

    #[test]
    fn zero_curvature_is_rejected() {
        let s = collinear_example();
        assert!(matches!(
            check_upper(curv(0.0), &s, 0.0),
            Err(ConditionsError::ZeroCurvature)
        ));
        assert!(matches!(
            check_k_euler(curv(0.0), &s, 0.0),
            Err(ConditionsError::ZeroCurvature)
        ));
        assert!(matches!(
            check_gromov_class(curv(0.0), GromovSign::Plus, &s),
            Err(ConditionsError::ZeroCurvature)
        ));
        assert!(matches!(
            check_upper(curv(1.0), &s, f64::NAN),
            Err(ConditionsError::BadTolerance(_))
        ));
    }

    #[test]
    fn gromov_membership_reference_cases() {
        let c = curv(1.0);
        // bounded example labeled (A, B, C, O)
        let m = [
            [0.0, 0.8, 1.0, 0.4],
            [0.8, 0.0, 1.0, 0.4],
            [1.0, 1.0, 0.0, 0.95],
            [0.4, 0.4, 0.95, 0.0],
        ];
        assert!(gromov_membership(c, GromovSign::Plus, &m).unwrap());
        assert!(gromov_membership(c, GromovSign::Minus, &m).unwrap());
        // oversized entry alone sinks positive-curvature membership
        let mut big = m;
        big[0][2] = PI / 2.0 + 0.1;
        big[2][0] = big[0][2];
        assert!(!gromov_membership(c, GromovSign::Plus, &big).unwrap());
        // the stretched hyperbolic quadruple violates the Minus class in the
        // labeling that pairs the two short vectors
        let ch = curv(-1.0);
        let stretched = [
            [0.0, 1.0, 2.43, 2.0],
            [1.0, 0.0, 3.027, 2.43],
            [2.43, 3.027, 0.0, 1.0],
            [2.0, 2.43, 1.0, 0.0],
        ];
        assert!(!gromov_membership(ch, GromovSign::Minus, &stretched).unwrap());
        assert!(gromov_membership(ch, GromovSign::Plus, &stretched).unwrap());
    }

    #[test]
    fn gromov_class_scan_matches_vector_scans() {
        // two hyperbolic quadruples with clear margins on either side
        let pulled = quad_space(1.0, 1.0, 2.0, 2.697, 2.44, 2.44);
        let stretched = quad_space(1.0, 1.0, 2.0, 3.027, 2.43, 2.43);
        let c = curv(-1.0);
        for (s, plus_expect, minus_expect) in [
            (&pulled, Verdict::Fails, Verdict::Holds),
            (&stretched, Verdict::Holds, Verdict::Fails),
        ] {
            let plus = check_gromov_class(c, GromovSign::Plus, s).unwrap().verdict;
            let minus = check_gromov_class(c, GromovSign::Minus, s).unwrap().verdict;
            assert_eq!(plus, plus_expect);
            assert_eq!(minus, minus_expect);
            assert_eq!(plus, check_upper(c, s, 0.0).unwrap().verdict);
            assert_eq!(minus, check_lower(c, s, 0.0).unwrap().verdict);
        }
        // fewer than four points is vacuous
        let tri = SemimetricSpace::from_rows(
            labels(&["A", "B", "C"]),
            &[
                vec![0.0, 1.0, 1.0],
                vec![1.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0],
            ],
        )
        .unwrap();
        assert_eq!(
            check_gromov_class(curv(1.0), GromovSign::Plus, &tri)
                .unwrap()
                .verdict,
            Verdict::Vacuous
        );
    }

    #[test]
    fn euler_inequality_on_a_geodesic_segment() {
        // equally spaced points on a line embed in either model space
        let pts = [0.0, 1.0, 2.0, 3.0];
        let mut rows = vec![vec![0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                rows[i][j] = (pts[i] - pts[j]) as f64;
                rows[i][j] = rows[i][j].abs();
            }
        }
        let s = SemimetricSpace::from_rows(labels(&["A", "B", "C", "D"]), &rows).unwrap();
        for k in [1.0, -1.0] {
            let rep = check_k_euler(curv(k), &s, 1e-9).unwrap();
            assert_eq!(rep.verdict, Verdict::Holds, "K = {k}");
            assert_eq!(rep.admissible, 3);
        }
    }

    #[test]
    fn euler_equality_collinear_identity() {
        // collinear quadrangle: 3 cosh(1) + cosh(3) = 4 cosh(1)^3
        let (lhs, rhs) =
            k_euler_equality_sides(curv(-1.0), 1.0, 1.0, 1.0, 3.0, 2.0, 2.0, 1.0).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
        assert!(k_euler_equality_sides(curv(0.0), 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn triangle_violation_breaks_both_sides() {
        // one inflated entry violates a triple; the shared-point
        // configurations then overshoot both bounds
        let rows = vec![
            vec![0.0, 0.3, 1.4, 0.6],
            vec![0.3, 0.0, 0.4, 0.5],
            vec![1.4, 0.4, 0.0, 0.55],
            vec![0.6, 0.5, 0.55, 0.0],
        ];
        let s = SemimetricSpace::from_rows(labels(&["A", "B", "C", "D"]), &rows).unwrap();
        assert_eq!(check_metric(&s).verdict, Verdict::Fails);
        for k in [1.0, -1.0] {
            let c = curv(k);
            assert_eq!(
                check_upper(c, &s, DEFAULT_MODEL_TOL).unwrap().verdict,
                Verdict::Fails,
                "upper at K = {k}"
            );
            assert_eq!(
                check_lower(c, &s, DEFAULT_MODEL_TOL).unwrap().verdict,
                Verdict::Fails,
                "lower at K = {k}"
            );
        }
    }

    #[test]
    fn witnesses_are_sorted_and_tagged() {
        let s = quad_space(1.0, 1.0, 2.0, 3.027, 2.43, 2.43);
        let lo = check_lower(curv(-1.0), &s, DEFAULT_TABLE_TOL).unwrap();
        for w in &lo.witnesses {
            assert_eq!(w.points.len(), 4);
            assert!(!w.case.is_empty());
        }
        for pair in lo.witnesses.windows(2) {
            assert!(pair[0].value <= pair[1].value, "lower: most negative first");
        }
    }

    #[test]
    fn weak_convexity_semantics() {
        // isolated pair: best candidate is an endpoint at deviation L/2
        let two = SemimetricSpace::new(labels(&["A", "B"]), vec![0.0, 0.1, 0.1, 0.0]).unwrap();
        let rep = weak_convexity_scan(&two, 0.06).unwrap();
        assert!(rep.holds());
        assert_abs_diff_eq!(rep.pairs[0].deviation, 0.05, epsilon = 1e-15);
        let strict = weak_convexity_scan(&two, 0.04).unwrap();
        assert!(!strict.holds());
        // a genuine midpoint scores zero
        let line = SemimetricSpace::from_rows(
            labels(&["A", "M", "B"]),
            &[
                vec![0.0, 1.0, 2.0],
                vec![1.0, 0.0, 1.0],
                vec![2.0, 1.0, 0.0],
            ],
        )
        .unwrap();
        let rep = weak_convexity_scan(&line, 0.0).unwrap();
        let am = rep.pairs.iter().find(|p| p.a == "A" && p.b == "B").unwrap();
        assert_eq!(am.best, "M");
        assert_abs_diff_eq!(am.deviation, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(am.lambda, 0.5, epsilon = 1e-15);
        // non-metric input is rejected
        let bad = SemimetricSpace::from_rows(
            labels(&["A", "B", "C"]),
            &[
                vec![0.0, 3.0, 1.0],
                vec![3.0, 0.0, 1.0],
                vec![1.0, 1.0, 0.0],
            ],
        )
        .unwrap();
        assert!(matches!(
            weak_convexity_scan(&bad, 0.1),
            Err(ConditionsError::NotMetric)
        ));
    }

    #[test]
    fn dense_model_sample_is_weakly_convex() {
        use crate::modelspace::{sample_model_points, ModelDim};
        let c = curv(1.0);
        let pts = sample_model_points(c, ModelDim::Two, 500, 20260819, None).unwrap();
        let labels: Vec<String> = (0..pts.len()).map(|i| format!("p{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        let s = crate::spaces::space_from_points(&refs, &pts).unwrap();
        let rep = weak_convexity_scan(&s, 0.15).unwrap();
        let passing = rep.pairs.iter().filter(|p| p.passes).count();
        assert!(
            passing * 100 >= rep.pairs.len() * 95,
            "only {passing} of {} pairs have midpoint surrogates",
            rep.pairs.len()
        );
    }

    #[test]
    fn reports_serialize_to_stable_json() {
        let s = quad_space(1.0, 1.0, 2.0, 3.027, 2.43, 2.43);
        let rep = check_lower(curv(-1.0), &s, DEFAULT_TABLE_TOL).unwrap();
        let js = serde_json::to_string(&rep).unwrap();
        assert!(js.contains("\"verdict\":\"Fails\""));
        assert!(js.contains("\"witnesses\""));
        assert!(js.contains("\"points\""));
    }
}
