//! Constant-curvature model surfaces and spaces.
//!
//! Positive curvature `K` is realized on the round sphere of radius
//! `1/sqrt(K)` embedded in R^3 or R^4; negative `K` on the upper sheet of the
//! hyperboloid `<p,p> = -1/|K|` in Minkowski space, with the **last**
//! coordinate timelike; `K = 0` on flat R^2 or R^3. Every operation
//! dispatches on the sign of `K` and uses a dedicated closed form for the
//! flat case — zero curvature is never approximated by a small-`K` limit.
//!
//! All distances and side lengths are in the same units as `1/sqrt(|K|)`.
//! Inverse trigonometry is clamped only inside a tiny rounding budget
//! ([`CLAMP_TOL`]); anything beyond that is reported as inconsistent data,
//! never silently repaired.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Inverse-trig arguments may drift a few ulps past the mathematical range
/// `[-1, 1]` when the inputs were themselves computed in floating point.
/// Drift within this budget is snapped onto the boundary; drift beyond it
/// means the side data is not realizable and is reported as an error.
pub const CLAMP_TOL: f64 = 1e-9;

/// Default tolerance for model-space invariants (embedding constraints,
/// round-trip identities).
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative slack for triangle-inequality validation; absorbs rounding in
/// side lengths that were themselves computed from coordinates.
const TRIANGLE_SLACK: f64 = 1e-12;

/// Angles within this distance of `0` or `pi` are snapped onto the endpoint.
const ANGLE_SNAP: f64 = 1e-12;

/// Point pairs within this angular distance of an exact antipode have no
/// unique geodesic between them.
const ANTIPODAL_TOL: f64 = 1e-9;

/// Sign class of a curvature value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Positive,
    Zero,
    Negative,
}

/// A validated curvature constant `K` together with `kappa = sqrt(|K|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curvature {
    k: f64,
    kappa: f64,
}

impl Curvature {
    pub fn new(k: f64) -> Result<Self, ModelError> {
        if !k.is_finite() {
            return Err(ModelError::NonFiniteCurvature(k));
        }
        Ok(Self {
            k,
            kappa: k.abs().sqrt(),
        })
    }

    pub fn k(self) -> f64 {
        self.k
    }

    /// `sqrt(|K|)`; zero for the flat regime.
    pub fn kappa(self) -> f64 {
        self.kappa
    }

    pub fn regime(self) -> Regime {
        if self.k > 0.0 {
            Regime::Positive
        } else if self.k < 0.0 {
            Regime::Negative
        } else {
            Regime::Zero
        }
    }

    /// Diameter of the model space: `pi/kappa` for positive curvature,
    /// infinite otherwise.
    pub fn diameter(self) -> f64 {
        match self.regime() {
            Regime::Positive => PI / self.kappa,
            _ => f64::INFINITY,
        }
    }

    /// `cos(kappa r)` in the positive regime, `cosh(kappa r)` otherwise.
    /// Callers must not use this in the flat regime.
    pub(crate) fn cs(self, r: f64) -> f64 {
        match self.regime() {
            Regime::Positive => (self.kappa * r).cos(),
            _ => (self.kappa * r).cosh(),
        }
    }

    /// `sin(kappa r)` in the positive regime, `sinh(kappa r)` otherwise.
    /// Callers must not use this in the flat regime.
    pub(crate) fn sn(self, r: f64) -> f64 {
        match self.regime() {
            Regime::Positive => (self.kappa * r).sin(),
            _ => (self.kappa * r).sinh(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("curvature must be finite, got {0}")]
    NonFiniteCurvature(f64),
    #[error("operands carry different curvatures ({0} vs {1})")]
    CurvatureMismatch(f64, f64),
    #[error("expected {expected} coordinates for this model, got {got}")]
    WrongDimension { expected: &'static str, got: usize },
    #[error("coordinates must be finite")]
    NonFiniteCoordinates,
    #[error("coordinates violate the model constraint by {defect:.3e}")]
    OffManifold { defect: f64 },
    #[error("side {name} = {value} is outside the valid range {range}")]
    SideOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("sides violate the triangle inequality by {deficit:.3e}")]
    NotATriangle { deficit: f64 },
    #[error("sides are not realizable at this curvature: |cos| exceeds 1 by {excess:.3e}")]
    InconsistentSides { excess: f64 },
    #[error("angle {0} is outside [0, pi]")]
    AngleOutOfRange(f64),
    #[error("parameter {name} = {value} is outside {range}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("no unique geodesic between antipodal points")]
    NoUniqueGeodesic,
    #[error("point reflection undefined: distance {dist} from the center is not below pi/(2 kappa) = {limit}")]
    ReflectionUndefined { dist: f64, limit: f64 },
    #[error("the {0} bound vector has zero length")]
    ZeroVector(&'static str),
}

type V4 = [f64; 4];

fn dot(u: &V4, v: &V4, n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        s += u[i] * v[i];
    }
    s
}

/// Bilinear form with the last of `n` coordinates timelike.
fn mdot(u: &V4, v: &V4, n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n - 1 {
        s += u[i] * v[i];
    }
    s - u[n - 1] * v[n - 1]
}

fn norm(u: &V4, n: usize) -> f64 {
    dot(u, u, n).sqrt()
}

/// A point on a constant-curvature model, stored in raw embedding
/// coordinates: on the sphere of radius `1/kappa`, on the hyperboloid sheet
/// `<p,p> = -1/kappa^2` with positive last coordinate, or in flat space.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPoint {
    curvature: Curvature,
    coords: V4,
    n: usize,
}

impl ModelPoint {
    /// Wraps raw embedding coordinates after validating the model
    /// constraint to within [`DEFAULT_TOL`] (scale-free). Curved models
    /// take 3 or 4 coordinates, flat models 2 or 3.
    pub fn new(curvature: Curvature, coords: &[f64]) -> Result<Self, ModelError> {
        let n = coords.len();
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(ModelError::NonFiniteCoordinates);
        }
        let mut buf = [0.0; 4];
        buf[..n].copy_from_slice(coords);
        match curvature.regime() {
            Regime::Positive => {
                if n != 3 && n != 4 {
                    return Err(ModelError::WrongDimension {
                        expected: "3 or 4",
                        got: n,
                    });
                }
                let defect = (curvature.kappa * norm(&buf, n) - 1.0).abs();
                if defect > DEFAULT_TOL {
                    return Err(ModelError::OffManifold { defect });
                }
            }
            Regime::Negative => {
                if n != 3 && n != 4 {
                    return Err(ModelError::WrongDimension {
                        expected: "3 or 4",
                        got: n,
                    });
                }
                let defect = (curvature.k * mdot(&buf, &buf, n) - 1.0).abs();
                if defect > DEFAULT_TOL {
                    return Err(ModelError::OffManifold { defect });
                }
                if buf[n - 1] <= 0.0 {
                    return Err(ModelError::OffManifold { defect: f64::INFINITY });
                }
            }
            Regime::Zero => {
                if n != 2 && n != 3 {
                    return Err(ModelError::WrongDimension {
                        expected: "2 or 3",
                        got: n,
                    });
                }
            }
        }
        Ok(Self {
            curvature,
            coords: buf,
            n,
        })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.n]
    }

    pub fn curvature(&self) -> Curvature {
        self.curvature
    }

    /// Representative on the unit model (radius-1 sphere / unit hyperboloid);
    /// raw coordinates in the flat regime.
    fn unit(&self) -> V4 {
        match self.curvature.regime() {
            Regime::Zero => self.coords,
            _ => {
                let k = self.curvature.kappa;
                let mut u = self.coords;
                for x in u.iter_mut() {
                    *x *= k;
                }
                u
            }
        }
    }

    /// Rebuilds a point from unit-model coordinates, projecting back onto
    /// the manifold so that iterated constructions do not drift.
    fn from_unit(curvature: Curvature, mut u: V4, n: usize) -> Self {
        match curvature.regime() {
            Regime::Positive => {
                let s = 1.0 / (norm(&u, n) * curvature.kappa);
                for x in u.iter_mut() {
                    *x *= s;
                }
            }
            Regime::Negative => {
                let s = 1.0 / ((-mdot(&u, &u, n)).sqrt() * curvature.kappa);
                for x in u.iter_mut() {
                    *x *= s;
                }
            }
            Regime::Zero => {}
        }
        Self {
            curvature,
            coords: u,
            n,
        }
    }
}

fn check_pair(p: &ModelPoint, q: &ModelPoint) -> Result<(), ModelError> {
    if p.curvature != q.curvature {
        return Err(ModelError::CurvatureMismatch(p.curvature.k, q.curvature.k));
    }
    if p.n != q.n {
        return Err(ModelError::WrongDimension {
            expected: "matching",
            got: q.n,
        });
    }
    Ok(())
}

/// Geodesic distance between two points of the same model.
pub fn model_distance(p: &ModelPoint, q: &ModelPoint) -> Result<f64, ModelError> {
    check_pair(p, q)?;
    let n = p.n;
    let c = p.curvature;
    Ok(match c.regime() {
        Regime::Zero => {
            let mut s = 0.0;
            for i in 0..n {
                s += (p.coords[i] - q.coords[i]).powi(2);
            }
            s.sqrt()
        }
        Regime::Positive => {
            // theta = 2 atan2(|u-v|, |u+v|) is accurate at both ends of [0, pi].
            let (u, v) = (p.unit(), q.unit());
            let mut dm = [0.0; 4];
            let mut sm = [0.0; 4];
            for i in 0..n {
                dm[i] = u[i] - v[i];
                sm[i] = u[i] + v[i];
            }
            2.0 * norm(&dm, n).atan2(norm(&sm, n)) / c.kappa
        }
        Regime::Negative => {
            // theta = 2 asinh(|u-v|_M / 2): the chord form avoids the
            // cancellation in <u,v> that a direct acosh would suffer for
            // nearby points (the difference is spacelike, so the norm is real).
            let (u, v) = (p.unit(), q.unit());
            let mut dm = [0.0; 4];
            for i in 0..n {
                dm[i] = u[i] - v[i];
            }
            let chord2 = mdot(&dm, &dm, n).max(0.0);
            2.0 * (0.5 * chord2.sqrt()).asinh() / c.kappa
        }
    })
}

/// Three side lengths satisfying the (non-strict) triangle inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleSides {
    a: f64,
    b: f64,
    c: f64,
}

impl TriangleSides {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, ModelError> {
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            if !v.is_finite() || v < 0.0 {
                return Err(ModelError::SideOutOfRange {
                    name,
                    value: v,
                    range: "[0, inf)",
                });
            }
        }
        let slack = TRIANGLE_SLACK * (1.0 + a + b + c);
        let deficit = (a - b - c).max(b - a - c).max(c - a - b);
        if deficit > slack {
            return Err(ModelError::NotATriangle { deficit });
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
}

fn clamp_unit(x: f64) -> Result<f64, ModelError> {
    if x.abs() <= 1.0 {
        Ok(x)
    } else if x.abs() <= 1.0 + CLAMP_TOL {
        Ok(x.signum())
    } else {
        Err(ModelError::InconsistentSides {
            excess: x.abs() - 1.0,
        })
    }
}

/// Cosine of the angle opposite side `a`, between sides `b` and `c`.
fn cos_angle_from_sides(c: Curvature, sides: &TriangleSides) -> Result<f64, ModelError> {
    let (sa, sb, sc) = (sides.a, sides.b, sides.c);
    for (name, v) in [("b", sb), ("c", sc)] {
        if v <= 0.0 {
            return Err(ModelError::SideOutOfRange {
                name,
                value: v,
                range: "(0, inf)",
            });
        }
    }
    match c.regime() {
        Regime::Zero => clamp_unit((sb * sb + sc * sc - sa * sa) / (2.0 * sb * sc)),
        Regime::Positive => {
            let lim = c.diameter();
            if sa > lim {
                return Err(ModelError::SideOutOfRange {
                    name: "a",
                    value: sa,
                    range: "[0, pi/kappa]",
                });
            }
            for (name, v) in [("b", sb), ("c", sc)] {
                if v >= lim {
                    return Err(ModelError::SideOutOfRange {
                        name,
                        value: v,
                        range: "(0, pi/kappa)",
                    });
                }
            }
            clamp_unit((c.cs(sa) - c.cs(sb) * c.cs(sc)) / (c.sn(sb) * c.sn(sc)))
        }
        Regime::Negative => {
            clamp_unit((c.cs(sb) * c.cs(sc) - c.cs(sa)) / (c.sn(sb) * c.sn(sc)))
        }
    }
}

/// Angle opposite side `a` (at the vertex between `b` and `c`), in `[0, pi]`.
///
/// Side triples that are not realizable at this curvature (the implied
/// cosine leaves `[-1, 1]` by more than [`CLAMP_TOL`]) are rejected.
pub fn law_of_cosines_angle(c: Curvature, sides: &TriangleSides) -> Result<f64, ModelError> {
    Ok(cos_angle_from_sides(c, sides)?.acos())
}

/// Side opposite the angle `alpha` enclosed by sides `b` and `cc`.
///
/// In the positive regime the result is a model distance and never exceeds
/// `pi/kappa`.
pub fn law_of_cosines_side(
    c: Curvature,
    b: f64,
    cc: f64,
    alpha: f64,
) -> Result<f64, ModelError> {
    for (name, v) in [("b", b), ("cc", cc)] {
        if !v.is_finite() || v < 0.0 {
            return Err(ModelError::SideOutOfRange {
                name,
                value: v,
                range: "[0, inf)",
            });
        }
        if c.regime() == Regime::Positive && v >= c.diameter() {
            return Err(ModelError::SideOutOfRange {
                name,
                value: v,
                range: "[0, pi/kappa)",
            });
        }
    }
    let alpha = if !alpha.is_finite() {
        return Err(ModelError::AngleOutOfRange(alpha));
    } else if (-ANGLE_SNAP..0.0).contains(&alpha) {
        0.0
    } else if alpha > PI && alpha <= PI + ANGLE_SNAP {
        PI
    } else if !(0.0..=PI).contains(&alpha) {
        return Err(ModelError::AngleOutOfRange(alpha));
    } else {
        alpha
    };
    Ok(match c.regime() {
        Regime::Zero => (b * b + cc * cc - 2.0 * b * cc * alpha.cos()).max(0.0).sqrt(),
        Regime::Positive => {
            let v = clamp_unit(c.cs(b) * c.cs(cc) + c.sn(b) * c.sn(cc) * alpha.cos())?;
            v.acos() / c.kappa
        }
        Regime::Negative => {
            let v = (c.cs(b) * c.cs(cc) - c.sn(b) * c.sn(cc) * alpha.cos()).max(1.0);
            v.acosh() / c.kappa
        }
    })
}

/// Distance from the vertex `C` of a triangle to the point `M` on side `AB`
/// with `|AM| = t * cc`, where `a = |CB|`, `b = |CA|`, `cc = |AB|`.
///
/// At `t = 0` this returns `b`, at `t = 1` it returns `a`; at `t = 1/2` it
/// reduces to the midpoint form `(cos ka + cos kb) / (2 cos(k cc / 2))` in
/// the positive regime (hyperbolic analogue for negative curvature, and the
/// flat two-point formula at zero curvature).
pub fn point_on_side_distance(
    c: Curvature,
    a: f64,
    b: f64,
    cc: f64,
    t: f64,
) -> Result<f64, ModelError> {
    TriangleSides::new(a, b, cc)?;
    if cc <= 0.0 {
        return Err(ModelError::SideOutOfRange {
            name: "cc",
            value: cc,
            range: "(0, inf)",
        });
    }
    if !(0.0..=1.0).contains(&t) || !t.is_finite() {
        return Err(ModelError::ParamOutOfRange {
            name: "t",
            value: t,
            range: "[0, 1]",
        });
    }
    match c.regime() {
        Regime::Zero => {
            // Flat interpolation of squared distances along the side.
            Ok((t * a * a + (1.0 - t) * b * b - t * (1.0 - t) * cc * cc)
                .max(0.0)
                .sqrt())
        }
        Regime::Positive => {
            let lim = c.diameter();
            if a > lim || b > lim {
                return Err(ModelError::SideOutOfRange {
                    name: "a/b",
                    value: a.max(b),
                    range: "[0, pi/kappa]",
                });
            }
            if cc >= lim {
                return Err(ModelError::SideOutOfRange {
                    name: "cc",
                    value: cc,
                    range: "(0, pi/kappa)",
                });
            }
            let v = (c.cs(a) * c.sn(t * cc) + c.cs(b) * c.sn((1.0 - t) * cc)) / c.sn(cc);
            Ok(clamp_unit(v)?.acos() / c.kappa)
        }
        Regime::Negative => {
            let v = (c.cs(a) * c.sn(t * cc) + c.cs(b) * c.sn((1.0 - t) * cc)) / c.sn(cc);
            Ok(v.max(1.0).acosh() / c.kappa)
        }
    }
}

/// Point at parameter `t in [0, 1]` along the unique geodesic from `p` to
/// `q`. Exact at the endpoints. Antipodal pairs in the positive regime have
/// no unique geodesic and are rejected.
pub fn geodesic_interpolate(
    p: &ModelPoint,
    q: &ModelPoint,
    t: f64,
) -> Result<ModelPoint, ModelError> {
    check_pair(p, q)?;
    if !(0.0..=1.0).contains(&t) || !t.is_finite() {
        return Err(ModelError::ParamOutOfRange {
            name: "t",
            value: t,
            range: "[0, 1]",
        });
    }
    if t == 0.0 {
        return Ok(p.clone());
    }
    if t == 1.0 {
        return Ok(q.clone());
    }
    let n = p.n;
    let c = p.curvature;
    let d = model_distance(p, q)?;
    if d == 0.0 {
        return Ok(p.clone());
    }
    let theta = c.kappa * d;
    Ok(match c.regime() {
        Regime::Zero => {
            let mut w = [0.0; 4];
            for i in 0..n {
                w[i] = (1.0 - t) * p.coords[i] + t * q.coords[i];
            }
            ModelPoint {
                curvature: c,
                coords: w,
                n,
            }
        }
        Regime::Positive => {
            if theta >= PI - ANTIPODAL_TOL {
                return Err(ModelError::NoUniqueGeodesic);
            }
            let (u, v) = (p.unit(), q.unit());
            let s = theta.sin();
            let (wu, wv) = (((1.0 - t) * theta).sin() / s, (t * theta).sin() / s);
            let mut w = [0.0; 4];
            for i in 0..n {
                w[i] = wu * u[i] + wv * v[i];
            }
            ModelPoint::from_unit(c, w, n)
        }
        Regime::Negative => {
            let (u, v) = (p.unit(), q.unit());
            let s = theta.sinh();
            let (wu, wv) = (((1.0 - t) * theta).sinh() / s, (t * theta).sinh() / s);
            let mut w = [0.0; 4];
            for i in 0..n {
                w[i] = wu * u[i] + wv * v[i];
            }
            ModelPoint::from_unit(c, w, n)
        }
    })
}

/// Image of `p` under the point reflection through `o`: the point on the
/// geodesic from `p` through `o` at distance `d(p, o)` beyond `o`.
///
/// In the positive regime the reflection is only defined while
/// `d(p, o) < pi/(2 kappa)`.
pub fn geodesic_reflect(p: &ModelPoint, o: &ModelPoint) -> Result<ModelPoint, ModelError> {
    check_pair(p, o)?;
    let n = p.n;
    let c = p.curvature;
    match c.regime() {
        Regime::Zero => {
            let mut w = [0.0; 4];
            for i in 0..n {
                w[i] = 2.0 * o.coords[i] - p.coords[i];
            }
            Ok(ModelPoint {
                curvature: c,
                coords: w,
                n,
            })
        }
        Regime::Positive => {
            let dist = model_distance(p, o)?;
            let limit = 0.5 * PI / c.kappa;
            if dist >= limit {
                return Err(ModelError::ReflectionUndefined { dist, limit });
            }
            let (u, oo) = (p.unit(), o.unit());
            let m = dot(&u, &oo, n);
            let mut w = [0.0; 4];
            for i in 0..n {
                w[i] = 2.0 * m * oo[i] - u[i];
            }
            Ok(ModelPoint::from_unit(c, w, n))
        }
        Regime::Negative => {
            let (u, oo) = (p.unit(), o.unit());
            let m = -mdot(&u, &oo, n);
            let mut w = [0.0; 4];
            for i in 0..n {
                w[i] = 2.0 * m * oo[i] - u[i];
            }
            Ok(ModelPoint::from_unit(c, w, n))
        }
    }
}

/// Point of the two-dimensional model at geodesic distance `r` from the
/// canonical base point, in the direction `azimuth` within the base tangent
/// plane. The base point is `(0, 0, 1/kappa)` on the curved models and the
/// origin in the flat plane.
pub fn from_polar(c: Curvature, r: f64, azimuth: f64) -> Result<ModelPoint, ModelError> {
    if !r.is_finite() || r < 0.0 || !azimuth.is_finite() {
        return Err(ModelError::ParamOutOfRange {
            name: "r",
            value: r,
            range: "[0, inf)",
        });
    }
    match c.regime() {
        Regime::Zero => ModelPoint::new(c, &[r * azimuth.cos(), r * azimuth.sin()]),
        Regime::Positive => {
            if r > c.diameter() {
                return Err(ModelError::ParamOutOfRange {
                    name: "r",
                    value: r,
                    range: "[0, pi/kappa]",
                });
            }
            let t = c.kappa * r;
            let u = [t.sin() * azimuth.cos(), t.sin() * azimuth.sin(), t.cos(), 0.0];
            Ok(ModelPoint::from_unit(c, u, 3))
        }
        Regime::Negative => {
            let t = c.kappa * r;
            let u = [t.sinh() * azimuth.cos(), t.sinh() * azimuth.sin(), t.cosh(), 0.0];
            Ok(ModelPoint::from_unit(c, u, 3))
        }
    }
}

/// Weighted cosine of the bound vectors `(a -> p)` and `(b -> q)` computed
/// geometrically: the tail midpoint `O` of `a` and `b` is found, `p` is
/// point-reflected through `O` to `p'`, and the result is
/// `-cos(angle p' b q)`. When the tails coincide the result is
/// `+cos(angle p a q)` directly.
///
/// This is an independent route to the same quantity as the distance-level
/// formula and is used to cross-validate it. In the positive regime the
/// reflection step requires `d(p, O) < pi/(2 kappa)`.
pub fn angle_and_transport_oracle(
    a: &ModelPoint,
    p: &ModelPoint,
    b: &ModelPoint,
    q: &ModelPoint,
) -> Result<f64, ModelError> {
    check_pair(a, p)?;
    check_pair(a, b)?;
    check_pair(a, q)?;
    let x = model_distance(a, p)?;
    let y = model_distance(b, q)?;
    if x == 0.0 {
        return Err(ModelError::ZeroVector("first"));
    }
    if y == 0.0 {
        return Err(ModelError::ZeroVector("second"));
    }
    if model_distance(a, b)? == 0.0 {
        let pq = model_distance(p, q)?;
        let sides = TriangleSides::new(pq, x, y)?;
        return cos_angle_from_sides(a.curvature, &sides);
    }
    let o = geodesic_interpolate(a, b, 0.5)?;
    let pp = geodesic_reflect(p, &o)?;
    let opp = model_distance(&pp, q)?;
    let adj1 = model_distance(b, &pp)?;
    let sides = TriangleSides::new(opp, adj1, y)?;
    Ok(-cos_angle_from_sides(a.curvature, &sides)?)
}

/// Residual of the side/angle identity relating the sides `x = |AB|`,
/// `y = |AC|`, `z = |BC|` of a triangle to its angles `alpha` (at `A`) and
/// `beta` (at `B`):
///
/// * nonzero `K`: `sn(z) - [ (cs(y) + cs(z)) / (1 + cs(x)) * sn(x) * cos(beta)
///   - sn(y) * cos(alpha + beta) ]` with `sn`/`cs` the sine/cosine pair of
///   the regime;
/// * zero `K`: `z - (x cos(beta) - y cos(alpha + beta))`.
///
/// Consistent side/angle data makes the residual vanish. The function never
/// errors: it evaluates the residual as given, which is informative even for
/// inconsistent data.
pub fn sper_ident_residual(c: Curvature, x: f64, y: f64, z: f64, alpha: f64, beta: f64) -> f64 {
    match c.regime() {
        Regime::Zero => z - (x * beta.cos() - y * (alpha + beta).cos()),
        _ => {
            c.sn(z)
                - ((c.cs(y) + c.cs(z)) / (1.0 + c.cs(x)) * c.sn(x) * beta.cos()
                    - c.sn(y) * (alpha + beta).cos())
        }
    }
}

/// Intrinsic dimension of the sampled model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelDim {
    Two,
    Three,
}

/// Draws `n` points of the `dim`-dimensional model, uniformly with respect
/// to the model's volume inside a ball of radius `diam_cap / 2` around the
/// canonical base point, so every pairwise distance is at most `diam_cap`.
///
/// The sequence is fully determined by `seed`. With `diam_cap = None` the
/// cap defaults to `pi/(2 kappa)` in the positive regime and to `2.0` units
/// otherwise; an explicit cap must be positive, and in the positive regime
/// must not exceed `pi/(2 kappa)`.
pub fn sample_model_points(
    c: Curvature,
    dim: ModelDim,
    n: usize,
    seed: u64,
    diam_cap: Option<f64>,
) -> Result<Vec<ModelPoint>, ModelError> {
    let cap = match diam_cap {
        Some(v) => {
            if !v.is_finite() || v <= 0.0 {
                return Err(ModelError::ParamOutOfRange {
                    name: "diam_cap",
                    value: v,
                    range: "(0, inf)",
                });
            }
            if c.regime() == Regime::Positive && v > 0.5 * PI / c.kappa {
                return Err(ModelError::ParamOutOfRange {
                    name: "diam_cap",
                    value: v,
                    range: "(0, pi/(2 kappa)]",
                });
            }
            v
        }
        None => match c.regime() {
            Regime::Positive => 0.5 * PI / c.kappa,
            Regime::Negative => 2.0 / c.kappa,
            Regime::Zero => 2.0,
        },
    };
    let radius = 0.5 * cap;
    let d = match dim {
        ModelDim::Two => 2,
        ModelDim::Three => 3,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let dir = random_direction(&mut rng, d);
        let r = random_radius(&mut rng, c, d, radius);
        out.push(place(c, &dir, r, d));
    }
    Ok(out)
}

/// Uniform direction on the unit (d-1)-sphere of the tangent plane.
fn random_direction(rng: &mut ChaCha8Rng, d: usize) -> [f64; 3] {
    if d == 2 {
        let phi = rng.gen::<f64>() * std::f64::consts::TAU;
        [phi.cos(), phi.sin(), 0.0]
    } else {
        // Rejection-free: three independent gaussians via Box-Muller pairs.
        loop {
            let mut v = [0.0; 3];
            for pair in 0..2 {
                let u1: f64 = rng.gen::<f64>();
                let u2: f64 = rng.gen::<f64>();
                let rr = (-2.0 * u1.max(f64::MIN_POSITIVE).ln()).sqrt();
                let (s, cc) = (std::f64::consts::TAU * u2).sin_cos();
                if pair == 0 {
                    v[0] = rr * cc;
                    v[1] = rr * s;
                } else {
                    v[2] = rr * cc;
                }
            }
            let nn = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if nn > 1e-12 {
                return [v[0] / nn, v[1] / nn, v[2] / nn];
            }
        }
    }
}

/// Radius with density proportional to the model's sphere-area element:
/// `sn(kappa r)^(d-1)` for curved regimes, `r^(d-1)` for the flat one.
fn random_radius(rng: &mut ChaCha8Rng, c: Curvature, d: usize, radius: f64) -> f64 {
    match (c.regime(), d) {
        (Regime::Zero, dd) => radius * rng.gen::<f64>().powf(1.0 / dd as f64),
        (Regime::Positive, 2) => {
            // Inverse CDF of sin density: cos(kappa r) uniform on [cos(kR), 1].
            let u: f64 = rng.gen();
            (1.0 - u * (1.0 - (c.kappa * radius).cos())).clamp(-1.0, 1.0).acos() / c.kappa
        }
        (Regime::Negative, 2) => {
            // Inverse CDF of sinh density: cosh(kappa r) uniform on [1, cosh(kR)].
            let u: f64 = rng.gen();
            (1.0 + u * ((c.kappa * radius).cosh() - 1.0)).acosh() / c.kappa
        }
        (_, _) => {
            // d = 3: rejection against the increasing density sn(kappa r)^2.
            let peak = c.sn(radius).powi(2);
            loop {
                let r = radius * rng.gen::<f64>();
                let w: f64 = rng.gen();
                if w * peak <= c.sn(r).powi(2) {
                    return r;
                }
            }
        }
    }
}

/// Embeds (direction, radius) as a model point around the canonical base.
fn place(c: Curvature, dir: &[f64; 3], r: f64, d: usize) -> ModelPoint {
    match c.regime() {
        Regime::Zero => {
            let mut w = [0.0; 4];
            for i in 0..d {
                w[i] = r * dir[i];
            }
            ModelPoint {
                curvature: c,
                coords: w,
                n: d,
            }
        }
        Regime::Positive => {
            let t = c.kappa * r;
            let mut u = [0.0; 4];
            for i in 0..d {
                u[i] = t.sin() * dir[i];
            }
            u[d] = t.cos();
            ModelPoint::from_unit(c, u, d + 1)
        }
        Regime::Negative => {
            let t = c.kappa * r;
            let mut u = [0.0; 4];
            for i in 0..d {
                u[i] = t.sinh() * dir[i];
            }
            u[d] = t.cosh();
            ModelPoint::from_unit(c, u, d + 1)
        }
    }
}
