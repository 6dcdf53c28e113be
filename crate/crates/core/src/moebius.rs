//! PSL(2,R) acting on the upper half-plane and its boundary circle.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for every comparison of a trace against a classification boundary.
pub const EPS_TR: f64 = 1e-9;
/// Smallest accepted determinant before normalization.
pub const EPS_DET: f64 = 1e-12;
/// Projective separation below which two boundary points coincide.
pub const EPS_BDY: f64 = 1e-10;
/// Smallest admissible imaginary part of a plane point.
pub const EPS_POS: f64 = 1e-12;

/// Reduces an angle to (-pi, pi].
pub fn wrap_pi(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Reduces an angle to [0, 2pi).
pub fn wrap_tau(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A point of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct PlanePoint {
    x: f64,
    h: f64,
}

#[derive(Deserialize)]
struct RawPoint {
    x: f64,
    h: f64,
}

impl TryFrom<RawPoint> for PlanePoint {
    type Error = Error;
    fn try_from(r: RawPoint) -> Result<Self> {
        PlanePoint::new(r.x, r.h)
    }
}

impl PlanePoint {
    /// The reference point i.
    pub const I: PlanePoint = PlanePoint { x: 0.0, h: 1.0 };

    pub fn new(x: f64, h: f64) -> Result<Self> {
        if !x.is_finite() || !h.is_finite() {
            return Err(Error::InvalidPoint(format!(
                "non-finite coordinates ({x}, {h})"
            )));
        }
        if h <= EPS_POS {
            return Err(Error::InvalidPoint(format!("height {h} is not positive")));
        }
        Ok(PlanePoint { x, h })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        PlanePoint::new(z.re, z.im)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.x, self.h)
    }

    pub fn distance(&self, q: &PlanePoint) -> f64 {
        distance(self, q)
    }

    /// Angle of the unit tangent at `self` of the geodesic towards `q`.
    ///
    /// Angles are Euclidean and measured counterclockwise from the positive real direction.
    pub fn direction_to(&self, q: &PlanePoint) -> f64 {
        let p = self.to_complex();
        let z = q.to_complex();
        wrap_pi(((z - p) / (z - p.conj())).arg() + PI / 2.0)
    }

    /// Angle of the unit tangent at `self` of the geodesic towards the boundary point `b`.
    pub fn direction_to_boundary(&self, b: &BoundaryPoint) -> f64 {
        let p = self.to_complex();
        // (b - p)/(b - conj p) in homogeneous form.
        let u = Complex64::new(b.u, 0.0);
        let v = Complex64::new(b.v, 0.0);
        wrap_pi(((u - p * v) / (u - p.conj() * v)).arg() + PI / 2.0)
    }

    /// Point at hyperbolic distance `t` along the geodesic leaving `self` in direction `beta`.
    pub fn exp(&self, beta: f64, t: f64) -> Result<PlanePoint> {
        let w = Complex64::from_polar((t / 2.0).tanh(), beta - PI / 2.0);
        let one = Complex64::new(1.0, 0.0);
        let z = Complex64::i() * (one + w) / (one - w);
        PlanePoint::new(self.x + self.h * z.re, self.h * z.im)
    }

    pub fn approx_eq(&self, q: &PlanePoint, tol: f64) -> bool {
        self.distance(q) <= tol
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.x, self.h)
    }
}

/// A point of the boundary circle in homogeneous coordinates, value u/v.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    u: f64,
    v: f64,
}

impl BoundaryPoint {
    pub const INFINITY: BoundaryPoint = BoundaryPoint { u: 1.0, v: 0.0 };

    pub fn new(u: f64, v: f64) -> Result<Self> {
        let n = u.hypot(v);
        if !n.is_finite() || n == 0.0 {
            return Err(Error::InvalidPoint(format!(
                "bad homogeneous pair ({u}, {v})"
            )));
        }
        let (mut u, mut v) = (u / n, v / n);
        if v < 0.0 || (v == 0.0 && u < 0.0) {
            u = -u;
            v = -v;
        }
        Ok(BoundaryPoint { u, v })
    }

    pub fn from_real(t: f64) -> Result<Self> {
        BoundaryPoint::new(t, 1.0)
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    /// The real value u/v; infinite at the point at infinity.
    pub fn value(&self) -> f64 {
        if self.v == 0.0 {
            f64::INFINITY
        } else {
            self.u / self.v
        }
    }

    /// Determinant u1 v2 - u2 v1; zero exactly when the points coincide.
    pub fn det(&self, o: &BoundaryPoint) -> f64 {
        self.u * o.v - self.v * o.u
    }

    pub fn approx_eq(&self, o: &BoundaryPoint, tol: f64) -> bool {
        self.det(o).abs() <= tol
    }

    /// Counterclockwise angle in [0, 2pi) of the image on the unit circle under w = (z-i)/(z+i).
    pub fn circle_angle(&self) -> f64 {
        wrap_tau(2.0 * (-self.v).atan2(self.u))
    }

    pub fn to_disc(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.circle_angle())
    }
}

/// An oriented complete geodesic, given by its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    start: BoundaryPoint,
    end: BoundaryPoint,
}

impl Geodesic {
    pub fn new(start: BoundaryPoint, end: BoundaryPoint) -> Result<Self> {
        if start.det(&end).abs() <= EPS_BDY {
            return Err(Error::InvalidPoint("geodesic endpoints coincide".into()));
        }
        Ok(Geodesic { start, end })
    }

    pub fn start(&self) -> BoundaryPoint {
        self.start
    }

    pub fn end(&self) -> BoundaryPoint {
        self.end
    }

    pub fn reversed(&self) -> Geodesic {
        Geodesic {
            start: self.end,
            end: self.start,
        }
    }

    /// Isometry taking the start to 0 and the end to infinity.
    pub fn normalizer(&self) -> Isometry {
        let (r, a) = (self.start, self.end);
        let (mut m11, mut m12) = (r.v, -r.u);
        let (m21, m22) = (a.v, -a.u);
        if m11 * m22 - m12 * m21 < 0.0 {
            m11 = -m11;
            m12 = -m12;
        }
        Isometry::new(m11, m12, m21, m22).expect("distinct endpoints give an invertible normalizer")
    }

    /// Signed position of `p` relative to the oriented geodesic, in [-1, 1]; positive on the left.
    pub fn side(&self, p: &PlanePoint) -> f64 {
        match self.normalizer().apply(p) {
            Ok(w) => -w.x / w.x.hypot(w.h),
            Err(_) => 0.0,
        }
    }

    /// Signed position of a boundary point; positive on the left, zero at the endpoints.
    pub fn boundary_side(&self, b: &BoundaryPoint) -> f64 {
        let w = self.normalizer().apply_boundary(b);
        -w.u * w.v
    }

    /// Nearest point of the geodesic to `p`.
    pub fn foot(&self, p: &PlanePoint) -> Result<PlanePoint> {
        let t = self.normalizer();
        let w = t.apply(p)?;
        let on_axis = PlanePoint::new(0.0, w.x.hypot(w.h))?;
        t.inverse().apply(&on_axis)
    }

    /// The point at signed distance `d` from the geodesic on the perpendicular through the foot of `p`.
    ///
    /// Positive `d` lies to the left.
    pub fn perpendicular_offset(&self, p: &PlanePoint, d: f64) -> Result<PlanePoint> {
        let t = self.normalizer();
        let w = t.apply(p)?;
        let s = w.x.hypot(w.h);
        let q = PlanePoint::new(-s * d.tanh(), s / d.cosh())?;
        t.inverse().apply(&q)
    }

    pub fn distance_to(&self, p: &PlanePoint) -> Result<f64> {
        Ok(distance(p, &self.foot(p)?))
    }

    /// True when the geodesics meet in the open plane. A shared endpoint does not count.
    pub fn crosses(&self, o: &Geodesic) -> bool {
        let s1 = self.boundary_side(&o.start);
        let s2 = self.boundary_side(&o.end);
        if s1.abs() <= EPS_BDY || s2.abs() <= EPS_BDY {
            return false;
        }
        (s1 > 0.0) != (s2 > 0.0)
    }

    pub fn intersection(&self, o: &Geodesic) -> Option<PlanePoint> {
        if !self.crosses(o) {
            return None;
        }
        let t = self.normalizer();
        let p = t.apply_boundary(&o.start);
        let q = t.apply_boundary(&o.end);
        let prod = -(p.u * q.u) / (p.v * q.v);
        let y = PlanePoint::new(0.0, prod.sqrt()).ok()?;
        t.inverse().apply(&y).ok()
    }

    /// True when `a` and `b` lie strictly on opposite sides of this geodesic.
    pub fn separates(&self, a: &Geodesic, b: &Geodesic) -> bool {
        let side = |g: &Geodesic| {
            let s1 = self.boundary_side(&g.start);
            let s2 = self.boundary_side(&g.end);
            if s1 > EPS_BDY && s2 > EPS_BDY {
                1
            } else if s1 < -EPS_BDY && s2 < -EPS_BDY {
                -1
            } else {
                0
            }
        };
        let (sa, sb) = (side(a), side(b));
        sa != 0 && sb != 0 && sa != sb
    }
}

/// Coordinates relative to a caller-chosen geodesic: signed distance along it and signed height.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FermiCoord {
    pub x: f64,
    pub h: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParabolicDirection {
    Positive,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum IsometryClass {
    Identity,
    /// Counterclockwise rotation angle in (0, 2pi) at the fixed point.
    Elliptic(f64),
    /// Positive for conjugates of z + 1 by orientation-preserving isometries.
    Parabolic(ParabolicDirection),
    /// Translation length.
    Hyperbolic(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum FixedPoints {
    Hyperbolic {
        repulsive: BoundaryPoint,
        attractive: BoundaryPoint,
    },
    Parabolic(BoundaryPoint),
    Elliptic(PlanePoint),
}

/// An element of PSL(2,R) stored as a unit-determinant matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[[f64; 2]; 2]", into = "[[f64; 2]; 2]")]
pub struct Isometry {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl TryFrom<[[f64; 2]; 2]> for Isometry {
    type Error = Error;
    fn try_from(m: [[f64; 2]; 2]) -> Result<Self> {
        Isometry::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

impl From<Isometry> for [[f64; 2]; 2] {
    fn from(m: Isometry) -> Self {
        m.entries()
    }
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Builds z -> (az+b)/(cz+d), dividing by the square root of a positive determinant.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let det = a * d - b * c;
        if !det.is_finite() || det <= EPS_DET {
            return Err(Error::InvalidMatrix(format!(
                "determinant {det} is not positive"
            )));
        }
        let s = det.sqrt();
        Ok(Isometry {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub fn from_entries(m: [[f64; 2]; 2]) -> Result<Self> {
        Isometry::try_from(m)
    }

    pub fn translation(t: f64) -> Isometry {
        Isometry {
            a: 1.0,
            b: t,
            c: 0.0,
            d: 1.0,
        }
    }

    /// z -> k z for k > 0.
    pub fn dilation(k: f64) -> Result<Isometry> {
        Isometry::new(k, 0.0, 0.0, 1.0)
    }

    /// z -> x + h z, the affine map taking i to `p`.
    pub fn affine_to(p: &PlanePoint) -> Isometry {
        let s = p.h.sqrt();
        Isometry {
            a: s,
            b: p.x / s,
            c: 0.0,
            d: 1.0 / s,
        }
    }

    /// Counterclockwise rotation by `angle` about `center`.
    pub fn rotation(center: &PlanePoint, angle: f64) -> Isometry {
        let (s, c) = (angle / 2.0).sin_cos();
        let r = Isometry {
            a: c,
            b: s,
            c: -s,
            d: c,
        };
        r.conjugate_by(&Isometry::affine_to(center))
    }

    pub fn half_turn(center: &PlanePoint) -> Isometry {
        Isometry::rotation(center, PI)
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
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

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Isometry {
        Isometry {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// The other SL(2,R) lift of the same element.
    pub fn negated(&self) -> Isometry {
        Isometry {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }

    /// Sign representative whose first entry of magnitude above 1e-12 is positive.
    pub fn canonical(&self) -> Isometry {
        let first = [self.a, self.b, self.c, self.d]
            .into_iter()
            .find(|v| v.abs() > 1e-12)
            .unwrap_or(1.0);
        if first < 0.0 {
            self.negated()
        } else {
            *self
        }
    }

    /// Lift with nonnegative trace.
    pub fn with_nonnegative_trace(&self) -> Isometry {
        if self.trace() < 0.0 {
            self.negated()
        } else {
            *self
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.c, self.d]
            .iter()
            .all(|v| v.is_finite())
    }

    /// Largest entrywise difference, minimized over the sign of `o`.
    pub fn distance_psl(&self, o: &Isometry) -> f64 {
        let plus = (self.a - o.a)
            .abs()
            .max((self.b - o.b).abs())
            .max((self.c - o.c).abs())
            .max((self.d - o.d).abs());
        let minus = (self.a + o.a)
            .abs()
            .max((self.b + o.b).abs())
            .max((self.c + o.c).abs())
            .max((self.d + o.d).abs());
        plus.min(minus)
    }

    /// Equality in PSL(2,R).
    pub fn approx_eq(&self, o: &Isometry, tol: f64) -> bool {
        self.distance_psl(o) <= tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Isometry::IDENTITY, tol)
    }

    /// c m c^-1.
    pub fn conjugate_by(&self, c: &Isometry) -> Isometry {
        *c * *self * c.inverse()
    }

    pub fn classify(&self) -> IsometryClass {
        if self.is_identity(EPS_TR) {
            return IsometryClass::Identity;
        }
        let t = self.trace().abs();
        if t < 2.0 - EPS_TR {
            let angle = match self.fixed_points() {
                Ok(FixedPoints::Elliptic(p)) => wrap_tau(self.derivative_arg(&p)),
                _ => PI,
            };
            IsometryClass::Elliptic(angle)
        } else if t <= 2.0 + EPS_TR {
            let m = self.with_nonnegative_trace();
            if m.b - m.c >= 0.0 {
                IsometryClass::Parabolic(ParabolicDirection::Positive)
            } else {
                IsometryClass::Parabolic(ParabolicDirection::Negative)
            }
        } else {
            IsometryClass::Hyperbolic(2.0 * (t / 2.0).acosh())
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self.classify(), IsometryClass::Hyperbolic(_))
    }

    pub fn apply(&self, p: &PlanePoint) -> Result<PlanePoint> {
        let z = p.to_complex();
        let den = Complex64::new(self.c, 0.0) * z + self.d;
        let num = Complex64::new(self.a, 0.0) * z + self.b;
        let n2 = den.norm_sqr();
        if !n2.is_finite() || n2 == 0.0 || !num.norm_sqr().is_finite() {
            return Err(Error::NumericOverflow("apply"));
        }
        let w = num * den.conj() / n2;
        let h = p.h / n2;
        if !w.re.is_finite() || !h.is_finite() || h <= EPS_POS {
            return Err(Error::NumericOverflow("apply"));
        }
        Ok(PlanePoint { x: w.re, h })
    }

    pub fn apply_boundary(&self, b: &BoundaryPoint) -> BoundaryPoint {
        let u = self.a * b.u + self.b * b.v;
        let v = self.c * b.u + self.d * b.v;
        BoundaryPoint::new(u, v).expect("invertible matrix maps nonzero vectors to nonzero vectors")
    }

    /// Argument of the derivative (cz+d)^-2 at `p`, in (-pi, pi].
    pub fn derivative_arg(&self, p: &PlanePoint) -> f64 {
        let j = Complex64::new(self.c, 0.0) * p.to_complex() + self.d;
        wrap_pi(-2.0 * j.arg())
    }

    pub fn fixed_points(&self) -> Result<FixedPoints> {
        if self.is_identity(EPS_TR) {
            return Err(Error::IsIdentity);
        }
        let m = self.with_nonnegative_trace();
        let t = m.trace();
        if t < 2.0 - EPS_TR {
            let x = (m.a - m.d) / (2.0 * m.c);
            let y = (4.0 - t * t).sqrt() / (2.0 * m.c.abs());
            return PlanePoint::new(x, y).map(FixedPoints::Elliptic);
        }
        if t <= 2.0 + EPS_TR {
            return m.eigenvector(1.0).map(FixedPoints::Parabolic);
        }
        let big = (t + (t * t - 4.0).sqrt()) / 2.0;
        Ok(FixedPoints::Hyperbolic {
            repulsive: m.eigenvector(1.0 / big)?,
            attractive: m.eigenvector(big)?,
        })
    }

    fn eigenvector(&self, lambda: f64) -> Result<BoundaryPoint> {
        let v1 = (self.b, lambda - self.a);
        let v2 = (lambda - self.d, self.c);
        let v = if v1.0.hypot(v1.1) >= v2.0.hypot(v2.1) {
            v1
        } else {
            v2
        };
        BoundaryPoint::new(v.0, v.1)
    }

    /// Axis oriented from the repulsive to the attractive fixed point.
    pub fn axis(&self) -> Result<Geodesic> {
        if !self.is_hyperbolic() {
            return Err(Error::NotHyperbolic);
        }
        match self.fixed_points()? {
            FixedPoints::Hyperbolic {
                repulsive,
                attractive,
            } => Geodesic::new(repulsive, attractive),
            _ => Err(Error::NotHyperbolic),
        }
    }
}

impl Mul for Isometry {
    type Output = Isometry;

    /// Matrix product, renormalized to unit determinant.
    fn mul(self, o: Isometry) -> Isometry {
        let a = self.a * o.a + self.b * o.c;
        let b = self.a * o.b + self.b * o.d;
        let c = self.c * o.a + self.d * o.c;
        let d = self.c * o.b + self.d * o.d;
        let det = a * d - b * c;
        let s = if det > 0.0 && det.is_finite() {
            det.sqrt()
        } else {
            1.0
        };
        Isometry {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        }
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

pub fn distance(p: &PlanePoint, q: &PlanePoint) -> f64 {
    let dz = (p.x - q.x).hypot(p.h - q.h);
    2.0 * (dz / (2.0 * (p.h * q.h).sqrt())).asinh()
}

pub fn fermi_distance(p1: &FermiCoord, p2: &FermiCoord) -> f64 {
    // sinh^2(d/2) form: exact zero for coincident points.
    let s = ((p1.h - p2.h) / 2.0).sinh().powi(2)
        + p1.h.cosh() * p2.h.cosh() * ((p2.x - p1.x) / 2.0).sinh().powi(2);
    2.0 * s.sqrt().asinh()
}

/// g h g^-1 h^-1.
pub fn commutator(g: &Isometry, h: &Isometry) -> Isometry {
    *g * *h * g.inverse() * h.inverse()
}

fn hyperbolic_fixed(m: &Isometry) -> Result<(BoundaryPoint, BoundaryPoint)> {
    if !m.is_hyperbolic() {
        return Err(Error::NotHyperbolic);
    }
    match m.fixed_points()? {
        FixedPoints::Hyperbolic {
            repulsive,
            attractive,
        } => Ok((repulsive, attractive)),
        _ => Err(Error::NotHyperbolic),
    }
}

/// (r_g - a_h)(a_g - r_h) / ((r_g - r_h)(a_g - a_h)), evaluated homogeneously.
pub fn cross_ratio(g: &Isometry, h: &Isometry) -> Result<f64> {
    let (rg, ag) = hyperbolic_fixed(g)?;
    let (rh, ah) = hyperbolic_fixed(h)?;
    let den1 = rg.det(&rh);
    let den2 = ag.det(&ah);
    let n1 = rg.det(&ah);
    let n2 = ag.det(&rh);
    if [den1, den2, n1, n2].iter().any(|v| v.abs() <= EPS_BDY) {
        return Err(Error::SharedFixedPoint);
    }
    Ok(n1 * n2 / (den1 * den2))
}

pub fn axes_crossing(g: &Isometry, h: &Isometry) -> bool {
    match (g.axis(), h.axis()) {
        (Ok(a), Ok(b)) => a.crosses(&b),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: f64, b: f64, c: f64, d: f64) -> Isometry {
        Isometry::new(a, b, c, d).unwrap()
    }

    fn pt(x: f64, h: f64) -> PlanePoint {
        PlanePoint::new(x, h).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(Isometry::IDENTITY.classify(), IsometryClass::Identity);
        match m(2.0, 0.0, 0.0, 0.5).classify() {
            IsometryClass::Hyperbolic(l) => assert!((l - 2.0 * 2f64.ln()).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        let t = PI / 3.0;
        let rot = m(t.cos(), -t.sin(), t.sin(), t.cos());
        assert!(matches!(rot.classify(), IsometryClass::Elliptic(_)));
        assert_eq!(
            Isometry::translation(1.0).classify(),
            IsometryClass::Parabolic(ParabolicDirection::Positive)
        );
        assert_eq!(
            Isometry::translation(-1.0).classify(),
            IsometryClass::Parabolic(ParabolicDirection::Negative)
        );
    }

    #[test]
    fn rotation_angle_is_counterclockwise() {
        let r = Isometry::rotation(&pt(1.0, 2.0), PI / 2.0);
        match r.classify() {
            IsometryClass::Elliptic(a) => assert!((a - PI / 2.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        match r.fixed_points().unwrap() {
            FixedPoints::Elliptic(p) => assert!(p.approx_eq(&pt(1.0, 2.0), 1e-12)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn apply_examples() {
        let p = pt(0.0, 1.0);
        assert_eq!(Isometry::IDENTITY.apply(&p).unwrap(), p);
        assert!(Isometry::translation(1.0)
            .apply(&p)
            .unwrap()
            .approx_eq(&pt(1.0, 1.0), 1e-15));
        assert!(m(2.0, 0.0, 0.0, 0.5)
            .apply(&p)
            .unwrap()
            .approx_eq(&pt(0.0, 4.0), 1e-15));
    }

    #[test]
    fn boundary_examples() {
        let inf = BoundaryPoint::INFINITY;
        assert!(Isometry::IDENTITY
            .apply_boundary(&inf)
            .approx_eq(&inf, 1e-15));
        assert!(Isometry::translation(1.0)
            .apply_boundary(&inf)
            .approx_eq(&inf, 1e-15));
        let zero = BoundaryPoint::from_real(0.0).unwrap();
        assert!(m(2.0, 0.0, 0.0, 0.5)
            .apply_boundary(&zero)
            .approx_eq(&zero, 1e-15));
    }

    #[test]
    fn fixed_point_examples() {
        match m(2.0, 0.0, 0.0, 0.5).fixed_points().unwrap() {
            FixedPoints::Hyperbolic {
                repulsive,
                attractive,
            } => {
                assert!(repulsive.approx_eq(&BoundaryPoint::from_real(0.0).unwrap(), 1e-15));
                assert!(attractive.approx_eq(&BoundaryPoint::INFINITY, 1e-15));
            }
            other => panic!("{other:?}"),
        }
        match Isometry::translation(1.0).fixed_points().unwrap() {
            FixedPoints::Parabolic(b) => assert!(b.approx_eq(&BoundaryPoint::INFINITY, 1e-15)),
            other => panic!("{other:?}"),
        }
        assert_eq!(Isometry::IDENTITY.fixed_points(), Err(Error::IsIdentity));
    }

    #[test]
    fn axis_examples() {
        let g = m(2.0, 0.0, 0.0, 0.5);
        let ax = g.axis().unwrap();
        assert!(ax
            .start()
            .approx_eq(&BoundaryPoint::from_real(0.0).unwrap(), 1e-15));
        assert!(ax.end().approx_eq(&BoundaryPoint::INFINITY, 1e-15));
        let c = g.conjugate_by(&Isometry::translation(3.0)).axis().unwrap();
        assert!(c
            .start()
            .approx_eq(&BoundaryPoint::from_real(3.0).unwrap(), 1e-12));
        assert!(c.end().approx_eq(&BoundaryPoint::INFINITY, 1e-12));
        let rot = Isometry::rotation(&PlanePoint::I, 1.0);
        assert_eq!(rot.axis(), Err(Error::NotHyperbolic));
    }

    #[test]
    fn distance_examples() {
        let i = PlanePoint::I;
        assert_eq!(distance(&i, &i), 0.0);
        assert!((distance(&i, &pt(0.0, 1f64.exp())) - 1.0).abs() < 1e-15);
        assert!((distance(&i, &pt(1.0, 1.0)) - 1.5f64.acosh()).abs() < 1e-15);
    }

    #[test]
    fn fermi_examples() {
        let f = |x, h| FermiCoord { x, h };
        assert!((fermi_distance(&f(0.0, 0.0), &f(2.5, 0.0)) - 2.5).abs() < 1e-12);
        assert_eq!(fermi_distance(&f(0.0, 0.7), &f(0.0, 0.7)), 0.0);
        let c1 = 1f64.cosh();
        let s1 = 1f64.sinh();
        let expect = (c1 * c1 * c1 - s1 * s1).acosh();
        assert!((fermi_distance(&f(0.0, 1.0), &f(1.0, 1.0)) - expect).abs() < 1e-12);
    }

    #[test]
    fn commutator_examples() {
        let d1 = m(2.0, 0.0, 0.0, 0.5);
        let d2 = m(3.0, 0.0, 0.0, 1.0 / 3.0);
        assert!(commutator(&d1, &d2).is_identity(1e-12));
        let g = m(1.0, 1.0, 0.0, 1.0);
        let h = m(1.0, 0.0, 1.0, 1.0);
        assert!((commutator(&g, &h).trace() - 3.0).abs() < 1e-12);
        let g = m(1.0, 1.0, 1.0, 2.0);
        let h = m(1.0, -1.0, -1.0, 2.0);
        assert!((commutator(&g, &h).trace() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn cross_ratio_normalized() {
        // g fixes 0 (repelling) and infinity; h has axis from 1 to t.
        let g = m(2.0, 0.0, 0.0, 0.5);
        for &t in &[3.0, 0.25, -2.0] {
            let base = m(2.0, 0.0, 0.0, 0.5);
            // Send 0 -> 1 and infinity -> t.
            let c = if t > 1.0 {
                m(t, 1.0, 1.0, 1.0)
            } else {
                m(t, -1.0, 1.0, -1.0)
            };
            let h = base.conjugate_by(&c);
            let cr = cross_ratio(&g, &h).unwrap();
            assert!((cr - t).abs() < 1e-9, "{cr} vs {t}");
        }
        let h = g.conjugate_by(&Isometry::translation(3.0));
        assert_eq!(cross_ratio(&g, &h), Err(Error::SharedFixedPoint));
    }

    #[test]
    fn axes_crossing_examples() {
        let g = m(1.0, 1.0, 1.0, 2.0);
        let h = m(1.0, -1.0, -1.0, 2.0);
        assert!(axes_crossing(&g, &h));
        let d = m(2.0, 0.0, 0.0, 0.5);
        assert!(!axes_crossing(
            &d,
            &d.conjugate_by(&Isometry::translation(3.0))
        ));
        assert!(!axes_crossing(&Isometry::rotation(&PlanePoint::I, 1.0), &d));
    }

    #[test]
    fn circle_angle_runs_counterclockwise() {
        let xs = [-100.0, -1.0, 0.0, 0.5, 1.0, 100.0];
        let angles: Vec<f64> = xs
            .iter()
            .map(|&x| BoundaryPoint::from_real(x).unwrap().circle_angle())
            .collect();
        assert!(angles.windows(2).all(|w| w[0] < w[1]), "{angles:?}");
        assert_eq!(BoundaryPoint::INFINITY.circle_angle(), 0.0);
    }

    #[test]
    fn direction_and_exp_agree() {
        let p = pt(0.3, 0.7);
        for k in 0..12 {
            let beta = -PI + k as f64 * PI / 6.0 + 0.1;
            let q = p.exp(beta, 0.8).unwrap();
            assert!((distance(&p, &q) - 0.8).abs() < 1e-12);
            assert!(wrap_pi(p.direction_to(&q) - beta).abs() < 1e-12);
        }
    }

    #[test]
    fn geodesic_helpers() {
        let ax = Geodesic::new(
            BoundaryPoint::from_real(0.0).unwrap(),
            BoundaryPoint::INFINITY,
        )
        .unwrap();
        let f = ax.foot(&pt(3.0, 4.0)).unwrap();
        assert!(f.approx_eq(&pt(0.0, 5.0), 1e-12));
        let q = ax.perpendicular_offset(&pt(0.0, 2.0), 0.5).unwrap();
        assert!(q.x() < 0.0 && ax.side(&q) > 0.0);
        assert!((ax.distance_to(&q).unwrap() - 0.5).abs() < 1e-12);
        let other = Geodesic::new(
            BoundaryPoint::from_real(-2.0).unwrap(),
            BoundaryPoint::from_real(8.0).unwrap(),
        )
        .unwrap();
        let x = ax.intersection(&other).unwrap();
        assert!(x.approx_eq(&pt(0.0, 4.0), 1e-12));
    }
}
