//! The pentagon p, [g^-1,h^-1]p, hp, ghp, h^-1ghp and its validation.
//!
//! Simplicity and orientation are decided after lifting z to (Re z, |z|^2), which
//! straightens geodesics without the loss of resolution a disc model suffers far
//! from its centre. Angles are read from tangent directions in the half-plane.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cover::commutator_twist;
use crate::error::{Error, Result};
use crate::moebius::{wrap_pi, wrap_tau, Isometry, PlanePoint};

/// Minimum separation of consecutive vertices.
pub const EPS_DEG: f64 = 1e-8;
/// Tolerance for vertex identifications under g and h.
pub const EPS_IDENT: f64 = 1e-9;
/// Agreement expected between the twist formula and the measured angle sum.
pub const EPS_ANGLE: f64 = 1e-6;
/// Disagreement beyond which the construction is reported as inconsistent.
pub const EPS_MISMATCH: f64 = 1e-4;

const EPS_COLLINEAR: f64 = 1e-12;
const EPS_FOLD: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Left,
    Right,
}

/// Why a pentagon fails to be simple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Defect {
    /// Edge i is shorter than the degeneracy tolerance.
    ShortEdge(usize),
    /// The two edges at vertex i fold back onto each other.
    FoldBack(usize),
    /// Edges i and j meet.
    Crossing(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pentagon {
    vertices: [PlanePoint; 5],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PentagonReport {
    pub simple: bool,
    pub degenerate: bool,
    /// NaN unless simple.
    pub angle_sum: f64,
    /// NaN unless simple.
    pub signed_area: f64,
    pub orientation: Option<Orientation>,
}

pub fn build_pentagon(g: &Isometry, h: &Isometry, p: &PlanePoint) -> Result<Pentagon> {
    let v2 = h.apply(p)?;
    let v3 = g.apply(&v2)?;
    let v4 = h.inverse().apply(&v3)?;
    let v1 = g.inverse().apply(&v4)?;
    Ok(Pentagon {
        vertices: [*p, v1, v2, v3, v4],
    })
}

/// Orientation of three points after lifting z to (Re z, |z|^2).
///
/// The lift sends geodesics to straight lines and preserves orientation. The
/// expansion below is written in differences so no term grows with |z|.
fn orient(a: &PlanePoint, b: &PlanePoint, c: &PlanePoint) -> f64 {
    let (dxb, dxc) = (b.x() - a.x(), c.x() - a.x());
    let dhb = (b.h() - a.h()) * (b.h() + a.h());
    let dhc = (c.h() - a.h()) * (c.h() + a.h());
    dxb * dxc * (c.x() - b.x()) + dxb * dhc - dxc * dhb
}

/// `orient` divided by a scale of the same degree, so near-zero means near-collinear.
fn orient_normalized(a: &PlanePoint, b: &PlanePoint, c: &PlanePoint) -> f64 {
    let nb = (b.to_complex() - a.to_complex()).norm();
    let nc = (c.to_complex() - a.to_complex()).norm();
    let scale = nb * nc * (nb + nc);
    if scale == 0.0 {
        return 0.0;
    }
    orient(a, b, c) / scale
}

/// Whether `p`, known to lie on the line through `a` and `b` in the lift, lies between them.
fn between(a: &PlanePoint, b: &PlanePoint, p: &PlanePoint) -> bool {
    let lift = |q: &PlanePoint| {
        let dx = q.x() - p.x();
        (dx, dx * (q.x() + p.x()) + (q.h() - p.h()) * (q.h() + p.h()))
    };
    let (ua, va) = lift(a);
    let (ub, vb) = lift(b);
    ua * ub + va * vb <= 0.0
}

/// Closed geodesic-segment intersection; near-touches count as touches.
fn segments_meet(a: &PlanePoint, b: &PlanePoint, c: &PlanePoint, d: &PlanePoint) -> bool {
    let t = EPS_COLLINEAR;
    let d1 = orient_normalized(c, d, a);
    let d2 = orient_normalized(c, d, b);
    let d3 = orient_normalized(a, b, c);
    let d4 = orient_normalized(a, b, d);
    let strictly = |u: f64, v: f64| (u > t && v < -t) || (u < -t && v > t);
    if strictly(d1, d2) && strictly(d3, d4) {
        return true;
    }
    (d1.abs() <= t && between(c, d, a))
        || (d2.abs() <= t && between(c, d, b))
        || (d3.abs() <= t && between(a, b, c))
        || (d4.abs() <= t && between(a, b, d))
}

impl Pentagon {
    pub fn from_vertices(vertices: [PlanePoint; 5]) -> Pentagon {
        Pentagon { vertices }
    }

    pub fn vertices(&self) -> &[PlanePoint; 5] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> PlanePoint {
        self.vertices[i % 5]
    }

    pub fn image(&self, m: &Isometry) -> Result<Pentagon> {
        let mut out = self.vertices;
        for v in out.iter_mut() {
            *v = m.apply(v)?;
        }
        Ok(Pentagon { vertices: out })
    }

    pub fn edge_length(&self, i: usize) -> f64 {
        self.vertex(i).distance(&self.vertex(i + 1))
    }

    /// Edges at most EPS_DEG long; NaN lengths count as short.
    fn short_edge(&self) -> Option<usize> {
        (0..5).find(|&i| self.edge_length(i).is_nan() || self.edge_length(i) <= EPS_DEG)
    }

    pub fn is_degenerate(&self) -> bool {
        self.short_edge().is_some()
    }

    /// The first obstruction to simplicity found, if any.
    pub fn defect(&self) -> Option<Defect> {
        if let Some(i) = self.short_edge() {
            return Some(Defect::ShortEdge(i));
        }
        for i in 0..5 {
            // Adjacent edges share vertex i+1 and may only fold back onto each other.
            let v = self.vertex(i + 1);
            let back = v.direction_to(&self.vertex(i));
            let fwd = v.direction_to(&self.vertex(i + 2));
            if wrap_pi(back - fwd).abs() < EPS_FOLD {
                return Some(Defect::FoldBack((i + 1) % 5));
            }
            // The non-adjacent edge pairs are (i, i+2); (i, i+3) is the same as (i+3, i+5).
            let j = i + 2;
            if segments_meet(
                &self.vertex(i),
                &self.vertex(i + 1),
                &self.vertex(j),
                &self.vertex(j + 1),
            ) {
                return Some(Defect::Crossing(i, j % 5));
            }
        }
        None
    }

    pub fn is_simple(&self) -> bool {
        self.defect().is_none()
    }

    /// Signed area of the lifted polygon, by a fan from the first vertex; positive when counterclockwise.
    fn lifted_orientation(&self) -> f64 {
        let v = &self.vertices;
        (1..4).map(|i| orient(&v[0], &v[i], &v[i + 1])).sum()
    }

    pub fn orientation(&self) -> Result<Orientation> {
        if !self.is_simple() {
            return Err(Error::NotSimple);
        }
        Ok(if self.lifted_orientation() > 0.0 {
            Orientation::Left
        } else {
            Orientation::Right
        })
    }

    pub fn interior_angles(&self) -> Result<[f64; 5]> {
        let ccw = self.orientation()? == Orientation::Left;
        let mut out = [0.0; 5];
        for (i, angle) in out.iter_mut().enumerate() {
            let v = self.vertex(i);
            let next = v.direction_to(&self.vertex(i + 1));
            let prev = v.direction_to(&self.vertex(i + 4));
            *angle = if ccw {
                wrap_tau(prev - next)
            } else {
                wrap_tau(next - prev)
            };
        }
        Ok(out)
    }

    pub fn angle_sum(&self) -> Result<f64> {
        Ok(self.interior_angles()?.iter().sum())
    }

    /// Hyperbolic area with sign positive for counterclockwise traversal.
    pub fn signed_area(&self) -> Result<f64> {
        if !self.is_simple() {
            return Err(Error::NotSimple);
        }
        let v = &self.vertices;
        let mut total = 0.0;
        for i in 1..4 {
            let o = orient(&v[0], &v[i], &v[i + 1]);
            if o == 0.0 {
                continue;
            }
            let tri = [v[0], v[i], v[i + 1]];
            let mut deficit = PI;
            for j in 0..3 {
                let a = tri[j];
                let d1 = a.direction_to(&tri[(j + 1) % 3]);
                let d2 = a.direction_to(&tri[(j + 2) % 3]);
                deficit -= wrap_pi(d1 - d2).abs();
            }
            total += o.signum() * deficit;
        }
        Ok(total)
    }

    pub fn report(&self) -> PentagonReport {
        let degenerate = self.is_degenerate();
        let simple = !degenerate && self.is_simple();
        PentagonReport {
            simple,
            degenerate,
            angle_sum: self.angle_sum().unwrap_or(f64::NAN),
            signed_area: self.signed_area().unwrap_or(f64::NAN),
            orientation: self.orientation().ok(),
        }
    }
}

pub fn is_simple(p: &Pentagon) -> bool {
    p.is_simple()
}

pub fn angle_sum(p: &Pentagon) -> Result<f64> {
    p.angle_sum()
}

pub fn signed_area(p: &Pentagon) -> Result<f64> {
    p.signed_area()
}

/// Corner angle 3 pi - |twist| and the side of the first edge on which the pentagon lies.
///
/// The twist formula is cross-checked against the measured angle sum.
pub fn corner_angle(g: &Isometry, h: &Isometry, p: &PlanePoint) -> Result<(f64, Orientation)> {
    let pent = build_pentagon(g, h, p)?;
    if !pent.is_simple() {
        return Err(Error::NotSimple);
    }
    let twist = commutator_twist(g, h, p)?;
    let theta = 3.0 * PI - twist.abs();
    let orientation = if twist > 0.0 {
        Orientation::Left
    } else {
        Orientation::Right
    };
    let measured = pent.angle_sum()?;
    let gap = (theta - measured).abs();
    if gap > EPS_MISMATCH || pent.orientation()? != orientation {
        return Err(Error::TwistAngleMismatch(gap));
    }
    if gap > EPS_ANGLE {
        log::warn!("corner angle {theta} and angle sum {measured} differ by {gap}");
    }
    Ok((theta, orientation))
}

/// g(v1) = v4, g(v2) = v3, h(v4) = v3 and h(v0) = v2.
///
/// Points are compared in half-plane coordinates, relative to their size once it exceeds 1.
/// Hyperbolic distance is not used: near the boundary it resolves less than a unit roundoff allows.
pub fn check_identifications(g: &Isometry, h: &Isometry, pent: &Pentagon) -> bool {
    let v = pent.vertices();
    let pairs = [(g, 1, 4), (g, 2, 3), (h, 4, 3), (h, 0, 2)];
    pairs.iter().all(|&(m, from, to)| match m.apply(&v[from]) {
        Ok(w) => {
            let (a, b) = (w.to_complex(), v[to].to_complex());
            (a - b).norm() <= EPS_IDENT * b.norm().max(1.0)
        }
        Err(_) => false,
    })
}
