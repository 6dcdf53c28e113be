//! Lifts to the universal cover of PSL(2,R), commutator regions and twists.
//!
//! A lift is stored as a matrix together with a continuous branch of arg m'(i).
//! The branch at any other point follows from the cocycle j(m,z) = cz + d, whose
//! values stay in one open half-plane as z ranges over the upper half-plane, so
//! the principal argument of j(m,w)/j(m,i) is already the continuous difference.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::{commutator, wrap_pi, FixedPoints, Isometry, IsometryClass, PlanePoint};

/// Tolerance for a twist sitting on the boundary of its region's interval.
pub const EPS_TW: f64 = 1e-7;

/// Region of a lift in the universal cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoverRegion {
    CenterPower(i64),
    Hyp(i64),
    ParPlus(i64),
    ParMinus(i64),
    Ell(i64),
}

impl CoverRegion {
    /// Open interval of twists the region takes over the plane; degenerate for central elements.
    pub fn twist_interval(&self) -> (f64, f64) {
        let pi = PI;
        match *self {
            CoverRegion::CenterPower(n) => (TAU * n as f64, TAU * n as f64),
            CoverRegion::Hyp(n) => ((2 * n - 1) as f64 * pi, (2 * n + 1) as f64 * pi),
            CoverRegion::ParPlus(n) => (2.0 * n as f64 * pi, (2 * n + 1) as f64 * pi),
            CoverRegion::ParMinus(n) => ((2 * n - 1) as f64 * pi, 2.0 * n as f64 * pi),
            CoverRegion::Ell(n) if n > 0 => (TAU * (n - 1) as f64, TAU * n as f64),
            CoverRegion::Ell(n) => (TAU * n as f64, TAU * (n + 1) as f64),
        }
    }

    /// Membership in the set of regions a commutator lift can occupy.
    pub fn is_allowed_commutator(&self) -> bool {
        matches!(
            *self,
            CoverRegion::CenterPower(0)
                | CoverRegion::Hyp(-1..=1)
                | CoverRegion::Ell(-1)
                | CoverRegion::Ell(1)
                | CoverRegion::ParPlus(0)
                | CoverRegion::ParMinus(0)
                | CoverRegion::ParPlus(-1)
                | CoverRegion::ParMinus(1)
        )
    }

    /// The orientations the construction assigns: positive twists bound the pentagon on the left.
    pub fn is_positive(&self) -> bool {
        let (lo, hi) = self.twist_interval();
        lo + hi > 0.0
    }
}

/// A point of the universal cover: an isometry with a continuous branch of arg m'(i).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lift {
    m: Isometry,
    phi: f64,
}

fn cocycle(m: &Isometry, z: &PlanePoint) -> Complex64 {
    Complex64::new(m.c(), 0.0) * z.to_complex() + m.d()
}

impl Lift {
    /// The lift whose rotation at i is the principal value of arg m'(i).
    pub fn principal(m: Isometry) -> Lift {
        Lift {
            m,
            phi: m.derivative_arg(&PlanePoint::I),
        }
    }

    /// Rotation by 2 pi n about any point.
    pub fn central(n: i64) -> Lift {
        Lift {
            m: Isometry::IDENTITY,
            phi: TAU * n as f64,
        }
    }

    pub fn isometry(&self) -> Isometry {
        self.m
    }

    /// Continuous argument of m'(w) on this branch.
    pub fn arg_derivative_at(&self, w: &PlanePoint) -> f64 {
        let ratio = cocycle(&self.m, w) / cocycle(&self.m, &PlanePoint::I);
        self.phi - 2.0 * ratio.arg()
    }

    /// self after o.
    pub fn compose(&self, o: &Lift) -> Result<Lift> {
        let oi = o.m.apply(&PlanePoint::I)?;
        Ok(Lift {
            m: self.m * o.m,
            phi: self.arg_derivative_at(&oi) + o.phi,
        })
    }

    pub fn inverse(&self) -> Result<Lift> {
        let inv = self.m.inverse();
        let mi = self.m.apply(&PlanePoint::I)?;
        let ratio = cocycle(&inv, &PlanePoint::I) / cocycle(&inv, &mi);
        Ok(Lift {
            m: inv,
            phi: -self.phi - 2.0 * ratio.arg(),
        })
    }

    /// Real twist at `y`: rotation of the derivative relative to parallel transport to m(y).
    pub fn twist(&self, y: &PlanePoint) -> Result<f64> {
        let q = self.m.apply(y)?;
        let base = self.arg_derivative_at(y);
        if y.distance(&q) < 1e-13 {
            return Ok(base);
        }
        let leave = y.direction_to(&q);
        let arrive = wrap_pi(q.direction_to(y) + PI);
        Ok(base + wrap_pi(leave - arrive))
    }
}

/// Canonical lift of g h g^-1 h^-1; independent of the lifts chosen for g and h.
pub fn commutator_lift(g: &Isometry, h: &Isometry) -> Result<Lift> {
    let lg = Lift::principal(*g);
    let lh = Lift::principal(*h);
    lg.compose(&lh)?
        .compose(&lg.inverse()?)?
        .compose(&lh.inverse()?)
}

/// Twist of the principal lift, reduced to (-pi, pi].
pub fn twist_mod_2pi(m: &Isometry, p: &PlanePoint) -> Result<f64> {
    Ok(wrap_pi(Lift::principal(*m).twist(p)?))
}

fn probe_point(c: &Isometry) -> PlanePoint {
    let i = PlanePoint::I;
    match c.fixed_points() {
        Ok(FixedPoints::Elliptic(r)) => r,
        Ok(FixedPoints::Hyperbolic { .. }) => c.axis().and_then(|a| a.foot(&i)).unwrap_or(i),
        Ok(FixedPoints::Parabolic(b)) => i.exp(i.direction_to_boundary(&b), 1.0).unwrap_or(i),
        Err(_) => i,
    }
}

/// Region of a lift, read from its twist at a probe point.
pub fn region_of(lift: &Lift) -> CoverRegion {
    let m = lift.isometry();
    let cls = m.classify();
    if cls == IsometryClass::Identity {
        return CoverRegion::CenterPower((lift.phi / TAU).round() as i64);
    }
    let probe = probe_point(&m);
    let t = lift
        .twist(&probe)
        .or_else(|_| lift.twist(&PlanePoint::I))
        .unwrap_or(lift.phi);
    match cls {
        IsometryClass::Hyperbolic(_) => CoverRegion::Hyp((t / TAU).round() as i64),
        IsometryClass::Parabolic(_) => {
            let n = (t / TAU).round();
            if t - n * TAU > 0.0 {
                CoverRegion::ParPlus(n as i64)
            } else {
                CoverRegion::ParMinus(n as i64)
            }
        }
        _ => {
            let n = (t.abs() / TAU).ceil().max(1.0) as i64;
            CoverRegion::Ell(if t > 0.0 { n } else { -n })
        }
    }
}

/// Region of the canonical lift of [g,h].
pub fn classify_commutator(g: &Isometry, h: &Isometry) -> CoverRegion {
    match commutator_lift(g, h) {
        Ok(l) => region_of(&l),
        Err(_) => {
            // Overflowing inputs: fall back on the trace table alone.
            let t = commutator(g, h).trace();
            if t > 2.0 {
                CoverRegion::Hyp(0)
            } else {
                CoverRegion::CenterPower(0)
            }
        }
    }
}

/// Real twist at `p` of the canonical lift of [g^-1, h^-1].
///
/// The value is checked against the open interval of the commutator's region.
pub fn commutator_twist(g: &Isometry, h: &Isometry, p: &PlanePoint) -> Result<f64> {
    let lift = commutator_lift(&g.inverse(), &h.inverse())?;
    let t = lift.twist(p)?;
    let region = region_of(&lift);
    if let CoverRegion::CenterPower(_) = region {
        return Ok(t);
    }
    let (lo, hi) = region.twist_interval();
    if t <= lo + EPS_TW || t >= hi - EPS_TW {
        return Err(Error::AmbiguousNearBoundary(t));
    }
    Ok(t)
}
