//! Decides whether a pair is a holonomy and, when it is, builds a verified pentagon.
//!
//! Dispatch is on kappa = Tr[g,h]: below -2, at -2, in (-2,2), at 2 and above 2.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::charvar::{
    apply_word, character_of, classify_pair, markoff_normalize, BasisMove, KappaRegime, MoveWord,
    PairClass, Step,
};
use crate::cover::{classify_commutator, commutator_twist, CoverRegion};
use crate::error::{Error, Result};
use crate::moebius::{
    commutator, cross_ratio, wrap_pi, BoundaryPoint, FixedPoints, Geodesic, Isometry,
    IsometryClass, PlanePoint,
};
use crate::pentagon::{build_pentagon, check_identifications, Orientation, Pentagon, EPS_ANGLE};

/// Largest hyperbolic distance from i sampled towards the cusp.
pub const CUSP_SAMPLE_CAP: usize = 50;
/// Number of halvings of the perturbation radius in the elliptic case.
pub const HALVING_BUDGET: usize = 60;
/// Tolerance of the Gauss-Bonnet and twist checks on a finished result.
pub const EPS_VERIFY: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructOptions {
    /// Signed displacement of the basepoint off the commutator axis when Tr[g,h] < -2.
    pub offset: f64,
    /// Seed for the order of the fallback direction scan in the elliptic case.
    pub seed: u64,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            offset: 0.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HypPosCase {
    I,
    II,
    III,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    HypNeg,
    ParNeg,
    Elliptic,
    ReducibleNonAbelian,
    HypPos(HypPosCase),
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseTag::HypPos(c) => write!(f, "HypPos({c:?})"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NotHolonomy {
    Abelian,
    VirtuallyAbelian,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionResult {
    pub case_tag: CaseTag,
    pub word: MoveWord,
    pub g_eff: Isometry,
    pub h_eff: Isometry,
    pub basepoint: PlanePoint,
    pub pentagon: Pentagon,
    /// 3 pi - |twist|.
    pub corner_angle: f64,
    /// s with corner_angle = 2 pi (1/2 + s).
    pub corner_order: f64,
    pub orientation: Orientation,
    pub commutator_region: CoverRegion,
    /// Twist of the canonical lift of [g_eff^-1, h_eff^-1] at the basepoint.
    pub twist: f64,
    pub angle_sum: f64,
    pub signed_area: f64,
}

impl ConstructionResult {
    /// Re-derives every certified property from the stored pentagon and pair.
    pub fn verify(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::ConstructionFailed(format!("verification: {what}")));
        let p = &self.pentagon;
        if !p.is_simple() {
            return Err(Error::NotSimple);
        }
        let theta = self.corner_angle;
        if !(theta > 0.0 && theta < 3.0 * PI) {
            return fail("corner angle out of range");
        }
        if (theta - (3.0 * PI - self.twist.abs())).abs() >= EPS_VERIFY {
            return fail("corner angle differs from twist formula");
        }
        let sum = p.angle_sum()?;
        if (sum - theta).abs() >= EPS_VERIFY {
            return Err(Error::TwistAngleMismatch((sum - theta).abs()));
        }
        let area = p.signed_area()?;
        if (area.abs() + theta - 3.0 * PI).abs() >= EPS_VERIFY {
            return fail("area and angle sum violate Gauss-Bonnet");
        }
        if (area - self.twist).abs() >= EPS_VERIFY {
            return fail("signed area differs from twist");
        }
        if !check_identifications(&self.g_eff, &self.h_eff, p) {
            return fail("edge identifications");
        }
        let expected = if self.twist > 0.0 {
            Orientation::Left
        } else {
            Orientation::Right
        };
        if p.orientation()? != expected || self.orientation != expected {
            return fail("orientation");
        }
        if self.corner_order >= 1.0 {
            return fail("corner order");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Outcome {
    Holonomy(Box<ConstructionResult>),
    NotHolonomy(NotHolonomy),
}

impl Outcome {
    pub fn result(&self) -> Option<&ConstructionResult> {
        match self {
            Outcome::Holonomy(r) => Some(r),
            Outcome::NotHolonomy(_) => None,
        }
    }
}

pub fn construct(g: &Isometry, h: &Isometry, opts: &ConstructOptions) -> Result<Outcome> {
    let class = classify_pair(g, h);
    let res = match class {
        PairClass::Abelian => return Ok(Outcome::NotHolonomy(NotHolonomy::Abelian)),
        PairClass::VirtuallyAbelianNonAbelian => {
            return Ok(Outcome::NotHolonomy(NotHolonomy::VirtuallyAbelian))
        }
        PairClass::ReducibleNonAbelian => case_reducible(g, h),
        PairClass::Generic(KappaRegime::BelowMinus2) => case_hyp_neg(g, h, opts),
        PairClass::Generic(KappaRegime::AtMinus2) => case_par_neg(g, h),
        PairClass::Generic(KappaRegime::Between) => case_elliptic(g, h, opts),
        PairClass::Generic(KappaRegime::Above2) => case_hyp_pos(g, h),
    };
    match res {
        Ok(r) => Ok(Outcome::Holonomy(Box::new(r))),
        Err(e @ Error::ConstructionFailed(_)) => Err(e),
        Err(e) => Err(Error::ConstructionFailed(format!("{}: {e}", class.name()))),
    }
}

/// Builds and verifies the result for a chosen effective pair and basepoint.
fn finish(
    case_tag: CaseTag,
    word: MoveWord,
    g: &Isometry,
    h: &Isometry,
    p: &PlanePoint,
) -> Result<ConstructionResult> {
    let pentagon = build_pentagon(g, h, p)?;
    if !pentagon.is_simple() {
        return Err(Error::NotSimple);
    }
    let twist = commutator_twist(g, h, p)?;
    let corner_angle = 3.0 * PI - twist.abs();
    let angle_sum = pentagon.angle_sum()?;
    if (angle_sum - corner_angle).abs() > EPS_ANGLE {
        return Err(Error::TwistAngleMismatch((angle_sum - corner_angle).abs()));
    }
    let result = ConstructionResult {
        case_tag,
        word,
        g_eff: *g,
        h_eff: *h,
        basepoint: *p,
        pentagon,
        corner_angle,
        corner_order: corner_angle / TAU - 0.5,
        orientation: if twist > 0.0 {
            Orientation::Left
        } else {
            Orientation::Right
        },
        commutator_region: classify_commutator(g, h),
        twist,
        angle_sum,
        signed_area: pentagon.signed_area()?,
    };
    result.verify()?;
    Ok(result)
}

fn failed(msg: impl Into<String>) -> Error {
    Error::ConstructionFailed(msg.into())
}

/// Tr[g,h] < -2: basepoint on the axis of [g^-1,h^-1], the foot of the perpendicular from i.
pub fn case_hyp_neg(
    g: &Isometry,
    h: &Isometry,
    opts: &ConstructOptions,
) -> Result<ConstructionResult> {
    let axis = commutator(&g.inverse(), &h.inverse()).axis()?;
    let mut p = axis.foot(&PlanePoint::I)?;
    if opts.offset != 0.0 {
        p = axis.perpendicular_offset(&p, opts.offset)?;
    }
    finish(CaseTag::HypNeg, MoveWord::new(), g, h, &p)
        .map_err(|e| failed(format!("no valid pentagon at offset {}: {e}", opts.offset)))
}

/// Point at distance `d` from i on the geodesic towards the fixed point of [g^-1,h^-1].
pub fn cusp_basepoint(g: &Isometry, h: &Isometry, d: f64) -> Result<PlanePoint> {
    let c = commutator(&g.inverse(), &h.inverse());
    let xi = match c.fixed_points()? {
        FixedPoints::Parabolic(b) => b,
        _ => return Err(failed("commutator is not parabolic")),
    };
    let i = PlanePoint::I;
    i.exp(i.direction_to_boundary(&xi), d)
}

/// Tr[g,h] = -2: walk from i towards the cusp at distances 1, 2, ... until the pentagon is simple.
pub fn case_par_neg(g: &Isometry, h: &Isometry) -> Result<ConstructionResult> {
    let mut last = None;
    for k in 1..=CUSP_SAMPLE_CAP {
        let attempt = cusp_basepoint(g, h, k as f64)
            .and_then(|p| finish(CaseTag::ParNeg, MoveWord::new(), g, h, &p));
        match attempt {
            Ok(r) => return Ok(r),
            Err(e) => last = Some(e),
        }
    }
    Err(failed(format!(
        "no simple pentagon within distance {CUSP_SAMPLE_CAP}: {last:?}"
    )))
}

/// Direction from the fixed point r at which the perturbed basepoint sits.
///
/// The pentagon replaces the corner r of the quadrilateral r, hr, ghr, h^-1ghr by a
/// short edge p -> [g^-1,h^-1]p. The two endpoints are placed symmetrically about
/// the bisector of the exterior angle at r, so the edge cuts the corner.
pub fn elliptic_direction(g: &Isometry, h: &Isometry) -> Result<(PlanePoint, f64, f64)> {
    let c = commutator(&g.inverse(), &h.inverse());
    let r = match c.fixed_points()? {
        FixedPoints::Elliptic(r) => r,
        _ => return Err(failed("commutator is not elliptic")),
    };
    let tr = commutator_twist(g, h, &r)?;
    let s = tr.signum();
    let k = h.inverse() * *g * *h;
    let beta_h = r.direction_to(&h.apply(&r)?);
    let beta_k = r.direction_to(&k.apply(&r)?);
    let alpha = (s * (beta_k - beta_h)).rem_euclid(TAU);
    let beta = wrap_pi(beta_h + s * (alpha / 2.0 + PI) - tr / 2.0);
    let eps0 = 0.1 * r.distance(&h.apply(&r)?);
    Ok((r, beta, eps0))
}

/// Tr[g,h] in (-2,2): perturb off the elliptic fixed point of [g^-1,h^-1].
pub fn case_elliptic(
    g: &Isometry,
    h: &Isometry,
    opts: &ConstructOptions,
) -> Result<ConstructionResult> {
    let (r, beta, eps0) = elliptic_direction(g, h)?;
    let try_dir = |b: f64| -> Option<ConstructionResult> {
        let mut eps = eps0;
        for _ in 0..=HALVING_BUDGET {
            if let Ok(p) = r.exp(b, eps) {
                if let Ok(res) = finish(CaseTag::Elliptic, MoveWord::new(), g, h, &p) {
                    return Some(res);
                }
            }
            eps /= 2.0;
        }
        None
    };
    if let Some(res) = try_dir(beta) {
        return Ok(res);
    }
    log::debug!("elliptic midpoint direction failed; scanning");
    // Deterministic scan, rotated by the seed.
    let n = 64;
    let shift = (opts.seed % n as u64) as usize;
    for j in 1..n {
        let k = (j + shift) % n;
        if k == 0 {
            continue;
        }
        if let Some(res) = try_dir(beta + TAU * k as f64 / n as f64) {
            return Ok(res);
        }
    }
    Err(failed("no simple pentagon near the elliptic fixed point"))
}

fn push_move(word: &mut MoveWord, m: BasisMove, g: &mut Isometry, h: &mut Isometry) {
    word.push(Step::Move(m));
    let (a, b) = m.apply_pair(g, h);
    *g = a;
    *h = b;
}

fn invert_g(word: &mut MoveWord, g: &mut Isometry, h: &mut Isometry) {
    push_move(word, BasisMove::SwapGH, g, h);
    push_move(word, BasisMove::InvertH, g, h);
    push_move(word, BasisMove::SwapGH, g, h);
}

/// Multiplier and translation of z -> (a z + b)/d when c vanishes.
fn affine_parts(m: &Isometry) -> (f64, f64) {
    (m.a() / m.d(), m.b() / m.d())
}

fn other_fixed_point(m: &Isometry, shared: &BoundaryPoint) -> Result<BoundaryPoint> {
    match m.fixed_points()? {
        FixedPoints::Hyperbolic {
            repulsive,
            attractive,
        } => Ok(
            if repulsive.det(shared).abs() > attractive.det(shared).abs() {
                repulsive
            } else {
                attractive
            },
        ),
        _ => Err(Error::NotHyperbolic),
    }
}

fn hyperbolic_ends(m: &Isometry) -> Result<[BoundaryPoint; 2]> {
    match m.fixed_points()? {
        FixedPoints::Hyperbolic {
            repulsive,
            attractive,
        } => Ok([repulsive, attractive]),
        _ => Err(Error::NotHyperbolic),
    }
}

/// Tr[g,h] = 2, not abelian: reach one of the two normal forms by swaps and inversions.
pub fn case_reducible(g: &Isometry, h: &Isometry) -> Result<ConstructionResult> {
    let is_par = |m: &Isometry| matches!(m.classify(), IsometryClass::Parabolic(_));
    let (mut g1, mut h1) = (*g, *h);
    let mut word = MoveWord::new();
    if is_par(&g1) || is_par(&h1) {
        if !is_par(&g1) {
            push_move(&mut word, BasisMove::SwapGH, &mut g1, &mut h1);
        }
        if !h1.is_hyperbolic() {
            return Err(failed("reducible pair without a hyperbolic generator"));
        }
        let xi = match g1.fixed_points()? {
            FixedPoints::Parabolic(b) => b,
            _ => return Err(failed("expected a parabolic generator")),
        };
        let eta = other_fixed_point(&h1, &xi)?;
        let c = Geodesic::new(eta, xi)?.normalizer();
        if affine_parts(&h1.conjugate_by(&c)).0 < 1.0 {
            push_move(&mut word, BasisMove::InvertH, &mut g1, &mut h1);
        }
        let (_, t) = affine_parts(&g1.conjugate_by(&c));
        if t < 0.0 {
            invert_g(&mut word, &mut g1, &mut h1);
        }
        let s = Isometry::dilation(1.0 / t.abs())?;
        let c = s * c;
        let p = c.inverse().apply(&PlanePoint::new(0.5, 1.0)?)?;
        return finish(CaseTag::ReducibleNonAbelian, word, &g1, &h1, &p);
    }
    if !g1.is_hyperbolic() || !h1.is_hyperbolic() {
        return Err(failed("reducible pair with an elliptic generator"));
    }
    for _ in 0..3 {
        let eg = hyperbolic_ends(&g1)?;
        let eh = hyperbolic_ends(&h1)?;
        let mut best = (f64::INFINITY, eg[0]);
        for a in &eg {
            for b in &eh {
                let d = a.det(b).abs();
                if d < best.0 {
                    best = (d, *a);
                }
            }
        }
        let xi = best.1;
        let c = Geodesic::new(other_fixed_point(&g1, &xi)?, xi)?.normalizer();
        if affine_parts(&g1.conjugate_by(&c)).0 < 1.0 {
            invert_g(&mut word, &mut g1, &mut h1);
        }
        if affine_parts(&h1.conjugate_by(&c)).0 < 1.0 {
            push_move(&mut word, BasisMove::InvertH, &mut g1, &mut h1);
        }
        let (e, f) = affine_parts(&h1.conjugate_by(&c));
        if f < 0.0 {
            push_move(&mut word, BasisMove::SwapGH, &mut g1, &mut h1);
            continue;
        }
        let c = Isometry::dilation(e / f)? * c;
        let p = c.inverse().apply(&PlanePoint::new(e / (1.0 - e), 1.0)?)?;
        return finish(CaseTag::ReducibleNonAbelian, word, &g1, &h1, &p);
    }
    Err(failed("hyperbolic/hyperbolic normal form not reached"))
}

/// Basepoint recipe for one of the three axis arrangements with all traces above 2.
pub fn hyp_pos_basepoint(g: &Isometry, h: &Isometry, case: HypPosCase) -> Result<PlanePoint> {
    let gh = *g * *h;
    let hg = *h * *g;
    let (a, b, to_p) = match case {
        HypPosCase::I => (gh.axis()?, hg.axis()?, (*g * *h).inverse()),
        HypPosCase::II => (g.axis()?, (h.inverse() * *g * *h).axis()?, h.inverse()),
        HypPosCase::III => (
            h.axis()?,
            (g.inverse() * *h * *g).axis()?,
            h.inverse() * g.inverse() * *h,
        ),
    };
    let r = a
        .intersection(&b)
        .ok_or_else(|| failed(format!("axes do not meet in case {case:?}")))?;
    to_p.apply(&r)
}

/// Geometric arrangement of the axes of g, h and gh when all three traces exceed 2.
pub fn hyp_pos_arrangement(g: &Isometry, h: &Isometry) -> Result<HypPosCase> {
    if cross_ratio(g, h)? > 1.0 {
        return Ok(HypPosCase::I);
    }
    let (ag, ah, agh) = (g.axis()?, h.axis()?, (*g * *h).axis()?);
    if ag.separates(&agh, &ah) {
        Ok(HypPosCase::II)
    } else if ah.separates(&agh, &ag) {
        Ok(HypPosCase::III)
    } else {
        Err(failed("axes of g, h, gh bound a common region"))
    }
}

/// Tr[g,h] > 2: normalize the character so all traces exceed 2, then use the explicit basepoints.
pub fn case_hyp_pos(g: &Isometry, h: &Isometry) -> Result<ConstructionResult> {
    let norm = markoff_normalize(&character_of(g, h))?;
    let (g1, h1) = apply_word(&norm.word, g, h);
    let (g1, h1) = (g1.with_nonnegative_trace(), h1.with_nonnegative_trace());
    let primary = hyp_pos_arrangement(&g1, &h1)?;
    let order = match primary {
        HypPosCase::I => [HypPosCase::I, HypPosCase::II, HypPosCase::III],
        HypPosCase::II => [HypPosCase::II, HypPosCase::III, HypPosCase::I],
        HypPosCase::III => [HypPosCase::III, HypPosCase::II, HypPosCase::I],
    };
    let mut errors = Vec::new();
    for case in order {
        let attempt = hyp_pos_basepoint(&g1, &h1, case)
            .and_then(|p| finish(CaseTag::HypPos(case), norm.word.clone(), &g1, &h1, &p));
        match attempt {
            Ok(r) => {
                if case != primary {
                    log::debug!("arrangement {primary:?} resolved by the recipe for {case:?}");
                }
                return Ok(r);
            }
            Err(e) => errors.push(format!("{case:?}: {e}")),
        }
    }
    Err(failed(format!(
        "no basepoint recipe succeeded ({})",
        errors.join("; ")
    )))
}
