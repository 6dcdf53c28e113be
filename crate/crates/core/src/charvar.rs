//! Character triples, basis-change moves and the greedy normalization of triples with kappa > 2.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::{commutator, Isometry, EPS_TR};

/// Safety cap on greedy iterations; termination is guaranteed mathematically.
pub const ITERATION_CAP: usize = 1_000_000;

/// (tr g, tr h, tr gh) for some SL(2,R) lift.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterTriple {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CharacterTriple {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        CharacterTriple { x, y, z }
    }

    pub fn kappa(&self) -> f64 {
        kappa(self)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        CharacterTriple::new(a[0], a[1], a[2])
    }

    /// Equality up to reordering coordinates.
    pub fn approx_eq_unordered(&self, o: &CharacterTriple, tol: f64) -> bool {
        let mut a = self.to_array();
        let mut b = o.to_array();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        a.iter().zip(&b).all(|(p, q)| (p - q).abs() <= tol)
    }

    /// Equality up to negating two coordinates.
    pub fn approx_eq_up_to_sign(&self, o: &CharacterTriple, tol: f64) -> bool {
        [
            (1.0, 1.0, 1.0),
            (-1.0, -1.0, 1.0),
            (-1.0, 1.0, -1.0),
            (1.0, -1.0, -1.0),
        ]
        .iter()
        .any(|&(sx, sy, sz)| {
            (self.x - sx * o.x).abs() <= tol
                && (self.y - sy * o.y).abs() <= tol
                && (self.z - sz * o.z).abs() <= tol
        })
    }
}

impl fmt::Display for CharacterTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

pub fn kappa(t: &CharacterTriple) -> f64 {
    t.x * t.x + t.y * t.y + t.z * t.z - t.x * t.y * t.z - 2.0
}

pub fn character_of(g: &Isometry, h: &Isometry) -> CharacterTriple {
    CharacterTriple::new(g.trace(), h.trace(), (*g * *h).trace())
}

pub fn in_character_variety(t: &CharacterTriple) -> bool {
    kappa(t) >= 2.0 - EPS_TR || t.x.abs().max(t.y.abs()).max(t.z.abs()) >= 2.0 - EPS_TR
}

pub fn in_v(t: &CharacterTriple) -> bool {
    let c = t.to_array();
    let zeros = c.iter().filter(|v| v.abs() <= EPS_TR).count();
    zeros == 2 && c.iter().any(|v| v.abs() > 2.0 + EPS_TR)
}

pub fn is_reducible(t: &CharacterTriple) -> bool {
    (kappa(t) - 2.0).abs() <= EPS_TR
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KappaRegime {
    BelowMinus2,
    AtMinus2,
    Between,
    Above2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairClass {
    Abelian,
    VirtuallyAbelianNonAbelian,
    ReducibleNonAbelian,
    Generic(KappaRegime),
}

impl PairClass {
    pub fn name(&self) -> &'static str {
        match self {
            PairClass::Abelian => "Abelian",
            PairClass::VirtuallyAbelianNonAbelian => "VirtuallyAbelian",
            PairClass::ReducibleNonAbelian => "Reducible",
            PairClass::Generic(KappaRegime::BelowMinus2) => "BelowMinus2",
            PairClass::Generic(KappaRegime::AtMinus2) => "AtMinus2",
            PairClass::Generic(KappaRegime::Between) => "Between",
            PairClass::Generic(KappaRegime::Above2) => "Above2",
        }
    }
}

/// Tolerance for the commutator being the identity, scaled by the size of the entries.
pub fn abelian_tolerance(g: &Isometry, h: &Isometry) -> f64 {
    let size = |m: &Isometry| {
        m.entries()
            .iter()
            .flatten()
            .fold(1.0f64, |acc, v| acc.max(v.abs()))
    };
    EPS_TR * (size(g) * size(h)).powi(2)
}

pub fn is_abelian(g: &Isometry, h: &Isometry) -> bool {
    commutator(g, h).is_identity(abelian_tolerance(g, h))
}

pub fn classify_pair(g: &Isometry, h: &Isometry) -> PairClass {
    if is_abelian(g, h) {
        return PairClass::Abelian;
    }
    let t = character_of(g, h);
    if in_v(&t) {
        return PairClass::VirtuallyAbelianNonAbelian;
    }
    let k = kappa(&t);
    if (k - 2.0).abs() <= EPS_TR {
        PairClass::ReducibleNonAbelian
    } else if k > 2.0 {
        PairClass::Generic(KappaRegime::Above2)
    } else if (k + 2.0).abs() <= EPS_TR {
        PairClass::Generic(KappaRegime::AtMinus2)
    } else if k < -2.0 {
        PairClass::Generic(KappaRegime::BelowMinus2)
    } else {
        PairClass::Generic(KappaRegime::Between)
    }
}

/// Elementary free-basis changes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisMove {
    /// (G,H) -> (G,H^-1); (x,y,z) -> (x,y,xy-z).
    InvertH,
    /// (G,H) -> (H,G); (x,y,z) -> (y,x,z).
    SwapGH,
    /// (G,H) -> (G,GH); (x,y,z) -> (x,z,xz-y).
    MultRight,
}

impl BasisMove {
    pub fn apply_triple(&self, t: &CharacterTriple) -> CharacterTriple {
        let CharacterTriple { x, y, z } = *t;
        match self {
            BasisMove::InvertH => CharacterTriple::new(x, y, x * y - z),
            BasisMove::SwapGH => CharacterTriple::new(y, x, z),
            BasisMove::MultRight => CharacterTriple::new(x, z, x * z - y),
        }
    }

    pub fn apply_pair(&self, g: &Isometry, h: &Isometry) -> (Isometry, Isometry) {
        match self {
            BasisMove::InvertH => (*g, h.inverse()),
            BasisMove::SwapGH => (*h, *g),
            BasisMove::MultRight => (*g, *g * *h),
        }
    }

    pub fn preserves_orientation(&self) -> bool {
        matches!(self, BasisMove::MultRight)
    }

    pub fn name(&self) -> &'static str {
        match self {
            BasisMove::InvertH => "InvertH",
            BasisMove::SwapGH => "SwapGH",
            BasisMove::MultRight => "MultRight",
        }
    }
}

/// Negation of two trace coordinates; changes SL(2,R) lifts only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SignChange {
    /// (-x,-y,z): negate both g and h.
    NegateXY,
    /// (-x,y,-z): negate g.
    NegateXZ,
    /// (x,-y,-z): negate h.
    NegateYZ,
}

impl SignChange {
    pub fn apply_triple(&self, t: &CharacterTriple) -> CharacterTriple {
        let CharacterTriple { x, y, z } = *t;
        match self {
            SignChange::NegateXY => CharacterTriple::new(-x, -y, z),
            SignChange::NegateXZ => CharacterTriple::new(-x, y, -z),
            SignChange::NegateYZ => CharacterTriple::new(x, -y, -z),
        }
    }

    pub fn apply_pair(&self, g: &Isometry, h: &Isometry) -> (Isometry, Isometry) {
        match self {
            SignChange::NegateXY => (g.negated(), h.negated()),
            SignChange::NegateXZ => (g.negated(), *h),
            SignChange::NegateYZ => (*g, h.negated()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SignChange::NegateXY => "NegateXY",
            SignChange::NegateXZ => "NegateXZ",
            SignChange::NegateYZ => "NegateYZ",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    Move(BasisMove),
    Sign(SignChange),
}

impl Step {
    pub fn apply_triple(&self, t: &CharacterTriple) -> CharacterTriple {
        match self {
            Step::Move(m) => m.apply_triple(t),
            Step::Sign(s) => s.apply_triple(t),
        }
    }

    pub fn apply_pair(&self, g: &Isometry, h: &Isometry) -> (Isometry, Isometry) {
        match self {
            Step::Move(m) => m.apply_pair(g, h),
            Step::Sign(s) => s.apply_pair(g, h),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Step::Move(m) => m.name(),
            Step::Sign(s) => s.name(),
        }
    }
}

/// Triple-level operations, each compiled to elementary steps by one fixed table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleOp {
    SwapXY,
    SwapYZ,
    SwapXZ,
    /// z -> xy - z.
    MarkoffZ,
    /// x -> yz - x.
    MarkoffX,
    Sign(SignChange),
}

impl TripleOp {
    pub fn compile(&self) -> Vec<Step> {
        use BasisMove::*;
        match self {
            TripleOp::SwapXY => vec![Step::Move(SwapGH)],
            TripleOp::SwapYZ => vec![Step::Move(MultRight), Step::Move(InvertH)],
            TripleOp::SwapXZ => [TripleOp::SwapXY, TripleOp::SwapYZ, TripleOp::SwapXY]
                .iter()
                .flat_map(|op| op.compile())
                .collect(),
            TripleOp::MarkoffZ => vec![Step::Move(InvertH)],
            TripleOp::MarkoffX => [TripleOp::SwapXZ, TripleOp::MarkoffZ, TripleOp::SwapXZ]
                .iter()
                .flat_map(|op| op.compile())
                .collect(),
            TripleOp::Sign(s) => vec![Step::Sign(*s)],
        }
    }
}

/// An ordered sequence of basis moves and sign changes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveWord {
    steps: Vec<Step>,
}

impl MoveWord {
    pub fn new() -> Self {
        MoveWord::default()
    }

    pub fn from_steps(steps: Vec<Step>) -> Self {
        MoveWord { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, s: Step) {
        self.steps.push(s);
    }

    pub fn push_op(&mut self, op: TripleOp) {
        self.steps.extend(op.compile());
    }

    pub fn extend(&mut self, o: &MoveWord) {
        self.steps.extend_from_slice(&o.steps);
    }

    pub fn moves(&self) -> impl Iterator<Item = BasisMove> + '_ {
        self.steps.iter().filter_map(|s| match s {
            Step::Move(m) => Some(*m),
            Step::Sign(_) => None,
        })
    }

    pub fn sign_changes(&self) -> impl Iterator<Item = SignChange> + '_ {
        self.steps.iter().filter_map(|s| match s {
            Step::Sign(c) => Some(*c),
            Step::Move(_) => None,
        })
    }

    pub fn preserves_orientation(&self) -> bool {
        self.moves().filter(|m| !m.preserves_orientation()).count() % 2 == 0
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.steps.iter().map(Step::name).collect()
    }

    pub fn apply_triple(&self, t: &CharacterTriple) -> CharacterTriple {
        self.steps.iter().fold(*t, |acc, s| s.apply_triple(&acc))
    }

    pub fn apply_pair(&self, g: &Isometry, h: &Isometry) -> (Isometry, Isometry) {
        self.steps
            .iter()
            .fold((*g, *h), |(a, b), s| s.apply_pair(&a, &b))
    }
}

pub fn apply_word(w: &MoveWord, g: &Isometry, h: &Isometry) -> (Isometry, Isometry) {
    w.apply_pair(g, h)
}

/// Regions of the greedy descent, for a sorted and sign-normalized triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
}

/// Region of a triple with |x| <= |y| <= |z| and y, z >= 0; boundaries within EPS_TR are closed.
pub fn region_of(t: &CharacterTriple) -> Region {
    let big = |v: f64| v > 2.0 + EPS_TR;
    let CharacterTriple { x, y, z } = *t;
    if big(x) {
        Region::R1
    } else if x < -2.0 - EPS_TR {
        Region::R2
    } else if big(y) {
        Region::R3
    } else if big(z) {
        if x >= 0.0 {
            Region::R4
        } else {
            Region::R5
        }
    } else if x >= 0.0 {
        Region::R6
    } else {
        Region::R7
    }
}

/// One recorded iteration of the greedy descent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreedyStep {
    pub region: Region,
    pub before: CharacterTriple,
    pub after: CharacterTriple,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub output: CharacterTriple,
    pub word: MoveWord,
    pub iterations: usize,
    pub trace: Vec<GreedyStep>,
}

/// Sorts by absolute value (stable, ties keep index order) and makes y, z nonnegative.
fn canonicalize(t: CharacterTriple, word: &mut MoveWord) -> CharacterTriple {
    let mut cur = t;
    let mut apply = |op: TripleOp, cur: &mut CharacterTriple| {
        for s in op.compile() {
            *cur = s.apply_triple(cur);
            word.push(s);
        }
    };
    // Three-element stable insertion sort expressed as coordinate swaps.
    if cur.y.abs() < cur.x.abs() {
        apply(TripleOp::SwapXY, &mut cur);
    }
    if cur.z.abs() < cur.y.abs() {
        apply(TripleOp::SwapYZ, &mut cur);
        if cur.y.abs() < cur.x.abs() {
            apply(TripleOp::SwapXY, &mut cur);
        }
    }
    match (cur.y < 0.0, cur.z < 0.0) {
        (true, true) => apply(TripleOp::Sign(SignChange::NegateYZ), &mut cur),
        (true, false) => apply(TripleOp::Sign(SignChange::NegateXY), &mut cur),
        (false, true) => apply(TripleOp::Sign(SignChange::NegateXZ), &mut cur),
        (false, false) => {}
    }
    cur
}

/// Greedy descent to a triple with every coordinate above 2.
///
/// Each iteration sorts by absolute value, normalizes signs and replaces the
/// smallest coordinate x by yz - x. The returned word replays input to output.
pub fn markoff_normalize(t: &CharacterTriple) -> Result<Normalization> {
    if in_v(t) {
        return Err(Error::InV);
    }
    let k = kappa(t);
    if k.is_nan() || k <= 2.0 + EPS_TR {
        return Err(Error::KappaTooSmall(k));
    }
    let mut word = MoveWord::new();
    let mut cur = *t;
    let mut trace = Vec::new();
    let done = |c: &CharacterTriple| c.to_array().iter().all(|&v| v > 2.0 + EPS_TR);
    let mut iterations = 0;
    while !done(&cur) {
        if iterations >= ITERATION_CAP {
            return Err(Error::IterationCap(ITERATION_CAP));
        }
        if !cur.to_array().iter().all(|v| v.is_finite()) {
            return Err(Error::NumericOverflow("markoff_normalize"));
        }
        cur = canonicalize(cur, &mut word);
        let region = region_of(&cur);
        if region == Region::R1 {
            break;
        }
        let before = cur;
        for s in TripleOp::MarkoffX.compile() {
            cur = s.apply_triple(&cur);
            word.push(s);
        }
        trace.push(GreedyStep {
            region,
            before,
            after: cur,
        });
        iterations += 1;
    }
    Ok(Normalization {
        output: cur,
        word,
        iterations,
        trace,
    })
}

/// A pair of matrices realizing a triple in the character variety.
pub fn realize(t: &CharacterTriple) -> Result<(Isometry, Isometry)> {
    if !t.to_array().iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidMatrix("non-finite triple".into()));
    }
    if !in_character_variety(t) {
        return Err(Error::InvalidMatrix(format!(
            "{t} is not in the character variety"
        )));
    }
    let CharacterTriple { x, y, z } = *t;
    if let Some(p) = realize_with_first(x, y, z) {
        return Ok(p);
    }
    // (g,h) realizing (x,y,z) from (g1,h1) realizing (y,z,x): g = (g1 h1)^-1, h = g1.
    if let Some((g1, h1)) = realize_with_first(y, z, x) {
        return Ok(((g1 * h1).inverse(), g1));
    }
    if let Some((g2, h2)) = realize_with_first(z, x, y) {
        let (g1, h1) = ((g2 * h2).inverse(), g2);
        return Ok(((g1 * h1).inverse(), g1));
    }
    Err(Error::InvalidMatrix(format!("could not realize {t}")))
}

/// g = [[x,1],[-1,0]], h = [[a,b],[c,y-a]] with tr gh = z and det h = 1.
fn realize_with_first(x: f64, y: f64, z: f64) -> Option<(Isometry, Isometry)> {
    let lead = x * x - 4.0;
    let lin = 4.0 * y - 2.0 * x * z;
    let disc = |a: f64| lead * a * a + lin * a + z * z - 4.0;
    let a = if lead.abs() < 1e-12 {
        if lin.abs() < 1e-12 {
            0.0
        } else {
            // Linear discriminant: move to where it equals 1.
            (1.0 - (z * z - 4.0)) / lin
        }
    } else {
        let a0 = -lin / (2.0 * lead);
        if lead > 0.0 {
            a0 + ((disc(a0).min(0.0).abs() + 1.0) / lead).sqrt()
        } else {
            a0
        }
    };
    let d = disc(a);
    if d < -1e-9 * (1.0 + z * z) {
        return None;
    }
    let p = z - x * a;
    let b = (-p + d.max(0.0).sqrt()) / 2.0;
    let c = z - x * a + b;
    let g = Isometry::new(x, 1.0, -1.0, 0.0).ok()?;
    let h = Isometry::new(a, b, c, y - a).ok()?;
    let got = character_of(&g, &h);
    let tol = 1e-7 * (1.0 + x.abs() + y.abs() + z.abs()).powi(2);
    got.approx_eq_up_to_sign(&CharacterTriple::new(x, y, z), tol)
        .then_some((g, h))
}
