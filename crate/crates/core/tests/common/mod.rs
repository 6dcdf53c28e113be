//! Random samplers shared by the integration tests.
#![allow(dead_code)]

use holonomy_core::charvar::{BasisMove, KappaRegime, MoveWord, PairClass, SignChange, Step};
use holonomy_core::{classify_pair, realize, CharacterTriple, Isometry, PlanePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries uniform in [-3, 3], rescaled to determinant 1.
pub fn random_isometry(rng: &mut ChaCha8Rng) -> Isometry {
    loop {
        let e: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-3.0..3.0));
        if e[0] * e[3] - e[1] * e[2] > 1e-6 {
            if let Ok(m) = Isometry::new(e[0], e[1], e[2], e[3]) {
                return m;
            }
        }
    }
}

/// A conjugator of bounded distortion: entries in [-2, 2], det rescaled, norm capped.
pub fn random_conjugator(rng: &mut ChaCha8Rng) -> Isometry {
    loop {
        let m = random_isometry(rng);
        let [[a, b], [c, d]] = m.entries();
        if a * a + b * b + c * c + d * d < 12.0 {
            return m;
        }
    }
}

pub fn random_point(rng: &mut ChaCha8Rng) -> PlanePoint {
    PlanePoint::new(rng.gen_range(-3.0..3.0), rng.gen_range(-2.0f64..2.0).exp()).unwrap()
}

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let v = rng.gen_range(lo..hi);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

pub fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> MoveWord {
    let len = rng.gen_range(0..=max_len);
    let mut w = MoveWord::new();
    for _ in 0..len {
        w.push(match rng.gen_range(0..6) {
            0 => Step::Move(BasisMove::InvertH),
            1 => Step::Move(BasisMove::SwapGH),
            2 => Step::Move(BasisMove::MultRight),
            3 => Step::Sign(SignChange::NegateXY),
            4 => Step::Sign(SignChange::NegateXZ),
            _ => Step::Sign(SignChange::NegateYZ),
        });
    }
    w
}

pub fn random_triple(rng: &mut ChaCha8Rng, r: f64) -> CharacterTriple {
    CharacterTriple {
        x: rng.gen_range(-r..r),
        y: rng.gen_range(-r..r),
        z: rng.gen_range(-r..r),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    BelowMinus2,
    AtMinus2,
    Between,
    Reducible,
    Above2,
}

pub const REGIMES: [Regime; 5] = [
    Regime::BelowMinus2,
    Regime::AtMinus2,
    Regime::Between,
    Regime::Reducible,
    Regime::Above2,
];

/// Pair with Tr[g,h] = -2: a realized Markoff-type triple, conjugated.
pub fn cusp_pair(rng: &mut ChaCha8Rng) -> (Isometry, Isometry) {
    loop {
        let x = signed(rng, 3.0, 7.0);
        let y = signed(rng, 3.0, 7.0);
        let disc = x * x * y * y - 4.0 * (x * x + y * y);
        let root = if rng.gen_bool(0.5) {
            disc.sqrt()
        } else {
            -disc.sqrt()
        };
        let z = (x * y + root) / 2.0;
        let Ok((g, h)) = realize(&CharacterTriple { x, y, z }) else {
            continue;
        };
        let c = random_conjugator(rng);
        let (g, h) = (g.conjugate_by(&c), h.conjugate_by(&c));
        if classify_pair(&g, &h) == PairClass::Generic(KappaRegime::AtMinus2) {
            return (g, h);
        }
    }
}

/// Non-abelian pair with a common fixed point at infinity before conjugation.
pub fn reducible_pair(rng: &mut ChaCha8Rng) -> (Isometry, Isometry) {
    loop {
        let hyp = |rng: &mut ChaCha8Rng| {
            let a = rng.gen_range(1.2f64..4.0);
            let a = if rng.gen_bool(0.5) { a } else { 1.0 / a };
            Isometry::new(a, rng.gen_range(-3.0..3.0), 0.0, 1.0 / a).unwrap()
        };
        let (mut g, mut h) = if rng.gen_bool(0.5) {
            (Isometry::translation(signed(rng, 0.3, 3.0)), hyp(rng))
        } else {
            (hyp(rng), hyp(rng))
        };
        if rng.gen_bool(0.5) {
            std::mem::swap(&mut g, &mut h);
        }
        let c = random_conjugator(rng);
        let (g, h) = (g.conjugate_by(&c), h.conjugate_by(&c));
        if classify_pair(&g, &h) == PairClass::ReducibleNonAbelian {
            return (g, h);
        }
    }
}

/// Rejection sampling from uniform entries for the open regimes, constructive otherwise.
pub fn pair_in_regime(rng: &mut ChaCha8Rng, regime: Regime) -> (Isometry, Isometry) {
    let want = match regime {
        Regime::AtMinus2 => return cusp_pair(rng),
        Regime::Reducible => return reducible_pair(rng),
        Regime::BelowMinus2 => KappaRegime::BelowMinus2,
        Regime::Between => KappaRegime::Between,
        Regime::Above2 => KappaRegime::Above2,
    };
    loop {
        let (g, h) = (random_isometry(rng), random_isometry(rng));
        if classify_pair(&g, &h) == PairClass::Generic(want) {
            return (g, h);
        }
    }
}

/// Commuting pair: powers of one-parameter subgroups sharing their fixed points.
pub fn abelian_pair(rng: &mut ChaCha8Rng) -> (Isometry, Isometry) {
    let c = random_conjugator(rng);
    let (g, h) = match rng.gen_range(0..4) {
        0 => (
            Isometry::dilation(rng.gen_range(0.2..5.0)).unwrap(),
            Isometry::dilation(rng.gen_range(0.2..5.0)).unwrap(),
        ),
        1 => (
            Isometry::translation(signed(rng, 0.1, 3.0)),
            Isometry::translation(signed(rng, 0.1, 3.0)),
        ),
        2 => {
            let p = random_point(rng);
            (
                Isometry::rotation(&p, rng.gen_range(0.1..6.0)),
                Isometry::rotation(&p, rng.gen_range(0.1..6.0)),
            )
        }
        _ => (random_isometry(rng), Isometry::IDENTITY),
    };
    (g.conjugate_by(&c), h.conjugate_by(&c))
}

/// Half-turns about two distinct points, followed by a random change of basis.
pub fn v_pair(rng: &mut ChaCha8Rng) -> (Isometry, Isometry) {
    loop {
        let (q1, q2) = (random_point(rng), random_point(rng));
        if q1.distance(&q2) < 0.2 {
            continue;
        }
        let (a, b) = (Isometry::half_turn(&q1), Isometry::half_turn(&q2));
        let w = random_word(rng, 6);
        return holonomy_core::charvar::apply_word(&w, &a, &b);
    }
}

/// Plain 2x2 arithmetic, kept apart from the library so tests can cross-check it.
pub mod oracle {
    use holonomy_core::Isometry;
    use num_complex::Complex64;

    pub type M = [[f64; 2]; 2];

    pub fn m(i: &Isometry) -> M {
        i.entries()
    }

    pub fn mul(a: &M, b: &M) -> M {
        [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ]
    }

    pub fn inv(a: &M) -> M {
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        [
            [a[1][1] / det, -a[0][1] / det],
            [-a[1][0] / det, a[0][0] / det],
        ]
    }

    pub fn tr(a: &M) -> f64 {
        a[0][0] + a[1][1]
    }

    pub fn commutator_trace(g: &M, h: &M) -> f64 {
        tr(&mul(&mul(g, h), &mul(&inv(g), &inv(h))))
    }

    pub fn apply(a: &M, z: Complex64) -> Complex64 {
        (z * a[0][0] + a[0][1]) / (z * a[1][0] + a[1][1])
    }

    /// Boundary fixed points of a hyperbolic matrix as (repelling, attracting); None stands for infinity.
    pub fn fixed(a: &M) -> (Option<f64>, Option<f64>) {
        let [[p, q], [r, s]] = *a;
        let t = p + s;
        let disc = (t * t - 4.0).sqrt();
        if r == 0.0 {
            // z -> (p z + q)/s: infinity attracts iff |p| > |s|.
            let finite = Some(q / (s - p));
            return if p.abs() > s.abs() {
                (finite, None)
            } else {
                (None, finite)
            };
        }
        let z1 = ((p - s) + disc) / (2.0 * r);
        let z2 = ((p - s) - disc) / (2.0 * r);
        // Derivative at a fixed point is 1/(r z + s)^2; attracting when |r z + s| > 1.
        if (r * z1 + s).abs() > 1.0 {
            (Some(z2), Some(z1))
        } else {
            (Some(z1), Some(z2))
        }
    }

    /// (r_g - a_h)(a_g - r_h) / ((r_g - r_h)(a_g - a_h)) for finite fixed points.
    pub fn cross_ratio(g: &M, h: &M) -> Option<f64> {
        let (Some(rg), Some(ag)) = fixed(g) else {
            return None;
        };
        let (Some(rh), Some(ah)) = fixed(h) else {
            return None;
        };
        Some((rg - ah) * (ag - rh) / ((rg - rh) * (ag - ah)))
    }

    /// Whether the chords between the two pairs of boundary points interleave on the real line.
    pub fn interleaved(a: (f64, f64), b: (f64, f64)) -> bool {
        let inside = |x: f64| x > a.0.min(a.1) && x < a.0.max(a.1);
        inside(b.0) != inside(b.1)
    }

    pub fn word(letters: &str, g: &M, h: &M) -> M {
        letters.chars().fold([[1.0, 0.0], [0.0, 1.0]], |acc, c| {
            let f = match c {
                'g' => *g,
                'G' => inv(g),
                'h' => *h,
                'H' => inv(h),
                _ => [[1.0, 0.0], [0.0, 1.0]],
            };
            mul(&acc, &f)
        })
    }
}
