//! Holonomies of once-punctured tori: classification, Markoff normalization,
//! pentagon constructions and SVG rendering.
//!
//! Isometries of the hyperbolic plane act on the upper half-plane as elements of PSL(2,R).
//! Given a pair (g, h), [`construct::construct`] either produces a basepoint whose
//! pentagon glues up to a one-holed torus with holonomy (g, h), or reports that the
//! pair cannot be such a holonomy.

pub mod batch;
pub mod charvar;
pub mod construct;
pub mod cover;
pub mod error;
pub mod moebius;
pub mod pentagon;
pub mod render;

pub use charvar::{
    character_of, classify_pair, kappa, markoff_normalize, realize, CharacterTriple, KappaRegime,
    MoveWord, Normalization, PairClass,
};
pub use construct::{
    construct, CaseTag, ConstructOptions, ConstructionResult, NotHolonomy, Outcome,
};
pub use cover::{classify_commutator, commutator_twist, twist_mod_2pi, CoverRegion, Lift};
pub use error::{Error, ErrorKind, Result};
pub use moebius::{BoundaryPoint, Geodesic, Isometry, IsometryClass, PlanePoint};
pub use pentagon::{build_pentagon, corner_angle, Orientation, Pentagon};
pub use render::{render_developing, render_pentagon, Model, Scene};
