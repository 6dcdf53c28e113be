//! Reading and validating the JSON input document.

use std::io::Read;
use std::path::Path;

use holonomy_core::{realize, CharacterTriple, Isometry, Model};
use serde::Deserialize;

use crate::Failure;

/// Largest allowed |det - 1| of an input matrix before it is rescaled.
pub const DET_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub offset: Option<f64>,
    pub depth: Option<usize>,
    pub model: Option<Model>,
    pub seed: Option<u64>,
    pub realize: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    g: Option<[[f64; 2]; 2]>,
    h: Option<[[f64; 2]; 2]>,
    x: Option<f64>,
    y: Option<f64>,
    z: Option<f64>,
    #[serde(default)]
    options: Options,
}

#[derive(Debug, Clone, Copy)]
pub enum Subject {
    Pair(Isometry, Isometry),
    Triple(CharacterTriple),
}

#[derive(Debug)]
pub struct Input {
    pub subject: Subject,
    pub options: Options,
}

impl Input {
    /// The matrix pair, realizing a triple only when asked to.
    pub fn pair(&self, realize_flag: bool) -> Result<(Isometry, Isometry), Failure> {
        match self.subject {
            Subject::Pair(g, h) => Ok((g, h)),
            Subject::Triple(t) if realize_flag || self.options.realize == Some(true) => {
                realize(&t).map_err(Failure::from)
            }
            Subject::Triple(_) => Err(Failure::Invalid(
                "this command needs matrices g and h; pass --realize to realize a triple".into(),
            )),
        }
    }
}

pub fn read(path: Option<&Path>) -> Result<Input, Failure> {
    let mut bytes = Vec::new();
    match path {
        Some(p) => {
            bytes = std::fs::read(p)
                .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", p.display())))?
        }
        None => {
            std::io::stdin()
                .read_to_end(&mut bytes)
                .map_err(|e| Failure::Invalid(format!("cannot read standard input: {e}")))?;
        }
    }
    parse(&bytes)
}

pub fn parse(bytes: &[u8]) -> Result<Input, Failure> {
    let doc: Document = serde_json::from_slice(bytes)
        .map_err(|e| Failure::Invalid(format!("malformed input: {e}")))?;
    let subject = match (doc.g, doc.h, doc.x, doc.y, doc.z) {
        (Some(g), Some(h), None, None, None) => Subject::Pair(matrix("g", g)?, matrix("h", h)?),
        (None, None, Some(x), Some(y), Some(z)) => Subject::Triple(CharacterTriple { x, y, z }),
        _ => {
            return Err(Failure::Invalid(
                "input must give either both matrices g and h or all of x, y, z".into(),
            ))
        }
    };
    Ok(Input {
        subject,
        options: doc.options,
    })
}

fn matrix(name: &str, m: [[f64; 2]; 2]) -> Result<Isometry, Failure> {
    let [[a, b], [c, d]] = m;
    let det = a * d - b * c;
    if !det.is_finite() || (det - 1.0).abs() > DET_TOLERANCE {
        return Err(Failure::Invalid(format!(
            "matrix {name} has determinant {det}, expected 1 within {DET_TOLERANCE}"
        )));
    }
    Isometry::new(a, b, c, d).map_err(|e| Failure::Invalid(format!("matrix {name}: {e}")))
}
