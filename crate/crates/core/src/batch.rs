//! Many independent constructions or normalizations at once.
//!
//! With the `parallel` feature the plain functions spread work over the rayon pool.
//! The `_sequential` variants never spawn threads. Both return results in input order.

use crate::charvar::{markoff_normalize, CharacterTriple, Normalization};
use crate::construct::{construct, ConstructOptions, Outcome};
use crate::error::Result;
use crate::moebius::Isometry;

pub fn construct_all(
    pairs: &[(Isometry, Isometry)],
    opts: &ConstructOptions,
) -> Vec<Result<Outcome>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        pairs
            .par_iter()
            .map(|(g, h)| construct(g, h, opts))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        construct_all_sequential(pairs, opts)
    }
}

pub fn construct_all_sequential(
    pairs: &[(Isometry, Isometry)],
    opts: &ConstructOptions,
) -> Vec<Result<Outcome>> {
    pairs.iter().map(|(g, h)| construct(g, h, opts)).collect()
}

pub fn normalize_all(triples: &[CharacterTriple]) -> Vec<Result<Normalization>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        triples.par_iter().map(markoff_normalize).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        normalize_all_sequential(triples)
    }
}

pub fn normalize_all_sequential(triples: &[CharacterTriple]) -> Vec<Result<Normalization>> {
    triples.iter().map(markoff_normalize).collect()
}
