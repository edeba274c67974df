//! Finite dg category presentations: bases, differentials, compositions.

mod bimodule;
mod io;
mod presentation;
mod validate;

pub use bimodule::{quotient_check, trivial_extension, Bimodule, QuotientOptions};
pub use io::{parse_presentation, write_presentation, Metadata, PresentationFile};
pub use presentation::{BasisElement, CompositionTable, HomSpace, Presentation};
pub use validate::validate;

use std::collections::BTreeMap;

use crate::exactlin::LinAlgError;
use crate::report::DimTable;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("malformed presentation: {0}")]
    Shape(String),
    #[error("unit {0:?} is not a basis element of its endomorphism space")]
    UnknownUnit(String),
    #[error(transparent)]
    Scalar(#[from] LinAlgError),
    #[error("presentation is not directed: {0}")]
    NotDirected(String),
    #[error("dimension d = 0 is not supported")]
    ZeroDimension,
    #[error("object mismatch: {0}")]
    ObjectMismatch(String),
    #[error("object index {index} out of range for {len} objects")]
    IndexOutOfRange { index: usize, len: usize },
}

/// Cohomology dimensions of every `hom(i,j)`.
pub fn cohomology_table(p: &Presentation) -> BTreeMap<(usize, usize), DimTable> {
    use rayon::prelude::*;
    let l = p.len();
    let pairs: Vec<(usize, usize)> = (0..l).flat_map(|i| (0..l).map(move |j| (i, j))).collect();
    pairs.into_par_iter().map(|(i, j)| ((i, j), p.hom(i, j).cohomology_table(p.field()))).collect()
}
