//! Structure transformations that preserve what formulas say, a harness to
//! test such equivalences over a finite formula family, and a seeded
//! generator of random structures.

mod copies;
mod equivalence;
mod family;
mod generator;
mod labels;
mod project;
mod search;

use thiserror::Error;

use crate::model::ModelError;
use crate::semantics::EvalError;

pub use copies::disjoint_copies;
pub use equivalence::{
    check_equivalent, check_equivalent_on, EquivalenceVerdict, EquivalenceWitness, PairPoint, Pairing, PairingFile,
};
pub use family::{formula_family, mentions_knowledge, reads_viewpoint, THRESHOLDS};
pub use generator::{random_structure, GeneratorConfig, LabelAmbiguity};
pub use labels::add_cell_labels;
pub use project::project_outermost;
pub use search::{farey_priors, search_cpa_equivalent, set_partitions, SearchBounds, SearchReport};

#[derive(Debug, Error)]
pub enum TransformError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("invalid generator configuration: {0}")]
    Config(String),
    #[error("invalid pairing: {0}")]
    Pairing(String),
}
