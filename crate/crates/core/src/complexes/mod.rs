//! Chromatic simplicial complexes, permutation actions, free faces,
//! collapses, G-collapses, and replayable collapse traces.

mod complex;
pub mod export;
mod group;
mod simplex;
mod trace;

use thiserror::Error;

pub use complex::{Census, Complex};
pub use group::{Permutation, PermutationGroup};
pub use simplex::{Label, Node, Simplex, Vertex};
pub use trace::{verify_trace, CollapseStep, CollapseTrace, TraceBuilder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("simplex {0} repeats a color")]
    NonChromaticSimplex(String),
    #[error("simplex {0} is not in the complex")]
    NotInComplex(String),
    #[error("simplex {0} is not free")]
    NotFree(String),
    #[error("simplex {0} is not free for the group action")]
    NotGFree(String),
    #[error("the complex is not invariant under the group")]
    ComplexNotInvariant,
    #[error("the void complex has no Euler characteristic")]
    VoidComplex,
    #[error("image table {0:?} is not a permutation")]
    InvalidPermutation(Vec<u8>),
    #[error("vertices of {0} carry no permutation action")]
    NoGroupAction(String),
    #[error("step {step}: {detail}")]
    StepNotFree { step: usize, detail: String },
    #[error("step {step}: orbit intervals overlap ({detail})")]
    OrbitOverlap { step: usize, detail: String },
    #[error("step {step}: recorded removal differs from the interval")]
    IntervalMismatch { step: usize },
    #[error("step {step}: witness permutations do not map the free face onto the orbit")]
    WitnessMismatch { step: usize },
    #[error("after {step} steps the complex differs from the recorded target")]
    WrongResidual { step: usize },
    #[error("cannot export: {0}")]
    ExportUnsupported(String),
}
