//! Protocol complexes of the iterated write/read model and their explicit
//! collapses onto the chromatic subdivision.
//!
//! * [`executions`]: wr-executions, view profiles, IS-executions and the
//!   families `E_l`.
//! * [`complexes`]: chromatic simplicial complexes, free faces, collapses,
//!   group actions and replayable collapse traces.
//! * [`protocol`]: `WR_l(Δⁿ)`, `χ(Δⁿ)`, the iterated complexes and the
//!   next-level membership test.
//! * [`collapse`]: the collapse sequences themselves.
//! * [`simulator`]: the layered immediate-snapshot algorithm under
//!   exhaustive, seeded and scripted schedulers.
//! * [`cli`]: the `wrcollapse` command line.

pub mod cli;
pub mod collapse;
pub mod complexes;
pub mod executions;
pub mod limits;
pub mod procset;
pub mod protocol;
pub mod simulator;

use thiserror::Error;

pub use collapse::{
    chromatic_collapse_lambda, chromatic_collapse_void, collapse_round, collapse_to_chromatic,
    equivariant_collapse_round, interval_decomposition, inv, iterated_collapse, sigma_minus_plus,
    CollapseError, IntervalDecomposition,
};
pub use complexes::{
    verify_trace, CollapseTrace, Complex, ComplexError, Node, Permutation, PermutationGroup,
    Simplex, Vertex,
};
pub use executions::{ExecutionError, IsExecution, Operation, ViewProfile, WrExecution};
pub use procset::{ProcSet, ProcessId};
pub use protocol::{build_iterated, build_wr, chromatic_standard, in_next_level, ProtocolError};
pub use simulator::{run, run_exhaustive, RunResult, Scheduler, SimulatorError};

/// Any error raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Execution(#[from] ExecutionError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Collapse(#[from] CollapseError),
    #[error(transparent)]
    Simulator(#[from] SimulatorError),
    #[error(transparent)]
    SizeBound(#[from] limits::SizeBoundExceeded),
}

impl Error {
    /// The request exceeded a size guard rather than being wrong.
    pub fn is_size_bound(&self) -> bool {
        matches!(
            self,
            Error::SizeBound(_)
                | Error::Execution(ExecutionError::DimensionTooLarge(_))
                | Error::Protocol(ProtocolError::DimensionTooLarge(_))
                | Error::Collapse(CollapseError::DimensionTooLarge(_))
                | Error::Simulator(SimulatorError::DimensionTooLarge(_))
        )
    }
}
