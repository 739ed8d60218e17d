//! Protocol complexes `WR_l(Δⁿ)`, the chromatic subdivision, iterated
//! complexes with carrier maps, the matrix form of a simplex, and the
//! membership test for the next level.

mod matrix;
mod tower;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::complexes::{Complex, ComplexError, Simplex, Vertex};
use crate::executions::{self, ExecutionError, ViewProfile};
use crate::limits::{self, SizeBoundExceeded};
use crate::procset::{ProcSet, ProcessId};

pub use matrix::{matrix_form, MatrixForm};
pub use tower::{
    build_iterated, chromatic_iterated, chromatic_of, wr_of, IteratedComplex, NodeInfo,
    Subdivision, Tower,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    DimensionTooLarge(#[from] SizeBoundExceeded),
    #[error("level {l} is outside 0..={max}")]
    InvalidLevel { l: usize, max: usize },
    #[error("{0} admits no matrix form")]
    NotAProtocolSimplex(String),
    #[error("the complex is not chromatic: {0}")]
    NonChromaticComplex(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Execution(ExecutionError),
}

impl From<ExecutionError> for ProtocolError {
    fn from(e: ExecutionError) -> Self {
        match e {
            ExecutionError::DimensionTooLarge(b) => ProtocolError::DimensionTooLarge(b),
            other => ProtocolError::Execution(other),
        }
    }
}

/// `WR_l(Δⁿ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WrComplex {
    pub n: usize,
    pub l: usize,
    pub complex: Complex<Vertex>,
}

/// The simplex `{(i, view_i)}` of a view profile.
pub fn profile_simplex(p: &ViewProfile) -> Simplex<Vertex> {
    p.iter().map(|(i, v)| Vertex::new(i, v)).collect()
}

/// The view profile of a chromatic simplex.
pub fn simplex_profile(s: &Simplex<Vertex>) -> ViewProfile {
    s.iter().map(|v| (v.process, v.view)).collect()
}

/// `Id(σ)`: the colors of `σ`.
pub fn ids(s: &Simplex<Vertex>) -> ProcSet {
    s.colors()
}

/// The complex of sub-profiles of `E_l`.
pub fn build_wr(n: usize, l: usize) -> Result<WrComplex, ProtocolError> {
    limits::check_n(n)?;
    if l > n {
        return Err(ProtocolError::InvalidLevel { l, max: n });
    }
    let family = executions::enumerate_view_family(n, l)?;
    let complex = Complex::closure(n, family.iter().map(profile_simplex))?;
    Ok(WrComplex { n, l, complex })
}

/// The decomposition of a simplex of `WR_k` used by the membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaParts {
    /// `σ_k^<`: vertices with `|view| < n + 1 - k`.
    pub less: Simplex<Vertex>,
    /// `σ_k^=`: vertices with `|view| = n + 1 - k`.
    pub equal: Simplex<Vertex>,
    /// `I^<`: union of the views in `σ_k^<`.
    pub i_less: ProcSet,
    /// `I`: union of the views in `σ_k = σ_k^< ∪ σ_k^=`.
    pub i_all: ProcSet,
}

impl SigmaParts {
    /// `σ_k`.
    pub fn lower(&self) -> Simplex<Vertex> {
        self.less.union(&self.equal)
    }
}

fn view_union(s: &Simplex<Vertex>) -> ProcSet {
    s.iter().fold(ProcSet::EMPTY, |acc, v| acc.union(v.view))
}

pub fn sigma_parts(s: &Simplex<Vertex>, n: usize, k: usize) -> SigmaParts {
    let bound = (n + 1).saturating_sub(k);
    let less: Simplex<Vertex> = s.iter().filter(|v| v.view.len() < bound).collect();
    let equal: Simplex<Vertex> = s.iter().filter(|v| v.view.len() == bound).collect();
    let i_less = view_union(&less);
    let i_all = i_less.union(view_union(&equal));
    SigmaParts {
        less,
        equal,
        i_less,
        i_all,
    }
}

/// For `σ ∈ WR_l`: `σ ∈ WR_{l+1}` iff `I^< ∩ Id(σ_l^=) = ∅` and
/// `|I^<| < n + 1 - l`.
pub fn in_next_level(s: &Simplex<Vertex>, n: usize, l: usize) -> bool {
    let parts = sigma_parts(s, n, l);
    parts.i_less.is_disjoint(ids(&parts.equal)) && parts.i_less.len() < n + 1 - l
}

/// Ordered set partitions of `set`, each as its sequence of blocks.
pub fn ordered_partitions(set: ProcSet) -> Vec<Vec<ProcSet>> {
    if set.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in set.subsets().filter(|b| !b.is_empty()) {
        for mut rest in ordered_partitions(set.difference(first)) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The immediate-snapshot profile of an ordered partition: a process in
/// block `j` sees blocks `1..=j`.
pub fn partition_profile(blocks: &[ProcSet]) -> ViewProfile {
    let mut seen = ProcSet::EMPTY;
    let mut out = ViewProfile::new();
    for &b in blocks {
        seen = seen.union(b);
        for i in b.iter() {
            out.insert(i, seen);
        }
    }
    out
}

/// `χ(Δ^S)` on the colors `S`, with absolute views.
pub fn chromatic_on(n: usize, colors: ProcSet) -> Complex<Vertex> {
    let maximal: Vec<Simplex<Vertex>> = ordered_partitions(colors)
        .iter()
        .map(|blocks| profile_simplex(&partition_profile(blocks)))
        .collect();
    Complex::closure(n, maximal).expect("partition profiles are chromatic")
}

/// `χ(Δⁿ)` through ordered set partitions of `[n]`.
pub fn chromatic_standard(n: usize) -> Result<Complex<Vertex>, ProtocolError> {
    limits::check_n(n)?;
    Ok(chromatic_on(n, ProcSet::full(n)))
}

/// `χ(Λ_pⁿ)`: the subdivision of `Δⁿ` minus the open star of the facet
/// opposite `p`, i.e. the union of `χ` over the facets containing `p`.
pub fn chromatic_lambda(n: usize, p: ProcessId) -> Result<Complex<Vertex>, ProtocolError> {
    limits::check_n(n)?;
    let full = ProcSet::full(n);
    let mut maximal = Vec::new();
    for q in full.iter().filter(|&q| q != p) {
        maximal.extend(chromatic_on(n, full.without(q)).maximal().cloned());
    }
    // For n = 0 the removed facet is the empty face and nothing survives.
    Ok(Complex::closure(n, maximal)?)
}

/// The standard simplex `Δⁿ` with vertices `(i, {i})`.
pub fn standard_simplex(n: usize) -> Complex<Vertex> {
    let s: Simplex<Vertex> = (0..=n as ProcessId)
        .map(|i| Vertex::new(i, ProcSet::singleton(i)))
        .collect();
    Complex::closure(n, [s]).expect("distinct colors")
}

/// The snapshot subcomplex of `WR(Δⁿ)`: simplices whose views form a chain.
pub fn snapshot_subcomplex(wr: &WrComplex) -> Complex<Vertex> {
    let chains: BTreeSet<Simplex<Vertex>> = wr
        .complex
        .simplices()
        .into_iter()
        .filter(|s| {
            s.iter().all(|a| {
                s.iter()
                    .all(|b| a.view.is_subset(b.view) || b.view.is_subset(a.view))
            })
        })
        .collect();
    Complex::closure(wr.n, chains).expect("faces of a chromatic complex")
}
