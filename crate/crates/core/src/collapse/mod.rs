//! Explicit collapse sequences: `WR_l ↘ WR_{l+1}` (plain and equivariant),
//! `χ(Δⁿ) ↘ void`, `χ(Δⁿ) ↘ χ(Λ_pⁿ)` and `WR^(k)(Δⁿ) ↘ χ^(k)(Δⁿ)`.
//!
//! Nothing here searches for collapses. Every step is the one prescribed by
//! the construction, and the trace builder rejects it if it is not free.

mod chromatic;
mod iterated;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexes::{
    Complex, ComplexError, CollapseTrace, Permutation, PermutationGroup, Simplex, Vertex,
};
use crate::limits::SizeBoundExceeded;
use crate::protocol::{self, in_next_level, sigma_parts, ids, ProtocolError};

pub use chromatic::{chromatic_collapse_lambda, chromatic_collapse_void, chromatic_void_faces};
pub use iterated::{iterated_collapse, IteratedTrace};

pub const PHASE_ROUND: &str = "round";
pub const PHASE_VOID: &str = "void";
pub const PHASE_LAMBDA: [&str; 3] = ["lambda-corner", "lambda-center", "lambda-fronts"];
pub const PHASE_ITERATED_ROUNDS: &str = "iterated-rounds";
pub const PHASE_ITERATED_CHROMATIC: &str = "iterated-chromatic";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollapseError {
    #[error("{0} already lies in the next level")]
    AlreadyInNextLevel(String),
    #[error(transparent)]
    DimensionTooLarge(#[from] SizeBoundExceeded),
    #[error("level {l} is outside 0..{n}")]
    InvalidLevel { l: usize, n: usize },
    #[error("process {p} is not in [{n}]")]
    InvalidProcess { p: u8, n: usize },
    #[error("{phase} still had candidates after {steps} iterations")]
    StageDidNotEmpty { phase: String, steps: usize },
    #[error("construction invariant failed: {0}")]
    Invariant(String),
    #[error(transparent)]
    Protocol(ProtocolError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

impl From<ProtocolError> for CollapseError {
    fn from(e: ProtocolError) -> Self {
        match e {
            ProtocolError::DimensionTooLarge(b) => CollapseError::DimensionTooLarge(b),
            ProtocolError::Complex(c) => CollapseError::Complex(c),
            other => CollapseError::Protocol(other),
        }
    }
}

fn invariant(ok: bool, what: impl FnOnce() -> String) -> Result<(), CollapseError> {
    if ok {
        Ok(())
    } else {
        Err(CollapseError::Invariant(what()))
    }
}

/// The two-branch vertex set `inv(σ)` at level `l`, without checking that
/// `σ` leaves `WR_{l+1}`.
pub fn inv_unchecked(s: &Simplex<Vertex>, n: usize, l: usize) -> BTreeSet<Vertex> {
    let parts = sigma_parts(s, n, l);
    let keep = if parts.i_less != parts.i_all {
        parts.i_less
    } else {
        ids(&parts.less)
    };
    parts
        .i_all
        .difference(keep)
        .iter()
        .map(|k| Vertex::new(k, parts.i_all))
        .collect()
}

/// `inv(σ)` for `σ ∈ WR_l \ WR_{l+1}`.
pub fn inv(s: &Simplex<Vertex>, n: usize, l: usize) -> Result<BTreeSet<Vertex>, CollapseError> {
    if in_next_level(s, n, l) {
        return Err(CollapseError::AlreadyInNextLevel(s.to_string()));
    }
    Ok(inv_unchecked(s, n, l))
}

/// `(σ⁻, σ⁺) = (σ \ inv(σ), σ ∪ inv(σ))`.
pub fn sigma_minus_plus(
    s: &Simplex<Vertex>,
    n: usize,
    l: usize,
) -> Result<(Simplex<Vertex>, Simplex<Vertex>), CollapseError> {
    let extra: Simplex<Vertex> = inv(s, n, l)?.into_iter().collect();
    Ok((s.difference(&extra), s.union(&extra)))
}

/// `I⁻⁺(σ)`: the simplices of `c` between `σ⁻` and `σ⁺`.
pub fn interval(
    c: &Complex<Vertex>,
    s: &Simplex<Vertex>,
    l: usize,
) -> Result<BTreeSet<Simplex<Vertex>>, CollapseError> {
    let (lo, hi) = sigma_minus_plus(s, c.n(), l)?;
    Ok(lo.cofaces_within(&hi).filter(|t| c.contains(t)).collect())
}

/// One piece `[σ⁻, σ]` with `σ = σ⁺`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalPiece {
    pub top: Simplex<Vertex>,
    pub bottom: Simplex<Vertex>,
}

/// `WR_l \ WR_{l+1}` as disjoint intervals, in collapse order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalDecomposition {
    pub n: usize,
    pub level: usize,
    pub intervals: Vec<IntervalPiece>,
}

impl IntervalDecomposition {
    /// Simplices covered by the pieces.
    pub fn covered(&self) -> BTreeSet<Simplex<Vertex>> {
        self.intervals
            .iter()
            .flat_map(|p| p.bottom.cofaces_within(&p.top).collect::<Vec<_>>())
            .collect()
    }
}

fn check_level(n: usize, l: usize) -> Result<(), CollapseError> {
    if l >= n.max(1) {
        return Err(CollapseError::InvalidLevel { l, n });
    }
    Ok(())
}

/// Sort key: larger `σ_l^<` first, then larger `σ`, then lexicographic.
fn order_key(top: &Simplex<Vertex>, n: usize, l: usize) -> (isize, isize, Simplex<Vertex>) {
    let less = sigma_parts(top, n, l).less;
    (-less.dim(), -top.dim(), top.clone())
}

fn decompose(
    wr: &Complex<Vertex>,
    next: &Complex<Vertex>,
    n: usize,
    l: usize,
) -> Result<IntervalDecomposition, CollapseError> {
    let removed = wr.difference(next);
    let mut tops: BTreeMap<Simplex<Vertex>, Simplex<Vertex>> = BTreeMap::new();
    for s in &removed {
        let (lo, hi) = sigma_minus_plus(s, n, l)?;
        invariant(wr.contains(&hi), || format!("{hi} is not in WR_{l}"))?;
        if let Some(prev) = tops.insert(hi.clone(), lo.clone()) {
            invariant(prev == lo, || format!("two bottoms below {hi}"))?;
        }
    }
    let mut intervals: Vec<IntervalPiece> = tops
        .into_iter()
        .map(|(top, bottom)| IntervalPiece { top, bottom })
        .collect();
    intervals.sort_by_cached_key(|p| order_key(&p.top, n, l));

    let mut seen = BTreeSet::new();
    for p in &intervals {
        for t in p.bottom.cofaces_within(&p.top) {
            invariant(removed.contains(&t), || format!("{t} survives to WR_{}", l + 1))?;
            invariant(seen.insert(t.clone()), || format!("{t} lies in two intervals"))?;
        }
    }
    invariant(seen == removed, || "the intervals do not cover the difference".into())?;
    Ok(IntervalDecomposition {
        n,
        level: l,
        intervals,
    })
}

fn levels(n: usize, l: usize) -> Result<(Complex<Vertex>, Complex<Vertex>), CollapseError> {
    check_level(n, l)?;
    let wr = protocol::build_wr(n, l)?.complex;
    let next = protocol::build_wr(n, (l + 1).min(n))?.complex;
    Ok((wr, next))
}

pub fn interval_decomposition(n: usize, l: usize) -> Result<IntervalDecomposition, CollapseError> {
    let (wr, next) = levels(n, l)?;
    decompose(&wr, &next, n, l)
}

/// `WR_l ↘_{σ_1⁻} ⋯ ↘_{σ_k⁻} WR_{l+1}`.
pub fn collapse_round(n: usize, l: usize) -> Result<CollapseTrace<Vertex>, CollapseError> {
    let (wr, next) = levels(n, l)?;
    let dec = decompose(&wr, &next, n, l)?;
    let mut b = CollapseTrace::builder(wr);
    for piece in &dec.intervals {
        invariant(
            b.current().free_coface(&piece.bottom) == Some(&piece.top),
            || format!("{} is not a free face of {}", piece.bottom, piece.top),
        )?;
        b.collapse(piece.bottom.clone(), PHASE_ROUND, Some(l))?;
    }
    let trace = b.finish();
    invariant(trace.target == next, || format!("round {l} did not end at WR_{}", l + 1))?;
    Ok(trace)
}

/// Orbits of the decomposition's tops, each with its lexicographically least
/// member first, in collapse order.
fn orbit_classes(
    dec: &IntervalDecomposition,
    g: &PermutationGroup,
) -> Result<Vec<Vec<(Simplex<Vertex>, Permutation)>>, CollapseError> {
    let mut placed = BTreeSet::new();
    let mut out = Vec::new();
    for piece in &dec.intervals {
        if placed.contains(&piece.top) {
            continue;
        }
        let orbit = Complex::orbit(&piece.top, g)?;
        for (t, _) in &orbit {
            placed.insert(t.clone());
        }
        out.push(orbit);
    }
    Ok(out)
}

/// `WR_l ↘_{S(τ_1⁻)} ⋯ ↘_{S(τ_p⁻)} WR_{l+1}` under the full symmetric group.
pub fn equivariant_collapse_round(n: usize, l: usize) -> Result<CollapseTrace<Vertex>, CollapseError> {
    let (wr, next) = levels(n, l)?;
    let dec = decompose(&wr, &next, n, l)?;
    let g = PermutationGroup::symmetric(n);
    let classes = orbit_classes(&dec, &g)?;
    let mut b = CollapseTrace::builder(wr);
    for class in classes {
        let rep = &class[0].0;
        let (lo, _) = sigma_minus_plus(rep, n, l)?;
        invariant(b.current().is_g_free(&lo, &g)?, || format!("{lo} is not G-free"))?;
        let orbit = Complex::orbit(&lo, &g)?;
        let (members, witness): (Vec<_>, Vec<_>) = orbit.into_iter().unzip();
        b.collapse_parallel(members, Some(witness), PHASE_ROUND, Some(l))?;
    }
    let trace = b.finish();
    invariant(trace.target == next, || format!("round {l} did not end at WR_{}", l + 1))?;
    Ok(trace)
}

/// The rounds `l = 0, …, n-1` composed: `WR(Δⁿ) ↘ χ(Δⁿ)`.
pub fn collapse_to_chromatic(n: usize, equivariant: bool) -> Result<CollapseTrace<Vertex>, CollapseError> {
    crate::limits::check_n(n)?;
    let round = |l| {
        if equivariant {
            equivariant_collapse_round(n, l)
        } else {
            collapse_round(n, l)
        }
    };
    if n == 0 {
        return round(0);
    }
    let mut trace = round(0)?;
    for l in 1..n {
        trace = trace.then(round(l)?)?;
    }
    Ok(trace)
}

/// Relabels `s` through `map` (`map[i]` is the image of color `i`), views
/// included.
pub(crate) fn relabel_simplex(s: &Simplex<Vertex>, map: &[u8]) -> Simplex<Vertex> {
    s.iter()
        .map(|v| Vertex::new(map[v.process as usize], v.view.map(map)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::verify_trace;
    use crate::procset::{ProcSet, ProcessId};

    fn v(p: ProcessId, view: &[ProcessId]) -> Vertex {
        Vertex::new(p, view.iter().copied().collect::<ProcSet>())
    }

    fn sigma1() -> Simplex<Vertex> {
        Simplex::new([v(1, &[1, 2]), v(2, &[0, 2]), v(0, &[0, 1, 2])])
    }

    fn sigma2() -> Simplex<Vertex> {
        Simplex::new([v(0, &[0, 1]), v(1, &[0, 1, 2]), v(2, &[0, 1, 2])])
    }

    #[test]
    fn inv_of_the_running_simplices() {
        assert_eq!(inv(&sigma2(), 2, 0).unwrap(), BTreeSet::from([v(2, &[0, 1, 2])]));
        assert_eq!(inv(&sigma1(), 2, 0).unwrap(), BTreeSet::from([v(0, &[0, 1, 2])]));
        let top = Simplex::new([v(0, &[0, 1, 2]), v(1, &[0, 1, 2]), v(2, &[0, 1, 2])]);
        assert!(matches!(inv(&top, 2, 0), Err(CollapseError::AlreadyInNextLevel(_))));
        assert_eq!(inv_unchecked(&top, 2, 0).len(), 3);
    }

    #[test]
    fn minus_plus_of_the_running_simplices() {
        let (lo, hi) = sigma_minus_plus(&sigma2(), 2, 0).unwrap();
        assert_eq!(lo, Simplex::new([v(0, &[0, 1]), v(1, &[0, 1, 2])]));
        assert_eq!(hi, sigma2());
        let (lo, hi) = sigma_minus_plus(&sigma1(), 2, 0).unwrap();
        assert_eq!(lo, Simplex::new([v(1, &[1, 2]), v(2, &[0, 2])]));
        assert_eq!(hi, sigma1());
        assert_eq!(sigma_minus_plus(&lo, 2, 0).unwrap().0, lo);
    }

    #[test]
    fn decomposition_covers_the_difference() {
        let dec = interval_decomposition(2, 0).unwrap();
        let w0 = protocol::build_wr(2, 0).unwrap().complex;
        let w1 = protocol::build_wr(2, 1).unwrap().complex;
        assert_eq!(dec.covered(), w0.difference(&w1));
        for p in &dec.intervals {
            for t in p.bottom.cofaces_within(&p.top) {
                assert!(!in_next_level(&t, 2, 0));
            }
        }
        assert!(interval_decomposition(1, 0).unwrap().intervals.is_empty());
        assert!(interval_decomposition(2, 1).unwrap().intervals.is_empty());
    }

    #[test]
    fn rounds_verify() {
        for (n, l) in [(1, 0), (2, 0), (2, 1)] {
            let t = collapse_round(n, l).unwrap();
            verify_trace(&t).unwrap();
            let e = equivariant_collapse_round(n, l).unwrap();
            verify_trace(&e).unwrap();
            assert_eq!(t.target, e.target);
        }
        assert!(collapse_round(1, 0).unwrap().steps.is_empty());
    }

    #[test]
    fn two_orbits_at_the_first_round() {
        let e = equivariant_collapse_round(2, 0).unwrap();
        assert_eq!(e.steps.len(), 2);
        let s1 = sigma_minus_plus(&sigma1(), 2, 0).unwrap().0;
        let s2 = sigma_minus_plus(&sigma2(), 2, 0).unwrap().0;
        assert!(e.steps[0].members().contains(&s1));
        assert!(e.steps[1].members().contains(&s2));
    }

    #[test]
    fn full_collapse_reaches_the_subdivision() {
        let t = collapse_to_chromatic(2, true).unwrap();
        verify_trace(&t).unwrap();
        assert_eq!(t.target, protocol::chromatic_standard(2).unwrap());
        let t = collapse_to_chromatic(0, false).unwrap();
        assert!(t.steps.is_empty());
    }
}
