use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use super::{
    invariant, relabel_simplex, CollapseError, PHASE_LAMBDA, PHASE_VOID,
};
use crate::complexes::{Complex, CollapseTrace, Simplex, TraceBuilder, Vertex};
use crate::limits;
use crate::procset::{ProcSet, ProcessId};
use crate::protocol::{self, chromatic_on};

/// Vertices whose view is not everything.
fn partial(s: &Simplex<Vertex>, full: ProcSet) -> Simplex<Vertex> {
    s.iter().filter(|v| v.view != full).collect()
}

fn full_part(s: &Simplex<Vertex>, full: ProcSet) -> Simplex<Vertex> {
    s.iter().filter(|v| v.view == full).collect()
}

/// `σᶜ = σ ∪ {(j, full) : j ∉ view_i}` for the largest view `view_i` of
/// the partial vertices of `σ`.
fn completion(s: &Simplex<Vertex>, full: ProcSet) -> Simplex<Vertex> {
    let largest = partial(s, full)
        .iter()
        .map(|v| v.view)
        .max_by_key(|v| v.len())
        .unwrap_or(ProcSet::EMPTY);
    let extra: Simplex<Vertex> = full
        .difference(largest)
        .iter()
        .map(|j| Vertex::new(j, full))
        .collect();
    s.union(&extra)
}

fn simplices_with_empty(c: &Complex<Vertex>) -> Vec<Simplex<Vertex>> {
    let mut all: Vec<Simplex<Vertex>> = c.simplices().into_iter().collect();
    if !c.is_void() {
        all.insert(0, Simplex::empty());
    }
    all
}

fn collapse_into(
    b: &mut TraceBuilder<Vertex>,
    free: Simplex<Vertex>,
    top: &Simplex<Vertex>,
    phase: &str,
    stage: usize,
) -> Result<(), CollapseError> {
    invariant(b.current().free_coface(&free) == Some(top), || {
        format!("{phase}: {free} is not a free face of {top}")
    })?;
    b.collapse(free, phase, Some(stage))?;
    Ok(())
}

/// Free faces of the staged collapse of `χ(Δ^m)` to the void complex, each
/// with its stage, in application order.
pub fn chromatic_void_faces(m: usize) -> Result<Vec<(usize, Simplex<Vertex>)>, CollapseError> {
    limits::check_n(m)?;
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<(usize, Simplex<Vertex>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&m) {
        return Ok(hit.clone());
    }
    let trace = void_trace(m)?;
    let faces: Vec<(usize, Simplex<Vertex>)> = trace
        .steps
        .iter()
        .map(|s| (s.level.unwrap_or(0), s.free.clone()))
        .collect();
    cache.lock().expect("cache lock").insert(m, faces.clone());
    Ok(faces)
}

fn void_trace(n: usize) -> Result<CollapseTrace<Vertex>, CollapseError> {
    let full = ProcSet::full(n);
    let mut b = CollapseTrace::builder(chromatic_on(n, full));
    for k in 1..=n + 1 {
        let want = n as isize - k as isize;
        let stage: Vec<Simplex<Vertex>> = simplices_with_empty(b.current())
            .into_iter()
            .filter(|s| s.dim() == want && full_part(s, full).is_empty())
            .collect();
        for s in stage {
            let top = completion(&s, full);
            collapse_into(&mut b, s, &top, PHASE_VOID, k)?;
        }
    }
    let trace = b.finish();
    invariant(trace.target.is_void(), || "the staged collapse left simplices".into())?;
    Ok(trace)
}

/// `χ(Δⁿ) ↘ void` in `n + 1` stages; stage `k` collapses the partial simplices
/// of dimension `n - k` into their completions.
pub fn chromatic_collapse_void(n: usize) -> Result<CollapseTrace<Vertex>, CollapseError> {
    limits::check_n(n)?;
    void_trace(n)
}

/// `χ(Δⁿ) ↘ χ(Λ_pⁿ)` where `Λ_pⁿ` is `Δⁿ` without the open star of the facet
/// opposite `p`.
pub fn chromatic_collapse_lambda(n: usize, p: ProcessId) -> Result<CollapseTrace<Vertex>, CollapseError> {
    limits::check_n(n)?;
    if p as usize > n {
        return Err(CollapseError::InvalidProcess { p, n });
    }
    let full = ProcSet::full(n);
    let pv = Vertex::new(p, full);
    let only_p = Simplex::new([pv]);
    let mut b = CollapseTrace::builder(chromatic_on(n, full));
    let bound = n.max(1);

    // Maximal simplices whose only full vertex is p lose their partial part.
    let mut rounds = 0;
    loop {
        let candidates: BTreeSet<Simplex<Vertex>> = b
            .current()
            .maximal()
            .filter(|s| full_part(s, full) == only_p)
            .cloned()
            .collect();
        if candidates.is_empty() {
            break;
        }
        rounds += 1;
        if rounds > bound {
            return Err(CollapseError::StageDidNotEmpty {
                phase: PHASE_LAMBDA[0].into(),
                steps: bound,
            });
        }
        for s in candidates {
            collapse_into(&mut b, partial(&s, full), &s, PHASE_LAMBDA[0], rounds)?;
        }
    }

    // σ|p = σ^< ∪ {(p, full)} collapses into its completion, by decreasing
    // dimension of σ^<.
    let mut k = 0;
    while b.current().contains(&only_p) {
        k += 1;
        if k > bound {
            return Err(CollapseError::StageDidNotEmpty {
                phase: PHASE_LAMBDA[1].into(),
                steps: bound,
            });
        }
        let want = n as isize - k as isize - 1;
        let faces: BTreeSet<Simplex<Vertex>> = b
            .current()
            .simplices()
            .into_iter()
            .filter(|s| s.contains(&pv))
            .map(|s| partial(&s, full).with(pv))
            .filter(|s| s.dim() - 1 == want)
            .collect();
        for s in faces {
            let top = completion(&s, full);
            collapse_into(&mut b, s, &top, PHASE_LAMBDA[1], k)?;
        }
    }

    // Simplices with full part F are τ ∪ F for τ in χ(Δ^I), I = [n] ∖ Id(F);
    // the void collapse of χ(Δ^I) transported along F removes them.
    for k in 1..=n {
        let size = n + 1 - k;
        let fronts: BTreeSet<Simplex<Vertex>> = b
            .current()
            .simplices()
            .into_iter()
            .map(|s| full_part(&s, full))
            .filter(|f| f.len() == size)
            .collect();
        for front in fronts {
            let rest = full.difference(front.colors());
            let map: Vec<ProcessId> = rest.iter().collect();
            let local_full = rest;
            for (_, tau) in chromatic_void_faces(rest.len() - 1)? {
                let tau = relabel_simplex(&tau, &map);
                let free = tau.union(&front);
                let top = completion(&tau, local_full).union(&front);
                collapse_into(&mut b, free, &top, PHASE_LAMBDA[2], k)?;
            }
        }
    }

    let trace = b.finish();
    let expected = protocol::chromatic_lambda(n, p)?;
    invariant(trace.target == expected, || {
        format!("the three stages did not end at the subdivided horn at {p}")
    })?;
    Ok(trace)
}
