use std::collections::hash_map::Entry;
use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::{
    chromatic_collapse_lambda, collapse_to_chromatic, equivariant_collapse_round, invariant,
    CollapseError, PHASE_ITERATED_CHROMATIC, PHASE_ITERATED_ROUNDS,
};
use crate::complexes::{Complex, CollapseTrace, Node, Simplex, Vertex};
use crate::limits;
use crate::protocol::{chromatic_of, wr_of, Tower};

/// `WR^(k)(Δⁿ) ↘ χ^(k)(Δⁿ)` together with the vertex tower its nodes live in.
#[derive(Clone, Debug, Serialize)]
pub struct IteratedTrace {
    pub n: usize,
    pub k: usize,
    #[serde(flatten)]
    pub trace: CollapseTrace<Node>,
    /// `χ(WR^(k-1)(Δⁿ))`, where the per-simplex rounds stop. Absent for `k = 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds_end: Option<Complex<Node>>,
    #[serde(skip)]
    pub tower: Tower,
}

pub fn iterated_collapse(n: usize, k: usize) -> Result<IteratedTrace, CollapseError> {
    if k == 0 {
        return Err(CollapseError::InvalidLevel { l: 0, n });
    }
    limits::check_iterated(n, k)?;
    let mut tower = Tower::new(n);
    let (trace, rounds_end) = collapse_in(n, k, &mut tower)?;
    Ok(IteratedTrace {
        n,
        k,
        trace,
        rounds_end,
        tower,
    })
}

/// `WR^(k)(Δⁿ)` built inside `tower`.
fn iterated_wr(k: usize, tower: &mut Tower) -> Result<Complex<Node>, CollapseError> {
    let mut c = tower.base_complex();
    for _ in 0..k {
        c = wr_of(&c, tower)?.complex;
    }
    Ok(c)
}

fn collapse_in(
    n: usize,
    k: usize,
    tower: &mut Tower,
) -> Result<(CollapseTrace<Node>, Option<Complex<Node>>), CollapseError> {
    if k == 1 {
        return Ok((lift_trace(&collapse_to_chromatic(n, false)?, tower)?, None));
    }
    let lower = iterated_wr(k - 1, tower)?;
    let source = wr_of(&lower, tower)?.complex;
    let mut b = CollapseTrace::builder(source);

    // Every WR(σ_i) runs the same equivariant rounds in its own coordinates.
    for l in 0..n {
        for step in equivariant_collapse_round(n, l)?.steps {
            let mut batch = BTreeSet::new();
            for sigma in lower.maximal() {
                for m in step.members() {
                    batch.insert(tower.local_simplex(sigma, &m));
                }
            }
            b.collapse_parallel(batch.into_iter().collect(), None, PHASE_ITERATED_ROUNDS, Some(l))?;
        }
    }
    let rounds_end = b.current().clone();
    invariant(rounds_end == chromatic_of(&lower, tower)?.complex, || {
        format!("the per-simplex rounds at k = {k} did not reach χ(WR^(k-1))")
    })?;

    // Each elementary collapse (ρ, ρ ∪ {v}) of the level below becomes the
    // horn collapse of χ(ρ ∪ {v}) away from ρ.
    let (below, _) = collapse_in(n, k - 1, tower)?;
    invariant(below.source == lower, || "the lower trace starts elsewhere".into())?;
    let mut current = below.source.clone();
    let mut horns: HashMap<(usize, u8), CollapseTrace<Vertex>> = HashMap::new();
    for (index, step) in below.steps.iter().enumerate() {
        for tau in step.members() {
            let sigma = current
                .free_coface(&tau)
                .cloned()
                .ok_or_else(|| CollapseError::Invariant(format!("{tau} is not free below")))?;
            current.collapse_in_place(&tau)?;
            let v = sigma
                .difference(&tau)
                .iter()
                .max()
                .expect("a free face is proper");
            let mut pairs: Vec<Simplex<Node>> = tau.cofaces_within(&sigma.without(&v)).collect();
            pairs.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
            for rho in pairs {
                let top = rho.with(v);
                let p = top.iter().filter(|u| u.color < v.color).count() as u8;
                let m = top.len() - 1;
                if let Entry::Vacant(slot) = horns.entry((m, p)) {
                    slot.insert(chromatic_collapse_lambda(m, p)?);
                }
                for hstep in &horns[&(m, p)].steps {
                    for local in hstep.members() {
                        let free = tower.local_simplex(&top, &local);
                        b.collapse(free, PHASE_ITERATED_CHROMATIC, Some(index))?;
                    }
                }
            }
        }
    }
    invariant(current == below.target, || "the lower trace did not replay".into())?;
    let trace = b.finish();
    invariant(trace.target == chromatic_of(&current, tower)?.complex, || {
        format!("the transported horn collapses at k = {k} did not reach χ^(k)")
    })?;
    Ok((trace, Some(rounds_end)))
}

/// A protocol-vertex trace rewritten on level-1 nodes.
fn lift_trace(t: &CollapseTrace<Vertex>, tower: &mut Tower) -> Result<CollapseTrace<Node>, CollapseError> {
    let mut b = CollapseTrace::builder(tower.lift(&t.source));
    for step in &t.steps {
        for m in step.members() {
            b.collapse(tower.lift_simplex(&m), &step.phase, step.level)?;
        }
    }
    let trace = b.finish();
    invariant(Some(&t.target) == tower.lower(&trace.target).as_ref(), || {
        "lifting changed the residual".into()
    })?;
    Ok(trace)
}
