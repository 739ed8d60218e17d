#![allow(dead_code)]

//! Independent oracles: brute-force interleavings, ordered set partitions
//! from permutations and cut points, and a greedy collapser.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use wrcollapse::complexes::{Complex, Label, Simplex, Vertex};
use wrcollapse::executions::ViewProfile;
use wrcollapse::procset::{ProcSet, ProcessId};

pub fn v(p: ProcessId, view: &[ProcessId]) -> Vertex {
    Vertex::new(p, view.iter().copied().collect::<ProcSet>())
}

pub fn sigma1() -> Simplex<Vertex> {
    Simplex::new([v(1, &[1, 2]), v(2, &[0, 2]), v(0, &[0, 1, 2])])
}

pub fn sigma2() -> Simplex<Vertex> {
    Simplex::new([v(0, &[0, 1]), v(1, &[0, 1, 2]), v(2, &[0, 1, 2])])
}

pub fn profile_of(s: &Simplex<Vertex>) -> ViewProfile {
    s.iter().map(|x| (x.process, x.view)).collect()
}

pub fn simplex_of(p: &ViewProfile) -> Simplex<Vertex> {
    p.iter().map(|(i, view)| Vertex::new(i, view)).collect()
}

/// Fubini numbers by `a(m) = Σ_{j≥1} C(m, j) a(m - j)`, for `m` elements.
pub fn fubini(m: usize) -> u64 {
    let mut a = vec![1u64; m + 1];
    for k in 1..=m {
        let mut s = 0;
        let mut binom = 1u64;
        for j in 1..=k {
            binom = binom * (k - j + 1) as u64 / j as u64;
            s += binom * a[k - j];
        }
        a[k] = s;
    }
    a[m]
}

fn permutations(items: &[ProcessId]) -> Vec<Vec<ProcessId>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (k, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Immediate-snapshot profiles on `[n]`: every permutation cut into
/// consecutive blocks, each block seeing itself and everything before it.
pub fn partition_profiles(n: usize) -> BTreeSet<ViewProfile> {
    let ids: Vec<ProcessId> = (0..=n as ProcessId).collect();
    let mut out = BTreeSet::new();
    for perm in permutations(&ids) {
        for cuts in 0u32..(1 << n) {
            let mut prof = ViewProfile::new();
            let mut seen = ProcSet::EMPTY;
            let mut block = Vec::new();
            for (k, &p) in perm.iter().enumerate() {
                block.push(p);
                let cut_here = k == n || cuts & (1 << k) != 0;
                if cut_here {
                    for &b in &block {
                        seen.insert(b);
                    }
                    for &b in &block {
                        prof.insert(b, seen);
                    }
                    block.clear();
                }
            }
            out.insert(prof);
        }
    }
    out
}

/// Every linear order of `w_i` and `r_i(j)` (`i, j` in `participants`) with
/// each write before its owner's reads, reduced to view profiles.
pub fn naive_round_profiles(participants: ProcSet) -> BTreeSet<ViewProfile> {
    static CACHE: OnceLock<Mutex<HashMap<ProcSet, BTreeSet<ViewProfile>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&participants) {
        return hit.clone();
    }
    let out = interleavings(participants);
    cache.lock().unwrap().insert(participants, out.clone());
    out
}

fn interleavings(participants: ProcSet) -> BTreeSet<ViewProfile> {
    let ids: Vec<ProcessId> = participants.iter().collect();
    let mut out = BTreeSet::new();
    let mut pending: HashMap<ProcessId, ProcSet> = HashMap::new();
    let mut views: HashMap<ProcessId, ProcSet> = HashMap::new();
    fn go(
        ids: &[ProcessId],
        participants: ProcSet,
        written: ProcSet,
        pending: &mut HashMap<ProcessId, ProcSet>,
        views: &mut HashMap<ProcessId, ProcSet>,
        out: &mut BTreeSet<ViewProfile>,
    ) {
        let mut moved = false;
        for &i in ids {
            if !written.contains(i) {
                moved = true;
                pending.insert(i, participants);
                views.insert(i, ProcSet::EMPTY);
                go(ids, participants, written.with(i), pending, views, out);
                pending.remove(&i);
                views.remove(&i);
                continue;
            }
            let todo = pending[&i];
            for j in todo.iter() {
                moved = true;
                pending.insert(i, todo.without(j));
                let before = views[&i];
                if written.contains(j) {
                    views.insert(i, before.with(j));
                }
                go(ids, participants, written, pending, views, out);
                views.insert(i, before);
                pending.insert(i, todo);
            }
        }
        if !moved {
            out.insert(views.iter().map(|(&i, &s)| (i, s)).collect());
        }
    }
    go(&ids, participants, ProcSet::EMPTY, &mut pending, &mut views, &mut out);
    out
}

/// Final profiles of IS-executions of length `l + 1`, each round taken from
/// [`naive_round_profiles`].
pub fn naive_family(n: usize, l: usize) -> BTreeSet<ViewProfile> {
    let mut memo: HashMap<ProcSet, BTreeSet<ViewProfile>> = HashMap::new();
    let mut out = BTreeSet::new();
    fn rec(
        n: usize,
        l: usize,
        k: usize,
        p: ProcSet,
        settled: ViewProfile,
        memo: &mut HashMap<ProcSet, BTreeSet<ViewProfile>>,
        out: &mut BTreeSet<ViewProfile>,
    ) {
        let rounds = memo
            .entry(p)
            .or_insert_with(|| {
                if p.is_empty() {
                    BTreeSet::from([ViewProfile::new()])
                } else {
                    naive_round_profiles(p)
                }
            })
            .clone();
        for round in rounds {
            let mut next = settled.clone();
            let mut rest = p;
            for (i, view) in round.iter() {
                if k == l || view.len() == n + 1 - k {
                    next.insert(i, view);
                    rest.remove(i);
                }
            }
            if k == l {
                out.insert(next);
            } else {
                rec(n, l, k + 1, rest, next, memo, out);
            }
        }
    }
    rec(n, l, 0, ProcSet::full(n), ViewProfile::new(), &mut memo, &mut out);
    out
}

/// Sub-profiles of the given profiles, as simplices.
pub fn closure_simplices(family: &BTreeSet<ViewProfile>) -> BTreeSet<Simplex<Vertex>> {
    let mut out = BTreeSet::new();
    for p in family {
        let s = simplex_of(p);
        for f in s.faces() {
            if !f.is_empty() {
                out.insert(f);
            }
        }
    }
    out
}

/// Collapses any free face outside `keep` until none is left.
pub fn greedy_collapse<V: Label>(c: &Complex<V>, keep: &Complex<V>) -> Complex<V> {
    let mut c = c.clone();
    loop {
        let mut candidates: Vec<Simplex<V>> = c.simplices().into_iter().collect();
        if keep.is_void() {
            candidates.push(Simplex::empty());
        }
        let pick = candidates
            .into_iter()
            .find(|s| !keep.contains(s) && c.free_coface(s).is_some());
        match pick {
            Some(s) => {
                c.collapse_in_place(&s).unwrap();
            }
            None => return c,
        }
    }
}
