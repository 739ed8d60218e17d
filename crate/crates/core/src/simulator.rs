//! The recursive immediate-snapshot algorithm run over layered single-writer
//! registers, one register operation per scheduling decision.
//!
//! At layer `r` a process writes its id into cell `(r, i)`, reads the `n + 1`
//! cells of layer `r`, and returns if it saw `n + 1 - r` ids. Otherwise it
//! moves to layer `r + 1`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::executions::{ExecutionError, IsExecution, Operation, ViewProfile, WrExecution};
use crate::limits::{self, SizeBoundExceeded};
use crate::procset::{ProcSet, ProcessId};
use crate::protocol::{self, profile_simplex};

/// Largest `n` for which [`run_exhaustive`] is attempted.
pub const EXHAUSTIVE_MAX_N: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimulatorError {
    #[error("the script ended with {remaining} still running")]
    IncompleteScript { remaining: ProcSet },
    #[error("script entry {position} names process {process}, which has already returned")]
    NotEnabled { position: usize, process: ProcessId },
    #[error("script entry {position} names process {process}, which is not in [{n}]")]
    UnknownProcess {
        position: usize,
        process: ProcessId,
        n: usize,
    },
    #[error(transparent)]
    DimensionTooLarge(#[from] SizeBoundExceeded),
    #[error(transparent)]
    Execution(ExecutionError),
}

impl From<ExecutionError> for SimulatorError {
    fn from(e: ExecutionError) -> Self {
        match e {
            ExecutionError::DimensionTooLarge(b) => SimulatorError::DimensionTooLarge(b),
            other => SimulatorError::Execution(other),
        }
    }
}

/// `n + 1` layers of `n + 1` single-writer cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LayeredMemory {
    pub layers: Vec<Vec<Option<ProcessId>>>,
}

impl LayeredMemory {
    pub fn new(n: usize) -> Self {
        LayeredMemory {
            layers: vec![vec![None; n + 1]; n + 1],
        }
    }

    /// Process `i` writes its own cell in `layer`.
    pub fn write(&mut self, layer: usize, i: ProcessId) {
        let cell = &mut self.layers[layer][i as usize];
        debug_assert!(cell.is_none(), "cell ({layer}, {i}) written twice");
        *cell = Some(i);
    }

    pub fn read(&self, layer: usize, j: ProcessId) -> Option<ProcessId> {
        self.layers[layer][j as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scheduler {
    /// Every interleaving. A single [`run`] takes the first one: always the
    /// lowest-numbered process that can move.
    Exhaustive,
    SeededRandom { seed: u64 },
    /// Process ids, one per register operation.
    Scripted { script: Vec<ProcessId> },
}

impl Scheduler {
    /// Each process in `order` runs to completion before the next one starts.
    pub fn sequential(n: usize, order: &[ProcessId]) -> Scheduler {
        let order = order.to_vec();
        Scheduler::Scripted {
            script: script_from(n, move |enabled| {
                *order.iter().find(|p| enabled.contains(**p)).expect("order covers everyone")
            }),
        }
    }

    /// Everyone steps in turn: all write, then all read register 0, and so on.
    pub fn lock_step(n: usize) -> Scheduler {
        let mut last: Option<ProcessId> = None;
        Scheduler::Scripted {
            script: script_from(n, move |enabled| {
                let next = enabled
                    .iter()
                    .find(|&p| last.is_none_or(|l| p > l))
                    .or_else(|| enabled.iter().next())
                    .expect("someone is running");
                last = Some(next);
                next
            }),
        }
    }
}

/// A run request as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunDescriptor {
    pub n: usize,
    pub scheduler: Scheduler,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunResult {
    pub execution: IsExecution,
    pub profile: ViewProfile,
    /// View size at each layer a process went through.
    pub round_sizes: BTreeMap<ProcessId, Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Proc {
    layer: usize,
    /// 0 before the write, then `1 + reads done`.
    pc: usize,
    seen: ProcSet,
    done: Option<ProcSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    procs: Vec<Proc>,
    mem: LayeredMemory,
}

impl State {
    fn new(n: usize) -> Self {
        State {
            procs: vec![
                Proc {
                    layer: 0,
                    pc: 0,
                    seen: ProcSet::EMPTY,
                    done: None,
                };
                n + 1
            ],
            mem: LayeredMemory::new(n),
        }
    }

    fn n(&self) -> usize {
        self.procs.len() - 1
    }

    fn enabled(&self) -> ProcSet {
        (0..self.procs.len() as ProcessId)
            .filter(|&i| self.procs[i as usize].done.is_none())
            .collect()
    }

    /// One operation of process `i`; `target` picks the register for a read.
    /// Returns the operation, its layer, and whether a scan just finished.
    fn step(&mut self, i: ProcessId, target: ProcessId) -> (Operation, usize, Option<usize>) {
        let n = self.n();
        let p = &mut self.procs[i as usize];
        let layer = p.layer;
        if p.pc == 0 {
            self.mem.write(layer, i);
            p.pc = 1;
            p.seen = ProcSet::EMPTY;
            return (Operation::Write(i), layer, None);
        }
        if self.mem.read(layer, target).is_some() {
            p.seen.insert(target);
        }
        p.pc += 1;
        let mut finished = None;
        if p.pc == n + 2 {
            finished = Some(p.seen.len());
            if p.seen.len() == n + 1 - layer {
                p.done = Some(p.seen);
            } else {
                p.layer += 1;
                p.pc = 0;
            }
        }
        (Operation::Read { reader: i, target }, layer, finished)
    }

    fn profile(&self) -> ViewProfile {
        self.procs
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.done.map(|v| (i as ProcessId, v)))
            .collect()
    }
}

fn script_from(n: usize, mut pick: impl FnMut(ProcSet) -> ProcessId) -> Vec<ProcessId> {
    let mut state = State::new(n);
    let mut script = Vec::new();
    loop {
        let enabled = state.enabled();
        if enabled.is_empty() {
            return script;
        }
        let i = pick(enabled);
        let target = (state.procs[i as usize].pc.max(1) - 1) as ProcessId;
        state.step(i, target);
        script.push(i);
    }
}

/// Runs every process to completion under `scheduler`.
pub fn run(n: usize, scheduler: &Scheduler) -> Result<RunResult, SimulatorError> {
    limits::check_n(n)?;
    let mut state = State::new(n);
    let mut layers: Vec<Vec<Operation>> = vec![Vec::new(); n + 1];
    let mut round_sizes: BTreeMap<ProcessId, Vec<usize>> = BTreeMap::new();
    let mut rng = match scheduler {
        Scheduler::SeededRandom { seed } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    // Read order of the scan in progress, per process.
    let mut orders: Vec<Vec<ProcessId>> = vec![Vec::new(); n + 1];
    let ascending: Vec<ProcessId> = (0..=n as ProcessId).collect();
    let mut position = 0;

    loop {
        let enabled = state.enabled();
        if enabled.is_empty() {
            break;
        }
        let i = match scheduler {
            Scheduler::Exhaustive => enabled.iter().next().expect("nonempty"),
            Scheduler::SeededRandom { .. } => {
                let rng = rng.as_mut().expect("seeded");
                let all: Vec<ProcessId> = enabled.iter().collect();
                all[rng.gen_range(0..all.len())]
            }
            Scheduler::Scripted { script } => {
                let Some(&i) = script.get(position) else {
                    return Err(SimulatorError::IncompleteScript { remaining: enabled });
                };
                if i as usize > n {
                    return Err(SimulatorError::UnknownProcess {
                        position,
                        process: i,
                        n,
                    });
                }
                if !enabled.contains(i) {
                    return Err(SimulatorError::NotEnabled { position, process: i });
                }
                i
            }
        };
        position += 1;
        let pc = state.procs[i as usize].pc;
        if pc == 0 {
            orders[i as usize] = match rng.as_mut() {
                Some(rng) => {
                    let mut o = ascending.clone();
                    o.shuffle(rng);
                    o
                }
                None => ascending.clone(),
            };
        }
        let target = if pc == 0 { 0 } else { orders[i as usize][pc - 1] };
        let (op, layer, finished) = state.step(i, target);
        layers[layer].push(op);
        if let Some(size) = finished {
            round_sizes.entry(i).or_default().push(size);
        }
    }

    if let Scheduler::Scripted { script } = scheduler {
        if let Some(&process) = script.get(position) {
            return Err(SimulatorError::NotEnabled { position, process });
        }
    }
    let mut rounds = Vec::new();
    for ops in layers.into_iter().take_while(|ops| !ops.is_empty()) {
        rounds.push(WrExecution::from_ops(Some(n), ops)?);
    }
    let execution = IsExecution::new(n, rounds)?;
    let profile = state.profile();
    debug_assert_eq!(execution.is_view(), profile);
    Ok(RunResult {
        execution,
        profile,
        round_sizes,
    })
}

/// Final profiles over all interleavings, reads in ascending register order.
///
/// States already explored are not expanded again, so each distinct
/// configuration of registers and local states is visited once.
pub fn run_exhaustive(n: usize) -> Result<BTreeSet<ViewProfile>, SimulatorError> {
    limits::check_n(n)?;
    if n > EXHAUSTIVE_MAX_N {
        return Err(SizeBoundExceeded {
            what: format!("exhaustive scheduling at n = {n}"),
            bound: EXHAUSTIVE_MAX_N,
        }
        .into());
    }
    let mut seen: HashSet<State> = HashSet::new();
    let mut stack = vec![State::new(n)];
    let mut out = BTreeSet::new();
    while let Some(state) = stack.pop() {
        if !seen.insert(state.clone()) {
            continue;
        }
        let enabled = state.enabled();
        if enabled.is_empty() {
            out.insert(state.profile());
            continue;
        }
        for i in enabled.iter() {
            let mut next = state.clone();
            let target = (next.procs[i as usize].pc.max(1) - 1) as ProcessId;
            next.step(i, target);
            if !seen.contains(&next) {
                stack.push(next);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub n: usize,
    pub runs: usize,
    pub seed: u64,
    /// Profiles that are not simplices of the subdivision.
    pub violations: Vec<ViewProfile>,
    pub distinct_maximal: usize,
    pub total_maximal: usize,
}

impl FuzzReport {
    pub fn full_coverage(&self) -> bool {
        self.distinct_maximal == self.total_maximal
    }
}

/// `runs` seeded-random schedules, each checked against `χ(Δⁿ)`.
pub fn fuzz(n: usize, runs: usize, seed: u64) -> Result<FuzzReport, SimulatorError> {
    limits::check_n(n)?;
    let chi = protocol::chromatic_on(n, ProcSet::full(n));
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let mut hit = BTreeSet::new();
    for _ in 0..runs {
        let r = run(n, &Scheduler::SeededRandom { seed: master.gen() })?;
        let s = profile_simplex(&r.profile);
        if !chi.contains(&s) {
            violations.push(r.profile);
        } else if chi.maximal_set().contains(&s) {
            hit.insert(s);
        }
    }
    Ok(FuzzReport {
        n,
        runs,
        seed,
        violations,
        distinct_maximal: hit.len(),
        total_maximal: chi.maximal_count(),
    })
}
