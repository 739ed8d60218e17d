//! Write/read executions, local views, immediate-snapshot executions, and the
//! view families `E_l`.
//!
//! A wr-execution is stored in sequential form: a linear order on the write
//! `w_i` and reads `r_i(j)` of its participants. Concurrent executions are
//! view-equivalent to sequential ones, so nothing is lost by this.
//!
//! An IS-execution is a sequence of wr-executions, one per shared-memory
//! layer. After round `k` the processes whose view has exactly `n + 1 - k`
//! ids drop out; the rest run round `k + 1`. Trailing rounds may be empty
//! (the empty participant set has the empty operation set), which is what
//! makes `E_{l+1}` a subset of `E_l`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::limits::{self, SizeBoundExceeded};
use crate::procset::{ProcSet, ProcessId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecutionError {
    #[error("operation {0} is missing")]
    MissingOperation(Operation),
    #[error("operation {0} occurs more than once")]
    DuplicateOperation(Operation),
    #[error("process {0} reads before it writes")]
    WriteAfterRead(ProcessId),
    #[error("operation {0} belongs to a non-participant")]
    ForeignOperation(Operation),
    #[error("operation {op} targets a register outside [{n}]")]
    InvalidTarget { op: Operation, n: usize },
    #[error("process {0} does not participate")]
    NotAParticipant(ProcessId),
    #[error("IS-execution has {0} rounds; at least 2 are needed")]
    TooShort(usize),
    #[error("no wr-execution on {participants} realizes the requested views")]
    Unrealizable { participants: ProcSet },
    #[error("round {round} of the IS-execution is malformed: {reason}")]
    MalformedRound { round: usize, reason: String },
    #[error("cannot infer the ambient dimension from an empty execution")]
    UnknownDimension,
    #[error(transparent)]
    DimensionTooLarge(#[from] SizeBoundExceeded),
}

/// A single atomic register operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operation {
    /// `w_i`: process `i` writes its id to register `i`.
    Write(ProcessId),
    /// `r_i(j)`: process `reader` reads register `target`.
    Read { reader: ProcessId, target: ProcessId },
}

impl Operation {
    pub fn process(self) -> ProcessId {
        match self {
            Operation::Write(p) => p,
            Operation::Read { reader, .. } => reader,
        }
    }

    pub fn is_write(self) -> bool {
        matches!(self, Operation::Write(_))
    }

    fn relabel(self, map: &[ProcessId]) -> Operation {
        match self {
            Operation::Write(p) => Operation::Write(map[p as usize]),
            Operation::Read { reader, target } => Operation::Read {
                reader: map[reader as usize],
                target: map[target as usize],
            },
        }
    }
}

impl std::fmt::Display for Operation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Operation::Write(p) => write!(f, "w_{p}"),
            Operation::Read { reader, target } => write!(f, "r_{reader}({target})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct OpRecord {
    op: String,
    p: ProcessId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<ProcessId>,
}

impl Serialize for Operation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rec = match *self {
            Operation::Write(p) => OpRecord {
                op: "w".into(),
                p,
                t: None,
            },
            Operation::Read { reader, target } => OpRecord {
                op: "r".into(),
                p: reader,
                t: Some(target),
            },
        };
        rec.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Operation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let rec = OpRecord::deserialize(d)?;
        match (rec.op.as_str(), rec.t) {
            ("w", None) => Ok(Operation::Write(rec.p)),
            ("w", Some(_)) => Err(D::Error::custom("a write carries no target")),
            ("r", Some(t)) => Ok(Operation::Read {
                reader: rec.p,
                target: t,
            }),
            ("r", None) => Err(D::Error::custom("a read needs a target \"t\"")),
            (other, _) => Err(D::Error::custom(format!("unknown op kind {other:?}"))),
        }
    }
}

/// The view of one process: the ids whose writes it observed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LocalView {
    pub owner: ProcessId,
    pub seen: ProcSet,
}

/// Assignment of a local view to each participant.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ViewProfile {
    views: BTreeMap<ProcessId, ProcSet>,
}

impl ViewProfile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, p: ProcessId, view: ProcSet) {
        self.views.insert(p, view);
    }

    pub fn get(&self, p: ProcessId) -> Option<ProcSet> {
        self.views.get(&p).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ProcessId, ProcSet)> + '_ {
        self.views.iter().map(|(&p, &v)| (p, v))
    }

    pub fn len(&self) -> usize {
        self.views.len()
    }

    pub fn is_empty(&self) -> bool {
        self.views.is_empty()
    }

    pub fn participants(&self) -> ProcSet {
        self.views.keys().copied().collect()
    }

    /// Merges `other` into `self`; entries of `other` win on conflict.
    pub fn extend(&mut self, other: &ViewProfile) {
        self.views.extend(other.views.iter().map(|(&p, &v)| (p, v)));
    }

    /// Relabels ids through `map` (`map[i]` is the image of `i`).
    pub fn relabel(&self, map: &[ProcessId]) -> ViewProfile {
        ViewProfile {
            views: self
                .views
                .iter()
                .map(|(&p, &v)| (map[p as usize], v.map(map)))
                .collect(),
        }
    }

    /// Self-inclusion, pairwise comparability and immediacy: the three
    /// conditions characterizing immediate-snapshot views.
    pub fn is_immediate_snapshot_profile(&self) -> bool {
        let entries: Vec<_> = self.iter().collect();
        entries.iter().all(|&(i, vi)| vi.contains(i))
            && entries.iter().all(|&(_, vi)| {
                entries
                    .iter()
                    .all(|&(_, vj)| vi.is_subset(vj) || vj.is_subset(vi))
            })
            && entries.iter().all(|&(_, vi)| {
                entries
                    .iter()
                    .all(|&(j, vj)| !vi.contains(j) || vj.is_subset(vi))
            })
    }
}

impl FromIterator<(ProcessId, ProcSet)> for ViewProfile {
    fn from_iter<I: IntoIterator<Item = (ProcessId, ProcSet)>>(iter: I) -> Self {
        ViewProfile {
            views: iter.into_iter().collect(),
        }
    }
}

impl std::fmt::Display for ViewProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("{")?;
        for (k, (p, v)) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}↦{v}")?;
        }
        f.write_str("}")
    }
}

/// A sequential wr-execution on a participant set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WrExecution {
    n: usize,
    participants: ProcSet,
    order: Vec<Operation>,
}

impl WrExecution {
    /// Builds and validates an execution.
    pub fn new(
        n: usize,
        participants: ProcSet,
        order: Vec<Operation>,
    ) -> Result<Self, ExecutionError> {
        let e = WrExecution {
            n,
            participants,
            order,
        };
        e.validate()?;
        Ok(e)
    }

    /// Builds an execution from its operations alone, taking the participants
    /// to be the processes that appear. If `n` is `None` it is inferred from
    /// the number of reads of the first participant.
    pub fn from_ops(n: Option<usize>, order: Vec<Operation>) -> Result<Self, ExecutionError> {
        let participants: ProcSet = order.iter().map(|op| op.process()).collect();
        let n = match n {
            Some(n) => n,
            None => {
                let first = participants.iter().next().ok_or(ExecutionError::UnknownDimension)?;
                let reads = order
                    .iter()
                    .filter(|op| !op.is_write() && op.process() == first)
                    .count();
                reads.checked_sub(1).ok_or(ExecutionError::UnknownDimension)?
            }
        };
        Self::new(n, participants, order)
    }

    /// The degenerate execution on the empty participant set.
    pub fn empty(n: usize) -> Self {
        WrExecution {
            n,
            participants: ProcSet::EMPTY,
            order: Vec::new(),
        }
    }

    /// Process `i` runs alone: `w_i, r_i(0), ..., r_i(n)`.
    pub fn solo(n: usize, i: ProcessId) -> Self {
        Self::sequential(n, &[i])
    }

    /// Each process in `ids` writes and then reads all registers before the
    /// next one starts.
    pub fn sequential(n: usize, ids: &[ProcessId]) -> Self {
        let blocks: Vec<ProcSet> = ids.iter().map(|&i| ProcSet::singleton(i)).collect();
        Self::concurrency_classes(n, &blocks)
    }

    /// Immediate-snapshot execution made of the given concurrency classes:
    /// every member of a class writes, then every member reads all registers.
    pub fn concurrency_classes(n: usize, classes: &[ProcSet]) -> Self {
        let mut order = Vec::new();
        let mut participants = ProcSet::EMPTY;
        for &class in classes {
            participants = participants.union(class);
            order.extend(class.iter().map(Operation::Write));
            for reader in class.iter() {
                for target in 0..=n as ProcessId {
                    order.push(Operation::Read { reader, target });
                }
            }
        }
        WrExecution {
            n,
            participants,
            order,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn participants(&self) -> ProcSet {
        self.participants
    }

    pub fn order(&self) -> &[Operation] {
        &self.order
    }

    pub fn is_empty(&self) -> bool {
        self.participants.is_empty()
    }

    /// Checks that the order holds exactly one `w_i` and the `n + 1` reads
    /// `r_i(j)` of every participant, each read after the write.
    pub fn validate(&self) -> Result<(), ExecutionError> {
        let n = self.n;
        if n > crate::procset::MAX_DIMENSION {
            return Err(SizeBoundExceeded {
                what: format!("n = {n}"),
                bound: crate::procset::MAX_DIMENSION,
            }
            .into());
        }
        let mut written = ProcSet::EMPTY;
        let mut reads: HashMap<ProcessId, ProcSet> = HashMap::new();
        for &op in &self.order {
            let p = op.process();
            if !self.participants.contains(p) {
                return Err(ExecutionError::ForeignOperation(op));
            }
            match op {
                Operation::Write(_) => {
                    if written.contains(p) {
                        return Err(ExecutionError::DuplicateOperation(op));
                    }
                    if reads.get(&p).is_some_and(|r| !r.is_empty()) {
                        return Err(ExecutionError::WriteAfterRead(p));
                    }
                    written.insert(p);
                }
                Operation::Read { target, .. } => {
                    if target as usize > n {
                        return Err(ExecutionError::InvalidTarget { op, n });
                    }
                    let seen = reads.entry(p).or_default();
                    if seen.contains(target) {
                        return Err(ExecutionError::DuplicateOperation(op));
                    }
                    seen.insert(target);
                    if !written.contains(p) {
                        return Err(ExecutionError::WriteAfterRead(p));
                    }
                }
            }
        }
        for p in self.participants.iter() {
            if !written.contains(p) {
                return Err(ExecutionError::MissingOperation(Operation::Write(p)));
            }
            let got = reads.get(&p).copied().unwrap_or_default();
            if let Some(target) = ProcSet::full(n).difference(got).iter().next() {
                return Err(ExecutionError::MissingOperation(Operation::Read {
                    reader: p,
                    target,
                }));
            }
        }
        Ok(())
    }

    fn check_participant(&self, i: ProcessId) -> Result<(), ExecutionError> {
        if self.participants.contains(i) {
            Ok(())
        } else {
            Err(ExecutionError::NotAParticipant(i))
        }
    }

    /// `view(i) = { j in I : w_j precedes r_i(j) }`.
    pub fn local_view(&self, i: ProcessId) -> Result<LocalView, ExecutionError> {
        self.check_participant(i)?;
        let mut written = ProcSet::EMPTY;
        let mut seen = ProcSet::EMPTY;
        for &op in &self.order {
            match op {
                Operation::Write(p) => written.insert(p),
                Operation::Read { reader, target } if reader == i && written.contains(target) => {
                    seen.insert(target)
                }
                Operation::Read { .. } => {}
            }
        }
        Ok(LocalView { owner: i, seen })
    }

    pub fn view_profile(&self) -> ViewProfile {
        let mut written = ProcSet::EMPTY;
        let mut profile: BTreeMap<ProcessId, ProcSet> =
            self.participants.iter().map(|p| (p, ProcSet::EMPTY)).collect();
        for &op in &self.order {
            match op {
                Operation::Write(p) => written.insert(p),
                Operation::Read { reader, target } => {
                    if written.contains(target) {
                        profile.entry(reader).or_default().insert(target);
                    }
                }
            }
        }
        ViewProfile { views: profile }
    }

    /// True iff no write lands strictly between `i`'s first and last read.
    pub fn is_snapshot_view(&self, i: ProcessId) -> Result<bool, ExecutionError> {
        self.check_participant(i)?;
        let reads: Vec<usize> = self
            .order
            .iter()
            .enumerate()
            .filter(|(_, op)| matches!(op, Operation::Read { reader, .. } if *reader == i))
            .map(|(k, _)| k)
            .collect();
        let (Some(&first), Some(&last)) = (reads.first(), reads.last()) else {
            return Ok(true);
        };
        Ok(!self.order[first..=last].iter().any(|op| op.is_write()))
    }

    /// True iff the order factors into concurrency classes: a block of writes
    /// by some set `S`, followed by all reads of the members of `S`.
    pub fn is_immediate_snapshot(&self) -> bool {
        let reads_per_process = self.n + 1;
        let mut rest = &self.order[..];
        let mut covered = ProcSet::EMPTY;
        while !rest.is_empty() {
            let writes = rest.iter().take_while(|op| op.is_write()).count();
            if writes == 0 {
                return false;
            }
            let class: ProcSet = rest[..writes].iter().map(|op| op.process()).collect();
            let block = class.len() * reads_per_process;
            let reads = &rest[writes..];
            if reads.len() < block {
                return false;
            }
            if !reads[..block]
                .iter()
                .all(|op| !op.is_write() && class.contains(op.process()))
            {
                return false;
            }
            if !covered.is_disjoint(class) {
                return false;
            }
            covered = covered.union(class);
            rest = &reads[block..];
        }
        covered == self.participants
    }

    /// A participant whose view is the whole participant set; the last writer
    /// always qualifies.
    pub fn winner(&self) -> Option<ProcessId> {
        self.order
            .iter()
            .rev()
            .find(|op| op.is_write())
            .map(|op| op.process())
    }

    /// Processes whose view has exactly `n + 1 - round` ids.
    pub fn terminating(&self, round: usize) -> ProcSet {
        let want = (self.n + 1).saturating_sub(round);
        self.view_profile()
            .iter()
            .filter(|&(_, v)| v.len() == want)
            .map(|(p, _)| p)
            .collect()
    }

    /// `pi(alpha)`: the same order with every id relabeled.
    pub fn relabel(&self, map: &[ProcessId]) -> WrExecution {
        WrExecution {
            n: self.n,
            participants: self.participants.map(map),
            order: self.order.iter().map(|op| op.relabel(map)).collect(),
        }
    }

    /// Constructs a wr-execution on `participants` whose views are `views`.
    ///
    /// Missing `j` from `view(i)` forces `w_i` before `w_j`; such an
    /// execution exists iff these constraints are acyclic and every view
    /// contains its owner and lies inside the participant set.
    pub fn realize(
        n: usize,
        participants: ProcSet,
        views: &ViewProfile,
    ) -> Result<WrExecution, ExecutionError> {
        let unrealizable = ExecutionError::Unrealizable { participants };
        if views.participants() != participants {
            return Err(unrealizable);
        }
        for (i, v) in views.iter() {
            if !v.contains(i) || !v.is_subset(participants) {
                return Err(unrealizable);
            }
        }
        // Kahn's algorithm on "i writes before j" edges, smallest id first.
        let mut remaining = participants;
        let mut write_order = Vec::with_capacity(participants.len());
        while !remaining.is_empty() {
            let next = remaining.iter().find(|&j| {
                remaining
                    .iter()
                    .all(|i| i == j || views.get(i).is_some_and(|v| v.contains(j)))
            });
            let Some(j) = next else {
                return Err(unrealizable);
            };
            write_order.push(j);
            remaining.remove(j);
        }
        let slot: HashMap<ProcessId, usize> =
            write_order.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut buckets: Vec<Vec<Operation>> = vec![Vec::new(); write_order.len()];
        for (i, v) in views.iter() {
            for target in 0..=n as ProcessId {
                let after = if v.contains(target) {
                    slot[&i].max(slot[&target])
                } else {
                    slot[&i]
                };
                buckets[after].push(Operation::Read { reader: i, target });
            }
        }
        let mut order = Vec::new();
        for (k, &p) in write_order.iter().enumerate() {
            order.push(Operation::Write(p));
            buckets[k].sort();
            order.append(&mut buckets[k]);
        }
        WrExecution::new(n, participants, order)
    }
}

impl Serialize for WrExecution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.order.serialize(s)
    }
}

/// A sequence of wr-executions, one per layer of the recursive protocol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsExecution {
    n: usize,
    rounds: Vec<WrExecution>,
}

#[derive(Serialize, Deserialize)]
struct IsExecutionRecord {
    n: usize,
    rounds: Vec<Vec<Operation>>,
}

impl Serialize for IsExecution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        IsExecutionRecord {
            n: self.n,
            rounds: self.rounds.iter().map(|r| r.order.clone()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IsExecution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let rec = IsExecutionRecord::deserialize(d)?;
        let rounds = rec
            .rounds
            .into_iter()
            .map(|ops| {
                if ops.is_empty() {
                    Ok(WrExecution::empty(rec.n))
                } else {
                    WrExecution::from_ops(Some(rec.n), ops)
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        IsExecution::new(rec.n, rounds).map_err(D::Error::custom)
    }
}

impl IsExecution {
    /// Validates the round structure: round 0 runs on `[n]`, round `k + 1` on
    /// the round-`k` participants minus those whose view had `n + 1 - k` ids.
    pub fn new(n: usize, rounds: Vec<WrExecution>) -> Result<Self, ExecutionError> {
        if rounds.is_empty() || rounds.len() > n + 1 {
            return Err(ExecutionError::MalformedRound {
                round: rounds.len(),
                reason: format!("length must be between 1 and {}", n + 1),
            });
        }
        let mut expected = ProcSet::full(n);
        for (k, round) in rounds.iter().enumerate() {
            if round.n != n {
                return Err(ExecutionError::MalformedRound {
                    round: k,
                    reason: format!("dimension {} differs from {n}", round.n),
                });
            }
            round.validate()?;
            if round.participants != expected {
                return Err(ExecutionError::MalformedRound {
                    round: k,
                    reason: format!(
                        "participants {} but {} expected",
                        round.participants, expected
                    ),
                });
            }
            expected = expected.difference(round.terminating(k));
        }
        Ok(IsExecution { n, rounds })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rounds(&self) -> &[WrExecution] {
        &self.rounds
    }

    /// Number of rounds, `l(alpha)`.
    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    /// Round-by-round view profiles.
    pub fn round_profiles(&self) -> Vec<ViewProfile> {
        self.rounds.iter().map(WrExecution::view_profile).collect()
    }

    /// Each process's view in the last round it took part in.
    pub fn is_view(&self) -> ViewProfile {
        let mut out = ViewProfile::new();
        for round in &self.rounds {
            out.extend(&round.view_profile());
        }
        out
    }

    /// Merges the last two rounds into one with the same final profile.
    ///
    /// In the merged round, processes that stopped in the second-to-last round
    /// keep that view and the others take their view from the last round.
    pub fn compress_last_round(&self) -> Result<IsExecution, ExecutionError> {
        let len = self.rounds.len();
        if len < 2 {
            return Err(ExecutionError::TooShort(len));
        }
        let l = len - 2;
        let penultimate = &self.rounds[l];
        let last = self.rounds[l + 1].view_profile();
        let stopped = penultimate.terminating(l);
        let merged: ViewProfile = penultimate
            .view_profile()
            .iter()
            .map(|(i, v)| {
                if stopped.contains(i) {
                    (i, v)
                } else {
                    (i, last.get(i).unwrap_or(v))
                }
            })
            .collect();
        let merged_round = WrExecution::realize(self.n, penultimate.participants, &merged)?;
        let mut rounds = self.rounds[..l].to_vec();
        rounds.push(merged_round);
        IsExecution::new(self.n, rounds)
    }

    /// `pi(alpha)` applied round by round.
    pub fn relabel(&self, map: &[ProcessId]) -> IsExecution {
        IsExecution {
            n: self.n,
            rounds: self.rounds.iter().map(|r| r.relabel(map)).collect(),
        }
    }
}

/// All view profiles of wr-executions on `participants`.
///
/// Enumerates write orders; a process must see everyone who wrote no later
/// than itself and may see any subset of the later writers.
pub fn wr_profiles(participants: ProcSet) -> Vec<ViewProfile> {
    let ids: Vec<ProcessId> = participants.iter().collect();
    let mut out = BTreeSet::new();
    let mut order = ids.clone();
    permutations(&mut order, 0, &mut |write_order| {
        let mut choices: Vec<(ProcessId, ProcSet, ProcSet)> = Vec::new();
        let mut before = ProcSet::EMPTY;
        for (k, &p) in write_order.iter().enumerate() {
            before.insert(p);
            let later: ProcSet = write_order[k + 1..].iter().copied().collect();
            choices.push((p, before, later));
        }
        let mut current = ViewProfile::new();
        expand_choices(&choices, 0, &mut current, &mut out);
    });
    out.into_iter().collect()
}

fn expand_choices(
    choices: &[(ProcessId, ProcSet, ProcSet)],
    k: usize,
    current: &mut ViewProfile,
    out: &mut BTreeSet<ViewProfile>,
) {
    let Some(&(p, must, may)) = choices.get(k) else {
        out.insert(current.clone());
        return;
    };
    for extra in may.subsets() {
        current.insert(p, must.union(extra));
        expand_choices(choices, k + 1, current, out);
    }
}

fn permutations(items: &mut Vec<ProcessId>, k: usize, visit: &mut impl FnMut(&[ProcessId])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for j in k..items.len() {
        items.swap(k, j);
        permutations(items, k + 1, visit);
        items.swap(k, j);
    }
}

/// Every round-view sequence `(view(alpha_0), ..., view(alpha_l))` of an
/// IS-execution of length `l + 1`, trailing empty rounds included.
pub fn enumerate_round_views(n: usize, l: usize) -> Result<Vec<Vec<ViewProfile>>, ExecutionError> {
    limits::check_n(n)?;
    if l > n {
        return Err(ExecutionError::MalformedRound {
            round: l,
            reason: format!("l must be at most n = {n}"),
        });
    }
    let mut memo: HashMap<ProcSet, Vec<ViewProfile>> = HashMap::new();
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    round_views_rec(n, l, 0, ProcSet::full(n), &mut memo, &mut prefix, &mut out);
    Ok(out)
}

fn round_views_rec(
    n: usize,
    l: usize,
    k: usize,
    participants: ProcSet,
    memo: &mut HashMap<ProcSet, Vec<ViewProfile>>,
    prefix: &mut Vec<ViewProfile>,
    out: &mut Vec<Vec<ViewProfile>>,
) {
    let profiles = memo
        .entry(participants)
        .or_insert_with(|| wr_profiles(participants))
        .clone();
    for p in profiles {
        let stopped: ProcSet = p
            .iter()
            .filter(|&(_, v)| v.len() == n + 1 - k)
            .map(|(i, _)| i)
            .collect();
        prefix.push(p);
        if k == l {
            out.push(prefix.clone());
        } else {
            round_views_rec(n, l, k + 1, participants.difference(stopped), memo, prefix, out);
        }
        prefix.pop();
    }
}

/// `E_l`: the final view profiles of all IS-executions of length `l + 1`.
pub fn enumerate_view_family(n: usize, l: usize) -> Result<BTreeSet<ViewProfile>, ExecutionError> {
    limits::check_n(n)?;
    if l > n {
        return Err(ExecutionError::MalformedRound {
            round: l,
            reason: format!("l must be at most n = {n}"),
        });
    }
    let mut memo: HashMap<ProcSet, Vec<ViewProfile>> = HashMap::new();
    let mut out = BTreeSet::new();
    family_rec(n, l, 0, ProcSet::full(n), ViewProfile::new(), &mut memo, &mut out);
    Ok(out)
}

fn family_rec(
    n: usize,
    l: usize,
    k: usize,
    participants: ProcSet,
    settled: ViewProfile,
    memo: &mut HashMap<ProcSet, Vec<ViewProfile>>,
    out: &mut BTreeSet<ViewProfile>,
) {
    let profiles = memo
        .entry(participants)
        .or_insert_with(|| wr_profiles(participants))
        .clone();
    for p in profiles {
        if k == l {
            let mut fin = settled.clone();
            fin.extend(&p);
            out.insert(fin);
            continue;
        }
        let mut next = settled.clone();
        let mut continuing = participants;
        for (i, v) in p.iter() {
            if v.len() == n + 1 - k {
                next.insert(i, v);
                continuing.remove(i);
            }
        }
        family_rec(n, l, k + 1, continuing, next, memo, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(p: ProcessId) -> Operation {
        Operation::Write(p)
    }
    fn r(p: ProcessId, t: ProcessId) -> Operation {
        Operation::Read {
            reader: p,
            target: t,
        }
    }

    /// `w2 r2(0) w0 r0(0) r0(1) r0(2) w1 r1(0) r2(1) r1(1) r2(2) r1(2)`.
    fn running_example() -> WrExecution {
        WrExecution::new(
            2,
            ProcSet::full(2),
            vec![
                w(2),
                r(2, 0),
                w(0),
                r(0, 0),
                r(0, 1),
                r(0, 2),
                w(1),
                r(1, 0),
                r(2, 1),
                r(1, 1),
                r(2, 2),
                r(1, 2),
            ],
        )
        .unwrap()
    }

    #[test]
    fn running_example_views() {
        let e = running_example();
        assert_eq!(e.local_view(0).unwrap().seen, ProcSet::from([0, 2]));
        assert_eq!(e.local_view(2).unwrap().seen, ProcSet::from([1, 2]));
        let profile = e.view_profile();
        assert_eq!(profile.get(1), Some(ProcSet::full(2)));
        assert!(e.is_snapshot_view(0).unwrap());
        assert!(e.is_snapshot_view(1).unwrap());
        assert!(!e.is_snapshot_view(2).unwrap());
        assert!(!e.is_immediate_snapshot());
        assert_eq!(e.winner(), Some(1));
    }

    #[test]
    fn validate_rejects_bad_orders() {
        let err = WrExecution::new(1, ProcSet::from([0]), vec![r(0, 1), w(0), r(0, 0)]);
        assert_eq!(err, Err(ExecutionError::WriteAfterRead(0)));
        let err = WrExecution::new(1, ProcSet::from([0]), vec![w(0), r(0, 0)]);
        assert_eq!(err, Err(ExecutionError::MissingOperation(r(0, 1))));
        let err = WrExecution::new(1, ProcSet::from([0]), vec![w(0), r(0, 0), r(0, 0), r(0, 1)]);
        assert_eq!(err, Err(ExecutionError::DuplicateOperation(r(0, 0))));
        let err = WrExecution::new(1, ProcSet::from([0]), vec![w(0), w(1), r(0, 0), r(0, 1)]);
        assert_eq!(err, Err(ExecutionError::ForeignOperation(w(1))));
        let err = WrExecution::new(1, ProcSet::from([0]), vec![w(0), r(0, 0), r(0, 2)]);
        assert!(matches!(err, Err(ExecutionError::InvalidTarget { .. })));
    }

    #[test]
    fn solo_and_sequential() {
        let solo = WrExecution::solo(3, 0);
        solo.validate().unwrap();
        assert_eq!(solo.local_view(0).unwrap().seen, ProcSet::from([0]));
        assert!(solo.is_snapshot_view(0).unwrap());
        assert_eq!(solo.winner(), Some(0));
        assert_eq!(solo.local_view(1), Err(ExecutionError::NotAParticipant(1)));

        let seq = WrExecution::sequential(1, &[0, 1]);
        let p = seq.view_profile();
        assert_eq!(p.get(0), Some(ProcSet::from([0])));
        assert_eq!(p.get(1), Some(ProcSet::from([0, 1])));
        assert!(seq.is_immediate_snapshot());

        let block = WrExecution::concurrency_classes(1, &[ProcSet::from([0, 1])]);
        assert!(block.is_immediate_snapshot());
        assert_eq!(block.view_profile().get(0), Some(ProcSet::from([0, 1])));
    }

    #[test]
    fn three_round_example_profile() {
        let rounds = vec![
            WrExecution::sequential(2, &[0, 1, 2]),
            WrExecution::sequential(2, &[0, 1]),
            WrExecution::sequential(2, &[0]),
        ];
        let x = IsExecution::new(2, rounds).unwrap();
        let p = x.is_view();
        assert_eq!(p.get(0), Some(ProcSet::from([0])));
        assert_eq!(p.get(1), Some(ProcSet::from([0, 1])));
        assert_eq!(p.get(2), Some(ProcSet::full(2)));

        let short = x.compress_last_round().unwrap();
        assert_eq!(short.len(), 2);
        assert_eq!(short.is_view(), p);
        let shorter = short.compress_last_round().unwrap();
        assert_eq!(shorter.len(), 1);
        assert_eq!(shorter.is_view(), p);
        assert_eq!(
            shorter.compress_last_round(),
            Err(ExecutionError::TooShort(1))
        );
    }

    #[test]
    fn is_execution_rejects_wrong_participants() {
        let rounds = vec![
            WrExecution::sequential(1, &[0, 1]),
            WrExecution::solo(1, 1),
        ];
        assert!(matches!(
            IsExecution::new(1, rounds),
            Err(ExecutionError::MalformedRound { round: 1, .. })
        ));
    }

    #[test]
    fn family_for_one_dimension() {
        let e0 = enumerate_view_family(1, 0).unwrap();
        let expected: BTreeSet<ViewProfile> = [
            [(0, ProcSet::from([0, 1])), (1, ProcSet::from([0, 1]))],
            [(0, ProcSet::from([0])), (1, ProcSet::from([0, 1]))],
            [(0, ProcSet::from([0, 1])), (1, ProcSet::from([1]))],
        ]
        .into_iter()
        .map(|e| e.into_iter().collect())
        .collect();
        assert_eq!(e0, expected);
        assert_eq!(enumerate_view_family(1, 1).unwrap(), expected);
    }

    #[test]
    fn realize_matches_requested_views() {
        for p in wr_profiles(ProcSet::full(2)) {
            let e = WrExecution::realize(2, ProcSet::full(2), &p).unwrap();
            assert_eq!(e.view_profile(), p);
        }
        let cyclic: ViewProfile = [(0, ProcSet::from([0])), (1, ProcSet::from([1]))]
            .into_iter()
            .collect();
        assert!(WrExecution::realize(1, ProcSet::full(1), &cyclic).is_err());
    }

    #[test]
    fn dimension_guard() {
        assert!(matches!(
            enumerate_view_family(9, 0),
            Err(ExecutionError::DimensionTooLarge(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let e = running_example();
        let text = serde_json::to_string(&e).unwrap();
        assert!(text.starts_with(r#"[{"op":"w","p":2},{"op":"r","p":2,"t":0}"#));
        let ops: Vec<Operation> = serde_json::from_str(&text).unwrap();
        assert_eq!(WrExecution::from_ops(None, ops).unwrap(), e);

        let profile = e.view_profile();
        let text = serde_json::to_string(&profile).unwrap();
        assert_eq!(text, r#"{"views":{"0":[0,2],"1":[0,1,2],"2":[1,2]}}"#);
        let back: ViewProfile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, profile);
    }
}
