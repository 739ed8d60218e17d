//! Process identifiers and fixed-width process sets.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Identifier of a process in `[n] = {0, ..., n}`.
pub type ProcessId = u8;

/// Largest number of processes a [`ProcSet`] can hold.
pub const MAX_PROCESSES: usize = 16;

/// Largest ambient dimension `n` representable (`n + 1 <= MAX_PROCESSES`).
pub const MAX_DIMENSION: usize = MAX_PROCESSES - 1;

/// A set of process ids stored as a bitmask.
///
/// Ordering is by the numeric value of the mask, which is the canonical
/// "lexicographic" order used for tie-breaks throughout the crate.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProcSet(u16);

impl ProcSet {
    pub const EMPTY: ProcSet = ProcSet(0);

    pub const fn from_bits(bits: u16) -> Self {
        ProcSet(bits)
    }

    pub const fn bits(self) -> u16 {
        self.0
    }

    /// The full set `[n] = {0, ..., n}`.
    pub fn full(n: usize) -> Self {
        assert!(n < MAX_PROCESSES, "dimension {n} exceeds the process-set width");
        ProcSet(((1u32 << (n + 1)) - 1) as u16)
    }

    pub fn singleton(p: ProcessId) -> Self {
        ProcSet(1 << p)
    }

    pub fn contains(self, p: ProcessId) -> bool {
        (p as usize) < MAX_PROCESSES && self.0 & (1 << p) != 0
    }

    pub fn insert(&mut self, p: ProcessId) {
        self.0 |= 1 << p;
    }

    pub fn remove(&mut self, p: ProcessId) {
        self.0 &= !(1 << p);
    }

    pub fn with(self, p: ProcessId) -> Self {
        ProcSet(self.0 | (1 << p))
    }

    pub fn without(self, p: ProcessId) -> Self {
        ProcSet(self.0 & !(1 << p))
    }

    pub fn union(self, other: ProcSet) -> Self {
        ProcSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ProcSet) -> Self {
        ProcSet(self.0 & other.0)
    }

    pub fn difference(self, other: ProcSet) -> Self {
        ProcSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ProcSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: ProcSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Largest member, if any.
    pub fn max(self) -> Option<ProcessId> {
        if self.0 == 0 {
            None
        } else {
            Some((15 - self.0.leading_zeros()) as ProcessId)
        }
    }

    pub fn iter(self) -> impl Iterator<Item = ProcessId> {
        let bits = self.0;
        (0..MAX_PROCESSES as u8).filter(move |p| bits & (1 << p) != 0)
    }

    /// All subsets of `self`, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = ProcSet> {
        let full = self.0;
        let mut next = Some(0u16);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(ProcSet(cur))
        })
    }

    /// Relabels members through `map` (`map[i]` is the image of `i`).
    pub fn map(self, map: &[ProcessId]) -> ProcSet {
        self.iter().map(|p| map[p as usize]).collect()
    }
}

impl FromIterator<ProcessId> for ProcSet {
    fn from_iter<I: IntoIterator<Item = ProcessId>>(iter: I) -> Self {
        let mut s = ProcSet::EMPTY;
        for p in iter {
            s.insert(p);
        }
        s
    }
}

impl<const N: usize> From<[ProcessId; N]> for ProcSet {
    fn from(ids: [ProcessId; N]) -> Self {
        ids.into_iter().collect()
    }
}

impl fmt::Debug for ProcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ProcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for ProcSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ProcSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let ids = Vec::<ProcessId>::deserialize(deserializer)?;
        if let Some(bad) = ids.iter().find(|&&p| p as usize >= MAX_PROCESSES) {
            return Err(serde::de::Error::custom(format!(
                "process id {bad} exceeds the supported width"
            )));
        }
        Ok(ids.into_iter().collect())
    }
}
