use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ComplexError;
use crate::procset::{ProcSet, ProcessId, MAX_PROCESSES};

/// A bijection of `[n]`, stored as its image table.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<ProcessId>,
}

impl Permutation {
    pub fn new(images: Vec<ProcessId>) -> Result<Self, ComplexError> {
        let len = images.len();
        let seen: ProcSet = images.iter().copied().collect();
        if len == 0
            || len > MAX_PROCESSES
            || images.iter().any(|&x| x as usize >= len)
            || seen.len() != len
        {
            return Err(ComplexError::InvalidPermutation(images));
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..=n as ProcessId).collect(),
        }
    }

    /// The transposition of `a` and `b` on `[n]`.
    pub fn transposition(n: usize, a: ProcessId, b: ProcessId) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a as usize, b as usize);
        p
    }

    /// `i ↦ i + 1 mod (n + 1)`.
    pub fn rotation(n: usize) -> Self {
        Permutation {
            images: (0..=n as ProcessId)
                .map(|i| ((i as usize + 1) % (n + 1)) as ProcessId)
                .collect(),
        }
    }

    /// Ambient dimension `n` (the permutation acts on `n + 1` points).
    pub fn n(&self) -> usize {
        self.images.len() - 1
    }

    pub fn images(&self) -> &[ProcessId] {
        &self.images
    }

    pub fn apply(&self, i: ProcessId) -> ProcessId {
        self.images[i as usize]
    }

    pub fn apply_set(&self, s: ProcSet) -> ProcSet {
        s.map(&self.images)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &x)| k == x as usize)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (k, &x) in self.images.iter().enumerate() {
            images[x as usize] = k as ProcessId;
        }
        Permutation { images }
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let images = Vec::<ProcessId>::deserialize(d)?;
        Permutation::new(images).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

/// A permutation group materialized from generators.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    n: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermutationGroup {
    /// Closure of the generators under composition. The identity is always
    /// included, so an empty generator list yields the trivial group.
    pub fn generated_by(n: usize, generators: Vec<Permutation>) -> Result<Self, ComplexError> {
        if let Some(g) = generators.iter().find(|g| g.n() != n) {
            return Err(ComplexError::InvalidPermutation(g.images.clone()));
        }
        let mut seen = BTreeSet::from([Permutation::identity(n)]);
        let mut queue = VecDeque::from([Permutation::identity(n)]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = g.compose(&x);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Ok(PermutationGroup {
            n,
            generators,
            elements: seen.into_iter().collect(),
        })
    }

    pub fn trivial(n: usize) -> Self {
        PermutationGroup {
            n,
            generators: Vec::new(),
            elements: vec![Permutation::identity(n)],
        }
    }

    /// `S_[n]`, generated by the transposition `(0 1)` and the rotation.
    pub fn symmetric(n: usize) -> Self {
        let generators = if n == 0 {
            Vec::new()
        } else {
            vec![Permutation::transposition(n, 0, 1), Permutation::rotation(n)]
        };
        Self::generated_by(n, generators).expect("generators act on [n]")
    }

    /// The cyclic group generated by the rotation.
    pub fn cyclic(n: usize) -> Self {
        Self::generated_by(n, vec![Permutation::rotation(n)]).expect("generator acts on [n]")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Elements in increasing image-table order; the identity comes first.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        assert_eq!(PermutationGroup::symmetric(2).order(), 6);
        assert_eq!(PermutationGroup::symmetric(3).order(), 24);
        assert_eq!(PermutationGroup::cyclic(2).order(), 3);
        assert_eq!(PermutationGroup::trivial(2).order(), 1);
        assert_eq!(PermutationGroup::symmetric(0).order(), 1);
    }

    #[test]
    fn inverse_and_compose() {
        let p = Permutation::new(vec![1, 2, 0]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(p.compose(&p).compose(&p), Permutation::identity(2));
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
    }
}
