use std::fmt;
use std::hash::Hash;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::group::Permutation;
use crate::procset::{ProcSet, ProcessId};

/// A vertex type of a chromatic complex.
pub trait Label:
    Copy + Ord + Hash + fmt::Debug + fmt::Display + Serialize + DeserializeOwned + Send + Sync + 'static
{
    /// The process id coloring this vertex.
    fn color(&self) -> ProcessId;

    /// Image under a permutation of `[n]`, if the label type supports it.
    fn permute(&self, _p: &Permutation) -> Option<Self> {
        None
    }
}

/// A vertex `(i, view_i)` of a protocol complex. Serialized as `[i, [view...]]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(ProcessId, ProcSet)", into = "(ProcessId, ProcSet)")]
pub struct Vertex {
    pub process: ProcessId,
    pub view: ProcSet,
}

impl Vertex {
    pub fn new(process: ProcessId, view: impl Into<ProcSet>) -> Self {
        Vertex {
            process,
            view: view.into(),
        }
    }

    /// `i ∈ view_i`.
    pub fn is_valid(&self) -> bool {
        self.view.contains(self.process)
    }
}

impl From<(ProcessId, ProcSet)> for Vertex {
    fn from((process, view): (ProcessId, ProcSet)) -> Self {
        Vertex { process, view }
    }
}

impl From<Vertex> for (ProcessId, ProcSet) {
    fn from(v: Vertex) -> Self {
        (v.process, v.view)
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.process, self.view)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Label for Vertex {
    fn color(&self) -> ProcessId {
        self.process
    }

    fn permute(&self, p: &Permutation) -> Option<Self> {
        Some(Vertex {
            process: p.apply(self.process),
            view: p.apply_set(self.view),
        })
    }
}

/// A vertex of an iterated complex, identified by an interned key.
///
/// The key alone determines the vertex; the color is carried for chromatic
/// checks without a lookup. Serialized as `[color, key]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(ProcessId, u32)", into = "(ProcessId, u32)")]
pub struct Node {
    pub key: u32,
    pub color: ProcessId,
}

impl From<(ProcessId, u32)> for Node {
    fn from((color, key): (ProcessId, u32)) -> Self {
        Node { key, color }
    }
}

impl From<Node> for (ProcessId, u32) {
    fn from(v: Node) -> Self {
        (v.color, v.key)
    }
}

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}:{}", self.key, self.color)
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Label for Node {
    fn color(&self) -> ProcessId {
        self.color
    }
}

/// A finite simplex, stored as a sorted vertex list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex<V> {
    vertices: Vec<V>,
}

impl<V: Label> Simplex<V> {
    pub fn new(vertices: impl IntoIterator<Item = V>) -> Self {
        let mut vertices: Vec<V> = vertices.into_iter().collect();
        vertices.sort();
        vertices.dedup();
        Simplex { vertices }
    }

    pub fn empty() -> Self {
        Simplex {
            vertices: Vec::new(),
        }
    }

    pub fn vertices(&self) -> &[V] {
        &self.vertices
    }

    pub fn iter(&self) -> impl Iterator<Item = V> + '_ {
        self.vertices.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Dimension; the empty simplex has dimension `-1`.
    pub fn dim(&self) -> isize {
        self.vertices.len() as isize - 1
    }

    pub fn contains(&self, v: &V) -> bool {
        self.vertices.binary_search(v).is_ok()
    }

    /// Colors of the vertices.
    pub fn colors(&self) -> ProcSet {
        self.iter().map(|v| v.color()).collect()
    }

    /// No two vertices share a color.
    pub fn is_chromatic(&self) -> bool {
        self.colors().len() == self.len()
    }

    /// Vertex of a given color, if present.
    pub fn vertex_of(&self, color: ProcessId) -> Option<V> {
        self.iter().find(|v| v.color() == color)
    }

    pub fn is_face_of(&self, other: &Simplex<V>) -> bool {
        let mut it = other.vertices.iter();
        self.vertices.iter().all(|v| it.any(|w| w == v))
    }

    pub fn union(&self, other: &Simplex<V>) -> Simplex<V> {
        Simplex::new(self.iter().chain(other.iter()))
    }

    pub fn difference(&self, other: &Simplex<V>) -> Simplex<V> {
        Simplex {
            vertices: self.iter().filter(|v| !other.contains(v)).collect(),
        }
    }

    pub fn intersection(&self, other: &Simplex<V>) -> Simplex<V> {
        Simplex {
            vertices: self.iter().filter(|v| other.contains(v)).collect(),
        }
    }

    pub fn with(&self, v: V) -> Simplex<V> {
        let mut out = self.clone();
        if let Err(pos) = out.vertices.binary_search(&v) {
            out.vertices.insert(pos, v);
        }
        out
    }

    pub fn without(&self, v: &V) -> Simplex<V> {
        Simplex {
            vertices: self.iter().filter(|w| w != v).collect(),
        }
    }

    /// Sub-simplex selected by a bitmask over vertex positions.
    pub fn select(&self, mask: u32) -> Simplex<V> {
        Simplex {
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &v)| v)
                .collect(),
        }
    }

    /// All faces, the empty one included.
    pub fn faces(&self) -> impl Iterator<Item = Simplex<V>> + '_ {
        (0u32..(1u32 << self.len())).map(move |m| self.select(m))
    }

    /// All `rho` with `self ⊆ rho ⊆ top`.
    pub fn cofaces_within<'a>(&'a self, top: &'a Simplex<V>) -> impl Iterator<Item = Simplex<V>> + 'a {
        let free = top.difference(self);
        let k = free.len();
        (0u32..(1u32 << k)).map(move |m| self.union(&free.select(m)))
    }

    pub fn map<W: Label>(&self, f: impl FnMut(V) -> W) -> Simplex<W> {
        Simplex::new(self.iter().map(f))
    }

    pub fn permute(&self, p: &Permutation) -> Option<Simplex<V>> {
        let mut out = Vec::with_capacity(self.len());
        for v in self.iter() {
            out.push(v.permute(p)?);
        }
        Some(Simplex::new(out))
    }
}

impl<V: Label> FromIterator<V> for Simplex<V> {
    fn from_iter<I: IntoIterator<Item = V>>(iter: I) -> Self {
        Simplex::new(iter)
    }
}

impl<V: Label> fmt::Debug for Simplex<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, v) in self.vertices.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl<V: Label> fmt::Display for Simplex<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<V: Label> Serialize for Simplex<V> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.vertices.iter())
    }
}

impl<'de, V: Label> Deserialize<'de> for Simplex<V> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let vs = Vec::<V>::deserialize(d)?;
        Ok(Simplex::new(vs))
    }
}
