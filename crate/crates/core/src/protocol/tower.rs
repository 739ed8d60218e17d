//! Interned vertices of iterated subdivisions.
//!
//! Level 0 holds the corners of `Δⁿ` (key = color). A level-`k` vertex is a
//! color together with a simplex of level `k - 1` (its carrier), interned to
//! one integer key. A level-1 vertex `(i, V)` is exactly the protocol vertex
//! `(i, view = V)`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{ordered_partitions, partition_profile, profile_simplex, ProtocolError};
use crate::complexes::export::corner;
use crate::complexes::{Complex, Simplex, Vertex};
use crate::executions::{self, ViewProfile};
use crate::limits;
use crate::procset::{ProcSet, ProcessId};

pub use crate::complexes::Node;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeInfo {
    pub color: ProcessId,
    pub level: usize,
    /// Keys of the carrier simplex one level down, ascending.
    pub face: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct Tower {
    n: usize,
    nodes: Vec<NodeInfo>,
    index: HashMap<(ProcessId, Vec<u32>), u32>,
    partitions: HashMap<usize, Vec<Simplex<Vertex>>>,
    profiles: HashMap<usize, Vec<Simplex<Vertex>>>,
}

impl Tower {
    pub fn new(n: usize) -> Self {
        let nodes = (0..=n as ProcessId)
            .map(|c| NodeInfo {
                color: c,
                level: 0,
                face: Vec::new(),
            })
            .collect();
        Tower {
            n,
            nodes,
            index: HashMap::new(),
            partitions: HashMap::new(),
            profiles: HashMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rebuilds a tower from its serialized vertices.
    pub fn from_nodes(n: usize, nodes: BTreeMap<u32, NodeInfo>) -> Result<Self, ProtocolError> {
        let mut t = Tower::new(n);
        for (key, info) in nodes {
            let k = key as usize;
            if k <= n {
                if info.level != 0 || info.color as usize != k {
                    return Err(ProtocolError::NonChromaticComplex(format!("corner {key} is malformed")));
                }
                continue;
            }
            if k != t.nodes.len() || info.face.iter().any(|&f| f >= key) {
                return Err(ProtocolError::NonChromaticComplex(format!("vertex {key} is out of order")));
            }
            t.index.insert((info.color, info.face.clone()), key);
            t.nodes.push(info);
        }
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn info(&self, v: Node) -> &NodeInfo {
        &self.nodes[v.key as usize]
    }

    pub fn node(&self, key: u32) -> Node {
        Node {
            key,
            color: self.nodes[key as usize].color,
        }
    }

    pub fn level(&self, v: Node) -> usize {
        self.info(v).level
    }

    /// The corners of `Δⁿ`.
    pub fn base(&self) -> Simplex<Node> {
        (0..=self.n as u32).map(|k| self.node(k)).collect()
    }

    pub fn base_complex(&self) -> Complex<Node> {
        Complex::closure(self.n, [self.base()]).expect("distinct colors")
    }

    /// The vertex `(color, face)`.
    pub fn intern(&mut self, color: ProcessId, face: &Simplex<Node>) -> Node {
        let keys: Vec<u32> = face.iter().map(|v| v.key).collect();
        if let Some(&key) = self.index.get(&(color, keys.clone())) {
            return Node { key, color };
        }
        let level = face.iter().map(|v| self.level(v) + 1).max().unwrap_or(1);
        let key = self.nodes.len() as u32;
        self.nodes.push(NodeInfo {
            color,
            level,
            face: keys.clone(),
        });
        self.index.insert((color, keys), key);
        Node { key, color }
    }

    pub fn lookup(&self, color: ProcessId, face: &Simplex<Node>) -> Option<Node> {
        let keys: Vec<u32> = face.iter().map(|v| v.key).collect();
        self.index.get(&(color, keys)).map(|&key| Node { key, color })
    }

    /// The carrier of a vertex: its simplex one level down.
    pub fn carrier(&self, v: Node) -> Simplex<Node> {
        self.info(v).face.iter().map(|&k| self.node(k)).collect()
    }

    /// Union of the carriers of the vertices of `s`.
    pub fn carrier_of(&self, s: &Simplex<Node>) -> Simplex<Node> {
        Simplex::new(s.iter().flat_map(|v| self.carrier(v).iter().collect::<Vec<_>>()))
    }

    /// The level-1 node of a protocol vertex.
    pub fn from_vertex(&mut self, v: Vertex) -> Node {
        let face: Simplex<Node> = v.view.iter().map(|c| self.node(c as u32)).collect();
        self.intern(v.process, &face)
    }

    /// The protocol vertex of a level-1 node.
    pub fn to_vertex(&self, v: Node) -> Option<Vertex> {
        let info = self.info(v);
        if info.level != 1 {
            return None;
        }
        let view: ProcSet = info.face.iter().map(|&k| self.nodes[k as usize].color).collect();
        Some(Vertex::new(info.color, view))
    }

    pub fn lift(&mut self, c: &Complex<Vertex>) -> Complex<Node> {
        let maximal: Vec<Simplex<Node>> = c
            .maximal()
            .map(|s| Simplex::new(s.iter().map(|v| self.from_vertex(v))))
            .collect();
        Complex::closure(c.n(), maximal).expect("lifting keeps colors")
    }

    pub fn lift_simplex(&mut self, s: &Simplex<Vertex>) -> Simplex<Node> {
        Simplex::new(s.iter().map(|v| self.from_vertex(v)))
    }

    /// Inverse of [`Tower::lift`] on level-1 complexes.
    pub fn lower(&self, c: &Complex<Node>) -> Option<Complex<Vertex>> {
        let mut maximal = Vec::with_capacity(c.maximal_count());
        for s in c.maximal() {
            let mut vs = Vec::with_capacity(s.len());
            for v in s.iter() {
                vs.push(self.to_vertex(v)?);
            }
            maximal.push(Simplex::new(vs));
        }
        Complex::closure(c.n(), maximal).ok()
    }

    /// `f_σ`: sends the local vertex `(i, S)` of `WR(Δ^m)` or `χ(Δ^m)` to
    /// the vertex colored like the `i`-th vertex of `σ` whose carrier is the
    /// face of `σ` indexed by `S`. Vertices of `σ` are indexed by ascending
    /// color.
    pub fn local(&mut self, sigma: &Simplex<Node>, v: Vertex) -> Node {
        let by_color = sorted_by_color(sigma);
        let face: Simplex<Node> = v.view.iter().map(|j| by_color[j as usize]).collect();
        let color = by_color[v.process as usize].color;
        self.intern(color, &face)
    }

    pub fn local_simplex(&mut self, sigma: &Simplex<Node>, s: &Simplex<Vertex>) -> Simplex<Node> {
        Simplex::new(s.iter().map(|v| self.local(sigma, v)).collect::<Vec<_>>())
    }

    fn partition_simplices(&mut self, m: usize) -> Vec<Simplex<Vertex>> {
        self.partitions
            .entry(m)
            .or_insert_with(|| {
                ordered_partitions(ProcSet::full(m))
                    .iter()
                    .map(|b| profile_simplex(&partition_profile(b)))
                    .collect()
            })
            .clone()
    }

    fn profile_simplices(&mut self, m: usize) -> Result<Vec<Simplex<Vertex>>, ProtocolError> {
        if let Some(p) = self.profiles.get(&m) {
            return Ok(p.clone());
        }
        let fam = executions::enumerate_view_family(m, 0)?;
        let out: Vec<Simplex<Vertex>> = fam.iter().map(|p: &ViewProfile| profile_simplex(p)).collect();
        self.profiles.insert(m, out.clone());
        Ok(out)
    }

    /// Drawing position: a vertex sits at the average of its carrier's
    /// positions with its own color's carrier vertex counted twice.
    pub fn position(&self, v: Node) -> [f64; 3] {
        let info = self.info(v);
        if info.level == 0 {
            return corner(info.color);
        }
        let face = self.carrier(v);
        let mut acc = [0.0; 3];
        let mut add = |p: [f64; 3]| {
            for k in 0..3 {
                acc[k] += p[k];
            }
        };
        if let Some(own) = face.vertex_of(info.color) {
            add(self.position(own));
        }
        for w in face.iter() {
            add(self.position(w));
        }
        let weight = (face.len() + face.vertex_of(info.color).is_some() as usize) as f64;
        acc.map(|x| x / weight)
    }

    /// All interned vertices keyed by id, for serialization.
    pub fn nodes(&self) -> BTreeMap<u32, NodeInfo> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(k, info)| (k as u32, info.clone()))
            .collect()
    }
}

fn sorted_by_color(sigma: &Simplex<Node>) -> Vec<Node> {
    let mut vs: Vec<Node> = sigma.iter().collect();
    vs.sort_by_key(|v| v.color);
    vs
}

fn check_chromatic(c: &Complex<Node>) -> Result<(), ProtocolError> {
    match c.maximal().find(|s| !s.is_chromatic()) {
        Some(s) => Err(ProtocolError::NonChromaticComplex(s.to_string())),
        None => Ok(()),
    }
}

/// A subdivision together with its carrier map.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: Complex<Node>,
    pub carrier: BTreeMap<Node, Simplex<Node>>,
}

fn carriers(c: &Complex<Node>, tower: &Tower) -> BTreeMap<Node, Simplex<Node>> {
    c.vertices().into_iter().map(|v| (v, tower.carrier(v))).collect()
}

/// `χ(c)`: the union of `χ(σ)` over the maximal simplices `σ`, glued along
/// shared faces through interning.
pub fn chromatic_of(c: &Complex<Node>, tower: &mut Tower) -> Result<Subdivision, ProtocolError> {
    check_chromatic(c)?;
    let mut maximal = Vec::new();
    for sigma in c.maximal() {
        let local = tower.partition_simplices(sigma.len().saturating_sub(1));
        if sigma.is_empty() {
            maximal.push(Simplex::empty());
            continue;
        }
        for s in &local {
            maximal.push(tower.local_simplex(sigma, s));
        }
    }
    let complex = Complex::closure(c.n(), maximal)?;
    Ok(Subdivision {
        carrier: carriers(&complex, tower),
        complex,
    })
}

/// `⋃_σ WR(σ)` over the maximal simplices of `c`.
pub fn wr_of(c: &Complex<Node>, tower: &mut Tower) -> Result<Subdivision, ProtocolError> {
    check_chromatic(c)?;
    let mut maximal = Vec::new();
    for sigma in c.maximal() {
        if sigma.is_empty() {
            maximal.push(Simplex::empty());
            continue;
        }
        let local = tower.profile_simplices(sigma.len() - 1)?;
        for s in &local {
            maximal.push(tower.local_simplex(sigma, s));
        }
    }
    let complex = Complex::closure(c.n(), maximal)?;
    Ok(Subdivision {
        carrier: carriers(&complex, tower),
        complex,
    })
}

/// `χ^(k)(Δⁿ)` in `tower`.
pub fn chromatic_iterated(n: usize, k: usize, tower: &mut Tower) -> Result<Complex<Node>, ProtocolError> {
    limits::check_iterated(n, k)?;
    let mut c = tower.base_complex();
    for _ in 0..k {
        c = chromatic_of(&c, tower)?.complex;
    }
    Ok(c)
}

/// `WR^(k)(Δⁿ)` with its carrier map into `WR^(k-1)(Δⁿ)`.
#[derive(Clone, Debug)]
pub struct IteratedComplex {
    pub n: usize,
    pub k: usize,
    pub tower: Tower,
    pub complex: Complex<Node>,
    /// `WR^(k-1)(Δⁿ)`; `Δⁿ` itself when `k = 1`.
    pub lower: Complex<Node>,
}

impl IteratedComplex {
    pub fn carrier(&self) -> BTreeMap<Node, Simplex<Node>> {
        carriers(&self.complex, &self.tower)
    }
}

pub fn build_iterated(n: usize, k: usize) -> Result<IteratedComplex, ProtocolError> {
    if k == 0 {
        return Err(ProtocolError::InvalidLevel { l: 0, max: usize::MAX });
    }
    limits::check_iterated(n, k)?;
    let mut tower = Tower::new(n);
    let mut lower = tower.base_complex();
    let mut complex = wr_of(&lower, &mut tower)?.complex;
    for _ in 1..k {
        let next = wr_of(&complex, &mut tower)?.complex;
        lower = std::mem::replace(&mut complex, next);
    }
    Ok(IteratedComplex {
        n,
        k,
        tower,
        complex,
        lower,
    })
}

#[derive(Serialize)]
struct IteratedRecord<'a> {
    n: usize,
    k: usize,
    maximal: Vec<&'a Simplex<Node>>,
    carrier: BTreeMap<u32, Vec<u32>>,
    nodes: BTreeMap<u32, NodeInfo>,
}

impl Serialize for IteratedComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        IteratedRecord {
            n: self.n,
            k: self.k,
            maximal: self.complex.maximal().collect(),
            carrier: self
                .carrier()
                .into_iter()
                .map(|(v, c)| (v.key, c.iter().map(|w| w.key).collect()))
                .collect(),
            nodes: self.tower.nodes(),
        }
        .serialize(s)
    }
}
