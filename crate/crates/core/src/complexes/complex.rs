use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::group::{Permutation, PermutationGroup};
use super::simplex::{Label, Simplex};
use super::ComplexError;

/// A finite simplicial complex stored by its maximal simplices.
///
/// Faces are implicit. A complex with no maximal simplex is the void complex;
/// the empty complex `{∅}` has the empty simplex as its only maximal simplex.
#[derive(Clone, Debug)]
pub struct Complex<V: Label> {
    n: usize,
    maximal: BTreeSet<Simplex<V>>,
    star: HashMap<V, BTreeSet<Simplex<V>>>,
}

impl<V: Label> PartialEq for Complex<V> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.maximal == other.maximal
    }
}

impl<V: Label> Eq for Complex<V> {}

/// Per-dimension face counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    /// `faces[d]` is the number of `d`-simplices.
    pub faces: Vec<usize>,
    /// `maximal[d]` is the number of maximal `d`-simplices.
    pub maximal: Vec<usize>,
    pub total: usize,
    pub euler: Option<i64>,
}

impl<V: Label> Complex<V> {
    pub fn void(n: usize) -> Self {
        Complex {
            n,
            maximal: BTreeSet::new(),
            star: HashMap::new(),
        }
    }

    /// The complex `{∅}`.
    pub fn empty(n: usize) -> Self {
        let mut c = Self::void(n);
        c.maximal.insert(Simplex::empty());
        c
    }

    /// Smallest complex containing every generator.
    pub fn closure(
        n: usize,
        generators: impl IntoIterator<Item = Simplex<V>>,
    ) -> Result<Self, ComplexError> {
        let mut gens: Vec<Simplex<V>> = generators.into_iter().collect();
        if let Some(bad) = gens.iter().find(|s| !s.is_chromatic()) {
            return Err(ComplexError::NonChromaticSimplex(bad.to_string()));
        }
        gens.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        gens.dedup();
        let mut c = Self::void(n);
        for s in gens {
            if !c.contains(&s) {
                c.insert_maximal(s);
            }
        }
        Ok(c)
    }

    /// Builds from simplices already known to be pairwise incomparable.
    pub(crate) fn from_maximal_unchecked(n: usize, maximal: impl IntoIterator<Item = Simplex<V>>) -> Self {
        let mut c = Self::void(n);
        for s in maximal {
            c.insert_maximal(s);
        }
        c
    }

    fn insert_maximal(&mut self, s: Simplex<V>) {
        if !s.is_empty() {
            self.maximal.remove(&Simplex::empty());
        }
        for v in s.iter() {
            self.star.entry(v).or_default().insert(s.clone());
        }
        self.maximal.insert(s);
    }

    fn remove_maximal(&mut self, s: &Simplex<V>) {
        self.maximal.remove(s);
        for v in s.iter() {
            if let Some(set) = self.star.get_mut(&v) {
                set.remove(s);
                if set.is_empty() {
                    self.star.remove(&v);
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_void(&self) -> bool {
        self.maximal.is_empty()
    }

    /// True for `{∅}`.
    pub fn is_empty_complex(&self) -> bool {
        self.maximal.len() == 1 && self.maximal.iter().next().is_some_and(|s| s.is_empty())
    }

    pub fn maximal(&self) -> impl Iterator<Item = &Simplex<V>> {
        self.maximal.iter()
    }

    pub fn maximal_set(&self) -> &BTreeSet<Simplex<V>> {
        &self.maximal
    }

    pub fn maximal_count(&self) -> usize {
        self.maximal.len()
    }

    /// Largest dimension of a simplex, `-1` for `{∅}` and `None` if void.
    pub fn dim(&self) -> Option<isize> {
        self.maximal.iter().map(|s| s.dim()).max()
    }

    pub fn vertices(&self) -> BTreeSet<V> {
        self.star.keys().copied().collect()
    }

    pub fn is_chromatic(&self) -> bool {
        self.maximal.iter().all(|s| s.is_chromatic())
    }

    pub fn contains(&self, t: &Simplex<V>) -> bool {
        match self.smallest_star(t) {
            None => !self.is_void(),
            Some(Some(star)) => star.iter().any(|s| t.is_face_of(s)),
            Some(None) => false,
        }
    }

    /// `None` for the empty simplex, `Some(None)` if a vertex of `t` is absent.
    fn smallest_star(&self, t: &Simplex<V>) -> Option<Option<&BTreeSet<Simplex<V>>>> {
        if t.is_empty() {
            return None;
        }
        let mut best: Option<&BTreeSet<Simplex<V>>> = None;
        for v in t.iter() {
            match self.star.get(&v) {
                None => return Some(None),
                Some(s) => {
                    if best.is_none_or(|b| s.len() < b.len()) {
                        best = Some(s);
                    }
                }
            }
        }
        Some(best)
    }

    /// Maximal simplices containing `t`.
    pub fn maximal_cofaces(&self, t: &Simplex<V>) -> Vec<&Simplex<V>> {
        match self.smallest_star(t) {
            None => self.maximal.iter().collect(),
            Some(Some(star)) => star.iter().filter(|s| t.is_face_of(s)).collect(),
            Some(None) => Vec::new(),
        }
    }

    fn require(&self, t: &Simplex<V>) -> Result<(), ComplexError> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(ComplexError::NotInComplex(t.to_string()))
        }
    }

    /// `I(t)`: every simplex of the complex containing `t`, `t` included.
    pub fn star_interval(&self, t: &Simplex<V>) -> Result<BTreeSet<Simplex<V>>, ComplexError> {
        self.require(t)?;
        let mut out = BTreeSet::new();
        for s in self.maximal_cofaces(t) {
            out.extend(t.cofaces_within(s));
        }
        Ok(out)
    }

    /// The unique maximal coface of `t` when `t` is free.
    pub fn free_coface(&self, t: &Simplex<V>) -> Option<&Simplex<V>> {
        let cof = self.maximal_cofaces(t);
        match cof.as_slice() {
            [only] if only.len() > t.len() => Some(only),
            _ => None,
        }
    }

    /// Exactly one maximal simplex contains `t`, and properly.
    pub fn is_free(&self, t: &Simplex<V>) -> Result<bool, ComplexError> {
        self.require(t)?;
        Ok(self.free_coface(t).is_some())
    }

    /// Removes `I(t)` for a free `t`, returning the removed simplices.
    pub fn collapse_in_place(&mut self, t: &Simplex<V>) -> Result<BTreeSet<Simplex<V>>, ComplexError> {
        self.require(t)?;
        let sigma = self
            .free_coface(t)
            .cloned()
            .ok_or_else(|| ComplexError::NotFree(t.to_string()))?;
        let removed: BTreeSet<Simplex<V>> = t.cofaces_within(&sigma).collect();
        self.remove_maximal(&sigma);
        for v in t.iter() {
            let facet = sigma.without(&v);
            if !self.contains(&facet) {
                self.insert_maximal(facet);
            }
        }
        Ok(removed)
    }

    /// `c ↘_t c'`.
    pub fn collapse(&self, t: &Simplex<V>) -> Result<Complex<V>, ComplexError> {
        let mut c = self.clone();
        c.collapse_in_place(t)?;
        Ok(c)
    }

    /// Every nonempty simplex.
    pub fn simplices(&self) -> BTreeSet<Simplex<V>> {
        let mut out = BTreeSet::new();
        for s in &self.maximal {
            for f in s.faces() {
                if !f.is_empty() {
                    out.insert(f);
                }
            }
        }
        out
    }

    /// Nonempty simplices of `self` that are not in `other`.
    pub fn difference(&self, other: &Complex<V>) -> BTreeSet<Simplex<V>> {
        self.simplices()
            .into_iter()
            .filter(|s| !other.contains(s))
            .collect()
    }

    pub fn is_subcomplex_of(&self, other: &Complex<V>) -> bool {
        self.maximal.iter().all(|s| other.contains(s))
    }

    pub fn union(&self, other: &Complex<V>) -> Complex<V> {
        Complex::closure(self.n.max(other.n), self.maximal.iter().chain(other.maximal.iter()).cloned())
            .expect("chromatic inputs stay chromatic")
    }

    pub fn census(&self) -> Census {
        let top = self.dim().unwrap_or(-1).max(-1);
        let mut faces = vec![0usize; (top + 1) as usize];
        let mut maximal = vec![0usize; (top + 1) as usize];
        for s in self.simplices() {
            faces[s.dim() as usize] += 1;
        }
        for s in &self.maximal {
            if !s.is_empty() {
                maximal[s.dim() as usize] += 1;
            }
        }
        let total = faces.iter().sum();
        Census {
            euler: self.euler_characteristic().ok(),
            faces,
            maximal,
            total,
        }
    }

    /// Alternating face count over nonempty simplices.
    pub fn euler_characteristic(&self) -> Result<i64, ComplexError> {
        if self.is_void() {
            return Err(ComplexError::VoidComplex);
        }
        Ok(self
            .simplices()
            .iter()
            .map(|s| if s.dim() % 2 == 0 { 1 } else { -1 })
            .sum())
    }

    /// Applies a vertex map that is injective on every simplex.
    pub fn map<W: Label>(&self, mut f: impl FnMut(V) -> W) -> Result<Complex<W>, ComplexError> {
        Complex::closure(self.n, self.maximal.iter().map(|s| s.map(&mut f)))
    }

    /// `π(c)`; `None` if the label type carries no permutation action.
    pub fn permute(&self, p: &Permutation) -> Option<Complex<V>> {
        let mut out = Vec::with_capacity(self.maximal.len());
        for s in &self.maximal {
            out.push(s.permute(p)?);
        }
        Some(Complex::from_maximal_unchecked(self.n, out))
    }

    /// True iff every generator maps the complex onto itself.
    pub fn is_invariant(&self, g: &PermutationGroup) -> bool {
        g.generators().iter().all(|p| {
            self.maximal
                .iter()
                .all(|s| s.permute(p).is_some_and(|img| self.maximal.contains(&img)))
        })
    }

    /// Distinct images of `t` under the group in lexicographic order, each
    /// with the first group element producing it.
    pub fn orbit(t: &Simplex<V>, g: &PermutationGroup) -> Result<Vec<(Simplex<V>, Permutation)>, ComplexError> {
        let mut out: BTreeMap<Simplex<V>, Permutation> = BTreeMap::new();
        for p in g.elements() {
            let img = t
                .permute(p)
                .ok_or_else(|| ComplexError::NoGroupAction(t.to_string()))?;
            out.entry(img).or_insert_with(|| p.clone());
        }
        Ok(out.into_iter().collect())
    }

    /// `t` is free and `I(t) ∩ I(g t) = ∅` whenever `g t ≠ t`.
    pub fn is_g_free(&self, t: &Simplex<V>, g: &PermutationGroup) -> Result<bool, ComplexError> {
        self.require(t)?;
        if !self.is_invariant(g) {
            return Err(ComplexError::ComplexNotInvariant);
        }
        if !self.is_free(t)? {
            return Ok(false);
        }
        // Two intervals meet iff the union of their bottoms is a simplex.
        for (img, _) in Self::orbit(t, g)? {
            if &img != t && self.contains(&t.union(&img)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Removes `⋃_g I(g t)`; members of the orbit are collapsed in
    /// lexicographic order.
    pub fn g_collapse(&self, t: &Simplex<V>, g: &PermutationGroup) -> Result<Complex<V>, ComplexError> {
        if !self.is_g_free(t, g)? {
            return Err(ComplexError::NotGFree(t.to_string()));
        }
        let mut c = self.clone();
        for (img, _) in Self::orbit(t, g)? {
            c.collapse_in_place(&img)?;
        }
        Ok(c)
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexRecord<V: Label> {
    n: usize,
    #[serde(bound(deserialize = "V: Label"))]
    maximal: Vec<Simplex<V>>,
}

impl<V: Label> Serialize for Complex<V> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ComplexRecord {
            n: self.n,
            maximal: self.maximal.iter().cloned().collect(),
        }
        .serialize(s)
    }
}

impl<'de, V: Label> Deserialize<'de> for Complex<V> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rec = ComplexRecord::<V>::deserialize(d)?;
        Complex::closure(rec.n, rec.maximal).map_err(serde::de::Error::custom)
    }
}
