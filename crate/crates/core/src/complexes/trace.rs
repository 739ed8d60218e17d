use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::complex::Complex;
use super::group::Permutation;
use super::simplex::{Label, Simplex};
use super::ComplexError;

/// One collapse, or one batch of collapses with pairwise disjoint intervals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(deserialize = "V: Label"))]
pub struct CollapseStep<V: Label> {
    pub free: Simplex<V>,
    /// Every face collapsed together in this step, `free` among them. For
    /// group steps this is the orbit of `free`; for parallel steps it is an
    /// arbitrary set of faces with disjoint intervals.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<Vec<Simplex<V>>>,
    pub phase: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    /// Union of the intervals removed by this step.
    pub removed: Vec<Simplex<V>>,
    /// For group steps, `witness[i]` maps `free` to `orbit[i]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Permutation>>,
}

impl<V: Label> CollapseStep<V> {
    /// Faces collapsed by the step.
    pub fn members(&self) -> Vec<Simplex<V>> {
        match &self.orbit {
            Some(o) => o.clone(),
            None => vec![self.free.clone()],
        }
    }

    /// Applies the step to `c` unconditionally on order, checking that every
    /// member is free when its turn comes. Returns the removed simplices.
    fn apply(&self, c: &mut Complex<V>) -> Result<BTreeSet<Simplex<V>>, String> {
        let mut removed = BTreeSet::new();
        for m in self.members() {
            let part = c.collapse_in_place(&m).map_err(|e| e.to_string())?;
            removed.extend(part);
        }
        Ok(removed)
    }
}

/// A collapse sequence from `source` to `target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(deserialize = "V: Label"))]
pub struct CollapseTrace<V: Label> {
    pub source: Complex<V>,
    pub target: Complex<V>,
    pub steps: Vec<CollapseStep<V>>,
}

impl<V: Label> CollapseTrace<V> {
    /// Starts a trace at `source`; steps are appended through a [`TraceBuilder`].
    pub fn builder(source: Complex<V>) -> TraceBuilder<V> {
        TraceBuilder {
            trace_source: source.clone(),
            current: source,
            steps: Vec::new(),
        }
    }

    /// Number of individual collapses.
    pub fn collapse_count(&self) -> usize {
        self.steps.iter().map(|s| s.members().len()).sum()
    }

    pub fn phases(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for s in &self.steps {
            if out.last() != Some(&s.phase) {
                out.push(s.phase.clone());
            }
        }
        out
    }

    /// Concatenates `next`, whose source must equal this trace's target.
    pub fn then(mut self, next: CollapseTrace<V>) -> Result<CollapseTrace<V>, ComplexError> {
        if self.target != next.source {
            return Err(ComplexError::WrongResidual { step: self.steps.len() });
        }
        self.steps.extend(next.steps);
        self.target = next.target;
        Ok(self)
    }

    /// Complexes before and after each step, in order.
    pub fn replay(&self) -> Result<Vec<Complex<V>>, ComplexError> {
        let mut c = self.source.clone();
        let mut out = vec![c.clone()];
        for (k, step) in self.steps.iter().enumerate() {
            step.apply(&mut c)
                .map_err(|detail| ComplexError::StepNotFree { step: k, detail })?;
            out.push(c.clone());
        }
        Ok(out)
    }
}

/// Incrementally records a trace while mutating a working complex.
#[derive(Clone, Debug)]
pub struct TraceBuilder<V: Label> {
    trace_source: Complex<V>,
    current: Complex<V>,
    steps: Vec<CollapseStep<V>>,
}

impl<V: Label> TraceBuilder<V> {
    pub fn current(&self) -> &Complex<V> {
        &self.current
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Records an elementary collapse of a free face.
    pub fn collapse(
        &mut self,
        free: Simplex<V>,
        phase: &str,
        level: Option<usize>,
    ) -> Result<(), ComplexError> {
        let removed = self.current.collapse_in_place(&free)?;
        self.steps.push(CollapseStep {
            free,
            orbit: None,
            phase: phase.to_string(),
            level,
            removed: removed.into_iter().collect(),
            witness: None,
        });
        Ok(())
    }

    /// Records a batch of collapses whose intervals are pairwise disjoint.
    pub fn collapse_parallel(
        &mut self,
        members: Vec<Simplex<V>>,
        witness: Option<Vec<Permutation>>,
        phase: &str,
        level: Option<usize>,
    ) -> Result<(), ComplexError> {
        let step_index = self.steps.len();
        check_parallel(&self.current, &members, step_index)?;
        let mut removed = BTreeSet::new();
        for m in &members {
            removed.extend(self.current.collapse_in_place(m)?);
        }
        let free = members
            .first()
            .cloned()
            .ok_or(ComplexError::StepNotFree {
                step: step_index,
                detail: "empty batch".into(),
            })?;
        self.steps.push(CollapseStep {
            free,
            orbit: Some(members),
            phase: phase.to_string(),
            level,
            removed: removed.into_iter().collect(),
            witness,
        });
        Ok(())
    }

    pub fn finish(self) -> CollapseTrace<V> {
        CollapseTrace {
            source: self.trace_source,
            target: self.current,
            steps: self.steps,
        }
    }
}

/// Every member is free and no two members have a common coface.
fn check_parallel<V: Label>(
    c: &Complex<V>,
    members: &[Simplex<V>],
    step: usize,
) -> Result<(), ComplexError> {
    for m in members {
        if !c.contains(m) || c.free_coface(m).is_none() {
            return Err(ComplexError::StepNotFree {
                step,
                detail: format!("{m} is not free"),
            });
        }
    }
    let distinct: BTreeSet<&Simplex<V>> = members.iter().collect();
    if distinct.len() != members.len() {
        return Err(ComplexError::OrbitOverlap {
            step,
            detail: "repeated member".into(),
        });
    }
    for (a, x) in members.iter().enumerate() {
        for y in &members[a + 1..] {
            if c.contains(&x.union(y)) {
                return Err(ComplexError::OrbitOverlap {
                    step,
                    detail: format!("intervals of {x} and {y} meet"),
                });
            }
        }
    }
    Ok(())
}

/// Replays the trace, checking each step at its time of application and the
/// final complex against the recorded target.
pub fn verify_trace<V: Label>(t: &CollapseTrace<V>) -> Result<(), ComplexError> {
    let mut c = t.source.clone();
    for (k, step) in t.steps.iter().enumerate() {
        let members = step.members();
        if !members.contains(&step.free) {
            return Err(ComplexError::StepNotFree {
                step: k,
                detail: "the free face is not among the collapsed members".into(),
            });
        }
        if step.orbit.is_some() {
            check_parallel(&c, &members, k)?;
        } else if !c.contains(&step.free) || c.free_coface(&step.free).is_none() {
            return Err(ComplexError::StepNotFree {
                step: k,
                detail: format!("{} is not free", step.free),
            });
        }
        if let Some(w) = &step.witness {
            let ok = w.len() == members.len()
                && w.iter()
                    .zip(&members)
                    .all(|(p, m)| step.free.permute(p).as_ref() == Some(m));
            if !ok {
                return Err(ComplexError::WitnessMismatch { step: k });
            }
        }
        let mut expected = BTreeSet::new();
        for m in &members {
            let interval = c.star_interval(m).map_err(|e| ComplexError::StepNotFree {
                step: k,
                detail: e.to_string(),
            })?;
            expected.extend(interval);
        }
        let recorded: BTreeSet<Simplex<V>> = step.removed.iter().cloned().collect();
        if recorded != expected {
            return Err(ComplexError::IntervalMismatch { step: k });
        }
        step.apply(&mut c)
            .map_err(|detail| ComplexError::StepNotFree { step: k, detail })?;
    }
    if c != t.target {
        return Err(ComplexError::WrongResidual { step: t.steps.len() });
    }
    Ok(())
}
