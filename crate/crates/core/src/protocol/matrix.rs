use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ProtocolError;
use crate::complexes::{Simplex, Vertex};
use crate::procset::ProcSet;

/// Columns `(V_c, I_c)` with `V_t = [n]`, pairwise disjoint `I_c`, and
/// `I_a ⊆ V_b` whenever `a ≤ b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixForm {
    pub columns: Vec<(ProcSet, ProcSet)>,
}

impl MatrixForm {
    pub fn is_valid(&self, n: usize) -> bool {
        let Some(&(last, _)) = self.columns.last() else {
            return false;
        };
        if last != ProcSet::full(n) {
            return false;
        }
        let cols = &self.columns;
        for a in 0..cols.len() {
            for b in a..cols.len() {
                if !cols[a].1.is_subset(cols[b].0) {
                    return false;
                }
                if a != b && !cols[a].1.is_disjoint(cols[b].1) {
                    return false;
                }
            }
        }
        true
    }

    /// The simplex `{(i, V_c) : i ∈ I_c}`.
    pub fn to_simplex(&self) -> Simplex<Vertex> {
        self.columns
            .iter()
            .flat_map(|&(v, i)| i.iter().map(move |p| Vertex::new(p, v)))
            .collect()
    }
}

/// Groups the vertices of `s` by view and orders the groups so that every
/// column's `I` lies in the view of every later column.
///
/// Such an order is a topological order of "`X` must precede `Y` when
/// `I_Y ⊄ V_X`"; ties go to smaller `(|V|, V)`. The `[n]` column is last, and
/// is added with an empty `I` when no vertex has full view.
pub fn matrix_form(s: &Simplex<Vertex>, n: usize) -> Result<MatrixForm, ProtocolError> {
    let not_protocol = || ProtocolError::NotAProtocolSimplex(s.to_string());
    if !s.is_chromatic() || s.iter().any(|v| !v.is_valid() || !v.view.is_subset(ProcSet::full(n))) {
        return Err(not_protocol());
    }
    let full = ProcSet::full(n);
    let mut groups: BTreeMap<ProcSet, ProcSet> = BTreeMap::new();
    for v in s.iter() {
        groups.entry(v.view).or_default().insert(v.process);
    }
    let last = (full, groups.remove(&full).unwrap_or_default());
    let mut pending: Vec<(ProcSet, ProcSet)> = groups.into_iter().collect();
    pending.sort_by_key(|&(v, _)| (v.len(), v));
    let mut columns = Vec::with_capacity(pending.len() + 1);
    while !pending.is_empty() {
        // A column may go next when its I fits in every remaining view.
        let pick = pending
            .iter()
            .position(|&(_, ix)| pending.iter().all(|&(vy, _)| ix.is_subset(vy)))
            .ok_or_else(not_protocol)?;
        columns.push(pending.remove(pick));
    }
    columns.push(last);
    let m = MatrixForm { columns };
    if m.is_valid(n) {
        Ok(m)
    } else {
        Err(not_protocol())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::procset::ProcessId;
    use crate::protocol::build_wr;

    fn v(p: ProcessId, view: &[ProcessId]) -> Vertex {
        Vertex::new(p, view.iter().copied().collect::<ProcSet>())
    }

    #[test]
    fn staircase() {
        let s = Simplex::new([v(0, &[0]), v(1, &[0, 1]), v(2, &[0, 1, 2])]);
        let m = matrix_form(&s, 2).unwrap();
        assert_eq!(
            m.columns,
            vec![
                (ProcSet::from([0]), ProcSet::from([0])),
                (ProcSet::from([0, 1]), ProcSet::from([1])),
                (ProcSet::full(2), ProcSet::from([2])),
            ]
        );
        assert_eq!(m.to_simplex(), s);
    }

    #[test]
    fn single_columns() {
        let s = Simplex::new([v(2, &[0, 1, 2])]);
        assert_eq!(
            matrix_form(&s, 2).unwrap().columns,
            vec![(ProcSet::full(2), ProcSet::from([2]))]
        );
        let top = Simplex::new([v(0, &[0, 1, 2]), v(1, &[0, 1, 2]), v(2, &[0, 1, 2])]);
        assert_eq!(
            matrix_form(&top, 2).unwrap().columns,
            vec![(ProcSet::full(2), ProcSet::full(2))]
        );
    }

    #[test]
    fn round_trip_on_protocol_complex() {
        let wr = build_wr(2, 0).unwrap();
        for s in wr.complex.simplices() {
            let m = matrix_form(&s, 2).unwrap();
            assert_eq!(m.to_simplex(), s);
        }
    }

    #[test]
    fn rejects_cycles() {
        // 0 misses 1 and 1 misses 0: no order of the two columns works.
        let s = Simplex::new([v(0, &[0, 2]), v(1, &[1, 2])]);
        assert!(matrix_form(&s, 2).is_err());
    }
}
