//! Collapses χ(Δⁿ) to the void complex and onto χ(Λ_p), stage by stage.

use std::collections::BTreeMap;

use wrcollapse::collapse::{chromatic_collapse_lambda, chromatic_collapse_void};
use wrcollapse::complexes::verify_trace;

fn main() -> Result<(), wrcollapse::Error> {
    for n in 1..=3 {
        let t = chromatic_collapse_void(n)?;
        verify_trace(&t)?;
        let mut per_stage = BTreeMap::new();
        for s in &t.steps {
            *per_stage.entry(s.level).or_insert(0) += 1;
        }
        println!("n={n}: void after {} collapses, per stage {per_stage:?}", t.steps.len());
    }
    for p in 0..=2 {
        let t = chromatic_collapse_lambda(2, p)?;
        verify_trace(&t)?;
        println!("χ(Δ²) -> χ(Λ_{p}): {} steps, phases {:?}, {} facets left", t.steps.len(), t.phases(), t.target.maximal_count());
    }
    Ok(())
}
