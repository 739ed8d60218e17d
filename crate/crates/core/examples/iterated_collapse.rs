//! Collapses the iterated complex WR^(k)(Δⁿ) onto χ^(k)(Δⁿ).

use std::time::Instant;

use wrcollapse::collapse::iterated_collapse;
use wrcollapse::complexes::verify_trace;

fn main() -> Result<(), wrcollapse::Error> {
    for (n, k) in [(1, 2), (1, 3), (2, 1), (2, 2)] {
        let start = Instant::now();
        let it = iterated_collapse(n, k)?;
        verify_trace(&it.trace)?;
        let mid = it.rounds_end.as_ref().map(|c| c.maximal_count());
        println!(
            "n={n} k={k}: {} -> {} facets in {} steps (midpoint {mid:?}), {:.1?}",
            it.trace.source.maximal_count(),
            it.trace.target.maximal_count(),
            it.trace.steps.len(),
            start.elapsed()
        );
    }
    Ok(())
}
