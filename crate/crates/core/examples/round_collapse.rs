//! Collapses WR_0(Δ²) onto χ(Δ²), plainly and orbit by orbit, and replays
//! both traces.

use wrcollapse::collapse::{collapse_round, equivariant_collapse_round, interval_decomposition};
use wrcollapse::complexes::verify_trace;

fn main() -> Result<(), wrcollapse::Error> {
    let d = interval_decomposition(2, 0)?;
    println!("{} intervals cover WR_0 \\ WR_1:", d.intervals.len());
    for piece in &d.intervals {
        println!("  [{}, {}]", piece.bottom, piece.top);
    }

    let plain = collapse_round(2, 0)?;
    verify_trace(&plain)?;
    println!("plain: {} steps", plain.steps.len());

    let eq = equivariant_collapse_round(2, 0)?;
    verify_trace(&eq)?;
    for step in &eq.steps {
        println!("orbit of {} ({} members, {} simplices removed)", step.free, step.members().len(), step.removed.len());
    }
    println!("same target: {}", plain.target == eq.target);
    Ok(())
}
