//! Runs the layered immediate-snapshot algorithm under each scheduler.

use wrcollapse::simulator::{fuzz, run, run_exhaustive, Scheduler};

fn main() -> Result<(), wrcollapse::Error> {
    let seq = run(2, &Scheduler::sequential(2, &[0, 1, 2]))?;
    println!("sequential: {} in {} rounds", seq.profile, seq.execution.len());
    let lock = run(2, &Scheduler::lock_step(2))?;
    println!("lock step: {}", lock.profile);
    for seed in 0..3 {
        let r = run(2, &Scheduler::SeededRandom { seed })?;
        println!("seed {seed}: {} sizes {:?}", r.profile, r.round_sizes);
    }
    let all = run_exhaustive(2)?;
    println!("exhaustive: {} profiles", all.len());
    let report = fuzz(2, 10_000, 42)?;
    println!(
        "fuzz: {} violations, coverage {}/{}",
        report.violations.len(),
        report.distinct_maximal,
        report.total_maximal
    );
    Ok(())
}
