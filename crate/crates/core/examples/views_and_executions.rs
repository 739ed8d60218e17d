//! Builds a one-round write/read execution by hand, prints each local view,
//! and reduces a three-round IS-execution to two rounds.

use wrcollapse::executions::{IsExecution, Operation, WrExecution};

fn main() -> Result<(), wrcollapse::Error> {
    use Operation::*;
    let r = |reader, target| Read { reader, target };
    let e = WrExecution::from_ops(
        Some(2),
        vec![
            Write(0),
            r(0, 0),
            r(0, 1),
            Write(2),
            r(2, 0),
            r(2, 2),
            Write(1),
            r(0, 2),
            r(1, 0),
            r(1, 1),
            r(1, 2),
            r(2, 1),
        ],
    )?;
    println!("{} operations", e.order().len());
    for (i, view) in e.view_profile().iter() {
        println!("  p{i} sees {view}  (snapshot view: {})", e.is_snapshot_view(i)?);
    }
    println!("winner: {:?}", e.winner());

    let is = IsExecution::new(
        2,
        vec![
            WrExecution::sequential(2, &[0, 1, 2]),
            WrExecution::sequential(2, &[0, 1]),
            WrExecution::solo(2, 0),
        ],
    )?;
    let short = is.compress_last_round()?;
    println!("{} rounds -> {} rounds, profile {}", is.len(), short.len(), short.is_view());
    Ok(())
}
