//! Counts the view families E_0 ⊇ E_1 ⊇ … ⊇ E_n for n up to 3.

use wrcollapse::executions::enumerate_view_family;

fn main() -> Result<(), wrcollapse::Error> {
    for n in 0..=3 {
        let sizes: Vec<usize> = (0..=n)
            .map(|l| enumerate_view_family(n, l).map(|f| f.len()))
            .collect::<Result<_, _>>()?;
        println!("n={n}: {sizes:?}");
    }
    let e0 = enumerate_view_family(1, 0)?;
    println!("E_0 for two processes:");
    for p in &e0 {
        println!("  {p}");
    }
    Ok(())
}
