//! Builds WR_l(Δ²) for every level, prints its census, and classifies the
//! simplices of WR_0 by whether they survive to WR_1.

use wrcollapse::protocol::{build_wr, chromatic_standard, in_next_level, matrix_form};

fn main() -> Result<(), wrcollapse::Error> {
    let n = 2;
    for l in 0..=n {
        let c = build_wr(n, l)?.complex;
        let census = c.census();
        println!("WR_{l}: faces {:?}, euler {:?}", census.faces, census.euler);
    }
    println!("WR_2 = χ: {}", build_wr(n, n)?.complex == chromatic_standard(n)?);

    let wr0 = build_wr(n, 0)?.complex;
    let (stay, leave): (Vec<_>, Vec<_>) = wr0
        .simplices()
        .into_iter()
        .filter(|s| !s.is_empty())
        .partition(|s| in_next_level(s, n, 0));
    println!("{} simplices survive, {} leave", stay.len(), leave.len());
    if let Some(top) = leave.iter().max_by_key(|s| s.len()) {
        let m = matrix_form(top, n)?;
        println!("{top} has columns {:?}", m.columns);
    }
    Ok(())
}
