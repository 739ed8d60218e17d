//! Writes DOT and OFF files for WR(Δ²), χ(Δ²) and χ(Λ_0) into a directory
//! (default `figures/`).

use std::fs;
use std::path::PathBuf;

use wrcollapse::complexes::export::{to_dot, to_off, vertex_position};
use wrcollapse::protocol::{build_wr, chromatic_lambda, chromatic_standard};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    fs::create_dir_all(&dir)?;
    let complexes = [
        ("wr", build_wr(2, 0)?.complex),
        ("chromatic", chromatic_standard(2)?),
        ("lambda0", chromatic_lambda(2, 0)?),
    ];
    for (name, c) in &complexes {
        fs::write(dir.join(format!("{name}.dot")), to_dot(c, |v| v.to_string(), vertex_position)?)?;
        fs::write(dir.join(format!("{name}.off")), to_off(c, vertex_position)?)?;
        println!("{name}: {} facets", c.maximal_count());
    }
    println!("wrote {}", dir.display());
    Ok(())
}
