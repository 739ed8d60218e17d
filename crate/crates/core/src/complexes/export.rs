//! DOT and OFF writers for complexes of dimension at most 2 (OFF also takes
//! 3-dimensional ones and writes their boundary triangles).

use std::collections::BTreeMap;
use std::fmt::Write;

use super::complex::Complex;
use super::simplex::{Label, Vertex};
use super::ComplexError;
use crate::procset::ProcessId;

const COLORS: [&str; 8] = [
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// Corners of the drawing simplex for colors `0..=3`.
pub fn corner(color: ProcessId) -> [f64; 3] {
    match color {
        0 => [0.0, 0.0, 0.0],
        1 => [1.0, 0.0, 0.0],
        2 => [0.5, 0.866_025_403_784_438_6, 0.0],
        3 => [0.5, 0.288_675_134_594_812_9, 0.816_496_580_927_726],
        k => [k as f64, 0.0, 0.0],
    }
}

/// Drawing position of a protocol vertex: the average of the corners in its
/// view, its own corner counted twice.
pub fn vertex_position(v: &Vertex) -> [f64; 3] {
    let mut acc = [0.0; 3];
    let mut weight = 0.0;
    for c in v.view.iter() {
        let w = if c == v.process { 2.0 } else { 1.0 };
        let p = corner(c);
        for k in 0..3 {
            acc[k] += w * p[k];
        }
        weight += w;
    }
    if weight == 0.0 {
        return corner(v.process);
    }
    acc.map(|x| x / weight)
}

fn check_dim<V: Label>(c: &Complex<V>, max: isize) -> Result<(), ComplexError> {
    match c.dim() {
        Some(d) if d > max => Err(ComplexError::ExportUnsupported(format!(
            "dimension {d} exceeds {max}"
        ))),
        _ => Ok(()),
    }
}

/// Undirected graph of the 1-skeleton; vertices filled by color and placed
/// at `pos`.
pub fn to_dot<V: Label>(
    c: &Complex<V>,
    label: impl Fn(&V) -> String,
    pos: impl Fn(&V) -> [f64; 3],
) -> Result<String, ComplexError> {
    check_dim(c, 2)?;
    let verts = c.vertices();
    let index: BTreeMap<V, usize> = verts.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut out = String::from("graph complex {\n  node [shape=circle, style=filled, fontsize=8];\n");
    for (&v, &k) in &index {
        let [x, y, _] = pos(&v);
        let _ = writeln!(
            out,
            "  v{k} [label=\"{}\", fillcolor=\"{}\", pos=\"{:.4},{:.4}!\"];",
            label(&v).replace('"', "'"),
            COLORS[v.color() as usize % COLORS.len()],
            x * 10.0,
            y * 10.0
        );
    }
    let mut edges = std::collections::BTreeSet::new();
    for s in c.maximal() {
        let vs = s.vertices();
        for a in 0..vs.len() {
            for b in a + 1..vs.len() {
                edges.insert((index[&vs[a]], index[&vs[b]]));
            }
        }
    }
    for (a, b) in edges {
        let _ = writeln!(out, "  v{a} -- v{b};");
    }
    out.push_str("}\n");
    Ok(out)
}

/// OFF mesh: one face per maximal simplex of dimension 1 or 2; tetrahedra
/// contribute their four triangles; isolated vertices are listed but
/// carry no face.
pub fn to_off<V: Label>(c: &Complex<V>, pos: impl Fn(&V) -> [f64; 3]) -> Result<String, ComplexError> {
    check_dim(c, 3)?;
    let verts = c.vertices();
    let index: BTreeMap<V, usize> = verts.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for s in c.maximal() {
        let ids: Vec<usize> = s.iter().map(|v| index[&v]).collect();
        match ids.len() {
            2 | 3 => faces.push(ids),
            4 => {
                for skip in 0..4 {
                    faces.push(ids.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &x)| x).collect());
                }
            }
            _ => {}
        }
    }
    let mut out = String::from("OFF\n");
    let _ = writeln!(out, "{} {} 0", verts.len(), faces.len());
    for v in &verts {
        let [x, y, z] = pos(v);
        let _ = writeln!(out, "{x:.6} {y:.6} {z:.6}");
    }
    for f in faces {
        let list: Vec<String> = f.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{} {}", f.len(), list.join(" "));
    }
    Ok(out)
}
