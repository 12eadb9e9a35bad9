//! Plain-text file formats.
//!
//! Edge list: a header line `n k b` (vertex count, common degree, `1` if the
//! graph carries a bipartition else `0`), then one `u v` line per edge with
//! `u < v`, 0-based, in ascending lexicographic order.
//!
//! Spectrum CSV: header `eigenvalue,multiplicity`, one row per multiplicity
//! group in decreasing order, eigenvalues printed with four decimals.

use std::fmt::Write as _;

use expander_forge_core::{detect_bipartition, round4, Graph, Spectrum};

use crate::CliError;

pub fn write_edge_list(g: &Graph) -> Result<String, CliError> {
    let k = g
        .regular_degree()
        .ok_or_else(|| CliError::Invalid("edge-list export needs a regular graph".into()))?;
    let mut out = String::with_capacity(16 * g.edge_count());
    writeln!(out, "{} {} {}", g.n(), k, u8::from(g.is_bipartite_flagged())).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    Ok(out)
}

fn parse_fields<const N: usize>(line: &str, lineno: usize) -> Result<[usize; N], CliError> {
    let bad = || CliError::Invalid(format!("edge list line {lineno}: expected {N} integers, got {line:?}"));
    let fields: Vec<usize> = line
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    fields.try_into().map_err(|_| bad())
}

pub fn read_edge_list(text: &str) -> Result<Graph, CliError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::Invalid("edge list is empty".into()))?;
    let [n, k, bipartite] = parse_fields::<3>(header, 1)?;
    let mut edges = Vec::new();
    let mut prev = None;
    for (i, line) in lines {
        let [u, v] = parse_fields::<2>(line, i + 1)?;
        if u >= v || prev.is_some_and(|p| p >= (u, v)) {
            return Err(CliError::Invalid(format!(
                "edge list line {}: edges must satisfy u < v in ascending order",
                i + 1
            )));
        }
        prev = Some((u, v));
        edges.push((u, v));
    }
    let g = Graph::from_edges(n, &edges).map_err(|e| CliError::Invalid(e.to_string()))?;
    if g.regular_degree() != Some(k) {
        return Err(CliError::Invalid(format!("graph is not {k}-regular")));
    }
    match bipartite {
        0 => Ok(g),
        1 => {
            let sides = detect_bipartition(&g)
                .map_err(|e| CliError::Invalid(e.to_string()))?
                .ok_or_else(|| CliError::Invalid("header claims bipartite but graph has an odd cycle".into()))?;
            g.with_bipartition(sides).map_err(|e| CliError::Invalid(e.to_string()))
        }
        other => Err(CliError::Invalid(format!("bipartite flag must be 0 or 1, got {other}"))),
    }
}

/// Four-decimal fixed point, half away from zero, never `-0.0000`.
pub fn fmt4(x: f64) -> String {
    format!("{:.4}", round4(x))
}

pub fn spectrum_csv(s: &Spectrum) -> String {
    let mut out = String::from("eigenvalue,multiplicity\n");
    for &(value, mult) in s.grouped() {
        writeln!(out, "{},{}", fmt4(value), mult).unwrap();
    }
    out
}
