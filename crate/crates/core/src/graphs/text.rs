//! Adjacency-list text format. A block per graph:
//!
//! ```text
//! # name
//! 1: 2 3 4
//! 2: 1 4 3
//! ```
//!
//! Vertex labels are 1-based and listed in order; neighbours follow the clockwise
//! rotation. Blocks are separated by blank lines; `#` lines name the next graph.

use super::{GraphError, PlanarEmbeddedGraph};
use std::fmt::Write as _;

pub fn write_adjacency_text<'a>(
    graphs: impl IntoIterator<Item = (Option<&'a str>, &'a PlanarEmbeddedGraph)>,
) -> String {
    let mut out = String::new();
    for (k, (name, g)) in graphs.into_iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        if let Some(name) = name {
            let _ = writeln!(out, "# {name}");
        }
        for v in 0..g.n() {
            let _ = write!(out, "{}:", v + 1);
            for &u in g.neighbors(v) {
                let _ = write!(out, " {}", u + 1);
            }
            out.push('\n');
        }
    }
    out
}

/// Returns `(name, graph)` pairs; errors carry the 1-based line number as offset.
pub fn parse_adjacency_text(
    s: &str,
) -> Result<Vec<(Option<String>, PlanarEmbeddedGraph)>, GraphError> {
    let mut out = Vec::new();
    let mut name: Option<String> = None;
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut start_line = 0;
    let flush = |name: &mut Option<String>,
                 rows: &mut Vec<Vec<usize>>,
                 out: &mut Vec<(Option<String>, PlanarEmbeddedGraph)>,
                 line: usize|
     -> Result<(), GraphError> {
        if !rows.is_empty() {
            let g = PlanarEmbeddedGraph::from_rotation(std::mem::take(rows))
                .map_err(|e| GraphError::Parse { offset: line, message: e.to_string() })?;
            out.push((name.take(), g));
        }
        Ok(())
    };
    for (ln, line) in s.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            flush(&mut name, &mut rows, &mut out, start_line)?;
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            flush(&mut name, &mut rows, &mut out, start_line)?;
            name = Some(c.trim().to_string());
            continue;
        }
        if rows.is_empty() {
            start_line = ln + 1;
        }
        let err = |m: &str| GraphError::Parse { offset: ln + 1, message: m.to_string() };
        let (label, rest) = line.split_once(':').ok_or_else(|| err("expected `v: neighbours`"))?;
        let label: usize = label.trim().parse().map_err(|_| err("bad vertex label"))?;
        if label != rows.len() + 1 {
            return Err(err("vertex labels must be consecutive from 1"));
        }
        let nbrs = rest
            .split_whitespace()
            .map(|t| match t.parse::<usize>() {
                Ok(u) if u >= 1 => Ok(u - 1),
                _ => Err(err("bad neighbour label")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(nbrs);
    }
    flush(&mut name, &mut rows, &mut out, start_line)?;
    Ok(out)
}
