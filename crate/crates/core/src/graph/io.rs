//! Text formats.
//!
//! Edge list:
//! ```text
//! n m_edges m_dims
//! i j w            (m_edges lines, 1-based endpoints)
//! b_1 ... b_m      (n lines of vertex weights)
//! ```
//!
//! Hypergraph (hMETIS-compatible): header `num_nets num_vertices [fmt]`,
//! then one pin list per net (prefixed by the net weight when `fmt` is 1 or
//! 11), then `num_vertices` weight lines when `fmt` is 10 or 11.
//!
//! Partition: one `vertex_id part_id` line per vertex, both 1-based.
//!
//! Blank lines and lines starting with `%` or `#` are ignored everywhere.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    expand_hypergraph, FixedAssignment, Hyperedge, Hypergraph, VertexWeights, WeightedGraph,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphFormat {
    EdgeList,
    Hmetis,
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edgelist" | "edge-list" => Ok(GraphFormat::EdgeList),
            "hmetis" | "hgr" => Ok(GraphFormat::Hmetis),
            other => Err(format!(
                "unknown format `{other}` (expected edgelist or hmetis)"
            )),
        }
    }
}

struct Line {
    number: usize,
    tokens: Vec<(usize, String)>,
}

impl Line {
    fn parse<T: FromStr>(&self, k: usize, what: &str) -> Result<T> {
        let (col, tok) = self.tokens.get(k).ok_or_else(|| Error::Parse {
            line: self.number,
            column: self.tokens.last().map_or(1, |(c, t)| c + t.len()),
            message: format!("missing {what}"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line: self.number,
            column: *col,
            message: format!("invalid {what} `{tok}`"),
        })
    }

    fn error(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    fn expect_len(&self, want: usize, what: &str) -> Result<()> {
        if self.tokens.len() > want {
            let (col, tok) = &self.tokens[want];
            return Err(self.error(*col, format!("unexpected token `{tok}` after {what}")));
        }
        Ok(())
    }
}

fn content_lines<R: Read>(reader: R) -> Result<Vec<Line>> {
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('%') || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, ch) in line.char_indices() {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    tokens.push((s + 1, line[s..i].to_string()));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            tokens.push((s + 1, line[s..].to_string()));
        }
        out.push(Line {
            number: idx + 1,
            tokens,
        });
    }
    Ok(out)
}

fn eof_error(lines: &[Line], what: &str) -> Error {
    Error::Parse {
        line: lines.last().map_or(1, |l| l.number + 1),
        column: 1,
        message: format!("unexpected end of input, expected {what}"),
    }
}

fn vertex_label(line: &Line, k: usize, n: usize) -> Result<usize> {
    let v: usize = line.parse(k, "vertex id")?;
    if v == 0 || v > n {
        return Err(line.error(line.tokens[k].0, format!("vertex id {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

fn weight_rows(lines: &[Line], n: usize, dims: Option<usize>) -> Result<VertexWeights> {
    if lines.len() < n {
        return Err(eof_error(lines, "vertex weight lines"));
    }
    let dims = dims.unwrap_or_else(|| lines.first().map_or(1, |l| l.tokens.len()));
    let mut rows = Vec::with_capacity(n);
    for line in &lines[..n] {
        let mut row = Vec::with_capacity(dims);
        for k in 0..dims {
            let w: i64 = line.parse(k, "vertex weight")?;
            if w < 0 {
                return Err(line.error(line.tokens[k].0, "negative vertex weight"));
            }
            row.push(w);
        }
        line.expect_len(dims, "vertex weights")?;
        rows.push(row);
    }
    if let Some(extra) = lines.get(n) {
        return Err(extra.error(1, "trailing content after vertex weights"));
    }
    VertexWeights::new(rows)
}

pub fn parse_edge_list<R: Read>(reader: R) -> Result<WeightedGraph> {
    let lines = content_lines(reader)?;
    let header = lines.first().ok_or_else(|| eof_error(&lines, "header"))?;
    let n: usize = header.parse(0, "vertex count")?;
    let m_edges: usize = header.parse(1, "edge count")?;
    let dims: usize = header.parse(2, "weight dimension")?;
    header.expect_len(3, "header")?;
    if dims == 0 {
        return Err(header.error(header.tokens[2].0, "weight dimension must be at least 1"));
    }
    let body = &lines[1..];
    if body.len() < m_edges {
        return Err(eof_error(&lines, "edge lines"));
    }
    let mut edges = Vec::with_capacity(m_edges);
    let mut seen = std::collections::HashMap::with_capacity(m_edges);
    for line in &body[..m_edges] {
        let a = vertex_label(line, 0, n)?;
        let b = vertex_label(line, 1, n)?;
        let w: f64 = line.parse(2, "edge weight")?;
        line.expect_len(3, "edge")?;
        if !(w.is_finite() && w >= 0.0) {
            return Err(line.error(
                line.tokens[2].0,
                format!("edge weight {w} must be finite and nonnegative"),
            ));
        }
        if a == b {
            return Err(line.error(line.tokens[0].0, "self-loop"));
        }
        let key = (a.min(b), a.max(b));
        if let Some(prev) = seen.insert(key, line.number) {
            return Err(line.error(
                line.tokens[0].0,
                format!(
                    "duplicate edge ({}, {}), first given on line {prev}",
                    key.0 + 1,
                    key.1 + 1
                ),
            ));
        }
        edges.push((a, b, w));
    }
    let weights = weight_rows(&body[m_edges..], n, Some(dims))?;
    WeightedGraph::new(n, edges, weights)
}

/// Parsed hypergraph plus the number of nets dropped for having a single
/// distinct pin (they can never be cut).
pub fn parse_hmetis<R: Read>(reader: R) -> Result<(Hypergraph, usize)> {
    let lines = content_lines(reader)?;
    let header = lines.first().ok_or_else(|| eof_error(&lines, "header"))?;
    let nets: usize = header.parse(0, "net count")?;
    let n: usize = header.parse(1, "vertex count")?;
    let fmt: u32 = if header.tokens.len() > 2 {
        header.parse(2, "format flag")?
    } else {
        0
    };
    header.expect_len(3, "header")?;
    let (net_weights, vertex_weights) = match fmt {
        0 => (false, false),
        1 => (true, false),
        10 => (false, true),
        11 => (true, true),
        other => {
            return Err(header.error(
                header.tokens[2].0,
                format!("unsupported format flag {other}"),
            ))
        }
    };
    let body = &lines[1..];
    if body.len() < nets {
        return Err(eof_error(&lines, "net lines"));
    }
    let mut hyperedges = Vec::with_capacity(nets);
    let mut dropped = 0;
    for line in &body[..nets] {
        let (weight, first) = if net_weights {
            let w: i64 = line.parse(0, "net weight")?;
            if w < 0 {
                return Err(line.error(line.tokens[0].0, "negative net weight"));
            }
            (w, 1)
        } else {
            (1, 0)
        };
        if line.tokens.len() <= first {
            return Err(line.error(1, "net without pins"));
        }
        let mut pins = (first..line.tokens.len())
            .map(|k| vertex_label(line, k, n))
            .collect::<Result<Vec<_>>>()?;
        pins.sort_unstable();
        pins.dedup();
        if pins.len() < 2 {
            dropped += 1;
            continue;
        }
        hyperedges.push(Hyperedge { pins, weight });
    }
    let rest = &body[nets..];
    let weights = if vertex_weights {
        weight_rows(rest, n, None)?
    } else {
        if let Some(extra) = rest.first() {
            return Err(extra.error(1, "trailing content after nets"));
        }
        VertexWeights::unit(n)
    };
    Ok((Hypergraph::new(n, hyperedges, weights)?, dropped))
}

pub fn load_hypergraph(path: &Path) -> Result<Hypergraph> {
    Ok(parse_hmetis(File::open(path)?)?.0)
}

/// Loads a graph; hypergraph inputs are clique-expanded.
pub fn load_graph(path: &Path, format: GraphFormat) -> Result<WeightedGraph> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(File::open(path)?),
        GraphFormat::Hmetis => expand_hypergraph(&load_hypergraph(path)?),
    }
}

pub fn write_edge_list<W: Write>(g: &WeightedGraph, mut out: W) -> Result<()> {
    writeln!(out, "{} {} {}", g.n(), g.edges().len(), g.dims())?;
    for e in g.edges() {
        writeln!(out, "{} {} {}", e.u + 1, e.v + 1, e.weight)?;
    }
    let b = g.vertex_weights();
    for v in 0..g.n() {
        let row: Vec<String> = b.row(v).iter().map(i64::to_string).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}

/// Writes `vertex_id part_id` lines (both 1-based).
pub fn write_partition<W: Write>(labels: &[usize], mut out: W) -> Result<()> {
    for (v, p) in labels.iter().enumerate() {
        writeln!(out, "{} {}", v + 1, p + 1)?;
    }
    Ok(())
}

/// Reads a partition file for an `n`-vertex graph into 0-based, compacted
/// part labels (distinct part ids renumbered in ascending order).
pub fn parse_partition<R: Read>(reader: R, n: usize) -> Result<Vec<usize>> {
    let lines = content_lines(reader)?;
    let mut raw = vec![None; n];
    for line in &lines {
        let v = vertex_label(line, 0, n)?;
        let p: usize = line.parse(1, "part id")?;
        line.expect_len(2, "partition entry")?;
        if p == 0 {
            return Err(line.error(line.tokens[1].0, "part ids are 1-based"));
        }
        if raw[v].replace(p).is_some() {
            return Err(line.error(line.tokens[0].0, format!("vertex {} assigned twice", v + 1)));
        }
    }
    if let Some(v) = raw.iter().position(Option::is_none) {
        return Err(Error::InvalidInput(format!(
            "partition file does not assign vertex {}",
            v + 1
        )));
    }
    let mut ids: Vec<usize> = raw.iter().map(|p| p.unwrap()).collect();
    let mut distinct = ids.clone();
    distinct.sort_unstable();
    distinct.dedup();
    for p in ids.iter_mut() {
        *p = distinct.binary_search(p).unwrap();
    }
    Ok(ids)
}

/// Reads `vertex_id side` lines (side 1 or 2) into a fixed assignment.
pub fn parse_fixed<R: Read>(reader: R, n: usize) -> Result<FixedAssignment> {
    let lines = content_lines(reader)?;
    let (mut f1, mut f2) = (Vec::new(), Vec::new());
    for line in &lines {
        let v = vertex_label(line, 0, n)?;
        let side: u8 = line.parse(1, "side")?;
        line.expect_len(2, "fixed entry")?;
        match side {
            1 => f1.push(v),
            2 => f2.push(v),
            _ => return Err(line.error(line.tokens[1].0, "side must be 1 or 2")),
        }
    }
    FixedAssignment::new(f1, f2, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_fixture() {
        let src = "3 2 1\n1 2 1.5\n2 3 4\n10\n20\n30\n";
        let g = parse_edge_list(src.as_bytes()).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges().len(), 2);
        assert_eq!(g.edge_weight(1, 0), 1.5);
        assert_eq!(g.vertex_weights().row(2), &[30]);
    }

    #[test]
    fn malformed_weight_names_line() {
        let src = "3 2 1\n1 2 1\n2 3 abc\n1\n1\n1\n";
        match parse_edge_list(src.as_bytes()) {
            Err(Error::Parse {
                line,
                column,
                message,
            }) => {
                assert_eq!(line, 3);
                assert_eq!(column, 5);
                assert!(message.contains("abc"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_edge_rejected_with_line() {
        let src = "3 2 1\n1 2 1\n2 1 3\n1\n1\n1\n";
        match parse_edge_list(src.as_bytes()) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("line 2"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn truncated_edge_list() {
        let src = "3 2 1\n1 2 1\n";
        assert!(matches!(
            parse_edge_list(src.as_bytes()),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn hmetis_single_net() {
        let (h, dropped) = parse_hmetis("1 3\n1 2 3\n".as_bytes()).unwrap();
        assert_eq!(dropped, 0);
        assert_eq!(h.hyperedges().len(), 1);
        assert_eq!(h.hyperedges()[0].pins, vec![0, 1, 2]);
        assert_eq!(h.hyperedges()[0].weight, 1);
    }

    #[test]
    fn hmetis_weights_and_comments() {
        let src = "% comment\n3 4 11\n2 1 2\n5 2 3 4\n1 3 3\n7\n8\n9\n10\n";
        let (h, dropped) = parse_hmetis(src.as_bytes()).unwrap();
        assert_eq!(dropped, 1);
        assert_eq!(h.hyperedges().len(), 2);
        assert_eq!(h.hyperedges()[1].weight, 5);
        assert_eq!(h.vertex_weights().row(3), &[10]);
    }

    #[test]
    fn partition_roundtrip_and_validation() {
        let mut buf = Vec::new();
        write_partition(&[0, 1, 1, 0], &mut buf).unwrap();
        assert_eq!(
            parse_partition(buf.as_slice(), 4).unwrap(),
            vec![0, 1, 1, 0]
        );
        assert!(parse_partition("1 1\n2 2\n".as_bytes(), 3).is_err());
        assert!(parse_partition("1 1\n1 2\n2 1\n".as_bytes(), 2).is_err());
        // sparse part ids are compacted
        assert_eq!(
            parse_partition("1 3\n2 7\n".as_bytes(), 2).unwrap(),
            vec![0, 1]
        );
    }

    #[test]
    fn edge_list_roundtrip() {
        let g =
            parse_edge_list("4 3 2\n1 2 1\n2 3 2\n3 4 3\n1 2\n3 4\n5 6\n7 8\n".as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let h = parse_edge_list(buf.as_slice()).unwrap();
        assert_eq!(g.edges(), h.edges());
        assert_eq!(g.vertex_weights(), h.vertex_weights());
    }
}
