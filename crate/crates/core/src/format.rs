//! Edge-list text and DOT renderings of digraphs.
//!
//! Edge lists start with a header line `n m` followed by `m` lines `u v`
//! (0-based). Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use crate::digraph::Digraph;
use crate::error::{Error, Result};

pub fn parse_edge_list(text: &str) -> Result<Digraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("missing `n m` header".into()))?;
    let [n, m] = parse_pair(header, line_no)?;

    let mut arcs = Vec::with_capacity(m.min(1 << 16));
    for (line_no, line) in lines {
        let [u, v] = parse_pair(line, line_no)?;
        arcs.push((u, v));
    }
    if arcs.len() != m {
        return Err(Error::Parse(format!(
            "header announces {m} arcs but {} were listed",
            arcs.len()
        )));
    }
    Digraph::from_arcs(n, arcs)
}

fn parse_pair(line: &str, line_no: usize) -> Result<[usize; 2]> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::Parse(format!(
            "line {line_no}: expected two integers, found `{line}`"
        )));
    }
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|e| Error::Parse(format!("line {line_no}: `{s}`: {e}")))
    };
    Ok([parse(fields[0])?, parse(fields[1])?])
}

pub fn to_edge_list(d: &Digraph) -> String {
    let mut out = format!("{} {}\n", d.order(), d.size());
    for (u, v) in d.arcs() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// DOT rendering; isolated vertices are listed so the order is preserved.
pub fn to_dot(d: &Digraph) -> String {
    let mut out = String::from("digraph {\n");
    for v in 0..d.order() {
        if d.out_degree(v) == 0 && d.in_degree(v) == 0 {
            let _ = writeln!(out, "  {v};");
        }
    }
    for (u, v) in d.arcs() {
        let _ = writeln!(out, "  {u} -> {v};");
    }
    out.push_str("}\n");
    out
}
