//! Text formats for graphs and trees, and the JSON form of trees.
//!
//! Graphs: `c` comment lines, a `p ghct <n> <m>` header and `e <u> <v> <w>`
//! lines with 1-based ids. Without a header every non-comment line is a
//! `u v w` triple with 0-based ids and `n` is one past the largest id.
//!
//! Trees: a `t <|U|>` header, `T <a> <b> <w>` edge lines and, for Steiner
//! trees, one `F <v> <rep>` line per vertex. Tree ids are 0-based.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ghtree::GhTree;
use crate::graph::{Graph, VertexId, Weight};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

fn no_trailing<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match toks.next() {
        Some(t) => Err(parse_err(line, format!("unexpected `{t}`"))),
        None => Ok(()),
    }
}

/// Parses either graph format; the format is chosen by the presence of a
/// `p` line.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c') && !l.starts_with('#'))
        .collect();
    let dimacs = lines.iter().any(|(_, l)| l.starts_with('p'));
    let mut edges = Vec::new();
    let mut header: Option<(usize, usize, usize)> = None;
    for &(no, l) in &lines {
        let mut toks = l.split_whitespace();
        if dimacs {
            match toks.next() {
                Some("p") => {
                    if header.is_some() {
                        return Err(parse_err(no, "second header"));
                    }
                    let kind: String = field(toks.next(), no, "format")?;
                    if kind != "ghct" {
                        return Err(parse_err(no, format!("unknown format `{kind}`")));
                    }
                    let n = field(toks.next(), no, "vertex count")?;
                    let m = field(toks.next(), no, "edge count")?;
                    no_trailing(toks, no)?;
                    header = Some((n, m, no));
                }
                Some("e") => {
                    let Some((n, _, _)) = header else {
                        return Err(parse_err(no, "edge before header"));
                    };
                    let u: usize = field(toks.next(), no, "endpoint")?;
                    let v: usize = field(toks.next(), no, "endpoint")?;
                    let w: i64 = field(toks.next(), no, "weight")?;
                    no_trailing(toks, no)?;
                    for x in [u, v] {
                        if x == 0 || x > n {
                            return Err(parse_err(no, format!("vertex {x} outside 1..={n}")));
                        }
                    }
                    if w <= 0 {
                        return Err(parse_err(no, format!("weight {w} is not positive")));
                    }
                    edges.push((u - 1, v - 1, w));
                }
                Some(t) => return Err(parse_err(no, format!("unknown line type `{t}`"))),
                None => unreachable!(),
            }
        } else {
            let u: usize = field(toks.next(), no, "endpoint")?;
            let v: usize = field(toks.next(), no, "endpoint")?;
            let w: i64 = field(toks.next(), no, "weight")?;
            no_trailing(toks, no)?;
            if w <= 0 {
                return Err(parse_err(no, format!("weight {w} is not positive")));
            }
            edges.push((u, v, w));
        }
    }
    let n = match header {
        Some((n, m, no)) => {
            if edges.len() != m {
                return Err(parse_err(no, format!("header promises {m} edges, found {}", edges.len())));
            }
            n
        }
        None => edges.iter().map(|e| e.0.max(e.1) + 1).max().unwrap_or(0),
    };
    Graph::build(n, &edges)
}

/// DIMACS-style text for `g` (merged edges, 1-based ids).
pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p ghct {} {}\n", g.n(), g.m());
    for e in g.edges() {
        writeln!(out, "e {} {} {}", e.u + 1, e.v + 1, e.w).unwrap();
    }
    out
}

pub fn read_graph(path: &std::path::Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_err(0, format!("{}: {e}", path.display())))?;
    parse_graph(&text)
}

/// Tree text. `F` lines appear only when some vertex is not a terminal.
pub fn write_tree(t: &GhTree) -> String {
    let mut out = format!("t {}\n", t.terminals().len());
    for &(a, b, w) in t.edges() {
        writeln!(out, "T {a} {b} {w}").unwrap();
    }
    if !t.is_full() {
        for v in 0..t.n() {
            writeln!(out, "F {v} {}", t.rep(v)).unwrap();
        }
    }
    out
}

pub fn parse_tree(text: &str) -> Result<GhTree> {
    let mut count = None;
    let mut edges = Vec::new();
    let mut map: Vec<(usize, VertexId, VertexId)> = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let no = i + 1;
        let l = l.trim();
        if l.is_empty() || l.starts_with('c') {
            continue;
        }
        let mut toks = l.split_whitespace();
        match toks.next() {
            Some("t") => {
                if count.is_some() {
                    return Err(parse_err(no, "second header"));
                }
                count = Some(field::<usize>(toks.next(), no, "terminal count")?);
            }
            Some("T") => {
                let a: VertexId = field(toks.next(), no, "endpoint")?;
                let b: VertexId = field(toks.next(), no, "endpoint")?;
                let w: Weight = field(toks.next(), no, "weight")?;
                edges.push((a, b, w));
            }
            Some("F") => {
                let v: VertexId = field(toks.next(), no, "vertex")?;
                let r: VertexId = field(toks.next(), no, "representative")?;
                map.push((no, v, r));
            }
            Some(t) => return Err(parse_err(no, format!("unknown line type `{t}`"))),
            None => unreachable!(),
        }
        if count.is_none() {
            return Err(parse_err(no, "line before `t` header"));
        }
        no_trailing(toks, no)?;
    }
    let count = count.ok_or_else(|| parse_err(0, "missing `t` header"))?;
    let (n, terminals, rep) = if map.is_empty() {
        (count, (0..count).collect(), (0..count).collect())
    } else {
        let n = map.len();
        let mut rep = vec![usize::MAX; n];
        for &(no, v, r) in &map {
            if v >= n || r >= n {
                return Err(parse_err(no, format!("vertex outside 0..{n}")));
            }
            if rep[v] != usize::MAX {
                return Err(parse_err(no, format!("vertex {v} mapped twice")));
            }
            rep[v] = r;
        }
        let mut terminals = rep.clone();
        terminals.sort_unstable();
        terminals.dedup();
        if terminals.len() != count {
            return Err(parse_err(0, format!("header says {count} terminals, map has {}", terminals.len())));
        }
        (n, terminals, rep)
    };
    GhTree::new(n, terminals, edges, rep)
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonEdge {
    a: VertexId,
    b: VertexId,
    w: Weight,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonTree {
    schema: u32,
    n: usize,
    terminals: Vec<VertexId>,
    edges: Vec<JsonEdge>,
    /// Non-terminal vertices only.
    f: BTreeMap<VertexId, VertexId>,
}

pub fn tree_to_json(t: &GhTree) -> serde_json::Value {
    let f = (0..t.n()).filter(|&v| t.rep(v) != v).map(|v| (v, t.rep(v))).collect();
    let doc = JsonTree {
        schema: 1,
        n: t.n(),
        terminals: t.terminals().to_vec(),
        edges: t.edges().iter().map(|&(a, b, w)| JsonEdge { a, b, w }).collect(),
        f,
    };
    serde_json::to_value(doc).expect("tree serializes")
}

pub fn tree_from_json(text: &str) -> Result<GhTree> {
    let doc: JsonTree = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    if doc.schema != 1 {
        return Err(parse_err(0, format!("unsupported schema {}", doc.schema)));
    }
    let mut rep: Vec<VertexId> = (0..doc.n).collect();
    for (&v, &r) in &doc.f {
        if v >= doc.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: doc.n });
        }
        rep[v] = r;
    }
    GhTree::new(doc.n, doc.terminals, doc.edges.into_iter().map(|e| (e.a, e.b, e.w)).collect(), rep)
}

/// Reads a tree in either format (JSON when the text starts with `{`).
pub fn read_tree(path: &std::path::Path) -> Result<GhTree> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_err(0, format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        tree_from_json(&text)
    } else {
        parse_tree(&text)
    }
}

/// Whitespace-separated 0-based vertex ids.
pub fn parse_vertex_list(text: &str) -> Result<Vec<VertexId>> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.split('#').next().unwrap();
        for tok in l.split_whitespace() {
            out.push(tok.parse().map_err(|_| parse_err(i + 1, format!("bad vertex `{tok}`")))?);
        }
    }
    Ok(out)
}
