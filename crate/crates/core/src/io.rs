//! PACE `.gr` and `.td` files and the lower-bound certificate format.
//!
//! Certificates are line oriented: `cert tw-lb <k> <#groups>` followed by one
//! line of 1-indexed vertices per group. Lines starting with `c` are comments
//! in all three formats.

use std::fmt::Write as _;

use thiserror::Error;

use crate::certificate::MinorCertificate;
use crate::graph::{Graph, GraphError, VertexSet};
use crate::td::{TdViolation, TreeDecomposition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("missing header")]
    MissingHeader,
    #[error("header declares {declared} {what}, found {found}")]
    CountMismatch { what: &'static str, declared: usize, found: usize },
    #[error("decomposition is invalid: {0}")]
    InvalidTd(#[from] TdViolation),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

/// Non-comment, non-empty lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.is_empty() || toks[0] == "c" {
            None
        } else {
            Some((i + 1, toks))
        }
    })
}

fn num(line: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse().map_err(|_| syntax(line, format!("expected a number, got {tok:?}")))
}

/// 1-indexed vertex id converted to 0-indexed.
fn vertex(line: usize, tok: &str, n: usize) -> Result<usize, ParseError> {
    let v = num(line, tok)?;
    if v == 0 || v > n {
        return Err(syntax(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

pub fn parse_gr(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (hl, h) = lines.next().ok_or(ParseError::MissingHeader)?;
    if h.len() != 4 || h[0] != "p" || h[1] != "tw" {
        return Err(syntax(hl, "expected `p tw <n> <m>`"));
    }
    let (n, m) = (num(hl, h[2])?, num(hl, h[3])?);
    let mut g = Graph::new(n);
    let mut found = 0;
    for (line, toks) in lines {
        if toks.len() != 2 {
            return Err(syntax(line, "expected an edge `<u> <v>`"));
        }
        let (u, v) = (vertex(line, toks[0], n)?, vertex(line, toks[1], n)?);
        g = add_edge(g, u, v).map_err(|source| ParseError::Graph { line, source })?;
        found += 1;
    }
    if found != m {
        return Err(ParseError::CountMismatch { what: "edges", declared: m, found });
    }
    Ok(g)
}

fn add_edge(mut g: Graph, u: usize, v: usize) -> Result<Graph, GraphError> {
    if u == v {
        return Err(GraphError::SelfLoop(u));
    }
    if g.has_edge(u, v) {
        return Err(GraphError::DuplicateEdge(u, v));
    }
    g.link(u, v);
    Ok(g)
}

pub fn write_gr(g: &Graph) -> String {
    let mut s = format!("p tw {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{} {}", u + 1, v + 1);
    }
    s
}

pub fn write_td(td: &TreeDecomposition, g: &Graph) -> String {
    let w1 = td.bags.iter().map(|b| b.len()).max().unwrap_or(0);
    let mut s = format!("s td {} {} {}\n", td.bags.len(), w1, g.n());
    for (i, b) in td.bags.iter().enumerate() {
        let _ = write!(s, "b {}", i + 1);
        for v in b {
            let _ = write!(s, " {}", v + 1);
        }
        s.push('\n');
    }
    for &(a, b) in &td.edges {
        let _ = writeln!(s, "{} {}", a + 1, b + 1);
    }
    s
}

/// Parses and validates a decomposition of `g`.
pub fn parse_td(text: &str, g: &Graph) -> Result<TreeDecomposition, ParseError> {
    let mut lines = content_lines(text);
    let (hl, h) = lines.next().ok_or(ParseError::MissingHeader)?;
    if h.len() != 5 || h[0] != "s" || h[1] != "td" {
        return Err(syntax(hl, "expected `s td <bags> <width+1> <n>`"));
    }
    let (nb, w1, n) = (num(hl, h[2])?, num(hl, h[3])?, num(hl, h[4])?);
    if n != g.n() {
        return Err(ParseError::CountMismatch { what: "vertices", declared: n, found: g.n() });
    }
    let mut bags: Vec<Option<VertexSet>> = vec![None; nb];
    let mut edges = Vec::new();
    for (line, toks) in lines {
        if toks[0] == "b" {
            if toks.len() < 2 {
                return Err(syntax(line, "bag line without an index"));
            }
            let i = num(line, toks[1])?;
            if i == 0 || i > nb {
                return Err(syntax(line, format!("bag index {i} outside 1..={nb}")));
            }
            if bags[i - 1].is_some() {
                return Err(syntax(line, format!("bag {i} given twice")));
            }
            let mut b = VertexSet::new(n);
            for t in &toks[2..] {
                b.insert(vertex(line, t, n)?);
            }
            bags[i - 1] = Some(b);
        } else {
            if toks.len() != 2 {
                return Err(syntax(line, "expected a tree edge `<i> <j>`"));
            }
            let (a, b) = (num(line, toks[0])?, num(line, toks[1])?);
            if a == 0 || a > nb || b == 0 || b > nb {
                return Err(syntax(line, "tree edge mentions a missing bag"));
            }
            edges.push((a - 1, b - 1));
        }
    }
    let found = bags.iter().filter(|b| b.is_some()).count();
    if found != nb {
        return Err(ParseError::CountMismatch { what: "bags", declared: nb, found });
    }
    let bags: Vec<VertexSet> = bags.into_iter().map(Option::unwrap).collect();
    let actual = bags.iter().map(|b| b.len()).max().unwrap_or(0);
    if actual != w1 {
        return Err(ParseError::CountMismatch { what: "as largest bag size", declared: w1, found: actual });
    }
    let td = TreeDecomposition::new(bags, edges);
    td.validate(g)?;
    Ok(td)
}

pub fn write_cert(cert: &MinorCertificate) -> String {
    let mut s = format!("cert tw-lb {} {}\n", cert.claimed_k, cert.groups.len());
    for grp in &cert.groups {
        let ids: Vec<String> = grp.iter().map(|v| (v + 1).to_string()).collect();
        s.push_str(&ids.join(" "));
        s.push('\n');
    }
    s
}

/// Parses the groups; membership and treewidth are checked by
/// [`crate::certificate::verify_certificate`].
pub fn parse_cert(text: &str, n: usize) -> Result<MinorCertificate, ParseError> {
    let mut lines = content_lines(text);
    let (hl, h) = lines.next().ok_or(ParseError::MissingHeader)?;
    if h.len() != 4 || h[0] != "cert" || h[1] != "tw-lb" {
        return Err(syntax(hl, "expected `cert tw-lb <k> <groups>`"));
    }
    let (k, ng) = (num(hl, h[2])?, num(hl, h[3])?);
    let mut groups = Vec::with_capacity(ng);
    for (line, toks) in lines {
        let mut grp = VertexSet::new(n);
        for t in &toks {
            let v = vertex(line, t, n)?;
            if !grp.insert(v) {
                return Err(syntax(line, format!("vertex {} repeated", v + 1)));
            }
        }
        groups.push(grp);
    }
    if groups.len() != ng {
        return Err(ParseError::CountMismatch { what: "groups", declared: ng, found: groups.len() });
    }
    Ok(MinorCertificate { claimed_k: k, groups })
}
