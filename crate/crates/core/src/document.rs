//! Line-oriented text format for decorated dual graphs.
//!
//! ```text
//! graph <name>
//! vertex <id> selfint=<int> [genus=<uint>] [L=<uint>] [P=<uint>] [m=<uint>] [q=<rational>]
//! edge <idA> <idB> [count=<uint>]
//! ```
//!
//! `#` starts a comment and blank lines are ignored. The `m` and `q` keys are
//! optional annotations carrying precomputed multiplicities and inner rates;
//! when used they must be present on every vertex.

use std::fmt::Write as _;

use num_traits::Zero;
use thiserror::Error;

use crate::graph::{DualGraph, Edge, GraphError, VertexData};
use crate::linalg::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDocument {
    pub name: String,
    pub graph: DualGraph,
    pub multiplicities: Option<Vec<u64>>,
    pub rates: Option<Vec<Rational>>,
}

impl GraphDocument {
    pub fn new(name: impl Into<String>, graph: DualGraph) -> Self {
        Self {
            name: name.into(),
            graph,
            multiplicities: None,
            rates: None,
        }
    }

    pub fn with_annotations(mut self, m: Vec<u64>, q: Vec<Rational>) -> Self {
        self.multiplicities = Some(m);
        self.rates = Some(q);
        self
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: line[..s].chars().count() + 1,
        });
    }
    out
}

struct Cursor {
    line: usize,
}

impl Cursor {
    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Default)]
struct VertexLine {
    data: Option<VertexData>,
    m: Option<u64>,
    q: Option<Rational>,
}

fn parse_value<T: std::str::FromStr>(
    cur: &Cursor,
    tok: &Token<'_>,
    key: &str,
    raw: &str,
) -> Result<T, ParseError> {
    raw.parse::<T>().map_err(|_| {
        cur.err(
            tok.column + key.len() + 1,
            format!("invalid value `{raw}` for `{key}`"),
        )
    })
}

fn parse_rational(
    cur: &Cursor,
    tok: &Token<'_>,
    key: &str,
    raw: &str,
) -> Result<Rational, ParseError> {
    let bad = || {
        cur.err(
            tok.column + key.len() + 1,
            format!("invalid rational `{raw}` for `{key}`"),
        )
    };
    let (n, d) = match raw.split_once('/') {
        Some((n, d)) => (n, d),
        None => (raw, "1"),
    };
    let n: num_bigint::BigInt = n.parse().map_err(|_| bad())?;
    let d: num_bigint::BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

fn parse_vertex(cur: &Cursor, toks: &[Token<'_>]) -> Result<VertexLine, ParseError> {
    let head = &toks[0];
    let Some(id_tok) = toks.get(1) else {
        return Err(cur.err(head.column + head.text.len(), "expected vertex id"));
    };
    if id_tok.text.contains('=') {
        return Err(cur.err(id_tok.column, "expected vertex id before attributes"));
    }
    let mut self_int = None;
    let mut v = VertexData::new(id_tok.text, 0);
    let mut out = VertexLine::default();
    let mut seen: Vec<&str> = Vec::new();
    for tok in &toks[2..] {
        let Some((key, raw)) = tok.text.split_once('=') else {
            return Err(cur.err(
                tok.column,
                format!("expected key=value, found `{}`", tok.text),
            ));
        };
        if seen.contains(&key) {
            return Err(cur.err(tok.column, format!("duplicate key `{key}`")));
        }
        seen.push(key);
        match key {
            "selfint" => self_int = Some(parse_value::<i64>(cur, tok, key, raw)?),
            "genus" => v.genus = parse_value(cur, tok, key, raw)?,
            "L" => v.l = parse_value(cur, tok, key, raw)?,
            "P" => v.p = parse_value(cur, tok, key, raw)?,
            "m" => out.m = Some(parse_value(cur, tok, key, raw)?),
            "q" => out.q = Some(parse_rational(cur, tok, key, raw)?),
            _ => return Err(cur.err(tok.column, format!("unknown key `{key}`"))),
        }
    }
    let Some(self_int) = self_int else {
        return Err(cur.err(
            id_tok.column,
            format!("vertex `{}` is missing selfint", id_tok.text),
        ));
    };
    v.self_int = self_int;
    out.data = Some(v);
    Ok(out)
}

pub fn parse(text: &str) -> Result<GraphDocument, ParseError> {
    let mut name: Option<String> = None;
    let mut vertices: Vec<VertexLine> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut graph = DualGraph::new::<&str>(Vec::new(), &[]).expect("empty graph");
    let mut last_line = 0;

    for (i, raw_line) in text.lines().enumerate() {
        let cur = Cursor { line: i + 1 };
        last_line = i + 1;
        let line = raw_line.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(head) = toks.first() else {
            continue;
        };
        if name.is_none() && head.text != "graph" {
            return Err(cur.err(head.column, "expected `graph <name>` header"));
        }
        match head.text {
            "graph" => {
                if name.is_some() {
                    return Err(cur.err(head.column, "duplicate `graph` header"));
                }
                match toks.len() {
                    2 => name = Some(toks[1].text.to_string()),
                    1 => return Err(cur.err(head.column + head.text.len(), "expected graph name")),
                    _ => return Err(cur.err(toks[2].column, "unexpected token after graph name")),
                }
            }
            "vertex" => {
                let parsed = parse_vertex(&cur, &toks)?;
                let data = parsed.data.clone().expect("vertex data");
                let id = data.id.clone();
                graph
                    .push_vertex(data)
                    .map_err(|_| cur.err(toks[1].column, format!("duplicate vertex `{id}`")))?;
                vertices.push(parsed);
            }
            "edge" => {
                if toks.len() < 3 {
                    return Err(cur.err(head.column, "expected `edge <idA> <idB>`"));
                }
                let a = graph.index_of(toks[1].text).ok_or_else(|| {
                    cur.err(toks[1].column, format!("unknown vertex `{}`", toks[1].text))
                })?;
                let b = graph.index_of(toks[2].text).ok_or_else(|| {
                    cur.err(toks[2].column, format!("unknown vertex `{}`", toks[2].text))
                })?;
                if a == b {
                    return Err(cur.err(toks[2].column, "loop edge"));
                }
                let mut count = 1u32;
                for tok in &toks[3..] {
                    match tok.text.split_once('=') {
                        Some(("count", raw)) => {
                            count = parse_value(&cur, tok, "count", raw)?;
                            if count == 0 {
                                return Err(cur.err(tok.column, "edge count must be positive"));
                            }
                        }
                        _ => {
                            return Err(
                                cur.err(tok.column, format!("unexpected token `{}`", tok.text))
                            )
                        }
                    }
                }
                for _ in 0..count {
                    edges.push(Edge { a, b });
                }
            }
            other => return Err(cur.err(head.column, format!("unknown directive `{other}`"))),
        }
    }

    let Some(name) = name else {
        return Err(ParseError {
            line: last_line.max(1),
            column: 1,
            message: "expected `graph <name>` header".into(),
        });
    };
    if vertices.is_empty() {
        return Err(ParseError {
            line: last_line.max(1),
            column: 1,
            message: "graph has no vertices".into(),
        });
    }

    let multiplicities = collect_annotation(&vertices, |v| v.m, "m", last_line)?;
    let rates = collect_annotation(&vertices, |v| v.q.clone(), "q", last_line)?;
    let graph =
        DualGraph::from_indexed(graph.vertices().to_vec(), edges).map_err(|e: GraphError| {
            ParseError {
                line: last_line,
                column: 1,
                message: e.to_string(),
            }
        })?;
    Ok(GraphDocument {
        name,
        graph,
        multiplicities,
        rates,
    })
}

fn collect_annotation<T>(
    vertices: &[VertexLine],
    get: impl Fn(&VertexLine) -> Option<T>,
    key: &str,
    line: usize,
) -> Result<Option<Vec<T>>, ParseError> {
    let values: Vec<Option<T>> = vertices.iter().map(get).collect();
    let present = values.iter().filter(|v| v.is_some()).count();
    if present == 0 {
        Ok(None)
    } else if present == values.len() {
        Ok(Some(values.into_iter().flatten().collect()))
    } else {
        Err(ParseError {
            line,
            column: 1,
            message: format!("annotation `{key}` must be given on every vertex or none"),
        })
    }
}

/// Canonical text form: zero-valued optional keys are omitted and runs of
/// identical consecutive edges are folded into `count=`.
pub fn serialize(doc: &GraphDocument) -> String {
    let g = &doc.graph;
    let mut out = String::new();
    let _ = writeln!(out, "graph {}", doc.name);
    for (i, v) in g.vertices().iter().enumerate() {
        let _ = write!(out, "vertex {} selfint={}", v.id, v.self_int);
        if v.genus != 0 {
            let _ = write!(out, " genus={}", v.genus);
        }
        if v.l != 0 {
            let _ = write!(out, " L={}", v.l);
        }
        if v.p != 0 {
            let _ = write!(out, " P={}", v.p);
        }
        if let Some(m) = &doc.multiplicities {
            let _ = write!(out, " m={}", m[i]);
        }
        if let Some(q) = &doc.rates {
            let _ = write!(out, " q={}", q[i]);
        }
        out.push('\n');
    }
    let edges = g.edges();
    let mut i = 0;
    while i < edges.len() {
        let mut j = i + 1;
        while j < edges.len() && edges[j] == edges[i] {
            j += 1;
        }
        let e = edges[i];
        let _ = write!(out, "edge {} {}", g.id(e.a), g.id(e.b));
        if j - i > 1 {
            let _ = write!(out, " count={}", j - i);
        }
        out.push('\n');
        i = j;
    }
    out
}
