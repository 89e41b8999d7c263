//! JSON encoding of rationals, divisors and graph documents.
//!
//! Rationals are `{"num": n, "den": d}` in lowest terms with `d > 0`.
//! Integers too large for a JSON number are written as decimal strings.

use std::str::FromStr;

use inner_rates::graph::{Divisor, DualGraph, VertexData};
use inner_rates::{GraphDocument, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("field `{0}` is missing or has the wrong type")]
    Field(String),
    #[error("invalid graph: {0}")]
    Graph(#[from] inner_rates::graph::GraphError),
}

fn big(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(x) => Value::from(x),
        None => Value::String(n.to_string()),
    }
}

fn read_big(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => BigInt::from_str(s).ok(),
        _ => None,
    }
}

pub fn rational(r: &Rational) -> Value {
    json!({ "num": big(r.numer()), "den": big(r.denom()) })
}

pub fn read_rational(v: &Value) -> Option<Rational> {
    let num = read_big(v.get("num")?)?;
    let den = read_big(v.get("den")?)?;
    if den.is_zero() || den.is_negative() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Integral coefficients become plain numbers, others rational objects.
pub fn coefficient(r: &Rational) -> Value {
    if r.is_integer() {
        big(r.numer())
    } else {
        rational(r)
    }
}

pub fn divisor(g: &DualGraph, d: &Divisor) -> Value {
    let map: Map<String, Value> = d
        .terms()
        .map(|(pt, c)| (pt.label(g), coefficient(c)))
        .collect();
    Value::Object(map)
}

/// Object keyed by vertex id in declaration order.
pub fn per_vertex<T>(g: &DualGraph, values: &[T], f: impl Fn(&T) -> Value) -> Value {
    let map: Map<String, Value> = values
        .iter()
        .enumerate()
        .map(|(v, x)| (g.id(v).to_string(), f(x)))
        .collect();
    Value::Object(map)
}

pub fn document(doc: &GraphDocument) -> Value {
    let g = &doc.graph;
    let vertices: Vec<Value> = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut obj = Map::new();
            obj.insert("id".into(), Value::from(v.id.clone()));
            obj.insert("selfint".into(), Value::from(v.self_int));
            obj.insert("genus".into(), Value::from(v.genus));
            obj.insert("L".into(), Value::from(v.l));
            obj.insert("P".into(), Value::from(v.p));
            if let (Some(m), Some(q)) = (&doc.multiplicities, &doc.rates) {
                obj.insert("m".into(), Value::from(m[i]));
                obj.insert("q".into(), rational(&q[i]));
            }
            Value::Object(obj)
        })
        .collect();
    let mut edges: Vec<Value> = Vec::new();
    let mut previous: Option<(usize, usize)> = None;
    for e in g.edges() {
        let key = (e.a, e.b);
        if previous == Some(key) {
            let last = edges.last_mut().expect("previous edge recorded");
            let count = last["count"].as_u64().expect("count is a number");
            last["count"] = Value::from(count + 1);
        } else {
            edges.push(json!({ "a": g.id(e.a), "b": g.id(e.b), "count": 1 }));
        }
        previous = Some(key);
    }
    json!({ "name": doc.name, "vertices": vertices, "edges": edges })
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, JsonError> {
    v.get(key).ok_or_else(|| JsonError::Field(key.to_string()))
}

fn uint(v: &Value, key: &str) -> Result<u64, JsonError> {
    match v.get(key) {
        None => Ok(0),
        Some(x) => x.as_u64().ok_or_else(|| JsonError::Field(key.to_string())),
    }
}

fn small(v: &Value, key: &str) -> Result<u32, JsonError> {
    u32::try_from(uint(v, key)?).map_err(|_| JsonError::Field(key.to_string()))
}

pub fn read_document(text: &str) -> Result<GraphDocument, JsonError> {
    let root: Value = serde_json::from_str(text)?;
    let name = field(&root, "name")?
        .as_str()
        .ok_or_else(|| JsonError::Field("name".into()))?;
    let records = field(&root, "vertices")?
        .as_array()
        .ok_or_else(|| JsonError::Field("vertices".into()))?;
    let mut vertices = Vec::with_capacity(records.len());
    let mut m = Vec::new();
    let mut q = Vec::new();
    for r in records {
        let id = field(r, "id")?
            .as_str()
            .ok_or_else(|| JsonError::Field("id".into()))?;
        let self_int = field(r, "selfint")?
            .as_i64()
            .ok_or_else(|| JsonError::Field("selfint".into()))?;
        vertices.push(
            VertexData::new(id, self_int)
                .genus(small(r, "genus")?)
                .l(small(r, "L")?)
                .p(small(r, "P")?),
        );
        if let Some(mv) = r.get("m") {
            m.push(mv.as_u64().ok_or_else(|| JsonError::Field("m".into()))?);
            q.push(read_rational(field(r, "q")?).ok_or_else(|| JsonError::Field("q".into()))?);
        }
    }
    let mut edges = Vec::new();
    for e in field(&root, "edges")?
        .as_array()
        .ok_or_else(|| JsonError::Field("edges".into()))?
    {
        let a = field(e, "a")?
            .as_str()
            .ok_or_else(|| JsonError::Field("a".into()))?;
        let b = field(e, "b")?
            .as_str()
            .ok_or_else(|| JsonError::Field("b".into()))?;
        let count = match e.get("count") {
            None => 1,
            Some(c) => c.as_u64().ok_or_else(|| JsonError::Field("count".into()))?,
        };
        for _ in 0..count {
            edges.push((a.to_string(), b.to_string()));
        }
    }
    let graph = DualGraph::new(vertices, &edges)?;
    let doc = GraphDocument::new(name, graph);
    Ok(match (m.len(), q.len()) {
        (0, 0) => doc,
        (n, _) if n == records.len() => doc.with_annotations(m, q),
        _ => return Err(JsonError::Field("m".into())),
    })
}
