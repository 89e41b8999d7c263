//! Decorated dual graphs, their metrics, divisors and piecewise-linear functions.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{int, is_negative_definite, Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("loop edge at `{0}`")]
    LoopEdge(String),
    #[error("unknown edge index {0}")]
    UnknownEdge(usize),
    #[error("vertex `{0}` is not an endpoint of edge {1}")]
    NotAnEndpoint(String, usize),
    #[error("offset {offset} is not strictly inside edge {edge} of length {length}")]
    OffsetOutOfRange {
        edge: usize,
        offset: Box<Rational>,
        length: Box<Rational>,
    },
    #[error("multiplicity vector has length {found}, graph has {expected} vertices")]
    WrongLength { expected: usize, found: usize },
    #[error("multiplicities must be positive (vertex `{0}`)")]
    NonPositiveMultiplicity(String),
    #[error("breakpoints on edge {0} must be strictly increasing and interior")]
    BadBreakpoints(usize),
}

/// One exceptional component: E_v·E_v, genus, and the arrow weights of the
/// generic hyperplane section (`l`) and generic polar curve (`p`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexData {
    pub id: String,
    pub self_int: i64,
    pub genus: u32,
    pub l: u32,
    pub p: u32,
}

impl VertexData {
    pub fn new(id: impl Into<String>, self_int: i64) -> Self {
        Self {
            id: id.into(),
            self_int,
            genus: 0,
            l: 0,
            p: 0,
        }
    }

    pub fn genus(mut self, genus: u32) -> Self {
        self.genus = genus;
        self
    }

    pub fn l(mut self, l: u32) -> Self {
        self.l = l;
        self
    }

    pub fn p(mut self, p: u32) -> Self {
        self.p = p;
        self
    }
}

/// An edge instance between two distinct vertices, stored by vertex index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
}

impl Edge {
    pub fn other(&self, v: usize) -> Option<usize> {
        if v == self.a {
            Some(self.b)
        } else if v == self.b {
            Some(self.a)
        } else {
            None
        }
    }

    pub fn touches(&self, v: usize) -> bool {
        self.a == v || self.b == v
    }
}

/// Loop-free multigraph with decorated vertices. Vertex order is declaration
/// order and fixes all matrix and vector indexing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    vertices: Vec<VertexData>,
    edges: Vec<Edge>,
    index: HashMap<String, usize>,
}

impl DualGraph {
    pub fn new<S: AsRef<str>>(
        vertices: Vec<VertexData>,
        edges: &[(S, S)],
    ) -> Result<Self, GraphError> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.id.clone()));
            }
        }
        let mut g = Self {
            vertices,
            edges: Vec::with_capacity(edges.len()),
            index,
        };
        for (a, b) in edges {
            let a = g.require(a.as_ref())?;
            let b = g.require(b.as_ref())?;
            g.push_edge(a, b)?;
        }
        Ok(g)
    }

    /// Builds a graph from vertex indices rather than ids.
    pub fn from_indexed(vertices: Vec<VertexData>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut g = Self::new::<&str>(vertices, &[])?;
        for e in edges {
            if e.a >= g.vertices.len() || e.b >= g.vertices.len() {
                return Err(GraphError::UnknownVertex(format!("#{}", e.a.max(e.b))));
            }
            g.push_edge(e.a, e.b)?;
        }
        Ok(g)
    }

    fn require(&self, id: &str) -> Result<usize, GraphError> {
        self.index_of(id)
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub(crate) fn push_edge(&mut self, a: usize, b: usize) -> Result<usize, GraphError> {
        if a == b {
            return Err(GraphError::LoopEdge(self.vertices[a].id.clone()));
        }
        self.edges.push(Edge { a, b });
        Ok(self.edges.len() - 1)
    }

    pub(crate) fn push_vertex(&mut self, v: VertexData) -> Result<usize, GraphError> {
        if self.index.contains_key(&v.id) {
            return Err(GraphError::DuplicateVertex(v.id));
        }
        self.index.insert(v.id.clone(), self.vertices.len());
        self.vertices.push(v);
        Ok(self.vertices.len() - 1)
    }

    pub(crate) fn replace_edge(&mut self, e: usize, edge: Edge) {
        self.edges[e] = edge;
    }

    pub(crate) fn vertex_mut(&mut self, v: usize) -> &mut VertexData {
        &mut self.vertices[v]
    }

    /// Returns a vertex id not yet used in the graph, starting from `stem`.
    pub fn fresh_id(&self, stem: &str) -> String {
        let mut n = self.vertices.len();
        loop {
            let candidate = format!("{stem}{n}");
            if !self.index.contains_key(&candidate) {
                return candidate;
            }
            n += 1;
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[VertexData] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &VertexData {
        &self.vertices[v]
    }

    pub fn id(&self, v: usize) -> &str {
        &self.vertices[v].id
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Result<Edge, GraphError> {
        self.edges.get(e).copied().ok_or(GraphError::UnknownEdge(e))
    }

    /// Index of the first edge instance joining `a` and `b`.
    pub fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        self.edges
            .iter()
            .position(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
    }

    /// Number of edge instances at `v`; parallel edges count separately.
    pub fn valency(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    pub fn edge_multiplicity(&self, a: usize, b: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
            .count()
    }

    /// Distinct neighbours of `v` in ascending index order.
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.edges.iter().filter_map(|e| e.other(v)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn incident_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.touches(v))
            .map(|(i, _)| i)
    }

    pub fn l_vector(&self) -> Vec<i64> {
        self.vertices.iter().map(|v| i64::from(v.l)).collect()
    }

    pub fn p_vector(&self) -> Vec<i64> {
        self.vertices.iter().map(|v| i64::from(v.p)).collect()
    }

    pub fn has_l_node(&self) -> bool {
        self.vertices.iter().any(|v| v.l > 0)
    }

    /// Same graph with the polar weights replaced.
    pub fn with_polar(&self, p: &[u32]) -> Result<Self, GraphError> {
        if p.len() != self.vertex_count() {
            return Err(GraphError::WrongLength {
                expected: self.vertex_count(),
                found: p.len(),
            });
        }
        let mut g = self.clone();
        for (v, &pv) in g.vertices.iter_mut().zip(p) {
            v.p = pv;
        }
        Ok(g)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for w in self.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// `M_ii = E_i·E_i`, `M_ij` = number of edges between `i` and `j`.
pub fn intersection_matrix(g: &DualGraph) -> RationalMatrix {
    let n = g.vertex_count();
    let mut m = RationalMatrix::zeros(n, n);
    for (i, v) in g.vertices().iter().enumerate() {
        m.set(i, i, int(v.self_int));
    }
    for e in g.edges() {
        let bumped = m.get(e.a, e.b) + Rational::one();
        m.set(e.a, e.b, bumped.clone());
        m.set(e.b, e.a, bumped);
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub connected: bool,
    pub loop_free: bool,
    pub negative_definite: bool,
    pub has_l_node: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.connected && self.loop_free && self.negative_definite && self.has_l_node
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.connected {
            out.push("graph is not connected");
        }
        if !self.loop_free {
            out.push("graph has a loop edge");
        }
        if !self.negative_definite {
            out.push("intersection matrix is not negative definite");
        }
        if !self.has_l_node {
            out.push("no vertex carries a hyperplane arrow (L > 0)");
        }
        out
    }
}

pub fn validate(g: &DualGraph) -> ValidationReport {
    let m = intersection_matrix(g);
    ValidationReport {
        connected: g.is_connected(),
        loop_free: g.edges().iter().all(|e| e.a != e.b),
        negative_definite: g.vertex_count() > 0 && is_negative_definite(&m).unwrap_or(false),
        has_l_node: g.has_l_node(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    /// Edge length `1/(m_v m_v')`.
    #[default]
    Skeletal,
    /// Edge length `1/lcm(m_v, m_v')`.
    Lcm,
}

fn check_multiplicities(g: &DualGraph, m: &[u64]) -> Result<(), GraphError> {
    if m.len() != g.vertex_count() {
        return Err(GraphError::WrongLength {
            expected: g.vertex_count(),
            found: m.len(),
        });
    }
    if let Some(v) = m.iter().position(|&x| x == 0) {
        return Err(GraphError::NonPositiveMultiplicity(g.id(v).to_string()));
    }
    Ok(())
}

pub fn edge_length(
    g: &DualGraph,
    m: &[u64],
    e: usize,
    metric: Metric,
) -> Result<Rational, GraphError> {
    check_multiplicities(g, m)?;
    let edge = g.edge(e)?;
    let (ma, mb) = (m[edge.a], m[edge.b]);
    let den = match metric {
        Metric::Skeletal => ma * mb,
        Metric::Lcm => ma.lcm(&mb),
    };
    Ok(Rational::new(1.into(), den.into()))
}

/// Lengths of every edge, indexed like `g.edges()`.
pub fn edge_lengths(g: &DualGraph, m: &[u64], metric: Metric) -> Result<Vec<Rational>, GraphError> {
    (0..g.edges().len())
        .map(|e| edge_length(g, m, e, metric))
        .collect()
}

/// A point of the metric graph: a vertex or a strictly interior edge point.
///
/// Interior points always use the endpoint with the lexicographically
/// smaller id as reference, so equal points compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointOnGraph {
    Vertex(usize),
    Interior {
        edge: usize,
        from: usize,
        offset: Rational,
    },
}

impl PointOnGraph {
    pub fn vertex(v: usize) -> Self {
        Self::Vertex(v)
    }

    /// Point at distance `offset` from `from` along edge `edge`. Offsets of
    /// zero or the full length collapse to the corresponding vertex.
    pub fn on_edge(
        g: &DualGraph,
        lengths: &[Rational],
        edge: usize,
        from: usize,
        offset: Rational,
    ) -> Result<Self, GraphError> {
        let e = g.edge(edge)?;
        let other = e
            .other(from)
            .ok_or_else(|| GraphError::NotAnEndpoint(g.id(from).to_string(), edge))?;
        let length = lengths[edge].clone();
        if offset.is_zero() {
            return Ok(Self::Vertex(from));
        }
        if offset == length {
            return Ok(Self::Vertex(other));
        }
        if offset.is_negative() || offset > length {
            return Err(GraphError::OffsetOutOfRange {
                edge,
                offset: Box::new(offset),
                length: Box::new(length),
            });
        }
        Ok(if g.id(from) <= g.id(other) {
            Self::Interior { edge, from, offset }
        } else {
            Self::Interior {
                edge,
                from: other,
                offset: length - offset,
            }
        })
    }

    /// Distance from endpoint `v` of the point's edge.
    pub fn offset_from(&self, g: &DualGraph, lengths: &[Rational], v: usize) -> Option<Rational> {
        match self {
            Self::Vertex(_) => None,
            Self::Interior { edge, from, offset } => {
                if *from == v {
                    Some(offset.clone())
                } else if g.edges()[*edge].other(*from) == Some(v) {
                    Some(&lengths[*edge] - offset)
                } else {
                    None
                }
            }
        }
    }

    pub fn label(&self, g: &DualGraph) -> String {
        match self {
            Self::Vertex(v) => g.id(*v).to_string(),
            Self::Interior { edge, from, offset } => {
                let to = g.edges()[*edge].other(*from).unwrap_or(*from);
                format!("{}-{}#{}@{}", g.id(*from), g.id(to), edge, offset)
            }
        }
    }
}

/// Finite formal sum of points with nonzero rational coefficients.
///
/// Laplacians of rational piecewise-linear functions are in general
/// rational; divisors coming from the geometry are integral.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Divisor {
    terms: BTreeMap<PointOnGraph, Rational>,
}

impl Divisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, pt: PointOnGraph, c: Rational) {
        if c.is_zero() {
            return;
        }
        let sum = self.coefficient(&pt) + c;
        if sum.is_zero() {
            self.terms.remove(&pt);
        } else {
            self.terms.insert(pt, sum);
        }
    }

    pub fn coefficient(&self, pt: &PointOnGraph) -> Rational {
        self.terms.get(pt).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn at_vertex(&self, v: usize) -> Rational {
        self.coefficient(&PointOnGraph::Vertex(v))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PointOnGraph, &Rational)> {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn scaled(&self, k: &Rational) -> Divisor {
        let mut out = Divisor::new();
        for (pt, c) in &self.terms {
            out.add(pt.clone(), c * k);
        }
        out
    }

    pub fn plus(&self, other: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (pt, c) in &other.terms {
            out.add(pt.clone(), c.clone());
        }
        out
    }

    pub fn minus(&self, other: &Divisor) -> Divisor {
        self.plus(&other.scaled(&-Rational::one()))
    }

    /// Divisor supported on vertices, one coefficient per vertex.
    pub fn from_vertex_values<I: IntoIterator<Item = Rational>>(values: I) -> Divisor {
        let mut out = Divisor::new();
        for (v, c) in values.into_iter().enumerate() {
            out.add(PointOnGraph::Vertex(v), c);
        }
        out
    }

    pub fn display(&self, g: &DualGraph) -> String {
        if self.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (pt, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            let abs = c.abs();
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if !abs.is_one() {
                out.push_str(&abs.to_string());
            }
            out.push_str(&format!("[{}]", pt.label(g)));
        }
        out
    }
}

pub fn degree(d: &Divisor) -> Rational {
    d.terms.values().sum()
}

/// `f_* d`: coefficients of points with the same image are summed.
pub fn pushforward<F>(d: &Divisor, f: F) -> Divisor
where
    F: Fn(&PointOnGraph) -> PointOnGraph,
{
    let mut out = Divisor::new();
    for (pt, c) in &d.terms {
        out.add(f(pt), c.clone());
    }
    out
}

/// Continuous function on the metric graph, linear between consecutive
/// breakpoints. Breakpoint offsets are measured from the edge's first
/// stored endpoint (`Edge::a`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLFunction {
    values: Vec<Rational>,
    breakpoints: BTreeMap<usize, Vec<(Rational, Rational)>>,
}

impl PLFunction {
    /// Function linear on every edge, given by its vertex values.
    pub fn from_vertex_values(values: Vec<Rational>) -> Self {
        Self {
            values,
            breakpoints: BTreeMap::new(),
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value_at_vertex(&self, v: usize) -> &Rational {
        &self.values[v]
    }

    pub fn breakpoints(&self, edge: usize) -> &[(Rational, Rational)] {
        self.breakpoints.get(&edge).map_or(&[], Vec::as_slice)
    }

    /// Sets the interior breakpoints of an edge; offsets are from `Edge::a`
    /// and must be strictly increasing inside `(0, length)`.
    pub fn set_breakpoints(
        &mut self,
        lengths: &[Rational],
        edge: usize,
        points: Vec<(Rational, Rational)>,
    ) -> Result<(), GraphError> {
        let length = lengths.get(edge).ok_or(GraphError::UnknownEdge(edge))?;
        let mut prev = Rational::zero();
        for (t, _) in &points {
            if *t <= prev || t >= length {
                return Err(GraphError::BadBreakpoints(edge));
            }
            prev = t.clone();
        }
        if points.is_empty() {
            self.breakpoints.remove(&edge);
        } else {
            self.breakpoints.insert(edge, points);
        }
        Ok(())
    }

    /// Knots of the edge from `a` to `b`: `(offset from a, value)` including
    /// both endpoints.
    pub fn knots(
        &self,
        g: &DualGraph,
        lengths: &[Rational],
        edge: usize,
    ) -> Vec<(Rational, Rational)> {
        let e = g.edges()[edge];
        let mut out = Vec::with_capacity(self.breakpoints(edge).len() + 2);
        out.push((Rational::zero(), self.values[e.a].clone()));
        out.extend(self.breakpoints(edge).iter().cloned());
        out.push((lengths[edge].clone(), self.values[e.b].clone()));
        out
    }

    /// Value at `offset` from `Edge::a` along `edge`.
    pub fn value_on_edge(
        &self,
        g: &DualGraph,
        lengths: &[Rational],
        edge: usize,
        offset: &Rational,
    ) -> Rational {
        let knots = self.knots(g, lengths, edge);
        for w in knots.windows(2) {
            let ((t0, y0), (t1, y1)) = (&w[0], &w[1]);
            if offset <= t1 {
                return y0 + (y1 - y0) * (offset - t0) / (t1 - t0);
            }
        }
        knots
            .last()
            .map(|k| k.1.clone())
            .unwrap_or_else(Rational::zero)
    }
}

pub fn evaluate(
    g: &DualGraph,
    lengths: &[Rational],
    f: &PLFunction,
    pt: &PointOnGraph,
) -> Rational {
    match pt {
        PointOnGraph::Vertex(v) => f.values[*v].clone(),
        PointOnGraph::Interior { edge, .. } => {
            let a = g.edges()[*edge].a;
            let t = pt
                .offset_from(g, lengths, a)
                .expect("point lies on its own edge");
            f.value_on_edge(g, lengths, *edge, &t)
        }
    }
}

/// Laplacian for explicit edge lengths: at every vertex and breakpoint the
/// coefficient is the sum of outgoing slopes.
pub fn laplacian_with_lengths(g: &DualGraph, lengths: &[Rational], f: &PLFunction) -> Divisor {
    let mut out = Divisor::new();
    for (ei, e) in g.edges().iter().enumerate() {
        let knots = f.knots(g, lengths, ei);
        let slopes: Vec<Rational> = knots
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect();
        out.add(PointOnGraph::Vertex(e.a), slopes[0].clone());
        out.add(PointOnGraph::Vertex(e.b), -slopes[slopes.len() - 1].clone());
        for (j, (t, _)) in knots[1..knots.len() - 1].iter().enumerate() {
            let pt = PointOnGraph::on_edge(g, lengths, ei, e.a, t.clone())
                .expect("breakpoints are interior");
            out.add(pt, &slopes[j + 1] - &slopes[j]);
        }
    }
    out
}

/// Laplacian with respect to the skeletal metric defined by `m`.
pub fn laplacian(g: &DualGraph, m: &[u64], f: &PLFunction) -> Result<Divisor, GraphError> {
    let lengths = edge_lengths(g, m, Metric::Skeletal)?;
    Ok(laplacian_with_lengths(g, &lengths, f))
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Skeletal => "skeletal",
            Metric::Lcm => "lcm",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::rat;

    fn e8_m() -> Vec<u64> {
        vec![2, 3, 4, 5, 6, 4, 2, 3]
    }

    #[test]
    fn intersection_matrices() {
        let a2 = DualGraph::new(
            vec![VertexData::new("a", -2), VertexData::new("b", -2)],
            &[("a", "b")],
        )
        .unwrap();
        assert_eq!(
            intersection_matrix(&a2),
            RationalMatrix::from_i64_rows(&[vec![-2, 1], vec![1, -2]])
        );
        let single = DualGraph::new::<&str>(vec![VertexData::new("a", -1)], &[]).unwrap();
        assert_eq!(
            intersection_matrix(&single),
            RationalMatrix::from_i64_rows(&[vec![-1]])
        );
        let e8 = fixtures::e8();
        let m = intersection_matrix(&e8);
        for i in 0..8 {
            assert_eq!(*m.get(i, i), int(-2));
            for j in 0..8 {
                if i != j {
                    let adjacent = e8.edge_multiplicity(i, j) == 1;
                    assert_eq!(*m.get(i, j), int(i64::from(adjacent)));
                }
            }
        }
        assert_eq!(*m.get(4, 7), int(1));
        assert_eq!(*m.get(3, 7), int(0));
    }

    #[test]
    fn construction_errors() {
        let err = DualGraph::new(vec![VertexData::new("a", -2)], &[("a", "a")]).unwrap_err();
        assert_eq!(err, GraphError::LoopEdge("a".into()));
        let err = DualGraph::new(
            vec![VertexData::new("a", -2), VertexData::new("a", -1)],
            &[] as &[(&str, &str)],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::DuplicateVertex("a".into()));
        let err = DualGraph::new(vec![VertexData::new("a", -2)], &[("a", "b")]).unwrap_err();
        assert_eq!(err, GraphError::UnknownVertex("b".into()));
    }

    #[test]
    fn validation_reports() {
        assert!(validate(&fixtures::e8()).is_valid());
        let split = DualGraph::new::<&str>(
            vec![VertexData::new("a", -2).l(1), VertexData::new("b", -2)],
            &[],
        )
        .unwrap();
        let r = validate(&split);
        assert!(!r.connected);
        assert!(r.negative_definite);
        let doubled = DualGraph::new(
            vec![VertexData::new("a", -1).l(1), VertexData::new("b", -1)],
            &[("a", "b"), ("a", "b")],
        )
        .unwrap();
        let r = validate(&doubled);
        assert!(r.connected);
        assert!(!r.negative_definite);
        assert!(!r.is_valid());
    }

    #[test]
    fn edge_lengths_e8() {
        let g = fixtures::e8();
        let m = e8_m();
        let e47 = g.find_edge(4, 7).unwrap();
        assert_eq!(
            edge_length(&g, &m, e47, Metric::Skeletal).unwrap(),
            rat(1, 18)
        );
        let path = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 7)];
        let total: Rational = path
            .iter()
            .map(|&(a, b)| {
                edge_length(&g, &m, g.find_edge(a, b).unwrap(), Metric::Skeletal).unwrap()
            })
            .sum();
        assert_eq!(total, rat(7, 18));
        assert_eq!(
            edge_length(&g, &m, 99, Metric::Skeletal),
            Err(GraphError::UnknownEdge(99))
        );
    }

    #[test]
    fn lcm_length() {
        let g = DualGraph::new(
            vec![VertexData::new("a", -2), VertexData::new("b", -2)],
            &[("a", "b")],
        )
        .unwrap();
        assert_eq!(edge_length(&g, &[5, 5], 0, Metric::Lcm).unwrap(), rat(1, 5));
        assert_eq!(
            edge_length(&g, &[4, 6], 0, Metric::Lcm).unwrap(),
            rat(1, 12)
        );
        assert_eq!(
            edge_length(&g, &[4, 6], 0, Metric::Skeletal).unwrap(),
            rat(1, 24)
        );
    }

    #[test]
    fn pushforward_and_degree() {
        let g = DualGraph::new::<&str>(
            vec![
                VertexData::new("a", -1),
                VertexData::new("b", -1),
                VertexData::new("c", -1),
            ],
            &[],
        )
        .unwrap();
        let mut d = Divisor::new();
        d.add(PointOnGraph::Vertex(0), int(2));
        d.add(PointOnGraph::Vertex(1), int(3));
        assert_eq!(pushforward(&d, Clone::clone), d);
        let to_c = |_: &PointOnGraph| PointOnGraph::Vertex(2);
        let pushed = pushforward(&d, to_c);
        assert_eq!(pushed.display(&g), "5[c]");
        assert_eq!(degree(&d), int(5));
        let mut e = Divisor::new();
        e.add(PointOnGraph::Vertex(0), int(2));
        e.add(PointOnGraph::Vertex(1), int(-2));
        assert!(pushforward(&e, to_c).is_empty());
        assert_eq!(degree(&Divisor::new()), int(0));
    }

    #[test]
    fn e8_laplacian_divisor_has_degree_zero() {
        let lap = Divisor::from_vertex_values([2, 0, 0, 0, 6, 0, -2, -6].map(int));
        assert_eq!(degree(&lap), int(0));
    }

    #[test]
    fn evaluate_interpolates() {
        let g = fixtures::e8();
        let lengths = edge_lengths(&g, &e8_m(), Metric::Skeletal).unwrap();
        let rates = PLFunction::from_vertex_values(
            [
                rat(1, 1),
                rat(4, 3),
                rat(3, 2),
                rat(8, 5),
                rat(5, 3),
                rat(7, 4),
                int(2),
                int(2),
            ]
            .to_vec(),
        );
        assert_eq!(
            evaluate(&g, &lengths, &rates, &PointOnGraph::Vertex(4)),
            rat(5, 3)
        );
        let e01 = g.find_edge(0, 1).unwrap();
        let mid = PointOnGraph::on_edge(&g, &lengths, e01, 0, rat(1, 12)).unwrap();
        assert_eq!(evaluate(&g, &lengths, &rates, &mid), rat(7, 6));
        let p = PointOnGraph::on_edge(&g, &lengths, e01, 0, rat(1, 18)).unwrap();
        assert_eq!(evaluate(&g, &lengths, &rates, &p), rat(10, 9));
    }

    #[test]
    fn point_equality_is_orientation_free() {
        let g = fixtures::e8();
        let lengths = edge_lengths(&g, &e8_m(), Metric::Skeletal).unwrap();
        let e = g.find_edge(4, 7).unwrap();
        let x = PointOnGraph::on_edge(&g, &lengths, e, 4, rat(1, 54)).unwrap();
        let y = PointOnGraph::on_edge(&g, &lengths, e, 7, rat(2, 54)).unwrap();
        assert_eq!(x, y);
        assert_eq!(
            PointOnGraph::on_edge(&g, &lengths, e, 4, int(0)).unwrap(),
            PointOnGraph::Vertex(4)
        );
        assert!(PointOnGraph::on_edge(&g, &lengths, e, 4, int(1)).is_err());
        assert!(PointOnGraph::on_edge(&g, &lengths, e, 0, rat(1, 100)).is_err());
    }

    #[test]
    fn laplacian_examples() {
        let path = DualGraph::new(
            vec![
                VertexData::new("a", -2),
                VertexData::new("b", -2),
                VertexData::new("c", -2),
            ],
            &[("a", "b"), ("b", "c")],
        )
        .unwrap();
        let f = PLFunction::from_vertex_values(vec![int(0), int(1), int(0)]);
        let lap = laplacian(&path, &[1, 1, 1], &f).unwrap();
        assert_eq!(lap.display(&path), "[a] - 2[b] + [c]");
        let constant = PLFunction::from_vertex_values(vec![int(3); 3]);
        assert!(laplacian(&path, &[1, 2, 1], &constant).unwrap().is_empty());
    }

    #[test]
    fn laplacian_at_breakpoint() {
        let g = DualGraph::new(
            vec![VertexData::new("a", -1), VertexData::new("b", -1)],
            &[("a", "b")],
        )
        .unwrap();
        let lengths = vec![int(1)];
        let mut f = PLFunction::from_vertex_values(vec![int(0), int(0)]);
        f.set_breakpoints(&lengths, 0, vec![(rat(1, 2), int(1))])
            .unwrap();
        let lap = laplacian_with_lengths(&g, &lengths, &f);
        let mid = PointOnGraph::on_edge(&g, &lengths, 0, 0, rat(1, 2)).unwrap();
        assert_eq!(lap.at_vertex(0), int(2));
        assert_eq!(lap.at_vertex(1), int(2));
        assert_eq!(lap.coefficient(&mid), int(-4));
        assert_eq!(degree(&lap), int(0));
        assert!(f
            .set_breakpoints(&lengths, 0, vec![(rat(1, 2), int(1)), (rat(1, 3), int(1))])
            .is_err());
    }
}
