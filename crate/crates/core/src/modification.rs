//! Point blowups of the resolution seen on the dual graph, with exact
//! propagation of multiplicities and inner rates.
//!
//! Blowing up a smooth point of `E_v` adds a `(-1)`-vertex `w` hanging off
//! `v` with `m_w = m_v` and `q_w = q_v + 1/m_v`. Blowing up the double point
//! `E_v ∩ E_v'` subdivides the edge with `m_w = m_v + m_v'` and `q_w` the
//! `m`-weighted mean of the two rates.

use thiserror::Error;

use crate::graph::{
    edge_lengths, laplacian, pushforward, DualGraph, Edge, GraphError, Metric, PLFunction,
    PointOnGraph, VertexData,
};
use crate::invariants::canonical_vector;
use crate::linalg::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModificationError {
    #[error("unknown vertex index {0}")]
    UnknownVertex(usize),
    #[error(
        "cannot transfer {requested} units of {kind} from `{vertex}`, only {available} available"
    )]
    TransferExceeds {
        kind: &'static str,
        vertex: String,
        requested: u32,
        available: u32,
    },
    #[error("vector of length {found} does not match {expected} vertices")]
    WrongLength { expected: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// How points of the blown-up graph map back onto the original graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Retraction {
    Identity,
    /// The new vertex and its edge collapse onto `base`.
    Smooth {
        new_vertex: usize,
        base: usize,
        new_edge: usize,
    },
    /// Edge `edge = (a, b)` was split at `w`. In the new graph `edge` joins
    /// `a` to `w` and `new_edge` joins `w` to `b`; `w` sits at distance
    /// `split` from `a` on the original edge.
    Edge {
        new_vertex: usize,
        edge: usize,
        new_edge: usize,
        a: usize,
        split: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupResult {
    pub source: DualGraph,
    pub source_m: Vec<u64>,
    pub graph: DualGraph,
    pub m: Vec<u64>,
    pub q: Vec<Rational>,
    pub new_vertex: Option<usize>,
    pub retraction: Retraction,
}

fn check_inputs(g: &DualGraph, m: &[u64], q: &[Rational]) -> Result<(), ModificationError> {
    for len in [m.len(), q.len()] {
        if len != g.vertex_count() {
            return Err(ModificationError::WrongLength {
                expected: g.vertex_count(),
                found: len,
            });
        }
    }
    if let Some(v) = m.iter().position(|&x| x == 0) {
        return Err(GraphError::NonPositiveMultiplicity(g.id(v).to_string()).into());
    }
    Ok(())
}

impl BlowupResult {
    /// The trivial modification.
    pub fn identity(g: &DualGraph, m: &[u64], q: &[Rational]) -> Result<Self, ModificationError> {
        check_inputs(g, m, q)?;
        Ok(Self {
            source: g.clone(),
            source_m: m.to_vec(),
            graph: g.clone(),
            m: m.to_vec(),
            q: q.to_vec(),
            new_vertex: None,
            retraction: Retraction::Identity,
        })
    }

    pub fn source_lengths(&self) -> Vec<Rational> {
        edge_lengths(&self.source, &self.source_m, Metric::Skeletal)
            .expect("checked multiplicities")
    }

    pub fn lengths(&self) -> Vec<Rational> {
        edge_lengths(&self.graph, &self.m, Metric::Skeletal).expect("checked multiplicities")
    }

    /// Image of a point of the new graph under the retraction.
    pub fn retract(&self, pt: &PointOnGraph) -> PointOnGraph {
        match &self.retraction {
            Retraction::Identity => pt.clone(),
            Retraction::Smooth {
                new_vertex,
                base,
                new_edge,
            } => match pt {
                PointOnGraph::Vertex(v) if v == new_vertex => PointOnGraph::Vertex(*base),
                PointOnGraph::Interior { edge, .. } if edge == new_edge => {
                    PointOnGraph::Vertex(*base)
                }
                other => other.clone(),
            },
            Retraction::Edge {
                new_vertex,
                edge,
                new_edge,
                a,
                split,
            } => {
                let old_lengths = self.source_lengths();
                let at = |t: Rational| {
                    PointOnGraph::on_edge(&self.source, &old_lengths, *edge, *a, t)
                        .expect("retracted point lies on the subdivided edge")
                };
                match pt {
                    PointOnGraph::Vertex(v) if v == new_vertex => at(split.clone()),
                    PointOnGraph::Interior { edge: e, .. } if e == edge => {
                        let t = pt
                            .offset_from(&self.graph, &self.lengths(), *a)
                            .expect("point on first half");
                        at(t)
                    }
                    PointOnGraph::Interior { edge: e, .. } if e == new_edge => {
                        let t = pt
                            .offset_from(&self.graph, &self.lengths(), *new_vertex)
                            .expect("point on second half");
                        at(split + t)
                    }
                    other => other.clone(),
                }
            }
        }
    }

    /// Extends a function on the source graph to the new graph. For a smooth
    /// blowup the new vertex gets `new_value` (the new edge is linear); for
    /// an edge blowup `new_value` is ignored and the function is unchanged
    /// as a function on the metric graph.
    pub fn extend_function(&self, f: &PLFunction, new_value: Rational) -> PLFunction {
        let old_lengths = self.source_lengths();
        let new_lengths = self.lengths();
        let mut values = f.values().to_vec();
        let mut out_breaks: Vec<(usize, Vec<(Rational, Rational)>)> = Vec::new();
        for e in 0..self.source.edges().len() {
            out_breaks.push((e, f.breakpoints(e).to_vec()));
        }
        match &self.retraction {
            Retraction::Identity => {}
            Retraction::Smooth { .. } => values.push(new_value),
            Retraction::Edge {
                edge,
                new_edge,
                split,
                ..
            } => {
                values.push(f.value_on_edge(&self.source, &old_lengths, *edge, split));
                let (first, second): (Vec<_>, Vec<_>) = f
                    .breakpoints(*edge)
                    .iter()
                    .filter(|(t, _)| t != split)
                    .cloned()
                    .partition(|(t, _)| t < split);
                out_breaks[*edge].1 = first;
                out_breaks.push((
                    *new_edge,
                    second.into_iter().map(|(t, y)| (t - split, y)).collect(),
                ));
            }
        }
        let mut g = PLFunction::from_vertex_values(values);
        for (e, pts) in out_breaks {
            g.set_breakpoints(&new_lengths, e, pts)
                .expect("breakpoints stay interior after subdivision");
        }
        g
    }

    /// The propagated rates as a function on the new graph.
    pub fn rates_function(&self) -> PLFunction {
        PLFunction::from_vertex_values(self.q.clone())
    }
}

/// Blows up a smooth point of `E_v`. `transfer_l` and `transfer_p` units of
/// arrow weight move from `v` to the new vertex, each unit standing for a
/// smooth branch transverse to `E_v` through the blown-up point.
pub fn blowup_smooth(
    g: &DualGraph,
    m: &[u64],
    q: &[Rational],
    v: usize,
    transfer_l: u32,
    transfer_p: u32,
) -> Result<BlowupResult, ModificationError> {
    check_inputs(g, m, q)?;
    if v >= g.vertex_count() {
        return Err(ModificationError::UnknownVertex(v));
    }
    let data = g.vertex(v);
    for (kind, requested, available) in [("L", transfer_l, data.l), ("P", transfer_p, data.p)] {
        if requested > available {
            return Err(ModificationError::TransferExceeds {
                kind,
                vertex: data.id.clone(),
                requested,
                available,
            });
        }
    }
    let mut graph = g.clone();
    {
        let base = graph.vertex_mut(v);
        base.self_int -= 1;
        base.l -= transfer_l;
        base.p -= transfer_p;
    }
    let w = graph.push_vertex(
        VertexData::new(g.fresh_id("w"), -1)
            .l(transfer_l)
            .p(transfer_p),
    )?;
    let new_edge = graph.push_edge(v, w)?;

    let m_w = m[v] + u64::from(transfer_l);
    let a_v = &q[v] * int(m[v] as i64);
    let a_w = a_v + int(1 - i64::from(transfer_l) + i64::from(transfer_p));
    let mut m_new = m.to_vec();
    m_new.push(m_w);
    let mut q_new = q.to_vec();
    q_new.push(a_w / int(m_w as i64));

    Ok(BlowupResult {
        source: g.clone(),
        source_m: m.to_vec(),
        graph,
        m: m_new,
        q: q_new,
        new_vertex: Some(w),
        retraction: Retraction::Smooth {
            new_vertex: w,
            base: v,
            new_edge,
        },
    })
}

/// Blows up the double point corresponding to edge `e`.
pub fn blowup_edge(
    g: &DualGraph,
    m: &[u64],
    q: &[Rational],
    e: usize,
) -> Result<BlowupResult, ModificationError> {
    check_inputs(g, m, q)?;
    let Edge { a, b } = g.edge(e)?;
    let mut graph = g.clone();
    graph.vertex_mut(a).self_int -= 1;
    graph.vertex_mut(b).self_int -= 1;
    let w = graph.push_vertex(VertexData::new(g.fresh_id("w"), -1))?;
    graph.replace_edge(e, Edge { a, b: w });
    let new_edge = graph.push_edge(w, b)?;

    let m_w = m[a] + m[b];
    let weighted = &q[a] * int(m[a] as i64) + &q[b] * int(m[b] as i64);
    let mut m_new = m.to_vec();
    m_new.push(m_w);
    let mut q_new = q.to_vec();
    q_new.push(weighted / int(m_w as i64));
    let split = Rational::new(1.into(), (m[a] * m_w).into());

    Ok(BlowupResult {
        source: g.clone(),
        source_m: m.to_vec(),
        graph,
        m: m_new,
        q: q_new,
        new_vertex: Some(w),
        retraction: Retraction::Edge {
            new_vertex: w,
            edge: e,
            new_edge,
            a,
            split,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushforwardCheck {
    pub laplacian_ok: bool,
    pub canonical_ok: bool,
}

impl PushforwardCheck {
    pub fn holds(&self) -> bool {
        self.laplacian_ok && self.canonical_ok
    }
}

/// Checks `r_*Δ(F_after) = Δ(F_before)` and `r_*K_after = K_before`.
pub fn check_pushforward_invariance(
    result: &BlowupResult,
    f_before: &PLFunction,
    f_after: &PLFunction,
) -> Result<PushforwardCheck, ModificationError> {
    let lap_before = laplacian(&result.source, &result.source_m, f_before)?;
    let lap_after = laplacian(&result.graph, &result.m, f_after)?;
    let retract = |pt: &PointOnGraph| result.retract(pt);
    let (_, k_before) = canonical_vector(&result.source, &result.source_m);
    let (_, k_after) = canonical_vector(&result.graph, &result.m);
    Ok(PushforwardCheck {
        laplacian_ok: pushforward(&lap_after, retract) == lap_before,
        canonical_ok: pushforward(&k_after, retract) == k_before,
    })
}

/// Skeletal-length identity `1/(m_a m_w) + 1/(m_w m_b) = 1/(m_a m_b)` for
/// an edge blowup.
pub fn is_isometric_subdivision(m_a: u64, m_b: u64) -> bool {
    let m_w = m_a + m_b;
    let len = |x: u64, y: u64| Rational::new(1.into(), (x * y).into());
    len(m_a, m_w) + len(m_w, m_b) == len(m_a, m_b)
}
