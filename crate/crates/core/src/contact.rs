//! Inner contact exponents between points of the graph.
//!
//! The contact of `x` and `y` is the maximum, over injective paths from `x`
//! to `y`, of the minimum of the rate function along the path. Distances
//! `e^{-F}` are never materialized: exponents are compared directly, with
//! the order reversed.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Signed;
use thiserror::Error;

use crate::graph::{evaluate, DualGraph, PLFunction, PointOnGraph};
use crate::linalg::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContactError {
    #[error("distance {0} is negative")]
    NegativeDistance(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactResult {
    pub exponent: Rational,
    /// Graph vertices visited by the first maximizing path.
    pub witness_path: Vec<usize>,
    pub all_paths_count: usize,
}

/// Exponent of the ultrametric `d(x, y) = e^{-F}`; `Infinite` encodes
/// distance zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exponent {
    Finite(Rational),
    Infinite,
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Infinite, Self::Infinite) => Ordering::Equal,
            (Self::Infinite, _) => Ordering::Greater,
            (_, Self::Infinite) => Ordering::Less,
            (Self::Finite(a), Self::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(r) => write!(f, "{r}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

/// All simple vertex paths from `from` to `to`, in lexicographic order of
/// vertex indices. Parallel edges do not produce repeated sequences.
pub fn injective_paths(g: &DualGraph, from: usize, to: usize) -> Vec<Vec<usize>> {
    let adjacency: Vec<Vec<usize>> = (0..g.vertex_count()).map(|v| g.neighbours(v)).collect();
    let mut out = Vec::new();
    let mut path = vec![from];
    let mut on_path = vec![false; g.vertex_count()];
    on_path[from] = true;
    walk(&adjacency, to, &mut path, &mut on_path, &mut |p| {
        out.push(p.to_vec())
    });
    out
}

fn walk(
    adjacency: &[Vec<usize>],
    target: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    emit: &mut dyn FnMut(&[usize]),
) {
    let here = *path.last().expect("nonempty path");
    if here == target {
        emit(path);
        return;
    }
    for &next in &adjacency[here] {
        if on_path[next] {
            continue;
        }
        on_path[next] = true;
        path.push(next);
        walk(adjacency, target, path, on_path, emit);
        path.pop();
        on_path[next] = false;
    }
}

/// Graph with `x` and `y` inserted as nodes when they are edge-interior.
/// Each node pair keeps the best (largest) interior minimum over its
/// parallel segments; `None` means the segment has no interior breakpoint.
struct SplitGraph {
    values: Vec<Rational>,
    adjacency: Vec<Vec<(usize, Option<Rational>)>>,
    originals: usize,
}

fn better(a: &Option<Rational>, b: &Option<Rational>) -> bool {
    match (a, b) {
        (None, _) => false,
        (Some(_), None) => true,
        (Some(x), Some(y)) => y > x,
    }
}

impl SplitGraph {
    fn build(
        g: &DualGraph,
        lengths: &[Rational],
        f: &PLFunction,
        marks: &[(usize, &PointOnGraph)],
    ) -> Self {
        let n = g.vertex_count();
        let mut values: Vec<Rational> = f.values().to_vec();
        for (_, pt) in marks {
            values.push(evaluate(g, lengths, f, pt));
        }
        let mut adjacency: Vec<Vec<(usize, Option<Rational>)>> = vec![Vec::new(); values.len()];
        let mut connect = |u: usize, v: usize, interior: Option<Rational>| {
            for (a, b) in [(u, v), (v, u)] {
                match adjacency[a].iter_mut().find(|(w, _)| *w == b) {
                    Some(slot) => {
                        if better(&slot.1, &interior) {
                            slot.1 = interior.clone();
                        }
                    }
                    None => adjacency[a].push((b, interior.clone())),
                }
            }
        };
        for (ei, e) in g.edges().iter().enumerate() {
            let mut cuts: Vec<(Rational, usize)> = vec![(Rational::from_integer(0.into()), e.a)];
            for (node, pt) in marks {
                if let PointOnGraph::Interior { edge, .. } = pt {
                    if *edge == ei {
                        let t = pt.offset_from(g, lengths, e.a).expect("point on edge");
                        cuts.push((t, *node));
                    }
                }
            }
            cuts.push((lengths[ei].clone(), e.b));
            cuts[1..].sort();
            for w in cuts.windows(2) {
                let ((t0, u), (t1, v)) = (&w[0], &w[1]);
                if u == v {
                    continue;
                }
                let interior = f
                    .breakpoints(ei)
                    .iter()
                    .filter(|(t, _)| t > t0 && t < t1)
                    .map(|(_, y)| y.clone())
                    .min();
                connect(*u, *v, interior);
            }
        }
        for list in &mut adjacency {
            list.sort_by_key(|(w, _)| *w);
        }
        Self {
            values,
            adjacency,
            originals: n,
        }
    }

    fn best_path(&self, from: usize, to: usize) -> (Rational, Vec<usize>, usize) {
        let mut best: Option<(Rational, Vec<usize>)> = None;
        let mut count = 0usize;
        let mut path = vec![from];
        let mut on_path = vec![false; self.values.len()];
        on_path[from] = true;
        self.search(
            to,
            &mut path,
            &mut on_path,
            self.values[from].clone(),
            &mut |value, p| {
                count += 1;
                if best.as_ref().is_none_or(|(b, _)| value > *b) {
                    best = Some((value, p.to_vec()));
                }
            },
        );
        let (value, nodes) = best.expect("graph is connected");
        let witness = nodes.into_iter().filter(|&v| v < self.originals).collect();
        (value, witness, count)
    }

    fn search(
        &self,
        target: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        running_min: Rational,
        emit: &mut dyn FnMut(Rational, &[usize]),
    ) {
        let here = *path.last().expect("nonempty path");
        if here == target {
            emit(running_min, path);
            return;
        }
        for (next, interior) in &self.adjacency[here] {
            if on_path[*next] {
                continue;
            }
            let mut m = running_min.clone().min(self.values[*next].clone());
            if let Some(i) = interior {
                m = m.min(i.clone());
            }
            on_path[*next] = true;
            path.push(*next);
            self.search(target, path, on_path, m, emit);
            path.pop();
            on_path[*next] = false;
        }
    }
}

/// Max over injective paths from `x` to `y` of the min of `f` along the path.
pub fn inner_contact(
    g: &DualGraph,
    lengths: &[Rational],
    f: &PLFunction,
    x: &PointOnGraph,
    y: &PointOnGraph,
) -> ContactResult {
    if x == y {
        return ContactResult {
            exponent: evaluate(g, lengths, f, x),
            witness_path: match x {
                PointOnGraph::Vertex(v) => vec![*v],
                PointOnGraph::Interior { .. } => Vec::new(),
            },
            all_paths_count: 1,
        };
    }
    let n = g.vertex_count();
    let mut marks = Vec::new();
    let node_of = |pt: &PointOnGraph, marks: &mut Vec<(usize, PointOnGraph)>| match pt {
        PointOnGraph::Vertex(v) => *v,
        PointOnGraph::Interior { .. } => {
            let node = n + marks.len();
            marks.push((node, pt.clone()));
            node
        }
    };
    let from = node_of(x, &mut marks);
    let to = node_of(y, &mut marks);
    let refs: Vec<(usize, &PointOnGraph)> = marks.iter().map(|(i, p)| (*i, p)).collect();
    let split = SplitGraph::build(g, lengths, f, &refs);
    let (exponent, witness_path, all_paths_count) = split.best_path(from, to);
    ContactResult {
        exponent,
        witness_path,
        all_paths_count,
    }
}

/// Contact between two vertices for rates given at the vertices only.
pub fn vertex_contact(g: &DualGraph, q: &[Rational], v: usize, w: usize) -> ContactResult {
    let f = PLFunction::from_vertex_values(q.to_vec());
    let lengths = vec![Rational::from_integer(1.into()); g.edges().len()];
    inner_contact(
        g,
        &lengths,
        &f,
        &PointOnGraph::Vertex(v),
        &PointOnGraph::Vertex(w),
    )
}

pub fn ultrametric_exponent(
    g: &DualGraph,
    lengths: &[Rational],
    f: &PLFunction,
    x: &PointOnGraph,
    y: &PointOnGraph,
) -> Exponent {
    if x == y {
        Exponent::Infinite
    } else {
        Exponent::Finite(inner_contact(g, lengths, f, x, y).exponent)
    }
}

/// Rate at a point off the graph that retracts to `base` at lcm-metric
/// distance `lcm_distance`.
pub fn rate_off_skeleton(
    g: &DualGraph,
    lengths: &[Rational],
    f: &PLFunction,
    base: &PointOnGraph,
    lcm_distance: &Rational,
) -> Result<Rational, ContactError> {
    if lcm_distance.is_negative() {
        return Err(ContactError::NegativeDistance(lcm_distance.clone()));
    }
    Ok(evaluate(g, lengths, f, base) + lcm_distance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{edge_lengths, Metric, VertexData};
    use crate::invariants::solve_inner_rates;
    use crate::linalg::{int, rat};
    use crate::modification::blowup_smooth;

    fn e8_setup() -> (DualGraph, Vec<u64>, Vec<Rational>, Vec<Rational>) {
        let g = fixtures::e8();
        let b = solve_inner_rates(&g).unwrap();
        let lengths = edge_lengths(&g, &b.m, Metric::Skeletal).unwrap();
        (g, b.m, b.q, lengths)
    }

    fn triangle() -> DualGraph {
        DualGraph::new(
            vec![
                VertexData::new("a", -2),
                VertexData::new("b", -2),
                VertexData::new("c", -2),
            ],
            &[("a", "b"), ("b", "c"), ("a", "c"), ("a", "c")],
        )
        .unwrap()
    }

    #[test]
    fn paths_in_trees_and_cycles() {
        let g = fixtures::e8();
        assert_eq!(injective_paths(&g, 0, 7), vec![vec![0, 1, 2, 3, 4, 7]]);
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(injective_paths(&g, a, b).len(), 1);
            }
        }
        assert_eq!(
            injective_paths(&triangle(), 0, 2),
            vec![vec![0, 1, 2], vec![0, 2]]
        );
    }

    #[test]
    fn e8_contacts() {
        let (g, _, q, _) = e8_setup();
        let c = vertex_contact(&g, &q, 6, 7);
        assert_eq!(c.exponent, rat(5, 3));
        assert_eq!(c.witness_path, vec![6, 5, 4, 7]);
        assert_eq!(c.all_paths_count, 1);
        for v in 0..8 {
            assert_eq!(vertex_contact(&g, &q, 0, v).exponent, int(1));
        }
        assert_eq!(vertex_contact(&g, &q, 4, 4).exponent, rat(5, 3));
    }

    #[test]
    fn ultrametric_examples() {
        let (g, _, q, lengths) = e8_setup();
        let f = PLFunction::from_vertex_values(q);
        let v = PointOnGraph::Vertex;
        assert_eq!(
            ultrametric_exponent(&g, &lengths, &f, &v(3), &v(3)),
            Exponent::Infinite
        );
        let e67 = ultrametric_exponent(&g, &lengths, &f, &v(6), &v(7));
        assert_eq!(e67, Exponent::Finite(rat(5, 3)));
        let e60 = ultrametric_exponent(&g, &lengths, &f, &v(6), &v(0));
        let e07 = ultrametric_exponent(&g, &lengths, &f, &v(0), &v(7));
        assert!(e67 >= e60.min(e07));
        assert!(Exponent::Infinite > Exponent::Finite(int(1_000_000)));
    }

    #[test]
    fn interior_points() {
        let (g, _, q, lengths) = e8_setup();
        let f = PLFunction::from_vertex_values(q);
        let e67 = g.find_edge(5, 6).unwrap();
        let x = PointOnGraph::on_edge(&g, &lengths, e67, 6, rat(1, 16)).unwrap();
        // v6 (2) to v5 (7/4) along an edge of length 1/8: value 15/8 at the midpoint
        assert_eq!(evaluate(&g, &lengths, &f, &x), rat(15, 8));
        let c = inner_contact(&g, &lengths, &f, &x, &PointOnGraph::Vertex(6));
        assert_eq!(c.exponent, rat(15, 8));
        assert_eq!(c.witness_path, vec![6]);
        let c = inner_contact(&g, &lengths, &f, &x, &PointOnGraph::Vertex(7));
        assert_eq!(c.exponent, rat(5, 3));
        assert_eq!(c.witness_path, vec![5, 4, 7]);
        let y = PointOnGraph::on_edge(&g, &lengths, e67, 6, rat(1, 32)).unwrap();
        assert_eq!(inner_contact(&g, &lengths, &f, &x, &y).exponent, rat(15, 8));
    }

    #[test]
    fn breakpoint_dip_is_avoided_through_parallel_edge() {
        let g = triangle();
        let lengths = vec![int(1); 4];
        let mut f = PLFunction::from_vertex_values(vec![int(3), int(1), int(3)]);
        f.set_breakpoints(&lengths, 2, vec![(rat(1, 2), int(0))])
            .unwrap();
        let c = inner_contact(
            &g,
            &lengths,
            &f,
            &PointOnGraph::Vertex(0),
            &PointOnGraph::Vertex(2),
        );
        // edge 3 is a clean parallel copy of a-c
        assert_eq!(c.exponent, int(3));
        assert_eq!(c.witness_path, vec![0, 2]);
        f.set_breakpoints(&lengths, 3, vec![(rat(1, 3), int(2))])
            .unwrap();
        let c = inner_contact(
            &g,
            &lengths,
            &f,
            &PointOnGraph::Vertex(0),
            &PointOnGraph::Vertex(2),
        );
        assert_eq!(c.exponent, int(2));
    }

    #[test]
    fn edge_linear_rates_need_only_vertex_minima() {
        let (g, _, q, lengths) = e8_setup();
        let f = PLFunction::from_vertex_values(q.clone());
        for a in 0..8 {
            for b in 0..8 {
                let c = inner_contact(
                    &g,
                    &lengths,
                    &f,
                    &PointOnGraph::Vertex(a),
                    &PointOnGraph::Vertex(b),
                );
                let vertex_min = c.witness_path.iter().map(|&v| q[v].clone()).min().unwrap();
                assert_eq!(c.exponent, vertex_min);
            }
        }
    }

    #[test]
    fn off_skeleton_rates() {
        let (g, m, q, lengths) = e8_setup();
        let f = PLFunction::from_vertex_values(q.clone());
        let v = PointOnGraph::Vertex;
        assert_eq!(
            rate_off_skeleton(&g, &lengths, &f, &v(0), &int(0)).unwrap(),
            int(1)
        );
        let r = rate_off_skeleton(&g, &lengths, &f, &v(0), &rat(1, 2)).unwrap();
        assert_eq!(r, rat(3, 2));
        let blown = blowup_smooth(&g, &m, &q, 0, 0, 0).unwrap();
        assert_eq!(blown.q[8], r);
        assert_eq!(
            rate_off_skeleton(&g, &lengths, &f, &v(7), &rat(1, 3)).unwrap(),
            rat(7, 3)
        );
        assert_eq!(
            rate_off_skeleton(&g, &lengths, &f, &v(7), &rat(-1, 3)),
            Err(ContactError::NegativeDistance(rat(-1, 3)))
        );
    }
}
