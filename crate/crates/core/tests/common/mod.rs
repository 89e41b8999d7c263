#![allow(dead_code)]

use inner_rates::graph::{DualGraph, Edge, PLFunction, VertexData};
use inner_rates::linalg::{rat, Rational};
use rand::rngs::StdRng;
use rand::Rng;

pub fn random_rational(rng: &mut StdRng) -> Rational {
    rat(rng.gen_range(-40..=40), rng.gen_range(1..=12))
}

/// Random PL function with up to two interior breakpoints per edge.
pub fn random_pl_function(rng: &mut StdRng, g: &DualGraph, lengths: &[Rational]) -> PLFunction {
    let values = (0..g.vertex_count())
        .map(|_| random_rational(rng))
        .collect();
    let mut f = PLFunction::from_vertex_values(values);
    for (e, len) in lengths.iter().enumerate() {
        let count = rng.gen_range(0..=2);
        let mut fractions: Vec<i64> = (0..count).map(|_| rng.gen_range(1..10)).collect();
        fractions.sort_unstable();
        fractions.dedup();
        let points = fractions
            .into_iter()
            .map(|k| (len * rat(k, 10), random_rational(rng)))
            .collect();
        f.set_breakpoints(lengths, e, points).unwrap();
    }
    f
}

/// Random connected loop-free multigraph on `n` vertices: a random spanning
/// tree plus a few extra (possibly parallel) edges.
pub fn random_multigraph(rng: &mut StdRng, n: usize) -> DualGraph {
    let vertices = (0..n)
        .map(|i| VertexData::new(format!("u{i}"), -2))
        .collect();
    let mut edges = Vec::new();
    for b in 1..n {
        edges.push(Edge {
            a: rng.gen_range(0..b),
            b,
        });
    }
    if n > 1 {
        for _ in 0..rng.gen_range(0..=n) {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b {
                edges.push(Edge { a, b });
            }
        }
    }
    DualGraph::from_indexed(vertices, edges).unwrap()
}
