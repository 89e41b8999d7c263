//! Enumeration of admissible polar configurations.
//!
//! Given the topology, genera and hyperplane arrows of a graph, every
//! nonnegative integer vector `p` with `Σ m_v p_v` equal to the polar
//! multiplicity is tried; the ones whose solution of `M·a = k + l - p` gives
//! integral positive `a`, rates `q = 1` on L-nodes and `q > 1` elsewhere are
//! kept.

use std::fmt;

use num_traits::{One, Signed};
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{intersection_matrix, DualGraph};
use crate::invariants::{canonical_k, euler_characteristics, solve_multiplicities, InvariantError};
use crate::linalg::{int, solve_linear, LinalgError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolarError {
    #[error("no vertex carries a hyperplane arrow (L > 0)")]
    NoLNodes,
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleConfig {
    pub p: Vec<u32>,
    pub q: Vec<Rational>,
    pub a: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Require `q_v > 1` (rather than `q_v >= 1`) away from L-nodes.
    pub strict_rates: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self { strict_rates: true }
    }
}

/// First violated admissibility constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WrongLength { expected: usize, found: usize },
    WeightedSum { expected: i64, found: i64 },
    NonIntegralA { vertex: String, a: Rational },
    NonPositiveA { vertex: String, a: Rational },
    RateNotOneAtLNode { vertex: String, q: Rational },
    RateTooSmall { vertex: String, q: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::WrongLength { expected, found } => {
                write!(f, "polar vector has length {found}, expected {expected}")
            }
            Self::WeightedSum { expected, found } => {
                write!(f, "weighted polar sum is {found}, expected {expected}")
            }
            Self::NonIntegralA { vertex, a } => write!(f, "a at {vertex} is {a}, not an integer"),
            Self::NonPositiveA { vertex, a } => write!(f, "a at {vertex} is {a}, not positive"),
            Self::RateNotOneAtLNode { vertex, q } => {
                write!(f, "rate at L-node {vertex} is {q}, not 1")
            }
            Self::RateTooSmall { vertex, q } => write!(f, "rate at {vertex} is {q}, too small"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub config: Option<AdmissibleConfig>,
    pub violation: Option<Violation>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.config.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub total_polar_weight: i64,
    pub candidates_checked: usize,
    pub configs: Vec<AdmissibleConfig>,
    pub diagnostic: Option<String>,
}

/// `Σ m_v l_v - Σ m_v (χ(Ě_v) - l_v)`, the multiplicity of the polar curve.
pub fn total_polar_weight(g: &DualGraph, m: &[u64]) -> i64 {
    let chi = euler_characteristics(g);
    g.vertices()
        .iter()
        .zip(m)
        .zip(&chi)
        .map(|((v, &mv), c)| {
            let l = i64::from(v.l);
            mv as i64 * (2 * l - c)
        })
        .sum()
}

/// Precomputed affine map `p ↦ a(p) = M⁻¹(k + l) - M⁻¹ p`.
struct AffineSolver {
    base: Vec<Rational>,
    columns: Vec<Vec<Rational>>,
}

impl AffineSolver {
    fn new(g: &DualGraph) -> Result<Self, LinalgError> {
        let mat = intersection_matrix(g);
        let n = g.vertex_count();
        let k = canonical_k(g);
        let rhs: Vec<Rational> = g
            .vertices()
            .iter()
            .zip(&k)
            .map(|(v, kv)| int(kv + i64::from(v.l)))
            .collect();
        let base = solve_linear(&mat, &rhs)?;
        let columns = (0..n)
            .map(|j| {
                let e: Vec<Rational> = (0..n).map(|i| int(i64::from(i == j))).collect();
                solve_linear(&mat, &e)
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { base, columns })
    }

    fn solve(&self, p: &[u32]) -> Vec<Rational> {
        let mut a = self.base.clone();
        for (pj, col) in p.iter().zip(&self.columns) {
            if *pj == 0 {
                continue;
            }
            let pj = int(i64::from(*pj));
            for (ai, ci) in a.iter_mut().zip(col) {
                *ai -= &pj * ci;
            }
        }
        a
    }
}

fn judge(
    g: &DualGraph,
    m: &[u64],
    p: &[u32],
    a: Vec<Rational>,
    options: EnumerationOptions,
) -> AdmissibilityReport {
    let one = Rational::one();
    let mut q = Vec::with_capacity(a.len());
    let mut a_int = Vec::with_capacity(a.len());
    for (v, av) in a.iter().enumerate() {
        let vertex = || g.id(v).to_string();
        let fail = |violation| AdmissibilityReport {
            config: None,
            violation: Some(violation),
        };
        if !av.is_integer() {
            return fail(Violation::NonIntegralA {
                vertex: vertex(),
                a: av.clone(),
            });
        }
        if !av.is_positive() {
            return fail(Violation::NonPositiveA {
                vertex: vertex(),
                a: av.clone(),
            });
        }
        let qv = av / int(m[v] as i64);
        if g.vertex(v).l > 0 {
            if qv != one {
                return fail(Violation::RateNotOneAtLNode {
                    vertex: vertex(),
                    q: qv,
                });
            }
        } else if qv < one || (options.strict_rates && qv == one) {
            return fail(Violation::RateTooSmall {
                vertex: vertex(),
                q: qv,
            });
        }
        a_int.push(u64::try_from(av.numer().clone()).expect("positive integer fits in u64"));
        q.push(qv);
    }
    AdmissibilityReport {
        config: Some(AdmissibleConfig {
            p: p.to_vec(),
            q,
            a: a_int,
        }),
        violation: None,
    }
}

fn weighted_sum(m: &[u64], p: &[u32]) -> i64 {
    m.iter()
        .zip(p)
        .map(|(&mv, &pv)| mv as i64 * i64::from(pv))
        .sum()
}

pub fn is_admissible(
    g: &DualGraph,
    m: &[u64],
    p: &[u32],
    options: EnumerationOptions,
) -> Result<AdmissibilityReport, PolarError> {
    if p.len() != g.vertex_count() {
        return Ok(AdmissibilityReport {
            config: None,
            violation: Some(Violation::WrongLength {
                expected: g.vertex_count(),
                found: p.len(),
            }),
        });
    }
    let expected = total_polar_weight(g, m);
    let found = weighted_sum(m, p);
    if found != expected {
        return Ok(AdmissibilityReport {
            config: None,
            violation: Some(Violation::WeightedSum { expected, found }),
        });
    }
    let a = AffineSolver::new(g)?.solve(p);
    Ok(judge(g, m, p, a, options))
}

/// Nonnegative integer vectors `p` with `Σ m_v p_v = total`, in
/// lexicographic order.
pub fn weighted_compositions(m: &[u64], total: u64) -> Vec<Vec<u32>> {
    fn rec(m: &[u64], remaining: u64, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let i = prefix.len();
        if i + 1 == m.len() {
            if remaining.is_multiple_of(m[i]) {
                prefix.push((remaining / m[i]) as u32);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        for x in 0..=remaining / m[i] {
            prefix.push(x as u32);
            rec(m, remaining - x * m[i], prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if !m.is_empty() {
        rec(m, total, &mut Vec::with_capacity(m.len()), &mut out);
    }
    out
}

/// Every admissible `(p, q)` pair for the topology and L data of `g`; the
/// polar weights already on `g` are ignored.
pub fn enumerate_admissible(
    g: &DualGraph,
    options: EnumerationOptions,
) -> Result<Enumeration, PolarError> {
    if !g.has_l_node() {
        return Err(PolarError::NoLNodes);
    }
    let m = solve_multiplicities(g)?;
    enumerate_with_multiplicities(g, &m, options)
}

/// Enumeration for explicitly given multiplicities.
pub fn enumerate_with_multiplicities(
    g: &DualGraph,
    m: &[u64],
    options: EnumerationOptions,
) -> Result<Enumeration, PolarError> {
    let total = total_polar_weight(g, m);
    if total < 0 {
        return Ok(Enumeration {
            total_polar_weight: total,
            candidates_checked: 0,
            configs: Vec::new(),
            diagnostic: Some(format!("total polar weight {total} is negative")),
        });
    }
    let solver = AffineSolver::new(g)?;
    let candidates = weighted_compositions(m, total as u64);
    let configs: Vec<AdmissibleConfig> = candidates
        .par_iter()
        .filter_map(|p| judge(g, m, p, solver.solve(p), options).config)
        .collect();
    Ok(Enumeration {
        total_polar_weight: total,
        candidates_checked: candidates.len(),
        configs,
        diagnostic: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::rat;

    fn q(xs: &[(i64, i64)]) -> Vec<Rational> {
        xs.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn total_weights() {
        let g = fixtures::bs_tneq0();
        assert_eq!(
            total_polar_weight(&g, &solve_multiplicities(&g).unwrap()),
            30
        );
        let g = fixtures::bs_t0();
        assert_eq!(
            total_polar_weight(&g, &solve_multiplicities(&g).unwrap()),
            32
        );
        assert_eq!(total_polar_weight(&fixtures::smooth_ord0(), &[1]), 0);
    }

    #[test]
    fn bs_generic_is_unique() {
        let e = enumerate_admissible(&fixtures::bs_tneq0(), EnumerationOptions::default()).unwrap();
        assert_eq!(e.configs.len(), 1);
        assert_eq!(e.configs[0].p, vec![30, 0, 0, 0]);
        assert_eq!(e.configs[0].q, q(&[(2, 1), (1, 1), (1, 1), (1, 1)]));
    }

    #[test]
    fn bs_central_has_two_cases() {
        let e = enumerate_admissible(&fixtures::bs_t0(), EnumerationOptions::default()).unwrap();
        assert_eq!(e.configs.len(), 2);
        assert_eq!(e.configs[0].p, vec![28, 1, 1, 0]);
        assert_eq!(e.configs[0].q, q(&[(2, 1), (2, 1), (4, 3), (1, 1)]));
        assert_eq!(e.configs[1].p, vec![28, 4, 0, 0]);
        assert_eq!(e.configs[1].q, q(&[(2, 1), (3, 1), (4, 3), (1, 1)]));
    }

    #[test]
    fn smooth_point_has_empty_polar() {
        let e =
            enumerate_admissible(&fixtures::smooth_ord0(), EnumerationOptions::default()).unwrap();
        assert_eq!(e.configs.len(), 1);
        assert_eq!(e.configs[0].p, vec![0]);
        assert_eq!(e.configs[0].q, vec![int(1)]);
    }

    #[test]
    fn admissibility_predicate() {
        let g = fixtures::e8();
        let m = solve_multiplicities(&g).unwrap();
        let r = is_admissible(
            &g,
            &m,
            &[0, 0, 0, 0, 0, 0, 0, 1],
            EnumerationOptions::default(),
        )
        .unwrap();
        let config = r.config.unwrap();
        assert_eq!(
            config.q,
            q(&[
                (1, 1),
                (4, 3),
                (3, 2),
                (8, 5),
                (5, 3),
                (7, 4),
                (2, 1),
                (2, 1)
            ])
        );

        let g = fixtures::bs_tneq0();
        let m = solve_multiplicities(&g).unwrap();
        let r = is_admissible(&g, &m, &[29, 1, 0, 0], EnumerationOptions::default()).unwrap();
        assert!(!r.is_admissible());
        assert!(!matches!(r.violation, Some(Violation::WeightedSum { .. })));

        let r = is_admissible(&g, &m, &[1, 0, 0, 0], EnumerationOptions::default()).unwrap();
        assert_eq!(
            r.violation,
            Some(Violation::WeightedSum {
                expected: 30,
                found: 1
            })
        );
    }

    #[test]
    fn errors_and_negative_totals() {
        let no_l =
            DualGraph::new::<&str>(vec![crate::graph::VertexData::new("a", -1)], &[]).unwrap();
        assert_eq!(
            enumerate_admissible(&no_l, EnumerationOptions::default()),
            Err(PolarError::NoLNodes)
        );
        let g = DualGraph::new(
            vec![
                crate::graph::VertexData::new("a", -1).l(1),
                crate::graph::VertexData::new("b", -2),
            ],
            &[("a", "b")],
        )
        .unwrap();
        let e = enumerate_with_multiplicities(&g, &[1, 5], EnumerationOptions::default()).unwrap();
        assert_eq!(e.total_polar_weight, -4);
        assert!(e.configs.is_empty());
        assert!(e.diagnostic.is_some());
    }

    #[test]
    fn compositions_are_lexicographic() {
        let c = weighted_compositions(&[1, 2], 4);
        assert_eq!(c, vec![vec![0, 2], vec![2, 1], vec![4, 0]]);
        assert_eq!(weighted_compositions(&[3], 4), Vec::<Vec<u32>>::new());
    }
}
