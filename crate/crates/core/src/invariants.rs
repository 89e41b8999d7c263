//! Multiplicities, canonical data, inner rates and the Laplacian identity.
//!
//! With `M` the intersection matrix, the multiplicities of a generic linear
//! form solve `M·m = -l`, and the vector `a = (m_v q_v)` solves
//! `M·a = k + l - p` where `k_v = val(v) + 2g(v) - 2`.

use std::fmt;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::graph::{self, degree, DualGraph, GraphError, PLFunction, PointOnGraph};
use crate::graph::{intersection_matrix, Divisor};
use crate::linalg::{int, solve_linear, to_i64, LinalgError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("no vertex carries a hyperplane arrow (L > 0)")]
    NoLNodes,
    #[error("multiplicity at `{vertex}` is {value}, not an integer")]
    NonIntegralMultiplicity { vertex: String, value: Rational },
    #[error("multiplicity at `{vertex}` is {value}, not positive")]
    NonPositiveMultiplicity { vertex: String, value: Rational },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A failed admissibility condition on solved rates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmissibilityWarning {
    NonIntegralA { vertex: String, a: Rational },
    NonPositiveA { vertex: String, a: Rational },
    RateBelowOne { vertex: String, q: Rational },
    RateOneAtNonLNode { vertex: String },
    RateNotOneAtLNode { vertex: String, q: Rational },
}

impl fmt::Display for AdmissibilityWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonIntegralA { vertex, a } => write!(f, "a at {vertex} is {a}, not an integer"),
            Self::NonPositiveA { vertex, a } => write!(f, "a at {vertex} is {a}, not positive"),
            Self::RateBelowOne { vertex, q } => write!(f, "rate at {vertex} is {q} < 1"),
            Self::RateOneAtNonLNode { vertex } => {
                write!(f, "rate at {vertex} is 1 but it is not an L-node")
            }
            Self::RateNotOneAtLNode { vertex, q } => {
                write!(f, "rate at L-node {vertex} is {q}, not 1")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantBundle {
    pub m: Vec<u64>,
    pub q: Vec<Rational>,
    /// `a_v = m_v q_v`; integral for realizable inputs.
    pub a: Vec<Rational>,
    pub k: Vec<i64>,
    pub k_div: Divisor,
    pub l_div: Divisor,
    pub p_div: Divisor,
    /// `χ(Ě_v) = 2 - 2g(v) - val(v)`.
    pub chi: Vec<i64>,
    pub warnings: Vec<AdmissibilityWarning>,
}

impl InvariantBundle {
    pub fn is_admissible(&self) -> bool {
        self.warnings.is_empty()
    }

    pub fn rates_function(&self) -> PLFunction {
        PLFunction::from_vertex_values(self.q.clone())
    }
}

pub fn solve_multiplicities(g: &DualGraph) -> Result<Vec<u64>, InvariantError> {
    if !g.has_l_node() {
        return Err(InvariantError::NoLNodes);
    }
    let rhs: Vec<Rational> = g.l_vector().into_iter().map(|l| int(-l)).collect();
    let sol = solve_linear(&intersection_matrix(g), &rhs)?;
    sol.into_iter()
        .enumerate()
        .map(|(v, x)| {
            let vertex = g.id(v).to_string();
            if !x.is_integer() {
                return Err(InvariantError::NonIntegralMultiplicity { vertex, value: x });
            }
            if !x.is_positive() {
                return Err(InvariantError::NonPositiveMultiplicity { vertex, value: x });
            }
            u64::try_from(x.numer().clone()).map_err(|_| InvariantError::NonIntegralMultiplicity {
                vertex,
                value: x.clone(),
            })
        })
        .collect()
}

/// `k_v = val(v) + 2g(v) - 2`.
pub fn canonical_k(g: &DualGraph) -> Vec<i64> {
    (0..g.vertex_count())
        .map(|v| g.valency(v) as i64 + 2 * i64::from(g.vertex(v).genus) - 2)
        .collect()
}

/// `χ(Ě_v) = 2 - 2g(v) - val(v)`, counting parallel edges separately.
pub fn euler_characteristics(g: &DualGraph) -> Vec<i64> {
    canonical_k(g).into_iter().map(|k| -k).collect()
}

/// Returns `k` and the canonical divisor `K = Σ m_v k_v [v]`.
pub fn canonical_vector(g: &DualGraph, m: &[u64]) -> (Vec<i64>, Divisor) {
    let k = canonical_k(g);
    let div = weighted_divisor(m, &k);
    (k, div)
}

fn weighted_divisor(m: &[u64], coeffs: &[i64]) -> Divisor {
    Divisor::from_vertex_values(m.iter().zip(coeffs).map(|(&mv, &c)| int(mv as i64 * c)))
}

/// `L = Σ m_v l_v [v]`.
pub fn l_divisor(g: &DualGraph, m: &[u64]) -> Divisor {
    weighted_divisor(m, &g.l_vector())
}

/// `P = Σ m_v p_v [v]`.
pub fn p_divisor(g: &DualGraph, m: &[u64]) -> Divisor {
    weighted_divisor(m, &g.p_vector())
}

/// Admissibility of solved `a` and `q`: integral positive `a`, `q >= 1`,
/// and `q = 1` exactly on L-nodes.
pub fn admissibility_warnings(
    g: &DualGraph,
    a: &[Rational],
    q: &[Rational],
) -> Vec<AdmissibilityWarning> {
    let one = Rational::one();
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        let vertex = g.id(v).to_string();
        if !a[v].is_integer() {
            out.push(AdmissibilityWarning::NonIntegralA {
                vertex: vertex.clone(),
                a: a[v].clone(),
            });
        } else if !a[v].is_positive() {
            out.push(AdmissibilityWarning::NonPositiveA {
                vertex: vertex.clone(),
                a: a[v].clone(),
            });
        }
        if g.vertex(v).l > 0 {
            if q[v] != one {
                out.push(AdmissibilityWarning::RateNotOneAtLNode {
                    vertex,
                    q: q[v].clone(),
                });
            }
        } else if q[v] < one {
            out.push(AdmissibilityWarning::RateBelowOne {
                vertex,
                q: q[v].clone(),
            });
        } else if q[v] == one {
            out.push(AdmissibilityWarning::RateOneAtNonLNode { vertex });
        }
    }
    out
}

/// Solves `M·a = k + l - p` for given multiplicities.
pub fn solve_rates_with(g: &DualGraph, m: &[u64]) -> Result<InvariantBundle, InvariantError> {
    if m.len() != g.vertex_count() {
        return Err(GraphError::WrongLength {
            expected: g.vertex_count(),
            found: m.len(),
        }
        .into());
    }
    let (k, k_div) = canonical_vector(g, m);
    let l = g.l_vector();
    let p = g.p_vector();
    let rhs: Vec<Rational> = (0..g.vertex_count())
        .map(|v| int(k[v] + l[v] - p[v]))
        .collect();
    let a = solve_linear(&intersection_matrix(g), &rhs)?;
    let q: Vec<Rational> = a
        .iter()
        .zip(m)
        .map(|(av, &mv)| av / int(mv as i64))
        .collect();
    let warnings = admissibility_warnings(g, &a, &q);
    Ok(InvariantBundle {
        m: m.to_vec(),
        q,
        a,
        chi: k.iter().map(|x| -x).collect(),
        k,
        k_div,
        l_div: l_divisor(g, m),
        p_div: p_divisor(g, m),
        warnings,
    })
}

pub fn solve_inner_rates(g: &DualGraph) -> Result<InvariantBundle, InvariantError> {
    let m = solve_multiplicities(g)?;
    solve_rates_with(g, &m)
}

/// Laplacian of `f` for the skeletal metric of `m`.
pub fn laplacian(g: &DualGraph, m: &[u64], f: &PLFunction) -> Result<Divisor, InvariantError> {
    Ok(graph::laplacian(g, m, f)?)
}

/// `Σ m_v (2 l_v - p_v - χ(Ě_v)) [v]`.
pub fn laplacian_formula(g: &DualGraph, m: &[u64]) -> Divisor {
    let chi = euler_characteristics(g);
    let coeffs: Vec<i64> = g
        .vertices()
        .iter()
        .zip(&chi)
        .map(|(v, c)| 2 * i64::from(v.l) - i64::from(v.p) - c)
        .collect();
    weighted_divisor(m, &coeffs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremCheck {
    pub holds: bool,
    /// Laplacian of the rates in the bundle.
    pub laplacian: Divisor,
    /// `K + 2L - P` from the graph decorations.
    pub rhs: Divisor,
    /// Per-vertex closed formula.
    pub formula: Divisor,
    pub discrepancies: Vec<String>,
}

/// Compares the Laplacian of the bundle's rates with `K + 2L - P` and with
/// the per-vertex formula, using the decorations currently on `g`.
pub fn check_theorem_main(
    g: &DualGraph,
    bundle: &InvariantBundle,
) -> Result<TheoremCheck, InvariantError> {
    let m = &bundle.m;
    let lap = laplacian(g, m, &bundle.rates_function())?;
    let (_, k_div) = canonical_vector(g, m);
    let two = int(2);
    let rhs = k_div
        .plus(&l_divisor(g, m).scaled(&two))
        .minus(&p_divisor(g, m));
    let formula = laplacian_formula(g, m);
    let mut discrepancies = Vec::new();
    let mut points: Vec<&PointOnGraph> = lap.terms().map(|(p, _)| p).collect();
    points.extend(rhs.terms().map(|(p, _)| p));
    points.extend(formula.terms().map(|(p, _)| p));
    points.sort();
    points.dedup();
    for pt in points {
        let (x, y, z) = (
            lap.coefficient(pt),
            rhs.coefficient(pt),
            formula.coefficient(pt),
        );
        if x != y || y != z {
            discrepancies.push(format!(
                "at {}: laplacian {x}, K+2L-P {y}, formula {z}",
                pt.label(g)
            ));
        }
    }
    Ok(TheoremCheck {
        holds: discrepancies.is_empty(),
        laplacian: lap,
        rhs,
        formula,
        discrepancies,
    })
}

/// `χ(F) = Σ m_v (χ(Ě_v) - l_v)` for the Milnor fibre of a generic linear form.
pub fn milnor_fiber_euler(g: &DualGraph, m: &[u64]) -> i64 {
    euler_characteristics(g)
        .iter()
        .zip(g.vertices())
        .zip(m)
        .map(|((chi, v), &mv)| mv as i64 * (chi - i64::from(v.l)))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeGreuel {
    /// `m(X,0) = Σ m_v l_v`.
    pub m_x: i64,
    /// `m(Π,0) = Σ m_v p_v`.
    pub m_polar: i64,
    pub chi_f: i64,
    pub holds: bool,
}

pub fn le_greuel_check(g: &DualGraph, m: &[u64]) -> LeGreuel {
    let weighted = |xs: Vec<i64>| -> i64 { xs.iter().zip(m).map(|(x, &mv)| x * mv as i64).sum() };
    let m_x = weighted(g.l_vector());
    let m_polar = weighted(g.p_vector());
    let chi_f = milnor_fiber_euler(g, m);
    LeGreuel {
        m_x,
        m_polar,
        chi_f,
        holds: m_polar == m_x - chi_f,
    }
}

/// Slope of the rates function along each edge, oriented from `Edge::a`:
/// `(q_b - q_a) m_a m_b`.
pub fn rate_slopes(g: &DualGraph, m: &[u64], q: &[Rational]) -> Vec<Rational> {
    g.edges()
        .iter()
        .map(|e| (&q[e.b] - &q[e.a]) * int((m[e.a] * m[e.b]) as i64))
        .collect()
}

/// True when every `a_v` is a positive integer and every rate slope is an
/// integer.
pub fn is_integral(g: &DualGraph, bundle: &InvariantBundle) -> bool {
    bundle.a.iter().all(|a| a.is_integer() && a.is_positive())
        && rate_slopes(g, &bundle.m, &bundle.q)
            .iter()
            .all(Rational::is_integer)
}

/// Degree of `K + 2L - P` as an integer; zero exactly when the Lê–Greuel
/// balance holds.
pub fn rhs_degree(g: &DualGraph, m: &[u64]) -> i64 {
    let (_, k_div) = canonical_vector(g, m);
    let rhs = k_div
        .plus(&l_divisor(g, m).scaled(&int(2)))
        .minus(&p_divisor(g, m));
    to_i64(&degree(&rhs)).expect("integral divisor")
}
