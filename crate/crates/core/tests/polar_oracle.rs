use std::collections::BTreeSet;

use inner_rates::fixtures;
use inner_rates::graph::DualGraph;
use inner_rates::invariants::{check_theorem_main, solve_multiplicities, solve_rates_with};
use inner_rates::linalg::Rational;
use inner_rates::polar::{enumerate_admissible, total_polar_weight, EnumerationOptions};
use num_traits::One;

/// Walks the box `0 <= p_v <= total / m_v` from the last coordinate
/// upwards and keeps the vectors of the right weighted sum whose fresh
/// solution has rate 1 exactly on L-nodes, rates above 1 elsewhere and
/// positive integral `a`.
fn brute_force(g: &DualGraph) -> BTreeSet<(Vec<u32>, Vec<Rational>)> {
    let m = solve_multiplicities(g).unwrap();
    let total = total_polar_weight(g, &m);
    let bounds: Vec<u32> = m.iter().map(|&mv| (total as u64 / mv) as u32).collect();
    let mut p = vec![0u32; m.len()];
    let mut out = BTreeSet::new();
    loop {
        let sum: i64 = m
            .iter()
            .zip(&p)
            .map(|(&mv, &pv)| mv as i64 * i64::from(pv))
            .sum();
        if sum == total {
            let bundle = solve_rates_with(&g.with_polar(&p).unwrap(), &m).unwrap();
            let ok = bundle
                .a
                .iter()
                .all(|a| a.is_integer() && *a > Rational::from_integer(0.into()))
                && bundle.q.iter().enumerate().all(|(v, q)| {
                    if g.vertex(v).l > 0 {
                        q.is_one()
                    } else {
                        *q > Rational::one()
                    }
                });
            if ok {
                out.insert((p.clone(), bundle.q));
            }
        }
        let mut i = p.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if p[i] < bounds[i] {
                p[i] += 1;
                break;
            }
            p[i] = 0;
        }
    }
}

#[test]
fn enumeration_matches_brute_force_on_fixtures() {
    for (name, doc) in fixtures::documents() {
        let g = &doc.graph;
        let e = enumerate_admissible(g, EnumerationOptions::default()).unwrap();
        let found: BTreeSet<_> = e
            .configs
            .iter()
            .map(|c| (c.p.clone(), c.q.clone()))
            .collect();
        assert_eq!(found.len(), e.configs.len(), "{name}: duplicates");
        assert_eq!(found, brute_force(g), "{name}");
    }
}

#[test]
fn enumerated_configs_satisfy_the_laplacian_identity() {
    for (name, doc) in fixtures::documents() {
        let g = &doc.graph;
        let m = solve_multiplicities(g).unwrap();
        for config in enumerate_admissible(g, EnumerationOptions::default())
            .unwrap()
            .configs
        {
            let installed = g.with_polar(&config.p).unwrap();
            let bundle = solve_rates_with(&installed, &m).unwrap();
            assert_eq!(bundle.q, config.q);
            let check = check_theorem_main(&installed, &bundle).unwrap();
            assert!(
                check.holds,
                "{name} {:?}: {:?}",
                config.p, check.discrepancies
            );
        }
    }
}

#[test]
fn enumeration_is_sorted_and_reproducible() {
    let g = fixtures::bs_t0();
    let first = enumerate_admissible(&g, EnumerationOptions::default()).unwrap();
    for _ in 0..5 {
        assert_eq!(
            enumerate_admissible(&g, EnumerationOptions::default()).unwrap(),
            first
        );
    }
    let ps: Vec<_> = first.configs.iter().map(|c| c.p.clone()).collect();
    let mut sorted = ps.clone();
    sorted.sort();
    assert_eq!(ps, sorted);
}
