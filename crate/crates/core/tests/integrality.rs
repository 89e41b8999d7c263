use inner_rates::fixtures;
use inner_rates::invariants::{is_integral, rate_slopes, solve_inner_rates};
use num_traits::Signed;

#[test]
fn admissible_fixtures_have_integral_data() {
    let mut admissible = Vec::new();
    for (name, doc) in fixtures::documents() {
        let g = &doc.graph;
        let bundle = solve_inner_rates(g).unwrap();
        if !bundle.is_admissible() {
            continue;
        }
        admissible.push(name);
        for (v, a) in bundle.a.iter().enumerate() {
            assert!(
                a.is_integer() && a.is_positive(),
                "{name} {}: a = {a}",
                g.id(v)
            );
        }
        for slope in rate_slopes(g, &bundle.m, &bundle.q) {
            assert!(slope.is_integer(), "{name}: slope {slope}");
        }
        assert!(is_integral(g, &bundle));
    }
    assert!(admissible.contains(&"e8.graph"));
    assert!(admissible.contains(&"bs_tneq0.graph"));
    assert!(admissible.contains(&"bs_t0.graph"));
}
