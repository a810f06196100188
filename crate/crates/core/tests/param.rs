mod common;

use common::*;
use cutparam::classify::EdgeMode;
use cutparam::mesh::equilateral_grid;
use cutparam::param::edge_nodes;
use proptest::prelude::*;

#[test]
fn node_layout() {
    for n in [2, 3, 8, 17] {
        let t = edge_nodes(n);
        assert_eq!(t.len(), n);
        assert!(t.windows(2).all(|w| w[0] < w[1]));
        assert!(t[0] > 0.0 && t[n - 1] < 1.0);
        for j in 0..n {
            assert!((t[j] + t[n - 1 - j] - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn sample_counts() {
    let c = unit_circle();
    for n in [2, 5, 8] {
        let r = run(&c, grid_for(&c, 0.2), EdgeMode::Positive, n);
        for (lp, s) in r.loops.iter().zip(&r.samples) {
            assert_eq!(s.len(), lp.num_edges() * (n + 1));
            assert_eq!(s.iter().filter(|p| p.is_vertex()).count(), lp.num_edges());
        }
        assert_eq!(r.ver.loops[0].num_samples, r.samples[0].len());
    }
}

#[test]
fn jacobian_matches_finite_differences() {
    for (c, h) in [(unit_circle(), 0.2), (ellipse(), 0.1), (blob(), 0.1)] {
        let r = run(&c, grid_for(&c, h), EdgeMode::Positive, 8);
        let step = 1e-6 * c.reach().r_n;
        for p in r.samples.iter().flatten() {
            let (a, b) = (r.tri.vertex(p.edge.0), r.tri.vertex(p.edge.1));
            let fd = fd_jacobian(&c, p.x, (b - a).normalized(), step);
            assert!((fd - p.jacobian).abs() <= 1e-3 * p.jacobian.max(1e-3), "{} vs {}", fd, p.jacobian);
        }
    }
}

#[test]
fn circle_certificate() {
    let c = unit_circle();
    let r = run(&c, equilateral_grid([-1.3, -1.3, 1.3, 1.3], 0.2).unwrap(), EdgeMode::Positive, 8);
    assert!(r.ver.global_pass, "{}", r.ver.verdict());
    assert!(r.ver.verdict().starts_with("PASS"));
    let lv = &r.ver.loops[0];
    assert!((lv.total_variation - 1.0).abs() < 1e-6);
    assert!(lv.min_step > 0.0);
    assert!(lv.max_jacobian <= 5.0 / 3.0 + 1e-9);
    for p in r.samples.iter().flatten() {
        let row = r.rep.row(p.owner).unwrap();
        assert!(p.bound_lo > 0.0 && p.bound_lo <= p.jacobian && p.jacobian <= p.bound_hi);
        assert!(p.phi_x <= row.h && p.phi_x > -row.c_kh * row.h * row.h);
    }
}

#[test]
fn two_components_are_matched_one_to_one() {
    let c = two_circles();
    let r = run(&c, grid_for(&c, 0.2), EdgeMode::Positive, 8);
    assert_eq!(r.loops.len(), 2);
    assert!(r.ver.component_bijection);
    let mut m: Vec<usize> = r.ver.component_match.iter().map(|x| x.unwrap()).collect();
    m.sort();
    assert_eq!(m, vec![0, 1]);
    assert!(r.ver.global_pass);
}

#[test]
fn failing_conditions_still_produce_a_report() {
    let c = unit_circle();
    let r = run(&c, equilateral_grid([-1.3, -1.3, 1.3, 1.3], 0.3).unwrap(), EdgeMode::Positive, 8);
    assert!(!r.ver.conditions_pass);
    assert!(!r.ver.global_pass);
    assert!(r.ver.verdict().starts_with("FAIL"));
    assert!(!r.samples[0].is_empty());
}

#[test]
fn negative_mode_certifies() {
    let c = unit_circle();
    let r = run(&c, grid_for(&c, 0.2), EdgeMode::Negative, 8);
    assert!(r.ver.global_pass, "{}", r.ver.verdict());
    for p in r.samples.iter().flatten() {
        assert!(unit_circle().signed_distance(p.x).unwrap() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn shifted_circles_certify(dx in -0.1f64..0.1, dy in -0.1f64..0.1) {
        let c = cutparam::BoundaryCurve::circle(cutparam::Vec2::new(dx, dy), 1.0).unwrap();
        let r = run(&c, equilateral_grid([-1.3, -1.3, 1.3, 1.3], 0.2).unwrap(), EdgeMode::Positive, 4);
        if r.rep.all_pass {
            prop_assert!(r.ver.global_pass, "{}", r.ver.verdict());
        }
        for s in &r.samples {
            for w in s.windows(2) {
                prop_assert!(cutparam::topology::wrap_delta(w[1].arclength_param - w[0].arclength_param) > 0.0);
            }
        }
    }
}
