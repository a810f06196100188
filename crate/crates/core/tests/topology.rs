mod common;

use std::collections::BTreeSet;

use common::*;
use cutparam::classify::{classify, EdgeMode};
use cutparam::mesh::edge_key;
use cutparam::topology::{build_loops, is_simple, loop_orientation, orient_loops, parse_loops, vertex_degrees, wrap_delta, write_loops};
use cutparam::BoundaryCurve;
use proptest::prelude::*;

fn fixtures() -> Vec<(&'static str, BoundaryCurve, f64)> {
    vec![
        ("circle", unit_circle(), 0.2),
        ("ellipse", ellipse(), 0.1),
        ("blob", blob(), 0.1),
        ("two circles", two_circles(), 0.2),
    ]
}

#[test]
fn loops_match_union_find_components() {
    for (name, c, h) in fixtures() {
        for mode in [EdgeMode::Positive, EdgeMode::Negative] {
            let c = mode.apply(&c);
            let tri = grid_for(&c, h);
            let cls = classify(&c, &tri).unwrap();
            assert!(vertex_degrees(&cls).values().all(|&d| d == 2), "{name}");
            let loops = build_loops(&tri, &cls).unwrap();
            assert_eq!(loop_edge_sets(&loops), components_by_union_find(&cls), "{name} {mode:?}");
            assert_eq!(loops.len(), c.num_components(), "{name} {mode:?}");
        }
    }
}

#[test]
fn loops_partition_positive_edges() {
    for (name, c, h) in fixtures() {
        let tri = grid_for(&c, h);
        let cls = classify(&c, &tri).unwrap();
        let loops = build_loops(&tri, &cls).unwrap();
        let mut seen = BTreeSet::new();
        for lp in &loops {
            assert!(is_simple(&tri, lp), "{name}");
            for (i, (a, b)) in lp.edges().enumerate() {
                assert!(seen.insert(edge_key(a, b)), "{name}: edge in two loops");
                assert_eq!(cls.owner_of(edge_key(a, b)), Some(lp.edge_owners[i]));
            }
        }
        let all: BTreeSet<_> = cls.positive_edges.iter().map(|e| e.edge).collect();
        assert_eq!(seen, all, "{name}");
    }
}

#[test]
fn orientation_is_antisymmetric() {
    for (name, c, h) in fixtures() {
        let tri = grid_for(&c, h);
        let cls = classify(&c, &tri).unwrap();
        for lp in build_loops(&tri, &cls).unwrap() {
            let o = loop_orientation(&tri, &lp, &c).unwrap();
            assert!(o == 1 || o == -1);
            assert_eq!(loop_orientation(&tri, &lp.reversed(), &c).unwrap(), -o, "{name}");
        }
        for lp in orient_loops(&tri, build_loops(&tri, &cls).unwrap(), &c).unwrap() {
            assert_eq!(loop_orientation(&tri, &lp, &c).unwrap(), 1, "{name}");
        }
    }
}

#[test]
fn oriented_loop_advances_monotonically() {
    for (name, c, h) in fixtures() {
        let tri = grid_for(&c, h);
        let cls = classify(&c, &tri).unwrap();
        for lp in orient_loops(&tri, build_loops(&tri, &cls).unwrap(), &c).unwrap() {
            let s: Vec<f64> = lp
                .vertex_cycle
                .iter()
                .map(|&v| c.arclength_param(&c.closest_point(tri.vertex(v)).unwrap()))
                .collect();
            let m = s.len();
            let deltas: Vec<f64> = (0..m).map(|i| wrap_delta(s[(i + 1) % m] - s[i])).collect();
            let forward = deltas.iter().filter(|&&d| d > 0.0).count();
            assert!(forward as f64 >= 0.99 * m as f64, "{name}: {forward}/{m}");
            let total: f64 = deltas.iter().sum();
            assert!((total - 1.0).abs() < 1e-9, "{name}: winds {total}");
        }
    }
}

#[test]
fn loop_file_round_trip() {
    let c = two_circles();
    let tri = grid_for(&c, 0.2);
    let cls = classify(&c, &tri).unwrap();
    let loops = orient_loops(&tri, build_loops(&tri, &cls).unwrap(), &c).unwrap();
    let text = write_loops(&loops);
    assert_eq!(parse_loops(&text, &cls).unwrap(), loops);
    assert!(parse_loops("0: 1 2 3\n", &cls).is_err());
    assert!(parse_loops("garbage", &cls).is_err());
}

proptest! {
    #[test]
    fn wrap_delta_lands_in_half_open_interval(d in -10.0f64..10.0) {
        let w = wrap_delta(d);
        prop_assert!(w > -0.5 && w <= 0.5);
        prop_assert!(((d - w) - (d - w).round()).abs() < 1e-9);
    }

    #[test]
    fn union_find_agrees_on_random_circles(x in -0.2f64..0.2, y in -0.2f64..0.2, r in 0.5f64..1.0) {
        let c = BoundaryCurve::circle(cutparam::Vec2::new(x, y), r).unwrap();
        let tri = cutparam::mesh::equilateral_grid([-1.3, -1.3, 1.3, 1.3], 0.17).unwrap();
        let cls = classify(&c, &tri).unwrap();
        let loops = build_loops(&tri, &cls).unwrap();
        prop_assert_eq!(loop_edge_sets(&loops), components_by_union_find(&cls));
        prop_assert_eq!(loops.len(), 1);
    }
}
