//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::*;
use cutparam::classify::{check_conditions, classify, EdgeMode};
use cutparam::mesh::{edge_key, equilateral_grid};
use cutparam::topology::{build_loops, vertex_degrees};
use cutparam::{BoundaryCurve, Mat2, Shape, Vec2};
use rand::{Rng, SeedableRng};

const CIRCLE_BOX: [f64; 4] = [-1.3, -1.3, 1.3, 1.3];

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn cli(args: &[&str]) -> (i32, String, Duration) {
    let (o, dt) = timed(|| Command::new(env!("CARGO_BIN_EXE_cutparam")).args(args).output().unwrap());
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into_owned(), dt)
}

fn circle_files(dir: &Path, h: f64) -> (String, String) {
    let curve = dir.join("circle.cfg");
    std::fs::write(&curve, format!("[curve]\nkind = circle\ncenter = {} {}\nradius = 1\n", OFFSET.x, OFFSET.y)).unwrap();
    let mesh = dir.join(format!("mesh_{h}.txt"));
    std::fs::write(&mesh, cutparam::mesh::write_mesh(&equilateral_grid(CIRCLE_BOX, h).unwrap())).unwrap();
    (mesh.to_str().unwrap().into(), curve.to_str().unwrap().into())
}

fn criterion_1() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let c = unit_circle();

    let (mesh, curve) = circle_files(dir.path(), 0.2);
    let (code, _, dt_pass) = cli(&["check", "--mesh", &mesh, "--curve", &curve]);
    ensure(code == 0, format!("check exits {code} at h=0.20"))?;
    let tri = equilateral_grid(CIRCLE_BOX, 0.2).unwrap();
    let rep = check_conditions(&c, &tri, &classify(&c, &tri).unwrap()).unwrap();
    ensure(rep.all_pass && !rep.rows.is_empty(), "conditions fail at h=0.20")?;

    let (mesh, curve) = circle_files(dir.path(), 0.3);
    let csv = dir.path().join("check.csv");
    let (code, _, dt_fail) = cli(&["check", "--mesh", &mesh, "--curve", &curve, "--csv", csv.to_str().unwrap()]);
    ensure(code == 1, format!("check exits {code} at h=0.30"))?;
    let text = std::fs::read_to_string(&csv).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let (ic, is) = (col("cond_c"), col("sigma_Ch"));
    let mut worst: f64 = 0.0;
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        ensure(f[ic] == "0", format!("cond_c holds on row {line}"))?;
        let s: f64 = f[is].parse().unwrap();
        ensure((s - 0.742).abs() <= 1e-3, format!("sigmaCh = {s}"))?;
        worst = worst.max(s);
    }
    let dt = dt_pass.max(dt_fail);
    ensure(dt < Duration::from_secs(1), format!("check took {dt:?}"))?;
    Ok(format!(
        "h=0.20 all conditions pass; h=0.30 cond_c fails on {} rows, sigmaCh={worst:.4} vs limit 0.5; {dt:.2?}",
        text.lines().count() - 1
    ))
}

fn criterion_2() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let (mesh, curve) = circle_files(dir.path(), 0.2);
    let (code, out, dt) = cli(&["verify", "--mesh", &mesh, "--curve", &curve, "--n", "8"]);
    ensure(code == 0, format!("verify exits {code}: {out}"))?;
    ensure(dt < Duration::from_secs(5), format!("verify took {dt:?}"))?;

    let c = unit_circle();
    let r = run(&c, equilateral_grid(CIRCLE_BOX, 0.2).unwrap(), EdgeMode::Positive, 8);
    ensure(r.loops.len() == 1, format!("{} loops", r.loops.len()))?;
    ensure(vertex_degrees(&r.cls).values().all(|&d| d == 2), "vertex of degree != 2")?;
    let lv = &r.ver.loops[0];
    ensure(lv.min_step > 0.0 && lv.injectivity_ok, format!("min step {}", lv.min_step))?;
    ensure((lv.total_variation - 1.0).abs() <= 1e-6, format!("total variation {}", lv.total_variation))?;
    ensure(lv.max_gap < lv.gap_tol, format!("gap {} >= {}", lv.max_gap, lv.gap_tol))?;
    ensure(r.ver.global_pass, r.ver.verdict())?;
    Ok(format!(
        "1 loop of {} edges, TV={:.9}, min step {:.2e}, gap {:.4} < {:.4}; {dt:.2?}",
        lv.num_edges, lv.total_variation, lv.min_step, lv.max_gap, lv.gap_tol
    ))
}

fn fixtures() -> Vec<(&'static str, BoundaryCurve, f64)> {
    vec![
        ("circle", unit_circle(), 0.2),
        ("ellipse", ellipse(), passing_h(&ellipse())),
        ("blob", blob(), passing_h(&blob())),
    ]
}

fn criterion_3(runs: &[(&str, Run)]) -> Outcome {
    let (mut n, mut max_j, mut worst_fd): (usize, f64, f64) = (0, 0.0, 0.0);
    for (name, r) in runs {
        let step = 1e-6 * r.curve.reach().r_n;
        for p in r.samples.iter().flatten().filter(|p| !p.is_vertex()) {
            n += 1;
            ensure(p.bound_lo > 0.0, format!("{name}: bound_lo = {}", p.bound_lo))?;
            ensure(
                p.bound_lo <= p.jacobian && p.jacobian <= p.bound_hi,
                format!("{name}: J={} outside [{}, {}]", p.jacobian, p.bound_lo, p.bound_hi),
            )?;
            max_j = max_j.max(p.jacobian);
            let (a, b) = (r.tri.vertex(p.edge.0), r.tri.vertex(p.edge.1));
            let fd = fd_jacobian(&r.curve, p.x, (b - a).normalized(), step);
            worst_fd = worst_fd.max((fd - p.jacobian).abs() / p.jacobian);
        }
    }
    ensure(n >= 1000, format!("only {n} interior samples"))?;
    ensure(max_j <= 5.0 / 3.0 + 1e-9, format!("max J = {max_j}"))?;
    ensure(worst_fd < 1e-3, format!("FD rel err {worst_fd:.2e}"))?;
    Ok(format!("{n} interior samples in bounds, max J={max_j:.6}, FD rel err {worst_fd:.1e}"))
}

fn criterion_4(runs: &[(&str, Run)]) -> Outcome {
    let mut n = 0;
    for (name, r) in runs {
        for p in r.samples.iter().flatten() {
            let row = r.rep.row(p.owner).unwrap();
            let (h, c) = (row.h, row.c_kh);
            ensure(
                -c * h * h < p.phi_x && p.phi_x <= h && p.phi_x > -h / 6f64.sqrt(),
                format!("{name}: phi={} at {:?}, h={h}, C={c}", p.phi_x, p.x),
            )?;
            n += 1;
        }
        ensure(r.ver.loops.iter().all(|l| l.phi_bounds.violations == 0), format!("{name}: verifier disagrees"))?;
    }
    Ok(format!("{n} samples, zero violations"))
}

fn criterion_5(runs: &[(&str, Run)]) -> Outcome {
    let mut parts = Vec::new();
    for (name, r) in runs {
        let h = r.rep.rows.iter().map(|x| x.h).fold(0.0, f64::max);
        let mut checked = 0;
        for lv in &r.ver.loops {
            let a = &lv.estimates;
            for (what, t) in [
                ("normal alignment", &a.normal_alignment),
                ("taylor", &a.taylor),
                ("phi lower", &a.phi_lower),
                ("proximal", &a.proximal),
            ] {
                ensure(t.checked > 0, format!("{name}: {what} never checked"))?;
                ensure(t.violations == 0, format!("{name}: {what} {} violations, worst {:?}", t.violations, t.worst))?;
                checked += t.checked;
            }
            ensure(lv.estimates_ok, format!("{name}: local estimates fail"))?;
        }
        parts.push(format!("{name} h={h:.3} ({checked} checks)"));
    }
    Ok(format!("zero violations: {}", parts.join(", ")))
}

fn rel(a: &Mat2, b: &Mat2) -> f64 {
    a.sub(b).norm() / b.norm().max(1e-12)
}

fn criterion_6() -> Outcome {
    let curves = [unit_circle(), ellipse(), blob()];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    let mut pts = Vec::new();
    for i in 0..1000 {
        let c = &curves[i % 3];
        let r = c.reach().r_n;
        let xi = c.point_at(0, rng.gen::<f64>());
        pts.push((i % 3, xi.position + xi.normal * (rng.gen_range(-0.9..0.9) * r)));
    }
    let ((worst_g, worst_h), dt) = timed(|| {
        let (mut wg, mut wh): (f64, f64) = (0.0, 0.0);
        for &(k, x) in &pts {
            let c = &curves[k];
            let step = 1e-5 * c.reach().r_n;
            let fd = |f: &dyn Fn(Vec2) -> Vec2| {
                let dx = (f(x + Vec2::new(step, 0.0)) - f(x - Vec2::new(step, 0.0))) * (0.5 / step);
                let dy = (f(x + Vec2::new(0.0, step)) - f(x - Vec2::new(0.0, step))) * (0.5 / step);
                Mat2::from_cols(dx, dy)
            };
            let g = fd(&|q| c.closest_point(q).unwrap().position);
            let h = fd(&|q| c.closest_point(q).unwrap().normal);
            wg = wg.max(rel(&g, &c.grad_pi(x).unwrap()));
            wh = wh.max(rel(&h, &c.hess_phi(x).unwrap()));
        }
        (wg, wh)
    });
    ensure(worst_g < 1e-3, format!("grad pi rel err {worst_g:.2e}"))?;
    ensure(worst_h < 1e-3, format!("hess phi rel err {worst_h:.2e}"))?;
    ensure(dt < Duration::from_secs(2), format!("took {dt:?}"))?;
    Ok(format!("1000 tube points, grad pi err {worst_g:.1e}, hess phi err {worst_h:.1e}; {dt:.2?}"))
}

fn criterion_7() -> Outcome {
    let c = two_circles();
    let r = run(&c, grid_for(&c, 0.2), EdgeMode::Positive, 8);
    ensure(r.loops.len() == 2, format!("{} loops", r.loops.len()))?;
    ensure(r.ver.component_bijection, format!("match {:?}", r.ver.component_match))?;
    ensure(r.ver.global_pass, r.ver.verdict())?;

    let tri = equilateral_grid(CIRCLE_BOX, 0.5).unwrap();
    let k = tri.locate(Vec2::new(0.31, 0.27)).unwrap();
    let [a, b, d] = tri.triangle(k).map(|v| tri.vertex(v));
    let center = (a + b + d) * (1.0 / 3.0);
    let tiny = 0.02;
    let curve = BoundaryCurve::new(vec![
        Shape::Circle { center: OFFSET, radius: 1.0 },
        Shape::Circle { center, radius: tiny },
    ])
    .unwrap();
    ensure(
        curve.polyline(1, 64).iter().all(|&p| tri.locate(p) == Some(k)),
        "tiny circle is not inside one triangle",
    )?;
    let cls = classify(&curve, &tri).unwrap();
    let rep = check_conditions(&curve, &tri, &cls).unwrap();
    ensure(rep.untouched_components() == vec![1], format!("untouched {:?}", rep.untouched_components()))?;
    ensure(!rep.all_pass, "conditions pass despite an untouched component")?;
    Ok(format!(
        "two circles: 2 loops, match {:?}; tiny circle in triangle {k}: component 1 flagged",
        r.ver.component_match.iter().map(|m| m.unwrap()).collect::<Vec<_>>()
    ))
}

fn criterion_8() -> Outcome {
    let c = unit_circle();
    let tri = equilateral_grid(CIRCLE_BOX, 0.2).unwrap();
    ensure((0..tri.num_triangles()).all(|k| tri.metrics(k).angles.iter().all(|&a| a < 90.0)), "mesh not acute")?;
    let p = run(&c, tri.clone(), EdgeMode::Positive, 8);
    let n = run(&c, tri, EdgeMode::Negative, 8);
    ensure(p.ver.global_pass, format!("positive: {}", p.ver.verdict()))?;
    ensure(n.ver.global_pass, format!("negative: {}", n.ver.verdict()))?;
    let edges = |r: &Run| -> BTreeSet<(usize, usize)> {
        r.loops.iter().flat_map(|l| l.edges().map(|(a, b)| edge_key(a, b)).collect::<Vec<_>>()).collect()
    };
    let (ep, en) = (edges(&p), edges(&n));
    ensure(ep.is_disjoint(&en), "loop edge sets intersect")?;
    Ok(format!("positive {} edges, negative {} edges, disjoint, both verify", ep.len(), en.len()))
}

fn criterion_9() -> Outcome {
    let all = [
        ("circle", unit_circle(), 0.2),
        ("ellipse", ellipse(), 0.1),
        ("blob", blob(), 0.1),
        ("two circles", two_circles(), 0.2),
    ];
    let mut count = 0;
    for (name, c, h) in all {
        let poly: Vec<Vec<Vec2>> = (0..c.num_components()).map(|i| c.polyline(i, 20_000)).collect();
        let oracle = |p: Vec2| {
            let inside = poly.iter().filter(|q| in_polygon(q, p)).count() % 2 == 1;
            let d = poly.iter().map(|q| polygon_signed_distance(q, p).abs()).fold(f64::INFINITY, f64::min);
            if inside {
                -d
            } else {
                d
            }
        };
        let tri = grid_for(&c, h);
        for (mode, sign) in [(EdgeMode::Positive, 1.0), (EdgeMode::Negative, -1.0)] {
            let cc = mode.apply(&c);
            let cls = classify(&cc, &tri).unwrap();
            let ids: Vec<usize> = cls.cut_triangles.iter().map(|t| t.triangle).collect();
            ensure(ids == census(&tri, |p| sign * oracle(p)), format!("{name} {mode:?}: census differs"))?;
            let loops = build_loops(&tri, &cls).map_err(|e| format!("{name}: {e}"))?;
            ensure(
                loop_edge_sets(&loops) == components_by_union_find(&cls),
                format!("{name} {mode:?}: union-find differs"),
            )?;
            count += 1;
        }
    }
    Ok(format!("census and union-find agree on {count} fixture/mode pairs"))
}

fn main() -> ExitCode {
    let runs: Vec<(&str, Run)> = fixtures()
        .into_iter()
        .map(|(name, c, h)| (name, run(&c, grid_for(&c, h), EdgeMode::Positive, 8)))
        .collect();
    let results: Vec<Outcome> = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(&runs),
        criterion_4(&runs),
        criterion_5(&runs),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ];
    let mut failed = 0;
    for (i, r) in results.iter().enumerate() {
        match r {
            Ok(msg) => println!("criterion {}: PASS {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
