//! Text, CSV and JSON emitters. Output depends only on the inputs: floats
//! use Rust's shortest round-trip formatting and nothing time-dependent is
//! written.

use std::fmt::Write as _;

use crate::classify::{ConditionReport, ConditionRow, CutClassification};
use crate::param::{ParamSample, Tally, VerificationReport};
use crate::topology::PositiveLoop;

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Classification as pretty-printed JSON.
pub fn classification_json(cls: &CutClassification) -> String {
    serde_json::to_string_pretty(cls).expect("classification serializes") + "\n"
}

/// Human-readable condition table followed by a summary.
pub fn condition_table(rep: &ConditionReport) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "{:>7} {:>8} {:>7} {:>7} {:>9} {:>9} {:>9} {:>8} {:>8}  conds",
        "k", "h", "theta", "adj", "M_K", "C_Kh", "sigmaCh", "eta", "beta"
    )
    .unwrap();
    for r in &rep.rows {
        writeln!(
            s,
            "{:>7} {:>8.4} {:>7.2} {:>7} {:>9.5} {:>9.5} {:>9.5} {:>8.5} {:>8}  {}",
            r.triangle,
            r.h,
            r.theta,
            r.theta_adj.map_or("-".into(), |a| format!("{a:.2}")),
            r.m_k,
            r.c_kh,
            r.sigma_ch,
            r.eta,
            r.beta.map_or("-".into(), |b| format!("{b:.3}")),
            r.flags()
        )
        .unwrap();
    }
    writeln!(s, "r_n = {}", rep.r_n).unwrap();
    writeln!(s, "positively cut triangles: {}", rep.rows.len()).unwrap();
    let failing: Vec<_> = rep.failing_rows().collect();
    let count = |f: fn(&ConditionRow) -> bool| rep.rows.iter().filter(|r| !f(r)).count();
    writeln!(s, "cond_a failures: {}", count(|r| r.cond_a)).unwrap();
    writeln!(s, "cond_b failures: {}", count(|r| r.cond_b)).unwrap();
    writeln!(s, "cond_c failures: {}", count(|r| r.cond_c)).unwrap();
    writeln!(s, "cond_d failures: {}", count(|r| r.cond_d)).unwrap();
    let untouched = rep.untouched_components();
    if untouched.is_empty() {
        writeln!(s, "every curve component has positive edges: yes").unwrap();
    } else {
        writeln!(s, "curve components without positive edges: {untouched:?}").unwrap();
    }
    if let Some(worst) = failing.iter().min_by(|a, b| a.slack_c.total_cmp(&b.slack_c)) {
        writeln!(
            s,
            "tightest failing row: k={} sigmaCh={} limit={} ({})",
            worst.triangle,
            worst.sigma_ch,
            worst.sigma_ch + worst.slack_c,
            worst.flags()
        )
        .unwrap();
    }
    writeln!(s, "all conditions pass: {}", yes(rep.all_pass)).unwrap();
    s
}

/// Machine-readable condition rows.
pub fn condition_csv(rep: &ConditionReport) -> String {
    let mut s = String::from(
        "k,h,theta,theta_adj,M_K,C_Kh,sigma_Ch,eta,beta,cond_a,cond_b,cond_c,cond_d,slack_a,slack_b,slack_c,slack_d\n",
    );
    for r in &rep.rows {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.triangle,
            r.h,
            r.theta,
            opt(r.theta_adj),
            r.m_k,
            r.c_kh,
            r.sigma_ch,
            r.eta,
            opt(r.beta),
            r.cond_a as u8,
            r.cond_b as u8,
            r.cond_c as u8,
            r.cond_d as u8,
            r.slack_a,
            r.slack_b,
            r.slack_c,
            r.slack_d
        )
        .unwrap();
    }
    s
}

/// Samples of every loop, one row each.
pub fn samples_csv(samples: &[Vec<ParamSample>]) -> String {
    let mut s = String::from("loop,edge_v0,edge_v1,owner,x,y,pix,piy,phi,J,blo,bhi,s\n");
    for p in samples.iter().flatten() {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            p.loop_id,
            p.edge.0,
            p.edge.1,
            p.owner,
            p.x.x,
            p.x.y,
            p.pi_x.position.x,
            p.pi_x.position.y,
            p.phi_x,
            p.jacobian,
            p.bound_lo,
            p.bound_hi,
            p.arclength_param
        )
        .unwrap();
    }
    s
}

fn tally_line(s: &mut String, name: &str, t: &Tally) {
    write!(s, "  {name}: {} checked, {} violations", t.checked, t.violations).unwrap();
    if let Some(w) = t.worst {
        write!(s, " (worst: triangle {} at ({}, {}), excess {})", w.triangle, w.point.x, w.point.y, w.excess).unwrap();
    }
    s.push('\n');
}

/// Human-readable verification report.
pub fn verification_text(v: &VerificationReport, loops: &[PositiveLoop]) -> String {
    let mut s = String::new();
    writeln!(s, "samples per edge: {}", v.samples_per_edge).unwrap();
    writeln!(s, "conditions pass: {}", yes(v.conditions_pass)).unwrap();
    writeln!(s, "loops: {}", v.loops.len()).unwrap();
    for (l, lp) in v.loops.iter().zip(loops) {
        writeln!(
            s,
            "loop {}: {} edges, {} samples, component {}",
            l.loop_id,
            lp.num_edges(),
            l.num_samples,
            l.component.map_or("ambiguous".into(), |c| c.to_string())
        )
        .unwrap();
        writeln!(
            s,
            "  injectivity: {} (total variation {}, min step {})",
            yes(l.injectivity_ok),
            l.total_variation,
            l.min_step
        )
        .unwrap();
        writeln!(s, "  surjectivity: {} (max gap {}, tolerance {})", yes(l.surjectivity_ok), l.max_gap, l.gap_tol).unwrap();
        writeln!(s, "  jacobian bounds: {} (max J {})", yes(l.jacobian_ok), l.max_jacobian).unwrap();
        tally_line(&mut s, "jacobian", &l.jacobian);
        writeln!(s, "  distance bounds: {}", yes(l.phi_bounds_ok)).unwrap();
        tally_line(&mut s, "distance", &l.phi_bounds);
        writeln!(s, "  local estimates: {}", yes(l.estimates_ok)).unwrap();
        tally_line(&mut s, "normal alignment", &l.estimates.normal_alignment);
        tally_line(&mut s, "taylor estimate", &l.estimates.taylor);
        tally_line(&mut s, "phi lower bound", &l.estimates.phi_lower);
        tally_line(&mut s, "proximal vertex", &l.estimates.proximal);
    }
    writeln!(s, "component match: {:?}", v.component_match).unwrap();
    writeln!(s, "component bijection: {}", yes(v.component_bijection)).unwrap();
    writeln!(s, "{}", v.verdict()).unwrap();
    s
}
