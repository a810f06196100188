//! Assembly of the positive edges into closed loops.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::classify::CutClassification;
use crate::curve::BoundaryCurve;
use crate::error::{ParseError, TopologyError};
use crate::geom::segments_intersect;
use crate::mesh::{edge_key, Triangulation};

/// One connected component of the union of positive edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositiveLoop {
    pub loop_id: usize,
    /// Cyclic vertex list `v_0, ..., v_n`; edge `i` joins `v_i` and `v_{(i+1) mod (n+1)}`.
    pub vertex_cycle: Vec<usize>,
    /// Owner triangle of edge `i`.
    pub edge_owners: Vec<usize>,
}

impl PositiveLoop {
    pub fn num_edges(&self) -> usize {
        self.vertex_cycle.len()
    }

    /// Endpoints of edge `i` in traversal order.
    pub fn edge(&self, i: usize) -> (usize, usize) {
        let m = self.vertex_cycle.len();
        (self.vertex_cycle[i], self.vertex_cycle[(i + 1) % m])
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.num_edges()).map(|i| self.edge(i))
    }

    /// The same loop traversed backwards from the same start vertex.
    pub fn reversed(&self) -> PositiveLoop {
        let m = self.vertex_cycle.len();
        let vertex_cycle: Vec<usize> = (0..m).map(|i| self.vertex_cycle[(m - i) % m]).collect();
        // edge i of the reversed loop is edge m-1-i of the original
        let edge_owners = (0..m).map(|i| self.edge_owners[m - 1 - i]).collect();
        PositiveLoop {
            loop_id: self.loop_id,
            vertex_cycle,
            edge_owners,
        }
    }
}

/// Number of positive edges at every vertex touched by one.
pub fn vertex_degrees(cls: &CutClassification) -> BTreeMap<usize, usize> {
    let mut deg = BTreeMap::new();
    for e in &cls.positive_edges {
        *deg.entry(e.edge.0).or_insert(0) += 1;
        *deg.entry(e.edge.1).or_insert(0) += 1;
    }
    deg
}

/// Splits the positive edges into simple closed loops.
///
/// Each traversal starts at the lowest unvisited positive edge and walks
/// through degree-two vertices until it returns to its start.
pub fn build_loops(tri: &Triangulation, cls: &CutClassification) -> Result<Vec<PositiveLoop>, TopologyError> {
    if let Some((&vertex, &degree)) = vertex_degrees(cls).iter().find(|(_, &d)| d != 2) {
        return Err(TopologyError::DegreeViolation { vertex, degree });
    }
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in &cls.positive_edges {
        adj.entry(e.edge.0).or_default().push(e.edge.1);
        adj.entry(e.edge.1).or_default().push(e.edge.0);
    }
    let mut visited = BTreeSet::new();
    let mut loops = Vec::new();
    for e in &cls.positive_edges {
        if visited.contains(&e.edge) {
            continue;
        }
        let (start, mut cur) = e.edge;
        let mut prev = start;
        let mut cycle = vec![start];
        let mut owners = vec![e.owner];
        visited.insert(e.edge);
        while cur != start {
            if cycle.len() > cls.positive_edges.len() {
                return Err(TopologyError::OpenChain(start));
            }
            cycle.push(cur);
            let next = adj[&cur].iter().copied().find(|&w| w != prev).ok_or(TopologyError::OpenChain(start))?;
            let key = edge_key(cur, next);
            if !visited.insert(key) && next != start {
                return Err(TopologyError::OpenChain(start));
            }
            owners.push(cls.owner_of(key).expect("adjacency built from positive edges"));
            prev = cur;
            cur = next;
        }
        let lp = PositiveLoop {
            loop_id: loops.len(),
            vertex_cycle: cycle,
            edge_owners: owners,
        };
        if lp.num_edges() < 3 {
            return Err(TopologyError::OpenChain(start));
        }
        if !is_simple(tri, &lp) {
            return Err(TopologyError::SelfIntersectingLoop(lp.loop_id));
        }
        loops.push(lp);
    }
    Ok(loops)
}

/// Whether no two non-adjacent edges of the loop meet.
pub fn is_simple(tri: &Triangulation, lp: &PositiveLoop) -> bool {
    let m = lp.num_edges();
    let seg = |i: usize| {
        let (a, b) = lp.edge(i);
        (tri.vertex(a), tri.vertex(b))
    };
    for i in 0..m {
        let (p1, p2) = seg(i);
        for j in i + 2..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            let (q1, q2) = seg(j);
            if segments_intersect(p1, p2, q1, q2) {
                return false;
            }
        }
    }
    true
}

/// `+1` when the loop runs in the direction of increasing arclength of the
/// projected points on the curve, `-1` otherwise, by majority vote over edges.
pub fn loop_orientation(tri: &Triangulation, lp: &PositiveLoop, curve: &BoundaryCurve) -> Result<i32, TopologyError> {
    let mut s = Vec::with_capacity(lp.num_edges());
    for &v in &lp.vertex_cycle {
        let xi = curve.project(tri.vertex(v))?.point;
        s.push((xi.component_id, curve.arclength_param(&xi)));
    }
    let m = s.len();
    let mut vote = 0i64;
    for i in 0..m {
        let (c0, s0) = s[i];
        let (c1, s1) = s[(i + 1) % m];
        if c0 != c1 {
            continue;
        }
        let d = wrap_delta(s1 - s0);
        if d > 0.0 {
            vote += 1;
        } else if d < 0.0 {
            vote -= 1;
        }
    }
    match vote.signum() {
        1 => Ok(1),
        -1 => Ok(-1),
        _ => Err(TopologyError::AmbiguousOrientation(lp.loop_id)),
    }
}

/// Difference of two periodic fractions mapped into `(-1/2, 1/2]`.
pub fn wrap_delta(d: f64) -> f64 {
    let r = d - d.round();
    if r == -0.5 {
        0.5
    } else {
        r
    }
}

/// Reverses every loop whose orientation is `-1`.
pub fn orient_loops(tri: &Triangulation, loops: Vec<PositiveLoop>, curve: &BoundaryCurve) -> Result<Vec<PositiveLoop>, TopologyError> {
    loops
        .into_iter()
        .map(|lp| Ok(if loop_orientation(tri, &lp, curve)? < 0 { lp.reversed() } else { lp }))
        .collect()
}

/// One line per loop, space-separated vertex ids.
pub fn write_loops(loops: &[PositiveLoop]) -> String {
    let mut out = String::new();
    for lp in loops {
        let ids: Vec<String> = lp.vertex_cycle.iter().map(usize::to_string).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}

/// Reads a loop dump and reattaches edge owners from the classification.
pub fn parse_loops(text: &str, cls: &CutClassification) -> Result<Vec<PositiveLoop>, ParseError> {
    let mut loops = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cycle = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|e| ParseError::Syntax {
                    line: ln + 1,
                    msg: format!("bad vertex id {t:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if cycle.len() < 3 {
            return Err(ParseError::Syntax {
                line: ln + 1,
                msg: "a loop needs at least 3 vertices".into(),
            });
        }
        let m = cycle.len();
        let owners = (0..m)
            .map(|i| {
                let key = edge_key(cycle[i], cycle[(i + 1) % m]);
                cls.owner_of(key).ok_or_else(|| ParseError::Syntax {
                    line: ln + 1,
                    msg: format!("({}, {}) is not a positive edge", key.0, key.1),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        loops.push(PositiveLoop {
            loop_id: loops.len(),
            vertex_cycle: cycle,
            edge_owners: owners,
        });
    }
    Ok(loops)
}
