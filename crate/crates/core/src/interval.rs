//! 2-interval representations of graphs with maximum degree 3.
//!
//! Every vertex gets at most two closed integer intervals, and two vertices
//! are adjacent exactly when some interval of one meets some interval of the
//! other. The canonical form gives each vertex one point and one proper
//! interval whose ends are neighbours in the sorted set of all endpoints.
//!
//! Construction: each edge `e` gets a point `P_e` shared by its two ends. A
//! degree-3 vertex takes a proper interval between two of its edge points and
//! a point at the third. The third edge is the vertex's parent edge in a
//! depth-first forest, which makes the "must be neighbours" relation between
//! edge points a disjoint union of paths, so the points can be laid out with
//! every demanded pair side by side.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub left: i64,
    pub right: i64,
}

impl Interval {
    pub fn new(left: i64, right: i64) -> Result<Self> {
        if left > right {
            return Err(Error::InvalidInput(format!("interval [{left}, {right}] is reversed")));
        }
        Ok(Interval { left, right })
    }

    pub fn point(x: i64) -> Self {
        Interval { left: x, right: x }
    }

    pub fn is_trivial(&self) -> bool {
        self.left == self.right
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.left <= other.right && other.left <= self.right
    }

    fn strictly_contains(&self, x: i64) -> bool {
        self.left < x && x < self.right
    }

    /// Maps `x` to `f * (x + 1)`.
    fn scaled(&self, f: i64) -> Interval {
        Interval {
            left: (self.left + 1) * f,
            right: (self.right + 1) * f,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.left, self.right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoIntervalRep {
    intervals: Vec<Vec<Interval>>,
}

impl TwoIntervalRep {
    /// Intervals are kept sorted per vertex.
    pub fn new(mut intervals: Vec<Vec<Interval>>) -> Result<Self> {
        for (u, list) in intervals.iter_mut().enumerate() {
            if list.len() > 2 {
                return Err(Error::InvalidInput(format!(
                    "vertex {u} has {} intervals",
                    list.len()
                )));
            }
            list.sort();
        }
        Ok(TwoIntervalRep { intervals })
    }

    pub fn num_vertices(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self, u: usize) -> &[Interval] {
        &self.intervals[u]
    }

    pub fn trivial(&self, u: usize) -> Option<Interval> {
        self.intervals[u].iter().copied().find(Interval::is_trivial)
    }

    pub fn nontrivial(&self, u: usize) -> Option<Interval> {
        self.intervals[u].iter().copied().find(|i| !i.is_trivial())
    }

    /// Distinct endpoints of `u`'s intervals, ascending.
    pub fn endpoints(&self, u: usize) -> Vec<i64> {
        let mut d: Vec<i64> = self.intervals[u]
            .iter()
            .flat_map(|i| [i.left, i.right])
            .collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn vertices_intersect(&self, u: usize, w: usize) -> bool {
        self.intervals[u]
            .iter()
            .any(|a| self.intervals[w].iter().any(|b| a.intersects(b)))
    }

    fn is_canonical_vertex(&self, u: usize) -> bool {
        self.trivial(u).is_some() && self.nontrivial(u).is_some() && self.endpoints(u).len() == 3
    }

    fn max_coordinate(&self) -> i64 {
        self.intervals
            .iter()
            .flatten()
            .map(|i| i.right)
            .max()
            .unwrap_or(0)
    }
}

/// Sorted endpoint universe and the endpoints of each vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndpointUniverse {
    pub gamma: Vec<i64>,
    pub per_vertex: Vec<Vec<i64>>,
}

impl EndpointUniverse {
    /// Position of coordinate `x` in `gamma`.
    pub fn index(&self, x: i64) -> Option<usize> {
        self.gamma.binary_search(&x).ok()
    }
}

pub fn endpoint_universe(rep: &TwoIntervalRep) -> EndpointUniverse {
    let per_vertex: Vec<Vec<i64>> = (0..rep.num_vertices()).map(|u| rep.endpoints(u)).collect();
    let mut gamma: Vec<i64> = per_vertex.iter().flatten().copied().collect();
    gamma.sort_unstable();
    gamma.dedup();
    EndpointUniverse { gamma, per_vertex }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepViolation {
    VertexCount { graph: usize, rep: usize },
    Intersection { u: usize, w: usize, adjacent: bool },
    NotCanonical { vertex: usize },
    ClaimForm { vertex: usize, degree: usize },
    DirtyInterior { vertex: usize, intruder: usize, coordinate: i64 },
    NotAdjacentInGamma { vertex: usize },
}

impl fmt::Display for RepViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepViolation::VertexCount { graph, rep } => {
                write!(f, "graph has {graph} vertices, representation has {rep}")
            }
            RepViolation::Intersection { u, w, adjacent: true } => {
                write!(f, "adjacent vertices {u} and {w} have disjoint intervals")
            }
            RepViolation::Intersection { u, w, adjacent: false } => {
                write!(f, "non-adjacent vertices {u} and {w} have intersecting intervals")
            }
            RepViolation::NotCanonical { vertex } => write!(
                f,
                "vertex {vertex} lacks one point plus one proper interval with 3 distinct endpoints"
            ),
            RepViolation::ClaimForm { vertex, degree } => write!(
                f,
                "vertex {vertex} of degree {degree} has intervals of the wrong shape"
            ),
            RepViolation::DirtyInterior {
                vertex,
                intruder,
                coordinate,
            } => write!(
                f,
                "endpoint {coordinate} of vertex {intruder} lies inside the proper interval of vertex {vertex}"
            ),
            RepViolation::NotAdjacentInGamma { vertex } => write!(
                f,
                "the proper interval of vertex {vertex} has ends that are not consecutive endpoints"
            ),
        }
    }
}

fn check_intersections(g: &Graph, rep: &TwoIntervalRep, out: &mut Vec<RepViolation>) -> bool {
    if g.n() != rep.num_vertices() {
        out.push(RepViolation::VertexCount {
            graph: g.n(),
            rep: rep.num_vertices(),
        });
        return false;
    }
    for u in 0..g.n() {
        for w in u + 1..g.n() {
            let adjacent = g.has_edge(u, w);
            if rep.vertices_intersect(u, w) != adjacent {
                out.push(RepViolation::Intersection { u, w, adjacent });
            }
        }
    }
    true
}

fn check_clean(rep: &TwoIntervalRep, u: usize, out: &mut Vec<RepViolation>) {
    let Some(big) = rep.nontrivial(u) else {
        return;
    };
    for w in 0..rep.num_vertices() {
        if w == u {
            continue;
        }
        for x in rep.endpoints(w) {
            if big.strictly_contains(x) {
                out.push(RepViolation::DirtyInterior {
                    vertex: u,
                    intruder: w,
                    coordinate: x,
                });
            }
        }
    }
}

/// Full check of the canonical form: intersection graph, one point plus one
/// proper interval per vertex, clean interiors and consecutive ends in the
/// endpoint universe.
pub fn verify_rep(g: &Graph, rep: &TwoIntervalRep) -> Vec<RepViolation> {
    let mut out = Vec::new();
    if !check_intersections(g, rep, &mut out) {
        return out;
    }
    let universe = endpoint_universe(rep);
    for u in 0..g.n() {
        if !rep.is_canonical_vertex(u) {
            out.push(RepViolation::NotCanonical { vertex: u });
            continue;
        }
        check_clean(rep, u, &mut out);
        let big = rep.nontrivial(u).expect("canonical");
        let a = universe.index(big.left).expect("endpoint in universe");
        let b = universe.index(big.right).expect("endpoint in universe");
        if b != a + 1 {
            out.push(RepViolation::NotAdjacentInGamma { vertex: u });
        }
    }
    out
}

/// Check of the pre-padding shape: degree at most 1 gives a single point,
/// degree 2 gives two points or one clean proper interval, degree 3 gives a
/// point plus a clean proper interval.
pub fn verify_claim(g: &Graph, rep: &TwoIntervalRep) -> Vec<RepViolation> {
    let mut out = Vec::new();
    if !check_intersections(g, rep, &mut out) {
        return out;
    }
    for u in 0..g.n() {
        let list = rep.intervals(u);
        let points = list.iter().filter(|i| i.is_trivial()).count();
        let proper = list.len() - points;
        let degree = g.degree(u);
        let ok = match degree {
            0 | 1 => points == 1 && proper == 0,
            2 => (points == 2 && proper == 0 && list[0] != list[1]) || (points == 0 && proper == 1),
            _ => points == 1 && proper == 1,
        };
        if !ok {
            out.push(RepViolation::ClaimForm { vertex: u, degree });
        }
        check_clean(rep, u, &mut out);
    }
    out
}

/// Depth-first forest; each component is rooted at its lowest-id vertex of
/// maximum degree. Returns the parent edge id of every vertex.
fn parent_edges(g: &Graph) -> Vec<Option<usize>> {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut roots = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = roots.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut i = 0;
        while i < members.len() {
            let u = members[i];
            i += 1;
            for &w in g.neighbors(u) {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                }
            }
        }
        let root = members
            .iter()
            .copied()
            .max_by(|&a, &b| g.degree(a).cmp(&g.degree(b)).then(b.cmp(&a)))
            .expect("component is non-empty");
        roots.push(root);
    }
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    for root in roots {
        // iterative DFS visiting neighbours in ascending order
        let mut stack = vec![(root, 0usize)];
        seen[root] = true;
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            let nb = g.neighbors(u);
            if *next == nb.len() {
                stack.pop();
                continue;
            }
            let w = nb[*next];
            *next += 1;
            if !seen[w] {
                seen[w] = true;
                parent[w] = g.edge_id(u, w);
                stack.push((w, 0));
            }
        }
    }
    parent
}

/// Builds a representation in the pre-padding shape checked by [`verify_claim`].
pub fn build_2interval_rep(g: &Graph) -> Result<TwoIntervalRep> {
    g.check_max_degree(3)?;
    let m = g.num_edges();
    let parent = parent_edges(g);
    let incident: Vec<Vec<usize>> = (0..g.n())
        .map(|u| {
            g.neighbors(u)
                .iter()
                .map(|&w| g.edge_id(u, w).expect("neighbour edge"))
                .collect()
        })
        .collect();

    // the two edge points each degree-3 vertex needs side by side
    let mut spared = vec![None; g.n()];
    let mut link: Vec<Vec<usize>> = vec![Vec::new(); m];
    for u in 0..g.n() {
        if g.degree(u) != 3 {
            continue;
        }
        let skip = parent[u].unwrap_or(incident[u][0]);
        spared[u] = Some(skip);
        let pair: Vec<usize> = incident[u].iter().copied().filter(|&e| e != skip).collect();
        link[pair[0]].push(pair[1]);
        link[pair[1]].push(pair[0]);
    }
    if let Some(e) = (0..m).find(|&e| link[e].len() > 2) {
        return Err(Error::Contract(format!("edge point {e} must neighbour three others")));
    }

    // walk each path of linked points from an end, two units apart
    let mut coord = vec![i64::MIN; m];
    let mut next = 0i64;
    for e in 0..m {
        if coord[e] != i64::MIN || link[e].len() == 2 {
            continue;
        }
        let (mut prev, mut cur) = (usize::MAX, e);
        loop {
            coord[cur] = next;
            next += 2;
            match link[cur].iter().copied().find(|&f| f != prev) {
                Some(f) => {
                    prev = cur;
                    cur = f;
                }
                None => break,
            }
        }
    }
    if let Some(e) = (0..m).find(|&e| coord[e] == i64::MIN) {
        return Err(Error::Contract(format!("edge point {e} lies on a cycle of demands")));
    }

    let mut intervals = Vec::with_capacity(g.n());
    for u in 0..g.n() {
        let list = match spared[u] {
            None if incident[u].is_empty() => {
                let x = next;
                next += 2;
                vec![Interval::point(x)]
            }
            None => incident[u].iter().map(|&e| Interval::point(coord[e])).collect(),
            Some(skip) => {
                let ends: Vec<i64> = incident[u]
                    .iter()
                    .filter(|&&e| e != skip)
                    .map(|&e| coord[e])
                    .collect();
                let (a, b) = (ends[0].min(ends[1]), ends[0].max(ends[1]));
                debug_assert_eq!(b - a, 2);
                vec![Interval::point(coord[skip]), Interval::new(a, b)?]
            }
        };
        intervals.push(list);
    }
    TwoIntervalRep::new(intervals)
}

/// Brings a representation in the pre-padding shape to the canonical form
/// without changing its intersection graph. Canonical input is returned as is.
///
/// Coordinates `x` first become `4(x + 1)`, leaving three free integers on
/// each side of every old coordinate. A vertex with two points stretches one
/// of them into a free slot beside it that no proper interval covers; a
/// vertex with a single interval gets its missing piece far to the right of
/// everything.
pub fn pad_to_lemma_form(rep: &TwoIntervalRep, g: &Graph) -> Result<TwoIntervalRep> {
    if verify_rep(g, rep).is_empty() {
        return Ok(rep.clone());
    }
    let claim = verify_claim(g, rep);
    if let Some(v) = claim.first() {
        return Err(Error::Contract(format!("cannot pad: {v}")));
    }
    let scale = 4;
    let mut intervals: Vec<Vec<Interval>> = (0..rep.num_vertices())
        .map(|u| rep.intervals(u).iter().map(|i| i.scaled(scale)).collect())
        .collect();
    let mut occupied: std::collections::HashSet<i64> = intervals
        .iter()
        .flatten()
        .flat_map(|i| [i.left, i.right])
        .collect();
    let covered = |x: i64, intervals: &[Vec<Interval>]| {
        intervals
            .iter()
            .flatten()
            .any(|i| !i.is_trivial() && i.left <= x && x <= i.right)
    };
    let mut fresh = (rep.max_coordinate() + 2) * scale;
    for u in 0..intervals.len() {
        let list = intervals[u].clone();
        let points: Vec<Interval> = list.iter().copied().filter(Interval::is_trivial).collect();
        match (points.len(), list.len()) {
            (1, 2) => {}
            (2, 2) => {
                let mut done = false;
                'search: for p in &points {
                    for side in [-1, 1] {
                        let x = p.left + side;
                        if occupied.contains(&x) || covered(x, &intervals) {
                            continue;
                        }
                        let widened = Interval::new(p.left.min(x), p.left.max(x))?;
                        let slot = intervals[u].iter().position(|i| i == p).expect("own point");
                        intervals[u][slot] = widened;
                        occupied.insert(x);
                        done = true;
                        break 'search;
                    }
                }
                if !done {
                    return Err(Error::Contract(format!(
                        "no free slot next to the points of vertex {u}"
                    )));
                }
            }
            (1, 1) => {
                intervals[u].push(Interval::new(fresh, fresh + 2)?);
                fresh += scale;
            }
            (0, 1) => {
                intervals[u].push(Interval::point(fresh));
                fresh += scale;
            }
            _ => {
                return Err(Error::Contract(format!(
                    "vertex {u} has an unexpected set of intervals"
                )))
            }
        }
        intervals[u].sort();
    }
    TwoIntervalRep::new(intervals)
}

/// Build followed by padding.
pub fn canonical_rep(g: &Graph) -> Result<TwoIntervalRep> {
    let rep = build_2interval_rep(g)?;
    pad_to_lemma_form(&rep, g)
}
