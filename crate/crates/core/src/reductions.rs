//! Instance generators for four hardness reductions, and the source-side
//! brute-force solvers used to check them.
//!
//! Candidate ids in every generated election equal their position on the
//! axis, so axis slices are plain index ranges.

use itertools::Itertools;
use serde::Serialize;

use crate::control::{AvInstance, DcInstance, DvInstance, Violation};
use crate::election::{Election, Vote, VoteMultiset};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::interval::{canonical_rep, endpoint_universe, TwoIntervalRep};
use crate::peaked::Axis;

/// Largest graph the subset solvers accept.
pub const GRAPH_BRUTE_CAP: usize = 24;
/// Largest number of groups [`brute_vis`] accepts.
pub const VIS_BRUTE_CAP: usize = 16;

/// Groups of 4-element integer intervals, each interval given by its left end.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VisInstance {
    groups: Vec<Vec<u64>>,
}

impl VisInstance {
    /// Intervals inside a group are sorted; groups keep their order.
    pub fn new(groups: Vec<Vec<u64>>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::InvalidInput("no groups".into()));
        }
        let mut out = Vec::with_capacity(groups.len());
        for (i, mut g) in groups.into_iter().enumerate() {
            g.sort_unstable();
            if g.is_empty() || g.len() > 3 {
                return Err(Error::InvalidInput(format!(
                    "group {i} has {} intervals, expected 1 to 3",
                    g.len()
                )));
            }
            if g.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInput(format!("group {i} repeats an interval")));
            }
            if g[0] == 0 {
                return Err(Error::InvalidInput(format!(
                    "group {i} has an interval starting at 0; intervals live on 1, 2, ..."
                )));
            }
            out.push(g);
        }
        Ok(VisInstance { groups: out })
    }

    pub fn groups(&self) -> &[Vec<u64>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Sorted distinct integers covered by some interval.
    pub fn gamma(&self) -> Vec<u64> {
        self.groups
            .iter()
            .flatten()
            .flat_map(|&l| l..l + 4)
            .sorted_unstable()
            .dedup()
            .collect()
    }
}

/// Picks one interval per group, pairwise disjoint. Returns the chosen index
/// inside each group.
pub fn brute_vis(vis: &VisInstance) -> Result<Option<Vec<usize>>> {
    if vis.len() > VIS_BRUTE_CAP {
        return Err(Error::Capacity {
            what: "VIS groups",
            size: vis.len(),
            cap: VIS_BRUTE_CAP,
        });
    }
    fn rec(groups: &[Vec<u64>], chosen: &mut Vec<usize>, lefts: &mut Vec<u64>) -> bool {
        let i = chosen.len();
        if i == groups.len() {
            return true;
        }
        for (j, &l) in groups[i].iter().enumerate() {
            if lefts.iter().all(|&o| o.abs_diff(l) >= 4) {
                chosen.push(j);
                lefts.push(l);
                if rec(groups, chosen, lefts) {
                    return true;
                }
                chosen.pop();
                lefts.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    Ok(rec(vis.groups(), &mut chosen, &mut Vec::new()).then_some(chosen))
}

fn graph_guard(g: &Graph) -> Result<()> {
    if g.n() > GRAPH_BRUTE_CAP {
        return Err(Error::Capacity {
            what: "graph vertices",
            size: g.n(),
            cap: GRAPH_BRUTE_CAP,
        });
    }
    Ok(())
}

/// A vertex cover of size at most `k`, smallest first.
pub fn brute_vc(g: &Graph, k: usize) -> Result<Option<Vec<usize>>> {
    graph_guard(g)?;
    Ok((0..=k.min(g.n()))
        .flat_map(|s| (0..g.n()).combinations(s))
        .find(|set| g.is_vertex_cover(set)))
}

/// An independent set of exactly `k` vertices.
pub fn brute_is(g: &Graph, k: usize) -> Result<Option<Vec<usize>>> {
    graph_guard(g)?;
    if k > g.n() {
        return Ok(None);
    }
    Ok((0..g.n()).combinations(k).find(|set| g.is_independent(set)))
}

/// Where a generated vote or candidate comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Interval { group: usize, index: usize },
    Vertex(usize),
    Edge(usize, usize),
    Point(i64),
    Gadget(&'static str),
}

#[derive(Clone, Debug)]
pub struct ReductionOutput<I> {
    pub instance: I,
    /// One source per registered-vote entry, in entry order.
    pub registered: Vec<Source>,
    /// One source per unregistered-vote entry (adding problems only).
    pub unregistered: Vec<Source>,
    /// One source per candidate.
    pub candidates: Vec<Source>,
    pub r: usize,
    pub k: usize,
    pub notes: Vec<String>,
}

/// Ascending run `a..=b`, empty when `a > b`.
fn up(a: usize, b: usize) -> Vec<usize> {
    if a > b {
        Vec::new()
    } else {
        (a..=b).collect()
    }
}

/// Descending run from `a` down to `b`, empty when `a < b`. `a` may be -1.
fn down(a: isize, b: usize) -> Vec<usize> {
    if a < b as isize {
        Vec::new()
    } else {
        (b..=a as usize).rev().collect()
    }
}

fn cat(parts: &[&[usize]]) -> Vec<usize> {
    parts.concat()
}

struct Votes {
    m: usize,
    votes: VoteMultiset,
    sources: Vec<Source>,
}

impl Votes {
    fn new(m: usize) -> Self {
        Votes {
            m,
            votes: VoteMultiset::new(),
            sources: Vec::new(),
        }
    }

    fn push(&mut self, order: Vec<usize>, copies: usize, source: Source) -> Result<()> {
        if copies == 0 {
            return Ok(());
        }
        let vote = Vote::new(order, self.m)
            .map_err(|e| Error::Contract(format!("generated vote for {source:?} is malformed: {e}")))?;
        self.votes.push(vote, copies);
        self.sources.push(source);
        Ok(())
    }
}

fn ensure_valid(violations: Vec<Violation>) -> Result<()> {
    match violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::Contract(format!("generated instance is invalid: {v}"))),
    }
}

fn ensure_score(name: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::Contract(format!(
            "registered score of {name} is {got}, expected {want}"
        )));
    }
    Ok(())
}

/// Interval-selection instance to 2-peaked control by adding votes with
/// `r = n + 4`, `p = d_n` and budget `n`.
pub fn reduce_vis_to_av2(vis: &VisInstance) -> Result<ReductionOutput<AvInstance>> {
    let n = vis.len();
    if n < 2 {
        return Err(Error::InvalidInput(
            "at least 2 groups are needed; with one group the registered score n-2 is negative".into(),
        ));
    }
    let gamma = vis.gamma();
    let g = gamma.len();
    let block = n + 3;
    // axis: gamma, d_1..d_{2n-1}, x'_1..x'_{g*block}, d'_1..d'_{(2n-2)*block}
    let d = |i: usize| g + i - 1;
    let xd0 = g + 2 * n - 1;
    let dd0 = xd0 + g * block;
    let m = dd0 + (2 * n - 2) * block;
    let last = m - 1;
    let r = n + 4;
    let p = d(n);

    let mut candidates: Vec<Source> = gamma.iter().map(|&x| Source::Point(x as i64)).collect();
    candidates.extend((1..2 * n).map(|_| Source::Gadget("d")));
    candidates.resize(m, Source::Gadget("dummy"));
    let mut names: Vec<String> = gamma.iter().map(|x| format!("g{x}")).collect();
    names.extend((1..2 * n).map(|i| format!("d{i}")));
    names.extend((1..=g * block).map(|j| format!("x'{j}")));
    names.extend((1..=(2 * n - 2) * block).map(|j| format!("d'{j}")));

    let mut reg = Votes::new(m);
    // the leader of each vote is followed by its own block of dummies
    let lead = |c: usize, start: usize| -> Vec<usize> {
        let end = start + block - 1;
        cat(&[&[c], &up(start, end), &down(c as isize - 1, 0), &up(c + 1, start - 1), &up(end + 1, last)])
    };
    for i in 0..g {
        reg.push(lead(i, xd0 + i * block), n - 2, Source::Gadget("score padding"))?;
    }
    for i in 1..n {
        reg.push(lead(d(i), dd0 + (i - 1) * block), n - i - 1, Source::Gadget("score padding"))?;
    }
    for i in n + 1..2 * n {
        reg.push(lead(d(i), dd0 + (i - 2) * block), i - n - 1, Source::Gadget("score padding"))?;
    }

    let mut unreg = Votes::new(m);
    for (gi, group) in vis.groups().iter().enumerate() {
        let i = gi + 1;
        for (j, &left) in group.iter().enumerate() {
            let l = gamma.binary_search(&left).expect("left end is in gamma");
            let rr = l + 3;
            let order = cat(&[&up(l, rr), &up(d(i), last), &down(l as isize - 1, 0), &up(rr + 1, d(i) - 1)]);
            unreg.push(order, 1, Source::Interval { group: gi, index: j })?;
        }
    }

    let election = Election::new(names, p, r, reg.votes)?;
    let sc = election.scores();
    for (c, &s) in sc.iter().enumerate().take(g) {
        ensure_score(election.name(c), s, n - 2)?;
    }
    for i in 1..2 * n {
        let want = match i.cmp(&n) {
            std::cmp::Ordering::Less => n - i - 1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => i - n - 1,
        };
        ensure_score(election.name(d(i)), sc[d(i)], want)?;
    }
    if let Some(c) = (xd0..m).find(|&c| sc[c] > n - 2) {
        return Err(Error::Contract(format!("dummy {} scores {}", election.name(c), sc[c])));
    }

    let instance = AvInstance {
        election,
        unregistered: unreg.votes,
        budget: n,
        axis: Axis::identity(m),
        k: 2,
    };
    ensure_valid(instance.validate())?;
    Ok(ReductionOutput {
        instance,
        registered: reg.sources,
        unregistered: unreg.sources,
        candidates,
        r,
        k: 2,
        notes: Vec::new(),
    })
}

/// Canonical representation and the per-vertex data the graph reductions need.
struct Layout {
    rep: TwoIntervalRep,
    gamma: Vec<i64>,
    /// Indices into `gamma` of each vertex's three endpoints, ascending.
    ends: Vec<[usize; 3]>,
    /// For each vertex, the index in `gamma` where its proper interval starts.
    gap: Vec<usize>,
}

fn layout(g: &Graph) -> Result<Layout> {
    g.check_max_degree(3)?;
    let rep = canonical_rep(g)?;
    let uni = endpoint_universe(&rep);
    let mut ends = Vec::with_capacity(g.n());
    let mut gap = Vec::with_capacity(g.n());
    for u in 0..g.n() {
        let d: Vec<usize> = uni.per_vertex[u]
            .iter()
            .map(|&x| uni.index(x).expect("endpoint"))
            .collect();
        let big = rep.nontrivial(u).expect("canonical form");
        let a = uni.index(big.left).expect("endpoint");
        if uni.index(big.right) != Some(a + 1) || d.len() != 3 {
            return Err(Error::Contract(format!("representation of vertex {u} is not canonical")));
        }
        ends.push([d[0], d[1], d[2]]);
        gap.push(a);
    }
    Ok(Layout {
        rep,
        gamma: uni.gamma,
        ends,
        gap,
    })
}

impl Layout {
    /// Axis positions of the endpoint universe with `t` dummies placed after
    /// every endpoint that opens a proper interval. Returns the position of
    /// each endpoint, the dummy positions behind each opening endpoint, and
    /// the total length.
    fn spread(&self, t: usize) -> (Vec<usize>, Vec<Vec<usize>>, usize) {
        let mut opens = vec![false; self.gamma.len()];
        for &a in &self.gap {
            opens[a] = true;
        }
        let mut pos = Vec::with_capacity(self.gamma.len());
        let mut dummies = vec![Vec::new(); self.gamma.len()];
        let mut next = 0;
        for i in 0..self.gamma.len() {
            pos.push(next);
            next += 1;
            if opens[i] {
                dummies[i] = (next..next + t).collect();
                next += t;
            }
        }
        (pos, dummies, next)
    }

    /// Axis positions a vertex's vote approves, ascending.
    fn approved(&self, u: usize, pos: &[usize], dummies: &[Vec<usize>]) -> Vec<usize> {
        let mut out: Vec<usize> = self.ends[u].iter().map(|&i| pos[i]).collect();
        out.extend(&dummies[self.gap[u]]);
        out.sort_unstable();
        out
    }
}

/// The approved block ascending, then `extra`, then everything left of the
/// block going left, then everything else going right.
fn vertex_vote(approved: &[usize], extra: &[usize], m: usize) -> Vec<usize> {
    let lo = approved[0];
    let mut taken = vec![false; m];
    for &c in approved.iter().chain(extra) {
        taken[c] = true;
    }
    let rest: Vec<usize> = (lo + 1..m).filter(|&c| !taken[c]).collect();
    cat(&[approved, extra, &down(lo as isize - 1, 0), &rest])
}

fn gamma_names(gamma: &[i64], pos: &[usize], dummies: &[Vec<usize>], m: usize) -> (Vec<String>, Vec<Source>) {
    let mut names = vec![String::new(); m];
    let mut sources = vec![Source::Gadget("dummy"); m];
    for (i, &x) in gamma.iter().enumerate() {
        names[pos[i]] = format!("g{x}");
        sources[pos[i]] = Source::Point(x);
        for (j, &c) in dummies[i].iter().enumerate() {
            names[c] = format!("x{x}_{}", j + 1);
        }
    }
    (names, sources)
}

/// Vertex cover (at most `k`) on graphs of maximum degree 3 to 2-peaked
/// control by deleting votes with width `r >= 3` and budget `k`.
pub fn reduce_vc3_to_dv2(g: &Graph, k: usize, r: usize) -> Result<ReductionOutput<DvInstance>> {
    if r < 3 {
        return Err(Error::InvalidInput(format!("width {r} is below 3")));
    }
    if k > g.n() {
        return Err(Error::InvalidInput(format!("k = {k} exceeds the {} vertices", g.n())));
    }
    let lay = layout(g)?;
    let (pos, dummies, w) = lay.spread(r - 3);
    let p = w;
    let c = |j: usize| p + j;
    let m = p + 2 * r - 1;
    let (mut names, mut candidates) = gamma_names(&lay.gamma, &pos, &dummies, m);
    names[p] = "p".into();
    candidates[p] = Source::Gadget("p");
    for j in 1..=2 * r - 2 {
        names[c(j)] = format!("c{j}");
    }

    let mut reg = Votes::new(m);
    for u in 0..g.n() {
        let approved = lay.approved(u, &pos, &dummies);
        reg.push(vertex_vote(&approved, &[], m), 1, Source::Vertex(u))?;
    }
    let left_of_p = down(p as isize - 1, 0);
    reg.push(cat(&[&up(p, c(2 * r - 2)), &left_of_p]), 1, Source::Gadget("p support"))?;
    reg.push(
        cat(&[&[p], &up(c(r), c(2 * r - 2)), &up(c(1), c(r - 1)), &left_of_p]),
        1,
        Source::Gadget("p support"),
    )?;

    let election = Election::new(names, p, r, reg.votes)?;
    let sc = election.scores();
    ensure_score("p", sc[p], 2)?;
    if let Some(x) = (0..m).find(|&x| x != p && sc[x] > 2) {
        return Err(Error::Contract(format!("{} scores {}", election.name(x), sc[x])));
    }
    let instance = DvInstance {
        election,
        budget: k,
        axis: Axis::identity(m),
        k: 2,
    };
    ensure_valid(instance.validate())?;
    Ok(ReductionOutput {
        instance,
        registered: reg.sources,
        unregistered: Vec::new(),
        candidates,
        r,
        k: 2,
        notes: vec![format!("{} endpoints", lay.gamma.len()), rep_note(&lay.rep)],
    })
}

fn rep_note(rep: &TwoIntervalRep) -> String {
    let parts: Vec<String> = (0..rep.num_vertices())
        .map(|u| {
            rep.intervals(u)
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    format!("representation: {}", parts.join("; "))
}

/// Independent set (exactly `k`) on graphs of maximum degree 3 to 3-peaked
/// control by adding votes with width `r >= 4` and budget `k`.
pub fn reduce_is3_to_av3(g: &Graph, k: usize, r: usize) -> Result<ReductionOutput<AvInstance>> {
    if r < 4 {
        return Err(Error::InvalidInput(format!("width {r} is below 4")));
    }
    if k < 2 || k > g.n() {
        return Err(Error::InvalidInput(format!(
            "k = {k} must lie in 2..={}; the registered score k-2 would be negative otherwise",
            g.n()
        )));
    }
    let lay = layout(g)?;
    let (pos, dummies, w) = lay.spread(r - 4);
    let p = w;
    let c = |j: usize| p + j;
    let m = p + r;
    let (mut names, mut candidates) = gamma_names(&lay.gamma, &pos, &dummies, m);
    names[p] = "p".into();
    candidates[p] = Source::Gadget("p");
    for j in 1..r {
        names[c(j)] = format!("c{j}");
    }

    let mut reg = Votes::new(m);
    let full = w / r;
    for b in 0..full {
        let s = b * r;
        reg.push(
            cat(&[&up(s, s + r - 1), &down(s as isize - 1, 0), &up(s + r, m - 1)]),
            k - 2,
            Source::Gadget("score padding"),
        )?;
    }
    let q = w % r;
    if q > 0 {
        let s = w - q;
        reg.push(
            cat(&[&up(s, w - 1), &up(c(1), c(r - q)), &down(s as isize - 1, 0), &[p], &up(c(r - q + 1), c(r - 1))]),
            k - 2,
            Source::Gadget("score padding"),
        )?;
    }

    let mut unreg = Votes::new(m);
    for u in 0..g.n() {
        let approved = lay.approved(u, &pos, &dummies);
        unreg.push(vertex_vote(&approved, &[p], m), 1, Source::Vertex(u))?;
    }

    let election = Election::new(names, p, r, reg.votes)?;
    let sc = election.scores();
    for (x, &s) in sc.iter().enumerate().take(w) {
        ensure_score(election.name(x), s, k - 2)?;
    }
    ensure_score("p", sc[p], 0)?;
    if let Some(x) = (1..r).map(c).find(|&x| sc[x] > k - 2) {
        return Err(Error::Contract(format!("{} scores {}", election.name(x), sc[x])));
    }
    let instance = AvInstance {
        election,
        unregistered: unreg.votes,
        budget: k,
        axis: Axis::identity(m),
        k: 3,
    };
    ensure_valid(instance.validate())?;
    Ok(ReductionOutput {
        instance,
        registered: reg.sources,
        unregistered: unreg.sources,
        candidates,
        r,
        k: 3,
        notes: vec![format!("{} endpoints", lay.gamma.len()), rep_note(&lay.rep)],
    })
}

/// Weight used for the three large vote families: the edge count `m`, raised
/// when `m + k < 3`. With `m = 1, k = 1` the literal weight lets a surviving
/// endpoint of the single edge tie with `p`.
pub fn dc3_weight(m: usize, k: usize) -> usize {
    m.max((m + 3).saturating_sub(k).div_ceil(2))
}

/// Independent set (exactly `k`) to 1-approval control by deleting at most
/// `k` candidates in a 3-peaked election. Small inputs get the adjusted
/// weight from [`dc3_weight`].
pub fn reduce_is_to_dc3(g: &Graph, k: usize) -> Result<ReductionOutput<DcInstance>> {
    dc3_with_weight(g, k, dc3_weight(g.num_edges(), k))
}

/// Same construction with the weight fixed to the edge count, for every input.
pub fn reduce_is_to_dc3_literal(g: &Graph, k: usize) -> Result<ReductionOutput<DcInstance>> {
    dc3_with_weight(g, k, g.num_edges())
}

fn dc3_with_weight(g: &Graph, k: usize, weight: usize) -> Result<ReductionOutput<DcInstance>> {
    let n = g.n();
    let edges = g.num_edges();
    if edges == 0 {
        return Err(Error::InvalidInput("the graph has no edges".into()));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!("k = {k} must lie in 1..={n}")));
    }
    // axis: b_k..b_1, b, p, a, a_1..a_k, c_1..c_n
    let bj = |j: usize| k - j;
    let b = k;
    let p = k + 1;
    let a = k + 2;
    let aj = |j: usize| a + j;
    let cv = |u: usize| 2 * k + 3 + u;
    let m = 2 * k + 3 + n;
    let last = m - 1;

    let mut names = vec![String::new(); m];
    let mut candidates = vec![Source::Gadget("dummy"); m];
    for j in 1..=k {
        names[bj(j)] = format!("b{j}");
        names[aj(j)] = format!("a{j}");
    }
    names[b] = "b".into();
    names[p] = "p".into();
    names[a] = "a".into();
    candidates[p] = Source::Gadget("p");
    for u in 0..n {
        names[cv(u)] = format!("v{u}");
        candidates[cv(u)] = Source::Vertex(u);
    }

    let others = |skip: &[usize]| -> Vec<usize> { (0..n).filter(|u| !skip.contains(u)).map(cv).collect() };
    let mut reg = Votes::new(m);
    let mw = weight;
    reg.push(cat(&[&up(a, last), &down(p as isize, 0)]), 2 * mw - 1, Source::Gadget("a block"))?;
    reg.push(cat(&[&up(p, last), &down(b as isize, 0)]), 2 * mw, Source::Gadget("p block"))?;
    reg.push(cat(&[&down(b as isize, 0), &up(p, last)]), 2 * mw + k - 1, Source::Gadget("b block"))?;
    for &(u, v) in g.edges() {
        reg.push(
            cat(&[&[cv(u), cv(v)], &up(a, aj(k)), &down(p as isize, 0), &others(&[u, v])]),
            1,
            Source::Edge(u, v),
        )?;
    }
    for u in 0..n {
        reg.push(
            cat(&[&[cv(u)], &up(p, aj(k)), &down(b as isize, 0), &others(&[u])]),
            1,
            Source::Vertex(u),
        )?;
        reg.push(
            cat(&[&[cv(u)], &up(a, aj(k)), &down(p as isize, 0), &others(&[u])]),
            1,
            Source::Vertex(u),
        )?;
    }
    reg.push(cat(&[&up(aj(1), last), &down(a as isize, 0)]), k + 1, Source::Gadget("a1 block"))?;
    reg.push(cat(&[&down(bj(1) as isize, 0), &up(b, last)]), 1, Source::Gadget("b1 block"))?;

    let election = Election::new(names, p, 1, reg.votes)?;
    let sc = election.scores();
    ensure_score("p", sc[p], 2 * mw)?;
    ensure_score("a", sc[a], 2 * mw - 1)?;
    ensure_score("b", sc[b], 2 * mw + k - 1)?;
    let instance = DcInstance {
        election,
        budget: k,
        axis: Axis::identity(m),
        k: 3,
    };
    ensure_valid(instance.validate())?;
    let mut notes = vec!["budget counts deleted candidates".to_string()];
    if weight != edges {
        notes.push(format!("family weight raised from {edges} to {weight}"));
    }
    Ok(ReductionOutput {
        instance,
        registered: reg.sources,
        unregistered: Vec::new(),
        candidates,
        r: 1,
        k: 3,
        notes,
    })
}
