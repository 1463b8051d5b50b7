//! The four control problems, instance validation and exhaustive oracles.

use std::fmt;
use std::time::{Duration, Instant};

use itertools::Itertools;
use serde::Serialize;

use crate::election::{
    restricted_scores, unique_winner_among, unique_winner_of, CandidateId, Election, Vote,
    VoteMultiset,
};
use crate::error::{Error, Result};
use crate::peaked::{max_peak_bound, min_peaks, Axis};

/// Default limit on the number of candidates an exhaustive subset search may range over.
pub const DEFAULT_SUBSET_CAP: usize = 20;

/// Control by adding votes: pick at most `budget` of the unregistered votes.
#[derive(Clone, Debug)]
pub struct AvInstance {
    pub election: Election,
    pub unregistered: VoteMultiset,
    pub budget: usize,
    pub axis: Axis,
    pub k: usize,
}

/// Control by deleting votes: remove at most `budget` registered votes.
#[derive(Clone, Debug)]
pub struct DvInstance {
    pub election: Election,
    pub budget: usize,
    pub axis: Axis,
    pub k: usize,
}

/// Control by adding candidates. The votes rank every candidate, spoilers
/// included; only the spoilers that get added take part in the election.
#[derive(Clone, Debug)]
pub struct AcInstance {
    pub election: Election,
    pub spoilers: Vec<CandidateId>,
    pub budget: usize,
    pub axis: Axis,
    pub k: usize,
}

/// Control by deleting candidates other than `p`.
#[derive(Clone, Debug)]
pub struct DcInstance {
    pub election: Election,
    pub budget: usize,
    pub axis: Axis,
    pub k: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Av,
    Dv,
    Ac,
    Dc,
}

impl Problem {
    pub fn as_str(self) -> &'static str {
        match self {
            Problem::Av => "av",
            Problem::Dv => "dv",
            Problem::Ac => "ac",
            Problem::Dc => "dc",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Any of the four control instances.
#[derive(Clone, Debug)]
pub enum ControlInstance {
    Av(AvInstance),
    Dv(DvInstance),
    Ac(AcInstance),
    Dc(DcInstance),
}

impl ControlInstance {
    pub fn problem(&self) -> Problem {
        match self {
            ControlInstance::Av(_) => Problem::Av,
            ControlInstance::Dv(_) => Problem::Dv,
            ControlInstance::Ac(_) => Problem::Ac,
            ControlInstance::Dc(_) => Problem::Dc,
        }
    }

    pub fn election(&self) -> &Election {
        match self {
            ControlInstance::Av(i) => &i.election,
            ControlInstance::Dv(i) => &i.election,
            ControlInstance::Ac(i) => &i.election,
            ControlInstance::Dc(i) => &i.election,
        }
    }

    pub fn axis(&self) -> &Axis {
        match self {
            ControlInstance::Av(i) => &i.axis,
            ControlInstance::Dv(i) => &i.axis,
            ControlInstance::Ac(i) => &i.axis,
            ControlInstance::Dc(i) => &i.axis,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            ControlInstance::Av(i) => i.k,
            ControlInstance::Dv(i) => i.k,
            ControlInstance::Ac(i) => i.k,
            ControlInstance::Dc(i) => i.k,
        }
    }

    pub fn budget(&self) -> usize {
        match self {
            ControlInstance::Av(i) => i.budget,
            ControlInstance::Dv(i) => i.budget,
            ControlInstance::Ac(i) => i.budget,
            ControlInstance::Dc(i) => i.budget,
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        match self {
            ControlInstance::Av(i) => i.validate(),
            ControlInstance::Dv(i) => i.validate(),
            ControlInstance::Ac(i) => i.validate(),
            ControlInstance::Dc(i) => i.validate(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    AxisSize { axis: usize, candidates: usize },
    PeakBound { k: usize, max: usize },
    NotKPeaked {
        section: &'static str,
        entry: usize,
        vote: Vec<CandidateId>,
        peaks: usize,
        k: usize,
    },
    VoteSize { section: &'static str, entry: usize },
    Budget { budget: usize, limit: usize },
    BadSpoiler { candidate: CandidateId, reason: &'static str },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AxisSize { axis, candidates } => {
                write!(f, "axis has {axis} entries but the election has {candidates} candidates")
            }
            Violation::PeakBound { k, max } => write!(f, "peak bound k={k} outside 1..={max}"),
            Violation::NotKPeaked {
                section,
                entry,
                vote,
                peaks,
                k,
            } => write!(
                f,
                "{section} vote #{entry} {vote:?} needs {peaks} peaks, more than k={k}"
            ),
            Violation::VoteSize { section, entry } => {
                write!(f, "{section} vote #{entry} does not rank every candidate")
            }
            Violation::Budget { budget, limit } => {
                write!(f, "budget {budget} exceeds the available {limit}")
            }
            Violation::BadSpoiler { candidate, reason } => {
                write!(f, "spoiler {candidate}: {reason}")
            }
        }
    }
}

fn check_peaks(
    out: &mut Vec<Violation>,
    section: &'static str,
    votes: &VoteMultiset,
    axis: &Axis,
    k: usize,
) {
    for (entry, (vote, _)) in votes.entries().iter().enumerate() {
        if vote.num_candidates() != axis.len() {
            out.push(Violation::VoteSize { section, entry });
            continue;
        }
        let peaks = min_peaks(vote, axis).expect("sizes checked");
        if peaks > k {
            out.push(Violation::NotKPeaked {
                section,
                entry,
                vote: vote.order().to_vec(),
                peaks,
                k,
            });
        }
    }
}

/// Axis size, peak bound and per-vote k-peakedness.
fn check_common(election: &Election, axis: &Axis, k: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    let m = election.num_candidates();
    if axis.len() != m {
        out.push(Violation::AxisSize {
            axis: axis.len(),
            candidates: m,
        });
        return out;
    }
    let max = max_peak_bound(m);
    if k == 0 || k > max {
        out.push(Violation::PeakBound { k, max });
        return out;
    }
    check_peaks(&mut out, "registered", election.registered(), axis, k);
    out
}

impl AvInstance {
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = check_common(&self.election, &self.axis, self.k);
        if out.iter().all(|v| !matches!(v, Violation::AxisSize { .. } | Violation::PeakBound { .. })) {
            check_peaks(&mut out, "unregistered", &self.unregistered, &self.axis, self.k);
        }
        if self.budget > self.unregistered.len() {
            out.push(Violation::Budget {
                budget: self.budget,
                limit: self.unregistered.len(),
            });
        }
        out
    }
}

impl DvInstance {
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = check_common(&self.election, &self.axis, self.k);
        let limit = self.election.registered().len();
        if self.budget > limit {
            out.push(Violation::Budget {
                budget: self.budget,
                limit,
            });
        }
        out
    }
}

impl AcInstance {
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = check_common(&self.election, &self.axis, self.k);
        let m = self.election.num_candidates();
        let mut seen = vec![false; m];
        for &c in &self.spoilers {
            if c >= m {
                out.push(Violation::BadSpoiler {
                    candidate: c,
                    reason: "unknown candidate",
                });
            } else if c == self.election.distinguished() {
                out.push(Violation::BadSpoiler {
                    candidate: c,
                    reason: "the distinguished candidate cannot be a spoiler",
                });
            } else if seen[c] {
                out.push(Violation::BadSpoiler {
                    candidate: c,
                    reason: "listed twice",
                });
            } else {
                seen[c] = true;
            }
        }
        if self.budget > self.spoilers.len() {
            out.push(Violation::Budget {
                budget: self.budget,
                limit: self.spoilers.len(),
            });
        }
        out
    }

    /// Candidates present before any spoiler is added.
    pub fn base_present(&self) -> Vec<bool> {
        let mut present = vec![true; self.election.num_candidates()];
        for &c in &self.spoilers {
            if c < present.len() {
                present[c] = false;
            }
        }
        present
    }
}

impl DcInstance {
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = check_common(&self.election, &self.axis, self.k);
        let limit = self.election.num_candidates() - 1;
        if self.budget > limit {
            out.push(Violation::Budget {
                budget: self.budget,
                limit,
            });
        }
        out
    }
}

/// The change a yes-answer applies to the election.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Votes added (AV) or deleted (DV).
    Votes(VoteMultiset),
    /// Candidates added (AC) or deleted (DC), ascending.
    Candidates(Vec<CandidateId>),
}

impl Witness {
    pub fn size(&self) -> usize {
        match self {
            Witness::Votes(v) => v.len(),
            Witness::Candidates(c) => c.len(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Search nodes, count vectors or subsets examined.
    pub nodes: u64,
    pub elapsed: Duration,
    /// Some examined election had no more candidates than the approval width.
    pub width_clipped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub answer: bool,
    pub witness: Option<Witness>,
    pub stats: Stats,
}

impl Decision {
    pub fn yes(witness: Witness) -> Self {
        Decision {
            answer: true,
            witness: Some(witness),
            stats: Stats::default(),
        }
    }

    pub fn no() -> Self {
        Decision {
            answer: false,
            witness: None,
            stats: Stats::default(),
        }
    }

    pub(crate) fn with_nodes(mut self, nodes: u64, start: Instant) -> Self {
        self.stats.nodes = nodes;
        self.stats.elapsed = start.elapsed();
        self
    }
}

fn require_valid(violations: Vec<Violation>) -> Result<()> {
    match violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::Validation(v.to_string())),
    }
}

/// Distinct votes of a multiset with their total multiplicities, in first-seen order.
pub fn vote_types(votes: &VoteMultiset) -> Vec<(Vote, usize)> {
    votes.normalize().entries().to_vec()
}

/// Whether adding `added` to the registered votes makes `p` the unique winner
/// and `added` fits the budget and the unregistered pool.
pub fn verify_av(inst: &AvInstance, added: &VoteMultiset) -> bool {
    if added.len() > inst.budget || !added.is_submultiset_of(&inst.unregistered) {
        return false;
    }
    match inst.election.scores_with(added) {
        Ok(s) => unique_winner_of(&s) == Some(inst.election.distinguished()),
        Err(_) => false,
    }
}

pub fn verify_dv(inst: &DvInstance, deleted: &VoteMultiset) -> bool {
    let registered = inst.election.registered();
    if deleted.len() > inst.budget || !deleted.is_submultiset_of(registered) {
        return false;
    }
    let remaining = registered.minus(deleted);
    match crate::election::scores(inst.election.num_candidates(), &remaining, inst.election.r()) {
        Ok(s) => unique_winner_of(&s) == Some(inst.election.distinguished()),
        Err(_) => false,
    }
}

pub fn verify_ac(inst: &AcInstance, added: &[CandidateId]) -> bool {
    if added.len() > inst.budget {
        return false;
    }
    let mut present = inst.base_present();
    for &c in added {
        if !inst.spoilers.contains(&c) || present[c] {
            return false;
        }
        present[c] = true;
    }
    let (s, _) = restricted_scores(inst.election.registered(), inst.election.r(), &present);
    unique_winner_among(&s, &present) == Some(inst.election.distinguished())
}

pub fn verify_dc(inst: &DcInstance, deleted: &[CandidateId]) -> bool {
    let m = inst.election.num_candidates();
    if deleted.len() > inst.budget {
        return false;
    }
    let mut present = vec![true; m];
    for &c in deleted {
        if c >= m || c == inst.election.distinguished() || !present[c] {
            return false;
        }
        present[c] = false;
    }
    let (s, _) = restricted_scores(inst.election.registered(), inst.election.r(), &present);
    unique_winner_among(&s, &present) == Some(inst.election.distinguished())
}

/// Re-checks a decision's witness against the instance.
pub fn verify_witness(inst: &ControlInstance, witness: &Witness) -> bool {
    match (inst, witness) {
        (ControlInstance::Av(i), Witness::Votes(v)) => verify_av(i, v),
        (ControlInstance::Dv(i), Witness::Votes(v)) => verify_dv(i, v),
        (ControlInstance::Ac(i), Witness::Candidates(c)) => verify_ac(i, c),
        (ControlInstance::Dc(i), Witness::Candidates(c)) => verify_dc(i, c),
        _ => false,
    }
}

/// Depth-first search over count vectors `x` with `x[t] <= avail[t]` and
/// `sum(x) <= budget`, in lexicographic order. Each vote type `t` shifts the
/// scores by `sign * x[t]` on its approved candidates. Returns the first count
/// vector under which `p` is the unique winner.
struct CountSearch<'a> {
    approved: Vec<&'a [CandidateId]>,
    avail: Vec<usize>,
    adding: bool,
    p: CandidateId,
    nodes: u64,
}

impl CountSearch<'_> {
    fn run(&mut self, score: &mut [usize], budget: usize) -> Option<Vec<usize>> {
        let mut counts = vec![0; self.avail.len()];
        self.dfs(0, budget, score, &mut counts).then_some(counts)
    }

    fn dfs(&mut self, t: usize, left: usize, score: &mut [usize], counts: &mut [usize]) -> bool {
        self.nodes += 1;
        if t == self.avail.len() {
            return unique_winner_of(score) == Some(self.p);
        }
        let top = self.avail[t].min(left);
        for x in 0..=top {
            if x > 0 {
                for &c in self.approved[t] {
                    if self.adding {
                        score[c] += 1;
                    } else {
                        score[c] -= 1;
                    }
                }
            }
            counts[t] = x;
            if self.dfs(t + 1, left - x, score, counts) {
                return true;
            }
        }
        for &c in self.approved[t] {
            if self.adding {
                score[c] -= top;
            } else {
                score[c] += top;
            }
        }
        counts[t] = 0;
        false
    }
}

fn count_vector_search(
    election: &Election,
    pool: &VoteMultiset,
    budget: usize,
    adding: bool,
) -> Decision {
    let start = Instant::now();
    let r = election.r();
    let types = vote_types(pool);
    let mut search = CountSearch {
        approved: types.iter().map(|(v, _)| &v.order()[..r]).collect(),
        avail: types.iter().map(|&(_, n)| n).collect(),
        adding,
        p: election.distinguished(),
        nodes: 0,
    };
    let mut score = election.scores();
    match search.run(&mut score, budget) {
        Some(counts) => {
            let mut chosen = VoteMultiset::new();
            for ((vote, _), &x) in types.iter().zip(&counts) {
                chosen.push(vote.clone(), x);
            }
            Decision::yes(Witness::Votes(chosen)).with_nodes(search.nodes, start)
        }
        None => Decision::no().with_nodes(search.nodes, start),
    }
}

/// Exhaustive AV decision over count vectors of unregistered vote types.
pub fn brute_av(inst: &AvInstance) -> Result<Decision> {
    require_valid(inst.validate())?;
    Ok(count_vector_search(
        &inst.election,
        &inst.unregistered,
        inst.budget,
        true,
    ))
}

/// Exhaustive DV decision over count vectors of registered vote types.
pub fn brute_dv(inst: &DvInstance) -> Result<Decision> {
    require_valid(inst.validate())?;
    Ok(count_vector_search(
        &inst.election,
        inst.election.registered(),
        inst.budget,
        false,
    ))
}

/// Visits the subsets of `pool` with at most `budget` elements, by size and
/// then lexicographically, until `accept` returns true.
fn subsets_by_size<F: FnMut(&[CandidateId]) -> bool>(
    pool: &[CandidateId],
    budget: usize,
    mut accept: F,
) -> Option<Vec<CandidateId>> {
    (0..=budget.min(pool.len()))
        .flat_map(|size| pool.iter().copied().combinations(size))
        .find(|subset| accept(subset))
}

fn subset_search(
    election: &Election,
    base: Vec<bool>,
    pool: Vec<CandidateId>,
    budget: usize,
    adding: bool,
    cap: usize,
) -> Result<Decision> {
    if pool.len() > cap {
        return Err(Error::Capacity {
            what: "candidate pool",
            size: pool.len(),
            cap,
        });
    }
    let start = Instant::now();
    let votes = election.registered().normalize();
    let p = election.distinguished();
    let mut nodes = 0u64;
    let mut clipped = false;
    let found = subsets_by_size(&pool, budget, |subset| {
        nodes += 1;
        let mut present = base.clone();
        for &c in subset {
            present[c] = adding;
        }
        let (s, clip) = restricted_scores(&votes, election.r(), &present);
        clipped |= clip;
        unique_winner_among(&s, &present) == Some(p)
    });
    let mut decision = match found {
        Some(subset) => Decision::yes(Witness::Candidates(subset)),
        None => Decision::no(),
    }
    .with_nodes(nodes, start);
    decision.stats.width_clipped = clipped;
    Ok(decision)
}

/// Exhaustive AC decision over spoiler subsets; `cap` bounds the number of spoilers.
pub fn brute_ac(inst: &AcInstance, cap: usize) -> Result<Decision> {
    require_valid(inst.validate())?;
    let mut pool = inst.spoilers.clone();
    pool.sort_unstable();
    subset_search(&inst.election, inst.base_present(), pool, inst.budget, true, cap)
}

/// Exhaustive DC decision over subsets of the non-distinguished candidates.
pub fn brute_dc(inst: &DcInstance, cap: usize) -> Result<Decision> {
    require_valid(inst.validate())?;
    let p = inst.election.distinguished();
    let m = inst.election.num_candidates();
    let pool: Vec<CandidateId> = (0..m).filter(|&c| c != p).collect();
    subset_search(&inst.election, vec![true; m], pool, inst.budget, false, cap)
}

/// Runs the matching oracle for any instance.
pub fn brute(inst: &ControlInstance, cap: usize) -> Result<Decision> {
    match inst {
        ControlInstance::Av(i) => brute_av(i),
        ControlInstance::Dv(i) => brute_dv(i),
        ControlInstance::Ac(i) => brute_ac(i, cap),
        ControlInstance::Dc(i) => brute_dc(i, cap),
    }
}
