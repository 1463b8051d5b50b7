//! Algorithms for control by deleting and by adding votes that are
//! exponential only in the budget, for any election (no axis needed).

use std::collections::BTreeMap;
use std::time::Instant;

use crate::control::{AvInstance, Decision, DvInstance, Witness};
use crate::election::{unique_winner_of, CandidateId, Vote, VoteMultiset};
use crate::error::{Error, Result};
use crate::mrsp::{solve_mrsp, MrspInstance};

/// Deletion candidates grouped by which strong rivals of `p` they approve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DvTypeSpace {
    /// Rivals whose registered score is at least `p`'s, ascending.
    pub rivals: Vec<CandidateId>,
    /// Approved rivals (ascending, non-empty) mapped to the votes of that type,
    /// one entry per copy. Votes approving `p` are never listed.
    pub types: BTreeMap<Vec<CandidateId>, Vec<Vote>>,
}

pub fn dv_type_space(inst: &DvInstance) -> DvTypeSpace {
    let e = &inst.election;
    let (p, r) = (e.distinguished(), e.r());
    let score = e.scores();
    let rivals: Vec<CandidateId> = (0..e.num_candidates())
        .filter(|&c| c != p && score[c] >= score[p])
        .collect();
    let mut is_rival = vec![false; e.num_candidates()];
    for &c in &rivals {
        is_rival[c] = true;
    }
    let mut types: BTreeMap<Vec<CandidateId>, Vec<Vote>> = BTreeMap::new();
    for (vote, n) in e.registered().entries() {
        if vote.approves(p, r) {
            continue;
        }
        let mut key: Vec<CandidateId> = vote.order()[..r]
            .iter()
            .copied()
            .filter(|&c| is_rival[c])
            .collect();
        if key.is_empty() {
            continue;
        }
        key.sort_unstable();
        types
            .entry(key)
            .or_default()
            .extend(std::iter::repeat_n(vote.clone(), *n));
    }
    DvTypeSpace { rivals, types }
}

/// Decides control by deleting votes by enumerating how many votes of each
/// rival type to delete.
pub fn solve_dv_fpt(inst: &DvInstance) -> Result<Decision> {
    let start = Instant::now();
    let e = &inst.election;
    if e.registered().entries().iter().any(|(v, _)| v.num_candidates() != e.num_candidates()) {
        return Err(Error::InconsistentCandidates);
    }
    let budget = inst.budget;
    let space = dv_type_space(inst);
    if space.rivals.is_empty() {
        return Ok(Decision::yes(Witness::Votes(VoteMultiset::new())).with_nodes(1, start));
    }
    if space.rivals.len() > e.r() * budget {
        return Ok(Decision::no().with_nodes(1, start));
    }
    let score = e.scores();
    let p_score = score[e.distinguished()];
    // deletions still needed per rival, indexed like space.rivals
    let mut need: Vec<usize> = space.rivals.iter().map(|&c| score[c] - p_score + 1).collect();
    let types: Vec<(Vec<usize>, &Vec<Vote>)> = space
        .types
        .iter()
        .map(|(key, votes)| {
            let idx = key
                .iter()
                .map(|c| space.rivals.binary_search(c).expect("key holds rivals"))
                .collect();
            (idx, votes)
        })
        .collect();

    struct Dfs<'a> {
        types: &'a [(Vec<usize>, &'a Vec<Vote>)],
        counts: Vec<usize>,
        nodes: u64,
    }
    impl Dfs<'_> {
        fn go(&mut self, t: usize, left: usize, need: &mut [usize]) -> bool {
            self.nodes += 1;
            if need.iter().all(|&n| n == 0) {
                return true;
            }
            if t == self.types.len() || need.iter().any(|&n| n > left) {
                return false;
            }
            let (idx, votes) = &self.types[t];
            let top = votes.len().min(left);
            let mut applied = Vec::with_capacity(top);
            for x in 0..=top {
                if x > 0 {
                    let mut hit = Vec::new();
                    for &i in idx {
                        if need[i] > 0 {
                            need[i] -= 1;
                            hit.push(i);
                        }
                    }
                    applied.push(hit);
                }
                self.counts[t] = x;
                if self.go(t + 1, left - x, need) {
                    return true;
                }
            }
            for hit in applied {
                for i in hit {
                    need[i] += 1;
                }
            }
            self.counts[t] = 0;
            false
        }
    }

    let mut dfs = Dfs {
        types: &types,
        counts: vec![0; types.len()],
        nodes: 0,
    };
    if dfs.go(0, budget, &mut need) {
        let mut deleted = VoteMultiset::new();
        for ((_, votes), &x) in types.iter().zip(&dfs.counts) {
            for v in &votes[..x] {
                deleted.push(v.clone(), 1);
            }
        }
        Ok(Decision::yes(Witness::Votes(deleted.normalize())).with_nodes(dfs.nodes, start))
    } else {
        Ok(Decision::no().with_nodes(dfs.nodes, start))
    }
}

/// What remains of an adding-votes instance once the easy cases are settled:
/// pick exactly `budget` of `pool` (all approve `p`, none approves a
/// saturated rival) so that no rival reaches `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvResidual {
    pub pool: Vec<Vote>,
    pub budget: usize,
    pub scores: Vec<usize>,
    pub p: CandidateId,
    pub r: usize,
    /// Rivals with registered score at least `SC(p) + budget - 1`.
    pub saturated: Vec<CandidateId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AvPreprocess {
    Decided(Decision),
    Residual(AvResidual),
}

pub fn preprocess_av(inst: &AvInstance) -> Result<AvPreprocess> {
    let e = &inst.election;
    let (p, r, m) = (e.distinguished(), e.r(), e.num_candidates());
    let budget = inst.budget;
    let score = e.scores();
    let mut with_p = VoteMultiset::new();
    for (vote, n) in inst.unregistered.entries() {
        if vote.num_candidates() != m {
            return Err(Error::InconsistentCandidates);
        }
        if vote.approves(p, r) {
            with_p.push(vote.clone(), *n);
        }
    }
    if budget >= with_p.len() {
        let after = e.scores_with(&with_p)?;
        return Ok(AvPreprocess::Decided(if unique_winner_of(&after) == Some(p) {
            Decision::yes(Witness::Votes(with_p.normalize()))
        } else {
            Decision::no()
        }));
    }
    let ceiling = score[p] + budget;
    if (0..m).any(|c| c != p && score[c] >= ceiling) {
        return Ok(AvPreprocess::Decided(Decision::no()));
    }
    let saturated: Vec<CandidateId> = (0..m)
        .filter(|&c| c != p && score[c] + 1 >= ceiling)
        .collect();
    let mut pool = Vec::new();
    for (vote, n) in with_p.entries() {
        if vote.order()[..r].iter().any(|c| saturated.contains(c)) {
            continue;
        }
        pool.extend(std::iter::repeat_n(vote.clone(), *n));
    }
    if pool.len() < budget {
        return Ok(AvPreprocess::Decided(Decision::no()));
    }
    Ok(AvPreprocess::Residual(AvResidual {
        pool,
        budget,
        scores: score,
        p,
        r,
        saturated,
    }))
}

/// Packing instance whose size-`budget` packings are exactly the residual's
/// solutions, plus the vote behind each set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvMrspBridge {
    pub instance: MrspInstance,
    /// Candidate behind each packing element.
    pub elements: Vec<CandidateId>,
    /// Vote behind each set.
    pub votes: Vec<Vote>,
}

pub fn reduce_av_to_mrsp(res: &AvResidual) -> Result<AvMrspBridge> {
    let m = res.scores.len();
    let elements: Vec<CandidateId> = (0..m)
        .filter(|&c| c != res.p && !res.saturated.contains(&c))
        .collect();
    let mut index = vec![usize::MAX; m];
    for (i, &c) in elements.iter().enumerate() {
        index[c] = i;
    }
    let ceiling = res.scores[res.p] + res.budget;
    let capacity = elements
        .iter()
        .map(|&c| ceiling - res.scores[c] - 1)
        .collect();
    let mut sets = Vec::with_capacity(res.pool.len());
    for vote in &res.pool {
        let mut set = Vec::with_capacity(res.r - 1);
        for &c in &vote.order()[..res.r] {
            if c == res.p {
                continue;
            }
            if index[c] == usize::MAX {
                return Err(Error::Contract(format!(
                    "retained vote {:?} approves saturated candidate {c}",
                    vote.order()
                )));
            }
            set.push(index[c]);
        }
        sets.push(set);
    }
    let instance = MrspInstance::new(elements.len(), res.r - 1, capacity, sets, res.budget)?;
    Ok(AvMrspBridge {
        instance,
        elements,
        votes: res.pool.clone(),
    })
}

/// Decides control by adding votes through the packing reduction.
pub fn solve_av_fpt(inst: &AvInstance) -> Result<Decision> {
    let start = Instant::now();
    let res = match preprocess_av(inst)? {
        AvPreprocess::Decided(d) => return Ok(d.with_nodes(1, start)),
        AvPreprocess::Residual(res) => res,
    };
    let bridge = reduce_av_to_mrsp(&res)?;
    let out = solve_mrsp(&bridge.instance);
    let nodes = out.stats.nodes.max(1);
    Ok(match out.witness {
        Some(w) => {
            let added: VoteMultiset = w.iter().map(|&i| bridge.votes[i].clone()).collect();
            Decision::yes(Witness::Votes(added.normalize())).with_nodes(nodes, start)
        }
        None => Decision::no().with_nodes(nodes, start),
    })
}
