//! Polynomial-time decision procedure for control by adding votes in
//! 2-peaked elections with a constant approval width.
//!
//! Every useful added vote approves `p`. In a 2-peaked election each such vote
//! approves either one axis block containing `p` or a block containing `p`
//! plus one other block. One-block votes come in at most `r` types, so their
//! counts are guessed outright. Two-block votes are handled by a table over
//! votes sorted by the right end of their other block: a state remembers the
//! current maximum rival score, the scores of the `2(r-1)` candidates around
//! `p` and the scores of the `r-1` candidates ending where the last chosen
//! vote's other block ends. Any later vote only touches candidates in those
//! two windows or candidates nobody has touched yet.

use std::collections::HashMap;
use std::time::Instant;

use crate::control::{AvInstance, Decision, Witness};
use crate::election::{unique_winner_of, CandidateId, Vote, VoteMultiset};
use crate::error::{Error, Result};
use crate::peaked::{approved_blocks, Axis};

/// Largest approval width accepted by [`solve_av2`] unless overridden.
pub const DEFAULT_MAX_R: usize = 6;

const MISSING: u32 = u32::MAX;
const IN_S_WINDOW: u32 = u32::MAX - 1;

/// Votes whose top `r` contains `p`.
pub fn filter_p_approving(votes: &VoteMultiset, p: CandidateId, r: usize) -> VoteMultiset {
    let mut out = VoteMultiset::new();
    for (vote, n) in votes.entries() {
        if vote.approves(p, r) {
            out.push(vote.clone(), *n);
        }
    }
    out
}

/// Votes approving a single block of `r` axis-consecutive candidates around `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneBlockType {
    /// Axis index where the block starts.
    pub start: usize,
    /// Every vote of this type, one entry per copy.
    pub votes: Vec<Vote>,
}

/// A `p`-approving vote whose approved set splits into two axis blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoBlockVote {
    pub vote: Vote,
    /// Inclusive axis range of the block holding `p`.
    pub p_block: (usize, usize),
    pub other_block: (usize, usize),
}

/// Splits `p`-approving votes into one-block types (ordered by block start)
/// and two-block votes (one per copy, in input order).
pub fn split_one_block(
    votes: &VoteMultiset,
    p: CandidateId,
    r: usize,
    axis: &Axis,
) -> Result<(Vec<OneBlockType>, Vec<TwoBlockVote>)> {
    let pp = axis.index_of(p);
    let mut types: Vec<OneBlockType> = Vec::new();
    let mut two = Vec::new();
    for (vote, n) in votes.entries() {
        if !vote.approves(p, r) {
            return Err(Error::Contract(format!(
                "vote {:?} does not approve the distinguished candidate",
                vote.order()
            )));
        }
        let blocks = approved_blocks(vote, r, axis)?;
        match blocks.blocks() {
            &[(s, _)] => {
                let slot = match types.iter().position(|t| t.start == s) {
                    Some(i) => i,
                    None => {
                        types.push(OneBlockType {
                            start: s,
                            votes: Vec::new(),
                        });
                        types.len() - 1
                    }
                };
                types[slot].votes.extend(std::iter::repeat_n(vote.clone(), *n));
            }
            &[a, b] => {
                let (p_block, other_block) = if a.0 <= pp && pp <= a.1 { (a, b) } else { (b, a) };
                for _ in 0..*n {
                    two.push(TwoBlockVote {
                        vote: vote.clone(),
                        p_block,
                        other_block,
                    });
                }
            }
            other => {
                return Err(Error::Contract(format!(
                    "vote {:?} approves {} axis blocks; a 2-peaked vote has at most 2",
                    vote.order(),
                    other.len()
                )))
            }
        }
    }
    types.sort_by_key(|t| t.start);
    Ok((types, two))
}

/// One guess of how many one-block votes of each type get added.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SGuess {
    pub counts: Vec<usize>,
    /// Registered scores plus the guessed one-block votes.
    pub base: Vec<usize>,
    /// Number of guessed votes, each of which approves `p`.
    pub bonus: usize,
    pub budget_left: usize,
}

/// All count vectors over the one-block types with total at most `budget`
/// and each count within availability, in lexicographic order.
pub fn enumerate_s_guesses(
    types: &[OneBlockType],
    base: &[usize],
    r: usize,
    budget: usize,
) -> Vec<SGuess> {
    #[allow(clippy::too_many_arguments)]
    fn rec(
        t: usize,
        types: &[OneBlockType],
        r: usize,
        left: usize,
        counts: &mut Vec<usize>,
        base: &mut Vec<usize>,
        budget: usize,
        out: &mut Vec<SGuess>,
    ) {
        if t == types.len() {
            out.push(SGuess {
                counts: counts.clone(),
                base: base.clone(),
                bonus: budget - left,
                budget_left: left,
            });
            return;
        }
        let approved = &types[t].votes[0].order()[..r];
        let top = types[t].votes.len().min(left);
        for x in 0..=top {
            counts.push(x);
            rec(t + 1, types, r, left - x, counts, base, budget, out);
            counts.pop();
            for &c in approved {
                base[c] += 1;
            }
        }
        for &c in approved {
            base[c] -= top + 1;
        }
    }
    let mut out = Vec::new();
    rec(
        0,
        types,
        r,
        budget,
        &mut Vec::new(),
        &mut base.to_vec(),
        budget,
        &mut out,
    );
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    k: u32,
    s: Vec<u32>,
    /// Axis index of the last chosen vote's other-block right end.
    last_end: Option<usize>,
    t: Vec<u32>,
}

struct Node {
    state: State,
    vote: usize,
    pred: Option<usize>,
}

/// Result of filling the table for one guess.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DpOutcome {
    /// Indices into the sorted two-block list of an accepted selection (at least one vote).
    pub chosen: Option<Vec<usize>>,
    pub states: u64,
}

struct Windows<'a> {
    axis: &'a Axis,
    r: usize,
    pp: usize,
    base: &'a [usize],
}

impl Windows<'_> {
    /// Slot of axis index `x` in the s-window, if it lies there.
    fn s_slot(&self, x: usize) -> Option<usize> {
        let w = self.r - 1;
        if x < self.pp && self.pp - x <= w {
            Some(w - (self.pp - x))
        } else if x > self.pp && x - self.pp <= w {
            Some(w + (x - self.pp) - 1)
        } else {
            None
        }
    }

    fn initial_s(&self) -> Vec<u32> {
        let w = self.r - 1;
        let mut s = vec![MISSING; 2 * w];
        for (slot, v) in s.iter_mut().enumerate() {
            let x = if slot < w {
                self.pp.checked_sub(w - slot)
            } else {
                Some(self.pp + slot - w + 1).filter(|&x| x < self.axis.len())
            };
            if let Some(x) = x {
                *v = self.base[self.axis.at(x)] as u32;
            }
        }
        s
    }

    /// First axis index of the t-window ending at `end` (may be negative).
    fn t_start(&self, end: usize) -> isize {
        end as isize - (self.r as isize - 2)
    }

    fn current(&self, st: &State, x: usize) -> u32 {
        if let Some(slot) = self.s_slot(x) {
            return st.s[slot];
        }
        if let Some(e) = st.last_end {
            let off = x as isize - self.t_start(e);
            if off >= 0 && x <= e {
                let v = st.t[off as usize];
                debug_assert!(v != MISSING && v != IN_S_WINDOW);
                return v;
            }
        }
        self.base[self.axis.at(x)] as u32
    }

    fn apply(&self, st: &State, v: &TwoBlockVote) -> State {
        let mut s = st.s.clone();
        let mut k = st.k;
        let mut fresh: Vec<(usize, u32)> = Vec::with_capacity(self.r);
        for block in [v.p_block, v.other_block] {
            for x in block.0..=block.1 {
                if x == self.pp {
                    continue;
                }
                let score = self.current(st, x) + 1;
                k = k.max(score);
                match self.s_slot(x) {
                    Some(slot) => s[slot] = score,
                    None => fresh.push((x, score)),
                }
            }
        }
        let end = v.other_block.1;
        let t0 = self.t_start(end);
        let mut t = vec![MISSING; self.r - 1];
        for (off, slot) in t.iter_mut().enumerate() {
            let x = t0 + off as isize;
            if x < 0 {
                continue;
            }
            let x = x as usize;
            *slot = if x == self.pp || self.s_slot(x).is_some() {
                IN_S_WINDOW
            } else {
                fresh
                    .iter()
                    .find(|&&(y, _)| y == x)
                    .map_or_else(|| self.current(st, x), |&(_, sc)| sc)
            };
        }
        debug_assert!(fresh
            .iter()
            .all(|&(x, _)| (x as isize) >= t0 && x <= end));
        debug_assert!(k <= st.k + 1);
        State {
            k,
            s,
            last_end: Some(end),
            t,
        }
    }
}

/// Sorts two-block votes by the axis index of their other block's right end,
/// keeping input order among ties.
pub fn sort_two_block(votes: &mut [TwoBlockVote]) {
    votes.sort_by_key(|v| v.other_block.1);
}

/// Fills the table for one guess and scans it for an accepting entry. The
/// selection of no two-block vote is not considered here.
pub fn dp_fill(
    guess: &SGuess,
    votes: &[TwoBlockVote],
    p: CandidateId,
    r: usize,
    axis: &Axis,
) -> DpOutcome {
    let pp = axis.index_of(p);
    for v in votes {
        // every touched candidate must sit in one of the two windows
        assert!(
            v.p_block.0 + (r - 1) >= pp && v.p_block.1 <= pp + (r - 1),
            "p-block outside the s-window"
        );
        assert!(v.other_block.1 - v.other_block.0 < r - 1, "other block too long");
    }
    let win = Windows {
        axis,
        r,
        pp,
        base: &guess.base,
    };
    let budget = guess.budget_left;
    let p_score = guess.base[p] as u32;
    // p ends at p_score + j <= p_score + budget, so a rival at that level is hopeless
    let hopeless = p_score + budget as u32;
    let k0 = (0..axis.len())
        .filter(|&c| c != p)
        .map(|c| guess.base[c] as u32)
        .max()
        .unwrap_or(0);
    let mut out = DpOutcome::default();
    if budget == 0 || votes.is_empty() || k0 >= hopeless {
        return out;
    }
    let start = State {
        k: k0,
        s: win.initial_s(),
        last_end: None,
        t: Vec::new(),
    };
    let mut nodes: Vec<Node> = Vec::new();
    // reach[j]: states after choosing j votes, keyed for deduplication
    let mut reach: Vec<HashMap<State, usize>> = vec![HashMap::new(); budget + 1];
    let mut order: Vec<Vec<usize>> = vec![Vec::new(); budget + 1];

    for (i, v) in votes.iter().enumerate() {
        for j in (1..=budget.min(i + 1)).rev() {
            let preds: Vec<Option<usize>> = if j == 1 {
                vec![None]
            } else {
                order[j - 1].iter().map(|&id| Some(id)).collect()
            };
            for pred in preds {
                let prev = pred.map_or(&start, |id| &nodes[id].state);
                let next = win.apply(prev, v);
                if next.k >= hopeless || reach[j].contains_key(&next) {
                    continue;
                }
                let accepted = next.k < p_score + j as u32;
                let id = nodes.len();
                reach[j].insert(next.clone(), id);
                order[j].push(id);
                nodes.push(Node {
                    state: next,
                    vote: i,
                    pred,
                });
                if accepted {
                    let mut chosen = Vec::new();
                    let mut cur = Some(id);
                    while let Some(n) = cur {
                        chosen.push(nodes[n].vote);
                        cur = nodes[n].pred;
                    }
                    chosen.reverse();
                    out.chosen = Some(chosen);
                    out.states = nodes.len() as u64;
                    return out;
                }
            }
        }
    }
    out.states = nodes.len() as u64;
    out
}

/// Decides control by adding votes for an election declared 2-peaked (or
/// single-peaked) along its axis, with `r <= max_r`.
pub fn solve_av2(inst: &AvInstance, max_r: usize) -> Result<Decision> {
    let started = Instant::now();
    if inst.k > 2 {
        return Err(Error::OutOfScope(format!(
            "the dynamic program handles k <= 2 only, got k={}; control by adding votes is NP-hard for k >= 3",
            inst.k
        )));
    }
    let r = inst.election.r();
    if r > max_r {
        return Err(Error::OutOfScope(format!(
            "approval width r={r} exceeds the configured maximum {max_r}"
        )));
    }
    if let Some(v) = inst.validate().first() {
        return Err(Error::Validation(v.to_string()));
    }
    let p = inst.election.distinguished();
    let registered = inst.election.scores();
    let pool = filter_p_approving(&inst.unregistered, p, r);
    let (types, mut two) = split_one_block(&pool, p, r, &inst.axis)?;
    sort_two_block(&mut two);

    let mut nodes = 0u64;
    for guess in enumerate_s_guesses(&types, &registered, r, inst.budget) {
        nodes += 1;
        let chosen = if unique_winner_of(&guess.base) == Some(p) {
            Some(Vec::new())
        } else {
            let outcome = dp_fill(&guess, &two, p, r, &inst.axis);
            nodes += outcome.states;
            outcome.chosen
        };
        if let Some(chosen) = chosen {
            let mut added = VoteMultiset::new();
            for (t, &x) in types.iter().zip(&guess.counts) {
                for vote in &t.votes[..x] {
                    added.push(vote.clone(), 1);
                }
            }
            for i in chosen {
                added.push(two[i].vote.clone(), 1);
            }
            return Ok(Decision::yes(Witness::Votes(added.normalize())).with_nodes(nodes, started));
        }
    }
    Ok(Decision::no().with_nodes(nodes, started))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(order: &[usize]) -> Vote {
        Vote::new(order.to_vec(), order.len()).unwrap()
    }

    #[test]
    fn one_block_types_around_centered_p() {
        // axis 0..9, p = 4, r = 4
        let axis = Axis::identity(9);
        let votes: VoteMultiset = [
            v(&[1, 2, 3, 4, 0, 5, 6, 7, 8]),
            v(&[4, 3, 2, 5, 1, 0, 6, 7, 8]),
            v(&[5, 4, 3, 6, 2, 1, 0, 7, 8]),
            v(&[4, 5, 6, 7, 3, 8, 2, 1, 0]),
            v(&[4, 3, 2, 1, 0, 5, 6, 7, 8]),
        ]
        .into_iter()
        .collect();
        let (types, two) = split_one_block(&votes, 4, 4, &axis).unwrap();
        let starts: Vec<usize> = types.iter().map(|t| t.start).collect();
        assert_eq!(starts, vec![1, 2, 3, 4]);
        assert_eq!(types[0].votes.len(), 2);
        assert!(two.is_empty());
    }

    #[test]
    fn p_at_axis_end_has_one_type() {
        let axis = Axis::identity(5);
        let votes: VoteMultiset = [v(&[0, 1, 2, 3, 4]), v(&[1, 0, 2, 4, 3])].into_iter().collect();
        let (types, two) = split_one_block(&votes, 0, 3, &axis).unwrap();
        assert_eq!(types.len(), 1);
        assert_eq!(types[0].start, 0);
        assert!(two.is_empty());
    }

    #[test]
    fn two_block_split() {
        let axis = Axis::identity(8);
        // approves {2, 3, 6}: p-block (2,3) with p = 2, other block (6,6)
        let votes: VoteMultiset = [v(&[2, 3, 6, 5, 7, 4, 1, 0])].into_iter().collect();
        let (types, two) = split_one_block(&votes, 2, 3, &axis).unwrap();
        assert!(types.is_empty());
        assert_eq!(two[0].p_block, (2, 3));
        assert_eq!(two[0].other_block, (6, 6));
    }

    #[test]
    fn guess_count_is_stars_and_bars() {
        let abundant = |start| OneBlockType {
            start,
            votes: vec![v(&[0, 1, 2, 3, 4, 5, 6, 7]); 5],
        };
        let types: Vec<_> = (0..4).map(abundant).collect();
        let guesses = enumerate_s_guesses(&types, &[0; 8], 4, 2);
        assert_eq!(guesses.len(), 15);
        assert_eq!(enumerate_s_guesses(&[], &[0; 8], 4, 2).len(), 1);
        let scarce = vec![OneBlockType {
            start: 0,
            votes: vec![v(&[0, 1, 2, 3, 4, 5, 6, 7])],
        }];
        let guesses = enumerate_s_guesses(&scarce, &[0; 8], 4, 3);
        assert_eq!(guesses.len(), 2);
        assert_eq!(guesses[1].base[..5], [1, 1, 1, 1, 0]);
        assert_eq!(guesses[1].bonus, 1);
        assert_eq!(guesses[1].budget_left, 2);
    }

    #[test]
    fn window_slots() {
        let axis = Axis::identity(10);
        let base = vec![0; 10];
        let w = Windows {
            axis: &axis,
            r: 3,
            pp: 1,
            base: &base,
        };
        assert_eq!(w.s_slot(0), Some(1));
        assert_eq!(w.s_slot(1), None);
        assert_eq!(w.s_slot(2), Some(2));
        assert_eq!(w.s_slot(3), Some(3));
        assert_eq!(w.s_slot(4), None);
        assert_eq!(w.initial_s(), vec![MISSING, 0, 0, 0]);
    }
}
