//! Single-peaked and k-peaked structure of votes with respect to an axis.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::election::{CandidateId, Vote};
use crate::error::{Error, Result};

/// A left-to-right ordering of all candidates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Axis {
    order: Vec<CandidateId>,
    #[serde(skip)]
    pos: Vec<usize>,
}

impl Axis {
    pub fn new(order: Vec<CandidateId>) -> Result<Self> {
        let m = order.len();
        let mut pos = vec![usize::MAX; m];
        for (i, &c) in order.iter().enumerate() {
            if c >= m || pos[c] != usize::MAX {
                return Err(Error::NotAPermutation {
                    m,
                    detail: format!("axis entry {c} out of range or repeated"),
                });
            }
            pos[c] = i;
        }
        Ok(Axis { order, pos })
    }

    /// The axis `0, 1, ..., m-1`.
    pub fn identity(m: usize) -> Self {
        Axis::new((0..m).collect()).expect("identity is a permutation")
    }

    pub fn order(&self) -> &[CandidateId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Index of `c` along the axis.
    pub fn index_of(&self, c: CandidateId) -> usize {
        self.pos[c]
    }

    pub fn at(&self, index: usize) -> CandidateId {
        self.order[index]
    }

    /// The candidate `steps` places before `c`, if the axis reaches that far.
    pub fn left(&self, c: CandidateId, steps: usize) -> Option<CandidateId> {
        self.pos[c].checked_sub(steps).map(|i| self.order[i])
    }

    /// The candidate `steps` places after `c`, if the axis reaches that far.
    pub fn right(&self, c: CandidateId, steps: usize) -> Option<CandidateId> {
        self.order.get(self.pos[c] + steps).copied()
    }

    /// Axis indices of the candidates of `vote`, in ballot order.
    fn vote_indices(&self, order: &[CandidateId]) -> Vec<usize> {
        order.iter().map(|&c| self.pos[c]).collect()
    }

    fn check_vote(&self, vote: &Vote) -> Result<()> {
        if vote.num_candidates() != self.len() {
            return Err(Error::InconsistentCandidates);
        }
        Ok(())
    }
}

/// Disjoint maximal blocks of consecutive axis indices, inclusive and sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiscreteIntervalSet {
    blocks: Vec<(usize, usize)>,
}

impl DiscreteIntervalSet {
    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// All candidates covered by the blocks, in axis order.
    pub fn candidates(&self, axis: &Axis) -> Vec<CandidateId> {
        self.blocks
            .iter()
            .flat_map(|&(s, e)| (s..=e).map(|i| axis.at(i)))
            .collect()
    }
}

/// Segmentation of the axis into contiguous single-peaked pieces.
///
/// `cuts` holds the axis index at which each segment after the first starts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeakWitness {
    pub cuts: Vec<usize>,
}

impl PeakWitness {
    pub fn num_segments(&self) -> usize {
        self.cuts.len() + 1
    }

    /// Inclusive `(start, end)` axis ranges of the segments for an axis of length `m`.
    pub fn segments(&self, m: usize) -> Vec<(usize, usize)> {
        let mut starts = vec![0];
        starts.extend(self.cuts.iter().copied());
        let mut out = Vec::with_capacity(starts.len());
        for (i, &s) in starts.iter().enumerate() {
            let e = starts.get(i + 1).map_or(m, |&n| n) - 1;
            out.push((s, e));
        }
        out
    }
}

/// Checks single-peakedness of a sequence of dense ranks `0..len`: each next
/// rank must extend the window of already-seen ranks by one on either side.
fn ranks_single_peaked<I: Iterator<Item = usize>>(mut ranks: I) -> bool {
    let Some(first) = ranks.next() else {
        return true;
    };
    let (mut lo, mut hi) = (first, first);
    for x in ranks {
        if lo > 0 && x == lo - 1 {
            lo -= 1;
        } else if x == hi + 1 {
            hi += 1;
        } else {
            return false;
        }
    }
    true
}

/// Whether the vote, restricted to axis indices `start..=end`, is single-peaked
/// on that segment. `indices` are the axis indices of the vote in ballot order.
fn segment_single_peaked(indices: &[usize], start: usize, end: usize) -> bool {
    ranks_single_peaked(
        indices
            .iter()
            .filter(|&&i| i >= start && i <= end)
            .map(|&i| i - start),
    )
}

pub fn is_single_peaked(vote: &Vote, axis: &Axis) -> Result<bool> {
    axis.check_vote(vote)?;
    Ok(ranks_single_peaked(
        vote.order().iter().map(|&c| axis.index_of(c)),
    ))
}

/// Single-peakedness of a (possibly partial) order against an axis given as a
/// sequence over the same candidate set.
pub fn is_single_peaked_order(order: &[CandidateId], axis_order: &[CandidateId]) -> Result<bool> {
    if order.len() != axis_order.len() {
        return Err(Error::InconsistentCandidates);
    }
    let bound = axis_order.iter().copied().max().map_or(0, |c| c + 1);
    let mut rank = vec![usize::MAX; bound];
    for (i, &c) in axis_order.iter().enumerate() {
        rank[c] = i;
    }
    let mut ranks = Vec::with_capacity(order.len());
    for &c in order {
        match rank.get(c) {
            Some(&r) if r != usize::MAX => ranks.push(r),
            _ => return Err(Error::InconsistentCandidates),
        }
    }
    let mut sorted = ranks.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != ranks.len() {
        return Err(Error::InconsistentCandidates);
    }
    Ok(ranks_single_peaked(ranks.into_iter()))
}

/// Fewest segments into which the axis splits so that every segment induces a
/// single-peaked restriction, with the witnessing cuts.
///
/// Greedy: each segment is extended as far as it stays single-peaked. Feasible
/// segments are closed under shrinking, so the greedy count is minimal.
pub fn min_peaks_witness(vote: &Vote, axis: &Axis) -> Result<PeakWitness> {
    axis.check_vote(vote)?;
    let m = axis.len();
    let indices = axis.vote_indices(vote.order());
    let mut cuts = Vec::new();
    let mut start = 0;
    while start < m {
        let mut end = start;
        while end + 1 < m && segment_single_peaked(&indices, start, end + 1) {
            end += 1;
        }
        if end + 1 < m {
            cuts.push(end + 1);
        }
        start = end + 1;
    }
    Ok(PeakWitness { cuts })
}

pub fn min_peaks(vote: &Vote, axis: &Axis) -> Result<usize> {
    Ok(min_peaks_witness(vote, axis)?.num_segments().max(1))
}

/// Largest meaningful peak bound for `m` candidates: `⌈m/2⌉` (at least 1).
pub fn max_peak_bound(m: usize) -> usize {
    m.div_ceil(2).max(1)
}

/// A witness that `vote` is k-peaked along `axis`, or `None`.
pub fn is_k_peaked(vote: &Vote, axis: &Axis, k: usize) -> Result<Option<PeakWitness>> {
    let max = max_peak_bound(axis.len());
    if k == 0 || k > max {
        return Err(Error::PeakBoundOutOfRange { k, max });
    }
    let witness = min_peaks_witness(vote, axis)?;
    Ok((witness.num_segments() <= k).then_some(witness))
}

/// Maximal axis blocks covering the top-`r` candidates of `vote`.
pub fn approved_blocks(vote: &Vote, r: usize, axis: &Axis) -> Result<DiscreteIntervalSet> {
    axis.check_vote(vote)?;
    let top = vote.approved(r)?;
    let mut marked = vec![false; axis.len()];
    for &c in top {
        marked[axis.index_of(c)] = true;
    }
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < marked.len() {
        if marked[i] {
            let s = i;
            while i + 1 < marked.len() && marked[i + 1] {
                i += 1;
            }
            blocks.push((s, i));
        }
        i += 1;
    }
    Ok(DiscreteIntervalSet { blocks })
}

/// A random vote that is k-peaked along `axis`.
///
/// The axis is cut into `k` random non-empty segments; each segment gets a
/// random single-peaked order (random peak, then random left/right growth) and
/// the segment orders are interleaved uniformly at random.
pub fn gen_random_k_peaked<R: Rng + ?Sized>(axis: &Axis, k: usize, rng: &mut R) -> Result<Vote> {
    let m = axis.len();
    let max = max_peak_bound(m);
    if k == 0 || k > max || m == 0 {
        return Err(Error::PeakBoundOutOfRange { k, max });
    }
    let mut cuts: Vec<usize> = if k > 1 {
        sample(rng, m - 1, k - 1).into_iter().map(|i| i + 1).collect()
    } else {
        Vec::new()
    };
    cuts.sort_unstable();
    let witness = PeakWitness { cuts };

    let mut pieces: Vec<Vec<usize>> = Vec::with_capacity(k);
    for (s, e) in witness.segments(m) {
        let peak = rng.gen_range(s..=e);
        let (mut lo, mut hi) = (peak, peak);
        let mut seq = vec![peak];
        while lo > s || hi < e {
            let go_left = if lo == s {
                false
            } else if hi == e {
                true
            } else {
                rng.gen_bool(0.5)
            };
            if go_left {
                lo -= 1;
                seq.push(lo);
            } else {
                hi += 1;
                seq.push(hi);
            }
        }
        seq.reverse();
        pieces.push(seq);
    }

    let mut order = Vec::with_capacity(m);
    let mut remaining = m;
    while remaining > 0 {
        let mut pick = rng.gen_range(0..remaining);
        for piece in pieces.iter_mut() {
            if pick < piece.len() {
                let idx = piece.pop().expect("non-empty piece");
                order.push(axis.at(idx));
                break;
            }
            pick -= piece.len();
        }
        remaining -= 1;
    }
    Vote::new(order, m)
}

pub fn gen_random_k_peaked_seeded(axis: &Axis, k: usize, seed: u64) -> Result<Vote> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_random_k_peaked(axis, k, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(order: &[usize]) -> Vote {
        Vote::new(order.to_vec(), order.len()).unwrap()
    }

    /// Definitional check over every axis triple.
    fn triple_check(vote: &Vote, axis: &Axis) -> bool {
        let m = axis.len();
        let rank = |c: usize| vote.position(c).unwrap();
        for i in 0..m {
            for j in i + 1..m {
                for l in j + 1..m {
                    let (a, b, c) = (axis.at(i), axis.at(j), axis.at(l));
                    if rank(c) < rank(b) && rank(a) < rank(b) {
                        return false;
                    }
                    if rank(a) < rank(b) && rank(c) < rank(b) {
                        return false;
                    }
                }
            }
        }
        true
    }

    // c_i -> i-1
    fn fig2_vote() -> Vote {
        v(&[2, 3, 6, 5, 7, 8, 4, 1, 9, 0])
    }

    #[test]
    fn three_vote_single_peaked_example() {
        // a=0 b=1 c=2 d=3 e=4, axis (a, c, b, d, e)
        let axis = Axis::new(vec![0, 2, 1, 3, 4]).unwrap();
        for vote in [v(&[1, 3, 4, 2, 0]), v(&[3, 1, 2, 0, 4]), v(&[0, 2, 1, 3, 4])] {
            assert!(is_single_peaked(&vote, &axis).unwrap());
        }
    }

    #[test]
    fn small_single_peaked_cases() {
        assert!(is_single_peaked(&v(&[0]), &Axis::identity(1)).unwrap());
        // (a, c, b) on axis (a, b, c)
        let vote = v(&[0, 2, 1]);
        assert!(!is_single_peaked(&vote, &Axis::identity(3)).unwrap());
        assert!(!triple_check(&vote, &Axis::identity(3)));
    }

    #[test]
    fn fig2_is_two_peaked() {
        let axis = Axis::identity(10);
        let w = is_k_peaked(&fig2_vote(), &axis, 2).unwrap().unwrap();
        assert_eq!(w.cuts, vec![5]);
        assert_eq!(w.segments(10), vec![(0, 4), (5, 9)]);
        assert_eq!(is_k_peaked(&fig2_vote(), &axis, 1).unwrap(), None);
        assert_eq!(min_peaks(&fig2_vote(), &axis).unwrap(), 2);
    }

    #[test]
    fn k_bound_checked() {
        let axis = Axis::identity(4);
        assert!(is_k_peaked(&v(&[0, 1, 2, 3]), &axis, 0).is_err());
        assert!(is_k_peaked(&v(&[0, 1, 2, 3]), &axis, 3).is_err());
        assert!(is_k_peaked(&v(&[3, 0, 2, 1]), &axis, 2).unwrap().is_some());
    }

    #[test]
    fn fig3_blocks() {
        let axis = Axis::identity(10);
        let blocks = approved_blocks(&fig2_vote(), 4, &axis).unwrap();
        assert_eq!(blocks.blocks(), &[(2, 3), (5, 6)]);
        // pi_u = (c7, c6, c5, c8, c9, c10, c1, c4, c3, c2)
        let u = v(&[6, 5, 4, 7, 8, 9, 0, 3, 2, 1]);
        assert_eq!(approved_blocks(&u, 4, &axis).unwrap().blocks(), &[(4, 7)]);
    }

    #[test]
    fn all_but_one_block() {
        let axis = Axis::identity(5);
        let b = approved_blocks(&v(&[0, 1, 3, 4, 2]), 4, &axis).unwrap();
        assert_eq!(b.blocks(), &[(0, 1), (3, 4)]);
        let b = approved_blocks(&v(&[1, 2, 3, 4, 0]), 4, &axis).unwrap();
        assert_eq!(b.blocks(), &[(1, 4)]);
    }

    #[test]
    fn linear_check_matches_triples_exhaustively() {
        for m in 1..=7usize {
            let axis = Axis::identity(m);
            let mut perm: Vec<usize> = (0..m).collect();
            for_each_permutation(&mut perm, 0, &mut |p| {
                let vote = v(p);
                assert_eq!(
                    is_single_peaked(&vote, &axis).unwrap(),
                    triple_check(&vote, &axis),
                    "{p:?}"
                );
            });
        }
    }

    /// Smallest number of parts over every composition of the axis.
    fn brute_min_peaks(vote: &Vote, axis: &Axis) -> usize {
        let m = axis.len();
        let mut best = usize::MAX;
        for mask in 0u32..(1 << (m - 1)) {
            let mut starts = vec![0];
            for i in 1..m {
                if mask & (1 << (i - 1)) != 0 {
                    starts.push(i);
                }
            }
            starts.push(m);
            let ok = starts.windows(2).all(|w| {
                let seg: Vec<usize> = axis.order()[w[0]..w[1]].to_vec();
                let restricted = vote.restrict(&seg).unwrap();
                is_single_peaked_order(&restricted, &seg).unwrap()
            });
            if ok {
                best = best.min(starts.len() - 1);
            }
        }
        best
    }

    #[test]
    fn greedy_min_peaks_matches_brute_force() {
        for m in 1..=6usize {
            let axis = Axis::identity(m);
            let mut perm: Vec<usize> = (0..m).collect();
            for_each_permutation(&mut perm, 0, &mut |p| {
                let vote = v(p);
                assert_eq!(min_peaks(&vote, &axis).unwrap(), brute_min_peaks(&vote, &axis));
            });
        }
    }

    #[test]
    fn generator_respects_bound_and_seed() {
        let axis = Axis::new(vec![3, 1, 4, 0, 5, 2, 7, 6]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let vote = gen_random_k_peaked(&axis, 2, &mut rng).unwrap();
            assert!(is_k_peaked(&vote, &axis, 2).unwrap().is_some());
        }
        for seed in 0..50 {
            let vote = gen_random_k_peaked_seeded(&axis, 1, seed).unwrap();
            assert!(is_single_peaked(&vote, &axis).unwrap());
        }
        assert_eq!(
            gen_random_k_peaked_seeded(&axis, 3, 5).unwrap(),
            gen_random_k_peaked_seeded(&axis, 3, 5).unwrap()
        );
        assert!(gen_random_k_peaked_seeded(&axis, 5, 0).is_err());
    }

    #[test]
    fn arrows() {
        // axis (a..h), d = 3
        let axis = Axis::identity(8);
        assert_eq!(axis.right(3, 1), Some(4));
        assert_eq!(axis.right(3, 4), Some(7));
        assert_eq!(axis.left(3, 1), Some(2));
        assert_eq!(axis.left(3, 3), Some(0));
        assert_eq!(axis.left(3, 4), None);
        assert_eq!(axis.right(3, 5), None);
    }

    pub(crate) fn for_each_permutation(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            for_each_permutation(p, k + 1, f);
            p.swap(k, i);
        }
    }
}
