//! Data model for r-approval elections with sincere ranked ballots.
//!
//! Every voter submits a full ranking of the candidates and approves its top
//! `r` entries. Candidates are dense ids `0..m`; names only matter when
//! reading or writing files.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CandidateId = usize;

/// A linear order over all candidates, most preferred first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vote {
    order: Vec<CandidateId>,
}

impl Vote {
    /// Builds a vote, checking that `order` is a permutation of `0..m`.
    pub fn new(order: Vec<CandidateId>, m: usize) -> Result<Self> {
        check_permutation(&order, m)?;
        Ok(Vote { order })
    }

    pub fn order(&self) -> &[CandidateId] {
        &self.order
    }

    pub fn num_candidates(&self) -> usize {
        self.order.len()
    }

    /// 1-based rank of `c`: one plus the number of candidates ranked above it.
    pub fn position(&self, c: CandidateId) -> Result<usize> {
        self.order
            .iter()
            .position(|&x| x == c)
            .map(|i| i + 1)
            .ok_or(Error::UnknownCandidate(c))
    }

    /// The top `r` candidates, in ballot order.
    pub fn approved(&self, r: usize) -> Result<&[CandidateId]> {
        let m = self.order.len();
        if r == 0 || r >= m {
            return Err(Error::WidthOutOfRange { r, m });
        }
        Ok(&self.order[..r])
    }

    pub fn approves(&self, c: CandidateId, r: usize) -> bool {
        self.order.iter().take(r).any(|&x| x == c)
    }

    /// The partial vote over `subset`, keeping the relative order of survivors.
    pub fn restrict(&self, subset: &[CandidateId]) -> Result<Vec<CandidateId>> {
        let m = self.order.len();
        let mut keep = vec![false; m];
        for &c in subset {
            if c >= m {
                return Err(Error::UnknownCandidate(c));
            }
            keep[c] = true;
        }
        Ok(restrict_by_mask(&self.order, &keep))
    }
}

/// Filters an order (full or partial) down to the candidates flagged in `keep`.
pub fn restrict_by_mask(order: &[CandidateId], keep: &[bool]) -> Vec<CandidateId> {
    order.iter().copied().filter(|&c| keep[c]).collect()
}

fn check_permutation(order: &[CandidateId], m: usize) -> Result<()> {
    if order.len() != m {
        return Err(Error::NotAPermutation {
            m,
            detail: format!("expected {m} entries, found {}", order.len()),
        });
    }
    let mut seen = vec![false; m];
    for &c in order {
        if c >= m {
            return Err(Error::NotAPermutation {
                m,
                detail: format!("candidate id {c} out of range"),
            });
        }
        if seen[c] {
            return Err(Error::NotAPermutation {
                m,
                detail: format!("candidate id {c} repeated"),
            });
        }
        seen[c] = true;
    }
    Ok(())
}

/// A multiset stored as `(object, multiplicity)` entries.
///
/// Entries are not merged on insertion, so the same object may occupy several
/// entries; every query works on total counts. Equality is multiset equality.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Multiset<T> {
    entries: Vec<(T, usize)>,
}

pub type VoteMultiset = Multiset<Vote>;

impl<T> Default for Multiset<T> {
    fn default() -> Self {
        Multiset {
            entries: Vec::new(),
        }
    }
}

impl<T: Clone + Eq> Multiset<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a multiset from individual elements, one entry per element.
    pub fn from_elements<I: IntoIterator<Item = T>>(items: I) -> Self {
        let mut ms = Self::new();
        for item in items {
            ms.push(item, 1);
        }
        ms
    }

    pub fn from_entries(entries: Vec<(T, usize)>) -> Self {
        let mut ms = Self::new();
        for (item, n) in entries {
            ms.push(item, n);
        }
        ms
    }

    /// Appends `n` copies of `item`; zero multiplicities are dropped.
    pub fn push(&mut self, item: T, n: usize) {
        if n > 0 {
            self.entries.push((item, n));
        }
    }

    pub fn entries(&self) -> &[(T, usize)] {
        &self.entries
    }

    /// Number of elements, counting multiplicity.
    pub fn len(&self) -> usize {
        self.entries.iter().map(|(_, n)| n).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Iterates over every element, repeating each object by its multiplicity.
    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries
            .iter()
            .flat_map(|(item, n)| std::iter::repeat_n(item, *n))
    }

    pub fn count(&self, item: &T) -> usize {
        self.entries
            .iter()
            .filter(|(x, _)| x == item)
            .map(|(_, n)| n)
            .sum()
    }

    /// Merges equal objects into a single entry, keeping first-occurrence order.
    pub fn normalize(&self) -> Self {
        let mut out: Vec<(T, usize)> = Vec::new();
        for (item, n) in &self.entries {
            match out.iter_mut().find(|(x, _)| x == item) {
                Some((_, total)) => *total += n,
                None => out.push((item.clone(), *n)),
            }
        }
        Multiset { entries: out }
    }

    /// `self ⊎ other`: multiplicities add up.
    pub fn union(&self, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Multiset { entries }
    }

    /// `self ⊖ other`: each object keeps `max(0, n_self − n_other)` copies.
    pub fn minus(&self, other: &Self) -> Self {
        let mut out = Multiset::new();
        for (item, n) in self.normalize().entries {
            let removed = other.count(&item);
            out.push(item, n.saturating_sub(removed));
        }
        out
    }

    /// True when every object occurs in `other` at least as often as in `self`.
    pub fn is_submultiset_of(&self, other: &Self) -> bool {
        self.normalize()
            .entries
            .iter()
            .all(|(item, n)| other.count(item) >= *n)
    }
}

impl<T: Clone + Eq> PartialEq for Multiset<T> {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.is_submultiset_of(other)
    }
}

impl<T: Clone + Eq> Eq for Multiset<T> {}

impl<T: Clone + Eq> FromIterator<T> for Multiset<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Self::from_elements(iter)
    }
}

/// Per-candidate approval counts: `score[c]` is the number of votes ranking
/// `c` among their top `r`.
pub fn scores(m: usize, votes: &VoteMultiset, r: usize) -> Result<Vec<usize>> {
    if r == 0 || r >= m {
        return Err(Error::WidthOutOfRange { r, m });
    }
    let mut score = vec![0usize; m];
    for (vote, n) in votes.entries() {
        if vote.num_candidates() != m {
            return Err(Error::InconsistentCandidates);
        }
        for &c in &vote.order()[..r] {
            score[c] += n;
        }
    }
    Ok(score)
}

/// The candidate with a strictly larger score than every other, if any.
pub fn unique_winner_of(score: &[usize]) -> Option<CandidateId> {
    let (best, &top) = score.iter().enumerate().max_by_key(|&(_, s)| s)?;
    let ties = score.iter().filter(|&&s| s == top).count();
    (ties == 1).then_some(best)
}

pub fn unique_winner(m: usize, votes: &VoteMultiset, r: usize) -> Result<Option<CandidateId>> {
    Ok(unique_winner_of(&scores(m, votes, r)?))
}

/// Scores after restricting every vote to the candidates flagged in `present`.
///
/// A restricted vote approves its top `min(r, m')` entries, `m'` being the
/// number of surviving candidates. The flag is set when that clipping kicked in.
pub fn restricted_scores(votes: &VoteMultiset, r: usize, present: &[bool]) -> (Vec<usize>, bool) {
    let survivors = present.iter().filter(|&&b| b).count();
    let width = r.min(survivors);
    let mut score = vec![0usize; present.len()];
    for (vote, n) in votes.entries() {
        let mut taken = 0;
        for &c in vote.order() {
            if taken == width {
                break;
            }
            if present[c] {
                score[c] += n;
                taken += 1;
            }
        }
    }
    (score, r >= survivors)
}

/// Unique winner among the candidates flagged in `present`.
pub fn unique_winner_among(score: &[usize], present: &[bool]) -> Option<CandidateId> {
    let mut best: Option<(CandidateId, usize)> = None;
    let mut tied = false;
    for (c, &s) in score.iter().enumerate() {
        if !present[c] {
            continue;
        }
        match best {
            Some((_, b)) if s < b => {}
            Some((_, b)) if s == b => tied = true,
            _ => {
                best = Some((c, s));
                tied = false;
            }
        }
    }
    match best {
        Some((c, _)) if !tied => Some(c),
        _ => None,
    }
}

/// An r-approval election: named candidates, a distinguished candidate `p`,
/// the approval width and the registered votes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Election {
    names: Vec<String>,
    distinguished: CandidateId,
    r: usize,
    registered: VoteMultiset,
}

impl Election {
    pub fn new(
        names: Vec<String>,
        distinguished: CandidateId,
        r: usize,
        registered: VoteMultiset,
    ) -> Result<Self> {
        let m = names.len();
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "duplicate candidate name `{name}`"
                )));
            }
        }
        if distinguished >= m {
            return Err(Error::UnknownCandidate(distinguished));
        }
        if r == 0 || r >= m {
            return Err(Error::WidthOutOfRange { r, m });
        }
        for (vote, _) in registered.entries() {
            if vote.num_candidates() != m {
                return Err(Error::InconsistentCandidates);
            }
        }
        Ok(Election {
            names,
            distinguished,
            r,
            registered,
        })
    }

    /// Candidates named `c0, c1, ...`.
    pub fn with_default_names(
        m: usize,
        distinguished: CandidateId,
        r: usize,
        registered: VoteMultiset,
    ) -> Result<Self> {
        let names = (0..m).map(|i| format!("c{i}")).collect();
        Self::new(names, distinguished, r, registered)
    }

    pub fn num_candidates(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, c: CandidateId) -> &str {
        &self.names[c]
    }

    pub fn id_of(&self, name: &str) -> Option<CandidateId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn distinguished(&self) -> CandidateId {
        self.distinguished
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn registered(&self) -> &VoteMultiset {
        &self.registered
    }

    pub fn scores(&self) -> Vec<usize> {
        scores(self.num_candidates(), &self.registered, self.r)
            .expect("election invariants guarantee consistent votes")
    }

    /// Scores of the registered votes combined with `extra`.
    pub fn scores_with(&self, extra: &VoteMultiset) -> Result<Vec<usize>> {
        scores(
            self.num_candidates(),
            &self.registered.union(extra),
            self.r,
        )
    }

    pub fn unique_winner(&self) -> Option<CandidateId> {
        unique_winner_of(&self.scores())
    }

    /// Same candidates and width, different registered votes.
    pub fn with_registered(&self, registered: VoteMultiset) -> Result<Self> {
        Self::new(self.names.clone(), self.distinguished, self.r, registered)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(order: &[usize]) -> Vote {
        Vote::new(order.to_vec(), order.len()).unwrap()
    }

    // a=0, b=1, c=2; u: a>b>c, v: a>c>b, w: c>a>b
    fn three_voter_example() -> VoteMultiset {
        Multiset::from_elements([v(&[0, 1, 2]), v(&[0, 2, 1]), v(&[2, 0, 1])])
    }

    #[test]
    fn positions() {
        assert_eq!(v(&[0, 1, 2]).position(0).unwrap(), 1);
        assert_eq!(v(&[0, 1, 2, 3, 4]).position(3).unwrap(), 4);
        // (c3, c4, c7, c6, c8, c9, c5, c2, c10, c1) with c_i -> i-1
        let fig = v(&[2, 3, 6, 5, 7, 8, 4, 1, 9, 0]);
        assert_eq!(fig.position(6).unwrap(), 3);
        assert_eq!(
            v(&[0, 1, 2]).position(7),
            Err(Error::UnknownCandidate(7))
        );
    }

    #[test]
    fn approved_sets() {
        assert_eq!(v(&[0, 1, 2]).approved(2).unwrap(), &[0, 1]);
        assert_eq!(v(&[0, 1, 2]).approved(1).unwrap(), &[0]);
        let fig = v(&[2, 3, 6, 5, 7, 8, 4, 1, 9, 0]);
        let mut top: Vec<_> = fig.approved(4).unwrap().to_vec();
        top.sort();
        assert_eq!(top, vec![2, 3, 5, 6]);
        assert!(matches!(
            v(&[0, 1, 2]).approved(3),
            Err(Error::WidthOutOfRange { r: 3, m: 3 })
        ));
        assert!(v(&[0, 1, 2]).approved(0).is_err());
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(Vote::new(vec![0, 0, 1], 3).is_err());
        assert!(Vote::new(vec![0, 1], 3).is_err());
        assert!(Vote::new(vec![0, 1, 5], 3).is_err());
    }

    #[test]
    fn three_voter_scores_and_winner() {
        let votes = three_voter_example();
        assert_eq!(scores(3, &votes, 2).unwrap(), vec![3, 1, 2]);
        assert_eq!(unique_winner(3, &votes, 2).unwrap(), Some(0));
        assert_eq!(scores(3, &Multiset::new(), 2).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn winner_ties() {
        let two_same = Multiset::from_entries(vec![(v(&[0, 1]), 2)]);
        assert_eq!(unique_winner(2, &two_same, 1).unwrap(), Some(0));
        let tie = Multiset::from_elements([v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(unique_winner(2, &tie, 1).unwrap(), None);
    }

    #[test]
    fn inconsistent_votes_rejected() {
        let mixed = Multiset::from_elements([v(&[0, 1, 2]), v(&[0, 1])]);
        assert_eq!(scores(3, &mixed, 1), Err(Error::InconsistentCandidates));
    }

    #[test]
    fn restriction() {
        let vote = v(&[0, 1, 2, 3, 4]);
        assert_eq!(vote.restrict(&[1, 3, 4]).unwrap(), vec![1, 3, 4]);
        assert_eq!(vote.restrict(&[4, 3, 2, 1, 0]).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(vote.restrict(&[]).unwrap(), Vec::<usize>::new());
        assert!(vote.restrict(&[9]).is_err());
    }

    #[test]
    fn multiset_algebra_example() {
        let a: Multiset<u32> = [1, 1, 1, 2, 3, 3, 4].into_iter().collect();
        let b: Multiset<u32> = [1, 2, 3].into_iter().collect();
        assert_eq!(a.len(), 7);
        assert_eq!(b.len(), 3);
        let minus: Multiset<u32> = [1, 1, 3, 4].into_iter().collect();
        assert_eq!(a.minus(&b), minus);
        let union: Multiset<u32> = [1, 1, 1, 1, 2, 2, 3, 3, 3, 4].into_iter().collect();
        assert_eq!(a.union(&b), union);
        assert!(b.is_submultiset_of(&a));
        assert!(!a.is_submultiset_of(&b));
    }

    #[test]
    fn clipped_restricted_scores() {
        let votes = Multiset::from_elements([v(&[0, 1, 2, 3])]);
        let present = [true, false, true, false];
        let (score, clipped) = restricted_scores(&votes, 3, &present);
        assert_eq!(score, vec![1, 0, 1, 0]);
        assert!(clipped);
        let (score, clipped) = restricted_scores(&votes, 1, &[false, true, true, true]);
        assert_eq!(score, vec![0, 1, 0, 0]);
        assert!(!clipped);
        assert_eq!(unique_winner_among(&score, &[false, true, true, true]), Some(1));
    }

    #[test]
    fn election_rejects_bad_width() {
        assert!(Election::with_default_names(3, 0, 3, Multiset::new()).is_err());
        assert!(Election::with_default_names(3, 3, 1, Multiset::new()).is_err());
        assert!(Election::new(vec!["a".into(), "a".into()], 0, 1, Multiset::new()).is_err());
    }
}
