//! Multi-r-Set Packing: choose exactly `target` sets from a multiset of
//! `r`-sets so that every element `c` lies in at most `capacity[c]` of them.
//!
//! The search follows the classic partial-set branching for set packing. A
//! maximal packing `T0` either already has `target` sets, or every solution
//! set meets the elements of `T0`; seeds fix one such element per solution
//! slot, and each search node greedily completes the partial sets before
//! branching on one more fixed element for a stuck partial set.

use std::collections::HashSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default limit on `|V|` for [`brute_mrsp`].
pub const DEFAULT_BRUTE_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MrspInstance {
    universe: usize,
    r: usize,
    capacity: Vec<usize>,
    sets: Vec<Vec<usize>>,
    target: usize,
}

impl MrspInstance {
    /// Elements are `0..universe`; every set is stored sorted.
    pub fn new(
        universe: usize,
        r: usize,
        capacity: Vec<usize>,
        sets: Vec<Vec<usize>>,
        target: usize,
    ) -> Result<Self> {
        if capacity.len() != universe {
            return Err(Error::InvalidInput(format!(
                "{} capacities given for a universe of {universe}",
                capacity.len()
            )));
        }
        if let Some(c) = capacity.iter().position(|&f| f == 0) {
            return Err(Error::InvalidInput(format!("element {c} has capacity 0")));
        }
        let mut sorted = Vec::with_capacity(sets.len());
        for (i, mut s) in sets.into_iter().enumerate() {
            s.sort_unstable();
            let distinct = s.windows(2).all(|w| w[0] != w[1]);
            if s.len() != r || !distinct || s.iter().any(|&c| c >= universe) {
                return Err(Error::InvalidInput(format!(
                    "set #{i} {s:?} is not an {r}-subset of 0..{universe}"
                )));
            }
            sorted.push(s);
        }
        Ok(MrspInstance {
            universe,
            r,
            capacity,
            sets: sorted,
            target,
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn capacity(&self) -> &[usize] {
        &self.capacity
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Set indices sorted by contents, ties by index.
    fn canonical_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.sets.len()).collect();
        idx.sort_by(|&a, &b| self.sets[a].cmp(&self.sets[b]).then(a.cmp(&b)));
        idx
    }
}

/// Whether every element occurs in at most its capacity of the given (partial) sets.
pub fn is_valid_packing<S: AsRef<[usize]>>(inst: &MrspInstance, sets: &[S]) -> bool {
    let mut count = vec![0usize; inst.universe];
    for s in sets {
        for &c in s.as_ref() {
            if c >= inst.universe {
                return false;
            }
            count[c] += 1;
            if count[c] > inst.capacity[c] {
                return false;
            }
        }
    }
    true
}

/// Greedy maximal packing over the canonical set order; returns set indices.
pub fn greedy_maximal_packing(inst: &MrspInstance) -> Vec<usize> {
    let mut count = vec![0usize; inst.universe];
    let mut out = Vec::new();
    for i in inst.canonical_order() {
        let s = &inst.sets[i];
        if s.iter().all(|&c| count[c] < inst.capacity[c]) {
            for &c in s {
                count[c] += 1;
            }
            out.push(i);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MrspStats {
    pub nodes: u64,
    /// Most branches taken at a single node.
    pub max_branch: usize,
    /// Deepest node, counting one level per filled wildcard.
    pub max_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MrspOutcome {
    pub answer: bool,
    /// Indices into the instance's sets, exactly `target` of them, on yes.
    pub witness: Option<Vec<usize>>,
    pub stats: MrspStats,
}

/// How a search node reacts when greedy completion makes no progress, or
/// leaves a single stuck partial set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpandMode {
    /// Prune the node in both situations.
    Pruning,
    /// Keep branching; exact.
    Exhaustive,
}

struct Search<'a> {
    inst: &'a MrspInstance,
    order: Vec<usize>,
    mode: ExpandMode,
    stats: MrspStats,
    seen: HashSet<Vec<Vec<usize>>>,
}

impl Search<'_> {
    fn consistent_with_some_set(&self, reg: &[usize]) -> bool {
        self.inst.sets.iter().any(|s| is_subset(reg, s))
    }

    /// Index of the partial set to work on: fewest wildcards, then smallest fixed part.
    fn pick(slots: &[Vec<usize>], open: impl Iterator<Item = usize>) -> Option<usize> {
        open.min_by(|&a, &b| {
            slots[b]
                .len()
                .cmp(&slots[a].len())
                .then_with(|| slots[a].cmp(&slots[b]))
                .then(a.cmp(&b))
        })
    }

    fn expand(&mut self, slots: Vec<Vec<usize>>, depth: usize) -> Option<Vec<usize>> {
        let mut key = slots.clone();
        key.sort();
        if !self.seen.insert(key) {
            return None;
        }
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let inst = self.inst;

        // greedy completion of a working copy
        let mut count = vec![0usize; inst.universe];
        for s in &slots {
            for &c in s {
                count[c] += 1;
            }
        }
        let mut assigned: Vec<Option<usize>> = vec![None; slots.len()];
        let mut used = vec![false; inst.sets.len()];
        let mut replaced = false;
        for &i in &self.order {
            let set = &inst.sets[i];
            let fits = |slot: usize| {
                assigned[slot].is_none()
                    && is_subset(&slots[slot], set)
                    && set
                        .iter()
                        .all(|&c| slots[slot].contains(&c) || count[c] < inst.capacity[c])
            };
            let Some(slot) = Self::pick(&slots, (0..slots.len()).filter(|&s| fits(s))) else {
                continue;
            };
            for &c in set {
                if !slots[slot].contains(&c) {
                    count[c] += 1;
                }
            }
            assigned[slot] = Some(i);
            used[i] = true;
            replaced = true;
        }
        let open: Vec<usize> = (0..slots.len()).filter(|&s| assigned[s].is_none()).collect();
        if open.is_empty() {
            return Some(assigned.into_iter().map(|a| a.expect("all assigned")).collect());
        }
        if !replaced && self.mode == ExpandMode::Pruning {
            return None;
        }
        let star = Self::pick(&slots, open.iter().copied()).expect("open slot");
        if open.len() == 1 {
            let fill = (0..inst.sets.len()).find(|&i| {
                !used[i]
                    && is_subset(&slots[star], &inst.sets[i])
                    && inst.sets[i]
                        .iter()
                        .all(|&c| slots[star].contains(&c) || count[c] < inst.capacity[c])
            });
            if let Some(i) = fill {
                assigned[star] = Some(i);
                return Some(assigned.into_iter().map(|a| a.expect("all assigned")).collect());
            }
            if self.mode == ExpandMode::Pruning {
                return None;
            }
        }
        if slots[star].len() == inst.r {
            return None;
        }

        // branch on one more fixed element drawn from the working copy
        let mut fixed = vec![0usize; inst.universe];
        for s in &slots {
            for &c in s {
                fixed[c] += 1;
            }
        }
        let mut branches = 0;
        for c in (0..inst.universe).filter(|&c| count[c] > 0) {
            if slots[star].contains(&c) || fixed[c] >= inst.capacity[c] {
                continue;
            }
            let mut reg = slots[star].clone();
            reg.push(c);
            reg.sort_unstable();
            if !self.consistent_with_some_set(&reg) {
                continue;
            }
            branches += 1;
            self.stats.max_branch = self.stats.max_branch.max(branches);
            let mut next = slots.clone();
            next[star] = reg;
            if let Some(w) = self.expand(next, depth + 1) {
                return Some(w);
            }
        }
        None
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|c| big.contains(c))
}

/// Exact decision by partial-set branching.
pub fn solve_mrsp(inst: &MrspInstance) -> MrspOutcome {
    solve_mrsp_with(inst, ExpandMode::Exhaustive)
}

pub fn solve_mrsp_with(inst: &MrspInstance, mode: ExpandMode) -> MrspOutcome {
    let target = inst.target;
    let t0 = greedy_maximal_packing(inst);
    if t0.len() >= target {
        return MrspOutcome {
            answer: true,
            witness: Some(t0[..target].to_vec()),
            stats: MrspStats::default(),
        };
    }
    let mut covered: Vec<usize> = t0.iter().flat_map(|&i| inst.sets[i].iter().copied()).collect();
    covered.sort_unstable();
    covered.dedup();

    let mut search = Search {
        inst,
        order: inst.canonical_order(),
        mode,
        stats: MrspStats::default(),
        seen: HashSet::new(),
    };
    for seed in covered.iter().copied().combinations_with_replacement(target) {
        let fits = seed
            .iter()
            .dedup_with_count()
            .all(|(n, &c)| n <= inst.capacity[c]);
        if !fits {
            continue;
        }
        let slots: Vec<Vec<usize>> = seed.iter().map(|&c| vec![c]).collect();
        if let Some(mut w) = search.expand(slots, 0) {
            w.sort_unstable();
            return MrspOutcome {
                answer: true,
                witness: Some(w),
                stats: search.stats,
            };
        }
    }
    MrspOutcome {
        answer: false,
        witness: None,
        stats: search.stats,
    }
}

/// Exhaustive decision over all `target`-subsets of the set indices.
pub fn brute_mrsp(inst: &MrspInstance, cap: usize) -> Result<MrspOutcome> {
    if inst.sets.len() > cap {
        return Err(Error::Capacity {
            what: "number of sets",
            size: inst.sets.len(),
            cap,
        });
    }
    let mut nodes = 0u64;
    let found = (0..inst.sets.len()).combinations(inst.target).find(|pick| {
        nodes += 1;
        let chosen: Vec<&Vec<usize>> = pick.iter().map(|&i| &inst.sets[i]).collect();
        is_valid_packing(inst, &chosen)
    });
    Ok(MrspOutcome {
        answer: found.is_some(),
        witness: found,
        stats: MrspStats {
            nodes,
            ..MrspStats::default()
        },
    })
}

/// Whether `witness` is a valid packing of exactly `target` distinct set copies.
pub fn verify_packing(inst: &MrspInstance, witness: &[usize]) -> bool {
    let distinct: HashSet<usize> = witness.iter().copied().collect();
    if witness.len() != inst.target
        || distinct.len() != witness.len()
        || witness.iter().any(|&i| i >= inst.sets.len())
    {
        return false;
    }
    let chosen: Vec<&Vec<usize>> = witness.iter().map(|&i| &inst.sets[i]).collect();
    is_valid_packing(inst, &chosen)
}
