//! Seeded random instances.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::control::{AcInstance, AvInstance, DcInstance, DvInstance};
use crate::election::{Election, Vote, VoteMultiset};
use crate::error::Result;
use crate::mrsp::MrspInstance;
use crate::peaked::{gen_random_k_peaked, max_peak_bound, Axis};
use crate::reductions::VisInstance;

/// Shape of a random election.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElectionShape {
    pub m: usize,
    pub r: usize,
    /// Peak bound of every vote; `None` draws unrestricted rankings.
    pub k: Option<usize>,
    pub registered: usize,
    pub unregistered: usize,
    pub budget: usize,
}

fn random_axis<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Axis {
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    Axis::new(order).expect("shuffled permutation")
}

fn random_vote<R: Rng + ?Sized>(axis: &Axis, k: Option<usize>, rng: &mut R) -> Result<Vote> {
    match k {
        Some(k) => gen_random_k_peaked(axis, k, rng),
        None => {
            let mut order = axis.order().to_vec();
            order.shuffle(rng);
            Vote::new(order, axis.len())
        }
    }
}

fn random_votes<R: Rng + ?Sized>(
    n: usize,
    axis: &Axis,
    k: Option<usize>,
    rng: &mut R,
) -> Result<VoteMultiset> {
    let mut out = VoteMultiset::new();
    for _ in 0..n {
        // occasional duplicates
        if !out.is_empty() && rng.gen_bool(0.15) {
            let i = rng.gen_range(0..out.entries().len());
            let dup = out.entries()[i].0.clone();
            out.push(dup, 1);
        } else {
            out.push(random_vote(axis, k, rng)?, 1);
        }
    }
    Ok(out)
}

fn parts<R: Rng + ?Sized>(shape: &ElectionShape, rng: &mut R) -> Result<(Axis, Election, usize)> {
    let axis = random_axis(shape.m, rng);
    let registered = random_votes(shape.registered, &axis, shape.k, rng)?;
    let p = rng.gen_range(0..shape.m);
    let election = Election::with_default_names(shape.m, p, shape.r, registered)?;
    let k = shape.k.unwrap_or_else(|| max_peak_bound(shape.m));
    Ok((axis, election, k))
}

pub fn random_av<R: Rng + ?Sized>(shape: &ElectionShape, rng: &mut R) -> Result<AvInstance> {
    let (axis, election, k) = parts(shape, rng)?;
    let unregistered = random_votes(shape.unregistered, &axis, shape.k, rng)?;
    Ok(AvInstance {
        budget: shape.budget.min(unregistered.len()),
        election,
        unregistered,
        axis,
        k,
    })
}

pub fn random_dv<R: Rng + ?Sized>(shape: &ElectionShape, rng: &mut R) -> Result<DvInstance> {
    let (axis, election, k) = parts(shape, rng)?;
    Ok(DvInstance {
        budget: shape.budget.min(election.registered().len()),
        election,
        axis,
        k,
    })
}

/// Spoilers are a random subset of the non-distinguished candidates of size
/// about a third of the field.
pub fn random_ac<R: Rng + ?Sized>(shape: &ElectionShape, rng: &mut R) -> Result<AcInstance> {
    let (axis, election, k) = parts(shape, rng)?;
    let p = election.distinguished();
    let mut others: Vec<usize> = (0..shape.m).filter(|&c| c != p).collect();
    others.shuffle(rng);
    let mut spoilers: Vec<usize> = others[..shape.m / 3].to_vec();
    spoilers.sort_unstable();
    Ok(AcInstance {
        budget: shape.budget.min(spoilers.len()),
        election,
        spoilers,
        axis,
        k,
    })
}

pub fn random_dc<R: Rng + ?Sized>(shape: &ElectionShape, rng: &mut R) -> Result<DcInstance> {
    let (axis, election, k) = parts(shape, rng)?;
    Ok(DcInstance {
        budget: shape.budget.min(shape.m - 1),
        election,
        axis,
        k,
    })
}

/// Random packing instance: `sets` random `r`-subsets of a universe of size
/// `universe`, capacities in `1..=max_cap`.
pub fn random_mrsp<R: Rng + ?Sized>(
    universe: usize,
    r: usize,
    sets: usize,
    max_cap: usize,
    target: usize,
    rng: &mut R,
) -> Result<MrspInstance> {
    let elems: Vec<usize> = (0..universe).collect();
    let capacity = (0..universe).map(|_| rng.gen_range(1..=max_cap)).collect();
    let family = (0..sets)
        .map(|_| {
            let mut s: Vec<usize> = elems.choose_multiple(rng, r).copied().collect();
            s.sort_unstable();
            s
        })
        .collect();
    MrspInstance::new(universe, r, capacity, family, target)
}

/// Random interval-selection instance: `groups` groups of 1 to 3 distinct
/// intervals with left ends in `1..=max_left`.
pub fn random_vis<R: Rng + ?Sized>(groups: usize, max_left: u64, rng: &mut R) -> Result<VisInstance> {
    let lefts: Vec<u64> = (1..=max_left.max(1)).collect();
    let family = (0..groups)
        .map(|_| {
            let size = rng.gen_range(1..=3usize.min(lefts.len()));
            lefts.choose_multiple(rng, size).copied().collect()
        })
        .collect();
    VisInstance::new(family)
}
