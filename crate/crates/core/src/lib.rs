//! Election control under r-approval with sincere ranked ballots, for
//! single-peaked and k-peaked elections.

pub mod av2dp;
pub mod control;
pub mod election;
pub mod error;
pub mod fpt;
pub mod gen;
pub mod graph;
pub mod interval;
pub mod io;
pub mod mrsp;
pub mod peaked;
pub mod reductions;

pub use election::{CandidateId, Election, Multiset, Vote, VoteMultiset};
pub use error::{Error, Result};
pub use peaked::{Axis, DiscreteIntervalSet, PeakWitness};
