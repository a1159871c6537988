//! Homology, presentations of fundamental groups and the decision
//! procedures built on them.

pub mod chain;
pub mod coset;
pub mod fold;
pub mod group;
pub mod injectivity;
pub mod snf;
pub mod verdict;
