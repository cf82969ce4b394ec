//! Selection of low-cost covering ("nexus") node sets in networks by a
//! centrality-weighted LP relaxation of minimum-cost domination.

pub mod baselines;
pub mod bench;
pub mod centrality;
pub mod dynamic;
pub mod error;
pub mod generators;
pub mod graph;
pub mod lp;
pub mod select;

pub use error::{Error, Result};
