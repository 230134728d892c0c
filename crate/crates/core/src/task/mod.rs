//! Distributed task encoding: the rate region characterized by `K_α`, and a
//! small simulator of random-binning encoders that checks it at finite block
//! lengths.

mod region;
mod simulate;

pub use region::{rate_region, RateRegion};
pub use simulate::{
    side_list_covariance, simulate_list_moment, SimMethod, SimOutcome, SimParams, EXACT_PAIR_CAP,
};
