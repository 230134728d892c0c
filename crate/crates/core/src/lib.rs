//! Rényi-order dependence measures on finite joint distributions.
//!
//! Two generalizations of mutual information are provided:
//!
//! - `J_α(X;Y) = min_{Q_X,Q_Y} D_α(P_XY || Q_X Q_Y)`, built on the Rényi
//!   divergence; it satisfies the data-processing inequality.
//! - `K_α(X;Y) = min_{Q_X,Q_Y} Δ_α(P_XY || Q_X Q_Y)`, built on the relative
//!   α-entropy; it does not, but it characterizes the sum-rate of
//!   distributed task encoding.
//!
//! Both equal `I(X;Y)` at α = 1. All values are in bits.
//!
//! ```
//! use renyidep::{compute_k_alpha, AlphaOrder, JointPmf, SolverConfig};
//!
//! let j = JointPmf::from_rows(&[[0.4, 0.1], [0.1, 0.4]]).unwrap();
//! let k = compute_k_alpha(&j, AlphaOrder::new(0.5).unwrap(), &SolverConfig::default()).unwrap();
//! assert!(k.value.bits() > 0.0 && k.converged);
//! ```

pub mod error;
pub mod measures;
mod numeric;
pub mod pmf;
pub mod solver;
pub mod task;

pub use error::{Error, Result};
pub use measures::{
    kl_decomposition_check, kl_divergence, min_entropy, mutual_information,
    relative_alpha_entropy, renyi_divergence, renyi_entropy, shannon_entropy, InfoValue,
    KlDecomposition,
};
pub use pmf::{apply_channel, tilt_joint, tilt_pmf, AlphaOrder, AlphaRegime, ConditionalPmf, JointPmf, Pmf};
pub use solver::{
    brute_force_oracle, brute_force_oracle_grid, compute_j_alpha, compute_k_alpha, j_dual_certificate, j_dual_value,
    j_objective_reduced, j_self_closed_form, k_self_closed_form, optimal_qy_given_qx, DualResult,
    Measure, MeasureResult, Regime, SolverConfig,
};
pub use task::{
    rate_region, side_list_covariance, simulate_list_moment, RateRegion, SimMethod, SimOutcome,
    SimParams,
};
