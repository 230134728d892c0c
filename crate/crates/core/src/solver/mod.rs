//! `J_α(X;Y)` and `K_α(X;Y)`: minimization of `D_α(P_XY||Q_X Q_Y)` and
//! `Δ_α(P_XY||Q_X Q_Y)` over product distributions.
//!
//! The minimization alternates the two closed-form inner minimizers (best
//! `Q_Y` for a fixed `Q_X`, then the mirrored update). Each half-step is an
//! exact minimization, so the objective never increases. For α ≥ ½ the
//! problem is convex and one start from `(P_X, P_Y)` suffices; below ½ it is
//! not, and the solver keeps the best of several seeded random starts.
//!
//! `K_α` is computed as `J_{1/α}` of the α-tilted joint, with the witnesses
//! mapped back through the inverse tilt.

mod alternating;
mod closed_form;
mod dual;
mod objective;
mod oracle;

pub use alternating::{compute_j_alpha, compute_k_alpha};
pub use closed_form::{j_self_closed_form, k_self_closed_form};
pub use dual::{j_dual_certificate, j_dual_value, DualResult};
pub use objective::{j_objective_reduced, optimal_qy_given_qx};
pub use oracle::{brute_force_oracle, brute_force_oracle_grid, Measure};

use crate::error::{Error, Result};
use crate::measures::InfoValue;
use crate::pmf::{AlphaOrder, Pmf};

/// Random starts used below α = ½ when the caller does not choose.
pub const DEFAULT_NONCONVEX_STARTS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Stop when the objective (bits) changes by at most `tol · max(1, |f|)`
    /// over one full sweep.
    pub tol: f64,
    pub max_iters: usize,
    /// Total starts including `(P_X, P_Y)`. `None` picks 1 in the convex
    /// regime and [`DEFAULT_NONCONVEX_STARTS`] otherwise.
    pub n_starts: Option<usize>,
    /// Per-simplex resolution of the brute-force oracle.
    pub grid_steps: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-11,
            max_iters: 10_000,
            n_starts: None,
            grid_steps: 400,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Config(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be >= 1".into()));
        }
        if self.n_starts == Some(0) {
            return Err(Error::Config("n_starts must be >= 1".into()));
        }
        if self.grid_steps < 2 {
            return Err(Error::Config("grid_steps must be >= 2".into()));
        }
        Ok(())
    }

    pub fn starts_for(&self, regime: Regime) -> usize {
        self.n_starts.unwrap_or(match regime {
            Regime::Convex => 1,
            Regime::Nonconvex => DEFAULT_NONCONVEX_STARTS,
        })
    }
}

/// Whether `(Q_X, Q_Y) ↦ D_α(P_XY||Q_X Q_Y)` is convex at the order being solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Convex,
    Nonconvex,
}

impl Regime {
    pub fn of(alpha: AlphaOrder) -> Regime {
        if alpha.value() < 0.5 && !alpha.is_one() {
            Regime::Nonconvex
        } else {
            Regime::Convex
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Convex => "convex",
            Regime::Nonconvex => "nonconvex",
        })
    }
}

/// A computed dependence measure with its minimizing product distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureResult {
    pub value: InfoValue,
    pub qx_opt: Pmf,
    pub qy_opt: Pmf,
    /// Full sweeps used by the winning start.
    pub iters: usize,
    pub converged: bool,
    pub starts_used: usize,
    pub regime: Regime,
}
