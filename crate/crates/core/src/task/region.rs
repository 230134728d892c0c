use crate::error::{Error, Result};
use crate::measures::{renyi_entropy, InfoValue};
use crate::pmf::{AlphaOrder, JointPmf};
use crate::solver::{compute_k_alpha, SolverConfig};

/// Minimal description rates (bits per source symbol) for which the ρ-th
/// moment of the decoder's list size can be driven to 1.
///
/// A pair `(R_X, R_Y)` is inside the region when `R_X ≥ rx_min`,
/// `R_Y ≥ ry_min` and `R_X + R_Y ≥ sum_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRegion {
    pub rho: f64,
    pub rx_min: InfoValue,
    pub ry_min: InfoValue,
    pub sum_min: InfoValue,
    /// `K_{1/(1+ρ)}(X;Y)`, the excess of `sum_min` over the joint entropy.
    pub k_value: InfoValue,
    /// False when the `K` solver hit its iteration limit.
    pub converged: bool,
}

impl RateRegion {
    pub fn alpha(&self) -> f64 {
        1.0 / (1.0 + self.rho)
    }

    /// The two corner points of the region's boundary: the smallest `R_Y`
    /// at `R_X = rx_min`, and the smallest `R_X` at `R_Y = ry_min`. They
    /// coincide when the sum bound is inactive.
    pub fn corners(&self) -> [(f64, f64); 2] {
        let (rx, ry, s) = (self.rx_min.bits(), self.ry_min.bits(), self.sum_min.bits());
        [(rx, ry.max(s - rx)), (rx.max(s - ry), ry)]
    }

    /// Whether `(rx, ry)` satisfies all three bounds, with slack `tol`.
    pub fn contains(&self, rx: f64, ry: f64, tol: f64) -> bool {
        rx >= self.rx_min.bits() - tol
            && ry >= self.ry_min.bits() - tol
            && rx + ry >= self.sum_min.bits() - tol
    }
}

/// Rate region at moment order `rho`, evaluated at `α = 1/(1+ρ)`.
pub fn rate_region(j: &JointPmf, rho: f64, cfg: &SolverConfig) -> Result<RateRegion> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Config(format!("rho must be > 0, got {rho}")));
    }
    let alpha = AlphaOrder::new(1.0 / (1.0 + rho))?;
    let k = compute_k_alpha(j, alpha, cfg)?;
    let h_joint = renyi_entropy(&j.flatten(), alpha);
    Ok(RateRegion {
        rho,
        rx_min: renyi_entropy(&j.marginal_x(), alpha),
        ry_min: renyi_entropy(&j.marginal_y(), alpha),
        sum_min: h_joint + k.value,
        k_value: k.value,
        converged: k.converged,
    })
}
