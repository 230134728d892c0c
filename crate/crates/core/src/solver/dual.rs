//! Dual forms of `J_α`: the bracket `I_R(X;Y) + α/(1-α) D(R||P)` over joint
//! PMFs `R`, minimized for α < 1 and maximized for α > 1.

use super::MeasureResult;
use crate::error::{Error, Result};
use crate::measures::{kl_divergence, mutual_information, renyi_divergence, InfoValue};
use crate::numeric::{ln0, normalize_log_weights};
use crate::pmf::{AlphaOrder, JointPmf};

#[derive(Debug, Clone, PartialEq)]
pub struct DualResult {
    /// The bracket at `r_opt`.
    pub value: InfoValue,
    pub r_opt: JointPmf,
    /// `|bracket(r_opt) - D_α(P||r_X r_Y)|` in bits; zero exactly at a maximizer.
    pub certificate_gap: f64,
}

/// `I_R(X;Y) + α/(1-α) D(R||P)`.
///
/// When `D(R||P) = ∞` the bracket is `+inf` for α < 1 and
/// [`InfoValue::UNATTAINABLE`] for α > 1.
pub fn j_dual_value(j: &JointPmf, r: &JointPmf, alpha: AlphaOrder) -> Result<InfoValue> {
    if alpha.is_one() {
        return Err(Error::AlphaOne("the dual bracket needs α ≠ 1"));
    }
    if (r.x_len(), r.y_len()) != (j.x_len(), j.y_len()) {
        return Err(Error::AlphabetMismatch(format!(
            "R is {}x{}, P is {}x{}",
            r.x_len(),
            r.y_len(),
            j.x_len(),
            j.y_len()
        )));
    }
    let a = alpha.value();
    let d = kl_divergence(&r.flatten(), &j.flatten());
    if d.is_infinite() {
        return Ok(if a < 1.0 {
            InfoValue::INFINITY
        } else {
            InfoValue::UNATTAINABLE
        });
    }
    Ok(InfoValue::from_bits(
        mutual_information(r).bits() + a / (1.0 - a) * d.bits(),
    ))
}

/// Certify a solution for α > 1.
///
/// The candidate maximizer is `R ∝ P^α (Q_X Q_Y)^(1-α)` built from the
/// primal witnesses; at the optimum its marginals are `Q_X`, `Q_Y` and the
/// bracket equals `D_α(P||R_X R_Y)`.
pub fn j_dual_certificate(j: &JointPmf, alpha: AlphaOrder, result: &MeasureResult) -> Result<DualResult> {
    let a = alpha.value();
    if a <= 1.0 || alpha.is_one() {
        return Err(Error::AlphaNotAboveOne(a));
    }
    let qx = result.qx_opt.probs();
    let qy = result.qy_opt.probs();
    let mut ln_w = Vec::with_capacity(j.probs().len());
    for (x, &qxx) in qx.iter().enumerate() {
        for (y, &p) in j.row(x).iter().enumerate() {
            ln_w.push(if p > 0.0 {
                a * p.ln() + (1.0 - a) * (ln0(qxx) + ln0(qy[y]))
            } else {
                f64::NEG_INFINITY
            });
        }
    }
    let r = JointPmf::from_normalized(
        j.x_labels().to_vec(),
        j.y_labels().to_vec(),
        normalize_log_weights(&ln_w),
    );
    let value = j_dual_value(j, &r, alpha)?;
    let primal = renyi_divergence(
        &j.flatten(),
        &JointPmf::product(&r.marginal_x(), &r.marginal_y()).flatten(),
        alpha,
    );
    let certificate_gap = (value.bits() - primal.bits()).abs();
    Ok(DualResult {
        value,
        r_opt: r,
        certificate_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmf::Pmf;
    use crate::solver::{compute_j_alpha, SolverConfig};

    fn a(v: f64) -> AlphaOrder {
        AlphaOrder::new(v).unwrap()
    }

    #[test]
    fn r_equal_p_gives_mutual_information() {
        let j = JointPmf::from_rows(&[[0.3, 0.2], [0.1, 0.4]]).unwrap();
        for &al in &[0.4, 2.0] {
            let v = j_dual_value(&j, &j, a(al)).unwrap();
            assert!((v.bits() - mutual_information(&j).bits()).abs() < 1e-15);
        }
        assert!(j_dual_value(&j, &j, a(1.0)).is_err());
    }

    #[test]
    fn support_violation_sentinels() {
        let j = JointPmf::from_rows(&[[0.5, 0.0], [0.0, 0.5]]).unwrap();
        let r = JointPmf::from_rows(&[[0.25, 0.25], [0.25, 0.25]]).unwrap();
        assert!(j_dual_value(&j, &r, a(2.0)).unwrap().is_unattainable());
        assert!(j_dual_value(&j, &r, a(0.5)).unwrap().is_infinite());
    }

    #[test]
    fn certificate_on_independent_joint() {
        let j = JointPmf::product(
            &Pmf::from_probs(vec![0.3, 0.7]).unwrap(),
            &Pmf::from_probs(vec![0.5, 0.25, 0.25]).unwrap(),
        );
        let res = compute_j_alpha(&j, a(2.0), &SolverConfig::default()).unwrap();
        let cert = j_dual_certificate(&j, a(2.0), &res).unwrap();
        assert!(cert.certificate_gap < 1e-12);
        for (u, v) in cert.r_opt.probs().iter().zip(j.probs()) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn certificate_rejects_small_alpha() {
        let j = JointPmf::from_rows(&[[0.3, 0.2], [0.1, 0.4]]).unwrap();
        let res = compute_j_alpha(&j, a(0.7), &SolverConfig::default()).unwrap();
        assert!(matches!(
            j_dual_certificate(&j, a(0.7), &res),
            Err(Error::AlphaNotAboveOne(_))
        ));
        assert!(j_dual_certificate(&j, a(1.0), &res).is_err());
    }

    #[test]
    fn certificate_on_counterexample() {
        let j = JointPmf::from_rows(&[
            [0.43, 0.43, 0.02],
            [0.01, 0.01, 0.04],
            [0.01, 0.01, 0.04],
        ])
        .unwrap();
        let res = compute_j_alpha(&j, a(1.5), &SolverConfig::default()).unwrap();
        let cert = j_dual_certificate(&j, a(1.5), &res).unwrap();
        assert!(cert.certificate_gap <= 1e-6, "gap {}", cert.certificate_gap);
        assert!((cert.value.bits() - res.value.bits()).abs() < 1e-6);
    }
}
