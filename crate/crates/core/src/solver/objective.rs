use crate::error::{Error, Result};
use crate::measures::InfoValue;
use crate::numeric::ln0;
use crate::pmf::{AlphaOrder, JointPmf, Pmf};

/// For each column `c` of the row-major `rows × cols` log-matrix `ln_p`:
///
/// `out[c] = (1/α) ln Σ_r exp(α ln_p[r,c] + (1-α) ln_q[r])`
///
/// i.e. `ln R(c)` with `R(c) = [Σ_r P(r,c)^α Q(r)^(1-α)]^(1/α)`. Entries with
/// `P = 0` are skipped; `Q = 0` drops the term for α < 1 and gives `+inf`
/// for α > 1.
pub(crate) fn ln_r_columns(
    ln_p: &[f64],
    rows: usize,
    cols: usize,
    ln_q: &[f64],
    alpha: f64,
    out: &mut [f64],
) {
    debug_assert_eq!(ln_p.len(), rows * cols);
    debug_assert_eq!(ln_q.len(), rows);
    let beta = 1.0 - alpha;
    for (c, slot) in out.iter_mut().enumerate().take(cols) {
        let mut max = f64::NEG_INFINITY;
        for r in 0..rows {
            let lp = ln_p[r * cols + c];
            if lp == f64::NEG_INFINITY {
                continue;
            }
            let t = alpha * lp + beta * ln_q[r];
            if t > max {
                max = t;
            }
        }
        if !max.is_finite() {
            *slot = max;
            continue;
        }
        let mut sum = 0.0;
        for r in 0..rows {
            let lp = ln_p[r * cols + c];
            if lp == f64::NEG_INFINITY {
                continue;
            }
            sum += (alpha * lp + beta * ln_q[r] - max).exp();
        }
        *slot = (max + sum.ln()) / alpha;
    }
}

/// `α/(α-1) · ln Σ_c R(c)` given `ln R`, in nats.
pub(crate) fn eliminated_objective(ln_r: &[f64], alpha: f64) -> f64 {
    let lse = crate::numeric::log_sum_exp(ln_r.iter().copied());
    if lse.is_infinite() {
        // +inf: α > 1 with a missing Q_X symbol. -inf: α < 1 with Q_X
        // disjoint from P_X; the coefficient is negative, so both diverge.
        return f64::INFINITY;
    }
    alpha / (alpha - 1.0) * lse
}

fn ln_matrix(j: &JointPmf) -> Vec<f64> {
    j.probs().iter().map(|&v| ln0(v)).collect()
}

fn check_inputs(j: &JointPmf, qx: &Pmf, alpha: AlphaOrder) -> Result<()> {
    if alpha.is_one() {
        return Err(Error::AlphaOne("use mutual_information"));
    }
    if qx.len() != j.x_len() {
        return Err(Error::AlphabetMismatch(format!(
            "Q_X has {} symbols, X has {}",
            qx.len(),
            j.x_len()
        )));
    }
    Ok(())
}

/// `min_{Q_Y} D_α(P_XY||Q_X Q_Y)` in closed form:
///
/// `α/(α-1) log Σ_y [Σ_x P_XY(x,y)^α Q_X(x)^(1-α)]^(1/α)`
pub fn j_objective_reduced(j: &JointPmf, qx: &Pmf, alpha: AlphaOrder) -> Result<InfoValue> {
    check_inputs(j, qx, alpha)?;
    let ln_q: Vec<f64> = qx.probs().iter().map(|&v| ln0(v)).collect();
    let mut ln_r = vec![0.0; j.y_len()];
    ln_r_columns(&ln_matrix(j), j.x_len(), j.y_len(), &ln_q, alpha.value(), &mut ln_r);
    Ok(InfoValue::from_nats(
        eliminated_objective(&ln_r, alpha.value()).max(0.0),
    ))
}

/// The exact minimizer over `Q_Y` of `D_α(P_XY||Q_X Q_Y)`: `R / Σ R`.
pub fn optimal_qy_given_qx(j: &JointPmf, qx: &Pmf, alpha: AlphaOrder) -> Result<Pmf> {
    check_inputs(j, qx, alpha)?;
    let ln_q: Vec<f64> = qx.probs().iter().map(|&v| ln0(v)).collect();
    let mut ln_r = vec![0.0; j.y_len()];
    ln_r_columns(&ln_matrix(j), j.x_len(), j.y_len(), &ln_q, alpha.value(), &mut ln_r);
    if ln_r.contains(&f64::INFINITY) {
        return Err(Error::Degenerate("Q_X vanishes on the support of P_X"));
    }
    if ln_r.iter().all(|&v| v == f64::NEG_INFINITY) {
        return Err(Error::Degenerate("R(y) is zero for every y"));
    }
    Ok(Pmf::from_normalized(
        j.y_labels().to_vec(),
        crate::numeric::normalize_log_weights(&ln_r),
    ))
}
