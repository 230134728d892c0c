//! Exhaustive search over product grids on the two simplices.
//!
//! Evaluates `D_α` (or `Δ_α`) of `P_XY` against every `Q_X ⊗ Q_Y` whose
//! coordinates are multiples of `1/grid_steps`, without using any of the
//! solver's closed-form minimizers. The result is an upper bound on the true
//! minimum that tightens as the grid is refined.


use crate::error::{Error, Result};
use crate::measures::InfoValue;
use crate::pmf::{AlphaOrder, JointPmf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    /// Rényi divergence, giving `J_α`.
    J,
    /// Relative α-entropy, giving `K_α`.
    K,
}

const MAX_ORACLE_ALPHABET: usize = 3;

/// Every point of the simplex in `d` coordinates with resolution `n`.
fn simplex_grid(d: usize, n: usize) -> Vec<Vec<f64>> {
    fn rec(d: usize, left: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if d == 1 {
            cur.push(left);
            out.push(cur.iter().map(|&k| k as f64 / n as f64).collect());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(d - 1, left - k, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, n, n, &mut Vec::with_capacity(d), &mut out);
    out
}

/// `q^e` with the zero conventions of the divergences: `0^e = 0` for e > 0,
/// `+inf` for e < 0, and 1 for e = 0.
fn pow0(q: f64, e: f64) -> f64 {
    if q > 0.0 {
        q.powf(e)
    } else if e > 0.0 {
        0.0
    } else if e < 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

pub fn brute_force_oracle(
    j: &JointPmf,
    alpha: AlphaOrder,
    grid_steps: usize,
    measure: Measure,
) -> Result<InfoValue> {
    brute_force_oracle_grid(j, alpha, grid_steps, grid_steps, measure)
}

/// As [`brute_force_oracle`], with separate resolutions for the `Q_X` and
/// `Q_Y` simplices. Useful when one side has three symbols and the other two.
pub fn brute_force_oracle_grid(
    j: &JointPmf,
    alpha: AlphaOrder,
    steps_x: usize,
    steps_y: usize,
    measure: Measure,
) -> Result<InfoValue> {
    let (nx, ny) = (j.x_len(), j.y_len());
    if nx > MAX_ORACLE_ALPHABET || ny > MAX_ORACLE_ALPHABET {
        return Err(Error::OracleTooLarge { x: nx, y: ny });
    }
    if steps_x.min(steps_y) < 2 {
        return Err(Error::Config("grid_steps must be >= 2".into()));
    }
    let gx = simplex_grid(nx, steps_x);
    let gy = simplex_grid(ny, steps_y);
    let nats = if alpha.is_one() {
        kl_min(j, &gx, &gy)
    } else {
        match measure {
            Measure::J => renyi_min(j, alpha.value(), &gx, &gy),
            Measure::K => rel_alpha_min(j, alpha.value(), &gx, &gy),
        }
    };
    Ok(InfoValue::from_nats(nats.max(0.0)))
}

/// `D(P||Q_X Q_Y) = -H(P) - Σ P_X ln Q_X - Σ P_Y ln Q_Y`, scanned over the grid.
fn kl_min(j: &JointPmf, gx: &[Vec<f64>], gy: &[Vec<f64>]) -> f64 {
    let (px, py) = (j.marginal_x(), j.marginal_y());
    let neg_h: f64 = j
        .probs()
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * v.ln())
        .sum();
    let cross = |p: &[f64], q: &[f64]| -> f64 {
        let mut acc = 0.0;
        for (&pi, &qi) in p.iter().zip(q) {
            if pi > 0.0 {
                if qi <= 0.0 {
                    return f64::INFINITY;
                }
                acc -= pi * qi.ln();
            }
        }
        acc
    };
    let cx: Vec<f64> = gx.iter().map(|q| cross(px.probs(), q)).collect();
    let cy: Vec<f64> = gy.iter().map(|q| cross(py.probs(), q)).collect();
    let mut best = f64::INFINITY;
    for &a in &cx {
        for &b in &cy {
            best = best.min(neg_h + a + b);
        }
    }
    best
}

/// `D_α = 1/(α-1) ln Σ_y Q_Y(y)^(1-α) Σ_x P(x,y)^α Q_X(x)^(1-α)`.
fn renyi_min(j: &JointPmf, a: f64, gx: &[Vec<f64>], gy: &[Vec<f64>]) -> f64 {
    let (nx, ny) = (j.x_len(), j.y_len());
    // inner[g][y] = Σ_x P(x,y)^α Q_X(x)^(1-α) for grid point g
    let inner: Vec<Vec<f64>> = gx
        .iter()
        .map(|qx| {
            (0..ny)
                .map(|y| {
                    (0..nx)
                        .filter(|&x| j.get(x, y) > 0.0)
                        .map(|x| j.get(x, y).powf(a) * pow0(qx[x], 1.0 - a))
                        .sum()
                })
                .collect()
        })
        .collect();
    let qy_pow: Vec<Vec<f64>> = gy
        .iter()
        .map(|q| q.iter().map(|&v| pow0(v, 1.0 - a)).collect())
        .collect();

    let mut best = f64::INFINITY;
    for row in &inner {
        for qp in &qy_pow {
            let mut s = 0.0;
            for y in 0..ny {
                if row[y] > 0.0 {
                    s += row[y] * qp[y];
                }
            }
            // a > 1: minimizing ln s / (a-1) means minimizing s (inf is useless)
            // a < 1: minimizing means maximizing s (s = 0 gives +inf)
            let d = if s.is_finite() && s > 0.0 {
                s.ln() / (a - 1.0)
            } else {
                f64::INFINITY
            };
            if d < best {
                best = d;
            }
        }
    }
    best
}

/// `Δ_α = α/(1-α) ln Σ P (Q_X Q_Y)^(α-1) + ln Σ Q_X^α + ln Σ Q_Y^α - 1/(1-α) ln Σ P^α`.
fn rel_alpha_min(j: &JointPmf, a: f64, gx: &[Vec<f64>], gy: &[Vec<f64>]) -> f64 {
    let (nx, ny) = (j.x_len(), j.y_len());
    let ln_sum_p_a: f64 = j
        .probs()
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v.powf(a))
        .sum::<f64>()
        .ln();
    let constant = -ln_sum_p_a / (1.0 - a);
    let coeff = a / (1.0 - a);

    // cross[g][y] = Σ_x P(x,y) Q_X(x)^(α-1); ln_norm_x[g] = ln Σ Q_X^α
    let cross: Vec<Vec<f64>> = gx
        .iter()
        .map(|qx| {
            (0..ny)
                .map(|y| {
                    (0..nx)
                        .filter(|&x| j.get(x, y) > 0.0)
                        .map(|x| j.get(x, y) * pow0(qx[x], a - 1.0))
                        .sum()
                })
                .collect()
        })
        .collect();
    let ln_norm = |q: &Vec<f64>| q.iter().map(|&v| pow0(v, a)).sum::<f64>().ln();
    let ln_norm_x: Vec<f64> = gx.iter().map(ln_norm).collect();
    let ln_norm_y: Vec<f64> = gy.iter().map(ln_norm).collect();
    let qy_pow: Vec<Vec<f64>> = gy
        .iter()
        .map(|q| q.iter().map(|&v| pow0(v, a - 1.0)).collect())
        .collect();

    let mut best = f64::INFINITY;
    for (row, &lnx) in cross.iter().zip(&ln_norm_x) {
        for (qp, &lny) in qy_pow.iter().zip(&ln_norm_y) {
            let mut s = 0.0;
            for y in 0..ny {
                if row[y] > 0.0 {
                    s += row[y] * qp[y];
                }
            }
            if !(s.is_finite() && s > 0.0) {
                continue;
            }
            let v = coeff * s.ln() + lnx + lny + constant;
            if v < best {
                best = v;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmf::Pmf;
    use crate::solver::j_self_closed_form;

    fn a(v: f64) -> AlphaOrder {
        AlphaOrder::new(v).unwrap()
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(simplex_grid(1, 10).len(), 1);
        assert_eq!(simplex_grid(2, 10).len(), 11);
        assert_eq!(simplex_grid(3, 10).len(), 66);
        assert!(simplex_grid(3, 7)
            .iter()
            .all(|p| (p.iter().sum::<f64>() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn independent_is_zero_at_any_resolution() {
        let j = JointPmf::product(&Pmf::uniform(2), &Pmf::from_probs(vec![0.25, 0.75]).unwrap());
        for steps in [4, 40] {
            for &al in &[0.3, 1.0, 2.0] {
                for m in [Measure::J, Measure::K] {
                    let v = brute_force_oracle(&j, a(al), steps, m).unwrap().bits();
                    assert!(v.abs() < 1e-12, "steps={steps} α={al} {m:?}: {v}");
                }
            }
        }
    }

    #[test]
    fn diagonal_nonconvex_witness() {
        let p = Pmf::uniform(2);
        let j = JointPmf::diagonal(&p);
        let v = brute_force_oracle(&j, a(0.3), 400, Measure::J).unwrap().bits();
        let closed = j_self_closed_form(&p, a(0.3)).bits();
        assert!((closed - 0.3 / 0.7).abs() < 1e-12);
        assert!((v - closed).abs() < 1e-9, "{v} vs {closed}");
        // the product of marginals is a strictly worse point
        let at_marginals = crate::measures::renyi_divergence(
            &j.flatten(),
            &JointPmf::product(&p, &p).flatten(),
            a(0.3),
        )
        .bits();
        assert!((at_marginals - 1.0).abs() < 1e-12);
        assert!(at_marginals > v + 0.5);
    }

    #[test]
    fn rejects_large_alphabets() {
        let j = JointPmf::diagonal(&Pmf::uniform(4));
        assert!(matches!(
            brute_force_oracle(&j, a(2.0), 10, Measure::J),
            Err(Error::OracleTooLarge { x: 4, y: 4 })
        ));
        let j = JointPmf::diagonal(&Pmf::uniform(2));
        assert!(brute_force_oracle(&j, a(2.0), 1, Measure::J).is_err());
        assert!(brute_force_oracle_grid(&j, a(2.0), 10, 1, Measure::J).is_err());
    }

    #[test]
    fn mixed_resolution_matches_uniform_resolution() {
        let j = JointPmf::from_rows(&[[0.3, 0.1, 0.15], [0.05, 0.25, 0.15]]).unwrap();
        for m in [Measure::J, Measure::K] {
            let same = brute_force_oracle(&j, a(1.5), 60, m).unwrap();
            let mixed = brute_force_oracle_grid(&j, a(1.5), 60, 60, m).unwrap();
            assert_eq!(same, mixed);
            let fine = brute_force_oracle_grid(&j, a(1.5), 240, 60, m).unwrap();
            assert!(fine.bits() <= same.bits() + 1e-15);
        }
    }
}
