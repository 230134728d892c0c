use std::f64::consts::LN_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use super::objective::{eliminated_objective, ln_r_columns};
use super::{MeasureResult, Regime, SolverConfig};
use crate::error::Result;
use crate::measures::{mutual_information, renyi_div_nats, InfoValue};
use crate::numeric::{ln0, log_sum_exp};
use crate::pmf::{tilt_joint, tilt_pmf, AlphaOrder, JointPmf, Pmf};

/// The joint restricted to rows and columns with positive marginal mass.
struct Reduced {
    rows: Vec<usize>,
    cols: Vec<usize>,
    /// `ln P`, rows × cols.
    ln_p: Vec<f64>,
    /// `ln P` transposed, cols × rows.
    ln_pt: Vec<f64>,
    ln_px: Vec<f64>,
    ln_py: Vec<f64>,
}

impl Reduced {
    fn new(j: &JointPmf) -> Self {
        let (px, py) = (j.marginal_x(), j.marginal_y());
        let rows: Vec<usize> = (0..j.x_len()).filter(|&x| px.probs()[x] > 0.0).collect();
        let cols: Vec<usize> = (0..j.y_len()).filter(|&y| py.probs()[y] > 0.0).collect();
        let (r, c) = (rows.len(), cols.len());
        let mut ln_p = vec![0.0; r * c];
        let mut ln_pt = vec![0.0; r * c];
        for (i, &x) in rows.iter().enumerate() {
            for (k, &y) in cols.iter().enumerate() {
                let v = ln0(j.get(x, y));
                ln_p[i * c + k] = v;
                ln_pt[k * r + i] = v;
            }
        }
        Reduced {
            ln_px: rows.iter().map(|&x| px.probs()[x].ln()).collect(),
            ln_py: cols.iter().map(|&y| py.probs()[y].ln()).collect(),
            rows,
            cols,
            ln_p,
            ln_pt,
        }
    }

    fn r(&self) -> usize {
        self.rows.len()
    }

    fn c(&self) -> usize {
        self.cols.len()
    }
}

#[derive(Debug, Clone, Copy)]
enum Order {
    /// Start from `Q_X`, update `Q_Y` first.
    XFirst,
    /// Start from `Q_Y`, update `Q_X` first.
    YFirst,
}

struct Run {
    ln_qx: Vec<f64>,
    ln_qy: Vec<f64>,
    /// Objective in bits.
    objective: f64,
    iters: usize,
    converged: bool,
}

fn log_normalize(v: &mut [f64]) {
    let lse = log_sum_exp(v.iter().copied());
    debug_assert!(lse.is_finite());
    v.iter_mut().for_each(|t| *t -= lse);
}

fn within_tol(prev: f64, cur: f64, tol: f64) -> bool {
    (prev - cur).abs() <= tol * cur.abs().max(1.0)
}

/// Alternate the two exact inner minimizations from `start` until the
/// objective settles.
fn alternate(red: &Reduced, alpha: f64, start: &[f64], order: Order, cfg: &SolverConfig) -> Run {
    let (r, c) = (red.r(), red.c());
    // `a` is the side held fixed first, `b` the side updated first.
    let (pa, pb, na, nb) = match order {
        Order::XFirst => (&red.ln_p, &red.ln_pt, r, c),
        Order::YFirst => (&red.ln_pt, &red.ln_p, c, r),
    };
    let mut ln_a = start.to_vec();
    let mut ln_b = vec![0.0; nb];
    let mut prev = f64::INFINITY;
    let mut objective = f64::INFINITY;
    let mut converged = false;
    let mut iters = 0;
    while iters < cfg.max_iters {
        iters += 1;
        ln_r_columns(pa, na, nb, &ln_a, alpha, &mut ln_b);
        log_normalize(&mut ln_b);
        ln_r_columns(pb, nb, na, &ln_b, alpha, &mut ln_a);
        objective = eliminated_objective(&ln_a, alpha) / LN_2;
        log_normalize(&mut ln_a);
        if within_tol(prev, objective, cfg.tol) {
            converged = true;
            break;
        }
        prev = objective;
    }
    let (ln_qx, ln_qy) = match order {
        Order::XFirst => (ln_a, ln_b),
        Order::YFirst => (ln_b, ln_a),
    };
    Run {
        ln_qx,
        ln_qy,
        objective,
        iters,
        converged,
    }
}

/// Log of a Dirichlet(1, …, 1) draw.
fn dirichlet_log(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            let e: f64 = Exp1.sample(rng);
            e.max(f64::MIN_POSITIVE).ln()
        })
        .collect();
    log_normalize(&mut v);
    v
}

fn expand(ln_q: &[f64], idx: &[usize], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for (&i, &l) in idx.iter().zip(ln_q) {
        out[i] = l.exp();
    }
    let s: f64 = out.iter().sum();
    out.iter_mut().for_each(|v| *v /= s);
    out
}

/// `J_α(X;Y) = min_{Q_X,Q_Y} D_α(P_XY||Q_X Q_Y)`.
///
/// Start 0 is `(P_X, P_Y)`; further starts are seeded Dirichlet(1) draws,
/// one RNG stream per start index. In the nonconvex regime each start is
/// run in both update orders. The lowest objective wins, ties going to the
/// earliest start.
pub fn compute_j_alpha(j: &JointPmf, alpha: AlphaOrder, cfg: &SolverConfig) -> Result<MeasureResult> {
    cfg.validate()?;
    let regime = Regime::of(alpha);
    if alpha.is_one() {
        return Ok(MeasureResult {
            value: mutual_information(j),
            qx_opt: j.marginal_x(),
            qy_opt: j.marginal_y(),
            iters: 0,
            converged: true,
            starts_used: 1,
            regime,
        });
    }

    let red = Reduced::new(j);
    let a = alpha.value();
    let n_starts = cfg.starts_for(regime);
    let mut best: Option<Run> = None;
    for s in 0..n_starts {
        let (sx, sy) = if s == 0 {
            (red.ln_px.clone(), red.ln_py.clone())
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(s as u64);
            (dirichlet_log(&mut rng, red.r()), dirichlet_log(&mut rng, red.c()))
        };
        let mut runs = vec![alternate(&red, a, &sx, Order::XFirst, cfg)];
        if regime == Regime::Nonconvex {
            runs.push(alternate(&red, a, &sy, Order::YFirst, cfg));
        }
        for run in runs {
            let better = match &best {
                None => true,
                Some(b) => {
                    run.objective < b.objective && !within_tol(b.objective, run.objective, cfg.tol)
                }
            };
            if better {
                best = Some(run);
            }
        }
    }
    let best = best.expect("at least one start");

    let qx = expand(&best.ln_qx, &red.rows, j.x_len());
    let qy = expand(&best.ln_qy, &red.cols, j.y_len());
    let product: Vec<f64> = qx
        .iter()
        .flat_map(|&u| qy.iter().map(move |&v| u * v))
        .collect();
    let value = renyi_div_nats(j.probs(), &product, a) / LN_2;
    Ok(MeasureResult {
        value: InfoValue::from_bits(value),
        qx_opt: Pmf::from_normalized(j.x_labels().to_vec(), qx),
        qy_opt: Pmf::from_normalized(j.y_labels().to_vec(), qy),
        iters: best.iters,
        converged: best.converged,
        starts_used: n_starts,
        regime,
    })
}

/// `K_α(X;Y) = min_{Q_X,Q_Y} Δ_α(P_XY||Q_X Q_Y)`, computed as `J_{1/α}` of
/// the α-tilted joint. The witnesses are returned in the original
/// coordinates, so `Δ_α(P_XY||qx_opt ⊗ qy_opt)` reproduces `value`.
pub fn compute_k_alpha(j: &JointPmf, alpha: AlphaOrder, cfg: &SolverConfig) -> Result<MeasureResult> {
    if alpha.is_one() {
        return compute_j_alpha(j, alpha, cfg);
    }
    let tilted = tilt_joint(j, alpha);
    let mut res = compute_j_alpha(&tilted, alpha.reciprocal(), cfg)?;
    // the tilt by α maps the witness onto the tilted problem's minimizer,
    // so undo it with exponent 1/α
    res.qx_opt = tilt_pmf(&res.qx_opt, alpha.reciprocal());
    res.qy_opt = tilt_pmf(&res.qy_opt, alpha.reciprocal());
    Ok(res)
}
