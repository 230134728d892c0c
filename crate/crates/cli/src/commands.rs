use rayon::prelude::*;
use renyidep::{
    brute_force_oracle, compute_j_alpha, compute_k_alpha, mutual_information, rate_region,
    relative_alpha_entropy, renyi_divergence, renyi_entropy, simulate_list_moment, AlphaOrder,
    JointPmf, Measure, MeasureResult, Pmf, SimParams, SolverConfig,
};

use crate::args::{MeasureKind, SweepMeasure};
use crate::error::{CliError, Result};
use crate::render::{Field, Record};

/// A command's records plus whether every solve converged.
pub struct Computed {
    pub records: Vec<Record>,
    pub converged: bool,
}

fn dist(p: &Pmf) -> Field {
    Field::Dist(
        p.labels()
            .iter()
            .cloned()
            .zip(p.probs().iter().copied())
            .collect(),
    )
}

fn require_alpha(alpha: Option<f64>, kind: MeasureKind) -> Result<AlphaOrder> {
    let a = alpha.ok_or_else(|| CliError::Usage(format!("--alpha is required for measure {kind:?}")))?;
    Ok(AlphaOrder::new(a)?)
}

fn solver_fields(rec: Record, r: &MeasureResult) -> Record {
    rec.with("value_bits", Field::Num(r.value.bits()))
        .with("converged", Field::Bool(r.converged))
        .with("iters", Field::Int(r.iters as u64))
        .with("starts", Field::Int(r.starts_used as u64))
        .with("regime", Field::Text(r.regime.to_string()))
        .with("qx_opt", dist(&r.qx_opt))
        .with("qy_opt", dist(&r.qy_opt))
}

pub fn measure(
    j: &JointPmf,
    kind: MeasureKind,
    alpha: Option<f64>,
    oracle: bool,
    cfg: &SolverConfig,
) -> Result<Computed> {
    cfg.validate()?;
    let product = || JointPmf::product(&j.marginal_x(), &j.marginal_y()).flatten();
    let name = format!("{kind:?}");
    let mut converged = true;
    let rec = match kind {
        MeasureKind::I => Record::new()
            .with("measure", Field::Text(name))
            .with("value_bits", Field::Num(mutual_information(j).bits())),
        MeasureKind::J | MeasureKind::K => {
            let a = require_alpha(alpha, kind)?;
            let (r, m) = if kind == MeasureKind::J {
                (compute_j_alpha(j, a, cfg)?, Measure::J)
            } else {
                (compute_k_alpha(j, a, cfg)?, Measure::K)
            };
            converged = r.converged;
            let mut rec = solver_fields(
                Record::new()
                    .with("measure", Field::Text(name))
                    .with("alpha", Field::Num(a.value())),
                &r,
            );
            if oracle {
                let o = brute_force_oracle(j, a, cfg.grid_steps, m)?;
                rec = rec.with("oracle_bits", Field::Num(o.bits()));
            }
            rec
        }
        MeasureKind::D => {
            let a = require_alpha(alpha, kind)?;
            Record::new()
                .with("measure", Field::Text(name))
                .with("alpha", Field::Num(a.value()))
                .with("value_bits", Field::Num(renyi_divergence(&j.flatten(), &product(), a).bits()))
        }
        MeasureKind::Delta => {
            let a = require_alpha(alpha, kind)?;
            let v = relative_alpha_entropy(&j.flatten(), &product(), a);
            Record::new()
                .with("measure", Field::Text(name))
                .with("alpha", Field::Num(a.value()))
                .with("value_bits", Field::Num(v.bits()))
        }
        MeasureKind::H => {
            let a = require_alpha(alpha, kind)?;
            Record::new()
                .with("measure", Field::Text(name))
                .with("alpha", Field::Num(a.value()))
                .with("value_bits", Field::Num(renyi_entropy(&j.flatten(), a).bits()))
                .with("x_bits", Field::Num(renyi_entropy(&j.marginal_x(), a).bits()))
                .with("y_bits", Field::Num(renyi_entropy(&j.marginal_y(), a).bits()))
        }
    };
    Ok(Computed {
        records: vec![rec],
        converged,
    })
}

/// `steps` orders from `lo` to `hi` inclusive, evenly spaced.
pub fn alpha_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(CliError::Usage(format!(
            "need 0 < --alpha-min < --alpha-max, got {lo} and {hi}"
        )));
    }
    if steps < 2 {
        return Err(CliError::Usage(format!("--steps must be >= 2, got {steps}")));
    }
    let h = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| if k + 1 == steps { hi } else { lo + h * k as f64 })
        .collect())
}

pub fn sweep(
    j: &JointPmf,
    alphas: &[f64],
    only: Option<SweepMeasure>,
    cfg: &SolverConfig,
) -> Result<Computed> {
    cfg.validate()?;
    let want_j = only != Some(SweepMeasure::K);
    let want_k = only != Some(SweepMeasure::J);
    let rows: Vec<Result<(Option<MeasureResult>, Option<MeasureResult>)>> = alphas
        .par_iter()
        .map(|&al| {
            let a = AlphaOrder::new(al)?;
            let jr = want_j.then(|| compute_j_alpha(j, a, cfg)).transpose()?;
            let kr = want_k.then(|| compute_k_alpha(j, a, cfg)).transpose()?;
            Ok((jr, kr))
        })
        .collect();

    let mut converged = true;
    let mut records = Vec::with_capacity(rows.len());
    for (&al, row) in alphas.iter().zip(rows) {
        let (jr, kr) = row?;
        converged &= jr.iter().chain(&kr).all(|r| r.converged);
        let value = |r: &Option<MeasureResult>| r.as_ref().map_or(Field::Empty, |r| Field::Num(r.value.bits()));
        let flag = |r: &Option<MeasureResult>| r.as_ref().map_or(Field::Empty, |r| Field::Bool(r.converged));
        let iters = |r: &Option<MeasureResult>| r.as_ref().map_or(Field::Empty, |r| Field::Int(r.iters as u64));
        records.push(
            Record::new()
                .with("alpha", Field::Num(al))
                .with("j_value", value(&jr))
                .with("k_value", value(&kr))
                .with("j_converged", flag(&jr))
                .with("k_converged", flag(&kr))
                .with("j_iters", iters(&jr))
                .with("k_iters", iters(&kr)),
        );
    }
    Ok(Computed { records, converged })
}

pub fn region(j: &JointPmf, rho: f64, cfg: &SolverConfig) -> Result<Computed> {
    let r = rate_region(j, rho, cfg)?;
    let [(ax, ay), (bx, by)] = r.corners();
    let rec = Record::new()
        .with("rho", Field::Num(rho))
        .with("alpha", Field::Num(r.alpha()))
        .with("rx_min", Field::Num(r.rx_min.bits()))
        .with("ry_min", Field::Num(r.ry_min.bits()))
        .with("sum_min", Field::Num(r.sum_min.bits()))
        .with("k_value", Field::Num(r.k_value.bits()))
        .with("corner_a_rx", Field::Num(ax))
        .with("corner_a_ry", Field::Num(ay))
        .with("corner_b_rx", Field::Num(bx))
        .with("corner_b_ry", Field::Num(by))
        .with("converged", Field::Bool(r.converged));
    Ok(Computed {
        records: vec![rec],
        converged: r.converged,
    })
}

pub fn simulate(j: &JointPmf, params: &SimParams, cfg: &SolverConfig) -> Result<Computed> {
    let o = simulate_list_moment(j, params)?;
    let r = rate_region(j, params.rho, cfg)?;
    let rec = Record::new()
        .with("n", Field::Int(o.n as u64))
        .with("rx", Field::Num(o.rx))
        .with("ry", Field::Num(o.ry))
        .with("rho", Field::Num(o.rho))
        .with("moment_estimate", Field::Num(o.moment_estimate))
        .with("std_error", Field::Num(o.std_error))
        .with("method", Field::Text(o.method.to_string()))
        .with("trials", Field::Int(o.trials as u64))
        .with("seed", Field::Int(o.seed))
        .with("bins_x", Field::Int(o.bins_x))
        .with("bins_y", Field::Int(o.bins_y))
        .with("rx_min", Field::Num(r.rx_min.bits()))
        .with("ry_min", Field::Num(r.ry_min.bits()))
        .with("sum_min", Field::Num(r.sum_min.bits()))
        .with("in_region", Field::Bool(r.contains(o.rx, o.ry, 0.0)));
    Ok(Computed {
        records: vec![rec],
        converged: r.converged,
    })
}
