use std::collections::HashMap;
use std::fmt;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pmf::JointPmf;

/// Largest `|X|^n · |Y|^n` enumerated in exact mode. Monte Carlo mode applies
/// the same cap to each side separately.
pub const EXACT_PAIR_CAP: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimMethod {
    Exact,
    MonteCarlo,
}

impl fmt::Display for SimMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimMethod::Exact => "exact",
            SimMethod::MonteCarlo => "monte_carlo",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimParams {
    /// Block length.
    pub n: usize,
    /// Rates in bits per source symbol.
    pub rx: f64,
    pub ry: f64,
    pub rho: f64,
    /// Exact mode: independent binnings averaged. Monte Carlo: samples, each
    /// with a fresh binning and a fresh source block.
    pub trials: usize,
    pub seed: u64,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutcome {
    pub n: usize,
    pub rx: f64,
    pub ry: f64,
    pub rho: f64,
    /// Estimate of `E[|list|^ρ]`, averaged over random binnings.
    pub moment_estimate: f64,
    /// Standard error of `moment_estimate` across trials (0 for one trial).
    pub std_error: f64,
    pub method: SimMethod,
    pub trials: usize,
    pub seed: u64,
    pub bins_x: u64,
    pub bins_y: u64,
}

/// `⌊2^{nR}⌋`, saturating at `u64::MAX`. A relative nudge of 1e-12 keeps
/// rates such as `log2(3)/n` from flooring one bin short.
fn bin_count(n: usize, rate: f64) -> u64 {
    let v = (n as f64 * rate).exp2() * (1.0 + 1e-12);
    if v >= u64::MAX as f64 {
        u64::MAX
    } else {
        (v.floor() as u64).max(1)
    }
}

fn validate(j: &JointPmf, p: &SimParams) -> Result<(usize, usize)> {
    if p.n == 0 {
        return Err(Error::Simulation("block length must be >= 1".into()));
    }
    if p.trials == 0 {
        return Err(Error::Simulation("trials must be >= 1".into()));
    }
    for (name, r) in [("rx", p.rx), ("ry", p.ry)] {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::Simulation(format!("{name} must be a finite rate >= 0, got {r}")));
        }
    }
    if !(p.rho > 0.0 && p.rho.is_finite()) {
        return Err(Error::Simulation(format!("rho must be > 0, got {}", p.rho)));
    }
    let sx = (j.x_len() as f64).powi(p.n as i32);
    let sy = (j.y_len() as f64).powi(p.n as i32);
    if p.exact && sx * sy > EXACT_PAIR_CAP {
        return Err(Error::EnumerationCap { pairs: sx * sy, cap: EXACT_PAIR_CAP });
    }
    if !p.exact && sx.max(sy) > EXACT_PAIR_CAP {
        return Err(Error::EnumerationCap { pairs: sx.max(sy), cap: EXACT_PAIR_CAP });
    }
    Ok((sx as usize, sy as usize))
}

/// For every sequence, the number of sequences sharing its bin under a fresh
/// uniform assignment into `m` bins.
fn bin_occupancy(rng: &mut ChaCha8Rng, len: usize, m: u64) -> Vec<u32> {
    let bins: Vec<u64> = (0..len).map(|_| rng.random_range(0..m)).collect();
    if m <= 4 * len as u64 {
        let mut counts = vec![0u32; m as usize];
        bins.iter().for_each(|&b| counts[b as usize] += 1);
        bins.iter().map(|&b| counts[b as usize]).collect()
    } else {
        let mut counts: HashMap<u64, u32> = HashMap::with_capacity(len);
        bins.iter().for_each(|&b| *counts.entry(b).or_default() += 1);
        bins.iter().map(|b| counts[b]).collect()
    }
}

/// RNG for trial `t`; even streams drive the binning, odd ones the source.
fn trial_rng(seed: u64, t: usize, source: bool) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * t as u64 + source as u64);
    rng
}

/// `P^n` as a `|X|^n × |Y|^n` row-major matrix, first symbol most significant.
fn block_law(j: &JointPmf, n: usize) -> Vec<f64> {
    let (ax, ay) = (j.x_len(), j.y_len());
    let mut cur = vec![1.0];
    let (mut rows, mut cols) = (1usize, 1usize);
    for _ in 0..n {
        let (nr, nc) = (rows * ax, cols * ay);
        let mut next = vec![0.0; nr * nc];
        for xi in 0..rows {
            for yi in 0..cols {
                let w = cur[xi * cols + yi];
                if w == 0.0 {
                    continue;
                }
                for a in 0..ax {
                    for b in 0..ay {
                        next[(xi * ax + a) * nc + yi * ay + b] = w * j.get(a, b);
                    }
                }
            }
        }
        cur = next;
        rows = nr;
        cols = nc;
    }
    cur
}

fn mean_and_se(v: &[f64]) -> (f64, f64) {
    let t = v.len() as f64;
    let mean = v.iter().sum::<f64>() / t;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1.0);
    (mean, (var / t).sqrt())
}

/// Estimate `E[|L|^ρ]` for separate uniform random binning of `X^n` into
/// `⌊2^{n·rx}⌋` bins and `Y^n` into `⌊2^{n·ry}⌋` bins, where `L` is the set
/// of all pairs sharing both bins with the source output, probable or not.
///
/// Trial `t` uses binning stream `(seed, t)`, so exact and Monte Carlo runs
/// with the same seed see the same encoders.
pub fn simulate_list_moment(j: &JointPmf, p: &SimParams) -> Result<SimOutcome> {
    let (sx, sy) = validate(j, p)?;
    let (mx, my) = (bin_count(p.n, p.rx), bin_count(p.n, p.ry));

    let per_trial: Vec<f64> = if p.exact {
        let law = block_law(j, p.n);
        (0..p.trials)
            .map(|t| {
                let mut rng = trial_rng(p.seed, t, false);
                // |L| = N_x · N_y factorizes, and so does its ρ-th power
                let cx: Vec<f64> = bin_occupancy(&mut rng, sx, mx)
                    .into_iter()
                    .map(|c| (c as f64).powf(p.rho))
                    .collect();
                let cy: Vec<f64> = bin_occupancy(&mut rng, sy, my)
                    .into_iter()
                    .map(|c| (c as f64).powf(p.rho))
                    .collect();
                law.chunks(sy)
                    .zip(&cx)
                    .map(|(row, &wx)| {
                        wx * row.iter().zip(&cy).map(|(&q, &wy)| q * wy).sum::<f64>()
                    })
                    .sum()
            })
            .collect()
    } else {
        let pairs = WeightedIndex::new(j.probs())
            .map_err(|e| Error::Simulation(format!("source law: {e}")))?;
        let (ax, ay) = (j.x_len(), j.y_len());
        (0..p.trials)
            .map(|t| {
                let mut rng = trial_rng(p.seed, t, false);
                let cx = bin_occupancy(&mut rng, sx, mx);
                let cy = bin_occupancy(&mut rng, sy, my);
                let mut src = trial_rng(p.seed, t, true);
                let (mut xi, mut yi) = (0usize, 0usize);
                for _ in 0..p.n {
                    let k = pairs.sample(&mut src);
                    xi = xi * ax + k / ay;
                    yi = yi * ay + k % ay;
                }
                (cx[xi] as f64 * cy[yi] as f64).powf(p.rho)
            })
            .collect()
    };

    let (moment, se) = mean_and_se(&per_trial);
    Ok(SimOutcome {
        n: p.n,
        rx: p.rx,
        ry: p.ry,
        rho: p.rho,
        // every trial value is a convex combination of values >= 1
        moment_estimate: moment.max(1.0),
        std_error: se,
        method: if p.exact { SimMethod::Exact } else { SimMethod::MonteCarlo },
        trials: p.trials,
        seed: p.seed,
        bins_x: mx,
        bins_y: my,
    })
}

/// Covariance under `P^n` of the two side occupancies `N_x(f(X^n))` and
/// `N_y(g(Y^n))`, for the binning of trial 0. Zero for product sources.
pub fn side_list_covariance(j: &JointPmf, n: usize, rx: f64, ry: f64, seed: u64) -> Result<f64> {
    let p = SimParams { n, rx, ry, rho: 1.0, trials: 1, seed, exact: true };
    let (sx, sy) = validate(j, &p)?;
    let mut rng = trial_rng(seed, 0, false);
    let cx = bin_occupancy(&mut rng, sx, bin_count(n, rx));
    let cy = bin_occupancy(&mut rng, sy, bin_count(n, ry));
    let law = block_law(j, n);
    let (mut exy, mut ex, mut ey) = (0.0, 0.0, 0.0);
    for (xi, row) in law.chunks(sy).enumerate() {
        for (yi, &q) in row.iter().enumerate() {
            let (a, b) = (cx[xi] as f64, cy[yi] as f64);
            exy += q * a * b;
            ex += q * a;
            ey += q * b;
        }
    }
    Ok(exy - ex * ey)
}
