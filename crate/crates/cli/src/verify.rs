//! Built-in self-check: every library invariant exercised on small seeded
//! instances, plus the reference values of the counterexample joint.

use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use renyidep::{
    apply_channel, brute_force_oracle, compute_j_alpha, compute_k_alpha, j_dual_certificate,
    j_dual_value, j_objective_reduced, j_self_closed_form, k_self_closed_form,
    kl_decomposition_check, kl_divergence, min_entropy, mutual_information, optimal_qy_given_qx,
    rate_region, relative_alpha_entropy, renyi_divergence, renyi_entropy, shannon_entropy,
    side_list_covariance, simulate_list_moment, tilt_joint, tilt_pmf, AlphaOrder, AlphaRegime,
    ConditionalPmf, Error, JointPmf, Measure, Pmf, SimParams, SolverConfig,
};

use crate::format::{parse_joint, to_json, to_toml, Layout};

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub cfg: SolverConfig,
    /// Added to every computed K value; a nonzero offset must make the
    /// reference items fail.
    pub k_offset: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            cfg: SolverConfig::default(),
            k_offset: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItemResult {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = Result<String, String>;
type Item = (&'static str, &'static str, fn(&VerifyOptions) -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn a(v: f64) -> AlphaOrder {
    AlphaOrder::new(v).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_probs(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| r.random_range(0.02..1.0)).collect();
    let s: f64 = v.iter().sum();
    v.into_iter().map(|t| t / s).collect()
}

fn random_pmf(r: &mut ChaCha8Rng, n: usize) -> Pmf {
    Pmf::from_probs(random_probs(r, n)).unwrap()
}

fn random_joint(r: &mut ChaCha8Rng, nx: usize, ny: usize) -> JointPmf {
    let p = random_probs(r, nx * ny);
    let rows: Vec<&[f64]> = p.chunks(ny).collect();
    JointPmf::from_rows(&rows).unwrap()
}

fn random_channel(r: &mut ChaCha8Rng, given: &[String], out: usize) -> ConditionalPmf {
    let rows = (0..given.len()).map(|_| random_probs(r, out)).collect();
    ConditionalPmf::new(given.to_vec(), (0..out).map(|k| format!("z{k}")).collect(), rows).unwrap()
}

pub fn counterexample() -> JointPmf {
    JointPmf::from_rows(&[
        [0.43, 0.43, 0.02],
        [0.01, 0.01, 0.04],
        [0.01, 0.01, 0.04],
    ])
    .unwrap()
}

pub fn counterexample_channel() -> ConditionalPmf {
    ConditionalPmf::from_rows("y", "z", &[[1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.5, 0.5]]).unwrap()
}

fn j_val(j: &JointPmf, al: f64, o: &VerifyOptions) -> f64 {
    compute_j_alpha(j, a(al), &o.cfg).unwrap().value.bits()
}

fn k_val(j: &JointPmf, al: f64, o: &VerifyOptions) -> f64 {
    compute_k_alpha(j, a(al), &o.cfg).unwrap().value.bits() + o.k_offset
}

fn both(j: &JointPmf, al: f64, o: &VerifyOptions) -> [(&'static str, f64); 2] {
    [("J", j_val(j, al, o)), ("K", k_val(j, al, o))]
}

// ---- prob_core -------------------------------------------------------------

fn pmf_validation(_: &VerifyOptions) -> Check {
    ensure(matches!(Pmf::from_probs(vec![0.5, -0.1, 0.6]), Err(Error::InvalidProbability { .. })), || "negative entry accepted".into())?;
    ensure(matches!(Pmf::from_probs(vec![0.5, 0.6]), Err(Error::NotNormalized { .. })), || "sum 1.1 accepted".into())?;
    let p = Pmf::from_probs(vec![0.5, 0.5 + 5e-10]).map_err(|e| e.to_string())?;
    ensure(p.renormalized() && close(p.probs().iter().sum(), 1.0, 1e-12), || "small deviation not renormalized".into())?;
    ensure(!Pmf::from_probs(vec![0.25; 4]).unwrap().renormalized(), || "exact input flagged".into())?;
    ensure(matches!(Pmf::new(vec!["a".into(), "a".into()], vec![0.5, 0.5]), Err(Error::DuplicateLabel(_))), || "duplicate labels accepted".into())?;
    ensure(matches!(Pmf::new(vec!["a".into()], vec![0.5, 0.5]), Err(Error::LabelCount { .. })), || "label count mismatch accepted".into())?;
    ensure(JointPmf::from_rows(&[[0.5, 0.5], [0.5, 0.5]]).is_err(), || "joint summing to 2 accepted".into())?;
    let ch = ConditionalPmf::from_rows("y", "z", &[[0.5, 0.6]]);
    ensure(ch.is_err(), || "channel row summing to 1.1 accepted".into())?;
    Ok("negative, unnormalized, duplicate and mismatched inputs rejected; 5e-10 deviation renormalized".into())
}

fn marginals(_: &VerifyOptions) -> Check {
    let (p, q) = (Pmf::from_probs(vec![0.2, 0.8]).unwrap(), Pmf::from_probs(vec![0.1, 0.3, 0.6]).unwrap());
    let prod = JointPmf::product(&p, &q);
    ensure(prod.marginal_x().probs().iter().zip(p.probs()).all(|(u, v)| close(*u, *v, 1e-15)), || "product marginal".into())?;
    let d = JointPmf::diagonal(&Pmf::uniform(3)).marginal_x();
    ensure(d.probs().iter().all(|&v| close(v, 1.0 / 3.0, 1e-15)), || "diagonal marginal".into())?;
    let m = counterexample().marginal_x();
    let expect = [0.88, 0.06, 0.06];
    ensure(m.probs().iter().zip(expect).all(|(u, v)| close(*u, v, 1e-12)), || format!("counterexample P_X = {:?}", m.probs()))?;
    let mut r = rng(11);
    for _ in 0..20 {
        let j = random_joint(&mut r, 3, 4);
        let (mx, my) = (j.marginal_x(), j.marginal_y());
        ensure(close(mx.probs().iter().sum(), 1.0, 1e-12) && close(my.probs().iter().sum(), 1.0, 1e-12), || "marginal not normalized".into())?;
    }
    Ok("P_X of the counterexample = (0.88, 0.06, 0.06)".into())
}

fn alpha_regimes(_: &VerifyOptions) -> Check {
    let cases = [
        (0.1, AlphaRegime::BelowHalf),
        (0.4999, AlphaRegime::BelowHalf),
        (0.5, AlphaRegime::HalfToOne),
        (0.9, AlphaRegime::HalfToOne),
        (1.0, AlphaRegime::One),
        (1.0 + 1e-13, AlphaRegime::One),
        (1.5, AlphaRegime::OneToTwo),
        (2.0, AlphaRegime::TwoAndAbove),
        (50.0, AlphaRegime::TwoAndAbove),
    ];
    for (v, want) in cases {
        let got = a(v).regime();
        ensure(got == want, || format!("α = {v}: {got:?}, expected {want:?}"))?;
    }
    for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
        ensure(AlphaOrder::new(bad).is_err(), || format!("α = {bad} accepted"))?;
    }
    Ok("five regimes, boundaries and invalid orders".into())
}

fn tilt_properties(_: &VerifyOptions) -> Check {
    let t = tilt_pmf(&Pmf::from_probs(vec![0.8, 0.2]).unwrap(), a(2.0));
    ensure(close(t.probs()[0], 0.9412, 5e-5) && close(t.probs()[1], 0.0588, 5e-5), || format!("(0.8, 0.2) tilted by 2: {:?}", t.probs()))?;
    let u = tilt_pmf(&Pmf::uniform(4), a(3.3));
    ensure(u.probs().iter().all(|&v| close(v, 0.25, 1e-15)), || "uniform not fixed".into())?;
    let mut r = rng(12);
    for _ in 0..50 {
        let mut v = random_probs(&mut r, 4);
        v[0] = 0.0;
        let s: f64 = v.iter().sum();
        let p = Pmf::from_probs(v.iter().map(|t| t / s).collect()).unwrap();
        let (al, be) = (r.random_range(0.1..4.0), r.random_range(0.1..4.0));
        let twice = tilt_pmf(&tilt_pmf(&p, a(al)), a(be));
        let once = tilt_pmf(&p, a(al * be));
        ensure(twice.probs().iter().zip(once.probs()).all(|(x, y)| close(*x, *y, 1e-12)), || format!("composition α={al} β={be}"))?;
        let back = tilt_pmf(&tilt_pmf(&p, a(al)), a(1.0 / al));
        ensure(back.probs().iter().zip(p.probs()).all(|(x, y)| close(*x, *y, 1e-12)), || format!("inverse α={al}"))?;
        ensure(tilt_pmf(&p, a(1.0)) == p, || "α = 1 changed p".into())?;
    }
    Ok("(0.8, 0.2) → (0.9412, 0.0588); composition and inversion on 50 PMFs".into())
}

fn tilt_product(_: &VerifyOptions) -> Check {
    let mut r = rng(13);
    for _ in 0..30 {
        let (p, q) = (random_pmf(&mut r, 3), random_pmf(&mut r, 2));
        let al = r.random_range(0.1..5.0);
        let t = tilt_joint(&JointPmf::product(&p, &q), a(al));
        let (tp, tq) = (tilt_pmf(&p, a(al)), tilt_pmf(&q, a(al)));
        ensure(t.marginal_x().probs().iter().zip(tp.probs()).all(|(x, y)| close(*x, *y, 1e-12)), || format!("α={al}"))?;
        ensure(t.is_product(1e-12), || "tilted product is not a product".into())?;
        let prod = JointPmf::product(&tp, &tq);
        ensure(t.probs().iter().zip(prod.probs()).all(|(x, y)| close(*x, *y, 1e-12)), || "not the product of tilts".into())?;
    }
    let u = JointPmf::product(&Pmf::uniform(2), &Pmf::uniform(3));
    ensure(tilt_joint(&u, a(2.5)).probs().iter().zip(u.probs()).all(|(x, y)| close(*x, *y, 1e-15)), || "product of uniforms not fixed".into())?;
    Ok("tilt of products on 30 instances".into())
}

fn channels(_: &VerifyOptions) -> Check {
    let j = counterexample();
    let jz = apply_channel(&j, &counterexample_channel()).map_err(|e| e.to_string())?;
    let col0: Vec<f64> = (0..3).map(|x| jz.get(x, 0)).collect();
    ensure(col0.iter().zip([0.86, 0.02, 0.02]).all(|(u, v)| close(*u, v, 1e-12)), || format!("P_XZ column 0 = {col0:?}"))?;
    let id = apply_channel(&j, &ConditionalPmf::identity(j.y_labels())).unwrap();
    ensure(id.probs() == j.probs(), || "identity channel changed j".into())?;
    let constant = ConditionalPmf::from_rows("y", "z", &[[1.0], [1.0], [1.0]]).unwrap();
    let c = apply_channel(&j, &constant).unwrap();
    ensure(c.is_product(1e-15) && close(mutual_information(&c).bits(), 0.0, 1e-15), || "constant output not independent".into())?;
    let mut r = rng(14);
    for _ in 0..30 {
        let j = random_joint(&mut r, 3, 3);
        let ch = random_channel(&mut r, j.y_labels(), 4);
        let z = apply_channel(&j, &ch).unwrap();
        ensure(close(z.probs().iter().sum(), 1.0, 1e-12), || "mass not preserved".into())?;
        ensure(z.marginal_x().probs().iter().zip(j.marginal_x().probs()).all(|(u, v)| close(*u, *v, 1e-12)), || "X marginal changed".into())?;
    }
    Ok("P_XZ column 0 = (0.86, 0.02, 0.02); mass and X marginal preserved".into())
}

// ---- info_measures ---------------------------------------------------------

fn entropy_examples(_: &VerifyOptions) -> Check {
    let q = Pmf::from_probs(vec![0.75, 0.25]).unwrap();
    let h = shannon_entropy(&q).bits();
    ensure(close(h, 0.8113, 5e-5), || format!("H(0.75, 0.25) = {h}"))?;
    let h2 = renyi_entropy(&q, a(2.0)).bits();
    ensure(close(h2, 0.6781, 5e-5), || format!("H_2(0.75, 0.25) = {h2}"))?;
    let hm = min_entropy(&Pmf::from_probs(vec![0.88, 0.06, 0.06]).unwrap()).bits();
    ensure(close(hm, 0.1844, 5e-5), || format!("H_inf = {hm}"))?;
    ensure(close(shannon_entropy(&Pmf::uniform(4)).bits(), 2.0, 1e-15), || "uniform 4".into())?;
    ensure(shannon_entropy(&Pmf::from_probs(vec![1.0, 0.0]).unwrap()).bits() == 0.0, || "point mass".into())?;
    ensure(renyi_entropy(&q, a(1.0)) == shannon_entropy(&q), || "α = 1 is not Shannon".into())?;
    let mut r = rng(21);
    for _ in 0..30 {
        let p = random_pmf(&mut r, 5);
        for al in [0.2, 0.7, 1.0, 3.0] {
            let v = renyi_entropy(&p, a(al)).bits();
            ensure((0.0..=5f64.log2() + 1e-12).contains(&v), || format!("H_{al} = {v} out of range"))?;
        }
        ensure(close(renyi_entropy(&Pmf::uniform(5), a(r.random_range(0.1..9.0))).bits(), 5f64.log2(), 1e-12), || "uniform".into())?;
    }
    Ok(format!("H = {h:.4}, H_2 = {h2:.4}, H_inf = {hm:.4}"))
}

fn divergence_examples(_: &VerifyOptions) -> Check {
    let p = Pmf::from_probs(vec![0.5, 0.5]).unwrap();
    let kl = kl_divergence(&p, &Pmf::from_probs(vec![0.75, 0.25]).unwrap()).bits();
    ensure(close(kl, 0.2075, 5e-5), || format!("D = {kl}"))?;
    let q = Pmf::from_probs(vec![0.9, 0.1]).unwrap();
    let d2 = renyi_divergence(&p, &q, a(2.0)).bits();
    ensure(close(d2, (0.25f64 / 0.9 + 0.25 / 0.1).log2(), 1e-14), || format!("D_2 = {d2}"))?;
    let direct = relative_alpha_entropy(&p, &q, a(2.0)).bits();
    let via = renyi_divergence(&tilt_pmf(&p, a(2.0)), &tilt_pmf(&q, a(2.0)), a(0.5)).bits();
    ensure(close(direct, via, 1e-10), || format!("Δ_2 {direct} vs {via}"))?;
    let (e0, e1) = (Pmf::from_probs(vec![1.0, 0.0]).unwrap(), Pmf::from_probs(vec![0.0, 1.0]).unwrap());
    ensure(kl_divergence(&e0, &e1).is_infinite(), || "disjoint KL finite".into())?;
    let holes = Pmf::from_probs(vec![0.5, 0.5, 0.0]).unwrap();
    let full = Pmf::from_probs(vec![0.2, 0.3, 0.5]).unwrap();
    ensure(renyi_divergence(&full, &holes, a(2.0)).is_infinite(), || "α > 1 support violation finite".into())?;
    ensure(renyi_divergence(&full, &holes, a(0.5)).is_finite(), || "α < 1 partial overlap infinite".into())?;
    Ok(format!("D = {kl:.4}, D_2 = {d2:.4}, Δ_2 = {direct:.6} by both routes"))
}

fn divergence_order_and_sign(_: &VerifyOptions) -> Check {
    let mut r = rng(22);
    let grid: Vec<f64> = (1..=30).map(|k| 0.15 * k as f64).collect();
    for _ in 0..30 {
        let (p, q) = (random_pmf(&mut r, 4), random_pmf(&mut r, 4));
        let vals: Vec<f64> = grid.iter().map(|&al| renyi_divergence(&p, &q, a(al)).bits()).collect();
        ensure(vals.windows(2).all(|w| w[1] >= w[0] - 1e-12), || format!("D_α not monotone: {vals:?}"))?;
        for al in [0.3, 0.5, 1.0, 1.5, 2.5] {
            let d = renyi_divergence(&p, &q, a(al)).bits();
            ensure(d > 0.0, || format!("D_{al}(P||Q) = {d} for P ≠ Q"))?;
            ensure(renyi_divergence(&p, &p, a(al)).bits().abs() < 1e-12, || "D(P||P) ≠ 0".into())?;
            ensure(relative_alpha_entropy(&p, &q, a(al)).bits() >= 0.0, || "Δ < 0".into())?;
        }
    }
    Ok("monotone in α on 30 pairs x 30 orders; zero iff P = Q".into())
}

fn tilt_identity(_: &VerifyOptions) -> Check {
    let mut r = rng(23);
    for i in 0..60 {
        let mut p = random_probs(&mut r, 4);
        let mut q = random_probs(&mut r, 4);
        if i % 3 == 0 {
            p[r.random_range(0..4)] = 0.0;
        }
        if i % 4 == 0 {
            q[r.random_range(0..4)] = 0.0;
        }
        let norm = |v: Vec<f64>| {
            let s: f64 = v.iter().sum();
            Pmf::from_probs(v.into_iter().map(|t| t / s).collect()).unwrap()
        };
        let (p, q) = (norm(p), norm(q));
        let al = [0.3, 0.7, 1.6, 3.0][i % 4];
        let lhs = relative_alpha_entropy(&p, &q, a(al));
        let rhs = renyi_divergence(&tilt_pmf(&p, a(al)), &tilt_pmf(&q, a(al)), a(1.0 / al));
        ensure(lhs.is_infinite() == rhs.is_infinite(), || format!("#{i}: {lhs} vs {rhs}"))?;
        ensure(lhs.is_infinite() || close(lhs.bits(), rhs.bits(), 1e-9), || format!("#{i}: {lhs} vs {rhs}"))?;
    }
    Ok("Δ_α = D_{1/α} of the tilts on 60 pairs, with zeros".into())
}

fn alpha_one_continuity(_: &VerifyOptions) -> Check {
    let mut r = rng(24);
    for _ in 0..20 {
        let (p, q) = (random_pmf(&mut r, 3), random_pmf(&mut r, 3));
        for al in [1.0 - 1e-4, 1.0 + 1e-4] {
            let pairs = [
                (renyi_entropy(&p, a(al)), shannon_entropy(&p)),
                (renyi_divergence(&p, &q, a(al)), kl_divergence(&p, &q)),
                (relative_alpha_entropy(&p, &q, a(al)), kl_divergence(&p, &q)),
            ];
            for (near, at) in pairs {
                ensure(close(near.bits(), at.bits(), 1e-3), || format!("α={al}: {near} vs {at}"))?;
            }
        }
    }
    Ok("H, D, Δ at 1 ± 1e-4 within 1e-3 bits".into())
}

fn kl_decomposition(_: &VerifyOptions) -> Check {
    let mut r = rng(25);
    for _ in 0..20 {
        let j = random_joint(&mut r, 3, 3);
        let (qx, qy) = (random_pmf(&mut r, 3), random_pmf(&mut r, 3));
        let d = kl_decomposition_check(&j, &qx, &qy);
        let direct = kl_divergence(&j.flatten(), &JointPmf::product(&qx, &qy).flatten());
        ensure(close(d.total().bits(), direct.bits(), 1e-10), || format!("{} vs {}", d.total(), direct))?;
        let at_marg = kl_decomposition_check(&j, &j.marginal_x(), &j.marginal_y());
        ensure(at_marg.x_mismatch.bits().abs() < 1e-12 && at_marg.y_mismatch.bits().abs() < 1e-12, || "mismatch at marginals".into())?;
    }
    let ind = JointPmf::product(&Pmf::uniform(2), &Pmf::uniform(3));
    let d = kl_decomposition_check(&ind, &Pmf::uniform(2), &Pmf::uniform(3));
    ensure(d.mutual_information.bits().abs() < 1e-12, || "independent MI term".into())?;
    Ok("D(P||Q_X Q_Y) = I + D(P_X||Q_X) + D(P_Y||Q_Y) on 20 instances".into())
}

fn mutual_information_values(_: &VerifyOptions) -> Check {
    let prod = JointPmf::product(&Pmf::from_probs(vec![0.3, 0.7]).unwrap(), &Pmf::uniform(3));
    ensure(mutual_information(&prod).bits().abs() < 1e-12, || "product".into())?;
    for m in [2, 3, 5] {
        let v = mutual_information(&JointPmf::diagonal(&Pmf::uniform(m))).bits();
        ensure(close(v, (m as f64).log2(), 1e-12), || format!("diagonal {m}: {v}"))?;
    }
    let v = mutual_information(&counterexample()).bits();
    ensure(close(v, 0.221, 1e-3), || format!("counterexample I = {v}"))?;
    Ok(format!("I(counterexample) = {v:.4}"))
}

// ---- dependence_solver -----------------------------------------------------

fn config_validation(o: &VerifyOptions) -> Check {
    let j = counterexample();
    let bad = [
        SolverConfig { tol: 0.0, ..o.cfg.clone() },
        SolverConfig { max_iters: 0, ..o.cfg.clone() },
        SolverConfig { n_starts: Some(0), ..o.cfg.clone() },
        SolverConfig { grid_steps: 1, ..o.cfg.clone() },
    ];
    for c in &bad {
        ensure(matches!(compute_j_alpha(&j, a(2.0), c), Err(Error::Config(_))), || format!("accepted {c:?}"))?;
    }
    let capped = SolverConfig { max_iters: 1, ..o.cfg.clone() };
    let r = compute_j_alpha(&random_joint(&mut rng(31), 3, 3), a(2.0), &capped).unwrap();
    ensure(!r.converged, || "one sweep reported converged".into())?;
    Ok("invalid settings rejected; iteration cap flags non-convergence".into())
}

fn inner_minimizer(_: &VerifyOptions) -> Check {
    let mut r = rng(32);
    for i in 0..10 {
        let j = random_joint(&mut r, 3, 2);
        let qx = random_pmf(&mut r, 3).with_labels(j.x_labels().to_vec()).unwrap();
        let al = [0.4, 0.8, 2.0][i % 3];
        let reduced = j_objective_reduced(&j, &qx, a(al)).unwrap().bits();
        let qy = optimal_qy_given_qx(&j, &qx, a(al)).unwrap();
        let at_opt = renyi_divergence(&j.flatten(), &JointPmf::product(&qx, &qy).flatten(), a(al)).bits();
        ensure(close(reduced, at_opt, 1e-10), || format!("#{i}: eliminated {reduced} vs {at_opt}"))?;
        for k in 0..=200 {
            let t = k as f64 / 200.0;
            let g = Pmf::new(j.y_labels().to_vec(), vec![t, 1.0 - t]).unwrap();
            let v = renyi_divergence(&j.flatten(), &JointPmf::product(&qx, &g).flatten(), a(al)).bits();
            ensure(v >= at_opt - 1e-12, || format!("#{i}: grid point {t} beats the minimizer"))?;
        }
    }
    ensure(j_objective_reduced(&counterexample(), &Pmf::uniform(3), a(1.0)).is_err(), || "α = 1 accepted".into())?;
    let diag = JointPmf::diagonal(&Pmf::uniform(2));
    let v = j_objective_reduced(&diag, &Pmf::uniform(2).with_labels(diag.x_labels().to_vec()).unwrap(), a(2.0)).unwrap().bits();
    ensure(close(v, 1.0, 1e-12), || format!("diagonal uniform, α = 2: {v}"))?;
    Ok("closed-form Q_Y beats a 200-step grid on 10 instances".into())
}

fn oracle_agreement(o: &VerifyOptions) -> Check {
    let mut r = rng(33);
    let joints: Vec<JointPmf> = (0..6).map(|i| random_joint(&mut r, 2, 2 + i % 2)).collect();
    let steps = o.cfg.grid_steps.min(400);
    let mut worst = 0.0f64;
    for (i, j) in joints.iter().enumerate() {
        for al in [0.3, 0.7, 2.0] {
            for m in [Measure::J, Measure::K] {
                let s = if m == Measure::J { j_val(j, al, o) } else { k_val(j, al, o) - o.k_offset };
                let g = brute_force_oracle(j, a(al), if j.y_len() == 3 { steps.min(120) } else { steps }, m).unwrap().bits();
                worst = worst.max((s - g).abs());
                ensure(close(s, g, 5e-4) && s <= g + 1e-9, || format!("#{i} {m:?} α={al}: solver {s}, grid {g}"))?;
            }
        }
    }
    Ok(format!("6 joints x 3 orders x {{J, K}}, max gap {worst:.1e} bits"))
}

fn witnesses(o: &VerifyOptions) -> Check {
    let mut r = rng(34);
    for i in 0..10 {
        let j = random_joint(&mut r, 3, 3);
        for al in [0.3, 0.8, 2.5] {
            let rj = compute_j_alpha(&j, a(al), &o.cfg).unwrap();
            let d = renyi_divergence(&j.flatten(), &JointPmf::product(&rj.qx_opt, &rj.qy_opt).flatten(), a(al)).bits();
            ensure(close(d, rj.value.bits(), 1e-9), || format!("#{i} J α={al}: {d} vs {}", rj.value))?;
            let rk = compute_k_alpha(&j, a(al), &o.cfg).unwrap();
            let dk = relative_alpha_entropy(&j.flatten(), &JointPmf::product(&rk.qx_opt, &rk.qy_opt).flatten(), a(al)).bits();
            ensure(close(dk, rk.value.bits(), 1e-9), || format!("#{i} K α={al}: {dk} vs {}", rk.value))?;
        }
    }
    Ok("objective at the witnesses reproduces J and K".into())
}

fn nonnegativity(o: &VerifyOptions) -> Check {
    let mut r = rng(35);
    for i in 0..10 {
        let j = random_joint(&mut r, 3, 2);
        let prod = JointPmf::product(&random_pmf(&mut r, 3), &random_pmf(&mut r, 2));
        for al in [0.3, 0.5, 1.0, 2.0] {
            for ((m, v), (_, vp)) in both(&j, al, o).into_iter().zip(both(&prod, al, o)) {
                ensure(v > 1e-9, || format!("#{i} {m} α={al}: dependent joint gives {v}"))?;
                ensure(vp.abs() <= 1e-9, || format!("#{i} {m} α={al}: product gives {vp}"))?;
            }
        }
    }
    Ok("positive on dependent joints, zero on products".into())
}

fn symmetry(o: &VerifyOptions) -> Check {
    let mut r = rng(36);
    for i in 0..10 {
        let j = random_joint(&mut r, 2, 3);
        for al in [0.3, 0.6, 1.0, 1.7, 3.0] {
            for ((m, v), (_, vt)) in both(&j, al, o).into_iter().zip(both(&j.transpose(), al, o)) {
                ensure(close(v, vt, 1e-9), || format!("#{i} {m} α={al}: {v} vs {vt}"))?;
            }
        }
    }
    Ok("J and K unchanged under transpose".into())
}

fn bounds(o: &VerifyOptions) -> Check {
    let mut r = rng(37);
    for i in 0..10 {
        let (nx, ny) = (2 + i % 3, 4);
        let j = random_joint(&mut r, nx, ny);
        let b = (nx.min(ny) as f64).log2() + 1e-9;
        for al in [0.2, 0.5, 1.0, 2.0, 5.0] {
            for (m, v) in both(&j, al, o) {
                ensure(v <= b, || format!("#{i} {m} α={al}: {v} > {b}"))?;
            }
        }
    }
    for (m, v) in both(&JointPmf::diagonal(&Pmf::uniform(4)), 2.0 - 1e-9, o) {
        ensure(close(v, 2.0, 1e-6), || format!("{m}: diagonal uniform 4 gives {v}"))?;
    }
    Ok("J, K ≤ log min(|X|, |Y|)".into())
}

fn data_processing(o: &VerifyOptions) -> Check {
    let mut r = rng(38);
    for i in 0..30 {
        let j = random_joint(&mut r, 3, 3);
        let z = apply_channel(&j, &random_channel(&mut r, j.y_labels(), 2 + i % 3)).unwrap();
        for al in [0.3, 0.5, 0.9, 1.0, 1.5, 3.0] {
            let (before, after) = (j_val(&j, al, o), j_val(&z, al, o));
            ensure(after <= before + 1e-7, || format!("#{i} α={al}: {after} > {before}"))?;
        }
    }
    Ok("J(X;Z) ≤ J(X;Y) under 30 random channels".into())
}

fn k_dpi_failure(o: &VerifyOptions) -> Check {
    let j = counterexample();
    let z = apply_channel(&j, &counterexample_channel()).unwrap();
    let (xy, xz) = (k_val(&j, 0.5, o), k_val(&z, 0.5, o));
    ensure(xz > xy, || format!("K_1/2(X;Z) = {xz:.3} ≤ K_1/2(X;Y) = {xy:.3}"))?;
    Ok(format!("K_1/2(X;Z) = {xz:.3} > K_1/2(X;Y) = {xy:.3}"))
}

fn additivity(o: &VerifyOptions) -> Check {
    let mut r = rng(39);
    for i in 0..5 {
        let (j1, j2) = (random_joint(&mut r, 2, 2), random_joint(&mut r, 2, 2));
        let pair = j1.independent_pair(&j2);
        for al in [0.3, 0.7, 2.0] {
            let sum = both(&j1, al, o).into_iter().zip(both(&j2, al, o));
            for (((m, v1), (_, v2)), (_, v)) in sum.zip(both(&pair, al, o)) {
                // the injected offset enters every K once, so remove the extra copy
                let extra = if m == "K" { o.k_offset } else { 0.0 };
                ensure(close(v, v1 + v2 - extra, 1e-7), || format!("#{i} {m} α={al}: {v} vs {v1} + {v2}"))?;
            }
        }
    }
    Ok("J and K add over independent pairs".into())
}

fn alpha_grid() -> Vec<f64> {
    (1..=40).map(|k| k as f64 / 10.0).collect()
}

fn j_monotone(o: &VerifyOptions) -> Check {
    let mut r = rng(40);
    for i in 0..3 {
        let j = random_joint(&mut r, 3, 3);
        let v: Vec<f64> = alpha_grid().iter().map(|&al| j_val(&j, al, o)).collect();
        ensure(v.windows(2).all(|w| w[1] >= w[0] - 1e-7), || format!("#{i}: {v:?}"))?;
    }
    Ok("J nondecreasing on α = 0.1, …, 4.0".into())
}

fn k_plus_h(o: &VerifyOptions) -> Check {
    let mut r = rng(41);
    for i in 0..3 {
        let j = random_joint(&mut r, 3, 3);
        let flat = j.flatten();
        let v: Vec<f64> = alpha_grid()
            .iter()
            .map(|&al| k_val(&j, al, o) + renyi_entropy(&flat, a(al)).bits())
            .collect();
        ensure(v.windows(2).all(|w| w[1] <= w[0] + 1e-7), || format!("#{i}: {v:?}"))?;
    }
    Ok("K_α + H_α(X,Y) nonincreasing on α = 0.1, …, 4.0".into())
}

fn near_one(o: &VerifyOptions) -> Check {
    let mut r = rng(42);
    for i in 0..10 {
        let j = random_joint(&mut r, 3, 2);
        let mi = mutual_information(&j).bits();
        for al in [1.0 - 1e-3, 1.0 + 1e-3] {
            for (m, v) in both(&j, al, o) {
                ensure(close(v, mi, 5e-3), || format!("#{i} {m} α={al}: {v} vs I = {mi}"))?;
            }
        }
        for (m, v) in both(&j, 1.0, o) {
            ensure(close(v, mi, 1e-12), || format!("#{i} {m} at α = 1: {v} vs I = {mi}"))?;
        }
    }
    Ok("J, K at 1 ± 1e-3 within 5e-3 bits of I".into())
}

fn concavity(o: &VerifyOptions) -> Check {
    let mut r = rng(43);
    let labels: Vec<String> = (0..3).map(|k| format!("x{k}")).collect();
    for i in 0..10 {
        let ch = random_channel(&mut r, &labels, 3);
        let (p1, p2) = (random_pmf(&mut r, 3), random_pmf(&mut r, 3));
        let lam: f64 = r.random_range(0.05..0.95);
        let mix = Pmf::from_probs(p1.probs().iter().zip(p2.probs()).map(|(u, v)| lam * u + (1.0 - lam) * v).collect()).unwrap();
        let joint = |p: &Pmf| JointPmf::from_marginal_and_channel(&p.with_labels(labels.clone()).unwrap(), &ch).unwrap();
        for al in [1.0, 1.5, 2.0] {
            let lhs = j_val(&joint(&mix), al, o);
            let rhs = lam * j_val(&joint(&p1), al, o) + (1.0 - lam) * j_val(&joint(&p2), al, o);
            ensure(lhs >= rhs - 1e-7, || format!("#{i} α={al}: {lhs} < {rhs}"))?;
        }
    }
    Ok("J concave in P_X for fixed P_Y|X".into())
}

fn closed_forms(o: &VerifyOptions) -> Check {
    let p = Pmf::from_probs(vec![0.88, 0.06, 0.06]).unwrap();
    let v = j_self_closed_form(&p, a(0.4)).bits();
    ensure(close(v, 0.1229, 5e-5), || format!("J_0.4(X;X) = {v}"))?;
    let mut r = rng(44);
    let mut worst = 0.0f64;
    for i in 0..10 {
        let p = random_pmf(&mut r, 2 + i % 4);
        let d = JointPmf::diagonal(&p);
        for al in [0.3, 0.5, 0.8, 1.0, 1.3, 2.0, 3.0] {
            let (jv, jc) = (j_val(&d, al, o), j_self_closed_form(&p, a(al)).bits());
            let (kv, kc) = (k_val(&d, al, o) - o.k_offset, k_self_closed_form(&p, a(al)).bits());
            worst = worst.max((jv - jc).abs()).max((kv - kc).abs());
            ensure(close(jv, jc, 5e-6), || format!("#{i} J α={al}: {jv} vs {jc}"))?;
            ensure(close(kv, kc, 5e-6), || format!("#{i} K α={al}: {kv} vs {kc}"))?;
        }
    }
    Ok(format!("solver vs closed form on diagonals, max gap {worst:.1e} bits"))
}

fn dual_forms(o: &VerifyOptions) -> Check {
    let mut r = rng(45);
    let mut worst = 0.0f64;
    for i in 0..5 {
        let j = random_joint(&mut r, 3, 3);
        for al in [1.5, 2.0, 4.0] {
            let res = compute_j_alpha(&j, a(al), &o.cfg).unwrap();
            let d = j_dual_certificate(&j, a(al), &res).unwrap();
            worst = worst.max(d.certificate_gap);
            ensure(d.certificate_gap <= 1e-6, || format!("#{i} α={al}: gap {}", d.certificate_gap))?;
        }
        ensure(j_dual_certificate(&j, a(0.7), &compute_j_alpha(&j, a(0.7), &o.cfg).unwrap()).is_err(), || "certificate below 1 accepted".into())?;
        let mi = j_dual_value(&j, &j, a(0.7)).unwrap().bits();
        ensure(close(mi, mutual_information(&j).bits(), 1e-12), || "bracket at R = P".into())?;
        for al in [0.3, 0.7, 2.0] {
            let jv = j_val(&j, al, o);
            for _ in 0..300 {
                let p = random_probs(&mut r, 9);
                let rows: Vec<&[f64]> = p.chunks(3).collect();
                let rj = JointPmf::from_rows(&rows).unwrap();
                let b = j_dual_value(&j, &rj, a(al)).unwrap();
                if al < 1.0 {
                    ensure(b.bits() >= jv - 1e-7, || format!("#{i} α={al}: bracket {b} < J {jv}"))?;
                } else {
                    ensure(b.bits() <= jv + 1e-7, || format!("#{i} α={al}: bracket {b} > J {jv}"))?;
                }
            }
        }
    }
    Ok(format!("certificate gap ≤ {worst:.1e} bits; brackets bound J from the right side"))
}

fn reference(o: &VerifyOptions, z: bool, al: f64, expect: f64) -> Check {
    let j = counterexample();
    let joint = if z { apply_channel(&j, &counterexample_channel()).unwrap() } else { j };
    let v = k_val(&joint, al, o);
    ensure(close(v, expect, 1e-3), || format!("{v:.4}, expected {expect} ± 0.001"))?;
    Ok(format!("{v:.4} bits"))
}

fn ref_half_xy(o: &VerifyOptions) -> Check {
    reference(o, false, 0.5, 0.253)
}
fn ref_half_xz(o: &VerifyOptions) -> Check {
    reference(o, true, 0.5, 0.315)
}
fn ref_02(o: &VerifyOptions) -> Check {
    reference(o, false, 0.2, 0.109)
}
fn ref_1(o: &VerifyOptions) -> Check {
    reference(o, false, 1.0, 0.221)
}
fn ref_15(o: &VerifyOptions) -> Check {
    reference(o, false, 1.5, 0.063)
}

// ---- task_encoding ---------------------------------------------------------

fn region_values(o: &VerifyOptions) -> Check {
    let d = rate_region(&JointPmf::diagonal(&Pmf::uniform(2)), 1.0, &o.cfg).unwrap();
    let got = (d.rx_min.bits(), d.ry_min.bits(), d.sum_min.bits());
    ensure(close(got.0, 1.0, 1e-9) && close(got.1, 1.0, 1e-9) && close(got.2, 2.0, 1e-9), || format!("diagonal uniform 2: {got:?}"))?;
    let mut r = rng(51);
    for i in 0..10 {
        let ind = JointPmf::product(&random_pmf(&mut r, 3), &random_pmf(&mut r, 2));
        let j = random_joint(&mut r, 3, 3);
        let rho = r.random_range(0.2..3.0);
        let ri = rate_region(&ind, rho, &o.cfg).unwrap();
        ensure(close(ri.sum_min.bits(), ri.rx_min.bits() + ri.ry_min.bits(), 1e-9), || format!("#{i}: independent sum bound"))?;
        let rj = rate_region(&j, rho, &o.cfg).unwrap();
        ensure(rj.rx_min.bits() >= 0.0 && rj.ry_min.bits() >= 0.0, || "negative bound".into())?;
        ensure(rj.rx_min.bits() <= rj.sum_min.bits() && rj.ry_min.bits() <= rj.sum_min.bits(), || format!("#{i}: single bound above sum"))?;
    }
    let c = counterexample();
    let rc = rate_region(&c, 1.0, &o.cfg).unwrap();
    let excess = rc.sum_min.bits() - renyi_entropy(&c.flatten(), a(0.5)).bits();
    ensure(close(excess, 0.253, 1e-3), || format!("counterexample sum excess {excess}"))?;
    let small = rate_region(&c, 1e-3, &o.cfg).unwrap();
    let hx = shannon_entropy(&c.marginal_x()).bits();
    ensure(close(small.rx_min.bits(), hx, 1e-2), || format!("ρ = 1e-3: {} vs H(X) = {hx}", small.rx_min))?;
    Ok(format!("diagonal uniform 2 → (1, 1, 2); counterexample sum excess {excess:.3}"))
}

fn simulator_basics(_: &VerifyOptions) -> Check {
    let j = JointPmf::from_rows(&[[0.4, 0.1], [0.1, 0.4]]).unwrap();
    let base = SimParams { n: 3, rx: 40.0, ry: 40.0, rho: 1.0, trials: 20, seed: 1, exact: true };
    let single = simulate_list_moment(&j, &base).unwrap();
    ensure(close(single.moment_estimate, 1.0, 1e-12), || format!("one bin per sequence: {}", single.moment_estimate))?;
    let p = SimParams { n: 1, rx: 0.0, ry: 0.0, rho: 1.5, ..base.clone() };
    let all = simulate_list_moment(&j, &p).unwrap().moment_estimate;
    ensure(close(all, 4f64.powf(1.5), 1e-9), || format!("single bin: {all}"))?;
    let p = SimParams { rx: 0.7, ry: 0.9, ..base.clone() };
    ensure(simulate_list_moment(&j, &p).unwrap() == simulate_list_moment(&j, &p).unwrap(), || "exact mode not deterministic".into())?;
    let mut r = rng(52);
    for _ in 0..30 {
        let p = SimParams {
            n: r.random_range(1..4),
            rx: r.random_range(0.0..2.0),
            ry: r.random_range(0.0..2.0),
            rho: r.random_range(0.1..3.0),
            trials: 5,
            seed: r.random(),
            exact: r.random(),
        };
        let m = simulate_list_moment(&j, &p).unwrap().moment_estimate;
        ensure(m >= 1.0, || format!("{p:?}: moment {m}"))?;
    }
    ensure(matches!(simulate_list_moment(&j, &SimParams { trials: 0, ..base.clone() }), Err(Error::Simulation(_))), || "zero trials accepted".into())?;
    ensure(matches!(simulate_list_moment(&j, &SimParams { n: 12, ..base }), Err(Error::EnumerationCap { .. })), || "cap not enforced".into())?;
    Ok("singletons → 1, single bin → 4^ρ, moments ≥ 1, deterministic".into())
}

fn monte_carlo_vs_exact(_: &VerifyOptions) -> Check {
    let j = JointPmf::from_rows(&[[0.5, 0.1], [0.05, 0.35]]).unwrap();
    let p = SimParams { n: 4, rx: 0.7, ry: 0.6, rho: 1.0, trials: 2000, seed: 3, exact: true };
    let ex = simulate_list_moment(&j, &p).unwrap();
    let mc = simulate_list_moment(&j, &SimParams { exact: false, ..p }).unwrap();
    let se = (ex.std_error.powi(2) + mc.std_error.powi(2)).sqrt();
    let diff = (ex.moment_estimate - mc.moment_estimate).abs();
    ensure(diff <= 3.0 * se, || format!("exact {} vs MC {} (se {se})", ex.moment_estimate, mc.moment_estimate))?;
    Ok(format!("exact {:.3}, Monte Carlo {:.3}, {:.1} standard errors apart", ex.moment_estimate, mc.moment_estimate, diff / se))
}

fn product_covariance(_: &VerifyOptions) -> Check {
    let j = JointPmf::product(&Pmf::from_probs(vec![0.3, 0.7]).unwrap(), &Pmf::from_probs(vec![0.6, 0.4]).unwrap());
    let mut worst = 0.0f64;
    for seed in 0..10 {
        let c = side_list_covariance(&j, 4, 0.5, 0.6, seed).unwrap();
        worst = worst.max(c.abs());
    }
    ensure(worst < 1e-12, || format!("covariance {worst}"))?;
    Ok(format!("max |cov| = {worst:.1e} over 10 binnings"))
}

fn simulator_trend(o: &VerifyOptions) -> Check {
    let j = JointPmf::from_rows(&[[0.4, 0.1], [0.1, 0.4]]).unwrap();
    let corner = rate_region(&j, 1.0, &o.cfg).unwrap().sum_min.bits();
    let mut shown = Vec::new();
    for (label, scale, down) in [("inside", 1.25, true), ("outside", 0.75, false)] {
        let rate = scale * corner / 2.0;
        let m: Vec<f64> = [2, 4, 6]
            .iter()
            .map(|&n| {
                let p = SimParams { n, rx: rate, ry: rate, rho: 1.0, trials: 1000, seed: 0, exact: true };
                simulate_list_moment(&j, &p).unwrap().moment_estimate
            })
            .collect();
        let ok = m.windows(2).all(|w| if down { w[1] <= w[0] } else { w[1] >= w[0] });
        ensure(ok, || format!("{label}: {m:?}"))?;
        shown.push(format!("{label} {:.2} → {:.2} → {:.2}", m[0], m[1], m[2]));
    }
    Ok(shown.join(", "))
}

// ---- cli -------------------------------------------------------------------

fn file_round_trip(_: &VerifyOptions) -> Check {
    let mut r = rng(61);
    for _ in 0..10 {
        let j = random_joint(&mut r, 3, 4);
        ensure(parse_joint(&to_toml(&j), Layout::Toml).unwrap() == j, || "TOML round trip".into())?;
        ensure(parse_joint(&to_json(&j), Layout::Json).unwrap() == j, || "JSON round trip".into())?;
    }
    Ok("TOML and JSON round trips are exact".into())
}

const ITEMS: &[Item] = &[
    ("prob_core", "input validation", pmf_validation),
    ("prob_core", "marginals", marginals),
    ("prob_core", "order regimes", alpha_regimes),
    ("prob_core", "tilt composition and inverse", tilt_properties),
    ("prob_core", "tilt of products", tilt_product),
    ("prob_core", "channels", channels),
    ("info_measures", "entropy values", entropy_examples),
    ("info_measures", "divergence values", divergence_examples),
    ("info_measures", "divergence order and sign", divergence_order_and_sign),
    ("info_measures", "relative α-entropy via tilts", tilt_identity),
    ("info_measures", "continuity at α = 1", alpha_one_continuity),
    ("info_measures", "KL decomposition", kl_decomposition),
    ("info_measures", "mutual information", mutual_information_values),
    ("dependence_solver", "configuration", config_validation),
    ("dependence_solver", "inner minimizer", inner_minimizer),
    ("dependence_solver", "brute-force oracle", oracle_agreement),
    ("dependence_solver", "witnesses", witnesses),
    ("dependence_solver", "nonnegativity and independence", nonnegativity),
    ("dependence_solver", "symmetry", symmetry),
    ("dependence_solver", "log-alphabet bounds", bounds),
    ("dependence_solver", "data processing for J", data_processing),
    ("dependence_solver", "data processing fails for K", k_dpi_failure),
    ("dependence_solver", "additivity", additivity),
    ("dependence_solver", "J monotone in α", j_monotone),
    ("dependence_solver", "K + H nonincreasing in α", k_plus_h),
    ("dependence_solver", "α → 1 consistency", near_one),
    ("dependence_solver", "concavity in P_X", concavity),
    ("dependence_solver", "closed forms", closed_forms),
    ("dependence_solver", "dual forms", dual_forms),
    ("reference", "K_1/2(X;Y) = 0.253", ref_half_xy),
    ("reference", "K_1/2(X;Z) = 0.315", ref_half_xz),
    ("reference", "K_0.2(X;Y) = 0.109", ref_02),
    ("reference", "K_1(X;Y) = 0.221", ref_1),
    ("reference", "K_1.5(X;Y) = 0.063", ref_15),
    ("task_encoding", "rate region", region_values),
    ("task_encoding", "simulator basics", simulator_basics),
    ("task_encoding", "Monte Carlo vs exact", monte_carlo_vs_exact),
    ("task_encoding", "product sources", product_covariance),
    ("task_encoding", "block-length trend", simulator_trend),
    ("cli", "file round trip", file_round_trip),
];

/// Run every item (concurrently); results come back in a fixed order.
pub fn run_suite(opts: &VerifyOptions) -> Vec<ItemResult> {
    ITEMS
        .par_iter()
        .map(|&(module, name, f)| {
            let outcome = catch_unwind(AssertUnwindSafe(|| f(opts)))
                .unwrap_or_else(|_| Err("panicked".into()));
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            ItemResult { module, name, passed, detail }
        })
        .collect()
}
