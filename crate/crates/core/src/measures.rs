//! Entropies and divergences: Shannon, Rényi, min-entropy, KL, Rényi
//! divergence and relative α-entropy.
//!
//! Computation runs in nats with log-sum-exp power sums; every public value
//! is reported in bits. `+inf` is an ordinary value (support violations),
//! never an error. Orders within [`ALPHA_ONE_TOL`](crate::pmf::ALPHA_ONE_TOL)
//! of 1 dispatch to the KL / Shannon formulas.

use std::f64::consts::LN_2;
use std::fmt;
use std::ops::{Add, Sub};

use crate::numeric::{ln0, log_sum_exp};
use crate::pmf::{AlphaOrder, JointPmf, Pmf};

/// An information quantity in bits, possibly `+inf`.
///
/// `-inf` is reserved for [`InfoValue::UNATTAINABLE`], the sentinel used by
/// the dual bracket when it diverges downward. NaN is rejected on
/// construction.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct InfoValue(f64);

impl InfoValue {
    pub const ZERO: InfoValue = InfoValue(0.0);
    pub const INFINITY: InfoValue = InfoValue(f64::INFINITY);
    pub const UNATTAINABLE: InfoValue = InfoValue(f64::NEG_INFINITY);

    pub fn from_bits(bits: f64) -> Self {
        assert!(!bits.is_nan(), "information value is NaN");
        InfoValue(bits)
    }

    pub fn from_nats(nats: f64) -> Self {
        InfoValue::from_bits(nats / LN_2)
    }

    #[inline]
    pub fn bits(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn nats(self) -> f64 {
        self.0 * LN_2
    }

    /// `+inf`.
    pub fn is_infinite(self) -> bool {
        self.0 == f64::INFINITY
    }

    pub fn is_unattainable(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl fmt::Display for InfoValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            v if v == f64::INFINITY => f.write_str("inf"),
            v if v == f64::NEG_INFINITY => f.write_str("-inf"),
            v => match f.precision() {
                Some(p) => write!(f, "{v:.p$}"),
                None => write!(f, "{v}"),
            },
        }
    }
}

impl Add for InfoValue {
    type Output = InfoValue;
    fn add(self, rhs: InfoValue) -> InfoValue {
        InfoValue::from_bits(self.0 + rhs.0)
    }
}

impl Sub for InfoValue {
    type Output = InfoValue;
    fn sub(self, rhs: InfoValue) -> InfoValue {
        InfoValue::from_bits(self.0 - rhs.0)
    }
}

// ---------------------------------------------------------------------------
// Slice-level kernels in nats. Callers guarantee equal lengths.
// ---------------------------------------------------------------------------

pub(crate) fn shannon_nats(p: &[f64]) -> f64 {
    -p.iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum::<f64>()
}

/// `ln Σ p^a` over the support of `p`.
pub(crate) fn ln_power_sum(p: &[f64], a: f64) -> f64 {
    log_sum_exp(p.iter().filter(|&&v| v > 0.0).map(|&v| a * v.ln()))
}

pub(crate) fn renyi_entropy_nats(p: &[f64], alpha: f64) -> f64 {
    ln_power_sum(p, alpha) / (1.0 - alpha)
}

pub(crate) fn kl_nats(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return f64::INFINITY;
            }
            acc += pi * (pi.ln() - qi.ln());
        }
    }
    acc.max(0.0)
}

/// Rényi divergence for α ≠ 1.
pub(crate) fn renyi_div_nats(p: &[f64], q: &[f64], alpha: f64) -> f64 {
    let mut terms = Vec::with_capacity(p.len());
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= 0.0 {
            continue;
        }
        if qi <= 0.0 {
            if alpha > 1.0 {
                return f64::INFINITY;
            }
            continue;
        }
        terms.push(alpha * pi.ln() + (1.0 - alpha) * qi.ln());
    }
    let s = log_sum_exp(terms);
    if s == f64::NEG_INFINITY {
        // α < 1 with disjoint supports
        return f64::INFINITY;
    }
    (s / (alpha - 1.0)).max(0.0)
}

/// Relative α-entropy for α ≠ 1.
pub(crate) fn rel_alpha_entropy_nats(p: &[f64], q: &[f64], alpha: f64) -> f64 {
    let mut cross = Vec::with_capacity(p.len());
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= 0.0 {
            continue;
        }
        if qi <= 0.0 {
            if alpha < 1.0 {
                return f64::INFINITY;
            }
            continue;
        }
        cross.push(pi.ln() + (alpha - 1.0) * qi.ln());
    }
    let ln_cross = log_sum_exp(cross);
    if ln_cross == f64::NEG_INFINITY {
        // α > 1 with disjoint supports
        return f64::INFINITY;
    }
    let v = alpha / (1.0 - alpha) * ln_cross + ln_power_sum(q, alpha)
        - ln_power_sum(p, alpha) / (1.0 - alpha);
    v.max(0.0)
}

pub(crate) fn mutual_information_nats(j: &JointPmf) -> f64 {
    let (px, py) = (j.marginal_x(), j.marginal_y());
    let mut acc = 0.0;
    for x in 0..j.x_len() {
        for (y, &v) in j.row(x).iter().enumerate() {
            if v > 0.0 {
                acc += v * (v.ln() - px.probs()[x].ln() - py.probs()[y].ln());
            }
        }
    }
    acc.max(0.0)
}

fn same_alphabet(p: &Pmf, q: &Pmf) {
    assert_eq!(p.len(), q.len(), "distributions must share an alphabet");
}

// ---------------------------------------------------------------------------
// Public API (bits)
// ---------------------------------------------------------------------------

/// `H(P) = Σ P log 1/P`, with `0 log 1/0 = 0`.
pub fn shannon_entropy(p: &Pmf) -> InfoValue {
    InfoValue::from_nats(shannon_nats(p.probs()).max(0.0))
}

/// Rényi entropy of order α; exactly [`shannon_entropy`] at α = 1.
pub fn renyi_entropy(p: &Pmf, alpha: AlphaOrder) -> InfoValue {
    if alpha.is_one() {
        return shannon_entropy(p);
    }
    InfoValue::from_nats(renyi_entropy_nats(p.probs(), alpha.value()).max(0.0))
}

/// `H_∞(P) = -log max P`.
pub fn min_entropy(p: &Pmf) -> InfoValue {
    InfoValue::from_nats(-ln0(p.max_prob()))
}

/// `D(P||Q)` with `0 log 0/q = 0` and `p log p/0 = ∞`.
pub fn kl_divergence(p: &Pmf, q: &Pmf) -> InfoValue {
    same_alphabet(p, q);
    InfoValue::from_nats(kl_nats(p.probs(), q.probs()))
}

/// Rényi divergence `D_α(P||Q)`. For α > 1 a symbol with `P > 0 = Q` makes
/// it infinite; for α < 1 only disjoint supports do.
pub fn renyi_divergence(p: &Pmf, q: &Pmf, alpha: AlphaOrder) -> InfoValue {
    same_alphabet(p, q);
    if alpha.is_one() {
        return kl_divergence(p, q);
    }
    InfoValue::from_nats(renyi_div_nats(p.probs(), q.probs(), alpha.value()))
}

/// Relative α-entropy `Δ_α(P||Q)`:
///
/// `α/(1-α) log Σ P Q^(α-1) + log Σ Q^α - 1/(1-α) log Σ P^α`
///
/// For α < 1 a symbol with `P > 0 = Q` makes it infinite; for α > 1 only
/// disjoint supports do.
pub fn relative_alpha_entropy(p: &Pmf, q: &Pmf, alpha: AlphaOrder) -> InfoValue {
    same_alphabet(p, q);
    if alpha.is_one() {
        return kl_divergence(p, q);
    }
    InfoValue::from_nats(rel_alpha_entropy_nats(p.probs(), q.probs(), alpha.value()))
}

/// `I(X;Y) = D(P_XY || P_X P_Y)`.
pub fn mutual_information(j: &JointPmf) -> InfoValue {
    InfoValue::from_nats(mutual_information_nats(j))
}

/// The three terms of `D(P_XY||Q_X Q_Y) = I(X;Y) + D(P_X||Q_X) + D(P_Y||Q_Y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlDecomposition {
    pub mutual_information: InfoValue,
    pub x_mismatch: InfoValue,
    pub y_mismatch: InfoValue,
}

impl KlDecomposition {
    pub fn total(&self) -> InfoValue {
        self.mutual_information + self.x_mismatch + self.y_mismatch
    }
}

pub fn kl_decomposition_check(j: &JointPmf, qx: &Pmf, qy: &Pmf) -> KlDecomposition {
    assert_eq!(j.x_len(), qx.len(), "Q_X alphabet mismatch");
    assert_eq!(j.y_len(), qy.len(), "Q_Y alphabet mismatch");
    KlDecomposition {
        mutual_information: mutual_information(j),
        x_mismatch: kl_divergence(&j.marginal_x(), qx),
        y_mismatch: kl_divergence(&j.marginal_y(), qy),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmf::tilt_pmf;
    use proptest::prelude::*;

    fn a(v: f64) -> AlphaOrder {
        AlphaOrder::new(v).unwrap()
    }

    fn pmf(v: &[f64]) -> Pmf {
        Pmf::from_probs(v.to_vec()).unwrap()
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon_entropy(&Pmf::uniform(4)).bits(), 2.0);
        assert_eq!(shannon_entropy(&pmf(&[0.0, 1.0, 0.0])).bits(), 0.0);
        let h = 0.75 * (1.0f64 / 0.75).log2() + 0.25 * 4f64.log2();
        assert!((shannon_entropy(&pmf(&[0.75, 0.25])).bits() - h).abs() < 1e-15);
        assert!((h - 0.8113).abs() < 5e-5);
    }

    #[test]
    fn renyi_entropy_examples() {
        for &al in &[0.1, 0.5, 2.0, 7.0] {
            assert!((renyi_entropy(&Pmf::uniform(6), a(al)).bits() - 6f64.log2()).abs() < 1e-13);
        }
        let p = pmf(&[0.3, 0.2, 0.5]);
        assert_eq!(
            renyi_entropy(&p, a(1.0)).bits().to_bits(),
            shannon_entropy(&p).bits().to_bits()
        );
        let h2 = renyi_entropy(&pmf(&[0.75, 0.25]), a(2.0)).bits();
        assert!((h2 + 0.625f64.log2()).abs() < 1e-14);
        assert!((h2 - 0.6781).abs() < 5e-5);
    }

    #[test]
    fn renyi_entropy_large_order_no_underflow() {
        let p = pmf(&[1e-3, 1.0 - 1e-3]);
        let h = renyi_entropy(&p, a(500.0)).bits();
        let expect = 500.0 / 499.0 * -(1.0f64 - 1e-3).log2();
        assert!(h.is_finite());
        assert!((h - expect).abs() < 1e-9);
    }

    #[test]
    fn min_entropy_examples() {
        assert!((min_entropy(&Pmf::uniform(8)).bits() - 3.0).abs() < 1e-15);
        assert_eq!(min_entropy(&pmf(&[1.0, 0.0])).bits(), 0.0);
        let h = min_entropy(&pmf(&[0.88, 0.06, 0.06])).bits();
        assert!((h + 0.88f64.log2()).abs() < 1e-15);
        assert!((h - 0.1844).abs() < 5e-5);
    }

    #[test]
    fn kl_examples() {
        let p = pmf(&[0.2, 0.3, 0.5]);
        assert_eq!(kl_divergence(&p, &p).bits(), 0.0);
        assert!(kl_divergence(&pmf(&[1.0, 0.0]), &pmf(&[0.0, 1.0])).is_infinite());
        let d = kl_divergence(&pmf(&[0.5, 0.5]), &pmf(&[0.75, 0.25])).bits();
        let expect = 0.5 * (0.5f64 / 0.75).log2() + 0.5 * 2f64.log2();
        assert!((d - expect).abs() < 1e-15);
        assert!((d - 0.2075).abs() < 5e-5);
    }

    #[test]
    fn renyi_divergence_examples() {
        let p = pmf(&[0.2, 0.3, 0.5]);
        for &al in &[0.3, 2.0] {
            assert!(renyi_divergence(&p, &p, a(al)).bits().abs() < 1e-14);
        }
        let q = pmf(&[0.5, 0.5, 0.0]);
        assert!(renyi_divergence(&p, &q, a(2.0)).is_infinite());
        assert!(renyi_divergence(&p, &q, a(0.5)).is_finite());
        assert!(renyi_divergence(&pmf(&[1.0, 0.0]), &pmf(&[0.0, 1.0]), a(0.5)).is_infinite());

        let d = renyi_divergence(&pmf(&[0.5, 0.5]), &pmf(&[0.9, 0.1]), a(2.0)).bits();
        let expect = (0.25f64 / 0.9 + 0.25 / 0.1).log2();
        assert!((d - expect).abs() < 1e-14);
        assert!((d - 1.4739).abs() < 5e-5);
    }

    /// Term-by-term evaluation of the relative α-entropy on full-support
    /// inputs, written independently of the log-sum-exp kernel.
    fn rel_alpha_direct(p: &[f64], q: &[f64], al: f64) -> f64 {
        let s1: f64 = p.iter().zip(q).map(|(pi, qi)| pi * qi.powf(al - 1.0)).sum();
        let s2: f64 = q.iter().map(|qi| qi.powf(al)).sum();
        let s3: f64 = p.iter().map(|pi| pi.powf(al)).sum();
        al / (1.0 - al) * s1.log2() + s2.log2() - s3.log2() / (1.0 - al)
    }

    #[test]
    fn relative_alpha_entropy_examples() {
        let p = pmf(&[0.2, 0.3, 0.5]);
        assert!(relative_alpha_entropy(&p, &p, a(0.4)).bits().abs() < 1e-14);

        let (p, q, al) = (pmf(&[0.5, 0.5]), pmf(&[0.9, 0.1]), a(2.0));
        let direct = relative_alpha_entropy(&p, &q, al).bits();
        let via_tilt =
            renyi_divergence(&tilt_pmf(&p, al), &tilt_pmf(&q, al), al.reciprocal()).bits();
        assert!((direct - via_tilt).abs() < 1e-10);
        assert!((direct - rel_alpha_direct(&[0.5, 0.5], &[0.9, 0.1], 2.0)).abs() < 1e-12);
    }

    #[test]
    fn relative_alpha_entropy_infinite_cases() {
        let p = pmf(&[0.5, 0.5, 0.0]);
        let q = pmf(&[1.0, 0.0, 0.0]);
        assert!(relative_alpha_entropy(&p, &q, a(0.5)).is_infinite());
        assert!(relative_alpha_entropy(&p, &q, a(2.0)).is_finite());
        let disjoint = pmf(&[0.0, 0.0, 1.0]);
        assert!(relative_alpha_entropy(&p, &disjoint, a(2.0)).is_infinite());
    }

    #[test]
    fn mutual_information_examples() {
        let j = JointPmf::product(&pmf(&[0.3, 0.7]), &pmf(&[0.1, 0.2, 0.7]));
        assert!(mutual_information(&j).bits().abs() < 1e-15);
        let d = JointPmf::diagonal(&Pmf::uniform(5));
        assert!((mutual_information(&d).bits() - 5f64.log2()).abs() < 1e-14);
    }

    #[test]
    fn decomposition_examples() {
        let j = JointPmf::from_rows(&[[0.3, 0.1], [0.05, 0.55]]).unwrap();
        let dec = kl_decomposition_check(&j, &j.marginal_x(), &j.marginal_y());
        assert_eq!(dec.x_mismatch.bits(), 0.0);
        assert_eq!(dec.y_mismatch.bits(), 0.0);

        let ind = JointPmf::product(&pmf(&[0.3, 0.7]), &pmf(&[0.4, 0.6]));
        let dec = kl_decomposition_check(&ind, &pmf(&[0.5, 0.5]), &pmf(&[0.9, 0.1]));
        assert!(dec.mutual_information.bits().abs() < 1e-15);
    }

    fn full_support(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(0.02f64..1.0, n).prop_map(|w| {
            let s: f64 = w.iter().sum();
            w.iter().map(|v| v / s).collect()
        })
    }

    fn with_zeros(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(prop_oneof![Just(0.0), 0.02f64..1.0], n).prop_filter_map(
            "all zero",
            |w| {
                let s: f64 = w.iter().sum();
                (s > 0.0).then(|| w.iter().map(|v| v / s).collect())
            },
        )
    }

    proptest! {
        #[test]
        fn decomposition_sums(pj in full_support(9), qx in full_support(3), qy in full_support(3)) {
            let rows: Vec<&[f64]> = pj.chunks(3).collect();
            let j = JointPmf::from_rows(&rows).unwrap();
            let (qx, qy) = (pmf(&qx), pmf(&qy));
            let dec = kl_decomposition_check(&j, &qx, &qy);
            let direct = kl_divergence(&j.flatten(), &JointPmf::product(&qx, &qy).flatten());
            prop_assert!((dec.total().bits() - direct.bits()).abs() < 1e-10);
        }

        #[test]
        fn renyi_div_nondecreasing_in_order(p in full_support(4), q in full_support(4)) {
            let (p, q) = (pmf(&p), pmf(&q));
            let grid = [0.1, 0.3, 0.5, 0.8, 1.0, 1.2, 2.0, 3.5, 6.0];
            let vals: Vec<f64> = grid.iter().map(|&g| renyi_divergence(&p, &q, a(g)).bits()).collect();
            for w in vals.windows(2) {
                prop_assert!(w[1] >= w[0] - 1e-12, "{:?}", vals);
            }
        }

        #[test]
        fn renyi_div_nonnegative_zero_iff_equal(p in full_support(4), q in full_support(4)) {
            let (p, q) = (pmf(&p), pmf(&q));
            let differ = p.probs().iter().zip(q.probs()).any(|(a, b)| (a - b).abs() > 1e-3);
            for &g in &[0.3, 0.5, 1.0, 1.5, 2.5] {
                let d = renyi_divergence(&p, &q, a(g)).bits();
                prop_assert!(d >= 0.0);
                prop_assert!(renyi_divergence(&p, &p, a(g)).bits().abs() < 1e-12);
                if differ {
                    prop_assert!(d > 0.0);
                }
            }
        }

        #[test]
        fn tilt_identity_with_zeros(p in with_zeros(4), q in with_zeros(4), al in 0.1f64..4.0) {
            let (p, q, al) = (pmf(&p), pmf(&q), a(al));
            let lhs = relative_alpha_entropy(&p, &q, al);
            let rhs = renyi_divergence(&tilt_pmf(&p, al), &tilt_pmf(&q, al), al.reciprocal());
            prop_assert_eq!(lhs.is_infinite(), rhs.is_infinite());
            if lhs.is_finite() {
                prop_assert!((lhs.bits() - rhs.bits()).abs() < 1e-9, "{} vs {}", lhs, rhs);
            }
        }

        #[test]
        fn alpha_one_continuity(p in full_support(4), q in full_support(4)) {
            let (p, q) = (pmf(&p), pmf(&q));
            let kl = kl_divergence(&p, &q).bits();
            for &g in &[1.0 - 1e-4, 1.0 + 1e-4] {
                prop_assert!((renyi_divergence(&p, &q, a(g)).bits() - kl).abs() < 1e-3);
                prop_assert!((relative_alpha_entropy(&p, &q, a(g)).bits() - kl).abs() < 1e-3);
                prop_assert!((renyi_entropy(&p, a(g)).bits() - shannon_entropy(&p).bits()).abs() < 1e-3);
            }
        }
    }
}
