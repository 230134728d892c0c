//! Log-domain helpers shared by the measure and solver code.

/// `ln x`, with `ln 0 = -inf`.
#[inline]
pub(crate) fn ln0(x: f64) -> f64 {
    if x > 0.0 {
        x.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// `ln Σ exp(t)` with the largest term factored out.
///
/// An empty input, or one made only of `-inf` terms, yields `-inf`. A `+inf`
/// term yields `+inf`.
pub(crate) fn log_sum_exp<I>(terms: I) -> f64
where
    I: IntoIterator<Item = f64>,
    I::IntoIter: Clone,
{
    let iter = terms.into_iter();
    let max = iter.clone().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return max;
    }
    let sum: f64 = iter.map(|t| (t - max).exp()).sum();
    max + sum.ln()
}

/// Normalize log-weights into linear probabilities. Entries at `-inf` map to 0.
pub(crate) fn normalize_log_weights(log_w: &[f64]) -> Vec<f64> {
    let lse = log_sum_exp(log_w.iter().copied());
    debug_assert!(lse.is_finite(), "cannot normalize all-zero weights");
    let mut out: Vec<f64> = log_w.iter().map(|&l| (l - lse).exp()).collect();
    let s: f64 = out.iter().sum();
    out.iter_mut().for_each(|v| *v /= s);
    out
}
