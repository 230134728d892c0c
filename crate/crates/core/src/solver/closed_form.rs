//! Closed forms for the self-dependence `J_α(X;X)` and `K_α(X;X)`.

use crate::measures::{min_entropy, renyi_entropy, shannon_entropy, InfoValue};
use crate::pmf::{AlphaOrder, Pmf};

fn order(v: f64) -> AlphaOrder {
    AlphaOrder::new(v).expect("derived order is positive")
}

/// `H_{α/(2α-1)}(X)` for α > ½, `α/(1-α) H_∞(X)` for α ∈ (0, ½].
pub fn j_self_closed_form(p: &Pmf, alpha: AlphaOrder) -> InfoValue {
    let a = alpha.value();
    if alpha.is_one() {
        shannon_entropy(p)
    } else if a > 0.5 {
        renyi_entropy(p, order(a / (2.0 * a - 1.0)))
    } else {
        InfoValue::from_bits(a / (1.0 - a) * min_entropy(p).bits())
    }
}

/// `2 H_{α/(2-α)}(X) - H_α(X)` for α ∈ (0, 2), `α/(α-1) H_∞(X) - H_α(X)`
/// for α ≥ 2.
pub fn k_self_closed_form(p: &Pmf, alpha: AlphaOrder) -> InfoValue {
    let a = alpha.value();
    if alpha.is_one() {
        return shannon_entropy(p);
    }
    let h_a = renyi_entropy(p, alpha).bits();
    let v = if a < 2.0 {
        2.0 * renyi_entropy(p, order(a / (2.0 - a))).bits() - h_a
    } else {
        a / (a - 1.0) * min_entropy(p).bits() - h_a
    };
    InfoValue::from_bits(v.max(0.0))
}
