//! Finite probability mass functions, joint PMFs, channels and the α-tilt.
//!
//! Every type here is immutable after construction. Zero-probability symbols
//! are kept so that alphabets stay aligned across operations.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::{ln0, normalize_log_weights};

/// Inputs whose total mass is within this distance of 1 are accepted as-is.
pub const NORM_TOL: f64 = 1e-12;
/// Inputs off by more than [`NORM_TOL`] but at most this much are renormalized
/// and flagged; anything further off is rejected.
pub const RENORM_TOL: f64 = 1e-9;

/// |α − 1| below this counts as α = 1.
pub const ALPHA_ONE_TOL: f64 = 1e-12;

fn default_labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn check_labels(labels: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// Validate entries and apply the normalization policy. Returns whether the
/// values were rescaled.
fn normalize_in_place(p: &mut [f64]) -> Result<bool> {
    if p.is_empty() {
        return Err(Error::Empty);
    }
    for (idx, &value) in p.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidProbability { idx, value });
        }
    }
    let sum: f64 = p.iter().sum();
    let dev = (sum - 1.0).abs();
    if dev <= NORM_TOL {
        Ok(false)
    } else if dev <= RENORM_TOL {
        p.iter_mut().for_each(|v| *v /= sum);
        Ok(true)
    } else {
        Err(Error::NotNormalized { sum })
    }
}

/// Map `w ↦ w^e / Σ w^e` through logs; zeros stay zero.
fn tilt_slice(p: &[f64], exponent: f64) -> Vec<f64> {
    let logs: Vec<f64> = p.iter().map(|&v| exponent * ln0(v)).collect();
    normalize_log_weights(&logs)
}

/// Order parameter α > 0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AlphaOrder(f64);

/// Disjoint classification of α used to pick solver policy and closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlphaRegime {
    /// α ∈ (0, ½)
    BelowHalf,
    /// α ∈ [½, 1)
    HalfToOne,
    /// α = 1
    One,
    /// α ∈ (1, 2)
    OneToTwo,
    /// α ∈ [2, ∞)
    TwoAndAbove,
}

impl AlphaOrder {
    pub const ONE: AlphaOrder = AlphaOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(AlphaOrder(alpha))
        } else {
            Err(Error::InvalidAlpha(alpha))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_one(self) -> bool {
        (self.0 - 1.0).abs() < ALPHA_ONE_TOL
    }

    pub fn reciprocal(self) -> AlphaOrder {
        AlphaOrder(1.0 / self.0)
    }

    pub fn regime(self) -> AlphaRegime {
        if self.is_one() {
            AlphaRegime::One
        } else if self.0 < 0.5 {
            AlphaRegime::BelowHalf
        } else if self.0 < 1.0 {
            AlphaRegime::HalfToOne
        } else if self.0 < 2.0 {
            AlphaRegime::OneToTwo
        } else {
            AlphaRegime::TwoAndAbove
        }
    }
}

impl fmt::Display for AlphaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<f64> for AlphaOrder {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        AlphaOrder::new(v)
    }
}

/// A normalized probability vector over a labeled finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    labels: Vec<String>,
    p: Vec<f64>,
    renormalized: bool,
}

impl Pmf {
    pub fn new(labels: Vec<String>, mut p: Vec<f64>) -> Result<Self> {
        if labels.len() != p.len() {
            return Err(Error::LabelCount {
                labels: labels.len(),
                probs: p.len(),
            });
        }
        check_labels(&labels)?;
        let renormalized = normalize_in_place(&mut p)?;
        Ok(Pmf {
            labels,
            p,
            renormalized,
        })
    }

    /// Build with labels `0, 1, …`.
    pub fn from_probs(p: Vec<f64>) -> Result<Self> {
        let labels = default_labels("", p.len());
        Pmf::new(labels, p)
    }

    pub fn uniform(m: usize) -> Self {
        assert!(m > 0, "uniform PMF needs a nonempty alphabet");
        Pmf::from_normalized(default_labels("", m), vec![1.0 / m as f64; m])
    }

    pub(crate) fn from_normalized(labels: Vec<String>, p: Vec<f64>) -> Self {
        debug_assert_eq!(labels.len(), p.len());
        debug_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        Pmf {
            labels,
            p,
            renormalized: false,
        }
    }

    #[inline]
    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// True when construction had to rescale the input to unit mass.
    pub fn renormalized(&self) -> bool {
        self.renormalized
    }

    pub fn max_prob(&self) -> f64 {
        self.p.iter().copied().fold(0.0, f64::max)
    }

    pub fn support_size(&self) -> usize {
        self.p.iter().filter(|&&v| v > 0.0).count()
    }

    /// Same values on a relabeled alphabet.
    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self> {
        Pmf::new(labels, self.p.clone())
    }
}

/// `P(x)^α / Σ P(x')^α`.
pub fn tilt_pmf(p: &Pmf, alpha: AlphaOrder) -> Pmf {
    if alpha.is_one() {
        return p.clone();
    }
    Pmf::from_normalized(p.labels.clone(), tilt_slice(&p.p, alpha.value()))
}

/// A normalized |X| × |Y| probability matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    x_labels: Vec<String>,
    y_labels: Vec<String>,
    p: Vec<f64>,
    renormalized: bool,
}

impl JointPmf {
    pub fn new(x_labels: Vec<String>, y_labels: Vec<String>, mut p: Vec<f64>) -> Result<Self> {
        let (rows, cols) = (x_labels.len(), y_labels.len());
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        if p.len() != rows * cols {
            return Err(Error::Shape {
                rows,
                cols,
                got: p.len(),
            });
        }
        check_labels(&x_labels)?;
        check_labels(&y_labels)?;
        let renormalized = normalize_in_place(&mut p)?;
        Ok(JointPmf {
            x_labels,
            y_labels,
            p,
            renormalized,
        })
    }

    /// Build from rows with labels `x0, x1, …` and `y0, y1, …`.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut p = Vec::with_capacity(n_rows * n_cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n_cols {
                return Err(Error::Shape {
                    rows: n_rows,
                    cols: n_cols,
                    got: r.len() * n_rows,
                });
            }
            p.extend_from_slice(r);
        }
        JointPmf::new(
            default_labels("x", n_rows),
            default_labels("y", n_cols),
            p,
        )
    }

    pub(crate) fn from_normalized(x_labels: Vec<String>, y_labels: Vec<String>, p: Vec<f64>) -> Self {
        debug_assert_eq!(p.len(), x_labels.len() * y_labels.len());
        JointPmf {
            x_labels,
            y_labels,
            p,
            renormalized: false,
        }
    }

    /// `P_X ⊗ P_Y`.
    pub fn product(px: &Pmf, py: &Pmf) -> Self {
        let p = px
            .p
            .iter()
            .flat_map(|&a| py.p.iter().map(move |&b| a * b))
            .collect();
        JointPmf::from_normalized(px.labels.clone(), py.labels.clone(), p)
    }

    /// Joint law of (X, X): `P(x) 1{x = y}`.
    pub fn diagonal(px: &Pmf) -> Self {
        let m = px.len();
        let mut p = vec![0.0; m * m];
        for (i, &v) in px.p.iter().enumerate() {
            p[i * m + i] = v;
        }
        JointPmf::from_normalized(px.labels.clone(), px.labels.clone(), p)
    }

    /// `P_X(x) P_{Y|X}(y|x)`.
    pub fn from_marginal_and_channel(px: &Pmf, ch: &ConditionalPmf) -> Result<Self> {
        if ch.given_labels.len() != px.len() {
            return Err(Error::AlphabetMismatch(format!(
                "channel conditions on {} symbols, marginal has {}",
                ch.given_labels.len(),
                px.len()
            )));
        }
        let cols = ch.out_labels.len();
        let mut p = Vec::with_capacity(px.len() * cols);
        for (i, &w) in px.p.iter().enumerate() {
            p.extend(ch.row(i).iter().map(|&c| w * c));
        }
        Ok(JointPmf::from_normalized(
            px.labels.clone(),
            ch.out_labels.clone(),
            p,
        ))
    }

    #[inline]
    pub fn x_len(&self) -> usize {
        self.x_labels.len()
    }

    #[inline]
    pub fn y_len(&self) -> usize {
        self.y_labels.len()
    }

    pub fn x_labels(&self) -> &[String] {
        &self.x_labels
    }

    pub fn y_labels(&self) -> &[String] {
        &self.y_labels
    }

    /// Row-major entries.
    #[inline]
    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.p[x * self.y_len() + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        let c = self.y_len();
        &self.p[x * c..(x + 1) * c]
    }

    pub fn renormalized(&self) -> bool {
        self.renormalized
    }

    pub fn marginal_x(&self) -> Pmf {
        let p = (0..self.x_len()).map(|x| self.row(x).iter().sum()).collect();
        Pmf::from_normalized(self.x_labels.clone(), p)
    }

    pub fn marginal_y(&self) -> Pmf {
        let mut p = vec![0.0; self.y_len()];
        for x in 0..self.x_len() {
            for (acc, &v) in p.iter_mut().zip(self.row(x)) {
                *acc += v;
            }
        }
        Pmf::from_normalized(self.y_labels.clone(), p)
    }

    /// Swap the roles of X and Y.
    pub fn transpose(&self) -> Self {
        let (r, c) = (self.x_len(), self.y_len());
        let mut p = vec![0.0; r * c];
        for x in 0..r {
            for y in 0..c {
                p[y * r + x] = self.get(x, y);
            }
        }
        JointPmf::from_normalized(self.y_labels.clone(), self.x_labels.clone(), p)
    }

    /// The joint as a single PMF over pairs, labeled `x,y`.
    pub fn flatten(&self) -> Pmf {
        let labels = self
            .x_labels
            .iter()
            .flat_map(|x| self.y_labels.iter().map(move |y| format!("{x},{y}")))
            .collect();
        Pmf::from_normalized(labels, self.p.clone())
    }

    /// Joint law of `((X1, X2), (Y1, Y2))` when the pairs are independent.
    pub fn independent_pair(&self, other: &JointPmf) -> JointPmf {
        let pair = |a: &[String], b: &[String]| -> Vec<String> {
            a.iter()
                .flat_map(|u| b.iter().map(move |v| format!("({u},{v})")))
                .collect()
        };
        let (r1, c1, r2, c2) = (self.x_len(), self.y_len(), other.x_len(), other.y_len());
        let cols = c1 * c2;
        let mut p = vec![0.0; r1 * r2 * cols];
        for x1 in 0..r1 {
            for x2 in 0..r2 {
                for y1 in 0..c1 {
                    for y2 in 0..c2 {
                        p[(x1 * r2 + x2) * cols + y1 * c2 + y2] =
                            self.get(x1, y1) * other.get(x2, y2);
                    }
                }
            }
        }
        JointPmf::from_normalized(
            pair(&self.x_labels, &other.x_labels),
            pair(&self.y_labels, &other.y_labels),
            p,
        )
    }

    /// Whether `P_XY = P_X P_Y` entrywise within `tol`.
    pub fn is_product(&self, tol: f64) -> bool {
        let (px, py) = (self.marginal_x(), self.marginal_y());
        (0..self.x_len()).all(|x| {
            (0..self.y_len()).all(|y| (self.get(x, y) - px.p[x] * py.p[y]).abs() <= tol)
        })
    }
}

/// Entrywise α-power renormalized over the whole matrix.
pub fn tilt_joint(j: &JointPmf, alpha: AlphaOrder) -> JointPmf {
    if alpha.is_one() {
        return j.clone();
    }
    JointPmf::from_normalized(
        j.x_labels.clone(),
        j.y_labels.clone(),
        tilt_slice(&j.p, alpha.value()),
    )
}

/// A conditional PMF: one normalized row per conditioning symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalPmf {
    given_labels: Vec<String>,
    out_labels: Vec<String>,
    rows: Vec<f64>,
}

impl ConditionalPmf {
    pub fn new(given_labels: Vec<String>, out_labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != given_labels.len() {
            return Err(Error::LabelCount {
                labels: given_labels.len(),
                probs: rows.len(),
            });
        }
        if given_labels.is_empty() || out_labels.is_empty() {
            return Err(Error::Empty);
        }
        check_labels(&given_labels)?;
        check_labels(&out_labels)?;
        let mut flat = Vec::with_capacity(rows.len() * out_labels.len());
        for mut r in rows {
            if r.len() != out_labels.len() {
                return Err(Error::LabelCount {
                    labels: out_labels.len(),
                    probs: r.len(),
                });
            }
            normalize_in_place(&mut r)?;
            flat.extend(r);
        }
        Ok(ConditionalPmf {
            given_labels,
            out_labels,
            rows: flat,
        })
    }

    /// Rows indexed by the conditioning symbol; labels auto-generated.
    pub fn from_rows<R: AsRef<[f64]>>(given_prefix: &str, out_prefix: &str, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        ConditionalPmf::new(
            default_labels(given_prefix, rows.len()),
            default_labels(out_prefix, cols),
            rows.iter().map(|r| r.as_ref().to_vec()).collect(),
        )
    }

    pub fn identity(labels: &[String]) -> Self {
        let m = labels.len();
        let mut rows = vec![0.0; m * m];
        for i in 0..m {
            rows[i * m + i] = 1.0;
        }
        ConditionalPmf {
            given_labels: labels.to_vec(),
            out_labels: labels.to_vec(),
            rows,
        }
    }

    pub fn given_labels(&self) -> &[String] {
        &self.given_labels
    }

    pub fn out_labels(&self) -> &[String] {
        &self.out_labels
    }

    pub fn row(&self, given: usize) -> &[f64] {
        let c = self.out_labels.len();
        &self.rows[given * c..(given + 1) * c]
    }
}

/// Post-process Y through `ch`: `P_XZ(x,z) = Σ_y P_{Z|Y}(z|y) P_XY(x,y)`.
pub fn apply_channel(j: &JointPmf, ch: &ConditionalPmf) -> Result<JointPmf> {
    if ch.given_labels != j.y_labels {
        return Err(Error::AlphabetMismatch(format!(
            "channel input alphabet {:?} differs from Y alphabet {:?}",
            ch.given_labels, j.y_labels
        )));
    }
    let zs = ch.out_labels.len();
    let mut p = vec![0.0; j.x_len() * zs];
    for x in 0..j.x_len() {
        for (y, &pxy) in j.row(x).iter().enumerate() {
            if pxy == 0.0 {
                continue;
            }
            for (z, &c) in ch.row(y).iter().enumerate() {
                p[x * zs + z] += c * pxy;
            }
        }
    }
    Ok(JointPmf::from_normalized(
        j.x_labels.clone(),
        ch.out_labels.clone(),
        p,
    ))
}
