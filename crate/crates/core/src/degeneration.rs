//! A toy model of flat limits under two commuting one-parameter subgroups
//! `lambda = (1, 0)` and `lambda' = (0, 1)` of a rank-2 torus.
//!
//! A point is described by the weights `(w, w')` of its nonzero
//! coordinates. The limit along `t -> (t^a, t^b)` keeps the coordinates of
//! least weight `a w + b w'`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SupportEntry {
    pub weights: (i64, i64),
    pub nonzero: bool,
    pub tag: String,
}

impl SupportEntry {
    pub fn new(w: i64, w2: i64) -> Self {
        SupportEntry { weights: (w, w2), nonzero: true, tag: String::new() }
    }

    fn pairing(&self, d: (i64, i64)) -> i128 {
        d.0 as i128 * self.weights.0 as i128 + d.1 as i128 * self.weights.1 as i128
    }
}

/// The weight support of a point, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedPoint {
    support: Vec<SupportEntry>,
}

impl WeightedPoint {
    /// At least one entry must be nonzero, and a tag may not repeat a weight pair.
    pub fn new(mut support: Vec<SupportEntry>) -> Result<Self> {
        if !support.iter().any(|e| e.nonzero) {
            return Err(Error::InvalidInput("the point has no nonzero coordinate".into()));
        }
        support.sort();
        for w in support.windows(2) {
            if w[0].tag == w[1].tag && w[0].weights == w[1].weights {
                return Err(Error::InvalidInput(format!(
                    "weights {:?} repeated under tag {:?}",
                    w[0].weights, w[0].tag
                )));
            }
        }
        Ok(WeightedPoint { support })
    }

    /// A point with one nonzero untagged coordinate per weight pair.
    pub fn from_weights(weights: &[(i64, i64)]) -> Result<Self> {
        WeightedPoint::new(weights.iter().map(|&(a, b)| SupportEntry::new(a, b)).collect())
    }

    pub fn support(&self) -> &[SupportEntry] {
        &self.support
    }

    fn nonzero(&self) -> impl Iterator<Item = &SupportEntry> {
        self.support.iter().filter(|e| e.nonzero)
    }

    /// Sorted, deduplicated weight pairs of the nonzero coordinates.
    pub fn weights(&self) -> Vec<(i64, i64)> {
        let mut w: Vec<(i64, i64)> = self.nonzero().map(|e| e.weights).collect();
        w.dedup();
        w
    }
}

fn check_direction(d: (i64, i64)) -> Result<()> {
    if d == (0, 0) {
        Err(Error::InvalidInput("direction must be nonzero".into()))
    } else {
        Ok(())
    }
}

/// `lim_{t -> 0} (t^a, t^b) . p`.
pub fn limit(p: &WeightedPoint, direction: (i64, i64)) -> Result<WeightedPoint> {
    check_direction(direction)?;
    let m = p.nonzero().map(|e| e.pairing(direction)).min().expect("nonempty support");
    Ok(WeightedPoint { support: p.nonzero().filter(|e| e.pairing(direction) == m).cloned().collect() })
}

/// `lim_lambda'` of `lim_lambda p`.
pub fn two_step_limit(p: &WeightedPoint) -> WeightedPoint {
    let q = limit(p, (1, 0)).expect("nonzero direction");
    limit(&q, (0, 1)).expect("nonzero direction")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositionCheck {
    Equal { min_k: u64 },
    Differ { min_k: u64 },
}

impl CompositionCheck {
    pub fn min_k(&self) -> u64 {
        match *self {
            CompositionCheck::Equal { min_k } | CompositionCheck::Differ { min_k } => min_k,
        }
    }
}

/// Least `k_0 >= 1` with `lim_{(k,1)} p = lim_lambda' lim_lambda p` for
/// every `k >= k_0`.
pub fn min_composition_k(p: &WeightedPoint) -> u64 {
    let (w0, w1) = two_step_limit(p).support[0].weights;
    p.nonzero()
        .filter(|e| e.weights.0 > w0)
        .map(|e| {
            // k (w - w0) > w1 - w'.
            let num = w1 as i128 - e.weights.1 as i128;
            let den = e.weights.0 as i128 - w0 as i128;
            num.div_euclid(den) + 1
        })
        .fold(1i128, i128::max) as u64
}

/// Compares the limit along `tau(t) = (t^k, t)` with the two-step limit.
pub fn composed_equals_two_step(p: &WeightedPoint, k: u64) -> Result<CompositionCheck> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let k = i64::try_from(k).map_err(|_| Error::TooLarge(format!("k = {k}")))?;
    let min_k = min_composition_k(p);
    if limit(p, (k, 1))? == two_step_limit(p) {
        Ok(CompositionCheck::Equal { min_k })
    } else {
        Ok(CompositionCheck::Differ { min_k })
    }
}

/// `mu(p, d) = -min <weights, d>` over the nonzero coordinates.
pub fn mu_weight(p: &WeightedPoint, direction: (i64, i64)) -> Result<i128> {
    check_direction(direction)?;
    Ok(-p.nonzero().map(|e| e.pairing(direction)).min().expect("nonempty support"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Additivity {
    /// `mu(p, k lambda + lambda')`.
    pub composed: i128,
    /// `k mu(lim_lambda p, lambda) + mu(lim_lambda' lim_lambda p, lambda')`.
    pub stepwise: i128,
    /// `mu(q, k lambda + lambda')` on the two-step limit `q`.
    pub on_limit: i128,
    /// `stepwise - composed`; zero once `k >= min_k`.
    pub residual: i128,
}

pub fn additivity(p: &WeightedPoint, k: u64) -> Result<Additivity> {
    let k = i64::try_from(k).map_err(|_| Error::TooLarge(format!("k = {k}")))?;
    let first = limit(p, (1, 0))?;
    let q = limit(&first, (0, 1))?;
    let composed = mu_weight(p, (k, 1))?;
    let stepwise = k as i128 * mu_weight(&first, (1, 0))? + mu_weight(&q, (0, 1))?;
    let on_limit = mu_weight(&q, (k, 1))?;
    Ok(Additivity { composed, stepwise, on_limit, residual: stepwise - composed })
}
