//! Closed-form tail bounds. Values above 1 are returned as computed and
//! flagged vacuous, never clamped.

use serde::{Deserialize, Serialize};

use super::ConcentrationError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bound {
    pub value: f64,
}

impl Bound {
    pub fn new(value: f64) -> Self {
        Self { value }
    }

    /// The bound says nothing (it is at least 1).
    pub fn is_vacuous(&self) -> bool {
        self.value >= 1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernoffTails {
    /// `P(X < (1 - a) mu) < exp(-a^2 mu / 2)`.
    pub lower: Bound,
    /// `P(X > (1 + a) mu) < exp(-a^2 mu / 3)`, only for `0 < a < 3/2`.
    pub upper: Option<Bound>,
}

/// Chernoff tails for a binomial (or hypergeometric) variable with mean `mu`.
pub fn chernoff_bounds(a: f64, mu: f64) -> Result<ChernoffTails, ConcentrationError> {
    if !a.is_finite() || a <= 0.0 {
        return Err(ConcentrationError::Domain(format!("deviation a must be positive, got {a}")));
    }
    if !mu.is_finite() || mu < 0.0 {
        return Err(ConcentrationError::Domain(format!("mean must be non-negative, got {mu}")));
    }
    let lower = Bound::new((-a * a * mu / 2.0).exp());
    let upper = (a < 1.5).then(|| Bound::new((-a * a * mu / 3.0).exp()));
    Ok(ChernoffTails { lower, upper })
}

/// `P(Bin(m, q) >= k) <= (e m q / k)^k`.
pub fn binomial_tail_bound(m: u64, q: f64, k: u64) -> Result<Bound, ConcentrationError> {
    if k == 0 {
        return Err(ConcentrationError::Domain("threshold k must be positive".into()));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(ConcentrationError::Domain(format!("q must lie in [0, 1], got {q}")));
    }
    let k = k as f64;
    Ok(Bound::new((std::f64::consts::E * m as f64 * q / k).powf(k)))
}

/// Largest `m` for which [`binomial_tail_bound_checked`] sums the exact tail.
pub const SELF_TEST_MAX_TRIALS: u64 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckedTail {
    pub bound: Bound,
    pub exact: f64,
}

/// [`binomial_tail_bound`] together with the exact tail, failing if the
/// bound is below it. Limited to `m <= 30`.
pub fn binomial_tail_bound_checked(m: u64, q: f64, k: u64) -> Result<CheckedTail, ConcentrationError> {
    if m > SELF_TEST_MAX_TRIALS {
        return Err(ConcentrationError::Domain(format!("self-test supports m <= {SELF_TEST_MAX_TRIALS}, got {m}")));
    }
    let bound = binomial_tail_bound(m, q, k)?;
    let exact = binomial_upper_tail(m, q, k);
    if bound.value < exact {
        return Err(ConcentrationError::BoundViolated { bound: bound.value, exact });
    }
    Ok(CheckedTail { bound, exact })
}

/// `P(Bin(m, q) >= k)` by direct summation of `C(m, j) q^j (1 - q)^(m - j)`.
pub fn binomial_upper_tail(m: u64, q: f64, k: u64) -> f64 {
    let mut coeff = 1.0f64;
    let mut total = 0.0;
    for j in 0..=m {
        if j > 0 {
            coeff = coeff * (m - j + 1) as f64 / j as f64;
        }
        if j >= k {
            total += coeff * q.powi(j as i32) * (1.0 - q).powi((m - j) as i32);
        }
    }
    total
}

/// `P(h <= M - t) <= 2 exp(-t^2 / (16 r c^2 M))` for a `c`-Lipschitz,
/// `r`-certifiable function of random permutations with median `M`.
pub fn mcdiarmid_bound(t: f64, r: f64, c: f64, median: f64) -> Result<Bound, ConcentrationError> {
    if !t.is_finite() || t < 0.0 {
        return Err(ConcentrationError::Domain(format!("t must be non-negative, got {t}")));
    }
    for (name, v) in [("r", r), ("c", c), ("median", median)] {
        if !v.is_finite() || v <= 0.0 {
            return Err(ConcentrationError::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(Bound::new(2.0 * (-t * t / (16.0 * r * c * c * median)).exp()))
}
