//! Closed-form lower and upper bounds on sigma, evaluated exactly.
//!
//! Every value is a `Ratio<i128>`; integer rounding happens only in
//! [`BoundValue::ceil`], never before a comparison.

use std::fmt;

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("out of domain: {0}")]
    DomainError(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
}

/// Which formula produced a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSource {
    /// `3n - 3` for nontrivial PBDs.
    #[serde(rename = "dbe")]
    DeBruijnErdos,
    /// Least admissible maximum valency.
    MaxValency,
    /// `n(n-1)/(tau-1)`.
    #[serde(rename = "A")]
    A,
    /// `(n+1)k - k^2(k-1)/(n-1)`.
    #[serde(rename = "B")]
    B,
    /// `k - (n-k)(n-5k-1)/2`.
    #[serde(rename = "C")]
    C,
    /// `n(floor(sqrt n) + 1) - 1` for designs without large blocks.
    LargeBlockFree,
    #[serde(rename = "knkm-lower")]
    KnKmLower,
    #[serde(rename = "knkm-upper")]
    KnKmUpper,
    #[serde(rename = "knkm-halfcase")]
    KnKmHalfCase,
    #[serde(rename = "knkm-small-m")]
    KnKmSmallM,
    CnLower,
    CnUpper,
    ComplementLemma,
    /// Achieved by a construction rather than a formula.
    Construction,
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundSource::DeBruijnErdos => "dbe",
            BoundSource::MaxValency => "max-valency",
            BoundSource::A => "A",
            BoundSource::B => "B",
            BoundSource::C => "C",
            BoundSource::LargeBlockFree => "large-block-free",
            BoundSource::KnKmLower => "knkm-lower",
            BoundSource::KnKmUpper => "knkm-upper",
            BoundSource::KnKmHalfCase => "knkm-halfcase",
            BoundSource::KnKmSmallM => "knkm-small-m",
            BoundSource::CnLower => "cn-lower",
            BoundSource::CnUpper => "cn-upper",
            BoundSource::ComplementLemma => "complement-lemma",
            BoundSource::Construction => "construction",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundValue {
    pub exact: Rational,
    pub source: BoundSource,
}

impl BoundValue {
    pub fn new(exact: Rational, source: BoundSource) -> Self {
        Self { exact, source }
    }

    pub fn integer(value: i128, source: BoundSource) -> Self {
        Self::new(Rational::from_integer(value), source)
    }

    /// Smallest integer `>= exact`.
    pub fn ceil(&self) -> i128 {
        self.exact.ceil().to_integer()
    }

    /// Largest integer `<= exact`.
    pub fn floor(&self) -> i128 {
        self.exact.floor().to_integer()
    }

    /// Decimal rendering for display only.
    pub fn approx(&self) -> f64 {
        self.exact.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.exact)
    }
}

fn int(x: usize) -> i128 {
    x as i128
}

fn ratio(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

fn domain(msg: impl Into<String>) -> BoundsError {
    BoundsError::DomainError(msg.into())
}

/// `x <= n - (sqrt(n) + 1)/2`, decided in integers.
pub fn fits_below_large_block_threshold(x: usize, n: usize) -> bool {
    // x <= n - (sqrt n + 1)/2  <=>  2(n - x) - 1 >= sqrt n
    let t = 2 * int(n) - 2 * int(x) - 1;
    t >= 0 && t * t >= int(n)
}

/// Sum of block sizes of any nontrivial PBD on `n` points is at least `3n - 3`.
pub fn sigma_lower_dbe(n: usize) -> Result<BoundValue, BoundsError> {
    if n < 3 {
        return Err(domain(format!("n = {n} < 3")));
    }
    Ok(BoundValue::integer(3 * int(n) - 3, BoundSource::DeBruijnErdos))
}

/// Some point lies on at least `(1 + sqrt(4n - 3))/2` blocks. Valencies are
/// integers, so this returns the equivalent integer form: the least `r` with
/// `r(r - 1) >= n - 1`. Both `exact` and `ceil` equal that `r`.
pub fn max_valency_lower(n: usize) -> Result<BoundValue, BoundsError> {
    if n < 3 {
        return Err(domain(format!("n = {n} < 3")));
    }
    let target = int(n) - 1;
    let mut r = (target as u128).sqrt() as i128;
    while r * (r - 1) < target {
        r += 1;
    }
    while r > 1 && (r - 1) * (r - 2) >= target {
        r -= 1;
    }
    Ok(BoundValue::integer(r, BoundSource::MaxValency))
}

fn check_block_size(n: usize, k: usize, what: &str) -> Result<(), BoundsError> {
    if k < 2 || k > n || n < 2 {
        return Err(domain(format!("need 2 <= {what} <= n, got {what} = {k}, n = {n}")));
    }
    Ok(())
}

/// `n(n-1)/(tau-1)` for a PBD whose largest block has size `tau`.
pub fn bound_a(n: usize, tau: usize) -> Result<BoundValue, BoundsError> {
    check_block_size(n, tau, "tau")?;
    Ok(BoundValue::new(ratio(int(n) * (int(n) - 1), int(tau) - 1), BoundSource::A))
}

/// `(n+1)k - k^2(k-1)/(n-1)` for a PBD with a block of size `k`.
pub fn bound_b(n: usize, k: usize) -> Result<BoundValue, BoundsError> {
    check_block_size(n, k, "k")?;
    let (n, k) = (int(n), int(k));
    let exact = Rational::from_integer((n + 1) * k) - ratio(k * k * (k - 1), n - 1);
    Ok(BoundValue::new(exact, BoundSource::B))
}

/// `k - (n-k)(n-5k-1)/2` for a PBD with a block of size `k`.
pub fn bound_c(n: usize, k: usize) -> Result<BoundValue, BoundsError> {
    check_block_size(n, k, "k")?;
    let (n, k) = (int(n), int(k));
    let exact = Rational::from_integer(k) - ratio((n - k) * (n - 5 * k - 1), 2);
    Ok(BoundValue::new(exact, BoundSource::C))
}

/// The largest of A, B and C at block size `tau`, chosen by interval:
/// A while `tau(tau-1) <= n-1`, then B while `2 tau <= n-1`, then C. At the
/// interval ends the neighbouring bounds are equal, so the value is the
/// maximum either way.
pub fn best_sigma_lower(n: usize, tau: usize) -> Result<BoundValue, BoundsError> {
    if tau < 2 || tau + 1 > n {
        return Err(domain(format!("need 2 <= tau <= n - 1, got tau = {tau}, n = {n}")));
    }
    match interval_source(n, tau) {
        BoundSource::A => bound_a(n, tau),
        BoundSource::B => bound_b(n, tau),
        _ => bound_c(n, tau),
    }
}

/// Which of A, B, C is largest at `tau`, decided in integers.
pub fn interval_source(n: usize, tau: usize) -> BoundSource {
    let (n, t) = (int(n), int(tau));
    if t * (t - 1) < n {
        BoundSource::A
    } else if 2 * t < n {
        BoundSource::B
    } else {
        BoundSource::C
    }
}

/// `n(floor(sqrt n) + 1) - 1`, without the `n >= 10` hypothesis.
pub fn large_block_free_value(n: usize) -> Rational {
    Rational::from_integer(int(n) * (int(n.sqrt()) + 1) - 1)
}

/// Lower bound for PBDs on `n >= 10` points with no block larger than
/// `n - (sqrt(n) + 1)/2`; see [`large_block_free_applies`].
pub fn large_block_free_lower(n: usize) -> Result<BoundValue, BoundsError> {
    if n < 10 {
        return Err(domain(format!("n = {n} < 10")));
    }
    Ok(BoundValue::new(large_block_free_value(n), BoundSource::LargeBlockFree))
}

/// Whether a design with largest block `max_block` is covered by
/// [`large_block_free_lower`].
pub fn large_block_free_applies(n: usize, max_block: usize) -> bool {
    n >= 10 && fits_below_large_block_threshold(max_block, n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScpBounds {
    pub lower: BoundValue,
    pub upper: BoundValue,
}

/// `mn - m^2(m-1)/(n-1) <= scp(K_n - K_m) <= (2m-1)(n-m) + 1`.
pub fn scp_knkm_bounds(n: usize, m: usize) -> Result<ScpBounds, BoundsError> {
    if n < 2 || m < 1 || m > n {
        return Err(domain(format!("need 1 <= m <= n and n >= 2, got n = {n}, m = {m}")));
    }
    let (n, m) = (int(n), int(m));
    let lower = Rational::from_integer(m * n) - ratio(m * m * (m - 1), n - 1);
    let upper = Rational::from_integer((2 * m - 1) * (n - m) + 1);
    Ok(ScpBounds {
        lower: BoundValue::new(lower, BoundSource::KnKmLower),
        upper: BoundValue::new(upper, BoundSource::KnKmUpper),
    })
}

/// `scp(K_n - K_m)` for `m >= n/2`: the equality case of C minus the
/// size-`m` block.
pub fn scp_knkm_halfcase_exact(n: usize, m: usize) -> Result<BoundValue, BoundsError> {
    if 2 * m < n || m > n || m < 2 {
        return Err(domain(format!("need n/2 <= m <= n, got n = {n}, m = {m}")));
    }
    let exact = bound_c(n, m)?.exact - Rational::from_integer(int(m));
    Ok(BoundValue::new(exact, BoundSource::KnKmHalfCase))
}

/// `(2m - 1)n - m`, the lower bound for `m <= sqrt(n)/2`. The asymptotic
/// statement absorbs the `-m` into its `O(m^2)` term; this is the explicit
/// form the case analysis produces.
pub fn knkm_small_m_lower(n: usize, m: usize) -> Result<BoundValue, BoundsError> {
    if m < 1 || 4 * m * m > n {
        return Err(domain(format!("need 1 <= m <= sqrt(n)/2, got n = {n}, m = {m}")));
    }
    let (n, m) = (int(n), int(m));
    Ok(BoundValue::integer((2 * m - 1) * n - m, BoundSource::KnKmSmallM))
}

/// Leading-order coefficients for `m = cn` with `0 < c < 1/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnBounds {
    pub c: Rational,
    /// `floor(1/c)`.
    pub k: i128,
    pub lower_coefficient: Rational,
    pub upper_coefficient: Rational,
    /// `lower_coefficient * n^2`; lower-order terms are not modelled.
    pub lower: BoundValue,
    pub upper: BoundValue,
}

pub fn cn_bounds(n: usize, m: usize) -> Result<CnBounds, BoundsError> {
    if m == 0 || 2 * m >= n {
        return Err(domain(format!("need 0 < m < n/2, got n = {n}, m = {m}")));
    }
    let c = ratio(int(m), int(n));
    let one = Rational::from_integer(1);
    let k = c.recip().floor().to_integer();
    let kr = Rational::from_integer(k);
    let lower_coefficient = c * (one - c * c);
    let upper_coefficient = (one - c) * (kr - c) / (kr * (kr - one));
    let n2 = Rational::from_integer(int(n) * int(n));
    Ok(CnBounds {
        c,
        k,
        lower: BoundValue::new(lower_coefficient * n2, BoundSource::CnLower),
        upper: BoundValue::new(upper_coefficient * n2, BoundSource::CnUpper),
        lower_coefficient,
        upper_coefficient,
    })
}

/// Lower bound on `scp(K_n - H)` for a graph `H` on `m` vertices, given
/// `scp(H)`, `omega(H)` and `omega(complement of H)`. The two clique-number
/// hypotheses are checked exactly.
pub fn scp_complement_lower(
    n: usize,
    scp_h: u64,
    omega_h: usize,
    omega_hbar: usize,
    m: usize,
) -> Result<BoundValue, BoundsError> {
    if m > n {
        return Err(domain(format!("H has {m} vertices but n = {n}")));
    }
    if !fits_below_large_block_threshold(omega_h, n) {
        return Err(BoundsError::HypothesisViolated(format!(
            "omega(H) = {omega_h} exceeds n - (sqrt(n) + 1)/2 for n = {n}"
        )));
    }
    // omega_hbar <= m - (sqrt n + 1)/2  <=>  2(m - omega_hbar) - 1 >= sqrt n
    let t = 2 * int(m) - 2 * int(omega_hbar) - 1;
    if t < 0 || t * t < int(n) {
        return Err(BoundsError::HypothesisViolated(format!(
            "omega(complement of H) = {omega_hbar} exceeds m - (sqrt(n) + 1)/2 for m = {m}, n = {n}"
        )));
    }
    let exact = large_block_free_value(n) - Rational::from_integer(scp_h as i128);
    Ok(BoundValue::new(exact, BoundSource::ComplementLemma))
}
