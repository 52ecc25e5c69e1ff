//! Special-function and summation primitives shared by the closed-form
//! expressions.
//!
//! Everything here is pure and allocation free. The alternating binomial
//! sums that appear in the multi-branch error probabilities cancel
//! catastrophically in plain `f64` once `L` grows past a few dozen, so the
//! accumulator works in double-double arithmetic and binomial coefficients
//! are produced exactly in integer arithmetic.

use crate::error::{domain, Error, Result};

/// Largest `L` accepted by the binomial helpers. `C(64, r)` fits in a `u64`.
pub const MAX_BINOMIAL_ORDER: u32 = 64;

/// `Γ(m + 1/2) / Γ(m)` for a Nakagami shape `m`, cached together with the
/// derived quantity `G² / m` that the moment formulas use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaRatio {
    m: f64,
    value: f64,
}

impl GammaRatio {
    pub fn new(m: f64) -> Result<Self> {
        Ok(Self {
            m,
            value: gamma_ratio(m)?,
        })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// `G = Γ(m + 1/2) / Γ(m)`.
    pub fn value(&self) -> f64 {
        self.value
    }

    /// `G² / m`, i.e. `E[β]² / Ω`. Always in `(0, 1)`.
    pub fn squared_over_m(&self) -> f64 {
        self.value * self.value / self.m
    }
}

/// Computes `Γ(m + 1/2) / Γ(m)` through a log-gamma difference.
pub fn gamma_ratio(m: f64) -> Result<f64> {
    if !m.is_finite() || m <= 0.0 {
        return Err(domain(format!("gamma_ratio requires finite m > 0, got {m}")));
    }
    Ok((libm::lgamma(m + 0.5) - libm::lgamma(m)).exp())
}

/// Exact binomial coefficient `C(n, r)` for `n <= 64`.
pub fn binomial(n: u32, r: u32) -> Result<u64> {
    if r > n {
        return Err(domain(format!("binomial({n}, {r}) requires r <= n")));
    }
    if n > MAX_BINOMIAL_ORDER {
        return Err(Error::Overflow(format!(
            "binomial order {n} exceeds {MAX_BINOMIAL_ORDER}"
        )));
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    u64::try_from(acc).map_err(|_| Error::Overflow(format!("binomial({n}, {r})")))
}

/// An unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TwoFloat {
    pub hi: f64,
    pub lo: f64,
}

impl From<f64> for TwoFloat {
    fn from(hi: f64) -> Self {
        Self { hi, lo: 0.0 }
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl TwoFloat {
    /// Exact-as-possible `num / den` for integer operands.
    pub fn ratio(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let n_hi = num as f64;
        let n_lo = (i128::from(num) - n_hi as i128) as f64;
        let d = den as f64;
        let q = n_hi / d;
        let rem = (-q).mul_add(d, n_hi) + n_lo;
        let (hi, lo) = quick_two_sum(q, rem / d);
        Self { hi, lo }
    }

    /// An integer that may exceed 2^53.
    pub fn from_u64(v: u64) -> Self {
        let hi = v as f64;
        let lo = (i128::from(v) - hi as i128) as f64;
        Self { hi, lo }
    }

    pub fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    /// Product with a plain double; the `hi * x` part is error-free.
    pub fn mul_f64(self, x: f64) -> Self {
        let p = self.hi * x;
        let e = self.hi.mul_add(x, -p);
        let (hi, lo) = quick_two_sum(p, e + self.lo * x);
        Self { hi, lo }
    }

    pub fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (t, f) = two_sum(self.lo, other.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Sums terms in the given order with a double-double accumulator.
///
/// Plain doubles are accepted; terms that carry their own low part (see
/// [`TwoFloat::ratio`]) keep it through the accumulation.
pub fn alternating_binomial_sum<I, T>(terms: I) -> f64
where
    I: IntoIterator<Item = T>,
    T: Into<TwoFloat>,
{
    terms
        .into_iter()
        .fold(TwoFloat::default(), |acc, t| acc.add(t.into()))
        .to_f64()
}

/// `Σ_{r=1}^{L} (-1)^{r-1} C(L, r) f(r)`, accumulated in ascending `r`.
pub fn signed_binomial_series<F>(order: u32, mut f: F) -> Result<f64>
where
    F: FnMut(u32) -> f64,
{
    if order == 0 {
        return Err(domain("binomial series needs L >= 1"));
    }
    let mut terms = Vec::with_capacity(order as usize);
    for r in 1..=order {
        let c = TwoFloat::from_u64(binomial(order, r)?);
        let t = c.mul_f64(f(r));
        terms.push(if r % 2 == 1 { t } else { t.neg() });
    }
    Ok(alternating_binomial_sum(terms))
}

/// A scalar Gaussian `U ~ N(mean, variance)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianComponent {
    pub mean: f64,
    pub variance: f64,
}

impl GaussianComponent {
    pub fn new(mean: f64, variance: f64) -> Self {
        Self { mean, variance }
    }
}

/// A random variable `X = U² + V²` with independent Gaussian `U`, `V`.
pub trait QuadraticForm {
    fn components(&self) -> [GaussianComponent; 2];
}

impl QuadraticForm for [GaussianComponent; 2] {
    fn components(&self) -> [GaussianComponent; 2] {
        *self
    }
}
