//! Exchangeable partition probability functions of the extended
//! two-parameter family, their residual-fraction moment representation,
//! and the first-block quantities derived from them.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::params::ExtParams;
use crate::partition::Composition;
use crate::scalar::{binomial, Scalar};

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`, `(x)_0 = 1`.
pub fn rising_factorial<S: Scalar>(x: &S, n: usize) -> S {
    let mut acc = S::one();
    let mut term = x.clone();
    for _ in 0..n {
        acc = acc * term.clone();
        term = term + S::one();
    }
    acc
}

/// Parameters of a beta(a, b) law.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaParams<S> {
    a: S,
    b: S,
}

impl<S: Scalar> BetaParams<S> {
    pub fn new(a: S, b: S) -> Result<Self> {
        if a <= S::zero() || b <= S::zero() {
            return Err(Error::InvalidParams(format!("beta({a}, {b}) needs a, b > 0")));
        }
        Ok(BetaParams { a, b })
    }

    pub fn a(&self) -> &S {
        &self.a
    }

    pub fn b(&self) -> &S {
        &self.b
    }

    /// `E[β^i (1-β)^j] = (a)_i (b)_j / (a+b)_{i+j}`.
    pub fn moment(&self, i: usize, j: usize) -> S {
        rising_factorial(&self.a, i) * rising_factorial(&self.b, j)
            / rising_factorial(&(self.a.clone() + self.b.clone()), i + j)
    }

    pub fn mean(&self) -> S {
        self.a.clone() / (self.a.clone() + self.b.clone())
    }
}

/// Source of the mixed moments `E[W_i^r (1 - W_i)^s]` of independent
/// residual fractions (`i` is 1-based).
pub trait ResidualMoments<S> {
    fn moment(&self, i: usize, r: usize, s: usize) -> Result<S>;
}

/// Law of a single residual fraction.
#[derive(Debug, Clone, PartialEq)]
pub enum FractionLaw<S> {
    Beta(BetaParams<S>),
    /// Deterministic value in `[0, 1]`.
    Point(S),
}

impl<S: Scalar> FractionLaw<S> {
    pub fn moment(&self, r: usize, s: usize) -> S {
        match self {
            FractionLaw::Beta(b) => b.moment(r, s),
            FractionLaw::Point(w) => w.powi(r as u32) * (S::one() - w.clone()).powi(s as u32),
        }
    }
}

impl<S: Scalar> ExtParams<S> {
    /// Law of `W_i` (1-based) in the stick-breaking representation:
    /// beta(1-α, θ+iα), with `W_M = 1` for NegAlpha and `W_i = 1/(M-i+1)` for Coupon.
    pub fn fraction_law(&self, i: usize) -> Result<FractionLaw<S>> {
        if i == 0 {
            return Err(Error::Oracle("residual fractions are indexed from 1".into()));
        }
        if let Some(m) = self.max_blocks() {
            if i > m {
                return Err(Error::Oracle(format!("W_{i} lies past termination at W_{m} = 1")));
            }
        }
        match self {
            ExtParams::TwoParam { alpha, theta } => Ok(FractionLaw::Beta(BetaParams::new(
                S::one() - alpha.clone(),
                theta.clone() + S::from_int(i as i64) * alpha.clone(),
            )?)),
            ExtParams::NegAlpha { alpha, m } => {
                if i == *m as usize {
                    Ok(FractionLaw::Point(S::one()))
                } else {
                    let theta = -(S::from_int(*m as i64) * alpha.clone());
                    Ok(FractionLaw::Beta(BetaParams::new(
                        S::one() - alpha.clone(),
                        theta + S::from_int(i as i64) * alpha.clone(),
                    )?))
                }
            }
            ExtParams::Coupon { m } => Ok(FractionLaw::Point(
                S::one() / S::from_int((*m as usize - i + 1) as i64),
            )),
        }
    }
}

impl<S: Scalar> ResidualMoments<S> for ExtParams<S> {
    fn moment(&self, i: usize, r: usize, s: usize) -> Result<S> {
        Ok(self.fraction_law(i)?.moment(r, s))
    }
}

/// Independent fractions with explicitly listed laws.
impl<S: Scalar> ResidualMoments<S> for [FractionLaw<S>] {
    fn moment(&self, i: usize, r: usize, s: usize) -> Result<S> {
        self.get(i.wrapping_sub(1))
            .map(|law| law.moment(r, s))
            .ok_or_else(|| Error::Oracle(format!("no law supplied for W_{i}")))
    }
}

/// `p(λ)` for the extended two-parameter family. Compositions with more
/// parts than the family allows get probability 0.
pub fn eppf<S: Scalar>(params: &ExtParams<S>, lambda: &Composition) -> Result<S> {
    params.validate()?;
    let k = lambda.len();
    let n = lambda.total();
    match params {
        ExtParams::Coupon { m } => {
            let m = *m as usize;
            if k > m {
                return Ok(S::zero());
            }
            let mut num = S::one();
            for i in 0..k {
                num = num * S::from_int((m - i) as i64);
            }
            Ok(num / S::from_int(m as i64).powi(n as u32))
        }
        _ => {
            if params.max_blocks().is_some_and(|m| k > m) {
                return Ok(S::zero());
            }
            let alpha = params.alpha().expect("finite alpha");
            let theta = params.theta().expect("finite theta");
            let mut value = S::one();
            for i in 1..k {
                value = value * (theta.clone() + S::from_int(i as i64) * alpha.clone());
            }
            let one_minus_alpha = S::one() - alpha;
            for &part in lambda.parts() {
                value = value * rising_factorial(&one_minus_alpha, part - 1);
            }
            Ok(value / rising_factorial(&(theta + S::one()), n - 1))
        }
    }
}

/// `p(λ) - Σ_j p(λ^(j))`, the defect in sampling consistency.
pub fn addition_residual<S: Scalar>(params: &ExtParams<S>, lambda: &Composition) -> Result<S> {
    let mut residual = eppf(params, lambda)?;
    for j in 0..=lambda.len() {
        residual = residual - eppf(params, &lambda.incremented(j))?;
    }
    Ok(residual)
}

/// `p(λ) = ∏_i E[W_i^{λ_i - 1} (1 - W_i)^{Λ_{i+1}}]` for independent fractions.
pub fn eppf_from_moments<S, M>(oracle: &M, lambda: &Composition) -> Result<S>
where
    S: Scalar,
    M: ResidualMoments<S> + ?Sized,
{
    let tails = lambda.tail_sums();
    let mut value = S::one();
    for (i, &part) in lambda.parts().iter().enumerate() {
        value = value * oracle.moment(i + 1, part - 1, tails[i + 1])?;
        if value.is_zero() {
            break;
        }
    }
    Ok(value)
}

/// `q(n:m) = P(B_1 ∩ [n] = [m]) = E[W_1^{m-1} (1 - W_1)^{n-m}]`.
pub fn q_first_block<S: Scalar>(params: &ExtParams<S>, n: usize, m: usize) -> Result<S> {
    if m == 0 || m > n {
        return Err(Error::OutOfRange(format!("q(n:m) needs 1 <= m <= n, got n={n}, m={m}")));
    }
    params.moment(1, m - 1, n - m)
}

/// `P(T_n = m) = C(m+n-2, m-1) q(n+m : m)`: the number of first-colour balls
/// preceding the `n`-th ball of another colour.
pub fn first_color_count_law<S: Scalar>(params: &ExtParams<S>, n: usize, m: usize) -> Result<S> {
    if n == 0 || m == 0 {
        return Err(Error::OutOfRange("first_color_count_law needs n, m >= 1".into()));
    }
    Ok(binomial::<S>((m + n - 2) as u64, (m - 1) as u64) * q_first_block(params, n + m, m)?)
}

/// Incremental generator of `P(T_n = m)` for `m = 1, 2, ...`.
struct CountLawTerms<S> {
    law: FractionLaw<S>,
    n: usize,
    m: usize,
    term: S,
}

impl<S: Scalar> CountLawTerms<S> {
    fn new(params: &ExtParams<S>, n: usize) -> Result<Self> {
        let law = params.fraction_law(1)?;
        let term = law.moment(0, n);
        Ok(CountLawTerms { law, n, m: 1, term })
    }

    /// Returns `P(T_n = m)` and advances to `m + 1`.
    fn next_term(&mut self) -> S {
        let current = self.term.clone();
        let (m, n) = (self.m, self.n);
        // E[W^m W̄^n] / E[W^{m-1} W̄^n]
        let moment_ratio = match &self.law {
            FractionLaw::Beta(b) => {
                (b.a().clone() + S::from_int(m as i64 - 1))
                    / (b.a().clone() + b.b().clone() + S::from_int((n + m - 1) as i64))
            }
            FractionLaw::Point(w) => w.clone(),
        };
        self.term = current.clone() * S::from_int((m + n - 1) as i64) / S::from_int(m as i64)
            * moment_ratio;
        self.m += 1;
        current
    }
}

/// Result of summing the series for `p'(μ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesValue<S> {
    pub value: S,
    /// Number of terms `λ_1 = 1..=terms` summed.
    pub terms: usize,
    /// Upper bound on the omitted tail: `P(T_{n_μ} > terms)`.
    pub tail_bound: S,
}

/// `p'(μ) = Σ_{λ_1 >= 1} C(λ_1 + n_μ - 2, λ_1 - 1) p(λ_1, μ)`, summed until the
/// tail bound drops to `tolerance`.
///
/// Each summand is `P(T = λ_1, Π'_{n_μ} = a fixed partition)` for the count
/// `T` of [`first_color_count_law`], so the omitted tail is at most `P(T > L)`.
pub fn derived_eppf<S: Scalar>(
    params: &ExtParams<S>,
    mu: &Composition,
    tolerance: f64,
    max_terms: usize,
) -> Result<SeriesValue<S>> {
    params.validate()?;
    let n_mu = mu.total();
    if params.max_blocks() == Some(1) {
        return Err(Error::Degenerate("M = 1: the first block is everything".into()));
    }
    let mut counts = CountLawTerms::new(params, n_mu)?;
    let mut mass = S::zero();
    let mut value = S::zero();
    let mut parts = Vec::with_capacity(mu.len() + 1);
    parts.push(1);
    parts.extend_from_slice(mu.parts());
    let mut weight = S::one();
    let mut p = eppf(params, &Composition::new(parts.clone())?)?;
    for lambda1 in 1..=max_terms {
        value = value + weight.clone() * p.clone();
        mass = mass + counts.next_term();
        let tail = S::one() - mass.clone();
        if tail.to_f64() <= tolerance {
            return Ok(SeriesValue { value, terms: lambda1, tail_bound: tail });
        }
        // step λ_1 -> λ_1 + 1
        weight = weight * S::from_int((lambda1 + n_mu - 1) as i64) / S::from_int(lambda1 as i64);
        p = match params {
            ExtParams::Coupon { m } => p / S::from_int(*m as i64),
            _ => {
                let alpha = params.alpha().expect("finite alpha");
                let theta = params.theta().expect("finite theta");
                p * (S::from_int(lambda1 as i64) - alpha)
                    / (theta + S::from_int((lambda1 + n_mu) as i64))
            }
        };
    }
    Err(Error::NonConvergence { cap: max_terms })
}

/// `p'` by the closed-form route: the EPPF at `(α, θ+α)` (or `M - 1`).
pub fn derived_eppf_closed<S: Scalar>(params: &ExtParams<S>, mu: &Composition) -> Result<S> {
    eppf(&params.shifted()?, mu)
}

/// `p(λ) - q(n_λ : λ_1) p'(λ_2, ..., λ_k)`, with `p'` from the closed form.
pub fn factorization_check<S: Scalar>(params: &ExtParams<S>, lambda: &Composition) -> Result<S> {
    if lambda.len() < 2 {
        return Err(Error::OutOfRange("factorization needs at least two parts".into()));
    }
    let p = eppf(params, lambda)?;
    let q = q_first_block(params, lambda.total(), lambda.parts()[0])?;
    if q.is_zero() {
        return Ok(p);
    }
    let rest = Composition::new(lambda.parts()[1..].to_vec())?;
    Ok(p - q * derived_eppf_closed(params, &rest)?)
}

/// `Σ_{m=1}^{cap} P(T_n = m)` by direct summation (compensated).
pub fn count_law_partial_sum(params: &ExtParams<f64>, n: usize, cap: usize) -> Result<f64> {
    let mut terms = CountLawTerms::new(params, n)?;
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for _ in 0..cap {
        let y = terms.next_term() - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    Ok(sum)
}

/// `lnΓ(z + d) - lnΓ(z)`, accurate when `z` is huge and `d` moderate.
pub fn ln_gamma_ratio(z: f64, d: f64) -> f64 {
    if z > 1e3 && z + d > 1e3 {
        let w = z + d;
        let stirling_tail = |x: f64| {
            let x2 = x * x;
            1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2) + 1.0 / (1260.0 * x * x2 * x2)
        };
        (z - 0.5) * (d / z).ln_1p() + d * w.ln() - d + stirling_tail(w) - stirling_tail(z)
    } else {
        ln_gamma(z + d) - ln_gamma(z)
    }
}

/// `P(T_n > cap)` in closed form: the first `cap + n` balls contain fewer
/// than `n` balls outside the first block, so
/// `P(T_n > L) = Σ_{i=0}^{n-1} C(L+n-1, i) E[W_1^{L+n-1-i} (1 - W_1)^i]`.
/// Works for caps far beyond what direct summation can reach.
pub fn count_law_tail(params: &ExtParams<f64>, n: usize, cap: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be >= 1".into()));
    }
    let law = params.fraction_law(1)?;
    let big = cap as f64 + n as f64 - 1.0;
    let mut tail = 0.0;
    for i in 0..n {
        let fi = i as f64;
        let ln_choose = ln_gamma_ratio(big - fi + 1.0, fi) - ln_gamma(fi + 1.0);
        let power = big - fi;
        let ln_moment = match &law {
            FractionLaw::Beta(b) => {
                let (a, bb) = (*b.a(), *b.b());
                ln_gamma(a + bb) - ln_gamma(a) + ln_gamma_ratio(bb, fi)
                    - ln_gamma_ratio(a + power, bb + fi)
            }
            FractionLaw::Point(w) => {
                if *w >= 1.0 {
                    if i == 0 {
                        0.0
                    } else {
                        f64::NEG_INFINITY
                    }
                } else {
                    power * w.ln() + fi * (-w).ln_1p()
                }
            }
        };
        tail += (ln_choose + ln_moment).exp();
    }
    Ok(tail.min(1.0))
}

/// Smallest `L` with `P(T_n > L) <= tolerance`, searched with the closed-form tail.
pub fn count_law_cap(params: &ExtParams<f64>, n: usize, tolerance: f64) -> Result<u64> {
    const LIMIT: u64 = 1 << 62;
    if matches!(params.fraction_law(1)?, FractionLaw::Point(w) if w >= 1.0) {
        return Err(Error::Degenerate("W_1 = 1: the first block never ends".into()));
    }
    let mut hi: u64 = 1;
    while count_law_tail(params, n, hi)? > tolerance {
        if hi >= LIMIT {
            return Err(Error::NonConvergence { cap: usize::MAX });
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    if lo == 0 {
        return Ok(hi);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if count_law_tail(params, n, mid)? > tolerance {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}
