//! Block frequencies: appearance order, ranked order, and residual fractions.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{is_one, Scalar};

/// Tolerance for the mass identity in float mode.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Default truncation cap on untracked mass when generating infinite sequences.
pub const DEFAULT_RESIDUAL_CAP: f64 = 1e-9;

fn check_mass<S: Scalar>(p: &[S], dust: &S, residual: &S) -> Result<()> {
    if p.iter().any(|x| *x < S::zero()) || *dust < S::zero() || *residual < S::zero() {
        return Err(Error::OutOfRange("negative frequency".into()));
    }
    let total = p.iter().cloned().fold(S::zero(), |a, b| a + b) + dust.clone() + residual.clone();
    let ok = if S::EXACT {
        is_one(&total)
    } else {
        (total.to_f64() - 1.0).abs() <= MASS_TOLERANCE
    };
    if !ok {
        return Err(Error::OutOfRange(format!("frequencies sum to {total}, expected 1")));
    }
    Ok(())
}

/// Appearance-order frequencies `P_1, P_2, ...` (finite stored prefix) with
/// explicit dust `P_*` and truncation residual.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyVector<S> {
    p: Vec<S>,
    dust: S,
    residual: S,
}

impl<S: Scalar> FrequencyVector<S> {
    pub fn new(p: Vec<S>, dust: S, residual: S) -> Result<Self> {
        check_mass(&p, &dust, &residual)?;
        Ok(FrequencyVector { p, dust, residual })
    }

    /// Proper frequencies: no dust, residual `1 - Σp`.
    pub fn proper(p: Vec<S>) -> Result<Self> {
        let sum = p.iter().cloned().fold(S::zero(), |a, b| a + b);
        let mut residual = S::one() - sum;
        if !S::EXACT && residual < S::zero() && residual.to_f64() > -MASS_TOLERANCE {
            residual = S::zero();
        }
        Self::new(p, S::zero(), residual)
    }

    pub(crate) fn new_unchecked(p: Vec<S>, dust: S, residual: S) -> Self {
        FrequencyVector { p, dust, residual }
    }

    pub fn p(&self) -> &[S] {
        &self.p
    }

    pub fn dust(&self) -> &S {
        &self.dust
    }

    pub fn residual(&self) -> &S {
        &self.residual
    }

    /// Recovers `W_i = P_i / (1 - P_1 - ... - P_{i-1})`, stopping after the
    /// first `W_i = 1` (values past termination are unrecoverable).
    pub fn residual_fractions(&self) -> Result<ResidualFractions<S>> {
        let mut remaining = S::one();
        let mut w = Vec::with_capacity(self.p.len());
        for p in &self.p {
            if remaining.is_zero() {
                break;
            }
            w.push(p.clone() / remaining.clone());
            remaining = remaining - p.clone();
        }
        ResidualFractions::new(w)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "dust": self.dust.to_json(),
            "residual": self.residual.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let p = v
            .get("p")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array 'p'".into()))?
            .iter()
            .map(S::from_json)
            .collect::<Result<Vec<_>>>()?;
        let field = |k: &str| match v.get(k) {
            Some(x) => S::from_json(x),
            None => Ok(S::zero()),
        };
        Self::new(p, field("dust")?, field("residual")?)
    }
}

/// Nonincreasing frequencies `P↓_1 >= P↓_2 >= ...` with dust and residual.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedFrequencies<S> {
    p: Vec<S>,
    dust: S,
    residual: S,
}

impl<S: Scalar> RankedFrequencies<S> {
    pub fn new(p: Vec<S>, dust: S, residual: S) -> Result<Self> {
        if p.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::OutOfRange("ranked frequencies must be nonincreasing".into()));
        }
        check_mass(&p, &dust, &residual)?;
        Ok(RankedFrequencies { p, dust, residual })
    }

    pub fn p(&self) -> &[S] {
        &self.p
    }

    pub fn dust(&self) -> &S {
        &self.dust
    }

    pub fn residual(&self) -> &S {
        &self.residual
    }
}

/// Sorts the stored prefix into nonincreasing order; dust and residual carry over.
pub fn rank<S: Scalar>(f: &FrequencyVector<S>) -> RankedFrequencies<S> {
    let mut p = f.p.clone();
    p.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    RankedFrequencies {
        p,
        dust: f.dust.clone(),
        residual: f.residual.clone(),
    }
}

/// Residual fractions `W_1, W_2, ...` in `[0, 1]`, terminated at the first `W_k = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualFractions<S> {
    w: Vec<S>,
    terminated: bool,
}

impl<S: Scalar> ResidualFractions<S> {
    /// Values after the first 1 are dropped.
    pub fn new(values: Vec<S>) -> Result<Self> {
        let mut w = Vec::with_capacity(values.len());
        let mut terminated = false;
        for v in values {
            if v < S::zero() || v > S::one() {
                return Err(Error::OutOfRange(format!("residual fraction {v} outside [0,1]")));
            }
            let last = is_one(&v);
            w.push(v);
            if last {
                terminated = true;
                break;
            }
        }
        Ok(ResidualFractions { w, terminated })
    }

    pub fn values(&self) -> &[S] {
        &self.w
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }
}

/// `P_i = W_i ∏_{j<i} (1 - W_j)`; the residual is the unbroken remainder of the stick.
pub fn stick_breaking<S: Scalar>(w: &ResidualFractions<S>) -> FrequencyVector<S> {
    let mut remaining = S::one();
    let mut p = Vec::with_capacity(w.w.len());
    for wi in &w.w {
        p.push(wi.clone() * remaining.clone());
        remaining = remaining * (S::one() - wi.clone());
    }
    FrequencyVector::new_unchecked(p, S::zero(), remaining)
}
