//! Points of the extended two-parameter family.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// A member of the extended two-parameter family.
///
/// * `TwoParam`: `0 <= alpha < 1`, `theta > -alpha`.
/// * `NegAlpha`: `alpha < 0` with `theta = -m * alpha` (symmetric Dirichlet with `m` types).
/// * `Coupon`: `m` equally frequent types, the limit of `NegAlpha` as `alpha -> -inf`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtParams<S> {
    TwoParam { alpha: S, theta: S },
    NegAlpha { alpha: S, m: u32 },
    Coupon { m: u32 },
}

/// Parameter of the random order `◁_xi`, with the `xi = ∞` endpoint kept explicit.
#[derive(Debug, Clone, PartialEq)]
pub enum Xi<S> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> Xi<S> {
    pub fn finite(xi: S) -> Result<Self> {
        if xi < S::zero() {
            return Err(Error::InvalidParams(format!("xi must be >= 0, got {xi}")));
        }
        Ok(Xi::Finite(xi))
    }

    /// `xi = (1 - tau) / tau`, with `tau = 0` mapped to `xi = ∞`.
    pub fn from_tau(tau: &S) -> Result<Self> {
        check_tau(tau)?;
        if tau.is_zero() {
            Ok(Xi::Infinite)
        } else {
            Ok(Xi::Finite((S::one() - tau.clone()) / tau.clone()))
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Xi::Finite(x) => x.to_f64(),
            Xi::Infinite => f64::INFINITY,
        }
    }
}

pub(crate) fn check_tau<S: Scalar>(tau: &S) -> Result<()> {
    if *tau < S::zero() || *tau > S::one() {
        return Err(Error::InvalidParams(format!("tau must lie in [0,1], got {tau}")));
    }
    Ok(())
}

impl<S: Scalar> ExtParams<S> {
    pub fn two_param(alpha: S, theta: S) -> Result<Self> {
        let p = ExtParams::TwoParam { alpha, theta };
        p.validate()?;
        Ok(p)
    }

    pub fn neg_alpha(alpha: S, m: u32) -> Result<Self> {
        let p = ExtParams::NegAlpha { alpha, m };
        p.validate()?;
        Ok(p)
    }

    pub fn coupon(m: u32) -> Result<Self> {
        let p = ExtParams::Coupon { m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ExtParams::TwoParam { alpha, theta } => {
                if *alpha < S::zero() || *alpha >= S::one() {
                    return Err(Error::InvalidParams(format!(
                        "two-parameter range needs 0 <= alpha < 1, got alpha = {alpha}"
                    )));
                }
                if *theta <= -alpha.clone() {
                    return Err(Error::InvalidParams(format!(
                        "two-parameter range needs theta > -alpha, got theta = {theta}"
                    )));
                }
            }
            ExtParams::NegAlpha { alpha, m } => {
                if *alpha >= S::zero() {
                    return Err(Error::InvalidParams(format!(
                        "negative-alpha range needs alpha < 0, got {alpha}"
                    )));
                }
                if *m == 0 {
                    return Err(Error::InvalidParams("M must be a positive integer".into()));
                }
            }
            ExtParams::Coupon { m } => {
                if *m == 0 {
                    return Err(Error::InvalidParams("M must be a positive integer".into()));
                }
            }
        }
        Ok(())
    }

    /// `alpha`, or `None` for the coupon limit (alpha = -∞).
    pub fn alpha(&self) -> Option<S> {
        match self {
            ExtParams::TwoParam { alpha, .. } | ExtParams::NegAlpha { alpha, .. } => {
                Some(alpha.clone())
            }
            ExtParams::Coupon { .. } => None,
        }
    }

    /// `theta`, or `None` for the coupon limit.
    pub fn theta(&self) -> Option<S> {
        match self {
            ExtParams::TwoParam { theta, .. } => Some(theta.clone()),
            ExtParams::NegAlpha { alpha, m } => Some(-(S::from_int(*m as i64) * alpha.clone())),
            ExtParams::Coupon { .. } => None,
        }
    }

    /// Upper bound on the number of blocks, if finite.
    pub fn max_blocks(&self) -> Option<usize> {
        match self {
            ExtParams::TwoParam { .. } => None,
            ExtParams::NegAlpha { m, .. } | ExtParams::Coupon { m } => Some(*m as usize),
        }
    }

    /// Non-negative `(alpha, theta)`, not both zero; the range where the
    /// `tau`-deletion kernel is a probability.
    pub fn nonnegative_pair(&self) -> Result<(S, S)> {
        match self {
            ExtParams::TwoParam { alpha, theta } if *theta >= S::zero() => {
                if alpha.is_zero() && theta.is_zero() {
                    return Err(Error::UnsupportedKernel("(alpha, theta) = (0, 0)".into()));
                }
                Ok((alpha.clone(), theta.clone()))
            }
            other => Err(Error::UnsupportedKernel(format!(
                "deletion kernel needs alpha, theta >= 0; got {other}"
            ))),
        }
    }

    /// `tau = alpha / (alpha + theta)`.
    pub fn tau(&self) -> Result<S> {
        let (alpha, theta) = self.nonnegative_pair()?;
        Ok(alpha.clone() / (alpha + theta))
    }

    /// `xi = theta / alpha = (1 - tau) / tau`.
    pub fn xi(&self) -> Result<Xi<S>> {
        let (alpha, theta) = self.nonnegative_pair()?;
        if alpha.is_zero() {
            Ok(Xi::Infinite)
        } else {
            Ok(Xi::Finite(theta / alpha))
        }
    }

    /// Parameters of the partition left after deleting the block containing 1:
    /// `(alpha, theta + alpha)`, with `M` decremented in the finite-`M` cases.
    pub fn shifted(&self) -> Result<Self> {
        match self {
            ExtParams::TwoParam { alpha, theta } => {
                ExtParams::two_param(alpha.clone(), theta.clone() + alpha.clone())
            }
            ExtParams::NegAlpha { alpha, m } if *m > 1 => ExtParams::neg_alpha(alpha.clone(), m - 1),
            ExtParams::Coupon { m } if *m > 1 => ExtParams::coupon(m - 1),
            _ => Err(Error::Degenerate(
                "M = 1 leaves nothing after deleting the first block".into(),
            )),
        }
    }

    /// Whether `p(2,2,1) > 0` and `p(n) -> 0`; Coupon/NegAlpha with `M <= 2` fail it.
    pub fn is_regular(&self) -> bool {
        match self {
            ExtParams::TwoParam { .. } => true,
            ExtParams::NegAlpha { m, .. } | ExtParams::Coupon { m } => *m >= 3,
        }
    }

    pub fn to_f64(&self) -> ExtParams<f64> {
        match self {
            ExtParams::TwoParam { alpha, theta } => ExtParams::TwoParam {
                alpha: alpha.to_f64(),
                theta: theta.to_f64(),
            },
            ExtParams::NegAlpha { alpha, m } => ExtParams::NegAlpha {
                alpha: alpha.to_f64(),
                m: *m,
            },
            ExtParams::Coupon { m } => ExtParams::Coupon { m: *m },
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ExtParams::TwoParam { alpha, theta } => {
                json!({"family": "two-param", "alpha": alpha.to_json(), "theta": theta.to_json()})
            }
            ExtParams::NegAlpha { alpha, m } => {
                json!({"family": "neg-alpha", "alpha": alpha.to_json(), "m": m})
            }
            ExtParams::Coupon { m } => json!({"family": "coupon", "m": m}),
        }
    }
}

impl ExtParams<Rational> {
    /// Convenience constructor from small fractions, e.g. `ratio(1, 2, 1, 2)`.
    pub fn ratio(a_num: i64, a_den: i64, t_num: i64, t_den: i64) -> Result<Self> {
        ExtParams::two_param(
            Rational::from_ratio(a_num, a_den),
            Rational::from_ratio(t_num, t_den),
        )
    }
}

impl<S: Scalar> fmt::Display for ExtParams<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtParams::TwoParam { alpha, theta } => write!(f, "({alpha}, {theta})"),
            ExtParams::NegAlpha { alpha, m } => write!(f, "NegAlpha(alpha={alpha}, M={m})"),
            ExtParams::Coupon { m } => write!(f, "Coupon(M={m})"),
        }
    }
}
