//! Exact characterization checks. Each returns a maximal absolute deviation
//! that vanishes (exactly, in rational mode) when the identity holds, and
//! each has a deviation entry point that accepts an arbitrary law so that
//! perturbed inputs can serve as negative controls.

use std::collections::BTreeMap;

use crate::deletion::{decrement_matrix, deletion_kernel};
use crate::error::{Error, Result};
use crate::params::{ExtParams, Xi};
use crate::partition::{Composition, SetPartition};
use crate::samplers::{order_probability, tau_pick_probability, XiOrder};
use crate::scalar::Scalar;

use super::enumerate::{permutations, rank_sequences};
use super::law::{exact_law, ExactLaw};

/// Largest `n` for the deletion checks.
pub const MAX_CHECK_N: usize = 8;

/// Largest sequence length for the permutation laws. [`leem_check`] stops at
/// [`MAX_LEEM_K`] because its right side costs `k!^2`.
pub const MAX_PERM_K: usize = 8;

pub const MAX_LEEM_K: usize = 6;

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_CHECK_N {
        return Err(Error::OutOfRange(format!("check supports 1 <= n <= {MAX_CHECK_N}, got {n}")));
    }
    Ok(())
}

fn max_of<S: Scalar>(values: impl IntoIterator<Item = S>) -> S {
    values.into_iter().fold(S::zero(), |a, b| if b > a { b } else { a })
}

/// Conditional laws of a remainder given the deleted size, from joint masses.
struct Conditionals<S: Scalar> {
    by_size: BTreeMap<usize, (S, ExactLaw<SetPartition, S>)>,
}

impl<S: Scalar> Conditionals<S> {
    fn new() -> Self {
        Conditionals { by_size: BTreeMap::new() }
    }

    fn add(&mut self, m: usize, remainder: SetPartition, p: S) {
        let entry = self.by_size.entry(m).or_insert_with(|| (S::zero(), ExactLaw::new()));
        entry.0 = entry.0.clone() + p.clone();
        entry.1.add(remainder, p);
    }

    fn size_mass(&self, m: usize) -> S {
        self.by_size.get(&m).map(|e| e.0.clone()).unwrap_or_else(S::zero)
    }

    /// Max deviation of the conditional remainder laws (`m < n`) from `target(n - m)`.
    /// Sizes with zero conditioning mass are skipped; all of them being
    /// skipped for `n >= 2` is an error.
    fn deviation(
        &self,
        n: usize,
        mut target: impl FnMut(usize) -> Result<ExactLaw<SetPartition, S>>,
    ) -> Result<S> {
        let mut worst = S::zero();
        let mut checked = 0;
        for (&m, (mass, joint)) in &self.by_size {
            if m == n || mass.is_zero() {
                continue;
            }
            checked += 1;
            let conditional = joint.scaled_down(mass);
            let d = conditional.max_deviation(&target(n - m)?);
            if d > worst {
                worst = d;
            }
        }
        if n >= 2 && checked == 0 {
            return Err(Error::Oracle(format!(
                "every deleted size m < {n} has probability 0; nothing to condition on"
            )));
        }
        Ok(worst)
    }
}

/// Deletion of the block containing 1 from `law` (a law on partitions of
/// `[n]`), compared with `target` at each remaining size.
pub fn deletion_law_deviation<S: Scalar>(
    law: &ExactLaw<SetPartition, S>,
    n: usize,
    target: &ExtParams<S>,
) -> Result<S> {
    let mut cond = Conditionals::new();
    for (p, v) in law.iter() {
        if p.n() != n {
            return Err(Error::Oracle(format!("law mixes partitions of {} and {n}", p.n())));
        }
        cond.add(p.blocks()[0].len(), p.delete_block(0)?, v.clone());
    }
    cond.deviation(n, |r| exact_law(target, r))
}

/// Given `|B_1| = m`, the rest of `Π_n` must follow the law at `(α, θ+α)`
/// (or `M - 1`) on `[n - m]`. Returns the largest deviation over `m < n`.
pub fn deletion_law_check<S: Scalar>(params: &ExtParams<S>, n: usize) -> Result<S> {
    check_n(n)?;
    let law = exact_law(params, n)?;
    if n == 1 {
        return Ok(S::zero());
    }
    deletion_law_deviation(&law, n, &params.shifted()?)
}

/// Deviations found by [`tau_regen_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct TauRegenReport<S> {
    /// Conditional law of the remainder given the deleted size.
    pub remainder: S,
    /// Law of the deleted size against the decrement row.
    pub deleted_size: S,
}

impl<S: Scalar> TauRegenReport<S> {
    pub fn max(&self) -> S {
        max_of([self.remainder.clone(), self.deleted_size.clone()])
    }
}

/// τ-biased deletion from `law` with the kernel of `params`, compared with
/// the law at `params` on the remainder and with the decrement row `n`.
pub fn tau_regen_deviation<S: Scalar>(
    law: &ExactLaw<SetPartition, S>,
    n: usize,
    params: &ExtParams<S>,
) -> Result<TauRegenReport<S>> {
    let mut cond = Conditionals::new();
    for (p, v) in law.iter() {
        let lambda = p.composition().ok_or_else(|| Error::Oracle("empty partition".into()))?;
        for j in 0..p.num_blocks() {
            let d = deletion_kernel(params, &lambda, j)?;
            if !d.is_zero() {
                cond.add(p.blocks()[j].len(), p.delete_block(j)?, v.clone() * d);
            }
        }
    }
    let row = decrement_matrix(params, n)?;
    let row = row.row(n).expect("row n");
    let deleted_size = max_of((1..=n).map(|m| (cond.size_mass(m) - row[m - 1].clone()).abs_val()));
    let remainder = if n == 1 { S::zero() } else { cond.deviation(n, |r| exact_law(params, r))? };
    Ok(TauRegenReport { remainder, deleted_size })
}

/// Regeneration under τ-biased deletion, `α, θ >= 0`, `n <= 8`.
pub fn tau_regen_check<S: Scalar>(params: &ExtParams<S>, n: usize) -> Result<TauRegenReport<S>> {
    check_n(n)?;
    params.nonnegative_pair()?;
    tau_regen_deviation(&exact_law(params, n)?, n, params)
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 || k > MAX_PERM_K {
        return Err(Error::OutOfRange(format!("permutation checks need 1 <= k <= {MAX_PERM_K}, got {k}")));
    }
    Ok(())
}

/// Exact law of `perm_τ(x)` as the list of visited (0-based) indices.
pub fn tau_perm_law<S: Scalar>(x: &[S], tau: &S) -> Result<ExactLaw<Vec<usize>, S>> {
    check_k(x.len())?;
    let mut law = ExactLaw::new();
    for perm in permutations(x.len()) {
        let mut left: Vec<usize> = (0..x.len()).collect();
        let mut p = S::one();
        for &item in &perm {
            let pos = left.iter().position(|&i| i == item).expect("item left");
            let sub: Vec<S> = left.iter().map(|&i| x[i].clone()).collect();
            p = p * tau_pick_probability(&sub, tau, pos)?;
            left.remove(pos);
            if p.is_zero() {
                break;
            }
        }
        if !p.is_zero() {
            law.add(perm, p);
        }
    }
    Ok(law)
}

/// Exact law of `◁_ξ` restricted to `[k]`, as 0-based arrangements, from
/// the initial-rank distribution (independently of [`order_probability`]).
pub fn xi_order_law<S: Scalar>(k: usize, xi: &Xi<S>) -> Result<ExactLaw<Vec<usize>, S>> {
    check_k(k)?;
    let mut law = ExactLaw::new();
    for ranks in rank_sequences(k) {
        let mut p = S::one();
        for (i, &r) in ranks.iter().enumerate().skip(1) {
            let j = i + 1;
            let last = r == j;
            p = p * match xi {
                Xi::Infinite => if last { S::one() } else { S::zero() },
                Xi::Finite(x) => {
                    let den = S::from_int(j as i64 - 1) + x.clone();
                    if last { x.clone() / den } else { S::one() / den }
                }
            };
        }
        if !p.is_zero() {
            law.add(XiOrder::new(ranks)?.arrangement(), p);
        }
    }
    Ok(law)
}

/// Law of `◁_ξ(perm_0(x))`: output position `t` holds `x[σ(i_t)]`.
pub fn composed_order_law<S: Scalar>(x: &[S], xi: &Xi<S>) -> Result<ExactLaw<Vec<usize>, S>> {
    let k = x.len();
    let size_biased = tau_perm_law(x, &S::zero())?;
    let arrangements: Vec<(Vec<usize>, S)> = permutations(k)
        .into_iter()
        .map(|a| order_probability(xi, &a).map(|p| (a, p)))
        .collect::<Result<_>>()?;
    let mut law = ExactLaw::new();
    for (sigma, ps) in size_biased.iter() {
        for (arr, pa) in &arrangements {
            if pa.is_zero() {
                continue;
            }
            let out: Vec<usize> = arr.iter().map(|&i| sigma[i]).collect();
            law.add(out, ps.clone() * pa.clone());
        }
    }
    Ok(law)
}

/// `perm_τ(x)` against `◁_ξ(perm_0(x))` for an arbitrary `ξ`.
pub fn leem_deviation<S: Scalar>(x: &[S], tau: &S, xi: &Xi<S>) -> Result<S> {
    if x.len() > MAX_LEEM_K {
        return Err(Error::OutOfRange(format!("leem check supports k <= {MAX_LEEM_K}, got {}", x.len())));
    }
    Ok(tau_perm_law(x, tau)?.max_deviation(&composed_order_law(x, xi)?))
}

/// `perm_τ(x) =d ◁_ξ(perm_0(x))` with `ξ = (1-τ)/τ` (`τ = 0` is `ξ = ∞`).
pub fn leem_check<S: Scalar>(x: &[S], tau: &S) -> Result<S> {
    leem_deviation(x, tau, &Xi::from_tau(tau)?)
}

/// Deviations found by [`record_independence_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct RecordReport<S> {
    /// `max_j |P(A_j) - x_j / (x_j + ... + x_k)|`
    pub marginals: S,
    /// `max_J |P(∩_{j∈J} A_j) - ∏_{j∈J} P(A_j)|` over all index sets.
    pub independence: S,
}

impl<S: Scalar> RecordReport<S> {
    pub fn max(&self) -> S {
        max_of([self.marginals.clone(), self.independence.clone()])
    }
}

/// Events `A_j`: `x_j` precedes every `x_ℓ`, `ℓ > j`, in the given permutation law.
pub fn record_event_deviation<S: Scalar>(x: &[S], law: &ExactLaw<Vec<usize>, S>) -> Result<RecordReport<S>> {
    let k = x.len();
    let events = |perm: &[usize]| -> u32 {
        let mut pos = vec![0; k];
        for (t, &i) in perm.iter().enumerate() {
            pos[i] = t;
        }
        (0..k).filter(|&j| (j + 1..k).all(|l| pos[j] < pos[l])).fold(0u32, |acc, j| acc | (1 << j))
    };
    let mut joint = vec![S::zero(); 1 << k];
    for (perm, p) in law.iter() {
        let e = events(perm);
        for (set, slot) in joint.iter_mut().enumerate() {
            if e & set as u32 == set as u32 {
                *slot = slot.clone() + p.clone();
            }
        }
    }
    let marginal: Vec<S> = (0..k).map(|j| joint[1 << j].clone()).collect();
    let mut tail = S::zero();
    let mut marginals = S::zero();
    for j in (0..k).rev() {
        tail = tail + x[j].clone();
        let d = (marginal[j].clone() - x[j].clone() / tail.clone()).abs_val();
        if d > marginals {
            marginals = d;
        }
    }
    let independence = max_of((0..joint.len()).map(|set| {
        let product = (0..k)
            .filter(|j| set & (1 << j) != 0)
            .fold(S::one(), |acc, j| acc * marginal[j].clone());
        (joint[set].clone() - product).abs_val()
    }));
    Ok(RecordReport { marginals, independence })
}

/// Record events of the size-biased permutation are independent with
/// `P(A_j) = x_j / (x_j + ... + x_k)`.
pub fn record_independence_check<S: Scalar>(x: &[S]) -> Result<RecordReport<S>> {
    record_event_deviation(x, &tau_perm_law(x, &S::zero())?)
}

/// Deviations found by [`order_probability_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct OrderReport<S> {
    /// `|Σ order_probability - 1|` over all arrangements.
    pub total: S,
    /// Max deviation of the record formula from the rank enumeration.
    pub formula: S,
}

impl<S: Scalar> OrderReport<S> {
    pub fn max(&self) -> S {
        max_of([self.total.clone(), self.formula.clone()])
    }
}

/// The record formula against brute-force enumeration of initial ranks.
pub fn order_probability_check<S: Scalar>(xi: &Xi<S>, n: usize) -> Result<OrderReport<S>> {
    let formula: ExactLaw<Vec<usize>, S> = permutations(n)
        .into_iter()
        .map(|a| order_probability(xi, &a).map(|p| (a, p)))
        .collect::<Result<_>>()?;
    let total = (formula.total() - S::one()).abs_val();
    Ok(OrderReport { total, formula: formula.max_deviation(&xi_order_law(n, xi)?) })
}

/// The partition `{1}, {2, ..., n}` perturbed by `eps` and renormalized; the
/// standard negative control for the deletion checks.
pub fn perturbed_law<S: Scalar>(params: &ExtParams<S>, n: usize, eps: &S) -> Result<ExactLaw<SetPartition, S>> {
    let law = exact_law(params, n)?;
    let mut labels = vec![1u8; n];
    labels[0] = 0;
    Ok(law.perturbed(&SetPartition::from_labels(&labels), eps))
}

/// Composition of block sizes of the `{1}, {2..n}` control partition.
pub fn control_composition(n: usize) -> Result<Composition> {
    if n < 2 {
        return Err(Error::OutOfRange("control partition needs n >= 2".into()));
    }
    Composition::new(vec![1, n - 1])
}
