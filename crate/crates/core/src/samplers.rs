//! Seeded samplers: Chinese restaurant process, stick-breaking frequencies,
//! paintbox partitions, size- and τ-biased picks, and random `◁_ξ` orders.
//!
//! Index conventions: picks and permutations use 0-based indices into the
//! input slice; `XiOrder` ranks are 1-based as in `ρ_j ∈ {1, ..., j}`.

use crate::error::{Error, Result};
use crate::frequency::{stick_breaking, FrequencyVector, RankedFrequencies, ResidualFractions};
use crate::interval::{IntervalSet, Location};
use crate::params::{check_tau, ExtParams, Xi};
use crate::partition::SetPartition;
use crate::rng::RngHandle;
use crate::scalar::Scalar;
use crate::eppf::FractionLaw;

/// Hard cap on the number of sticks drawn by [`gem_sample`].
pub const MAX_STICKS: usize = 50_000_000;

const SUM_TOLERANCE: f64 = 1e-9;

fn pick_weighted(weights: &[f64], total: f64, rng: &mut RngHandle) -> usize {
    let mut u = rng.uniform() * total;
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            return i;
        }
        u -= w;
    }
    // rounding slack lands on the last positive weight
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
}

/// Seats `n` customers: table `i` with weight `λ_i - α`, a new table with
/// weight `θ + kα`. Coupon(M) seats uniformly over `M` types.
pub fn crp_sample<S: Scalar>(params: &ExtParams<S>, n: usize, rng: &mut RngHandle) -> Result<SetPartition> {
    params.validate()?;
    if n == 0 {
        return Err(Error::OutOfRange("n must be >= 1".into()));
    }
    let p = params.to_f64();
    let mut labels = Vec::with_capacity(n);
    let mut sizes: Vec<usize> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    for _ in 0..n {
        let k = sizes.len();
        weights.clear();
        let new_table = match &p {
            ExtParams::Coupon { m } => {
                weights.extend(std::iter::repeat_n(1.0, k));
                (*m as usize).saturating_sub(k) as f64
            }
            ExtParams::TwoParam { alpha, theta } => {
                weights.extend(sizes.iter().map(|&s| s as f64 - alpha));
                theta + k as f64 * alpha
            }
            ExtParams::NegAlpha { alpha, m } => {
                weights.extend(sizes.iter().map(|&s| s as f64 - alpha));
                (k as f64 - *m as f64) * alpha
            }
        };
        weights.push(new_table.max(0.0));
        let total: f64 = weights.iter().sum();
        let table = pick_weighted(&weights, total, rng);
        if table == k {
            sizes.push(1);
        } else {
            sizes[table] += 1;
        }
        labels.push(table);
    }
    Ok(SetPartition::from_labels(&labels))
}

/// Independent `W_k` from the family's stick-breaking law until the unbroken
/// remainder drops below `eps` or the sequence terminates.
pub fn gem_sample<S: Scalar>(
    params: &ExtParams<S>,
    eps: f64,
    rng: &mut RngHandle,
) -> Result<(ResidualFractions<f64>, FrequencyVector<f64>)> {
    params.validate()?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfRange(format!("residual cap must lie in (0,1), got {eps}")));
    }
    let p = params.to_f64();
    let mut w = Vec::new();
    let mut remaining = 1.0f64;
    let mut i = 1;
    while remaining >= eps {
        if i > MAX_STICKS {
            return Err(Error::NonConvergence { cap: MAX_STICKS });
        }
        let wi = draw_fraction(&p, i, rng)?;
        w.push(wi);
        if wi >= 1.0 {
            break;
        }
        remaining *= 1.0 - wi;
        i += 1;
    }
    let fractions = ResidualFractions::new(w)?;
    let freqs = stick_breaking(&fractions);
    Ok((fractions, freqs))
}

fn draw_fraction(p: &ExtParams<f64>, i: usize, rng: &mut RngHandle) -> Result<f64> {
    Ok(match p.fraction_law(i)? {
        FractionLaw::Beta(b) => rng.beta(*b.a(), *b.b()),
        FractionLaw::Point(x) => x,
    })
}

/// The first `k` residual fractions, fewer if the sequence terminates.
/// Same draws as [`gem_sample`] without a mass cut-off.
pub fn gem_fractions<S: Scalar>(params: &ExtParams<S>, k: usize, rng: &mut RngHandle) -> Result<ResidualFractions<f64>> {
    params.validate()?;
    let p = params.to_f64();
    let mut w = Vec::with_capacity(k);
    for i in 1..=k {
        let wi = draw_fraction(&p, i, rng)?;
        w.push(wi);
        if wi >= 1.0 {
            break;
        }
    }
    ResidualFractions::new(w)
}

/// Colouring of `[0, 1]` used by [`paintbox_sample`].
#[derive(Debug, Clone, Copy)]
pub enum Paintbox<'a> {
    Intervals(&'a IntervalSet),
    /// Frequencies laid out contiguously from 0; dust and residual follow.
    Ranked(&'a RankedFrequencies<f64>),
}

/// Partition of `n` i.i.d. uniform points by the component they hit; points
/// in dust, residual, or the null complement are singletons.
pub fn paintbox_sample(paintbox: Paintbox<'_>, n: usize, rng: &mut RngHandle) -> SetPartition {
    enum Label {
        Cell(usize),
        Single(usize),
    }
    let mut raw = Vec::with_capacity(n);
    match paintbox {
        Paintbox::Intervals(set) => {
            for i in 0..n {
                raw.push(match set.locate(rng.uniform()) {
                    Location::Component(c) => Label::Cell(c),
                    _ => Label::Single(i),
                });
            }
        }
        Paintbox::Ranked(f) => {
            let mut cumulative = Vec::with_capacity(f.p().len());
            let mut acc = 0.0;
            for &x in f.p() {
                acc += x;
                cumulative.push(acc);
            }
            for i in 0..n {
                let u = rng.uniform();
                let c = cumulative.partition_point(|&c| c <= u);
                raw.push(if c < cumulative.len() { Label::Cell(c) } else { Label::Single(i) });
            }
        }
    }
    let labels: Vec<(bool, usize)> = raw
        .into_iter()
        .map(|l| match l {
            Label::Cell(c) => (true, c),
            Label::Single(i) => (false, i),
        })
        .collect();
    SetPartition::from_labels(&labels)
}

fn check_nonnegative(x: &[f64]) -> Result<f64> {
    if let Some(bad) = x.iter().find(|v| !(**v >= 0.0)) {
        return Err(Error::OutOfRange(format!("negative or NaN entry {bad}")));
    }
    Ok(x.iter().sum())
}

/// Index `j` with probability `x_j`; `None` with probability `1 - Σx`.
pub fn size_biased_pick(x: &[f64], rng: &mut RngHandle) -> Result<Option<usize>> {
    let total = check_nonnegative(x)?;
    if total > 1.0 + SUM_TOLERANCE {
        return Err(Error::OutOfRange(format!("entries sum to {total} > 1")));
    }
    let mut u = rng.uniform();
    for (j, &v) in x.iter().enumerate() {
        if u < v {
            return Ok(Some(j));
        }
        u -= v;
    }
    Ok(None)
}

fn check_positive<S: Scalar>(x: &[S]) -> Result<S> {
    if x.is_empty() {
        return Err(Error::OutOfRange("τ-biased pick from an empty sequence".into()));
    }
    if let Some(bad) = x.iter().find(|v| **v <= S::zero()) {
        return Err(Error::OutOfRange(format!("τ-biased pick needs positive entries, got {bad}")));
    }
    Ok(x.iter().cloned().fold(S::zero(), |a, b| a + b))
}

/// `P(pick j) = [(1-τ)x_j + τ(s - x_j)] / [s(1 - τ + τ(k-1))]`, exact in rational mode.
pub fn tau_pick_probability<S: Scalar>(x: &[S], tau: &S, j: usize) -> Result<S> {
    let s = check_positive(x)?;
    check_tau(tau)?;
    let k = x.len();
    if j >= k {
        return Err(Error::IndexOutOfRange { index: j, len: k });
    }
    if k == 1 {
        return Ok(S::one());
    }
    let one_minus = S::one() - tau.clone();
    let num = one_minus.clone() * x[j].clone() + tau.clone() * (s.clone() - x[j].clone());
    let den = s * (one_minus + tau.clone() * S::from_int(k as i64 - 1));
    Ok(num / den)
}

/// One τ-biased pick; `τ = 0` is size-biased, `τ = 1` co-size-biased.
pub fn tau_biased_pick(x: &[f64], tau: f64, rng: &mut RngHandle) -> Result<usize> {
    let s = check_positive(x)?;
    check_tau(&tau)?;
    if x.len() == 1 {
        return Ok(0);
    }
    let weights: Vec<f64> = x.iter().map(|&v| (1.0 - tau) * v + tau * (s - v)).collect();
    let total = weights.iter().sum();
    Ok(pick_weighted(&weights, total, rng))
}

/// Visit order of repeated τ-biased picks without replacement.
pub fn tau_biased_perm(x: &[f64], tau: f64, rng: &mut RngHandle) -> Result<Vec<usize>> {
    check_positive(x)?;
    check_tau(&tau)?;
    let mut left: Vec<usize> = (0..x.len()).collect();
    let mut order = Vec::with_capacity(x.len());
    let mut sub = Vec::with_capacity(x.len());
    while !left.is_empty() {
        sub.clear();
        sub.extend(left.iter().map(|&i| x[i]));
        let j = tau_biased_pick(&sub, tau, rng)?;
        order.push(left.remove(j));
    }
    Ok(order)
}

/// Size-biased permutation: [`tau_biased_perm`] with `τ = 0`.
pub fn size_biased_perm(x: &[f64], rng: &mut RngHandle) -> Result<Vec<usize>> {
    tau_biased_perm(x, 0.0, rng)
}

/// Binary indexed tree over slot occupancy, for order-statistic lookups.
struct Fenwick {
    tree: Vec<usize>,
}

impl Fenwick {
    fn all_free(n: usize) -> Self {
        let mut tree = vec![0; n + 1];
        for i in 1..=n {
            tree[i] += 1;
            let parent = i + (i & i.wrapping_neg());
            if parent <= n {
                tree[parent] += tree[i];
            }
        }
        Fenwick { tree }
    }

    fn take(&mut self, mut i: usize) {
        while i < self.tree.len() {
            self.tree[i] -= 1;
            i += i & i.wrapping_neg();
        }
    }

    /// 1-based slot holding the `rank`-th free position.
    fn kth_free(&self, mut rank: usize) -> usize {
        let n = self.tree.len() - 1;
        let mut pos = 0;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] < rank {
                pos = next;
                rank -= self.tree[next];
            }
            step >>= 1;
        }
        pos + 1
    }
}

/// A total order on `[k]` given by initial ranks: `ρ_j` is the position of
/// `j` among `1..=j` in the order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiOrder {
    ranks: Vec<usize>,
}

impl XiOrder {
    pub fn new(ranks: Vec<usize>) -> Result<Self> {
        for (i, &r) in ranks.iter().enumerate() {
            if r == 0 || r > i + 1 {
                return Err(Error::OutOfRange(format!("rank ρ_{} = {r} not in [1, {}]", i + 1, i + 1)));
            }
        }
        Ok(XiOrder { ranks })
    }

    /// Recovers the initial ranks of a 0-based arrangement (position `t` holds item `a[t]`).
    pub fn from_arrangement(arrangement: &[usize]) -> Result<Self> {
        let pos = positions(arrangement)?;
        let ranks = (0..pos.len())
            .map(|j| 1 + pos[..j].iter().filter(|&&p| p < pos[j]).count())
            .collect();
        Ok(XiOrder { ranks })
    }

    pub fn k(&self) -> usize {
        self.ranks.len()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Number of `j` placed after every smaller item (`ρ_j = j`).
    pub fn upper_records(&self) -> usize {
        self.ranks.iter().enumerate().filter(|(i, &r)| r == i + 1).count()
    }

    /// 0-based items listed in `◁` order.
    pub fn arrangement(&self) -> Vec<usize> {
        let k = self.ranks.len();
        let mut slots = Fenwick::all_free(k);
        let mut out = vec![0; k];
        // inserting larger items never reorders smaller ones
        for j in (0..k).rev() {
            let slot = slots.kth_free(self.ranks[j]);
            slots.take(slot);
            out[slot - 1] = j;
        }
        out
    }
}

fn positions(arrangement: &[usize]) -> Result<Vec<usize>> {
    let n = arrangement.len();
    let mut pos = vec![usize::MAX; n];
    for (t, &item) in arrangement.iter().enumerate() {
        if item >= n || pos[item] != usize::MAX {
            return Err(Error::OutOfRange(format!("{arrangement:?} is not a permutation of 0..{n}")));
        }
        pos[item] = t;
    }
    Ok(pos)
}

/// Independent ranks with `P(ρ_j = j) = ξ/(j + ξ - 1)`, otherwise uniform on `1..j`.
pub fn xi_order(k: usize, xi: &Xi<f64>, rng: &mut RngHandle) -> Result<XiOrder> {
    if let Xi::Finite(x) = xi {
        if !(*x >= 0.0) {
            return Err(Error::InvalidParams(format!("xi must be >= 0, got {x}")));
        }
    }
    let mut ranks = Vec::with_capacity(k);
    for j in 1..=k {
        let last = match xi {
            Xi::Infinite => true,
            Xi::Finite(x) => j == 1 || rng.uniform() * (j as f64 - 1.0 + x) < *x,
        };
        ranks.push(if last { j } else { 1 + rng.below(j - 1) });
    }
    Ok(XiOrder { ranks })
}

/// `P(◁_ξ restricted to [n] equals the arrangement) = ξ^r / (ξ)_n`, with `r` upper records.
/// Evaluated as `ξ^(r-1) / ∏_{i<n} (ξ + i)` so that `ξ = 0` is covered.
pub fn order_probability<S: Scalar>(xi: &Xi<S>, arrangement: &[usize]) -> Result<S> {
    let order = XiOrder::from_arrangement(arrangement)?;
    let n = order.k();
    if n == 0 {
        return Ok(S::one());
    }
    let r = order.upper_records();
    match xi {
        Xi::Infinite => Ok(if r == n { S::one() } else { S::zero() }),
        Xi::Finite(x) => {
            if *x < S::zero() {
                return Err(Error::InvalidParams(format!("xi must be >= 0, got {x}")));
            }
            let mut den = S::one();
            for i in 1..n {
                den = den * (x.clone() + S::from_int(i as i64));
            }
            Ok(x.powi((r - 1) as u32) / den)
        }
    }
}
