//! Exact discrete laws and the EPPF-induced law of `Π_n`.

use std::collections::{BTreeMap, HashMap};

use crate::eppf::eppf;
use crate::error::{Error, Result};
use crate::params::ExtParams;
use crate::partition::{Composition, SetPartition};
use crate::scalar::Scalar;

use super::enumerate::partitions;

/// Largest `n` for which [`exact_law`] is tabulated.
pub const MAX_EXACT_LAW_N: usize = 10;

/// Finite law: outcome ↦ probability.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactLaw<K: Ord, S> {
    probs: BTreeMap<K, S>,
}

impl<K: Ord + Clone, S: Scalar> ExactLaw<K, S> {
    pub fn new() -> Self {
        ExactLaw { probs: BTreeMap::new() }
    }

    /// Adds `p` to the mass of `outcome`.
    pub fn add(&mut self, outcome: K, p: S) {
        match self.probs.get_mut(&outcome) {
            Some(v) => *v = v.clone() + p,
            None => {
                self.probs.insert(outcome, p);
            }
        }
    }

    pub fn get(&self, outcome: &K) -> S {
        self.probs.get(outcome).cloned().unwrap_or_else(S::zero)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &S)> {
        self.probs.iter()
    }

    pub fn total(&self) -> S {
        self.probs.values().cloned().fold(S::zero(), |a, b| a + b)
    }

    /// Divides every mass by `c`.
    pub fn scaled_down(&self, c: &S) -> Self {
        ExactLaw { probs: self.probs.iter().map(|(k, v)| (k.clone(), v.clone() / c.clone())).collect() }
    }

    /// `max_k |P(k) - Q(k)|` over the union of supports.
    pub fn max_deviation(&self, other: &Self) -> S {
        let mut worst = S::zero();
        for (k, v) in self.probs.iter() {
            let d = (v.clone() - other.get(k)).abs_val();
            if d > worst {
                worst = d;
            }
        }
        for (k, v) in other.probs.iter() {
            if !self.probs.contains_key(k) && v.abs_val() > worst {
                worst = v.abs_val();
            }
        }
        worst
    }

    /// The law with `eps` added at `outcome`, renormalized by `1 + eps`.
    pub fn perturbed(&self, outcome: &K, eps: &S) -> Self {
        let mut law = self.clone();
        law.add(outcome.clone(), eps.clone());
        law.scaled_down(&(S::one() + eps.clone()))
    }
}

impl<K: Ord + Clone, S: Scalar> Default for ExactLaw<K, S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone, S: Scalar> FromIterator<(K, S)> for ExactLaw<K, S> {
    fn from_iter<I: IntoIterator<Item = (K, S)>>(iter: I) -> Self {
        let mut law = ExactLaw::new();
        for (k, p) in iter {
            law.add(k, p);
        }
        law
    }
}

/// EPPF values memoized by the multiset of block sizes.
pub(crate) struct EppfCache<'a, S> {
    params: &'a ExtParams<S>,
    memo: HashMap<Vec<usize>, S>,
}

impl<'a, S: Scalar> EppfCache<'a, S> {
    pub(crate) fn new(params: &'a ExtParams<S>) -> Self {
        EppfCache { params, memo: HashMap::new() }
    }

    pub(crate) fn get(&mut self, sizes: &[usize]) -> Result<S> {
        let mut key = sizes.to_vec();
        key.sort_unstable_by(|a, b| b.cmp(a));
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let v = eppf(self.params, &Composition::new(key.clone())?)?;
        self.memo.insert(key, v.clone());
        Ok(v)
    }
}

/// `P(Π_n = π) = p(|B_1|, ..., |B_k|)` for every partition of `[n]`, `n <= 10`.
pub fn exact_law<S: Scalar>(params: &ExtParams<S>, n: usize) -> Result<ExactLaw<SetPartition, S>> {
    if n == 0 || n > MAX_EXACT_LAW_N {
        return Err(Error::OutOfRange(format!("exact_law supports 1 <= n <= {MAX_EXACT_LAW_N}, got {n}")));
    }
    params.validate()?;
    let mut cache = EppfCache::new(params);
    let mut law = ExactLaw::new();
    for p in partitions(n)? {
        let v = cache.get(&p.block_sizes())?;
        if !v.is_zero() {
            law.add(p, v);
        }
    }
    Ok(law)
}
