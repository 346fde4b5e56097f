//! Goodness-of-fit statistics and a reproducible parallel Monte Carlo driver.

use std::collections::BTreeMap;

use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::rng::RngHandle;
use crate::scalar::Scalar;

use super::law::ExactLaw;

/// Replicates per split stream. Fixed so results do not depend on the
/// number of worker threads.
pub const CHUNK: usize = 4096;

/// Environment variable capping the worker count.
pub const THREADS_VAR: &str = "PARTITION_LAB_THREADS";

/// Default minimum expected count per chi-square bin.
pub const MIN_EXPECTED: f64 = 5.0;

/// Worker count from [`THREADS_VAR`], or rayon's default when unset or invalid.
pub fn thread_count() -> usize {
    std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Runs `f` on a pool sized by [`thread_count`].
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(thread_count()).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// `count` replicates of `f`. Replicate `i` runs on stream
/// `root.split(i / CHUNK)`, in order within its chunk, so the output is
/// identical for every thread count.
pub fn monte_carlo<T, F>(root: &RngHandle, count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngHandle) -> Result<T> + Sync + Send,
{
    let chunks = count.div_ceil(CHUNK);
    let parts: Vec<Vec<T>> = with_pool(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = root.split(c as u64);
                let len = CHUNK.min(count - c * CHUNK);
                (0..len).map(|_| f(&mut rng)).collect::<Result<Vec<T>>>()
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(parts.into_iter().flatten().collect())
}

/// Outcome counts.
pub fn tally<K: Ord, I: IntoIterator<Item = K>>(items: I) -> BTreeMap<K, u64> {
    let mut counts = BTreeMap::new();
    for k in items {
        *counts.entry(k).or_insert(0) += 1;
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Bins after pooling.
    pub bins: usize,
}

/// Pearson chi-square of `observed` against cell probabilities `probs`.
///
/// Cells with expected count below `min_expected` are pooled into one bin;
/// a pooled bin still below the threshold is merged into the smallest
/// remaining bin. Observations in a zero-probability cell give `p = 0`.
pub fn chi_square_counts(observed: &[u64], probs: &[f64], min_expected: f64) -> Result<ChiSquare> {
    if observed.len() != probs.len() {
        return Err(Error::Oracle("observed and probability vectors differ in length".into()));
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(Error::Oracle("no observations".into()));
    }
    let n = total as f64;
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut pooled = (0.0, 0.0);
    let mut impossible = false;
    for (&o, &p) in observed.iter().zip(probs) {
        let e = n * p;
        if p <= 0.0 && o > 0 {
            impossible = true;
        }
        if e < min_expected {
            pooled.0 += o as f64;
            pooled.1 += e;
        } else {
            bins.push((o as f64, e));
        }
    }
    if pooled.1 >= min_expected {
        bins.push(pooled);
    } else if pooled.1 > 0.0 || pooled.0 > 0.0 {
        match bins.iter_mut().min_by(|a, b| a.1.total_cmp(&b.1)) {
            Some(smallest) => {
                smallest.0 += pooled.0;
                smallest.1 += pooled.1;
            }
            None => bins.push(pooled),
        }
    }
    if bins.len() < 2 {
        return Err(Error::TooFewBins(bins.len()));
    }
    let dof = bins.len() - 1;
    if impossible {
        return Ok(ChiSquare { statistic: f64::INFINITY, dof, p_value: 0.0, bins: bins.len() });
    }
    let statistic: f64 = bins.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Oracle(e.to_string()))?;
    let p_value = if statistic <= 0.0 { 1.0 } else { dist.sf(statistic) };
    Ok(ChiSquare { statistic, dof, p_value, bins: bins.len() })
}

/// Chi-square of outcome counts against an exact law. Observed outcomes
/// missing from the law are zero-probability cells.
pub fn chi_square<K: Ord + Clone, S: Scalar>(
    observed: &BTreeMap<K, u64>,
    law: &ExactLaw<K, S>,
    min_expected: f64,
) -> Result<ChiSquare> {
    let mut obs = Vec::with_capacity(law.len());
    let mut probs = Vec::with_capacity(law.len());
    for (k, p) in law.iter() {
        obs.push(observed.get(k).copied().unwrap_or(0));
        probs.push(p.to_f64());
    }
    for (k, &o) in observed {
        if law.get(k).is_zero() {
            obs.push(o);
            probs.push(0.0);
        }
    }
    chi_square_counts(&obs, &probs, min_expected)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KolmogorovSmirnov {
    pub statistic: f64,
    pub p_value: f64,
}

/// Asymptotic Kolmogorov distribution tail `Q(λ) = 2 Σ (-1)^(j-1) e^(-2 j² λ²)`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=200 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-16 * sum.abs() {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample KS test with the small-sample correction
/// `λ = (√m + 0.12 + 0.11/√m) D`, `m = n₁n₂/(n₁+n₂)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KolmogorovSmirnov> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Oracle("KS needs two nonempty samples".into()));
    }
    if a.iter().chain(b).any(|x| x.is_nan()) {
        return Err(Error::Oracle("KS sample contains NaN".into()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let m = (na * nb / (na + nb)).sqrt();
    Ok(KolmogorovSmirnov { statistic: d, p_value: kolmogorov_q((m + 0.12 + 0.11 / m) * d) })
}
